#!/usr/bin/env python3
"""Run a session across separate processes on loopback and print the traffic audit."""
import argparse
import json

from ghzgame.harness import SessionConfig, StrategyChoice
from ghzgame.harness.distributed import run_distributed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--strategy", default="quantum")
    ap.add_argument("--capture-dir", default=None)
    args = ap.parse_args()

    cfg = SessionConfig(seed=args.seed, trials=args.trials, mode="distributed",
                        strategy=StrategyChoice.parse(args.strategy), capture_dir=args.capture_dir)
    result = run_distributed(cfg)
    print(result.stats.render())
    print(f"captures in {result.capture_dir}")
    print(json.dumps(result.audit.to_dict(), indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
