#!/usr/bin/env python3
"""Pass rates of the best classical table and the gadget strategy, per tested guard.

    python3 scripts/classical_vs_quantum.py --trials 20000 --seed 1
"""
import argparse

from ghzgame.game import GUARDS
from ghzgame.harness import SessionConfig, StrategyChoice, run_trials
from ghzgame.oracle import classical_game_value


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--trials", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    print(f"enumerated classical value: {classical_game_value().value}")
    print(f"{'strategy':<16}{'overall':>10}{'95% CI':>22}" + "".join(f"{'g' + str(g):>8}" for g in GUARDS))
    for label in ("classical:best", "quantum"):
        stats = run_trials(SessionConfig(seed=args.seed, trials=args.trials, strategy=StrategyChoice.parse(label)))
        lo, hi = stats.pass_interval()
        per_guard = "".join(f"{stats.guard_pass_rate(g):>8.3f}" for g in GUARDS)
        print(f"{label:<16}{stats.pass_rate:>10.4f}{f'[{lo:.4f}, {hi:.4f}]':>22}{per_guard}")


if __name__ == "__main__":
    main()
