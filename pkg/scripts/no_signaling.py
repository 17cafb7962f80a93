#!/usr/bin/env python3
"""Each suspect's red frequency, split by which guard was tested.

If any row drifted from 1/2 with the guard, a suspect could tell which
statement the police picked. Also shows one classical suspect spoiling the
correlations of the other two.
"""
import argparse
import math

from ghzgame.game import GUARDS, ROBBERS, Robber
from ghzgame.harness import SessionConfig, StrategyChoice, run_trials


def table(stats):
    print("      " + "".join(f"{'g' + str(g):>10}" for g in GUARDS))
    for r in ROBBERS:
        print(f"  {r.value}:  " + "".join(f"{stats.red_frequency(r, g):>10.4f}" for g in GUARDS))
    band = max(3 * math.sqrt(0.25 / stats.guard_trials[g]) for g in GUARDS)
    print(f"  3-sigma band about 0.5: +/-{band:.4f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--trials", type=int, default=40_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    stats = run_trials(SessionConfig(seed=args.seed, trials=args.trials))
    print(f"all quantum: pass rate {stats.pass_rate}")
    table(stats)

    mixed = run_trials(SessionConfig(seed=args.seed, trials=args.trials,
                                     suspect_strategies={Robber.A: StrategyChoice.parse("classical:RRRRRR")}))
    print(f"\nA always red, B and C quantum: pass rate {mixed.pass_rate:.4f} (analytic 1/2)")


if __name__ == "__main__":
    main()
