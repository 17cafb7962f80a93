"""Acceptance gate: one test per numbered criterion, each at its stated tolerance."""
import itertools
import math
import time
from fractions import Fraction

import pytest

from ghzgame.game import GUARDS, ROBBERS, questions_for
from ghzgame.harness import GuardPolicy, SessionConfig, StrategyChoice, run_trials
from ghzgame.harness.distributed import run_distributed
from ghzgame.oracle import (
    ambiguity_cover,
    classical_game_value,
    enumerate_colorings,
    max_satisfiable,
    named_witnesses,
    product_argument,
    satisfied_guards,
    statements_tested_by,
)
from ghzgame.qsim import (
    Basis,
    Outcome,
    Qubit,
    StateVector,
    collapse,
    equal_up_to_global_phase,
    ghz_state,
    joint_distribution,
    outcome_probability,
)

R = 2 ** -0.5


def test_criterion_1_inconsistency(criterion):
    start = time.perf_counter()
    all_four = [c for c in enumerate_colorings() if satisfied_guards(c) == frozenset(GUARDS)]
    best = max(len(satisfied_guards(c)) for c in enumerate_colorings())
    ms = max_satisfiable()
    arg = product_argument()
    elapsed = time.perf_counter() - start
    ok = (not all_four and best == 3 and ms.count == 3 and not ms.all_four
          and arg.joint_product == 1 and arg.required_product == -1 and arg.contradiction
          and elapsed < 1.0)
    assert criterion(1, ok, f"all-four={len(all_four)} max={best} joint={arg.joint_product:+d} "
                            f"required={arg.required_product:+d} in {elapsed:.3f}s")


def test_criterion_2_witnesses(criterion):
    w = named_witnesses()
    first = satisfied_guards(w["red_backs_green_fronts"])
    second = satisfied_guards(w["A_green_BC_green_front_red_back"])
    ok = first == {1, 2, 3} and second == {2, 3, 4}
    assert criterion(2, ok, f"red-backs/green-fronts -> {sorted(first)}; A green, BC green/red -> {sorted(second)}")


def test_criterion_3_testability(criterion):
    tested = {g: statements_tested_by(questions_for(g)) for g in GUARDS}
    covers = {g: ambiguity_cover(g) for g in GUARDS}
    ok = all(tested[g] == (g,) for g in GUARDS) and all(c == {1, 2, 3, 4} for c in covers.values())
    assert criterion(3, ok, f"testable={ {g: list(t) for g, t in tested.items()} } cover=all four for every guard")


def test_criterion_4_quantum_guarantee(criterion):
    start = time.perf_counter()
    results = {g: run_trials(SessionConfig(seed=g, trials=10_000, guard_policy=GuardPolicy(g))) for g in GUARDS}
    elapsed = time.perf_counter() - start
    failures = {g: s.completed - s.passes for g, s in results.items()}
    ok = all(s.completed == 10_000 and s.pass_rate == 1.0 for s in results.values()) and elapsed < 5.0
    assert criterion(4, ok, f"failures per guard {failures} in {elapsed:.2f}s")


def test_criterion_5_projection_algebra(criterion):
    p_a, after_a = collapse(ghz_state(), Qubit.A, Basis.X, Outcome.PLUS)
    # |->_A (|uu> - |dd>)/sqrt2 on BC
    bc = StateVector([0.5, 0, 0, -0.5, 0.5, 0, 0, -0.5])
    p_b, after_b = collapse(after_a, Qubit.B, Basis.Y, Outcome.PLUS)
    c_state = StateVector.product((R, R), (R, 1j * R), (R, 1j * R))
    p_c = outcome_probability(after_b, Qubit.C, Basis.Y, Outcome.PLUS)
    ok = (equal_up_to_global_phase(after_a, bc, 1e-12)
          and equal_up_to_global_phase(after_b, c_state, 1e-12)
          and abs(p_c - 1.0) <= 1e-12)
    assert criterion(5, ok, f"P(A+)={p_a:.3f} P(B+|A+)={p_b:.3f} P(C red | both)={p_c:.15f}")


def test_criterion_6_parity_law(criterion):
    expected = {"XXX": -1, "XYY": 1, "YXY": 1, "YYX": 1}
    worst = 0.0
    ok = True
    for word, sign in expected.items():
        bases = dict(zip(Qubit, map(Basis, word)))
        dists = [joint_distribution(ghz_state(), bases, order) for order in itertools.permutations(Qubit)]
        for dist in dists:
            wrong = sum(p for k, p in dist.items() if math.prod(k) != sign)
            right = sum(p for k, p in dist.items() if math.prod(k) == sign)
            worst = max(worst, wrong, abs(right - 1))
            for key in dist:
                worst = max(worst, abs(dist[key] - dists[0][key]))
    ok = worst <= 1e-9
    assert criterion(6, ok, f"max deviation over 4 basis triples x 6 orders = {worst:.2e}")


def test_criterion_7_classical_value(criterion):
    value = classical_game_value().value
    n = 10_000
    stats = run_trials(SessionConfig(seed=0, trials=n, strategy=StrategyChoice.parse("classical:best")))
    band = 3 * math.sqrt(0.1875 / n)
    ok = value == Fraction(3, 4) and abs(stats.pass_rate - 0.75) <= band
    assert criterion(7, ok, f"enumerated={value} empirical={stats.pass_rate:.4f} band=±{band:.4f}")


def test_criterion_8_no_signaling(criterion):
    stats = run_trials(SessionConfig(seed=0, trials=40_000))
    worst = 0.0
    ok = True
    for g in GUARDS:
        n = stats.guard_trials[g]
        band = 3 * math.sqrt(0.25 / n)
        for r in ROBBERS:
            dev = abs(stats.red_frequency(r, g) - 0.5)
            worst = max(worst, dev / band)
            ok &= dev <= band
    ok &= stats.pass_rate == 1.0
    detail = f"guard counts {dict(sorted(stats.guard_trials.items()))}; worst |freq-0.5| = {worst:.2f} of 3σ"
    assert criterion(8, ok, detail)


@pytest.mark.slow
def test_criterion_9_distributed(criterion, tmp_path):
    start = time.perf_counter()
    result = run_distributed(SessionConfig(seed=0, trials=1000, mode="distributed", capture_dir=str(tmp_path)))
    elapsed = time.perf_counter() - start
    audit = result.audit
    ok = (result.stats.completed == 1000 and result.stats.pass_rate == 1.0
          and audit is not None and audit.ok and elapsed < 60.0)
    detail = (f"pass rate {result.stats.pass_rate} over {result.stats.completed}; audit "
              f"{'clean' if audit.ok else audit.violations[:3]}; orders {len(audit.orders)}; {elapsed:.1f}s")
    assert criterion(9, ok, detail)
