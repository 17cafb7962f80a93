import itertools
from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from ghzgame.qsim import (
    DIST_TOL,
    NORM_TOL,
    Basis,
    NormalizationError,
    Outcome,
    Qubit,
    StateVector,
    basis_vectors,
    equal_up_to_global_phase,
    ghz_state,
    joint_distribution,
    measure_qubit,
    outcome_probability,
    projector,
    sign_product,
)

R = 1 / sqrt(2)
PLUS_X = (R, R)
PLUS_Y = (R, 1j * R)
UP, DOWN = (1, 0), (0, 1)

# |→⟩_A ⊗ (|↑↑⟩ − |↓↓⟩)/√2
ARROW_BC = StateVector([PLUS_X[i] * (R if (j, k) == (0, 0) else -R if (j, k) == (1, 1) else 0)
                        for i, j, k in itertools.product(range(2), repeat=3)])
ARROW_CROSS_CROSS = StateVector.product(PLUS_X, PLUS_Y, PLUS_Y)

ALL_BASES = [dict(zip(Qubit, b)) for b in itertools.product(Basis, repeat=3)]
ORDERS = list(itertools.permutations(Qubit))


@st.composite
def states(draw):
    parts = draw(st.lists(st.floats(-1, 1, allow_nan=False), min_size=16, max_size=16))
    v = np.array(parts[:8]) + 1j * np.array(parts[8:])
    n = np.linalg.norm(v)
    if n < 1e-3:
        v = np.zeros(8, dtype=complex)
        v[draw(st.integers(0, 7))] = 1
        n = 1.0
    return StateVector(v / n)


qubits = st.sampled_from(list(Qubit))
bases = st.sampled_from(list(Basis))
uniforms = st.floats(0, 1, exclude_max=True)


def test_ghz_amplitudes():
    g = ghz_state()
    assert g[0] == 0.7071067811865476 + 0j
    assert g[7] == -0.7071067811865476 + 0j
    assert all(g[i] == 0 for i in range(1, 7))
    assert abs(g.norm_squared() - 1) <= NORM_TOL


def test_index_convention():
    # index = 4*bit(A) + 2*bit(B) + bit(C), up -> 0
    s = StateVector.product(DOWN, UP, UP)
    assert s[4] == 1
    s = StateVector.product(UP, UP, DOWN)
    assert s[1] == 1


def test_state_is_immutable():
    g = ghz_state()
    with pytest.raises(ValueError):
        g.amps[0] = 1


def test_rejects_bad_amplitudes():
    with pytest.raises(ValueError):
        StateVector([1, 0, 0])
    with pytest.raises(ValueError):
        StateVector([float("nan")] + [0] * 7)


def test_basis_vectors():
    xp, xm = basis_vectors(Basis.X)
    yp, ym = basis_vectors(Basis.Y)
    np.testing.assert_allclose(xp, [0.70710678, 0.70710678], atol=1e-8)
    np.testing.assert_allclose(xm, [0.70710678, -0.70710678], atol=1e-8)
    np.testing.assert_allclose(yp, [0.70710678, 0.70710678j], atol=1e-8)
    np.testing.assert_allclose(ym, [0.70710678, -0.70710678j], atol=1e-8)
    for v in (xp, xm, yp, ym):
        assert abs(np.vdot(v, v).real - 1) <= NORM_TOL


def test_plus_vectors_are_eigenvectors_with_eigenvalue_plus_one():
    pauli = {Basis.X: np.array([[0, 1], [1, 0]]), Basis.Y: np.array([[0, -1j], [1j, 0]])}
    for b, m in pauli.items():
        plus, minus = basis_vectors(b)
        np.testing.assert_allclose(m @ plus, plus, atol=1e-15)
        np.testing.assert_allclose(m @ minus, -minus, atol=1e-15)


def test_projectors_are_hermitian_idempotent():
    for q, b, o in itertools.product(Qubit, Basis, Outcome):
        p = projector(q, b, o)
        np.testing.assert_allclose(p @ p, p, atol=1e-15)
        np.testing.assert_allclose(p.conj().T, p, atol=1e-15)
    for q, b in itertools.product(Qubit, Basis):
        np.testing.assert_allclose(projector(q, b, Outcome.PLUS) + projector(q, b, Outcome.MINUS), np.eye(8), atol=1e-15)


@pytest.mark.parametrize("qubit,basis,outcome,expected", [
    (Qubit.A, Basis.X, Outcome.PLUS, 0.5),
    (Qubit.B, Basis.Y, Outcome.MINUS, 0.5),
])
def test_outcome_probability_on_ghz(qubit, basis, outcome, expected):
    assert outcome_probability(ghz_state(), qubit, basis, outcome) == pytest.approx(expected, abs=1e-12)


def test_outcome_probability_on_eigenstate():
    s = StateVector.product(PLUS_X, PLUS_Y, UP)
    assert outcome_probability(s, Qubit.A, Basis.X, Outcome.PLUS) == pytest.approx(1.0, abs=1e-12)


def test_outcome_probability_rejects_unnormalized():
    with pytest.raises(NormalizationError):
        outcome_probability(StateVector([1, 1, 0, 0, 0, 0, 0, 0]), Qubit.A, Basis.X, Outcome.PLUS)


def test_measure_reproduces_bc_state():
    outcome, post = measure_qubit(ghz_state(), Qubit.A, Basis.X, 0.2)
    assert outcome is Outcome.PLUS
    assert equal_up_to_global_phase(post, ARROW_BC, 1e-12)


def test_measure_reproduces_c_state():
    outcome, post = measure_qubit(ARROW_BC, Qubit.B, Basis.Y, 0.3)
    assert outcome is Outcome.PLUS
    assert equal_up_to_global_phase(post, ARROW_CROSS_CROSS, 1e-12)


@pytest.mark.parametrize("u", [0.0, 0.5, 0.999999])
def test_measure_on_eigenstate_is_certain(u):
    outcome, post = measure_qubit(ARROW_CROSS_CROSS, Qubit.C, Basis.Y, u)
    assert outcome is Outcome.PLUS
    assert equal_up_to_global_phase(post, ARROW_CROSS_CROSS, 1e-12)


def test_measure_threshold():
    # P(+1) = 0.5 on GHZ (up to rounding), so the draw picks the side of the threshold
    assert measure_qubit(ghz_state(), Qubit.A, Basis.X, 0.4999)[0] is Outcome.PLUS
    assert measure_qubit(ghz_state(), Qubit.A, Basis.X, 0.5001)[0] is Outcome.MINUS


def test_measure_never_selects_impossible_branch():
    u = np.nextafter(1.0, 0.0)
    outcome, post = measure_qubit(ARROW_CROSS_CROSS, Qubit.C, Basis.Y, u)
    assert outcome is Outcome.PLUS and post.is_normalized()


@pytest.mark.parametrize("u", [-0.1, 1.0, 1.5])
def test_measure_rejects_u_out_of_range(u):
    with pytest.raises(ValueError):
        measure_qubit(ghz_state(), Qubit.A, Basis.X, u)


def test_global_phase_examples():
    g = ghz_state()
    assert equal_up_to_global_phase(g, StateVector(-g.amps), 1e-12)
    assert equal_up_to_global_phase(g, g, 1e-12)
    assert equal_up_to_global_phase(g, StateVector(1j * g.amps), 1e-12)
    assert not equal_up_to_global_phase(g, ARROW_BC, 1e-12)
    # frozen from the brute-force overlap: |<GHZ|→,BC>| = 1/sqrt(2)
    assert abs(np.vdot(g.amps, ARROW_BC.amps)) == pytest.approx(0.7071067811865476, abs=1e-12)


# Frozen from tests/brute.py (explicit amplitude expansion).
XXX_EXPECTED = {(1, 1, -1): 0.25, (1, -1, 1): 0.25, (-1, 1, 1): 0.25, (-1, -1, -1): 0.25}
XYY_EXPECTED = {(1, 1, 1): 0.25, (1, -1, -1): 0.25, (-1, 1, -1): 0.25, (-1, -1, 1): 0.25}


def _as_int_keys(dist):
    return {tuple(int(o) for o in k): v for k, v in dist.items()}


@pytest.mark.parametrize("bases,expected", [("XXX", XXX_EXPECTED), ("XYY", XYY_EXPECTED)])
def test_joint_distribution_frozen(bases, expected):
    dist = _as_int_keys(joint_distribution(ghz_state(), dict(zip(Qubit, map(Basis, bases)))))
    for key in itertools.product((1, -1), repeat=3):
        assert dist[key] == pytest.approx(expected.get(key, 0.0), abs=DIST_TOL)


def test_joint_distribution_product_eigenstate():
    dist = _as_int_keys(joint_distribution(ARROW_CROSS_CROSS, {Qubit.A: Basis.X, Qubit.B: Basis.Y, Qubit.C: Basis.Y}))
    assert dist[1, 1, 1] == pytest.approx(1.0, abs=DIST_TOL)


@pytest.mark.parametrize("bases", ["".join(b) for b in itertools.product("XY", repeat=3)])
def test_joint_distribution_matches_brute_force_on_ghz(bases):
    dist = _as_int_keys(joint_distribution(ghz_state(), dict(zip(Qubit, map(Basis, bases)))))
    ref = brute.joint_distribution(brute.GHZ, bases)
    for key in ref:
        assert dist[key] == pytest.approx(ref[key], abs=DIST_TOL)


def test_joint_distribution_rejects_bad_order():
    with pytest.raises(ValueError):
        joint_distribution(ghz_state(), ALL_BASES[0], order=(Qubit.A, Qubit.A, Qubit.B))


@pytest.mark.parametrize("bases,sign", [("XXX", -1), ("XYY", 1), ("YXY", 1), ("YYX", 1)])
def test_ghz_parity_law(bases, sign):
    for order in ORDERS:
        dist = joint_distribution(ghz_state(), dict(zip(Qubit, map(Basis, bases))), order)
        assert sum(p for k, p in dist.items() if sign_product(k) == sign) == pytest.approx(1.0, abs=DIST_TOL)


@pytest.mark.parametrize("bases", ALL_BASES, ids=lambda b: "".join(v.value for v in b.values()))
def test_no_signaling_marginals_on_ghz(bases):
    dist = joint_distribution(ghz_state(), bases)
    for pos in range(3):
        marginal = sum(p for k, p in dist.items() if k[pos] is Outcome.PLUS)
        assert marginal == pytest.approx(0.5, abs=DIST_TOL)


@settings(max_examples=60, deadline=None)
@given(states(), st.sampled_from(ALL_BASES))
def test_order_independence(state, bases):
    ref = joint_distribution(state, bases, ORDERS[0])
    assert sum(ref.values()) == pytest.approx(1.0, abs=1e-12)
    for order in ORDERS[1:]:
        dist = joint_distribution(state, bases, order)
        for k in ref:
            assert dist[k] == pytest.approx(ref[k], abs=DIST_TOL)


@settings(max_examples=60, deadline=None)
@given(states(), st.sampled_from(ALL_BASES))
def test_joint_distribution_matches_brute_force(state, bases):
    dist = _as_int_keys(joint_distribution(state, bases))
    ref = brute.joint_distribution([complex(a) for a in state.amps], "".join(b.value for b in bases.values()))
    for k in ref:
        assert dist[k] == pytest.approx(ref[k], abs=DIST_TOL)


@settings(max_examples=100, deadline=None)
@given(states(), qubits, bases)
def test_born_completeness(state, qubit, basis):
    total = sum(outcome_probability(state, qubit, basis, o) for o in Outcome)
    assert total == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(states(), qubits, bases, uniforms, uniforms)
def test_measurement_normalizes_and_is_idempotent(state, qubit, basis, u1, u2):
    o1, s1 = measure_qubit(state, qubit, basis, u1)
    assert abs(s1.norm_squared() - 1) <= NORM_TOL
    o2, s2 = measure_qubit(s1, qubit, basis, u2)
    assert o2 is o1
    assert equal_up_to_global_phase(s1, s2, 1e-12)


@settings(max_examples=60, deadline=None)
@given(states(), qubits, bases, uniforms)
def test_outcome_rule_follows_threshold(state, qubit, basis, u):
    p = outcome_probability(state, qubit, basis, Outcome.PLUS)
    outcome, _ = measure_qubit(state, qubit, basis, u)
    if 1e-12 < p < 1 - 1e-12:
        assert (outcome is Outcome.PLUS) == (u < p)
