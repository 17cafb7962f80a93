"""Exact state-vector simulation of the three-qubit register shared by the suspects.

The register is a fixed 8-dimensional complex vector. Basis label
``(s_A, s_B, s_C)`` maps to index ``4*bit(s_A) + 2*bit(s_B) + bit(s_C)`` with
``bit(up) = 0`` and ``bit(down) = 1``.

Only single-qubit projective measurements in the X or Y basis are supported.
Randomness is never drawn here; callers pass a uniform number in ``[0, 1)``.
"""
from __future__ import annotations

import itertools
from enum import Enum
from math import sqrt
from typing import Iterable, Mapping, Sequence

import numpy as np

NORM_TOL = 1e-12
DIST_TOL = 1e-9

# Branch probabilities this close to 0 or 1 are snapped, so that a uniform draw
# just below 1.0 can never select a zero-probability outcome.
_SNAP = 1e-12

_INV_SQRT2 = sqrt(0.5)


class Qubit(str, Enum):
    A = "A"
    B = "B"
    C = "C"

    @property
    def position(self) -> int:
        return "ABC".index(self.value)


class Basis(str, Enum):
    X = "X"
    Y = "Y"


class Outcome(int, Enum):
    """Sign of a measurement result; ``PLUS`` is |→⟩ for X and |⊗⟩ for Y."""

    PLUS = 1
    MINUS = -1


class NormalizationError(ValueError):
    """A state handed to a measurement routine is not unit norm."""


class StateVector:
    """Immutable normalized 3-qubit state."""

    __slots__ = ("_amps",)

    def __init__(self, amps: Iterable[complex]):
        arr = np.array(list(amps) if not isinstance(amps, np.ndarray) else amps, dtype=complex)
        if arr.shape != (8,):
            raise ValueError(f"expected 8 amplitudes, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("amplitudes must be finite")
        arr.setflags(write=False)
        self._amps = arr

    @classmethod
    def _trusted(cls, arr: np.ndarray) -> StateVector:
        # Internal results: already an 8-vector of finite complex numbers.
        obj = cls.__new__(cls)
        arr.setflags(write=False)
        obj._amps = arr
        return obj

    @classmethod
    def product(cls, a: Sequence[complex], b: Sequence[complex], c: Sequence[complex]) -> StateVector:
        """Tensor product ``a ⊗ b ⊗ c`` of three single-qubit vectors."""
        return cls(np.kron(np.kron(a, b), c))

    @property
    def amps(self) -> np.ndarray:
        return self._amps

    def __getitem__(self, index: int) -> complex:
        return complex(self._amps[index])

    def norm_squared(self) -> float:
        return float(np.vdot(self._amps, self._amps).real)

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm_squared() - 1.0) <= tol

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return bool(np.array_equal(self._amps, other._amps))

    def __hash__(self) -> int:
        return hash(self._amps.tobytes())

    def __repr__(self) -> str:
        terms = [
            f"{a:.6g}|{''.join('↑↓'[int(ch)] for ch in format(i, '03b'))}⟩"
            for i, a in enumerate(self._amps)
            if abs(a) > 1e-15
        ]
        return "StateVector(" + " + ".join(terms) + ")"


def _ghz() -> StateVector:
    amps = np.zeros(8, dtype=complex)
    amps[0] = _INV_SQRT2
    amps[7] = -_INV_SQRT2
    return StateVector(amps)


_GHZ = _ghz()


def ghz_state() -> StateVector:
    """``(|↑↑↑⟩ − |↓↓↓⟩)/√2``."""
    return _GHZ


_BASIS_VECTORS = {
    Basis.X: (
        np.array([1, 1], dtype=complex) * _INV_SQRT2,
        np.array([1, -1], dtype=complex) * _INV_SQRT2,
    ),
    Basis.Y: (
        np.array([1, 1j], dtype=complex) * _INV_SQRT2,
        np.array([1, -1j], dtype=complex) * _INV_SQRT2,
    ),
}


def basis_vectors(basis: Basis) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(plus, minus)`` single-qubit eigenvectors for ``basis``."""
    plus, minus = _BASIS_VECTORS[Basis(basis)]
    return plus.copy(), minus.copy()


def _vector(basis: Basis, outcome: Outcome) -> np.ndarray:
    plus, minus = _BASIS_VECTORS[basis]
    return plus if outcome is Outcome.PLUS else minus


def _build_projectors() -> dict[tuple[Qubit, Basis, Outcome], np.ndarray]:
    eye = np.eye(2, dtype=complex)
    out = {}
    for q, b, o in itertools.product(Qubit, Basis, Outcome):
        v = _vector(b, o)
        local = np.outer(v, v.conj())
        factors = [eye, eye, eye]
        factors[q.position] = local
        out[q, b, o] = np.kron(np.kron(factors[0], factors[1]), factors[2])
    return out


_PROJECTORS = _build_projectors()


def projector(qubit: Qubit, basis: Basis, outcome: Outcome) -> np.ndarray:
    """8x8 projector onto ``outcome`` of ``basis`` on ``qubit`` (identity elsewhere)."""
    return _PROJECTORS[Qubit(qubit), Basis(basis), Outcome(outcome)].copy()


def _coerce(enum_cls, value):
    return value if isinstance(value, enum_cls) else enum_cls(value)


def _require_normalized(state: StateVector) -> None:
    if not state.is_normalized():
        raise NormalizationError(f"state has squared norm {state.norm_squared()!r}, expected 1")


def _branch(state: StateVector, qubit: Qubit, basis: Basis, outcome: Outcome) -> tuple[float, np.ndarray]:
    projected = _PROJECTORS[qubit, basis, outcome] @ state.amps
    return float(np.vdot(projected, projected).real), projected


def outcome_probability(state: StateVector, qubit: Qubit, basis: Basis, outcome: Outcome) -> float:
    """Born-rule probability of ``outcome`` when ``qubit`` is measured in ``basis``."""
    _require_normalized(state)
    p, _ = _branch(state, _coerce(Qubit, qubit), _coerce(Basis, basis), _coerce(Outcome, outcome))
    return min(max(p, 0.0), 1.0)


def measure_qubit(state: StateVector, qubit: Qubit, basis: Basis, u: float) -> tuple[Outcome, StateVector]:
    """Measure one qubit and collapse.

    The outcome is ``PLUS`` iff ``u < P(PLUS)``. The post-measurement state is
    the projection divided by its own norm.
    """
    if not 0.0 <= u < 1.0:
        raise ValueError(f"u must lie in [0, 1), got {u!r}")
    _require_normalized(state)
    qubit, basis = _coerce(Qubit, qubit), _coerce(Basis, basis)
    p_plus, proj_plus = _branch(state, qubit, basis, Outcome.PLUS)
    if p_plus >= 1.0 - _SNAP or (p_plus > _SNAP and u < p_plus):
        outcome, projected, p = Outcome.PLUS, proj_plus, p_plus
    else:
        outcome = Outcome.MINUS
        p, projected = _branch(state, qubit, basis, Outcome.MINUS)
    return outcome, StateVector._trusted(projected / sqrt(p))


def collapse(state: StateVector, qubit: Qubit, basis: Basis, outcome: Outcome) -> tuple[float, StateVector | None]:
    """Probability of a chosen outcome and the renormalized state (``None`` if impossible)."""
    _require_normalized(state)
    p, projected = _branch(state, _coerce(Qubit, qubit), _coerce(Basis, basis), _coerce(Outcome, outcome))
    if p <= _SNAP:
        return 0.0, None
    return p, StateVector._trusted(projected / sqrt(p))


def joint_distribution(
    state: StateVector,
    bases: Mapping[Qubit, Basis],
    order: Sequence[Qubit] = (Qubit.A, Qubit.B, Qubit.C),
) -> dict[tuple[Outcome, Outcome, Outcome], float]:
    """Exact outcome distribution for measuring all three qubits.

    Computed by sequential collapse in ``order``; the keys are always
    ``(sign_A, sign_B, sign_C)`` regardless of processing order.
    """
    _require_normalized(state)
    order = tuple(Qubit(q) for q in order)
    if sorted(order) != sorted(Qubit):
        raise ValueError(f"order must be a permutation of A, B, C, got {order}")
    bases = {Qubit(q): Basis(b) for q, b in bases.items()}

    dist = {key: 0.0 for key in itertools.product(Outcome, repeat=3)}

    def walk(current: StateVector, depth: int, prob: float, signs: dict[Qubit, Outcome]) -> None:
        if depth == 3:
            dist[signs[Qubit.A], signs[Qubit.B], signs[Qubit.C]] += prob
            return
        q = order[depth]
        for o in Outcome:
            p, nxt = collapse(current, q, bases[q], o)
            if nxt is not None:
                walk(nxt, depth + 1, prob * p, {**signs, q: o})

    walk(state, 0, 1.0, {})
    return dist


def sign_product(outcomes: Iterable[Outcome | int]) -> int:
    result = 1
    for o in outcomes:
        result *= int(o)
    return result


def equal_up_to_global_phase(a: StateVector, b: StateVector, tol: float = NORM_TOL) -> bool:
    """True iff ``‖a − c·b‖ ≤ tol`` for some unit-modulus ``c``."""
    overlap = np.vdot(b.amps, a.amps)
    c = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(a.amps - c * b.amps)) <= tol
