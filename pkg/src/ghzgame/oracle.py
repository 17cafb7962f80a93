"""Exhaustive classical analysis of the four testimonies.

Everything here is exact enumeration over tiny spaces: 64 colorings of the six
robber sides, and 64 deterministic answering strategies.

Shared randomness does not help a classical team. A randomized strategy is a
probability mixture of deterministic ones, and the pass probability is linear
in the mixture weights, so it never exceeds the best deterministic value.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Mapping, Sequence

from .game import (
    GUARDS,
    ROBBERS,
    Color,
    Robber,
    Side,
    question_for,
    questions_for,
    required_parity,
    statement,
    verify,
)

# Canonical side order. Coloring number n assigns GREEN to side i iff bit
# (5 - i) of n is set, so index 0 is all red and index 63 all green.
SIDES: tuple[tuple[Robber, Side], ...] = tuple(
    (r, s) for r in ROBBERS for s in (Side.FRONT, Side.BACK)
)


@dataclass(frozen=True)
class Coloring:
    colors: tuple[Color, ...]

    def __post_init__(self):
        if len(self.colors) != len(SIDES):
            raise ValueError(f"a coloring assigns all {len(SIDES)} sides")

    @classmethod
    def from_mapping(cls, colors: Mapping[tuple[Robber, Side], Color]) -> Coloring:
        return cls(tuple(Color(colors[s]) for s in SIDES))

    @classmethod
    def from_index(cls, n: int) -> Coloring:
        if not 0 <= n < 2 ** len(SIDES):
            raise ValueError(f"coloring index out of range: {n}")
        bits = format(n, f"0{len(SIDES)}b")
        return cls(tuple(Color.GREEN if b == "1" else Color.RED for b in bits))

    @property
    def index(self) -> int:
        return int("".join("1" if c is Color.GREEN else "0" for c in self.colors), 2)

    def __getitem__(self, side: tuple[Robber, Side]) -> Color:
        robber, s = side
        return self.colors[SIDES.index((Robber(robber), Side(s)))]

    def as_mapping(self) -> dict[tuple[Robber, Side], Color]:
        return dict(zip(SIDES, self.colors))

    def signs(self) -> tuple[int, ...]:
        return tuple(c.sign for c in self.colors)

    def short(self) -> str:
        """Six letters, front then back for A, B, C (e.g. ``GRGRGR``)."""
        return "".join("R" if c is Color.RED else "G" for c in self.colors)


@dataclass(frozen=True)
class DeterministicStrategy:
    """Each suspect's answer as a function of their own question only."""

    table: Mapping[Robber, Mapping[Side, Color]]

    def __post_init__(self):
        for r in ROBBERS:
            if set(self.table.get(r, {})) != set(Side):
                raise ValueError(f"strategy for {r.value} must cover both sides")

    def answer(self, robber: Robber, side: Side) -> Color:
        return self.table[Robber(robber)][Side(side)]

    def answers_for(self, guard: int) -> dict[Robber, Color]:
        return {r: self.answer(r, q) for r, q in questions_for(guard).items()}

    def passed_guards(self) -> frozenset[int]:
        return frozenset(g for g in GUARDS if verify(g, self.answers_for(g)))

    def to_coloring(self) -> Coloring:
        return Coloring(tuple(self.answer(r, s) for r, s in SIDES))

    @classmethod
    def from_coloring(cls, coloring: Coloring) -> DeterministicStrategy:
        return cls({r: {s: coloring[r, s] for s in Side} for r in ROBBERS})

    @classmethod
    def parse(cls, text: str) -> DeterministicStrategy:
        """Parse the six-letter ``Coloring.short`` form, e.g. ``GRGRGR``."""
        letters = text.strip().upper()
        if len(letters) != len(SIDES) or set(letters) - {"R", "G"}:
            raise ValueError(f"expected six letters from {{R, G}}, got {text!r}")
        return cls.from_coloring(Coloring(tuple(Color.RED if ch == "R" else Color.GREEN for ch in letters)))


def enumerate_colorings() -> list[Coloring]:
    """All 64 colorings in canonical order (see ``SIDES``)."""
    return [Coloring(c) for c in itertools.product((Color.RED, Color.GREEN), repeat=len(SIDES))]


def enumerate_strategies() -> list[DeterministicStrategy]:
    """All 4**3 strategies, built per suspect rather than via colorings."""
    per_suspect = [
        {Side.FRONT: f, Side.BACK: b}
        for f, b in itertools.product((Color.RED, Color.GREEN), repeat=2)
    ]
    return [
        DeterministicStrategy(dict(zip(ROBBERS, choice)))
        for choice in itertools.product(per_suspect, repeat=len(ROBBERS))
    ]


def satisfied_guards(coloring: Coloring) -> frozenset[int]:
    return frozenset(
        g for g in GUARDS
        if prod(coloring[r, question_for(g, r)].sign for r in ROBBERS) == required_parity(g)
    )


@dataclass(frozen=True)
class MaxSatisfiable:
    count: int
    witnesses: dict[frozenset[int], list[Coloring]]
    all_four: list[Coloring]


def max_satisfiable() -> MaxSatisfiable:
    by_subset: dict[frozenset[int], list[Coloring]] = {}
    for c in enumerate_colorings():
        by_subset.setdefault(satisfied_guards(c), []).append(c)
    count = max(len(s) for s in by_subset)
    triples = {frozenset(t): by_subset.get(frozenset(t), []) for t in itertools.combinations(GUARDS, 3)}
    return MaxSatisfiable(count=count, witnesses=triples, all_four=by_subset.get(frozenset(GUARDS), []))


@dataclass(frozen=True)
class ProductArgument:
    factors: tuple[tuple[int, Robber, Side], ...]
    multiplicity: dict[tuple[Robber, Side], int]
    joint_product: int | None
    required_product: int
    contradiction: bool


def product_argument() -> ProductArgument:
    """Multiply all twelve (guard, side) sign factors two ways.

    Grouped by side, every side occurs an even number of times, so the product is
    +1 for any coloring. Grouped by guard, it equals the product of the claimed
    parities, which is -1.
    """
    factors = tuple((g, r, s) for g in GUARDS for r, s in statement(g).seen)
    multiplicity = dict(Counter((r, s) for _, r, s in factors))
    # Symbolic: a product of x**k over sides is +1 for all x in {+1, -1} iff every k is even.
    even = all(multiplicity.get(side, 0) % 2 == 0 for side in SIDES)
    joint = 1 if even else None
    required = prod(required_parity(g) for g in GUARDS)
    return ProductArgument(
        factors=factors,
        multiplicity=multiplicity,
        joint_product=joint,
        required_product=required,
        contradiction=joint is not None and joint != required,
    )


def candidate_statements(robber: Robber, side: Side) -> tuple[int, ...]:
    """Guards whose testimony involves this side of this robber."""
    return tuple(g for g in GUARDS if question_for(g, robber) == Side(side))


def statements_tested_by(questions: Mapping[Robber, Side]) -> tuple[int, ...]:
    """Guards whose three sides are all revealed by one question per suspect."""
    return tuple(g for g in GUARDS if all(questions[r] == question_for(g, r) for r in ROBBERS))


def ambiguity_cover(guard: int) -> frozenset[int]:
    """Every statement some suspect must guard against when ``guard`` is tested."""
    return frozenset(
        g for r in ROBBERS for g in candidate_statements(r, question_for(guard, r))
    )


@dataclass(frozen=True)
class ClassicalValue:
    value: Fraction
    witness: DeterministicStrategy
    witness_passes: frozenset[int]
    optimal: list[DeterministicStrategy] = field(repr=False)
    equivalent_to_colorings: bool = True


def strategy_value(strategy: DeterministicStrategy, weights: Mapping[int, Fraction] | None = None) -> Fraction:
    weights = _guard_weights(weights)
    passed = strategy.passed_guards()
    return sum((weights[g] for g in passed), Fraction(0))


def _guard_weights(weights: Mapping[int, Fraction] | None) -> dict[int, Fraction]:
    if weights is None:
        return {g: Fraction(1, len(GUARDS)) for g in GUARDS}
    w = {g: Fraction(weights.get(g, 0)) for g in GUARDS}
    if sum(w.values()) != 1 or any(x < 0 for x in w.values()):
        raise ValueError("guard weights must be a probability distribution over guards 1-4")
    return w


def classical_game_value(weights: Mapping[int, Fraction] | None = None) -> ClassicalValue:
    """Best pass probability over deterministic strategies (uniform guard by default)."""
    strategies = enumerate_strategies()
    values = [strategy_value(s, weights) for s in strategies]
    best = max(values)
    optimal = [s for s, v in zip(strategies, values) if v == best]

    colorings = [s.to_coloring() for s in strategies]
    equivalent = (
        len(set(colorings)) == len(colorings) == len(enumerate_colorings())
        and all(s.passed_guards() == satisfied_guards(c) for s, c in zip(strategies, colorings))
    )
    return ClassicalValue(
        value=best,
        witness=optimal[0],
        witness_passes=optimal[0].passed_guards(),
        optimal=optimal,
        equivalent_to_colorings=equivalent,
    )


def best_classical_strategy() -> DeterministicStrategy:
    return classical_game_value().witness


def named_witnesses() -> dict[str, Coloring]:
    """The two explicit colorings used to show any three testimonies are consistent."""
    red_backs = Coloring.from_mapping(
        {(r, s): Color.RED if s is Side.BACK else Color.GREEN for r, s in SIDES}
    )
    a_green = Coloring.from_mapping(
        {
            (r, s): Color.GREEN if (r is Robber.A or s is Side.FRONT) else Color.RED
            for r, s in SIDES
        }
    )
    return {"red_backs_green_fronts": red_backs, "A_green_BC_green_front_red_back": a_green}


def all_question_triples() -> list[dict[Robber, Side]]:
    return [dict(zip(ROBBERS, t)) for t in itertools.product(Side, repeat=len(ROBBERS))]


def mixed_value_bound(mixture: Sequence[tuple[Fraction, DeterministicStrategy]]) -> Fraction:
    """Pass probability of a shared-randomness mixture of deterministic strategies."""
    total = sum((w for w, _ in mixture), Fraction(0))
    if total != 1:
        raise ValueError("mixture weights must sum to 1")
    return sum((w * strategy_value(s) for w, s in mixture), Fraction(0))
