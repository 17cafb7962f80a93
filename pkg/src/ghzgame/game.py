"""Classical rules of the interrogation.

Colors are encoded as signs (red = +1, green = -1). Each guard's testimony is a
parity claim about the three robber sides that guard saw: guards 1-3 claim the
product of the signs is +1 (an even number of green sides, equivalently an odd
number of red ones), guard 4 claims it is -1.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import prod
from types import MappingProxyType
from typing import Mapping


class Color(str, Enum):
    RED = "red"
    GREEN = "green"

    @property
    def sign(self) -> int:
        return 1 if self is Color.RED else -1

    @classmethod
    def from_sign(cls, sign: int) -> Color:
        if sign == 1:
            return cls.RED
        if sign == -1:
            return cls.GREEN
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")


class Side(str, Enum):
    FRONT = "front"
    BACK = "back"


class Robber(str, Enum):
    A = "A"
    B = "B"
    C = "C"


_SIGN = {Color.RED: 1, Color.GREEN: -1}

GUARDS: tuple[int, ...] = (1, 2, 3, 4)
ROBBERS: tuple[Robber, ...] = (Robber.A, Robber.B, Robber.C)

_F, _B = Side.FRONT, Side.BACK
_TABLE = {
    1: (_B, _F, _F),
    2: (_F, _B, _F),
    3: (_F, _F, _B),
    4: (_B, _B, _B),
}

VIEW_TABLE: Mapping[tuple[int, Robber], Side] = MappingProxyType(
    {(g, r): row[i] for g, row in _TABLE.items() for i, r in enumerate(ROBBERS)}
)

AnswerSet = Mapping[Robber, Color]


def _check_guard(guard: int) -> int:
    if guard not in _TABLE:
        raise ValueError(f"guard must be one of {GUARDS}, got {guard!r}")
    return guard


@dataclass(frozen=True)
class Statement:
    guard: int
    seen: tuple[tuple[Robber, Side], ...]
    parity: int

    def holds(self, colors: Mapping[tuple[Robber, Side], Color]) -> bool:
        return prod(colors[side].sign for side in self.seen) == self.parity


def view_table() -> Mapping[tuple[int, Robber], Side]:
    """Which side of each robber each guard saw, keyed by ``(guard, robber)``."""
    return VIEW_TABLE


def question_for(guard: int, robber: Robber) -> Side:
    """The side the police ask ``robber`` about when testing ``guard``."""
    # str-valued members hash like their values, so "A" and Robber.A share a key
    try:
        return VIEW_TABLE[guard, robber]
    except KeyError:
        _check_guard(guard)
        return VIEW_TABLE[guard, Robber(robber)]


def questions_for(guard: int) -> dict[Robber, Side]:
    return {r: question_for(guard, r) for r in ROBBERS}


def required_parity(guard: int) -> int:
    return -1 if _check_guard(guard) == 4 else 1


def statement(guard: int) -> Statement:
    seen = tuple((r, question_for(guard, r)) for r in ROBBERS)
    return Statement(guard=guard, seen=seen, parity=required_parity(guard))


def statements() -> tuple[Statement, ...]:
    return tuple(statement(g) for g in GUARDS)


def verify(guard: int, answers: AnswerSet) -> bool:
    """Do the three suspects' answers confirm ``guard``'s testimony?"""
    missing = set(ROBBERS) - set(answers)
    if missing:
        raise ValueError(f"missing answers for {sorted(m.value for m in missing)}")
    return prod(_SIGN[answers[r]] for r in ROBBERS) == required_parity(guard)


def red_count_is_odd(colors: Mapping[Robber, Color]) -> bool:
    """The story's phrasing of guards 1-3's testimony."""
    return sum(Color(c) is Color.RED for c in colors.values()) % 2 == 1


def green_count_is_even(colors: Mapping[Robber, Color]) -> bool:
    """The same testimony phrased by counting green sides."""
    return sum(Color(c) is Color.GREEN for c in colors.values()) % 2 == 0
