"""The suspects' gadget strategy: question -> button -> basis, outcome -> color."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Callable, Mapping, Protocol

from .game import Color, Robber, Side
from .qsim import Basis, Outcome, Qubit, StateVector, ghz_state, measure_qubit


class Button(str, Enum):
    LOCK = "lock"
    UNLOCK = "unlock"


class ProtocolViolation(RuntimeError):
    """A suspect or device broke the one-question, one-measurement rule."""


@dataclass(frozen=True)
class QuestionMapping:
    # Front -> lock -> Y follows the worked solution; the story text swaps the
    # button labels, which changes nothing since only side -> basis matters.
    side_to_button: Mapping[Side, Button] = field(
        default_factory=lambda: MappingProxyType({Side.FRONT: Button.LOCK, Side.BACK: Button.UNLOCK})
    )
    button_to_basis: Mapping[Button, Basis] = field(
        default_factory=lambda: MappingProxyType({Button.LOCK: Basis.Y, Button.UNLOCK: Basis.X})
    )
    outcome_to_color: Mapping[Outcome, Color] = field(
        default_factory=lambda: MappingProxyType({Outcome.PLUS: Color.RED, Outcome.MINUS: Color.GREEN})
    )

    def basis(self, side: Side) -> Basis:
        return self.button_to_basis[self.side_to_button[side]]

    def color(self, outcome: Outcome) -> Color:
        return self.outcome_to_color[outcome]


DEFAULT_MAPPING = QuestionMapping()


def basis_for_question(side: Side) -> Basis:
    return DEFAULT_MAPPING.basis(side)


def button_for_question(side: Side) -> Button:
    return DEFAULT_MAPPING.side_to_button[side]


def color_for_outcome(outcome: Outcome | int) -> Color:
    return DEFAULT_MAPPING.color(outcome)


_QUBITS = {r: Qubit(r.value) for r in Robber}


def qubit_of(robber: Robber) -> Qubit:
    return _QUBITS[robber]


class MeasurementDevice(Protocol):
    def measure(self, qubit: Qubit, basis: Basis) -> Outcome: ...


class SharedRegister:
    """In-process stand-in for the three gadgets: one GHZ register per game.

    ``uniform`` supplies the random numbers consumed, one per measurement, in
    the order measurements arrive.
    """

    def __init__(self, uniform: Callable[[], float], state: StateVector | None = None):
        self._uniform = uniform
        self.state = ghz_state() if state is None else state
        self.measured: dict[Qubit, tuple[Basis, Outcome]] = {}

    def measure(self, qubit: Qubit, basis: Basis) -> Outcome:
        if qubit in self.measured:
            raise ProtocolViolation(f"qubit {Qubit(qubit).value} already measured this game")
        outcome, self.state = measure_qubit(self.state, qubit, basis, self._uniform())
        self.measured[Qubit(qubit)] = (Basis(basis), outcome)
        return outcome


@dataclass
class AgentHandle:
    """A suspect's single-use right to measure its own qubit."""

    suspect: Robber
    used: bool = False

    @property
    def qubit(self) -> Qubit:
        return qubit_of(self.suspect)


@dataclass(frozen=True)
class Play:
    side: Side
    basis: Basis | None
    outcome: Outcome | None
    color: Color


def quantum_play(handle: AgentHandle, side: Side, device: MeasurementDevice) -> Play:
    if handle.used:
        raise ProtocolViolation(f"suspect {handle.suspect.value} already answered this game")
    handle.used = True
    basis = basis_for_question(side)
    outcome = device.measure(handle.qubit, basis)
    return Play(side=side, basis=basis, outcome=outcome, color=color_for_outcome(outcome))


def quantum_answer(handle: AgentHandle, side: Side, device: MeasurementDevice) -> Color:
    """Press the button for ``side``, read the gadget, say the matching color."""
    return quantum_play(handle, side, device).color
