import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghzgame.game import GUARDS, ROBBERS, Color, Robber, Side, question_for, verify
from ghzgame.qsim import Basis, Outcome, Qubit, StateVector, equal_up_to_global_phase, joint_distribution, ghz_state
from ghzgame.strategy import (
    DEFAULT_MAPPING,
    AgentHandle,
    Button,
    ProtocolViolation,
    SharedRegister,
    basis_for_question,
    button_for_question,
    color_for_outcome,
    quantum_answer,
    quantum_play,
)

R = 2 ** -0.5


def test_side_to_basis():
    assert basis_for_question(Side.FRONT) is Basis.Y
    assert basis_for_question(Side.BACK) is Basis.X
    assert {basis_for_question(s) for s in Side} == set(Basis)


def test_buttons():
    assert button_for_question(Side.FRONT) is Button.LOCK
    assert button_for_question(Side.BACK) is Button.UNLOCK


def test_outcome_to_color():
    assert color_for_outcome(Outcome.PLUS) is Color.RED
    assert color_for_outcome(Outcome.MINUS) is Color.GREEN
    for o in Outcome:
        assert color_for_outcome(o).sign == int(o)


def test_mapping_is_read_only():
    with pytest.raises(TypeError):
        DEFAULT_MAPPING.side_to_button[Side.FRONT] = Button.UNLOCK


class Scripted:
    """Device stand-in that hands out fixed uniforms and records calls."""

    def __init__(self, uniforms):
        self.register = SharedRegister(iter(uniforms).__next__)
        self.calls = []

    def measure(self, qubit, basis):
        self.calls.append((qubit, basis))
        return self.register.measure(qubit, basis)


def test_worked_example_guard_one():
    dev = Scripted([0.2, 0.3, 0.9])
    a, b, c = (AgentHandle(r) for r in ROBBERS)

    assert quantum_answer(a, question_for(1, Robber.A), dev) is Color.RED
    arrow_bc = StateVector([R * (R if (j, k) == (0, 0) else -R if (j, k) == (1, 1) else 0)
                            for i, j, k in itertools.product(range(2), repeat=3)])
    assert equal_up_to_global_phase(dev.register.state, arrow_bc, 1e-12)

    assert quantum_answer(b, question_for(1, Robber.B), dev) is Color.RED
    expected = StateVector.product((R, R), (R, 1j * R), (R, 1j * R))
    assert equal_up_to_global_phase(dev.register.state, expected, 1e-12)

    # C's result is certain now, whatever the draw
    assert quantum_answer(c, question_for(1, Robber.C), dev) is Color.RED
    assert dev.calls == [(Qubit.A, Basis.X), (Qubit.B, Basis.Y), (Qubit.C, Basis.Y)]


def test_handle_is_single_use():
    dev = Scripted([0.1, 0.2])
    h = AgentHandle(Robber.A)
    quantum_answer(h, Side.BACK, dev)
    with pytest.raises(ProtocolViolation):
        quantum_answer(h, Side.BACK, dev)


def test_register_refuses_second_measurement_of_a_qubit():
    reg = SharedRegister(iter([0.1, 0.2]).__next__)
    reg.measure(Qubit.A, Basis.X)
    with pytest.raises(ProtocolViolation):
        reg.measure(Qubit.A, Basis.Y)


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from(GUARDS),
    st.permutations(list(ROBBERS)),
    st.lists(st.floats(0, 1, exclude_max=True), min_size=3, max_size=3),
)
def test_quantum_answers_always_confirm_the_tested_guard(guard, order, uniforms):
    dev = SharedRegister(iter(uniforms).__next__)
    answers = {r: quantum_answer(AgentHandle(r), question_for(guard, r), dev) for r in order}
    assert verify(guard, answers)


@pytest.mark.parametrize("guard", GUARDS)
def test_each_answer_is_fifty_fifty(guard):
    bases = {Qubit(r.value): basis_for_question(question_for(guard, r)) for r in ROBBERS}
    dist = joint_distribution(ghz_state(), bases)
    for pos in range(3):
        p_red = sum(p for k, p in dist.items() if color_for_outcome(k[pos]) is Color.RED)
        assert p_red == pytest.approx(0.5, abs=1e-9)


def test_play_records_basis_and_outcome():
    dev = SharedRegister(iter([0.7]).__next__)
    play = quantum_play(AgentHandle(Robber.B), Side.FRONT, dev)
    assert play.basis is Basis.Y
    assert play.color is color_for_outcome(play.outcome)
