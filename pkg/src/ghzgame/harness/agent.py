"""One suspect in a sealed room.

The agent talks to exactly two peers: the referee, who sends ASKs about the suspect's
own suit, and the device, which answers MEASUREs about the suspect's own qubit.
Nothing from the other suspects ever reaches it.
"""
from __future__ import annotations

import logging

from ..game import Robber, Side
from ..qsim import Outcome
from ..strategy import basis_for_question, color_for_outcome
from .config import StrategyChoice
from .wire import BAD_MESSAGE, DUP, ROLE, TIMEOUT, Capture, Channel, ProtocolError, message

log = logging.getLogger(__name__)


class Agent:
    def __init__(
        self,
        suspect: Robber,
        strategy: StrategyChoice,
        referee: Channel,
        device: Channel | None,
        outcome_timeout: float = 5.0,
    ):
        self.suspect = Robber(suspect)
        self.strategy = strategy
        self.referee = referee
        self.device = device
        self.outcome_timeout = outcome_timeout
        self._last_trial: int | None = None

    def _measure(self, trial: int, side: Side) -> tuple[str, int]:
        basis = basis_for_question(side)
        self.device.send(message("MEASURE", trial=trial, suspect=self.suspect.value, basis=basis.value))
        while True:
            reply = self.device.recv(timeout=self.outcome_timeout)
            if reply is None:
                raise ConnectionError("device closed the connection")
            if reply.get("trial") != trial:
                continue  # a late reply to an aborted trial
            if reply["type"] == "ERROR":
                raise ProtocolError(f"device refused: {reply['code']} {reply['detail']}")
            if reply["type"] == "OUTCOME" and reply["suspect"] == self.suspect.value:
                return basis.value, int(reply["sign"])

    def handle_ask(self, msg: dict) -> dict:
        trial = int(msg["trial"])
        if msg["suspect"] != self.suspect.value:
            return message("ERROR", code=ROLE, detail=f"agent {self.suspect.value} got ASK for {msg['suspect']}",
                           trial=trial)
        # Trials arrive in increasing order, so only the latest index is remembered.
        if self._last_trial is not None and trial <= self._last_trial:
            return message("ERROR", code=DUP, detail=f"already asked in trial {trial}", trial=trial)
        self._last_trial = trial
        try:
            side = Side(msg["side"])
        except ValueError as exc:
            return message("ERROR", code=BAD_MESSAGE, detail=str(exc), trial=trial)

        if not self.strategy.is_quantum:
            color = self.strategy.table.answer(self.suspect, side)
            return message("ANSWER", trial=trial, suspect=self.suspect.value, color=color.value)
        try:
            basis, sign = self._measure(trial, side)
        except TimeoutError as exc:
            return message("ERROR", code=TIMEOUT, detail=str(exc), trial=trial, suspect=self.suspect.value)
        except ProtocolError as exc:
            return message("ERROR", code=DUP, detail=str(exc), trial=trial, suspect=self.suspect.value)
        color = color_for_outcome(Outcome(sign))
        return message(
            "ANSWER", trial=trial, suspect=self.suspect.value, color=color.value, basis=basis, sign=sign
        )

    def run(self) -> None:
        while True:
            try:
                msg = self.referee.recv()
            except ProtocolError as exc:
                self.referee.send(message("ERROR", code=BAD_MESSAGE, detail=str(exc)))
                continue
            if msg is None:
                return
            if msg["type"] == "ASK":
                self.referee.send(self.handle_ask(msg))
            else:
                self.referee.send(message("ERROR", code=BAD_MESSAGE, detail=f"unexpected {msg['type']}"))


def agent_run(
    suspect: Robber,
    strategy: StrategyChoice,
    referee_address: tuple[str, int],
    device_address: tuple[str, int] | None,
    session: str,
    capture: str | None = None,
    outcome_timeout: float = 5.0,
) -> None:
    """Connect to the referee (and device, for gadget users) and answer until the referee hangs up."""
    suspect = Robber(suspect)
    cap = Capture(capture)
    device = None
    if strategy.is_quantum:
        device = Channel.connect(device_address, "device", cap)
        device.send(message("HELLO", role=suspect.value, session=session))
    referee = Channel.connect(referee_address, "referee", cap)
    referee.send(message("HELLO", role=suspect.value, session=session))
    try:
        Agent(suspect, strategy, referee, device, outcome_timeout).run()
    except OSError as exc:
        log.info("agent %s stopping: %s", suspect.value, exc)
    finally:
        referee.close()
        if device is not None:
            device.close()
        cap.close()
