"""The gadget process: owns the entangled register, the only nonlocal element.

Agents connect, say HELLO with their suspect letter as role, and send MEASURE
requests; each gets an OUTCOME for its own qubit only. The referee connects
with role ``referee`` and sends VERDICT to retire a trial's register. The
session ends when the referee's connection closes.
"""
from __future__ import annotations

import logging
import socket
import threading
from dataclasses import dataclass, field

from ..qsim import Basis, Qubit, StateVector, ghz_state, measure_qubit
from .config import DEVICE_STREAM, TrialStreams
from .wire import (
    BAD_MESSAGE,
    DUP,
    ROLE,
    SUSPECT_ROLES,
    Capture,
    Channel,
    ProtocolError,
    listen,
    message,
)

log = logging.getLogger(__name__)


@dataclass
class TrialRegister:
    state: StateVector
    uniforms: list[float]
    measured: list[str] = field(default_factory=list)


class DeviceServer:
    def __init__(self, address: tuple[str, int], seed: int, capture: str | None = None):
        self.seed = seed
        self.streams = TrialStreams(seed, DEVICE_STREAM)
        self.capture = Capture(capture)
        self._srv = listen(address)
        self.address = self._srv.getsockname()
        self._trials: dict[int, TrialRegister] = {}
        self._retired: set[int] = set()
        self._lock = threading.Lock()
        self._done = threading.Event()
        self._threads: list[threading.Thread] = []

    def _register(self, trial: int) -> TrialRegister:
        reg = self._trials.get(trial)
        if reg is None:
            reg = TrialRegister(ghz_state(), self.streams.uniforms(trial))
            self._trials[trial] = reg
        return reg

    def handle_measure(self, role: str, msg: dict) -> dict:
        """Apply one MEASURE; returns the reply for the requesting agent."""
        suspect = msg["suspect"]
        if suspect not in SUSPECT_ROLES or suspect != role:
            return message("ERROR", code=ROLE, detail=f"{role} may not measure qubit {suspect!r}",
                           trial=msg.get("trial"))
        try:
            trial = int(msg["trial"])
            basis = Basis(msg["basis"])
        except (TypeError, ValueError) as exc:
            return message("ERROR", code=BAD_MESSAGE, detail=str(exc))
        # Per-trial mutual exclusion: arrival order under this lock is the order applied.
        with self._lock:
            if trial in self._retired:
                return message("ERROR", code=DUP, detail=f"trial {trial} already closed", trial=trial)
            reg = self._register(trial)
            if suspect in reg.measured:
                return message("ERROR", code=DUP, detail=f"qubit {suspect} already measured in trial {trial}",
                               trial=trial)
            u = reg.uniforms[len(reg.measured)]
            outcome, reg.state = measure_qubit(reg.state, Qubit(suspect), basis, u)
            reg.measured.append(suspect)
            return message("OUTCOME", trial=trial, suspect=suspect, sign=int(outcome))

    def retire(self, trial: int) -> None:
        with self._lock:
            self._trials.pop(trial, None)
            self._retired.add(trial)

    def _serve_connection(self, sock: socket.socket) -> None:
        chan = Channel(sock, "?", self.capture)
        role = None
        try:
            hello = chan.recv()
            if hello is None:
                return
            if hello["type"] != "HELLO" or hello["role"] not in SUSPECT_ROLES + ("referee",):
                chan.send(message("ERROR", code=ROLE, detail=f"bad handshake {hello!r}"))
                return
            role = chan.peer = hello["role"]
            while True:
                try:
                    msg = chan.recv()
                except ProtocolError as exc:
                    chan.send(message("ERROR", code=BAD_MESSAGE, detail=str(exc)))
                    continue
                if msg is None:
                    break
                if role == "referee":
                    if msg["type"] == "VERDICT":
                        self.retire(int(msg["trial"]))
                    continue
                if msg["type"] == "MEASURE":
                    chan.send(self.handle_measure(role, msg))
                else:
                    chan.send(message("ERROR", code=BAD_MESSAGE, detail=f"unexpected {msg['type']}"))
        except (OSError, ProtocolError) as exc:
            log.info("device connection %s dropped: %s", role, exc)
        finally:
            chan.close()
            if role == "referee":
                self._done.set()
                self._wake()

    def _wake(self) -> None:
        # Unblock accept() so serve_forever can notice the session ended.
        try:
            socket.create_connection(self.address, timeout=1).close()
        except OSError:
            pass

    def serve_forever(self) -> None:
        try:
            while not self._done.is_set():
                sock, _ = self._srv.accept()
                if self._done.is_set():
                    sock.close()
                    break
                t = threading.Thread(target=self._serve_connection, args=(sock,), daemon=True)
                t.start()
                self._threads.append(t)
        finally:
            self._srv.close()
            for t in self._threads:
                t.join(timeout=2)
            self.capture.close()

    def shutdown(self) -> None:
        self._done.set()
        self._wake()


def device_serve(address: tuple[str, int], seed: int, capture: str | None = None, announce=None) -> None:
    """Run the device until the referee disconnects.

    ``announce`` is called with the bound address once listening (useful with port 0).
    """
    server = DeviceServer(address, seed, capture)
    if announce is not None:
        announce(server.address)
    server.serve_forever()
