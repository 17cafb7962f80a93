"""The police: pick a guard, ask each suspect separately, compare with the testimony."""
from __future__ import annotations

import socket
import time
from dataclasses import dataclass

from ..game import ROBBERS, Color, Robber, question_for, verify
from .config import REFEREE_STREAM, SessionConfig, TrialStreams
from .stats import Stats, SuspectRecord, Transcript, append_log
from .wire import SESSION, SUSPECT_ROLES, Capture, Channel, ProtocolError, message


class SessionError(RuntimeError):
    """The session could not finish; ``stats`` holds what was completed."""

    def __init__(self, msg: str, stats: Stats, transcripts: list[Transcript]):
        super().__init__(msg)
        self.stats = stats
        self.transcripts = transcripts


@dataclass
class RefereeResult:
    stats: Stats
    transcripts: list[Transcript]


def accept_agents(
    srv: socket.socket, session: str, capture: Capture, timeout: float = 30.0
) -> dict[Robber, Channel]:
    """Wait for HELLO from each of A, B and C."""
    agents: dict[Robber, Channel] = {}
    deadline = time.monotonic() + timeout
    while len(agents) < len(ROBBERS):
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            missing = sorted(set(SUSPECT_ROLES) - {r.value for r in agents})
            raise TimeoutError(f"agents never connected: {missing}")
        srv.settimeout(remaining)
        sock, _ = srv.accept()
        sock.settimeout(None)
        chan = Channel(sock, "?", capture)
        hello = chan.recv(timeout=remaining)
        if hello is None or hello["type"] != "HELLO" or hello["role"] not in SUSPECT_ROLES:
            chan.close()
            continue
        if hello["session"] != session:
            chan.send(message("ERROR", code=SESSION, detail=f"expected session {session!r}"))
            chan.close()
            continue
        chan.peer = hello["role"]
        agents[Robber(hello["role"])] = chan
    return agents


def _collect(chan: Channel, trial: int, deadline: float) -> dict | None:
    """The agent's reply for ``trial``, or None on timeout. Stale replies are skipped."""
    while True:
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            return None
        try:
            msg = chan.recv(timeout=remaining)
        except TimeoutError:
            return None
        except ProtocolError:
            continue
        if msg is None:
            raise ConnectionError(f"agent {chan.peer} disconnected")
        if msg.get("trial") == trial and msg["type"] in ("ANSWER", "ERROR"):
            return msg


def play_trial(
    trial: int,
    guard: int,
    seed: int,
    agents: dict[Robber, Channel],
    device: Channel | None,
    agent_timeout: float,
) -> Transcript:
    asked_at = {}
    for r in ROBBERS:
        asked_at[r] = time.time()
        agents[r].send(message("ASK", trial=trial, suspect=r.value, side=question_for(guard, r).value))

    deadline = time.monotonic() + agent_timeout
    replies = {r: _collect(agents[r], trial, deadline) for r in ROBBERS}

    records = {}
    answers = {}
    problems = []
    for r in ROBBERS:
        reply = replies[r]
        answered = None
        color = basis = sign = None
        if reply is None:
            problems.append(f"{r.value}: timeout")
        elif reply["type"] == "ERROR":
            problems.append(f"{r.value}: {reply['code']} {reply['detail']}")
        else:
            answered = time.time()
            color = Color(reply["color"]).value
            basis, sign = reply.get("basis"), reply.get("sign")
            answers[r] = Color(color)
        records[r.value] = SuspectRecord(
            question=question_for(guard, r).value,
            basis=basis,
            outcome=sign,
            answer=color,
            asked_at=asked_at[r],
            answered_at=answered,
        )
    aborted = bool(problems)
    verdict = None if aborted else verify(guard, answers)
    if device is not None:
        device.send(message("VERDICT", trial=trial, guard=guard, consistent=verdict))
    return Transcript(
        trial=trial,
        guard=guard,
        seed=seed,
        suspects=records,
        verdict=verdict,
        aborted=aborted,
        abort_reason="; ".join(problems) or None,
    )


def referee_run(
    config: SessionConfig,
    srv: socket.socket,
    device_address: tuple[str, int] | None,
    capture: str | None = None,
    connect_timeout: float = 30.0,
) -> RefereeResult:
    """Run ``config.trials`` interrogations with agents connecting to ``srv``."""
    cap = Capture(capture)
    transcripts: list[Transcript] = []
    stats = Stats()
    device = None
    agents: dict[Robber, Channel] = {}
    streams = TrialStreams(config.seed, REFEREE_STREAM)
    try:
        if device_address is not None:
            device = Channel.connect(device_address, "device", cap, timeout=connect_timeout)
            device.send(message("HELLO", role="referee", session=config.session))
        agents = accept_agents(srv, config.session, cap, timeout=connect_timeout)
        for trial in range(config.trials):
            with streams.at(trial) as rng:
                guard = config.guard_policy.draw(rng)
            t = play_trial(trial, guard, config.seed, agents, device, config.agent_timeout)
            transcripts.append(t)
            stats.add(t)
            if config.log_path:
                append_log(config.log_path, [t])
    except (OSError, ConnectionError) as exc:
        raise SessionError(f"transport failure: {exc}", stats, transcripts) from exc
    finally:
        for chan in agents.values():
            chan.close()
        if device is not None:
            device.close()
        cap.close()
    return RefereeResult(stats, transcripts)
