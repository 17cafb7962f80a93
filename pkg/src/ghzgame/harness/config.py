from __future__ import annotations

import os
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator, Literal, Mapping

import numpy as np

from ..game import GUARDS, Robber, Side
from ..oracle import DeterministicStrategy, best_classical_strategy
from ..strategy import AgentHandle, MeasurementDevice, Play, ProtocolViolation, quantum_play

U64_MAX = 2**64 - 1

# Per-trial random streams are keyed by (seed, trial, stream id).
REFEREE_STREAM = 0
DEVICE_STREAM = 1

ENDPOINT_ROLES = ("device", "referee")
ENV_PREFIX = "GHZGAME_"


class TrialStreams:
    """Per-trial substreams of one PCG64 sequence keyed by ``(seed, stream)``.

    Trial ``t`` starts at position ``t * STRIDE``, so what a trial draws never
    depends on which other trials ran, or in what order.
    """

    STRIDE = 2**32

    def __init__(self, seed: int, stream: int):
        self.seed = seed
        self.stream = stream
        self._bitgen = np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,)))
        self._origin = self._bitgen.state
        self._gen = np.random.Generator(self._bitgen)
        self._lock = threading.Lock()

    @contextmanager
    def at(self, trial: int) -> Iterator[np.random.Generator]:
        if trial < 0:
            raise ValueError(f"trial index must be non-negative, got {trial}")
        with self._lock:
            self._bitgen.state = self._origin
            self._bitgen.advance(trial * self.STRIDE)
            yield self._gen

    def uniforms(self, trial: int, n: int = 3) -> list[float]:
        with self.at(trial) as rng:
            return rng.random(n).tolist()


@dataclass(frozen=True)
class GuardPolicy:
    """Which guard the police test: always the same one, or uniformly at random."""

    fixed: int | None = None

    def __post_init__(self):
        if self.fixed is not None and self.fixed not in GUARDS:
            raise ValueError(f"guard must be one of {GUARDS}, got {self.fixed!r}")

    @classmethod
    def parse(cls, text: str) -> GuardPolicy:
        text = str(text).strip().lower()
        if text == "uniform":
            return cls()
        try:
            return cls(int(text))
        except ValueError:
            raise ValueError(f"guard policy must be 1-4 or 'uniform', got {text!r}") from None

    def draw(self, rng: np.random.Generator) -> int:
        if self.fixed is not None:
            return self.fixed
        return int(rng.integers(1, len(GUARDS) + 1))

    def __str__(self) -> str:
        return "uniform" if self.fixed is None else str(self.fixed)


@dataclass(frozen=True)
class StrategyChoice:
    """How one suspect answers: with the gadget, or from a fixed table."""

    kind: Literal["quantum", "classical"]
    table: DeterministicStrategy | None = None
    label: str = "quantum"

    @classmethod
    def parse(cls, text: str) -> StrategyChoice:
        text = text.strip()
        if text == "quantum":
            return cls("quantum")
        if text.startswith("classical:"):
            spec = text.split(":", 1)[1]
            table = best_classical_strategy() if spec == "best" else DeterministicStrategy.parse(spec)
            return cls("classical", table, text)
        raise ValueError(f"unknown strategy {text!r}; use quantum, classical:best or classical:<RRGGRG>")

    @property
    def is_quantum(self) -> bool:
        return self.kind == "quantum"

    def respond(self, handle: AgentHandle, side: Side, device: MeasurementDevice) -> Play:
        if self.is_quantum:
            return quantum_play(handle, side, device)
        if handle.used:
            raise ProtocolViolation(f"suspect {handle.suspect.value} already answered this game")
        handle.used = True
        return Play(side=Side(side), basis=None, outcome=None, color=self.table.answer(handle.suspect, side))

    def __str__(self) -> str:
        return self.label


QUANTUM = StrategyChoice("quantum")


def parse_endpoint(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not host:
        raise ValueError(f"endpoint must look like host:port, got {text!r}")
    return host, int(port)


def endpoints_from_env(environ: Mapping[str, str] | None = None) -> dict[str, tuple[str, int]]:
    environ = os.environ if environ is None else environ
    out = {}
    for role in ENDPOINT_ROLES:
        value = environ.get(f"{ENV_PREFIX}{role.upper()}_ENDPOINT")
        if value:
            out[role] = parse_endpoint(value)
    return out


@dataclass(frozen=True)
class SessionConfig:
    seed: int = 0
    trials: int = 1000
    guard_policy: GuardPolicy = field(default_factory=GuardPolicy)
    mode: Literal["local", "distributed"] = "local"
    strategy: StrategyChoice = QUANTUM
    suspect_strategies: Mapping[Robber, StrategyChoice] = field(default_factory=dict)
    endpoints: Mapping[str, tuple[str, int]] = field(default_factory=dict)
    # Measurement order in local mode; "shuffle" draws a fresh order per trial.
    order: tuple[Robber, ...] | Literal["shuffle"] = (Robber.A, Robber.B, Robber.C)
    log_path: str | None = None
    capture_dir: str | None = None
    agent_timeout: float = 5.0
    session_id: str | None = None

    def __post_init__(self):
        if not 0 <= self.seed <= U64_MAX:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials!r}")
        if self.mode not in ("local", "distributed"):
            raise ValueError(f"mode must be local or distributed, got {self.mode!r}")
        if self.order != "shuffle" and sorted(self.order) != sorted(Robber):
            raise ValueError(f"order must be a permutation of A, B, C, got {self.order!r}")
        if self.mode == "distributed":
            addrs = [a for a in self.endpoints.values() if a[1] != 0]
            if len(set(addrs)) != len(addrs):
                raise ValueError("endpoints must be distinct in distributed mode")

    def strategy_for(self, suspect: Robber) -> StrategyChoice:
        return self.suspect_strategies.get(Robber(suspect), self.strategy)

    @property
    def session(self) -> str:
        return self.session_id or f"ghz-{self.seed}"
