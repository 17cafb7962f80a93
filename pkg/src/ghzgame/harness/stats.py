"""Per-trial transcripts and aggregate statistics."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from math import sqrt
from typing import Iterable

from scipy.stats import binomtest

from ..game import GUARDS, ROBBERS, Color, Robber, verify


@dataclass(frozen=True)
class SuspectRecord:
    question: str
    basis: str | None
    outcome: int | None
    answer: str | None
    asked_at: float
    answered_at: float | None


@dataclass(frozen=True)
class Transcript:
    trial: int
    guard: int
    seed: int
    suspects: dict[str, SuspectRecord]
    verdict: bool | None
    order: tuple[str, ...] = ()
    aborted: bool = False
    abort_reason: str | None = None

    def answers(self) -> dict[Robber, Color]:
        return {Robber(k): Color(v.answer) for k, v in self.suspects.items() if v.answer is not None}

    def recompute_verdict(self) -> bool | None:
        if self.aborted:
            return None
        return verify(self.guard, self.answers())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["order"] = list(self.order)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> Transcript:
        return cls(
            trial=d["trial"],
            guard=d["guard"],
            seed=d["seed"],
            suspects={k: SuspectRecord(**v) for k, v in d["suspects"].items()},
            verdict=d["verdict"],
            order=tuple(d.get("order", ())),
            aborted=d.get("aborted", False),
            abort_reason=d.get("abort_reason"),
        )


def append_log(path: str, transcripts: Iterable[Transcript]) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        for t in transcripts:
            fh.write(t.to_json() + "\n")


def read_log(path: str) -> list[Transcript]:
    with open(path, encoding="utf-8") as fh:
        return [Transcript.from_dict(json.loads(line)) for line in fh if line.strip()]


def exact_interval(successes: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Clopper-Pearson interval for a binomial proportion."""
    if n == 0:
        return 0.0, 1.0
    ci = binomtest(successes, n).proportion_ci(confidence_level=confidence, method="exact")
    return float(ci.low), float(ci.high)


def three_sigma(p: float, n: int) -> float:
    return 3 * sqrt(p * (1 - p) / n)


@dataclass
class Stats:
    """Counts accumulated from transcripts; insertion order does not matter."""

    total: int = 0
    aborted: int = 0
    guard_trials: dict[int, int] = field(default_factory=lambda: {g: 0 for g in GUARDS})
    guard_passes: dict[int, int] = field(default_factory=lambda: {g: 0 for g in GUARDS})
    # red[(guard, suspect)] = number of red answers from suspect when guard was tested
    red: dict[tuple[int, str], int] = field(
        default_factory=lambda: {(g, r.value): 0 for g in GUARDS for r in ROBBERS}
    )

    def add(self, t: Transcript) -> None:
        self.total += 1
        if t.aborted:
            self.aborted += 1
            return
        self.guard_trials[t.guard] += 1
        self.guard_passes[t.guard] += bool(t.verdict)
        for name, rec in t.suspects.items():
            self.red[t.guard, name] += rec.answer == Color.RED.value

    @classmethod
    def from_transcripts(cls, transcripts: Iterable[Transcript]) -> Stats:
        s = cls()
        for t in transcripts:
            s.add(t)
        return s

    def merge(self, other: Stats) -> Stats:
        out = Stats()
        out.total = self.total + other.total
        out.aborted = self.aborted + other.aborted
        for g in GUARDS:
            out.guard_trials[g] = self.guard_trials[g] + other.guard_trials[g]
            out.guard_passes[g] = self.guard_passes[g] + other.guard_passes[g]
        for k in out.red:
            out.red[k] = self.red[k] + other.red[k]
        return out

    @property
    def completed(self) -> int:
        return self.total - self.aborted

    @property
    def passes(self) -> int:
        return sum(self.guard_passes.values())

    @property
    def pass_rate(self) -> float:
        return self.passes / self.completed if self.completed else float("nan")

    def guard_pass_rate(self, guard: int) -> float:
        n = self.guard_trials[guard]
        return self.guard_passes[guard] / n if n else float("nan")

    def red_frequency(self, suspect: Robber | str, guard: int | None = None) -> float:
        name = Robber(suspect).value
        guards = GUARDS if guard is None else (guard,)
        n = sum(self.guard_trials[g] for g in guards)
        return sum(self.red[g, name] for g in guards) / n if n else float("nan")

    def pass_interval(self, confidence: float = 0.95) -> tuple[float, float]:
        return exact_interval(self.passes, self.completed, confidence)

    def to_dict(self) -> dict:
        lo, hi = self.pass_interval()
        return {
            "total": self.total,
            "aborted": self.aborted,
            "completed": self.completed,
            "passes": self.passes,
            "pass_rate": self.pass_rate,
            "pass_rate_ci95": [lo, hi],
            "per_guard": {
                str(g): {
                    "trials": self.guard_trials[g],
                    "passes": self.guard_passes[g],
                    "pass_rate": self.guard_pass_rate(g),
                }
                for g in GUARDS
            },
            "red_frequency": {r.value: self.red_frequency(r) for r in ROBBERS},
            "red_frequency_by_guard": {
                str(g): {r.value: self.red_frequency(r, g) for r in ROBBERS} for g in GUARDS
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def render(self) -> str:
        lo, hi = self.pass_interval()
        lines = [
            f"trials: {self.total} (completed {self.completed}, aborted {self.aborted})",
            f"pass rate: {self.pass_rate:.6f}  [95% exact CI {lo:.6f}, {hi:.6f}]",
        ]
        for g in GUARDS:
            lines.append(
                f"  guard {g}: {self.guard_passes[g]}/{self.guard_trials[g]} passed"
                + (f" ({self.guard_pass_rate(g):.4f})" if self.guard_trials[g] else "")
            )
        lines.append(
            "red frequency: " + ", ".join(f"{r.value}={self.red_frequency(r):.4f}" for r in ROBBERS)
        )
        return "\n".join(lines)
