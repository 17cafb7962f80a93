"""Single-process game loop: the referee, the gadgets and the suspects share one thread."""
from __future__ import annotations

from typing import Mapping, Sequence

from ..game import ROBBERS, Robber, question_for, verify
from ..strategy import AgentHandle, SharedRegister
from .config import (
    DEVICE_STREAM,
    QUANTUM,
    REFEREE_STREAM,
    SessionConfig,
    StrategyChoice,
    TrialStreams,
)
from .stats import Stats, SuspectRecord, Transcript, append_log


def run_local_game(
    guard: int,
    seed: int,
    trial: int = 0,
    *,
    strategies: Mapping[Robber, StrategyChoice] | None = None,
    order: Sequence[Robber] = ROBBERS,
    uniforms: Sequence[float] | None = None,
) -> Transcript:
    """Play one interrogation testing ``guard``.

    Measurements consume ``uniforms`` in the order they happen; by default these
    come from the device substream for ``(seed, trial)``. Timestamps are
    logical ticks.
    """
    strategies = strategies or {}
    if uniforms is None:
        uniforms = TrialStreams(seed, DEVICE_STREAM).uniforms(trial)
    register = SharedRegister(iter(uniforms).__next__)
    records = {}
    answers = {}
    tick = 0
    for robber in order:
        robber = robber if isinstance(robber, Robber) else Robber(robber)
        side = question_for(guard, robber)
        asked = tick
        play = strategies.get(robber, QUANTUM).respond(AgentHandle(robber), side, register)
        tick += 1
        answers[robber] = play.color
        records[robber.value] = SuspectRecord(
            question=side.value,
            basis=None if play.basis is None else play.basis.value,
            outcome=None if play.outcome is None else int(play.outcome),
            answer=play.color.value,
            asked_at=asked,
            answered_at=tick,
        )
    return Transcript(
        trial=trial,
        guard=guard,
        seed=seed,
        suspects={r.value: records[r.value] for r in ROBBERS},
        verdict=verify(guard, answers),
        order=tuple(Robber(r).value for r in order),
    )


def _local_transcripts(config: SessionConfig) -> list[Transcript]:
    strategies = {r: config.strategy_for(r) for r in ROBBERS}
    referee = TrialStreams(config.seed, REFEREE_STREAM)
    device = TrialStreams(config.seed, DEVICE_STREAM)
    out = []
    for trial in range(config.trials):
        with referee.at(trial) as rng:
            guard = config.guard_policy.draw(rng)
            if config.order == "shuffle":
                order = tuple(ROBBERS[i] for i in rng.permutation(len(ROBBERS)))
            else:
                order = config.order
        out.append(
            run_local_game(
                guard, config.seed, trial,
                strategies=strategies, order=order, uniforms=device.uniforms(trial),
            )
        )
    return out


def run_session(config: SessionConfig) -> tuple[Stats, list[Transcript]]:
    if config.mode == "distributed":
        from .distributed import run_distributed

        result = run_distributed(config)
        return result.stats, result.transcripts
    transcripts = _local_transcripts(config)
    if config.log_path:
        append_log(config.log_path, transcripts)
    return Stats.from_transcripts(transcripts), transcripts


def run_trials(config: SessionConfig) -> Stats:
    return run_session(config)[0]
