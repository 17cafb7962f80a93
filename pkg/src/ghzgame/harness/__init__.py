from .config import GuardPolicy, SessionConfig, StrategyChoice
from .local import run_local_game, run_session, run_trials
from .stats import Stats, Transcript

__all__ = [
    "GuardPolicy",
    "SessionConfig",
    "Stats",
    "StrategyChoice",
    "Transcript",
    "run_local_game",
    "run_session",
    "run_trials",
]
