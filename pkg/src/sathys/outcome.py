"""Result types shared by the solvers, plus the no-op instrumentation hooks."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, fields


class Status(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


@dataclass
class Stats:
    flips: int = 0
    local_minima: int = 0
    fix_calls: int = 0
    decisions: int = 0
    conflicts: int = 0
    learned: int = 0
    deleted: int = 0
    restarts: int = 0
    time: float = 0.0

    def as_dict(self, with_time: bool = True) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        if not with_time:
            d.pop("time")
        return d

    def lines(self, with_time: bool = True) -> list[str]:
        out = []
        for k, v in self.as_dict(with_time).items():
            out.append(f"{k}={v:.3f}" if isinstance(v, float) else f"{k}={v}")
        return out


@dataclass
class SolveOutcome:
    status: Status
    model: dict[int, bool] | None = None
    stats: Stats = field(default_factory=Stats)

    def __post_init__(self):
        if (self.model is not None) != (self.status is Status.SAT):
            raise ValueError("a model is present iff the status is SAT")


class Tracer:
    """Instrumentation hooks; every method is a no-op here.

    Subclass in tests to watch the solvers from the inside. Hooks receive the
    live solver objects and must not mutate them.
    """

    def on_learn(self, info, trail) -> None:
        """Called after conflict analysis, before backjumping."""

    def on_flip(self, var: int, trail) -> None:
        """Called before local search flips the 0-based variable ``var``."""

    def on_fix(self, solver, clause) -> None:
        """Called when the hybrid solver enters fix at a local minimum."""
