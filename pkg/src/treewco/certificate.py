"""Machine-checkable verdicts with witnesses and per-depth profiles.

A certificate answers one named statement about an operator.  Statements
that a finite truncation genuinely decides (an isometry check inside a
stated window, surjectivity of the stored map) get Holds/Fails; statements
about limits (compactness, boundedness of the infinite operator) only ever
get trend verdicts computed from the tail of the depth profile.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["Certificate", "HOLDS", "FAILS", "TREND_CONSISTENT", "TREND_INCONSISTENT"]

HOLDS = "Holds"
FAILS = "Fails"
TREND_CONSISTENT = "TrendConsistent"
TREND_INCONSISTENT = "TrendInconsistent"


@dataclass(frozen=True)
class Certificate:
    statement: str
    verdict: str
    criterion: str
    witnesses: dict = field(default_factory=dict)
    depth_profile: tuple = ()
    window_depth: int | None = None

    def __post_init__(self):
        if self.verdict not in (HOLDS, FAILS, TREND_CONSISTENT, TREND_INCONSISTENT):
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def decided(self) -> bool:
        return self.verdict in (HOLDS, FAILS)

    def to_json(self) -> dict:
        return {
            "statement": self.statement,
            "verdict": self.verdict,
            "criterion": self.criterion,
            "witnesses": self.witnesses,
            "depth_profile": [[int(n), float(v)] for n, v in self.depth_profile],
            "window_depth": self.window_depth,
        }
