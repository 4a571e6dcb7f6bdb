"""Report containers shared by the criterion checkers.

Mathematical verdicts are data, never exceptions. Every reported number
carries its certification status so downstream consumers (CLI, tests) can
distinguish proven bounds from scan-based estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = ["Quantity", "CriterionReport",
           "HOLDS_CERTIFIED", "HOLDS_NUMERIC", "FAILS_NUMERIC", "INCONCLUSIVE"]

HOLDS_CERTIFIED = "HOLDS_CERTIFIED"
HOLDS_NUMERIC = "HOLDS_NUMERIC"
FAILS_NUMERIC = "FAILS_NUMERIC"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Quantity:
    """One named number in a report: the computed value, a rigorous bound on
    its error when available (inf otherwise), and the certification kind."""

    value: float
    bound: float = math.inf
    cert: str = "HEURISTIC"  # "CERTIFIED" | "HEURISTIC"

    def certified(self) -> bool:
        return self.cert == "CERTIFIED"


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of one criterion check.

    verdict is one of HOLDS_CERTIFIED, HOLDS_NUMERIC, FAILS_NUMERIC,
    INCONCLUSIVE; `implication` states exactly what the verdict allows one to
    conclude (including direction: sufficient / necessary / equivalent), and
    `conclusion` is the machine-readable dynamical consequence, e.g.
    HYPERCYCLIC, NOT_HYPERCYCLIC, CHAOTIC, MIXING, NO_CONCLUSION.
    """

    criterion_id: str
    verdict: str
    quantities: dict[str, Quantity] = field(default_factory=dict)
    scan: dict[str, int] = field(default_factory=dict)
    implication: str = ""
    conclusion: str = "NO_CONCLUSION"

    def holds(self) -> bool:
        return self.verdict in (HOLDS_CERTIFIED, HOLDS_NUMERIC)

    def to_json(self) -> dict:
        return {
            "criterion_id": self.criterion_id,
            "verdict": self.verdict,
            "quantities": {
                k: {"value": q.value, "bound": q.bound, "cert": q.cert}
                for k, q in self.quantities.items()
            },
            "scan": dict(self.scan),
            "implication": f"{self.conclusion}: {self.implication}",
        }
