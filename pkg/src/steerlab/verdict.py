from dataclasses import asdict, dataclass
from typing import Optional


@dataclass(frozen=True)
class SteeringVerdict:
    """Outcome of one steering criterion on one state.

    ``ratio`` is oriented so that it exceeds 1 exactly when the inequality
    is violated; ``steerable`` is that strict comparison with no tolerance.
    """

    criterion: str
    lhs: float
    rhs: float
    ratio: float
    provenance: str = "analytic"
    clamped_mass: float = 0.0
    grid_n: Optional[int] = None
    box_halfwidth: Optional[float] = None

    @property
    def steerable(self):
        return self.ratio > 1.0

    def as_dict(self):
        d = asdict(self)
        d["steerable"] = self.steerable
        return d


def safe_ratio(num, den):
    if den == 0:
        return float("inf") if num > 0 else float("nan")
    return num / den
