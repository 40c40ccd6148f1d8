"""Reid, entropic and sum steering verdicts, sweeps and table reproduction.

Ratio conventions (each exceeds 1 exactly on violation):

* reid      1 / (4 Dinf^2 X_theta1 Dinf^2 X_theta2)
* entropic  ln(pi e) / (h_1 + h_2)
* sum       (Delta X_theta1 + Delta X_theta2) / (Dinf X_theta1 + Dinf X_theta2)

``method="analytic"`` uses closed-form moments where they exist (entropies
of non-Gaussian states always come from quadrature); ``"quadrature"``
integrates the Wigner function and is what table reproduction uses.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import discrete
from .entropy import LN_PI_E, default_pairing, entropy_sum, marginal_box
from .errors import DomainError, SteerlabError
from .moments import default_settings, inferred_variance, moment_table, sum_variance
from .quadrature import IntegrationBox, default_half_width
from .states import LaguerreGauss, PhotonSubtracted, Werner, make_state
from .verdict import SteeringVerdict, safe_ratio

CRITERIA = ("reid", "entropic", "sum", "chsh")
CV_CRITERIA = ("reid", "entropic", "sum")
WERNER_CRITERIA = ("sum", "entropic", "chsh")


@dataclass(frozen=True)
class Resolution:
    """Quadrature overrides; ``None`` keeps the per-family defaults."""

    grid_n: Optional[int] = None
    box_halfwidth: Optional[float] = None

    def moment_box(self, desc):
        L = default_half_width(desc) if self.box_halfwidth is None else self.box_halfwidth
        return IntegrationBox(L, 81 if self.grid_n is None else self.grid_n)

    def marginal_box(self, desc, pair):
        if self.grid_n is None:
            return marginal_box(desc, pair, half_width=self.box_halfwidth)
        L = default_half_width(desc) if self.box_halfwidth is None else self.box_halfwidth
        return IntegrationBox(L, self.grid_n)


def _moment_method(method):
    if method not in ("analytic", "quadrature"):
        raise DomainError(f"unknown method {method!r}")
    return method


def _quad_meta(box):
    return {"grid_n": box.n[0], "box_halfwidth": box.half_width[0]}


def _moments(desc, method, resolution):
    method = _moment_method(method)
    if method == "analytic":
        return moment_table(desc, "analytic"), {}
    box = resolution.moment_box(desc)
    return moment_table(desc, "quadrature", box), _quad_meta(box)


def reid_verdict(desc, settings=None, method="analytic", resolution=Resolution()):
    settings = default_settings(desc) if settings is None else settings
    table, meta = _moments(desc, method, resolution)
    (t1, p1), (t2, p2) = settings.pairs
    lhs = inferred_variance(table, t1, p1) * inferred_variance(table, t2, p2)
    return SteeringVerdict("reid", lhs, 0.25, safe_ratio(0.25, lhs), table.provenance, **meta)


def sum_verdict(desc, settings=None, method="analytic", resolution=Resolution()):
    settings = default_settings(desc) if settings is None else settings
    table, meta = _moments(desc, method, resolution)
    (t1, p1), (t2, p2) = settings.pairs
    lhs = math.sqrt(inferred_variance(table, t1, p1)) + math.sqrt(inferred_variance(table, t2, p2))
    rhs = sum_variance(table, t1, t2)
    return SteeringVerdict("sum", lhs, rhs, safe_ratio(rhs, lhs), table.provenance, **meta)


def entropic_verdict(desc, pairing=None, method="analytic", resolution=Resolution()):
    pairing = default_pairing(desc) if pairing is None else tuple(tuple(p) for p in pairing)
    method = _moment_method(method)
    closed = method == "analytic" and not isinstance(desc, (PhotonSubtracted, LaguerreGauss))
    if closed and pairing == (("X", "Y"), ("PX", "PY")):
        lhs, clamped = entropy_sum(desc, pairing, method="analytic")
        return SteeringVerdict("entropic", lhs, LN_PI_E, safe_ratio(LN_PI_E, lhs), "analytic")
    lhs = 0.0
    clamped = 0.0
    for pair in pairing:
        h, c = entropy_sum(desc, (pair,), box=resolution.marginal_box(desc, pair))
        lhs += h
        clamped += c
    box = resolution.marginal_box(desc, pairing[0])
    return SteeringVerdict(
        "entropic", lhs, LN_PI_E, safe_ratio(LN_PI_E, lhs), "quadrature", clamped,
        grid_n=max(box.n), box_halfwidth=box.half_width[0],
    )


def verdict(desc, criterion, settings=None, method="analytic", resolution=Resolution()):
    """Dispatch one criterion for any state family."""
    if isinstance(desc, Werner):
        return discrete.werner_verdict(desc.p, criterion)
    if criterion == "reid":
        return reid_verdict(desc, settings, method, resolution)
    if criterion == "sum":
        return sum_verdict(desc, settings, method, resolution)
    if criterion == "entropic":
        return entropic_verdict(desc, None, method, resolution)
    raise DomainError(f"criterion {criterion!r} is not defined for {desc.family} states")


@dataclass(frozen=True)
class SweepRow:
    family: str
    param: float
    criterion: str
    verdict: Optional[SteeringVerdict] = None
    error: Optional[str] = None


def sweep(family, params, criteria, fixed=None, settings=None, method="analytic",
          resolution=Resolution()):
    """Evaluate ``criteria`` at each parameter value, in input order.

    A failure at one point is stored on its row and the sweep continues.
    """
    from .states import SWEEP_PARAM

    params = list(params)
    criteria = list(criteria)
    if not params:
        raise DomainError("parameter grid is empty")
    if not criteria:
        raise DomainError("criteria list is empty")
    key = SWEEP_PARAM.get(family)
    if key is None:
        raise DomainError(f"unknown family {family!r}")
    rows = []
    for value in params:
        try:
            desc = make_state(family, **{**(fixed or {}), key: value})
        except SteerlabError as exc:
            rows.extend(SweepRow(family, value, c, error=str(exc)) for c in criteria)
            continue
        for c in criteria:
            try:
                rows.append(SweepRow(family, value, c, verdict(desc, c, settings, method, resolution)))
            except (SteerlabError, ArithmeticError, np.linalg.LinAlgError) as exc:
                rows.append(SweepRow(family, value, c, error=f"{type(exc).__name__}: {exc}"))
    return rows


TABLE_POINTS = {
    "psub": ("r", [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6]),
    "lg": ("n", [0, 1, 2, 3, 4, 5]),
}


@dataclass(frozen=True)
class TableRow:
    family: str
    param: float
    reid: float
    entropic: float
    sum: float
    clamped_mass: float
    grid_n: int
    box_halfwidth: float
    error: Optional[str] = None


def reproduce_table(which, resolution=Resolution(), params=None):
    """Violation ratios of the three criteria, all evaluated by quadrature."""
    if which not in TABLE_POINTS:
        raise DomainError(f"no table named {which!r}; choose from {sorted(TABLE_POINTS)}")
    key, default_params = TABLE_POINTS[which]
    rows = []
    for value in default_params if params is None else params:
        desc = make_state(which, **{key: value})
        try:
            vs = {c: verdict(desc, c, method="quadrature", resolution=resolution) for c in CV_CRITERIA}
        except (SteerlabError, ArithmeticError) as exc:
            nan = float("nan")
            box = resolution.moment_box(desc)
            rows.append(TableRow(which, value, nan, nan, nan, nan, box.n[0], box.half_width[0],
                                 f"{type(exc).__name__}: {exc}"))
            continue
        ent = vs["entropic"]
        rows.append(TableRow(which, value, vs["reid"].ratio, ent.ratio, vs["sum"].ratio,
                             ent.clamped_mass, ent.grid_n, ent.box_halfwidth))
    return rows
