"""Differential and conditional entropies of Wigner marginals (in nats)."""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NormalizationError
from .quadrature import AXES, IntegrationBox, default_half_width, marginalize
from .states import TMSV, LaguerreGauss

LN_PI_E = math.log(math.pi * math.e)


@dataclass(frozen=True)
class EntropyReport:
    h_joint: float
    h_marginal: float
    h_conditional: float
    clamped_mass: float
    h_target: float = float("nan")


def differential_entropy(grid):
    """-sum p ln p * cell over a normalized :class:`DensityGrid`."""
    mass = grid.mass
    if abs(mass - 1.0) > 1e-3:
        raise NormalizationError(f"density integrates to {mass:.6g}, not 1")
    p = grid.values[grid.values > 0]
    return float(-np.sum(p * np.log(p)) * grid.cell_measure)


def default_pairing(desc):
    """Conditional pairs (target, estimator) summed by the entropic criterion."""
    if isinstance(desc, LaguerreGauss):
        return (("X", "PY"), ("Y", "PX"))
    return (("X", "Y"), ("PX", "PY"))


def marginal_box(desc, keep, n_keep=181, n_discard=61, half_width=None):
    """Box with fine nodes on the kept axes and coarser ones on the rest."""
    L = default_half_width(desc) if half_width is None else half_width
    return IntegrationBox(L, tuple(n_keep if a in keep else n_discard for a in AXES))


@lru_cache(maxsize=256)
def conditional_entropy(desc, pair, box=None):
    """h(target | estimator) = h(target, estimator) - h(estimator)."""
    pair = tuple(pair)
    box = marginal_box(desc, pair) if box is None else box
    joint = marginalize(desc, pair, box)
    hj = differential_entropy(joint)
    hm = differential_entropy(joint.marginal(1))
    ht = differential_entropy(joint.marginal(0))
    return EntropyReport(hj, hm, hj - hm, joint.clamped_mass, ht)


def gaussian_entropy(cov):
    """Closed-form differential entropy of a Gaussian with covariance ``cov``."""
    cov = np.atleast_2d(cov)
    d = cov.shape[0]
    return 0.5 * math.log((2 * math.pi * math.e) ** d * float(np.linalg.det(cov)))


def tmsv_conditional_entropy(r):
    """h(X|Y) for the TMSV, equal to h(PX|PY) by symmetry."""
    c, s = math.cosh(2 * r), math.sinh(2 * r)
    return gaussian_entropy([[c / 2, s / 2], [s / 2, c / 2]]) - gaussian_entropy([[c / 2]])


def entropy_sum(desc, pairing=None, method="quadrature", box=None):
    """Sum of the two conditional entropies and the total clamped mass."""
    pairing = default_pairing(desc) if pairing is None else tuple(tuple(p) for p in pairing)
    if method == "analytic" and isinstance(desc, TMSV) and pairing == (("X", "Y"), ("PX", "PY")):
        return 2 * tmsv_conditional_entropy(desc.r), 0.0
    reports = [conditional_entropy(desc, p, box) for p in pairing]
    return sum(r.h_conditional for r in reports), sum(r.clamped_mass for r in reports)
