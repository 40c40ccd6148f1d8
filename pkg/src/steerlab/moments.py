"""Second moments, correlations, inferred variances and sum variances.

A :class:`MomentTable` stores the mean vector and raw second-moment matrix
of (X, PX, Y, PY) for one state. Every rotated-quadrature quantity follows
from it by linear algebra, so a single quadrature pass serves all angle
settings. Tables come either from closed forms (``method="analytic"``) or
from 4D Simpson integration of the Wigner function (``method="quadrature"``).
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DegenerateMomentError, DomainError
from .quadrature import default_box, moments4
from .states import TMSV, LaguerreGauss, PhotonSubtracted

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class QuadratureSetting:
    """Bob's two target angles and the matching estimator angles on Alice."""

    theta1: float = 0.0
    theta2: float = HALF_PI
    phi1: float = 0.0
    phi2: float = HALF_PI

    def __post_init__(self):
        for name in ("theta1", "theta2", "phi1", "phi2"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, math.fmod(v, 2 * math.pi) % (2 * math.pi))

    @property
    def pairs(self):
        return ((self.theta1, self.phi1), (self.theta2, self.phi2))


def default_settings(desc):
    """Estimator pairing used for each family.

    Squeezed families correlate X with Y and PX with PY. LG beams correlate
    X with PY and PX with Y.
    """
    if isinstance(desc, LaguerreGauss):
        return QuadratureSetting(0.0, HALF_PI, HALF_PI, 0.0)
    return QuadratureSetting()


@dataclass(frozen=True, eq=False)
class MomentTable:
    mean: np.ndarray
    second: np.ndarray
    provenance: str
    mass: float = 1.0
    box: object = field(default=None, repr=False)

    def _bob(self, theta):
        return np.array([math.cos(theta), math.sin(theta), 0.0, 0.0])

    def _alice(self, phi):
        return np.array([0.0, 0.0, math.cos(phi), math.sin(phi)])

    def cov(self, u, v):
        """Centered covariance of the linear forms u.q and v.q."""
        return float(u @ self.second @ v - (u @ self.mean) * (v @ self.mean))

    def var_bob(self, theta):
        n = self._bob(theta)
        return self.cov(n, n)

    def var_alice(self, phi):
        n = self._alice(phi)
        return self.cov(n, n)

    def cross(self, theta, phi):
        return self.cov(self._bob(theta), self._alice(phi))


def _analytic_second(desc):
    if isinstance(desc, TMSV):
        c, s = math.cosh(2 * desc.r), math.sinh(2 * desc.r)
        m = np.diag([c / 2] * 4)
        m[0, 2] = m[2, 0] = s / 2
        m[1, 3] = m[3, 1] = -s / 2
        return m
    if isinstance(desc, PhotonSubtracted):
        c, s = math.cosh(2 * desc.r), math.sinh(2 * desc.r)
        em, ep = math.exp(-2 * desc.r), math.exp(2 * desc.r)
        m = np.diag([c - s / 2, c + s / 2, c - s / 2, c + s / 2])
        m[0, 2] = m[2, 0] = (s - em) / 2
        m[1, 3] = m[3, 1] = -(s + ep) / 2
        return m
    if isinstance(desc, LaguerreGauss):
        e = (desc.m + desc.n + 1) / 2
        m = np.diag([e] * 4)
        lz = (desc.m - desc.n) / 2
        m[0, 3] = m[3, 0] = lz
        m[1, 2] = m[2, 1] = -lz
        return m
    raise DomainError(f"no closed-form moments for {desc!r}")


@lru_cache(maxsize=256)
def moment_table(desc, method="analytic", box=None):
    """Moment table for ``desc``; cached on (descriptor, method, box)."""
    if method == "analytic":
        return MomentTable(np.zeros(4), _analytic_second(desc), "analytic")
    if method != "quadrature":
        raise DomainError(f"unknown method {method!r}")
    box = default_box(desc) if box is None else box
    mass, mean, second = moments4(desc.wigner, box)
    return MomentTable(mean / mass, second / mass, "quadrature", mass, box)


def _table(state, method, box):
    return state if isinstance(state, MomentTable) else moment_table(state, method, box)


def rotated_quadrature(point, side, angle):
    """X cos(t) + PX sin(t) on Bob's side, Y cos(t) + PY sin(t) on Alice's."""
    X, PX, Y, PY = point
    if side == "bob":
        return X * math.cos(angle) + PX * math.sin(angle)
    if side == "alice":
        return Y * math.cos(angle) + PY * math.sin(angle)
    raise DomainError(f"side must be 'bob' or 'alice', got {side!r}")


def correlation(state, theta, phi, method="analytic", box=None):
    """Normalized correlation of Bob's X_theta with Alice's Y_phi."""
    t = _table(state, method, box)
    vx, vy = t.var_bob(theta), t.var_alice(phi)
    if vx <= 0 or vy <= 0:
        raise DegenerateMomentError(f"vanishing second moment ({vx}, {vy})")
    return t.cross(theta, phi) / math.sqrt(vx * vy)


def optimal_gain(state, theta, phi, method="analytic", box=None):
    t = _table(state, method, box)
    vy = t.var_alice(phi)
    if vy <= 0:
        raise DegenerateMomentError(f"estimator variance vanishes at phi={phi}")
    return t.cross(theta, phi) / vy


def inference_error(state, theta, phi, gain, method="analytic", box=None):
    """Mean-square error of the linear estimate gain * Y_phi (centered)."""
    t = _table(state, method, box)
    return t.var_bob(theta) - 2 * gain * t.cross(theta, phi) + gain**2 * t.var_alice(phi)


def inferred_variance(state, theta, phi, method="analytic", box=None):
    """Reid inferred variance <X_theta^2>(1 - C^2) with the optimal linear gain."""
    t = _table(state, method, box)
    c = correlation(t, theta, phi)
    return max(t.var_bob(theta) * (1.0 - c * c), 0.0)


def sum_std(state, theta1, theta2, method="analytic", box=None):
    """Standard deviation of X_theta1 + X_theta2 on Bob's reduced state."""
    t = _table(state, method, box)
    n = t._bob(theta1) + t._bob(theta2)
    return math.sqrt(max(t.cov(n, n), 0.0))


def sum_variance(state, theta1, theta2, method="analytic", box=None):
    """Right-hand side of the continuous-variable sum criterion.

    This is Delta X_theta1 + Delta X_theta2, the quantity whose closed forms
    are sqrt(2 cosh 2r) for the TMSV and
    sqrt(cosh 2r - cosh r sinh r) + sqrt(cosh 2r + cosh r sinh r) for the
    photon-subtracted state. :func:`sum_std` gives the standard deviation
    of the summed observable, which never exceeds this value.
    """
    t = _table(state, method, box)
    return math.sqrt(max(t.var_bob(theta1), 0.0)) + math.sqrt(max(t.var_bob(theta2), 0.0))
