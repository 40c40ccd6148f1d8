"""Wigner functions of the continuous-variable state families.

Coordinates are dimensionless quadratures (X, PX) for Bob's mode and
(Y, PY) for Alice's, with vacuum variance 1/2. Every function broadcasts
over numpy arrays.
"""

from typing import NamedTuple

import numpy as np

from .special_fn import laguerre

INV_PI2 = 1.0 / np.pi**2


class PhaseSpacePoint(NamedTuple):
    X: float
    PX: float
    Y: float
    PY: float


class QInvariants(NamedTuple):
    Q0: float
    Q2: float


def q_invariants(X, PX, Y, PY):
    """Rotation invariants entering the LG Wigner function."""
    return QInvariants((X * X + Y * Y + PX * PX + PY * PY) / 4.0, (X * PY - Y * PX) / 2.0)


def _tmsv_exponent(r, X, PX, Y, PY):
    s, c = np.sinh(2 * r), np.cosh(2 * r)
    return -2.0 * (PX * PY - X * Y) * s - (X * X + Y * Y + PX * PX + PY * PY) * c


def wigner_tmsv(r, X, PX, Y, PY):
    """Wigner function of the two-mode squeezed vacuum (squeezing phase 0)."""
    # exponent is a negative-definite quadratic form, exp underflows cleanly to 0
    with np.errstate(under="ignore"):
        return INV_PI2 * np.exp(_tmsv_exponent(r, X, PX, Y, PY))


def wigner_photon_subtracted(r, X, PX, Y, PY):
    """Wigner function of the single-photon-subtracted TMSV.

    Gaussian TMSV envelope times a quadratic bracket; equals -1/pi^2 at the
    origin for every r.
    """
    s, c = np.sinh(2 * r), np.cosh(2 * r)
    dp2 = (PX - PY) ** 2
    dx2 = (X - Y) ** 2
    bracket = -s * (dp2 - dx2) + c * (dp2 + dx2) - 1.0
    with np.errstate(under="ignore"):
        return INV_PI2 * np.exp(_tmsv_exponent(r, X, PX, Y, PY)) * bracket


def wigner_lg(m, n, X, PX, Y, PY):
    """Wigner function of the Laguerre-Gauss mode LG_{m,n} (waist absorbed)."""
    q0, q2 = q_invariants(X, PX, Y, PY)
    sign = -1.0 if (m + n) % 2 else 1.0
    with np.errstate(under="ignore"):
        env = np.exp(-4.0 * q0)
    return sign * INV_PI2 * laguerre(m, 0, 4.0 * (q0 + q2)) * laguerre(n, 0, 4.0 * (q0 - q2)) * env
