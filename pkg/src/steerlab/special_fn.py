"""Hermite and generalized Laguerre polynomials by forward recurrence.

Hermite polynomials use the physicists' convention (weight ``exp(-x**2)``),
which is the one appearing in Hermite-Gauss mode functions. Both routines
accept scalars or numpy arrays for ``x`` and avoid factorials, so moderate
orders stay free of overflow.
"""

import numpy as np

from .errors import DomainError


def _check_order(name, value):
    if int(value) != value or value < 0:
        raise DomainError(f"{name} must be a non-negative integer, got {value!r}")
    return int(value)


def hermite(n, x):
    """Physicists' Hermite polynomial H_n(x).

    Uses H_{k+1} = 2x H_k - 2k H_{k-1}.
    """
    n = _check_order("n", n)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 2.0 * x
    for k in range(1, n):
        prev, cur = cur, 2.0 * x * cur - 2.0 * k * prev
    return cur if cur.ndim else float(cur)


def laguerre(n, alpha, x):
    """Generalized Laguerre polynomial L_n^alpha(x) for integer alpha >= 0.

    Uses (k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}.
    ``laguerre(n, 0, x)`` is the ordinary Laguerre polynomial.
    """
    n = _check_order("n", n)
    alpha = _check_order("alpha", alpha)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)
