"""Tensor-grid integration over four-dimensional phase space.

Deterministic composite Simpson rules do the heavy lifting; a seeded Monte
Carlo integrator is kept as an independent cross-check. Work is split into
slices along the first axis and reduced in a fixed order, so results do not
depend on how many worker threads are used (``STEERLAB_THREADS``).
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from .errors import DomainError, IntegrationError, MarginalNegativityError

AXES = ("X", "PX", "Y", "PY")

# marginal pairs that have a joint density (the two kept quadratures commute)
MARGINAL_PAIRS = {("X", "Y"), ("PX", "PY"), ("X", "PY"), ("Y", "PX")}


def _per_axis(value, cast):
    if np.ndim(value) == 0:
        return (cast(value),) * 4
    value = tuple(cast(v) for v in value)
    if len(value) != 4:
        raise DomainError(f"expected 4 per-axis values, got {len(value)}")
    return value


@dataclass(frozen=True)
class IntegrationBox:
    """Symmetric box [-L, L] with N nodes on each of the four axes.

    ``half_width`` and ``n`` may be scalars or 4-tuples ordered as
    (X, PX, Y, PY).
    """

    half_width: tuple
    n: tuple

    def __post_init__(self):
        L = _per_axis(self.half_width, float)
        N = _per_axis(self.n, int)
        if any(not (v > 0 and math.isfinite(v)) for v in L):
            raise DomainError(f"half widths must be positive, got {L}")
        if any(v < 33 or v % 2 == 0 for v in N):
            raise DomainError(f"point counts must be odd and >= 33, got {N}")
        object.__setattr__(self, "half_width", L)
        object.__setattr__(self, "n", N)

    def nodes(self, axis):
        i = axis if isinstance(axis, int) else AXES.index(axis)
        return np.linspace(-self.half_width[i], self.half_width[i], self.n[i])

    def weights(self, axis):
        i = axis if isinstance(axis, int) else AXES.index(axis)
        return simpson_weights(self.n[i], 2 * self.half_width[i] / (self.n[i] - 1))

    @property
    def volume(self):
        return math.prod(2 * L for L in self.half_width)


def simpson_weights(n, h):
    """Composite Simpson weights for ``n`` (odd) equally spaced nodes."""
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * (h / 3.0)


def default_half_width(desc):
    """Box half-width wide enough that the Gaussian tail mass is < 1e-8."""
    r = getattr(desc, "r", None)
    if r is None:
        return 6.0
    return 6.0 * math.sqrt(math.cosh(2 * r))


def envelope_tail_mass(desc, half_width=None):
    """Estimate the probability mass outside the box from the Gaussian envelope.

    Each one-axis marginal is bounded by a Gaussian of variance ``v`` times a
    polynomial of degree ``2k``; its tail beyond ``L`` is the regularized
    upper gamma function ``Q(k + 1/2, L^2 / 2v)``. The four axes are combined
    with a union bound.
    """
    L = np.asarray(_per_axis(default_half_width(desc) if half_width is None else half_width, float))
    r = getattr(desc, "r", None)
    if r is None:
        v, k = 0.5, desc.m + desc.n
    else:
        v, k = 0.5 * math.cosh(2 * r), (1 if desc.family == "psub" else 0)
    return float(np.sum(gammaincc(k + 0.5, L**2 / (2 * v))))


def default_box(desc, n=81, half_width=None):
    return IntegrationBox(default_half_width(desc) if half_width is None else half_width, n)


def worker_count(workers=None):
    if workers is None:
        workers = int(os.environ.get("STEERLAB_THREADS", os.cpu_count() or 1))
    return max(1, int(workers))


def _map_ordered(fn, items, workers):
    workers = worker_count(workers)
    if workers == 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _check_finite(vals, x0, grids):
    if np.all(np.isfinite(vals)):
        return
    idx = np.argwhere(~np.isfinite(vals))[0]
    point = (float(x0),) + tuple(float(g[i]) for g, i in zip(grids, idx))
    raise IntegrationError(f"non-finite integrand at {point}", point)


def _slices(box):
    x0 = box.nodes(0)
    w0 = box.weights(0)
    rest = np.meshgrid(box.nodes(1), box.nodes(2), box.nodes(3), indexing="ij", sparse=True)
    w_rest = np.einsum("i,j,k->ijk", box.weights(1), box.weights(2), box.weights(3))
    return x0, w0, rest, w_rest


def integrate4(f, box, workers=None):
    """Composite Simpson estimate of the integral of ``f(X, PX, Y, PY)``."""
    x0, w0, rest, w_rest = _slices(box)
    grids = [box.nodes(i) for i in (1, 2, 3)]

    def one(i):
        vals = np.broadcast_to(f(x0[i], *rest), w_rest.shape)
        _check_finite(vals, x0[i], grids)
        return w0[i] * float(np.sum(vals * w_rest))

    return math.fsum(_map_ordered(one, range(len(x0)), workers))


def moments4(f, box, workers=None):
    """Mass, first moments and raw second moments of a 4D density ``f``.

    Returns ``(mass, mean, second)`` where ``mean`` has shape (4,) and
    ``second[i, j]`` is the integral of q_i q_j f, both unnormalized by mass.
    """
    x0, w0, rest, w_rest = _slices(box)
    grids = [box.nodes(i) for i in (1, 2, 3)]
    pairs = [(i, j) for i in range(4) for j in range(i, 4)]

    def one(i):
        vals = np.broadcast_to(f(x0[i], *rest), w_rest.shape)
        _check_finite(vals, x0[i], grids)
        fw = vals * w_rest
        q = [np.broadcast_to(x0[i], fw.shape)] + [np.broadcast_to(g, fw.shape) for g in rest]
        out = [float(np.sum(fw))]
        out += [float(np.sum(fw * qk)) for qk in q]
        out += [float(np.sum(fw * q[a] * q[b])) for a, b in pairs]
        return w0[i] * np.array(out)

    parts = np.array(_map_ordered(one, range(len(x0)), workers))
    totals = [math.fsum(col) for col in parts.T]
    mass = totals[0]
    mean = np.array(totals[1:5])
    second = np.zeros((4, 4))
    for (a, b), v in zip(pairs, totals[5:]):
        second[a, b] = second[b, a] = v
    return mass, mean, second


@dataclass(frozen=True)
class DensityGrid:
    """Probability density sampled on a uniform grid.

    ``coords`` holds one node array per axis; ``cell_measure`` is the
    product of node spacings. ``clamped_mass`` records how much negative
    mass was set to zero while building the grid.
    """

    axes: tuple
    coords: tuple
    values: np.ndarray
    cell_measure: float
    clamped_mass: float = 0.0

    @property
    def mass(self):
        return float(np.sum(self.values) * self.cell_measure)

    def marginal(self, axis):
        """Integrate out every axis except ``axis`` (name or index)."""
        i = axis if isinstance(axis, int) else self.axes.index(axis)
        other = tuple(k for k in range(len(self.axes)) if k != i)
        spacing = [c[1] - c[0] for c in self.coords]
        vals = np.sum(self.values, axis=other) * math.prod(spacing[k] for k in other)
        return DensityGrid((self.axes[i],), (self.coords[i],), vals, spacing[i], self.clamped_mass)

    def moment(self, axis, power=1):
        i = axis if isinstance(axis, int) else self.axes.index(axis)
        shape = [1] * len(self.axes)
        shape[i] = -1
        q = self.coords[i].reshape(shape)
        return float(np.sum(self.values * q**power) * self.cell_measure)


def density_from_samples(axes, coords, values, negative_tol=1e-6):
    """Clamp negative samples to zero and renormalize to unit mass."""
    values = np.asarray(values, dtype=float)
    measure = math.prod(c[1] - c[0] for c in coords)
    total = float(np.sum(values) * measure)
    negative = float(-np.sum(values[values < 0]) * measure)
    if total <= 0 or negative > negative_tol * abs(total):
        raise MarginalNegativityError(
            f"marginal over {axes} has negative mass {negative:.3g} (total {total:.6g})"
        )
    clipped = np.clip(values, 0.0, None)
    clipped /= np.sum(clipped) * measure
    return DensityGrid(tuple(axes), tuple(coords), clipped, measure, negative)


def marginalize(desc, keep, box, workers=None):
    """Joint density of two commuting quadratures from a Wigner function.

    ``keep`` is an ordered pair such as ``("X", "PY")``; the other two axes
    are integrated out with Simpson's rule. ``desc`` is any object with a
    vectorized ``wigner(X, PX, Y, PY)`` method.
    """
    keep = tuple(keep)
    if keep not in MARGINAL_PAIRS and keep[::-1] not in MARGINAL_PAIRS:
        raise DomainError(f"unsupported marginal pair {keep}; choose from {sorted(MARGINAL_PAIRS)}")
    a, b = (AXES.index(k) for k in keep)
    c, d = (i for i in range(4) if i not in (a, b))
    xa, xb, xc, xd = (box.nodes(i) for i in (a, b, c, d))
    wcd = np.outer(box.weights(c), box.weights(d))
    B, C, D = np.meshgrid(xb, xc, xd, indexing="ij", sparse=True)

    def row(i):
        q = [None] * 4
        q[a], q[b], q[c], q[d] = xa[i], B, C, D
        vals = np.broadcast_to(desc.wigner(*q), (len(xb), len(xc), len(xd)))
        if not np.all(np.isfinite(vals)):
            j, k, l = np.argwhere(~np.isfinite(vals))[0]
            pt = [0.0] * 4
            pt[a], pt[b], pt[c], pt[d] = xa[i], xb[j], xc[k], xd[l]
            raise IntegrationError(f"non-finite Wigner value at {tuple(pt)}", tuple(pt))
        return np.einsum("jkl,kl->j", vals, wcd)

    values = np.array(_map_ordered(row, range(len(xa)), workers))
    return density_from_samples(keep, (xa, xb), values)


def mc_integrate4(f, box, samples, seed):
    """Uniform-sampling Monte Carlo estimate and standard error."""
    if samples < 10_000:
        raise DomainError(f"need at least 1e4 samples, got {samples}")
    rng = np.random.default_rng(seed)
    L = np.array(box.half_width)
    pts = rng.uniform(-L, L, size=(int(samples), 4))
    vals = np.broadcast_to(f(pts[:, 0], pts[:, 1], pts[:, 2], pts[:, 3]), (int(samples),))
    vol = box.volume
    mean = float(np.mean(vals))
    if np.all(vals == vals[0]):
        return vol * float(vals[0]), 0.0
    stderr = float(np.std(vals, ddof=1)) / math.sqrt(samples)
    return vol * mean, vol * stderr
