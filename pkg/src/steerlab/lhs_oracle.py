"""Brute-force check of the sum inequality against explicit LHS models.

A local-hidden-state model has finitely many hidden values lambda with
weights P(lambda), a response table P(y | lambda) for each of Alice's two
settings, and a genuine quantum state for Bob per lambda. Bob's
continuous-variable states are single-mode Gaussians with covariance
det >= 1/4; the qubit variant uses Bloch vectors. With a finite outcome
alphabet the conditional-mean estimator is exact, so the inferred
variances below are the true minima over all estimators.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CertificationError, DomainError

MAX_HIDDEN = 32
MAX_OUTCOMES = 8


@dataclass(frozen=True, eq=False)
class LhsModel:
    """``weights`` (K,), ``responses`` (2, K, M) rows of P(y|lambda) for
    Alice's two settings, ``means`` (K,) and ``variances`` (K,) of Bob's
    two target observables as arrays of shape (2, K), and ``sum_var`` (K,)
    the quantum variance of their sum in each hidden state."""

    weights: np.ndarray
    responses: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    sum_var: np.ndarray
    kind: str = "cv"

    def __post_init__(self):
        w, resp = np.asarray(self.weights), np.asarray(self.responses)
        K = w.shape[0]
        if not 1 <= K <= MAX_HIDDEN:
            raise DomainError(f"hidden alphabet size {K} outside [1, {MAX_HIDDEN}]")
        if resp.shape[:2] != (2, K) or not 1 <= resp.shape[2] <= MAX_OUTCOMES:
            raise DomainError(f"responses must have shape (2, {K}, M<={MAX_OUTCOMES})")
        if np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
            raise DomainError("hidden-variable weights are not a probability vector")
        if np.any(resp < 0) or np.any(np.abs(resp.sum(axis=2) - 1) > 1e-12):
            raise DomainError("response rows are not probability vectors")
        if np.any(np.asarray(self.variances) < 0) or np.any(np.asarray(self.sum_var) < 0):
            raise DomainError("negative quantum variance")

    def as_dict(self):
        return {k: np.asarray(getattr(self, k)).tolist()
                for k in ("weights", "responses", "means", "variances", "sum_var")} | {"kind": self.kind}


def gaussian_bob(mean, cov, theta1=0.0, theta2=math.pi / 2):
    """Means, variances and sum-variance of X_theta1, X_theta2 for Gaussians.

    ``mean`` has shape (K, 2) and ``cov`` (K, 2, 2) over (X, PX).
    """
    n1 = np.array([math.cos(theta1), math.sin(theta1)])
    n2 = np.array([math.cos(theta2), math.sin(theta2)])
    means = np.stack([mean @ n1, mean @ n2])
    variances = np.stack([np.einsum("i,kij,j->k", n, cov, n) for n in (n1, n2)])
    s = n1 + n2
    return means, variances, np.einsum("i,kij,j->k", s, cov, s)


def qubit_bob(bloch):
    """Statistics of S_x, S_z and S_x + S_z for Bloch vectors (..., K, 3)."""
    bx, bz = bloch[..., 0], bloch[..., 2]
    means = np.stack([bx / 2, bz / 2], axis=-2)
    variances = (1 - 4 * means**2) / 4
    return means, variances, 0.5 - (bx + bz) ** 2 / 4


def _stack(model):
    """View one model as a batch of size one."""
    return ModelBatch(*(np.asarray(getattr(model, k))[None] for k in
                        ("weights", "responses", "means", "variances", "sum_var")), model.kind)


@dataclass(frozen=True, eq=False)
class ModelBatch:
    """``B`` models padded to a common alphabet size.

    Unused hidden values carry zero weight and unused outcomes zero
    response probability, so padding never changes any statistic.
    """

    weights: np.ndarray  # (B, K)
    responses: np.ndarray  # (B, 2, K, M)
    means: np.ndarray  # (B, 2, K)
    variances: np.ndarray  # (B, 2, K)
    sum_var: np.ndarray  # (B, K)
    kind: str = "cv"

    def __len__(self):
        return self.weights.shape[0]

    def model(self, i):
        """Model ``i`` with the padding stripped."""
        K = int(np.max(np.nonzero(self.weights[i])[0], initial=0)) + 1
        M = int(np.max(np.nonzero(self.responses[i, :, :K].any(axis=(0, 1)))[0], initial=0)) + 1
        return LhsModel(self.weights[i, :K], self.responses[i, :, :K, :M], self.means[i, :, :K],
                        self.variances[i, :, :K], self.sum_var[i, :K], self.kind)


def _conditionals(batch):
    """P(y), the mixture bound sum_l P(l|y) Var_Q(X|l), E[X|y] and E[X^2|y].

    Shapes are (B, 2, M), one entry per setting and outcome.
    """
    joint = batch.weights[:, None, :, None] * batch.responses
    py = joint.sum(axis=2)
    post = joint / np.where(py > 0, py, 1.0)[:, :, None, :]
    mu, var = batch.means, batch.variances
    bound = np.einsum("bskm,bsk->bsm", post, var)
    m1 = np.einsum("bskm,bsk->bsm", post, mu)
    m2 = np.einsum("bskm,bsk->bsm", post, var + mu**2)
    # law of total variance, centered to avoid cancellation
    spread = np.einsum("bskm,bskm->bsm", post, (mu[..., None] - m1[:, :, None, :]) ** 2)
    return py, bound, bound + spread, m2 - m1**2


def batch_audit(batch):
    """Slack, triangle gap and convexity gap for every model in ``batch``.

    The convexity gap uses the raw-moment form E[X^2|y] - E[X|y]^2 of the
    conditional variance, independent of the centered form used for slack.
    """
    py, bound, cvar, raw = _conditionals(batch)
    inferred = np.sqrt(np.einsum("bsm,bsm->bs", py, cvar))
    mixture = np.sqrt(np.einsum("bk,bk->b", batch.weights, batch.sum_var))
    slack_ = inferred.sum(axis=1) - mixture
    sw = np.sqrt(batch.weights)
    u = sw * np.sqrt(batch.variances[:, 0])
    v = sw * np.sqrt(batch.variances[:, 1])
    norm = np.linalg.norm
    tri = norm(u, axis=1) + norm(v, axis=1) - norm(u + v, axis=1)
    conv = np.where(py > 0, raw - bound, np.inf).min(axis=(1, 2))
    return slack_, tri, conv


def conditional_variances(model, setting):
    """Per-outcome P(y), Var(X|y) and the mixture lower bound sum_l P(l|y) Var_Q(X|l)."""
    py, bound, cvar, _ = _conditionals(_stack(model))
    keep = py[0, setting] > 0
    return py[0, setting, keep], cvar[0, setting, keep], bound[0, setting, keep]


def lhs_inferred_variances(model):
    """Optimal (conditional-mean) inferred deviations for both targets."""
    out = []
    for setting in (0, 1):
        py, cvar, _ = conditional_variances(model, setting)
        out.append(math.sqrt(float(py @ cvar)))
    return tuple(out)


def mixture_sum_bound(model):
    """sqrt(sum_l P(l) Delta_Q(X1 + X2 | l)^2), the LHS lower bound."""
    return math.sqrt(float(np.asarray(model.weights) @ np.asarray(model.sum_var)))


def triangle_gap(model):
    """|u| + |v| - |u + v| for u_i = sqrt(P_i) Delta_Q(X1|l_i), v likewise."""
    return float(batch_audit(_stack(model))[1][0])


def convexity_gap(model):
    """Smallest Var(X|y) - sum_l P(l|y) Var_Q(X|l) over outcomes and settings."""
    return float(batch_audit(_stack(model))[2][0])


def slack(model):
    d1, d2 = lhs_inferred_variances(model)
    return d1 + d2 - mixture_sum_bound(model)


def _dirichlet_rows(rng, alpha, mask):
    """Dirichlet draws restricted to the ``True`` entries of ``mask``."""
    g = np.maximum(rng.standard_gamma(np.broadcast_to(alpha, mask.shape)), 1e-300) * mask
    return g / g.sum(axis=-1, keepdims=True)


def random_models(rng, count, kind="cv"):
    """Draw ``count`` random LHS models as one padded :class:`ModelBatch`.

    Alphabet sizes vary per model; about 30% of models give Alice
    deterministic responses, the most informative case.
    """
    if kind not in ("cv", "qubit"):
        raise DomainError(f"kind must be 'cv' or 'qubit', got {kind!r}")
    B, Kx, Mx = count, MAX_HIDDEN, MAX_OUTCOMES
    K = rng.integers(1, Kx + 1, B)
    M = rng.integers(1, Mx + 1, B)
    lam = np.arange(Kx) < K[:, None]
    out = np.arange(Mx) < M[:, None]
    weights = _dirichlet_rows(rng, rng.uniform(0.2, 2.0, B)[:, None], lam)
    soft = _dirichlet_rows(rng, rng.uniform(0.1, 2.0, B)[:, None, None, None],
                           np.broadcast_to(out[:, None, None, :], (B, 2, Kx, Mx)))
    idx = np.floor(rng.random((B, 2, Kx)) * M[:, None, None]).astype(int)
    hard = (np.arange(Mx) == idx[..., None]).astype(float)
    deterministic = rng.random(B) < 0.3
    responses = np.where(deterministic[:, None, None, None], hard, soft)
    if kind == "cv":
        # squeezed, rotated, possibly thermal Gaussian: det(cov) = nu^2 / 4 >= 1/4
        s = rng.uniform(-2.0, 2.0, (B, Kx))
        nu = 1.0 + rng.exponential(0.5, (B, Kx)) * (rng.random((B, Kx)) < 0.5)
        ang = rng.uniform(0, math.pi, (B, Kx))
        a, b = nu * np.exp(-2 * s) / 2, nu * np.exp(2 * s) / 2
        c2, s2 = np.cos(ang) ** 2, np.sin(ang) ** 2
        vxx, vpp = a * c2 + b * s2, a * s2 + b * c2
        vxp = (a - b) * np.cos(ang) * np.sin(ang)
        means = rng.normal(0, 2.0, size=(B, 2, Kx))
        variances = np.stack([vxx, vpp], axis=1)
        sum_var = vxx + vpp + 2 * vxp
    else:
        v = rng.normal(size=(B, Kx, 3))
        v /= np.linalg.norm(v, axis=-1, keepdims=True)
        radius = np.where(rng.random((B, Kx)) < 0.5, 1.0, rng.random((B, Kx)) ** (1 / 3))
        means, variances, sum_var = qubit_bob(v * radius[..., None])
    return ModelBatch(weights, responses, means, variances, sum_var, kind)


def random_model(rng, kind="cv"):
    """Draw a single random LHS model."""
    return random_models(rng, 1, kind).model(0)


@dataclass
class CertificationReport:
    samples: int
    violations: int
    min_slack: float
    seed: int
    kind: str = "cv"
    min_triangle_gap: float = float("inf")
    min_convexity_gap: float = float("inf")
    offending: list = field(default_factory=list, repr=False)

    def to_json(self):
        return json.dumps({"samples": self.samples, "violations": self.violations,
                           "min_slack": self.min_slack, "seed": self.seed})


BATCH = 500


def certify_no_violation(samples, seed, kind="cv", tol=1e-12, raise_on_violation=False):
    """Sample ``samples`` LHS models and count violations of the sum bound.

    Models are drawn in batches; batch ``i`` uses the ``i``-th child of the
    master seed, so results do not depend on how batches are scheduled.
    """
    if samples < 1000:
        raise DomainError(f"need at least 1000 samples, got {samples}")
    report = CertificationReport(samples, 0, float("inf"), seed, kind)
    children = np.random.SeedSequence(seed).spawn(-(-samples // BATCH))
    for i, child in enumerate(children):
        batch = random_models(np.random.default_rng(child), min(BATCH, samples - i * BATCH), kind)
        s, tri, conv = batch_audit(batch)
        report.min_slack = min(report.min_slack, float(s.min()))
        report.min_triangle_gap = min(report.min_triangle_gap, float(tri.min()))
        report.min_convexity_gap = min(report.min_convexity_gap, float(conv.min()))
        for j in np.nonzero(s < -tol)[0]:
            report.violations += 1
            report.offending.append(batch.model(int(j)).as_dict())
    if report.violations and raise_on_violation:
        raise CertificationError(f"{report.violations} LHS models violate the sum bound",
                                 report.offending[0])
    return report


def adversarial_slack(squeezings=np.linspace(-2.0, 2.0, 41), spreads=np.linspace(0.0, 3.0, 31)):
    """Minimum slack over a grid of maximally informative LHS models.

    Two hidden states with Alice announcing lambda exactly; Bob holds
    minimum-uncertainty Gaussians squeezed by ``s`` and displaced by
    +-``d`` along both quadratures.
    """
    best = float("inf")
    for s in squeezings:
        for d in spreads:
            mean = np.array([[d, d], [-d, -d]])
            cov = np.tile(np.diag([math.exp(-2 * s) / 2, math.exp(2 * s) / 2]), (2, 1, 1))
            means, variances, sum_var = gaussian_bob(mean, cov)
            responses = np.tile(np.eye(2), (2, 1, 1))
            model = LhsModel(np.array([0.5, 0.5]), responses, means, variances, sum_var)
            best = min(best, slack(model))
    return best
