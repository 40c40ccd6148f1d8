"""Two-qubit steering: Werner states, spin inferred variances and the
sum, entropic and CHSH-type steering functionals.

Qubit ordering is Alice (first factor) then Bob. Variance-based criteria
use spin-1/2 observables S = sigma/2; the entropic and CHSH-type criteria
use Pauli observables with outcomes +-1. Shannon entropies are in bits.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize

from .errors import DegenerateMomentError, DomainError
from .verdict import SteeringVerdict, safe_ratio

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"x": SX, "y": SY, "z": SZ}
SPIN = {k: v / 2 for k, v in PAULI.items()}

SINGLET = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)

# the entropic bound for two mutually unbiased qubit bases is log2(2) = 1 bit
ENTROPIC_BOUND_BITS = 1.0


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (4, 4):
            raise DomainError(f"two-qubit state must be 4x4, got {rho.shape}")
        if not np.allclose(rho, rho.conj().T, atol=1e-12):
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1) > 1e-12:
            raise DomainError(f"density matrix has trace {np.trace(rho).real}")
        if np.linalg.eigvalsh(rho).min() < -1e-10:
            raise DomainError("density matrix is not positive semidefinite")
        object.__setattr__(self, "rho", rho)

    def bob(self):
        """Bob's reduced density matrix."""
        return np.einsum("abad->bd", self.rho.reshape(2, 2, 2, 2))

    def alice(self):
        return np.einsum("abcb->ac", self.rho.reshape(2, 2, 2, 2))


def _rho(state):
    return state.rho if isinstance(state, TwoQubitState) else TwoQubitState(state).rho


def werner(p):
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"Werner weight p must lie in [0, 1], got {p}")
    return TwoQubitState(p * np.outer(SINGLET, SINGLET.conj()) + (1 - p) * np.eye(4) / 4)


def expectation(state, A, B):
    """Tr[rho (A (x) B)], with A acting on Alice and B on Bob."""
    return float(np.real(np.trace(_rho(state) @ np.kron(A, B))))


def spin_inferred_std(state, target, estimator):
    """Reid inferred deviation of Bob's ``target`` from Alice's ``estimator``.

    The optimal linear gain g = <AB>/<A^2> leaves sqrt(<B^2> - <AB>^2/<A^2>).
    """
    a2 = expectation(state, estimator @ estimator, I2)
    if a2 <= 0:
        raise DegenerateMomentError("estimator has vanishing second moment")
    b2 = expectation(state, I2, target @ target)
    ab = expectation(state, estimator, target)
    return math.sqrt(max(b2 - ab * ab / a2, 0.0))


def sum_spin_std(state, B1, B2):
    """Standard deviation of B1 + B2 on Bob's reduced state."""
    rho_b = _rho_bob(state)
    S = B1 + B2
    mean = np.real(np.trace(rho_b @ S))
    return math.sqrt(max(np.real(np.trace(rho_b @ S @ S)) - mean**2, 0.0))


def _rho_bob(state):
    if not isinstance(state, TwoQubitState):
        state = TwoQubitState(state)
    return state.bob()


def sum_steering_discrete(state):
    """Sum criterion with targets S_x, S_z inferred from Alice's S_x, S_z."""
    lhs = spin_inferred_std(state, SPIN["x"], SPIN["x"]) + spin_inferred_std(state, SPIN["z"], SPIN["z"])
    rhs = sum_spin_std(state, SPIN["x"], SPIN["z"])
    return SteeringVerdict("sum", lhs, rhs, safe_ratio(rhs, lhs))


def _shannon_bits(p):
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def outcome_distribution(state, A, B):
    """Joint outcome probabilities of two +-1 observables."""
    rho = _rho(state)
    projA = [(I2 + s * A) / 2 for s in (1, -1)]
    projB = [(I2 + s * B) / 2 for s in (1, -1)]
    return np.array([[np.real(np.trace(rho @ np.kron(pa, pb))) for pb in projB] for pa in projA])


def conditional_shannon(state, A, B):
    """H(B|A) in bits for Pauli measurements A (Alice) and B (Bob)."""
    joint = np.clip(outcome_distribution(state, A, B), 0.0, None)
    return _shannon_bits(joint) - _shannon_bits(joint.sum(axis=1))


def entropic_sum(state):
    return conditional_shannon(state, SX, SX) + conditional_shannon(state, SZ, SZ)


def werner_entropic_sum(p):
    """Closed form -sum_(+-) (1 +- p) log2((1 +- p)/2) for Werner states."""
    return -sum(q * math.log2(q / 2) for q in (1 + p, 1 - p) if q > 0)


def entropic_steering_discrete(state):
    """Entropic criterion H(B_x|A_x) + H(B_z|A_z) >= 1 bit."""
    lhs = entropic_sum(state)
    return SteeringVerdict("entropic", lhs, ENTROPIC_BOUND_BITS, safe_ratio(ENTROPIC_BOUND_BITS, lhs))


def _is_dichotomic(op):
    op = np.asarray(op, dtype=complex)
    return (
        op.shape == (2, 2)
        and np.allclose(op, op.conj().T, atol=1e-12)
        and np.allclose(op @ op, I2, atol=1e-10)
    )


def chsh_steering(state, A1, A2, B1, B2):
    """CHSH-type steering functional; steering is shown when it exceeds 2."""
    for name, op in (("A1", A1), ("A2", A2), ("B1", B1), ("B2", B2)):
        if not _is_dichotomic(op):
            raise DomainError(f"{name} is not a dichotomic (+-1) qubit observable")
    rho = _rho(state)

    def e(A, B):
        return expectation(rho, A, B)

    return math.hypot(e(A1 + A2, B1), e(A1 + A2, B2)) + math.hypot(e(A1 - A2, B1), e(A1 - A2, B2))


def xz_observable(angle):
    """Pauli observable cos(a) sigma_z + sin(a) sigma_x."""
    return math.cos(angle) * SZ + math.sin(angle) * SX


def optimal_chsh(state, scan=181):
    """Maximize the CHSH-type functional over Alice's settings.

    Alice's observables lie on the X-Z great circle and Bob measures
    sigma_x and sigma_z. Correlators are linear in Alice's Bloch vector, so
    a vectorized dense scan is cheap; Nelder-Mead refines the best node.
    Returns ``(value, a1, a2)``.
    """
    rho = _rho(state)
    # T[i, j] = <s_i (x) B_j>, s = (sigma_z, sigma_x), B = (sigma_x, sigma_z)
    T = np.array([[expectation(rho, a, b) for b in (SX, SZ)] for a in (SZ, SX)])

    def value(a1, a2):
        u1 = np.stack([np.cos(a1), np.sin(a1)], axis=-1)
        u2 = np.stack([np.cos(a2), np.sin(a2)], axis=-1)
        plus, minus = (u1 + u2) @ T, (u1 - u2) @ T
        return np.hypot(plus[..., 0], plus[..., 1]) + np.hypot(minus[..., 0], minus[..., 1])

    grid = np.linspace(0, 2 * math.pi, scan, endpoint=False)
    vals = value(grid[:, None], grid[None, :])
    i, j = np.unravel_index(np.argmax(vals), vals.shape)
    res = minimize(lambda a: -float(value(a[0], a[1])), x0=[grid[i], grid[j]], method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000})
    if -res.fun >= vals[i, j]:
        return -float(res.fun), float(res.x[0]), float(res.x[1])
    return float(vals[i, j]), float(grid[i]), float(grid[j])


def chsh_verdict(state):
    value = optimal_chsh(state)[0]
    return SteeringVerdict("chsh", value, 2.0, value / 2.0)


# -- closed forms for Werner states and threshold searches ------------------


def werner_inferred_std(p):
    return math.sqrt(max(1 - p * p, 0.0)) / 2


def werner_sum_margin(p, method="analytic"):
    """Bound minus inferred sum; positive exactly when the state steers."""
    if method == "analytic":
        return 1 / math.sqrt(2) - 2 * werner_inferred_std(p)
    v = sum_steering_discrete(werner(p))
    return v.rhs - v.lhs


def sum_threshold(method="analytic", xtol=1e-12):
    return brentq(lambda p: werner_sum_margin(p, method), 0.0, 1.0, xtol=xtol)


def entropic_threshold(method="analytic", xtol=1e-12):
    if method == "analytic":
        f = werner_entropic_sum
    else:
        def f(p):
            return entropic_sum(werner(p))
    return brentq(lambda p: ENTROPIC_BOUND_BITS - f(p), 1e-9, 1.0, xtol=xtol)


def chsh_threshold(xtol=1e-10):
    return brentq(lambda p: optimal_chsh(werner(p))[0] - 2.0, 0.1, 1.0, xtol=xtol)


def werner_verdict(p, criterion):
    state = werner(p)
    if criterion == "sum":
        return sum_steering_discrete(state)
    if criterion == "entropic":
        return entropic_steering_discrete(state)
    if criterion == "chsh":
        return chsh_verdict(state)
    raise DomainError(f"criterion {criterion!r} is not defined for Werner states")
