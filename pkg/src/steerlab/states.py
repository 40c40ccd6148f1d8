"""State descriptors and the ``family:key=value`` string format.

Continuous-variable families know how to evaluate their Wigner function;
the Werner family is a two-qubit state handled by :mod:`steerlab.discrete`.
"""

from dataclasses import dataclass

from . import phase_space
from .errors import DomainError


@dataclass(frozen=True)
class TMSV:
    """Two-mode squeezed vacuum with real squeezing parameter ``r``."""

    r: float
    family = "tmsv"

    def __post_init__(self):
        if not self.r >= 0:
            raise DomainError(f"squeezing r must be >= 0, got {self.r}")

    @property
    def param(self):
        return self.r

    def wigner(self, X, PX, Y, PY):
        return phase_space.wigner_tmsv(self.r, X, PX, Y, PY)


@dataclass(frozen=True)
class PhotonSubtracted:
    """Single-photon-subtracted TMSV.

    ``k`` labels the sign of the superposition; the Wigner function used
    here does not depend on it and it is kept for bookkeeping only.
    """

    r: float
    k: int = 0
    family = "psub"

    def __post_init__(self):
        if not self.r >= 0:
            raise DomainError(f"squeezing r must be >= 0, got {self.r}")
        if self.k not in (0, 1):
            raise DomainError(f"k must be 0 or 1, got {self.k}")

    @property
    def param(self):
        return self.r

    def wigner(self, X, PX, Y, PY):
        return phase_space.wigner_photon_subtracted(self.r, X, PX, Y, PY)


@dataclass(frozen=True)
class LaguerreGauss:
    """Two-dimensional oscillator eigenstate LG_{m,n}."""

    m: int
    n: int
    family = "lg"

    def __post_init__(self):
        for name in ("m", "n"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise DomainError(f"{name} must be a non-negative integer, got {v}")

    @property
    def param(self):
        return self.n

    def wigner(self, X, PX, Y, PY):
        return phase_space.wigner_lg(self.m, self.n, X, PX, Y, PY)


@dataclass(frozen=True)
class Werner:
    """Two-qubit Werner state p|psi-><psi-| + (1-p) I/4."""

    p: float
    family = "werner"

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"Werner weight p must lie in [0, 1], got {self.p}")

    @property
    def param(self):
        return self.p


CV_FAMILIES = ("tmsv", "psub", "lg")
FAMILIES = CV_FAMILIES + ("werner",)

# parameter swept by default for each family
SWEEP_PARAM = {"tmsv": "r", "psub": "r", "lg": "n", "werner": "p"}


def make_state(family, **params):
    """Build a descriptor from a family name and keyword parameters."""
    if family == "tmsv":
        return TMSV(float(params.get("r", 0.0)))
    if family == "psub":
        return PhotonSubtracted(float(params.get("r", 0.0)), _as_int(params.get("k", 0)))
    if family == "lg":
        return LaguerreGauss(_as_int(params.get("m", 0)), _as_int(params.get("n", 0)))
    if family == "werner":
        return Werner(float(params.get("p", 0.0)))
    raise DomainError(f"unknown state family {family!r}; expected one of {FAMILIES}")


def _as_int(v):
    f = float(v)
    if not f.is_integer():
        raise DomainError(f"expected an integer, got {v!r}")
    return int(f)


def parse_state(text):
    """Parse strings such as ``"tmsv:r=0.5"`` or ``"lg:m=0,n=2"``."""
    family, _, rest = text.strip().partition(":")
    family = family.strip().lower()
    if family not in FAMILIES:
        raise DomainError(f"unknown state family {family!r} in {text!r}")
    allowed = {"tmsv": {"r"}, "psub": {"r", "k"}, "lg": {"m", "n"}, "werner": {"p"}}[family]
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        key = key.strip()
        if not eq or key not in allowed:
            raise DomainError(f"bad parameter {item!r} for family {family!r}")
        try:
            params[key] = float(value)
        except ValueError:
            raise DomainError(f"non-numeric value in {item!r}") from None
    return make_state(family, **params)


def format_state(desc):
    if isinstance(desc, TMSV):
        return f"tmsv:r={desc.r:g}"
    if isinstance(desc, PhotonSubtracted):
        return f"psub:r={desc.r:g},k={desc.k}"
    if isinstance(desc, LaguerreGauss):
        return f"lg:m={desc.m},n={desc.n}"
    return f"werner:p={desc.p:g}"
