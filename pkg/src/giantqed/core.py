"""Parameter records, effective rates and pole solvers shared by both atom models.

Frequencies and rates carry whatever unit ``gamma`` is given in; every formula is
homogeneous in the frequency scale, so ``gamma=1`` simply means "units of Gamma".
Complex quantities are plain Python/numpy complex numbers.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, replace

from .errors import DegenerateParameters, RequiresResonance

# relative thresholds (multiples of gamma)
POLE_COLLISION_TOL = 1e-9
DENOMINATOR_TOL = 1e-12
DECOUPLED_TOL = 1e-12


@dataclass(frozen=True)
class TwoLevelParams:
    """Two-level giant atom with two coupling points.

    ``theta`` is the phase a resonant photon accumulates between the coupling
    points; under the Markovian approximation it is the only geometric input.
    """

    omega0: float = 100.0
    gamma: float = 1.0
    theta: float = 0.0

    def __post_init__(self):
        for name in ("omega0", "gamma", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")

    @property
    def coupling(self) -> float:
        """Coupling strength V = sqrt(2 Gamma)."""
        return math.sqrt(2.0 * self.gamma)

    def with_theta(self, theta: float) -> "TwoLevelParams":
        return replace(self, theta=theta)


@dataclass(frozen=True)
class ThreeLevelParams:
    """Lambda-type giant atom driven by a control field (Rabi ``omega_rabi``, detuning ``delta``)."""

    omega0: float = 100.0
    gamma: float = 1.0
    theta: float = 0.0
    omega_rabi: float = 0.5
    delta: float = 0.0

    def __post_init__(self):
        for name in ("omega0", "gamma", "theta", "omega_rabi", "delta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.omega_rabi < 0:
            raise ValueError("omega_rabi must be nonnegative")

    @property
    def coupling(self) -> float:
        return math.sqrt(2.0 * self.gamma)

    def with_theta(self, theta: float) -> "ThreeLevelParams":
        return replace(self, theta=theta)

    def two_level(self) -> TwoLevelParams:
        """The same atom with the control field switched off."""
        return TwoLevelParams(self.omega0, self.gamma, self.theta)


@dataclass(frozen=True)
class IncidentPair:
    """Two incident photon frequencies.

    ``E`` and ``delta1`` are derived, never stored independently.
    """

    k1: float
    k2: float

    @classmethod
    def equal(cls, k: float) -> "IncidentPair":
        return cls(k, k)

    @property
    def E(self) -> float:
        return self.k1 + self.k2

    @property
    def delta1(self) -> float:
        return (self.k1 - self.k2) / 2.0


class PoleLabel(enum.Enum):
    TWO_LEVEL = "TwoLevel"
    GAMMA_PLUS = "GammaPlus"
    GAMMA_MINUS = "GammaMinus"
    LAMBDA1 = "Lambda1"
    LAMBDA2 = "Lambda2"


@dataclass(frozen=True)
class PoleData:
    location: complex
    label: PoleLabel


def gamma_prime(params: TwoLevelParams | ThreeLevelParams) -> complex:
    """Complex effective coupling Gamma' = Gamma (1 + exp(i theta))."""
    return params.gamma * (1.0 + cmath.exp(1j * params.theta))


def effective_decay(params: TwoLevelParams | ThreeLevelParams) -> float:
    """Gamma (1 + cos theta), the real part of Gamma'."""
    return params.gamma * (1.0 + math.cos(params.theta))


def is_decoupled(params: TwoLevelParams | ThreeLevelParams) -> bool:
    return effective_decay(params) <= DECOUPLED_TOL * params.gamma


def principal_sqrt(z: complex) -> complex:
    """Square root with Re >= 0, and Im >= 0 when the real part vanishes.

    ``cmath.sqrt`` already returns Re >= 0 but follows the sign of a signed
    zero imaginary part, so sqrt(-4 - 0j) would come back as -2j.
    """
    r = cmath.sqrt(complex(z))
    if r.real < 0 or (r.real == 0 and r.imag < 0):
        r = -r
    return complex(r.real + 0.0, r.imag + 0.0)


def two_level_pole(params: TwoLevelParams) -> tuple[float, float]:
    """Eigenfrequency and effective decay rate of the single scattering pole.

    The pole sits at omega_tilde - i gamma_tilde.
    """
    omega_tilde = params.omega0 + params.gamma * math.sin(params.theta)
    gamma_tilde = effective_decay(params)
    return omega_tilde, gamma_tilde


def lambda_pair(params: ThreeLevelParams, branch: int = 1) -> tuple[complex, complex]:
    """Roots lambda_1 (+ branch) and lambda_2 (- branch) of the three-level denominator.

    ``branch=-1`` flips the sign of the square root, which swaps the labels.
    """
    gp = gamma_prime(params)
    root = branch * principal_sqrt((-params.delta + 1j * gp) ** 2 + params.omega_rabi**2)
    centre = 2.0 * params.omega0 - params.delta - 1j * gp
    lam1 = 0.5 * (centre + root)
    lam2 = 0.5 * (centre - root)
    if abs(lam1 - lam2) < POLE_COLLISION_TOL * params.gamma:
        raise DegenerateParameters(f"lambda_1 and lambda_2 collide for {params}")
    return lam1, lam2


def gamma_pm(params: ThreeLevelParams, branch: int = 1) -> tuple[complex, complex]:
    """Poles gamma_+ and gamma_- of the resonant (delta = 0) three-level atom."""
    if params.delta != 0:
        raise RequiresResonance("gamma_pm is only defined for delta = 0")
    gp = gamma_prime(params)
    root = branch * principal_sqrt(params.omega_rabi**2 - gp**2)
    if abs(root) < POLE_COLLISION_TOL * params.gamma:
        raise DegenerateParameters(f"gamma_+ and gamma_- collide for {params}")
    centre = params.omega0 - 0.5j * gp
    return centre + 0.5 * root, centre - 0.5 * root


def poles(params: TwoLevelParams | ThreeLevelParams, branch: int = 1) -> list[PoleData]:
    """Pole list for either model (gamma_pm at delta = 0, lambda_pair otherwise)."""
    if isinstance(params, TwoLevelParams):
        w, g = two_level_pole(params)
        return [PoleData(complex(w, -g), PoleLabel.TWO_LEVEL)]
    if params.delta == 0:
        gp_, gm_ = gamma_pm(params, branch)
        return [PoleData(gp_, PoleLabel.GAMMA_PLUS), PoleData(gm_, PoleLabel.GAMMA_MINUS)]
    l1, l2 = lambda_pair(params, branch)
    return [PoleData(l1, PoleLabel.LAMBDA1), PoleData(l2, PoleLabel.LAMBDA2)]
