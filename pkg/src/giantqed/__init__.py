"""Two-photon scattering observables of two-point giant atoms in a waveguide."""

from .core import (
    IncidentPair,
    PoleData,
    PoleLabel,
    ThreeLevelParams,
    TwoLevelParams,
    effective_decay,
    gamma_pm,
    gamma_prime,
    is_decoupled,
    lambda_pair,
    poles,
    principal_sqrt,
    two_level_pole,
)
from .errors import (
    DecoupledAtom,
    DegenerateDenominator,
    DegenerateParameters,
    DivergentNormalization,
    MaxDepthExceeded,
    PoleCollision,
    RequiresResonance,
    ScatteringError,
    TruncationFailure,
)

__version__ = "0.1.0"
