"""Exception types raised by the scattering formulas and oracles."""


class ScatteringError(ValueError):
    """Base class for numerical failures of the closed-form expressions."""


class DegenerateParameters(ScatteringError):
    """Two poles collide, so formulas dividing by their difference blow up."""


class DegenerateDenominator(ScatteringError):
    """A closed-form denominator vanishes at the requested point."""


class RequiresResonance(ScatteringError):
    """The expression is only available for zero control detuning."""


class DecoupledAtom(ScatteringError):
    """The atom decouples from the waveguide (theta = pi)."""


class DivergentNormalization(ScatteringError):
    """The single-photon normalization of g2 vanishes."""


class PoleCollision(ScatteringError):
    """An incident frequency sits on a scattering pole."""


class MaxDepthExceeded(RuntimeError):
    """Adaptive quadrature ran out of bisection depth before converging."""


class TruncationFailure(RuntimeError):
    """Doubling the cutoff of an improper integral kept changing the result."""
