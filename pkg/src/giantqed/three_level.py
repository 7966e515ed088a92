"""Closed-form observables of the Lambda-type three-level giant atom.

Bound-state quantities (B, spectra, F, chi, g2) are only available at zero
control detuning. Every function that depends on the square-root branch takes
``branch=+1`` (principal root) or ``branch=-1``; observables are
branch-independent, only the gamma_+/gamma_- labels swap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DENOMINATOR_TOL,
    IncidentPair,
    ThreeLevelParams,
    effective_decay,
    gamma_pm,
    gamma_prime,
    is_decoupled,
    lambda_pair,
)
from .errors import (
    DegenerateDenominator,
    DegenerateParameters,
    DivergentNormalization,
    PoleCollision,
    RequiresResonance,
)
from .two_level import NORMALIZATION_TOL, SQRT2_PI, WavefunctionCoeffs2, _check

# a pole whose weight is this small relative to the total carries no bound state
ZERO_WEIGHT_TOL = 1e-12
# |Im F| allowed before the realness contract is considered broken
F_REALNESS_TOL = 1e-10


@dataclass(frozen=True)
class AmplitudeSet3:
    t1: complex
    t2: complex
    r1: complex
    r2: complex
    ue: complex
    us: complex

    @property
    def flux(self):
        return np.abs(self.t2) ** 2 + np.abs(self.r1) ** 2


@dataclass(frozen=True)
class GreenMatrix3:
    """Two-excitation Green's matrix in the basis |d_e d_e>, |d_e d_s>, |d_s d_s>."""

    g: np.ndarray

    def __getitem__(self, idx):
        return self.g[idx]


@dataclass(frozen=True)
class BoundState3:
    """Resonant bound state A_+ e^{i(E/2-gamma_+)|x|} + A_- e^{i(E/2-gamma_-)|x|}."""

    a_plus: complex
    a_minus: complex
    gamma_plus: complex
    gamma_minus: complex
    E: float

    def terms(self):
        """(A, gamma) pairs with non-negligible weight.

        Dropping zero-weight poles matters at omega_rabi = 0, where one pole
        becomes real and carries exactly no amplitude.
        """
        scale = np.abs(self.a_plus) + np.abs(self.a_minus)
        out = []
        for a, g in ((self.a_plus, self.gamma_plus), (self.a_minus, self.gamma_minus)):
            a = np.where(np.abs(a) <= ZERO_WEIGHT_TOL * scale, 0.0, a)
            out.append((a, g))
        return out

    def __call__(self, x):
        x = np.abs(np.asarray(x, dtype=float))
        total = 0j
        for a, g in self.terms():
            if np.all(a == 0):
                continue
            total = total + a * np.exp(1j * (self.E / 2 - g) * x)
        return (total + np.zeros_like(x))[()]

    def slowest_decay(self) -> float:
        """Smallest |Im gamma| among poles that carry weight (inf if none do)."""
        rates = [abs(g.imag) for a, g in self.terms() if np.any(a != 0)]
        return min(rates) if rates else np.inf


def _require_resonance(params: ThreeLevelParams):
    if params.delta != 0:
        raise RequiresResonance("bound-state quantities need delta = 0")


def amplitudes3(params: ThreeLevelParams, k) -> AmplitudeSet3:
    """Single-photon amplitudes including the control-field dressing."""
    g = params.gamma
    gp = gamma_prime(params)
    w0 = params.omega0
    a = w0 - params.delta - k
    quarter = params.omega_rabi**2 / 4
    den = a * (w0 - k - 1j * gp) - quarter
    _check(den, g**2, "single-photon")
    c = np.sqrt(g / np.pi) * np.cos(params.theta / 2)
    return AmplitudeSet3(
        t1=(a * (w0 - k - 0.5j * gp) - quarter) / den,
        t2=(a * (w0 - k + g * np.sin(params.theta)) - quarter) / den,
        r1=1j * effective_decay(params) * a / den,
        r2=0.5j * gp * a / den,
        ue=-c * a / den,
        us=0.5 * params.omega_rabi * c / den,
    )


def f1_f2(lambda1: complex, lambda2: complex, E: float) -> tuple[complex, complex]:
    l1, l2 = complex(lambda1), complex(lambda2)
    f1 = (2 * l1 - E) * (l1 - l1.conjugate()) ** 2 * (l1 - l2.conjugate()) ** 2
    f2 = (E - l1 - l2) * (l1 - l1.conjugate()) * (l2 - l2.conjugate()) * abs(l1 - l2.conjugate()) ** 2
    return f1, f2


def green_matrix3(params: ThreeLevelParams, E: float, branch: int = 1) -> GreenMatrix3:
    """Symmetric 3x3 two-excitation Green's matrix at total energy E (any delta)."""
    if is_decoupled(params):
        return GreenMatrix3(np.zeros((3, 3), dtype=complex))
    l1, l2 = lambda_pair(params, branch)
    om = params.omega_rabi
    shift = params.delta - params.omega0
    f12 = f1_f2(l1, l2, E)
    f21 = f1_f2(l2, l1, E)
    # f1/f2 only vanish identically (a real root at omega_rabi = 0); tiny values
    # near that limit cancel against matching powers in the numerators
    for f in (*f12, *f21):
        if f == 0:
            raise DegenerateDenominator("f1/f2 vanish; a root lambda is real")

    def sym(term):
        return term(l1, l2, *f12) + term(l2, l1, *f21)

    def p(lam):
        return lam + shift

    pre = params.gamma**2 * np.cos(params.theta / 2) ** 4 / (l1 - l2) ** 2
    g11 = 16 * pre * sym(lambda a, b, f1, f2: p(a) ** 4 / f1 - p(a) ** 2 * p(b) ** 2 / f2)
    g22 = 4 * om**2 * pre * sym(lambda a, b, f1, f2: p(a) ** 2 / f1 - (p(a) + p(b)) ** 2 / (4 * f2))
    g33 = om**4 * pre * sym(lambda a, b, f1, f2: 1 / f1 - 1 / f2)
    g12 = 8 * om * pre * sym(lambda a, b, f1, f2: p(a) ** 3 / f1 - p(a) ** 2 * p(b) / f2)
    g13 = 4 * om**2 * pre * sym(lambda a, b, f1, f2: p(a) ** 2 / f1 - p(a) * p(b) / f2)
    g23 = 2 * om**3 * pre * sym(lambda a, b, f1, f2: p(a) / f1 - p(a) / f2)
    g = np.array([[g11, g12, g13], [g12, g22, g23], [g13, g23, g33]], dtype=complex)
    return GreenMatrix3(g)


def bound_coefficients_A(params: ThreeLevelParams, pair: IncidentPair, branch: int = 1) -> BoundState3:
    """Weights A_+/A_- and poles gamma_+/gamma_- of the resonant bound state.

    Accepts array-valued photon frequencies inside ``pair``.
    """
    _require_resonance(params)
    k1 = np.asarray(pair.k1, dtype=float)
    k2 = np.asarray(pair.k2, dtype=float)
    E = k1 + k2
    w0 = params.omega0
    if is_decoupled(params):
        try:
            gpl, gmi = gamma_pm(params, branch)
        except DegenerateParameters:
            gpl = gmi = complex(w0)
        zero = np.zeros_like(E, dtype=complex)[()]
        return BoundState3(zero, zero, gpl, gmi, E[()])
    gpl, gmi = gamma_pm(params, branch)
    gp = gamma_prime(params)
    root = gpl - gmi  # sqrt(Omega^2 - Gamma'^2) on the chosen branch
    tol = DENOMINATOR_TOL * params.gamma
    for k in (k1, k2):
        for g in (gpl, gmi):
            if np.any(np.abs(k - g) <= tol):
                raise PoleCollision("incident frequency coincides with a pole")
    den = (k1 - gpl) * (k1 - gmi) * (k2 - gpl) * (k2 - gmi)
    pre = effective_decay(params) ** 2 / (2 * root)
    cross = (E - 2 * w0) * params.omega_rabi**2 / 4
    prod = (k1 - w0) * (k2 - w0)
    a_plus = pre * (cross + prod * (root - 1j * gp)) / den
    a_minus = pre * (-cross + prod * (root + 1j * gp)) / den
    return BoundState3(a_plus[()], a_minus[()], gpl, gmi, E[()])


def bound_state3(params: ThreeLevelParams, pair: IncidentPair, x, branch: int = 1):
    """Resonant two-photon bound state B(x)."""
    return bound_coefficients_A(params, pair, branch)(x)


def wavefunction_coeffs3(
    params: ThreeLevelParams, pair: IncidentPair, x1, x2, branch: int = 1
) -> WavefunctionCoeffs2:
    """f_RR, f_LL, f_RL: plane-wave part from the dressed amplitudes plus the bound state."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    x = x2 - x1
    xc = 0.5 * (x1 + x2)
    E, d1 = pair.E, pair.delta1
    a1 = amplitudes3(params, pair.k1)
    a2 = amplitudes3(params, pair.k2)
    bs = bound_coefficients_A(params, pair, branch)
    f_rr = np.exp(1j * E * xc) / SQRT2_PI * (a1.t2 * a2.t2 * np.cos(d1 * x) + bs(x))
    f_ll = np.exp(-1j * E * xc) / SQRT2_PI * (a1.r1 * a2.r1 * np.cos(d1 * x) + bs(x))
    f_rl = (
        np.exp(0.5j * E * x)
        / (2 * np.pi)
        * (a1.t2 * a2.r1 * np.exp(2j * d1 * xc) + a1.r1 * a2.t2 * np.exp(-2j * d1 * xc) + 2 * bs(xc))
    )
    return WavefunctionCoeffs2(f_rr[()], f_ll[()], f_rl[()])


def incoherent_spectrum3(params: ThreeLevelParams, pair: IncidentPair, omega, branch: int = 1):
    """Incoherent power spectrum of the transmitted (or reflected) field."""
    omega = np.asarray(omega, dtype=float)
    bs = bound_coefficients_A(params, pair, branch)
    E = pair.E
    amp = np.zeros_like(omega, dtype=complex)
    for a, g in bs.terms():
        if np.all(a == 0):
            continue
        amp = amp + a * (E - 2 * g) / ((E - omega - g) * (omega - g))
    return (np.abs(amp) ** 2 / np.pi**2)[()]


def total_F3(params: ThreeLevelParams, k, branch: int = 1):
    """Total incoherent flux for two photons of equal frequency k."""
    k = np.asarray(k, dtype=float)
    bs = bound_coefficients_A(params, IncidentPair(k, k), branch)
    terms = bs.terms()
    total = np.zeros_like(k, dtype=complex)
    size = np.zeros_like(k)
    for am, gm in terms:
        for an, gn in terms:
            num = np.conj(am) * an
            den = np.conj(gm) - gn
            with np.errstate(divide="ignore", invalid="ignore"):
                t = np.where(num == 0, 0.0, num / den)
            total = total + t
            size = size + np.abs(t)
    total = 8j / np.pi * total
    size = 8 / np.pi * size
    if np.any(np.abs(total.imag) > F_REALNESS_TOL * size + 1e-14):
        raise ArithmeticError("F(k) picked up an imaginary part; pole weights are inconsistent")
    return total.real[()]


def chi3(params: ThreeLevelParams, k):
    """(chi_R, chi_L) for equal incident frequencies at delta = 0."""
    _require_resonance(params)
    k = np.asarray(k, dtype=float)
    if is_decoupled(params):
        z = np.zeros_like(k)[()]
        return z, z
    amps = amplitudes3(params, k)
    b0 = bound_state3(params, IncidentPair(k, k), 0.0)
    chi_r = np.abs(amps.t2**2 + b0) ** 2 - np.abs(amps.t2) ** 4
    chi_l = np.abs(amps.r1**2 + b0) ** 2 - np.abs(amps.r1) ** 4
    return chi_r[()], chi_l[()]


def g2_three_level(params: ThreeLevelParams, k: float, x, direction: str = "R", branch: int = 1):
    """Normalized second-order correlation for equal incident frequencies k."""
    _require_resonance(params)
    amps = amplitudes3(params, k)
    if direction == "R":
        amp = amps.t2
    elif direction == "L":
        amp = amps.r1
    else:
        raise ValueError("direction must be 'R' or 'L'")
    if abs(amp) ** 2 < NORMALIZATION_TOL:
        raise DivergentNormalization(f"single-photon {'transmission' if direction == 'R' else 'reflection'} vanishes")
    bs = bound_coefficients_A(params, IncidentPair(k, k), branch)
    if direction == "L":
        # B(0) = -r1^2 at equal frequencies, so subtracting B(0) avoids the
        # cancellation in 1 + B(x)/r1^2 and makes g2_L(0) exactly zero
        return (np.abs((bs(x) - bs(0.0)) / amp**2) ** 2)[()]
    return (np.abs(1 + bs(x) / amp**2) ** 2)[()]


def g2R_zero_closed_form(params: ThreeLevelParams, k1: float, k2: float) -> float:
    """g2_R(0) written directly in the incident frequencies."""
    _require_resonance(params)
    w0 = params.omega0
    ratio = effective_decay(params) ** 2
    for k in (k1, k2):
        den = (w0 - k) * (w0 - k + params.gamma * np.sin(params.theta)) - params.omega_rabi**2 / 4
        if abs(den) <= DENOMINATOR_TOL * params.gamma**2:
            raise DivergentNormalization("single-photon transmission vanishes")
        ratio = ratio * (k - w0) / den
    return float(abs(1 + ratio) ** 2)
