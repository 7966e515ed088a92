"""Closed-form observables of the two-level giant atom (Markovian phase factors).

Functions accept scalars or numpy arrays for the frequency / position arguments;
parameters are always scalar records.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DENOMINATOR_TOL,
    IncidentPair,
    TwoLevelParams,
    effective_decay,
    gamma_prime,
    is_decoupled,
    two_level_pole,
)
from .errors import DecoupledAtom, DegenerateDenominator, DivergentNormalization

# |t2|^2 or |r1|^2 below this makes the normalized g2 divergent
NORMALIZATION_TOL = 1e-10

SQRT2_PI = np.sqrt(2.0) * np.pi


def _check(den, scale, what):
    if np.any(np.abs(den) <= DENOMINATOR_TOL * scale):
        raise DegenerateDenominator(f"{what} denominator vanishes")


@dataclass(frozen=True)
class AmplitudeSet2:
    t1: complex
    t2: complex
    r1: complex
    r2: complex
    ue: complex

    @property
    def flux(self):
        """|t2|^2 + |r1|^2, equal to one without atomic loss."""
        return np.abs(self.t2) ** 2 + np.abs(self.r1) ** 2


@dataclass(frozen=True)
class WavefunctionCoeffs2:
    f_rr: complex
    f_ll: complex
    f_rl: complex


def amplitudes2(params: TwoLevelParams, k) -> AmplitudeSet2:
    """Single-photon amplitudes.

    t2/r1 are the transmission/reflection outside the coupling region, t1/r2
    the amplitudes between the two coupling points and ue the atomic
    excitation amplitude.
    """
    g = params.gamma
    gp = gamma_prime(params)
    den = params.omega0 - k - 1j * gp
    _check(den, g, "single-photon")
    return AmplitudeSet2(
        t1=(params.omega0 - k - 0.5j * gp) / den,
        t2=(params.omega0 - k + g * np.sin(params.theta)) / den,
        r1=1j * effective_decay(params) / den,
        r2=0.5j * gp / den,
        ue=-np.sqrt(g / np.pi) * np.cos(params.theta / 2) / den,
    )


def green_dd(params: TwoLevelParams, E) -> complex:
    """Doubly-excited-atom Green's function 1 / (E - 2 omega0 + 2i Gamma')."""
    den = E - 2 * params.omega0 + 2j * gamma_prime(params)
    _check(den, params.gamma, "G_dd")
    return 1.0 / den


def green_xd_rr(params: TwoLevelParams, pair: IncidentPair, x1, x2) -> complex:
    """Photon-pair / doubly-excited Green's function for both photons right of the atom."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if np.any(x1 <= 0) or np.any(x2 <= 0):
        raise ValueError("green_xd_rr needs both positions beyond the coupling region (x > 0)")
    E = pair.E
    gp = gamma_prime(params)
    x = np.abs(x2 - x1)
    xc = 0.5 * (x1 + x2)
    out = (
        -effective_decay(params)
        * green_dd(params, E)
        * np.exp(1j * E * xc)
        * np.exp(1j * (E / 2 - params.omega0) * x - gp * x)
    )
    return out[()] if np.ndim(out) == 0 else out


def green_xd(params: TwoLevelParams, pair: IncidentPair, x1, x2, channel: str = "RR"):
    """Any of the four channel Green's functions, obtained from RR by parity."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if channel == "RR":
        return green_xd_rr(params, pair, x1, x2)
    if channel == "LL":
        return green_xd_rr(params, pair, -x1, -x2)
    if channel == "RL":
        return green_xd_rr(params, pair, x1, -x2)
    if channel == "LR":
        return green_xd_rr(params, pair, -x1, x2)
    raise ValueError(f"unknown channel {channel!r}")


def bound_state2(params: TwoLevelParams, pair: IncidentPair, x):
    """Two-photon bound state B(x); depends on |x| only."""
    x = np.abs(np.asarray(x, dtype=float))
    if is_decoupled(params):
        return np.zeros_like(x, dtype=complex)[()]
    gp = gamma_prime(params)
    a = pair.E / 2 - params.omega0 + 1j * gp
    den = a**2 - pair.delta1**2
    _check(den, params.gamma**2, "bound-state")
    num = effective_decay(params) ** 2
    return (num * np.exp(1j * a * x) / den)[()]


def wavefunction_coeffs2(params: TwoLevelParams, pair: IncidentPair, x1, x2) -> WavefunctionCoeffs2:
    """Two-photon scattering coefficients f_RR, f_LL, f_RL.

    Physically meaningful for detection points outside the coupling region;
    the algebraic forms are evaluated for any real positions.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    x = x2 - x1
    xc = 0.5 * (x1 + x2)
    E, d1 = pair.E, pair.delta1
    a1 = amplitudes2(params, pair.k1)
    a2 = amplitudes2(params, pair.k2)
    b = bound_state2(params, pair, x)
    f_rr = np.exp(1j * E * xc) / SQRT2_PI * (a1.t2 * a2.t2 * np.cos(d1 * x) + b)
    f_ll = np.exp(-1j * E * xc) / SQRT2_PI * (a1.r1 * a2.r1 * np.cos(d1 * x) + b)
    f_rl = (
        np.exp(0.5j * E * x)
        / (2 * np.pi)
        * (
            a1.t2 * a2.r1 * np.exp(2j * d1 * xc)
            + a1.r1 * a2.t2 * np.exp(-2j * d1 * xc)
            + 2 * bound_state2(params, pair, xc)
        )
    )
    return WavefunctionCoeffs2(f_rr[()], f_ll[()], f_rl[()])


def upsilon(params: TwoLevelParams, pair: IncidentPair, omega):
    """Spectral amplitude of the bound state, S_incoh = (4/pi^2) |Upsilon|^2.

    For unequal photon frequencies the factor 1/(E/2 - omega0 + i Gamma')
    generalizes to (E/2 - omega0 + i Gamma') / ((E/2 - omega0 + i Gamma')^2 - delta1^2),
    which keeps Upsilon the exact Fourier transform of B(x).
    """
    omega = np.asarray(omega, dtype=float)
    if is_decoupled(params):
        return np.zeros_like(omega, dtype=complex)[()]
    gp = gamma_prime(params)
    w0 = params.omega0
    a = pair.E / 2 - w0 + 1j * gp
    d_pair = a**2 - pair.delta1**2
    d_out = (pair.E - w0 - omega + 1j * gp) * (omega - w0 + 1j * gp)
    _check(d_pair, params.gamma**2, "Upsilon")
    _check(d_out, params.gamma**2, "Upsilon")
    return (effective_decay(params) ** 2 * a / (d_pair * d_out))[()]


def incoherent_spectrum2(params: TwoLevelParams, pair: IncidentPair, omega):
    """Incoherent power spectrum of either output direction (S_R = S_L)."""
    return 4.0 / np.pi**2 * np.abs(upsilon(params, pair, omega)) ** 2


def total_incoherent_F2(params: TwoLevelParams, k):
    """Total incoherent flux F(k) for two photons of equal frequency k.

    Returns zero at the decoupled point theta = pi (check ``is_decoupled``).
    """
    k = np.asarray(k, dtype=float)
    if is_decoupled(params):
        return np.zeros_like(k)[()]
    gt = effective_decay(params)
    den = np.abs(k - params.omega0 + 1j * gamma_prime(params)) ** 4
    return (4 * gt**3 / (np.pi * den))[()]


def f2_peak(params: TwoLevelParams) -> tuple[float, float]:
    """Location omega_tilde and height 4/(pi gamma_tilde) of the F(k) maximum."""
    if is_decoupled(params):
        raise DecoupledAtom("F(k) has no peak at the decoupled point")
    w, g = two_level_pole(params)
    return w, 4.0 / (np.pi * g)


def chi2(params: TwoLevelParams, k):
    """Bound-state enhancement of coincident detection, (chi_R, chi_L)."""
    k = np.asarray(k, dtype=float)
    if is_decoupled(params):
        z = np.zeros_like(k)[()]
        return z, z
    amps = amplitudes2(params, k)
    gp = gamma_prime(params)
    # B(0) for k1 = k2 = k
    b0 = effective_decay(params) ** 2 / (k - params.omega0 + 1j * gp) ** 2
    chi_r = np.abs(amps.t2**2 + b0) ** 2 - np.abs(amps.t2) ** 4
    chi_l = np.abs(amps.r1**2 + b0) ** 2 - np.abs(amps.r1) ** 4
    return chi_r[()], chi_l[()]


def g2_two_level(params: TwoLevelParams, k: float, x, direction: str = "R"):
    """Normalized second-order correlation of the transmitted (R) or reflected (L) field."""
    x = np.abs(np.asarray(x, dtype=float))
    amps = amplitudes2(params, k)
    gp = gamma_prime(params)
    phase = np.exp(1j * (k - params.omega0) * x - gp * x)
    if direction == "R":
        if abs(amps.t2) ** 2 < NORMALIZATION_TOL:
            raise DivergentNormalization("single-photon transmission vanishes")
        detune = k - params.omega0 - params.gamma * np.sin(params.theta)
        out = np.abs(1 + effective_decay(params) ** 2 * phase / detune**2) ** 2
    elif direction == "L":
        if abs(amps.r1) ** 2 < NORMALIZATION_TOL:
            raise DivergentNormalization("single-photon reflection vanishes")
        out = np.abs(1 - phase) ** 2
    else:
        raise ValueError("direction must be 'R' or 'L'")
    return out[()]


def small_atom_F(k, omega0: float, gamma_s: float):
    """F(k) of a point-like two-level atom whose total decay rate is gamma_s."""
    k = np.asarray(k, dtype=float)
    return (gamma_s**3 / (2 * np.pi * np.abs(k - omega0 + 0.5j * gamma_s) ** 4))[()]
