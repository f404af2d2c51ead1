"""Linear stability of the uniform steady state.

Linearizing about (u_c, alpha*u_c/beta) and inserting a mode
cos(kx)*exp(lambda*t) gives the dispersion relation

    lambda^2 + g(k^2) lambda + h(k^2) = 0,
    g(k^2) = k^2 (d1 + d2) + (mu + beta),
    h(k^2) = d1 d2 k^4 + q k^2 + mu beta,
    q      = mu d2 + beta d1 - alpha chi u_c (1 - u_c).

Since g > 0, instability occurs exactly where h(k^2) < 0. The critical
chemotaxis strength chi_c and wavenumber k_c are where h first touches
zero; above chi_c an interval (k1^2, k2^2) of unstable squared
wavenumbers opens up, and on a finite interval only the discrete modes
k_n = n*pi/l inside that band can destabilize.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import ModelParams, require_valid


class NoCriticalModeError(ValueError):
    """Raised for mu = 0, where no finite critical wavenumber exists."""


class ShiftCoefficientError(RuntimeError):
    """Raised when the closed-form mode-shift coefficients violate their
    expected signs (B < 0, C > 0); outside the regime the formula covers."""


def linearization_matrices(p: ModelParams, chi: Optional[float] = None):
    """Reaction matrix K and diffusion/taxis matrix D of the linearized system."""
    if chi is None:
        chi = p.chi
    K = np.array([[-p.mu, 0.0], [p.alpha, -p.beta]])
    D = np.array([[p.d1, -chi * p.u_c * (1.0 - p.u_c)], [0.0, p.d2]])
    return K, D


def coeff_q(p: ModelParams, chi: Optional[float] = None) -> float:
    """The k^2 coefficient of h: q = mu*d2 + beta*d1 - alpha*chi*u_c*(1-u_c)."""
    if chi is None:
        chi = p.chi
    return p.mu * p.d2 + p.beta * p.d1 - p.alpha * chi * p.u_c * (1.0 - p.u_c)


def dispersion_g(k_sq: float, p: ModelParams) -> float:
    """Damping coefficient g(k^2) = k^2 (d1+d2) + (mu+beta); strictly positive."""
    return k_sq * (p.d1 + p.d2) + (p.mu + p.beta)


def dispersion_h(k_sq: float, p: ModelParams, chi: Optional[float] = None) -> float:
    """Stability indicator h(k^2) = d1 d2 k^4 + q k^2 + mu beta."""
    return p.d1 * p.d2 * k_sq * k_sq + coeff_q(p, chi) * k_sq + p.mu * p.beta


def growth_rate(k_sq: float, p: ModelParams, chi: Optional[float] = None):
    """Both eigenvalues (lambda_minus, lambda_plus), ordered by real part.

    Roots of lambda^2 + g*lambda + h = 0. Because g > 0 they are never a
    conjugate pure-imaginary pair, so oscillatory onset cannot occur.
    """
    g = dispersion_g(k_sq, p)
    h = dispersion_h(k_sq, p, chi)
    disc = complex(g * g - 4.0 * h) ** 0.5
    lam_m = 0.5 * (-g - disc)
    lam_p = 0.5 * (-g + disc)
    if lam_m.real > lam_p.real:
        lam_m, lam_p = lam_p, lam_m
    return lam_m, lam_p


def chi_c(p: ModelParams) -> float:
    """Critical chemotaxis strength

        chi_c = (mu d2 + beta d1 + 2 sqrt(d1 d2 mu beta)) / (alpha u_c (1-u_c)).
    """
    require_valid(p)
    if p.mu == 0:
        raise NoCriticalModeError("mu = 0: no finite k_c threshold; use chi_min")
    return (p.mu * p.d2 + p.beta * p.d1 + 2.0 * math.sqrt(p.d1 * p.d2 * p.mu * p.beta)) / (
        p.alpha * p.u_c * (1.0 - p.u_c)
    )


def k_c(p: ModelParams) -> float:
    """Critical wavenumber k_c = (mu beta / (d1 d2))**(1/4).

    For mu = 0 this degenerates to k_c = 0 and no pattern forms near the
    threshold; ``NoCriticalModeError`` is raised so callers fall back to
    the discrete first bifurcation value.
    """
    require_valid(p)
    if p.mu == 0:
        raise NoCriticalModeError("mu = 0: k_c = 0, no pattern formation near threshold")
    return (p.mu * p.beta / (p.d1 * p.d2)) ** 0.25


def chi_critical_for_mode(p: ModelParams, k_sq: float) -> float:
    """Chemotaxis strength at which the single mode k first loses stability:

        chi_0(k^2) = (mu + d1 k^2)(beta + d2 k^2) / (alpha u_c (1-u_c) k^2).

    Minimized over continuous k^2 at k_c^2, where it equals chi_c.
    """
    if k_sq <= 0:
        raise ValueError("k_sq must be positive")
    return (p.mu + p.d1 * k_sq) * (p.beta + p.d2 * k_sq) / (p.alpha * p.u_c * (1.0 - p.u_c) * k_sq)


def h_min(p: ModelParams, chi: Optional[float] = None) -> float:
    """Minimum of h over k^2, attained at k^2 = -q/(2 d1 d2):

        h_min = mu*beta - q^2 / (4 d1 d2).
    """
    q = coeff_q(p, chi)
    return p.mu * p.beta - q * q / (4.0 * p.d1 * p.d2)


def unstable_band(p: ModelParams, chi: Optional[float] = None):
    """The interval (k1^2, k2^2) where h < 0, or ``None`` if h >= 0 everywhere.

    Present exactly when chi exceeds chi_c; at chi = chi_c the band is
    degenerate with both endpoints equal to k_c^2. Roots are computed with
    the sign-aware quadratic formula to avoid cancellation when
    q^2 >> 4 d1 d2 mu beta.
    """
    a = p.d1 * p.d2
    q = coeff_q(p, chi)
    c = p.mu * p.beta
    if q >= 0.0:
        return None  # both roots nonpositive: no unstable band
    disc = q * q - 4.0 * a * c
    scale = max(q * q, abs(4.0 * a * c), 1e-300)
    if disc < -1e-12 * scale:
        return None
    if disc < 1e-12 * scale:
        # within round-off of the tangency: an exact double root
        s = -q / (2.0 * a)
        return (s, s)
    # q < 0 here, so -q + sqrt(disc) is free of cancellation
    t = 0.5 * (-q + math.sqrt(disc))
    k2_sq = t / a
    k1_sq = c / t if t > 0 else 0.0
    return (k1_sq, k2_sq)


def admissible_unstable_modes(p: ModelParams, chi: Optional[float] = None):
    """All discrete modes (n, k_n = n*pi/l) inside the unstable band.

    Empty when no band is open or no lattice point falls inside it.
    """
    band = unstable_band(p, chi)
    if band is None:
        return []
    k1_sq, k2_sq = band
    step = math.pi / p.domain_length
    n_lo = max(1, math.floor(math.sqrt(k1_sq) / step) + 1)
    n_hi = math.ceil(math.sqrt(k2_sq) / step) - 1
    out = []
    for n in range(n_lo, n_hi + 1):
        kn = n * step
        if k1_sq < kn * kn < k2_sq:
            out.append((n, kn))
    return out


@dataclass(frozen=True)
class ChiMinResult:
    """First discrete bifurcation value over the lattice k_n = n*pi/l."""

    chi_min: float
    n0: int
    k_bar: float
    #: Infimum of chi_0 over continuous k^2 (equals chi_c for mu > 0; for
    #: mu = 0 it is d1*beta/(alpha u_c (1-u_c)), approached but not attained
    #: as k -> 0).
    continuum_infimum: float
    #: False only in the mu = 0 case, where chi_0 decreases monotonically
    #: toward the infimum as k^2 -> 0 and the discrete minimum sits at n = 1.
    infimum_attained_in_continuum: bool = True


def chi_min(p: ModelParams) -> ChiMinResult:
    """Minimize chi_0 over the positive integers n (k_n = n*pi/l).

    chi_0 is strictly unimodal in k^2 with continuous minimum at k_c^2, so
    the scan stops once k_n^2 exceeds 4*k_c^2 (every later mode is worse).
    """
    require_valid(p)
    step = math.pi / p.domain_length
    if p.mu == 0:
        # chi_0(k^2) = d1 (beta + d2 k^2) / (alpha u_c (1-u_c)): increasing
        # in k^2, so the discrete minimum is at n = 1 while the continuum
        # infimum (k -> 0) is never attained.
        inf = p.d1 * p.beta / (p.alpha * p.u_c * (1.0 - p.u_c))
        return ChiMinResult(
            chi_min=chi_critical_for_mode(p, step * step),
            n0=1,
            k_bar=step,
            continuum_infimum=inf,
            infimum_attained_in_continuum=False,
        )
    kc_sq = math.sqrt(p.mu * p.beta / (p.d1 * p.d2))
    best_n, best_chi = 0, math.inf
    n = 1
    while True:
        kn_sq = (n * step) ** 2
        c = chi_critical_for_mode(p, kn_sq)
        if c < best_chi:
            best_chi, best_n = c, n
        if kn_sq > 4.0 * kc_sq:
            break
        n += 1
    return ChiMinResult(best_chi, best_n, best_n * step, chi_c(p))


def most_unstable_mode(p: ModelParams, eps: float):
    """Squared wavenumber k_m^2 maximizing the growth rate at chi = chi_c(1+eps^2),
    and its shift delta = k_m^2 - k_c^2.

    Setting d(lambda_plus)/d(k^2) = 0 reduces to A s^2 + B s + C = 0 in
    s = k^2 with

        A = -(d1-d2)^2 d1 d2,
        B = 4 d1 d2 q - 2 d1 d2 (d1+d2)(mu+beta),
        C = q^2 - (d1+d2)(mu+beta) q + (d1+d2)^2 mu beta,
        q = -eps^2 (mu d2 + beta d1) - 2 (1+eps^2) sqrt(mu beta d1 d2),

    where this q is the h-coefficient evaluated at chi = chi_c(1+eps^2)
    (kept distinct from ``coeff_q`` to avoid aliasing the two roles). The
    relevant root is (-B - sqrt(B^2-4AC)) / (2A); the other root of the
    squared equation is spurious. The result is verified to be a
    stationary point of lambda_plus by central finite difference.

    For d1 = d2 the closed form degenerates (A = 0); the maximizer is then
    found by direct 1-D maximization of lambda_plus over the band.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    kc_sq = math.sqrt(p.mu * p.beta / (p.d1 * p.d2))
    chi = chi_c(p) * (1.0 + eps * eps)
    d1, d2, mu, beta = p.d1, p.d2, p.mu, p.beta
    q_shift = -eps * eps * (mu * d2 + beta * d1) - 2.0 * (1.0 + eps * eps) * math.sqrt(
        mu * beta * d1 * d2
    )
    A = -((d1 - d2) ** 2) * d1 * d2
    B = 4.0 * d1 * d2 * q_shift - 2.0 * d1 * d2 * (d1 + d2) * (mu + beta)
    C = q_shift * q_shift - (d1 + d2) * (mu + beta) * q_shift + (d1 + d2) ** 2 * mu * beta

    if abs(d1 - d2) <= 1e-12 * (d1 + d2):
        km_sq = _maximize_growth_over_band(p, chi, kc_sq)
    else:
        if not (B < 0 and C > 0):
            raise ShiftCoefficientError(
                f"shift coefficients out of expected range: B={B:.6g} (expected <0), "
                f"C={C:.6g} (expected >0)"
            )
        km_sq = (-B - math.sqrt(B * B - 4.0 * A * C)) / (2.0 * A)

    # stationarity check: central difference of lambda_plus at k_m^2
    dd = 1e-6 * max(km_sq, 1.0)
    lp = lambda s: growth_rate(s, p, chi)[1].real
    deriv = (lp(km_sq + dd) - lp(km_sq - dd)) / (2.0 * dd)
    slope_scale = max(abs(lp(km_sq)), mu + beta) / max(km_sq, 1.0)
    if abs(deriv) > 1e-6 * slope_scale:
        raise ShiftCoefficientError(
            f"k_m^2={km_sq:.6g} is not a stationary point of the growth rate "
            f"(residual {deriv:.3g})"
        )
    return km_sq, km_sq - kc_sq


def _maximize_growth_over_band(p: ModelParams, chi: float, kc_sq: float) -> float:
    from scipy.optimize import minimize_scalar

    band = unstable_band(p, chi)
    lo, hi = band if band is not None else (0.5 * kc_sq, 2.0 * kc_sq)
    res = minimize_scalar(
        lambda s: -growth_rate(s, p, chi)[1].real, bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-12},
    )
    return float(res.x)


@dataclass(frozen=True)
class DispersionReport:
    """Everything the threshold analysis produces for one parameter point."""

    chi: float
    chi_c: Optional[float]
    k_c_sq: Optional[float]
    q: float
    band: Optional[tuple]
    admissible_modes: list = field(default_factory=list)
    chi_min: Optional[float] = None
    n0: Optional[int] = None
    eps: Optional[float] = None
    k_m_sq: Optional[float] = None
    delta: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "chi": self.chi,
            "chi_c": self.chi_c,
            "k_c_sq": self.k_c_sq,
            "q": self.q,
            "band_k1_sq": None if self.band is None else self.band[0],
            "band_k2_sq": None if self.band is None else self.band[1],
            "admissible_modes": [{"n": n, "k": k} for n, k in self.admissible_modes],
            "chi_min": self.chi_min,
            "n0": self.n0,
            "eps": self.eps,
            "k_m_sq": self.k_m_sq,
            "delta": self.delta,
        }


def dispersion_report(p: ModelParams, eps: Optional[float] = None) -> DispersionReport:
    """Assemble thresholds, band, admissible modes and (optionally) the most
    unstable mode for chi taken from ``p`` (or chi_c(1+eps^2) when ``eps``
    is given)."""
    require_valid(p)
    if p.mu == 0:
        cm = chi_min(p)
        chi = p.chi if eps is None else cm.chi_min * (1.0 + eps * eps)
        pp = p.with_chi(chi)
        return DispersionReport(
            chi=chi, chi_c=None, k_c_sq=None, q=coeff_q(pp),
            band=unstable_band(pp), admissible_modes=admissible_unstable_modes(pp),
            chi_min=cm.chi_min, n0=cm.n0, eps=eps,
        )
    xc = chi_c(p)
    chi = p.chi if eps is None else xc * (1.0 + eps * eps)
    pp = p.with_chi(chi)
    cm = chi_min(p)
    km_sq = delta = None
    if eps is not None:
        km_sq, delta = most_unstable_mode(p, eps)
    return DispersionReport(
        chi=chi, chi_c=xc, k_c_sq=k_c(p) ** 2, q=coeff_q(pp),
        band=unstable_band(pp), admissible_modes=admissible_unstable_modes(pp),
        chi_min=cm.chi_min, n0=cm.n0, eps=eps, k_m_sq=km_sq, delta=delta,
    )


def dispersion_curves(p: ModelParams, k_max: float, n_samples: int = 400,
                      chi: Optional[float] = None) -> np.ndarray:
    """Sampled columns (k_sq, g, h, re_lambda_plus) for CSV export / plotting."""
    k_sq = np.linspace(0.0, k_max * k_max, n_samples)
    rows = np.empty((n_samples, 4))
    for i, s in enumerate(k_sq):
        rows[i] = (s, dispersion_g(s, p), dispersion_h(s, p, chi),
                   growth_rate(s, p, chi)[1].real)
    return rows
