"""Weakly nonlinear amplitude machinery for a single unstable mode.

Near the instability threshold the solution is expanded in a small
parameter eps with chi = chi_crit (1 + eps^2) and slow times T2 = eps^2 t,
T4 = eps^4 t. Solvability of the order-equations yields the cubic
Stuart-Landau equation

    dA/dT2 = sigma A - L A^3,

and, pushed two orders further (needed when L < 0, the subcritical case),
the quintic equation

    dA/dT = sigma_bar A - L_bar A^3 + Q_bar A^5,
    sigma_bar = sigma + eps^2 sigma_tilde,
    L_bar     = L     + eps^2 L_tilde,
    Q_bar     =         eps^2 Q_tilde.

The correction fields of the expansion (W20, W22 at second order; W31,
W32, W33 at third; W40..W44 at fourth) are solutions of 2x2 linear
systems built from the critical operator L_i = K - (i k)^2 D evaluated at
the critical point. The harmonic-1 systems are singular there; their
right-hand sides are orthogonal to the adjoint null vector by
construction and the particular solution orthogonal to the kernel is
taken (this normalization fixes the meaning of the amplitude A at higher
orders).

When the critical wavenumber k_c is not an admissible mode n*pi/l of the
finite interval, the whole expansion can be rebuilt around the first
admissible mode k_bar = n0*pi/l with chi_crit = chi_min instead
(``mode_policy="substitute"``); that is the variant to compare against
simulations on the same interval.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import ModelParams, require_valid, uniform_steady_state
from .linear_stability import (
    chi_c,
    chi_critical_for_mode,
    chi_min,
    k_c,
    linearization_matrices,
)


class SolvabilityError(RuntimeError):
    """A singular system's right-hand side had a component along the adjoint
    null vector: the expansion's bookkeeping is inconsistent."""


class ResonanceError(RuntimeError):
    """A harmonic that should be slaved is (near-)critical itself, so its
    linear system is (near-)singular; the expansion breaks down."""


class ChiSNotFoundError(RuntimeError):
    """No saddle-node value chi_s was found in the scanned interval."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace or []


@dataclass(frozen=True)
class LinearEigenpair:
    """Null vectors of the critical linear operator at wavenumber k.

    rho = (M, 1) spans the kernel of K - k^2 D at the critical point and
    psi = (M*, 1) spans the kernel of the transpose, with

        M  = (beta + k^2 d2) / alpha,
        M* = alpha / (mu + k^2 d1).

    The second components are normalized to 1; every coefficient built
    from these is a ratio of inner products and therefore invariant under
    rescaling of psi.
    """

    k: float
    M: float
    M_star: float

    @property
    def rho(self) -> np.ndarray:
        return np.array([self.M, 1.0])

    @property
    def psi(self) -> np.ndarray:
        return np.array([self.M_star, 1.0])


def eigenpair(p: ModelParams, k: float) -> LinearEigenpair:
    """Closed-form kernel/adjoint-kernel scalars for mode k."""
    k_sq = k * k
    return LinearEigenpair(
        k=k,
        M=(p.beta + k_sq * p.d2) / p.alpha,
        M_star=p.alpha / (p.mu + p.d1 * k_sq),
    )


@dataclass(frozen=True)
class ExpansionSetup:
    """Bookkeeping for one expansion point.

    chi is expanded as chi_crit + eps^2 chi2 + eps^4 chi4 with the odd
    coefficients identically zero (they are set to zero to satisfy the
    solvability conditions at odd orders). The default chi2 = chi_crit
    realizes chi = chi_crit (1 + eps^2); chi4 defaults to 0.
    """

    eps: float
    k: float
    chi_crit: float
    chi2: float
    chi4: float = 0.0
    substituted: bool = False
    n0: Optional[int] = None

    @property
    def chi_effective(self) -> float:
        return self.chi_crit + self.eps**2 * self.chi2 + self.eps**4 * self.chi4


def setup_expansion(
    p: ModelParams,
    eps: Optional[float] = None,
    chi: Optional[float] = None,
    mode_policy: str = "substitute",
) -> ExpansionSetup:
    """Build the expansion point from either eps or a target chi.

    mode_policy "exact" keeps the continuous critical pair (k_c, chi_c);
    "substitute" replaces them by the first admissible discrete mode
    (k_bar = n0*pi/l, chi_min) whenever k_c is not itself admissible.
    Exactly one of ``eps`` and ``chi`` must be given; they are related by
    chi = chi_crit (1 + eps^2).
    """
    require_valid(p)
    if (eps is None) == (chi is None):
        raise ValueError("specify exactly one of eps and chi")
    if mode_policy not in ("exact", "substitute"):
        raise ValueError(f"unknown mode_policy {mode_policy!r}")

    if mode_policy == "substitute":
        cm = chi_min(p)
        k = cm.k_bar
        chi_crit = cm.chi_min
        n0 = cm.n0
        kc = None if p.mu == 0 else k_c(p)
        substituted = kc is None or abs(k - kc) > 1e-12 * max(1.0, kc)
    else:
        k = k_c(p)
        chi_crit = chi_c(p)
        n0 = None
        substituted = False

    if eps is None:
        ratio = chi / chi_crit - 1.0
        if ratio < 0:
            raise ValueError(
                f"chi={chi:.6g} below the critical value {chi_crit:.6g}; "
                "no real expansion parameter (use the branch utilities for chi < chi_c)"
            )
        eps = math.sqrt(ratio)
    return ExpansionSetup(eps=eps, k=k, chi_crit=chi_crit, chi2=chi_crit,
                          substituted=substituted, n0=n0)


def reduced_operator(p: ModelParams, k: float, harmonic: int, chi_crit: Optional[float] = None) -> np.ndarray:
    """The 2x2 operator L_i = K - (i k)^2 D acting on the i-th harmonic,
    with D evaluated at the critical chemotaxis strength for mode k."""
    if chi_crit is None:
        chi_crit = chi_critical_for_mode(p, k * k)
    K, D = linearization_matrices(p, chi_crit)
    return K - (harmonic * k) ** 2 * D


def solve_reduced(i: int, rhs: np.ndarray, p: ModelParams, k: float,
                  tol: float = 1e-10) -> np.ndarray:
    """Solve L_i w = rhs for the i-th harmonic of the expansion.

    i == 1 is the critical harmonic: L_1 is singular, the right-hand side
    must be orthogonal to the adjoint null vector psi (within ``tol``
    relative to its norm), and the returned particular solution has zero
    component along the kernel vector rho.

    i != 1 must be nonresonant: a near-vanishing determinant raises
    ``ResonanceError``.
    """
    rhs = np.asarray(rhs, dtype=float)
    L = reduced_operator(p, k, i)
    if i == 1:
        pair = eigenpair(p, k)
        if abs(rhs @ pair.psi) > tol * max(1.0, float(np.linalg.norm(rhs))):
            raise SolvabilityError(
                f"harmonic-1 right-hand side not orthogonal to the adjoint null "
                f"vector (<rhs,psi> = {rhs @ pair.psi:.3e})"
            )
        x, *_ = np.linalg.lstsq(L, rhs, rcond=None)
        rho = pair.rho
        return x - (x @ rho) / (rho @ rho) * rho
    det = L[0, 0] * L[1, 1] - L[0, 1] * L[1, 0]
    scale = float(np.abs(L).max()) ** 2
    if abs(det) < 1e-12 * max(scale, 1e-300):
        raise ResonanceError(f"harmonic {i} is resonant (|det L_{i}| = {abs(det):.3e})")
    return np.array([L[1, 1] * rhs[0] - L[0, 1] * rhs[1],
                     L[0, 0] * rhs[1] - L[1, 0] * rhs[0]]) / det


def second_order_vectors(p: ModelParams, pair: LinearEigenpair):
    """Second-order correction vectors (W20, W22) in closed form.

    W20 fixes the spatial mean shift, W22 the second harmonic:

        W20 = (-M^2/(2 u_c), -alpha M^2/(2 beta u_c)),
        W22 = ((beta + 4 k^2 d2)/alpha, 1) * W22_2,

    with W22_2 given by the ratio below. A vanishing denominator means the
    second harmonic is resonant with the critical operator.
    """
    u_c, mu, alpha, beta = p.u_c, p.mu, p.alpha, p.beta
    k_sq = pair.k ** 2
    M = pair.M
    chi_cr = chi_critical_for_mode(p, k_sq)
    W20 = np.array([-M * M / (2.0 * u_c), -alpha * M * M / (2.0 * beta * u_c)])
    denom = 4.0 * alpha * k_sq * chi_cr * u_c * (1.0 - u_c) - (mu + 4.0 * k_sq * p.d1) * (
        beta + 4.0 * k_sq * p.d2
    )
    if abs(denom) < 1e-12 * (alpha * k_sq * chi_cr + mu * beta + 1.0):
        raise ResonanceError("resonant second harmonic: perturb the parameters")
    W22_2 = alpha * (mu * M * M / (2.0 * u_c) - chi_cr * k_sq * M * (1.0 - 2.0 * u_c)) / denom
    W22 = np.array([(beta + 4.0 * k_sq * p.d2) / alpha, 1.0]) * W22_2
    return W20, W22


def _second_order_rhs(p: ModelParams, pair: LinearEigenpair, chi_cr: float):
    """Right-hand sides F0, F2 of the second-order systems L_i W_2i = F_i/4."""
    M, k_sq = pair.M, pair.k ** 2
    F0 = np.array([2.0 * p.mu * M * M / p.u_c, 0.0])
    F2 = F0 - 4.0 * k_sq * np.array([M * chi_cr * (1.0 - 2.0 * p.u_c), 0.0])
    return F0, F2


@dataclass(frozen=True, eq=False)
class CorrectionVectors:
    """All correction fields of the expansion and the right-hand sides they
    solve, kept for residual/consistency checks."""

    W20: np.ndarray
    W22: np.ndarray
    W31: np.ndarray
    W32: np.ndarray
    W33: np.ndarray
    W40: np.ndarray
    W41: np.ndarray
    W42: np.ndarray
    W43: np.ndarray
    W44: np.ndarray
    F0: np.ndarray
    F2: np.ndarray
    G11: np.ndarray
    G13: np.ndarray
    G3: np.ndarray
    H02: np.ndarray
    H04: np.ndarray
    H22: np.ndarray
    H24: np.ndarray
    H4: np.ndarray
    P11: np.ndarray
    P13: np.ndarray
    P15: np.ndarray


@dataclass(frozen=True, eq=False)
class LandauCoefficients:
    """Cubic and quintic Stuart-Landau coefficients at one expansion point.

    ``sigma``..``Q_tilde`` are eps-independent; the barred values are
    evaluated at ``setup.eps``. ``at_eps_sq`` re-evaluates them at any
    (possibly negative) eps^2 = chi/chi_crit - 1, which is how the
    branches below the threshold are continued.
    """

    sigma: float
    L_cubic: float
    sigma_tilde: float
    L_tilde: float
    Q_tilde: float
    sigma_bar: float
    L_bar: float
    Q_bar: float
    criticality: str
    setup: ExpansionSetup
    pair: LinearEigenpair
    vectors: CorrectionVectors

    def at_eps_sq(self, eps_sq: float):
        return (
            self.sigma + eps_sq * self.sigma_tilde,
            self.L_cubic + eps_sq * self.L_tilde,
            eps_sq * self.Q_tilde,
        )

    def to_dict(self) -> dict:
        return {
            "k": self.setup.k,
            "chi_crit": self.setup.chi_crit,
            "eps": self.setup.eps,
            "substituted_mode": self.setup.substituted,
            "n0": self.setup.n0,
            "sigma": self.sigma,
            "L": self.L_cubic,
            "sigma_tilde": self.sigma_tilde,
            "L_tilde": self.L_tilde,
            "Q_tilde": self.Q_tilde,
            "sigma_bar": self.sigma_bar,
            "L_bar": self.L_bar,
            "Q_bar": self.Q_bar,
            "criticality": self.criticality,
        }


def cubic_landau(p: ModelParams, setup: ExpansionSetup):
    """Linear and cubic Stuart-Landau coefficients (sigma, L) and the
    criticality label from the sign of L.

    sigma = <G11, psi> / <rho, psi> with G11 the chi2 forcing of the
    critical harmonic, and L = <G13, psi> / <rho, psi> with G13 the cubic
    self-interaction assembled from W20 and W22.
    """
    pair = eigenpair(p, setup.k)
    sigma, L, *_ = _cubic_core(p, setup, pair)
    return sigma, L, ("supercritical" if L > 0 else "subcritical")


def _cubic_core(p: ModelParams, setup: ExpansionSetup, pair: LinearEigenpair):
    u_c, mu = p.u_c, p.mu
    k_sq = setup.k ** 2
    chi_cr = setup.chi_crit
    chi2 = setup.chi2
    M = pair.M
    rho, psi = pair.rho, pair.psi
    denom = float(rho @ psi)

    W20, W22 = second_order_vectors(p, pair)
    G11 = np.array([k_sq * chi2 * u_c * (1.0 - u_c), 0.0])
    G13_1 = (
        chi_cr * (2.0 * u_c - 1.0) * k_sq * (W20[0] + M * W22[1] - 0.5 * W22[0])
        + 0.25 * chi_cr * M * M * k_sq
        + mu * M / u_c * (2.0 * W20[0] + W22[0])
    )
    G13 = np.array([G13_1, 0.0])
    G3 = np.array([
        chi_cr * (2.0 * u_c - 1.0) * k_sq * (3.0 * M * W22[1] + 1.5 * W22[0])
        + 0.75 * chi_cr * M * M * k_sq
        + mu / u_c * M * W22[0],
        0.0,
    ])
    sigma = float(G11 @ psi) / denom
    L = float(G13 @ psi) / denom
    return sigma, L, W20, W22, G11, G13, G3


def quintic_landau(p: ModelParams, setup: ExpansionSetup) -> LandauCoefficients:
    """Full quintic Stuart-Landau coefficients with all correction vectors.

    Solves the third-order systems (the two singular ones for W31/W32 and
    the regular third harmonic for W33), assembles the fourth-order
    right-hand sides, solves for W40..W44, and projects the fifth-order
    forcing onto the adjoint null vector to obtain sigma_tilde, L_tilde,
    Q_tilde. Residual and solvability failures raise rather than degrade.
    """
    require_valid(p)
    pair = eigenpair(p, setup.k)
    u_c, mu = p.u_c, p.mu
    k = setup.k
    k_sq = k * k
    chi_cr, chi2, chi4 = setup.chi_crit, setup.chi2, setup.chi4
    M = pair.M
    rho, psi = pair.rho, pair.psi
    denom = float(rho @ psi)

    sigma, L, W20, W22, G11, G13, G3 = _cubic_core(p, setup, pair)
    F0, F2 = _second_order_rhs(p, pair, chi_cr)

    # third order: two singular harmonic-1 systems plus the third harmonic
    W31 = solve_reduced(1, sigma * rho - G11, p, k)
    W32 = solve_reduced(1, -L * rho + G13, p, k)
    W33 = solve_reduced(3, G3, p, k)

    # fourth-order forcing, per harmonic and amplitude power
    H02 = np.array([mu * M / u_c * W31[0], 0.0])
    H04 = np.array([mu / u_c * (W20[0] ** 2 + W32[0] * M + 0.5 * W22[0] ** 2), 0.0])
    H22 = (
        np.array([-4.0 * k_sq * chi2 * u_c * (1.0 - u_c) * W22[1], 0.0])
        + np.array([mu * M / u_c * W31[0], 0.0])
        + (2.0 * u_c - 1.0) * k_sq * np.array([chi_cr * W31[0] + chi_cr * M * W31[1] + chi2 * M, 0.0])
    )
    H24 = (
        chi_cr * (2.0 * u_c - 1.0) * k_sq
        * np.array([W32[1] * M + 3.0 * W33[1] * M + W32[0] + 4.0 * W20[0] * W22[1] - W33[0], 0.0])
        + 2.0 * chi_cr * k_sq * np.array([W22[1] * M * M + M * W20[0], 0.0])
        + mu / u_c * np.array([2.0 * W20[0] * W22[0] + W32[0] * M + W33[0] * M, 0.0])
    )
    H4 = (
        chi_cr * (2.0 * u_c - 1.0) * k_sq
        * np.array([6.0 * W33[1] * M + 2.0 * W33[0] + 4.0 * W22[0] * W22[1], 0.0])
        + 2.0 * chi_cr * k_sq * np.array([W22[1] * M * M + M * W22[0], 0.0])
        + mu / u_c * np.array([0.5 * W22[0] ** 2 + W33[0] * M, 0.0])
    )

    W40 = solve_reduced(0, 2.0 * sigma * W20 + H02, p, k)
    W41 = solve_reduced(0, -2.0 * L * W20 + H04, p, k)
    W42 = solve_reduced(2, 2.0 * sigma * W22 + H22, p, k)
    W43 = solve_reduced(2, -2.0 * L * W22 + H24, p, k)
    W44 = solve_reduced(4, H4, p, k)

    # fifth-order forcing on the critical harmonic
    P11 = k_sq * np.array([chi2 * u_c * (1.0 - u_c) * W31[1] + chi4 * u_c * (1.0 - u_c), 0.0])
    P13 = (
        -k_sq * np.array([chi2 * u_c * (1.0 - u_c) * W32[1], 0.0])
        + (2.0 * u_c - 1.0) * chi_cr * k_sq
        * np.array([W40[0] + W20[0] * W31[1] - 0.5 * W22[0] * W31[1]
                    + W31[0] * W22[1] + W42[1] * M - 0.5 * W42[0], 0.0])
        + (2.0 * u_c - 1.0) * chi2 * k_sq
        * np.array([W22[1] * M + W20[0] - 0.5 * W22[0], 0.0])
        + 0.25 * chi_cr * k_sq * np.array([2.0 * M * W31[0] + W31[1] * M * M, 0.0])
        + 0.25 * chi2 * k_sq * M * M * np.array([1.0, 0.0])
        + 2.0 * mu / u_c
        * np.array([W40[0] * M + 0.5 * W42[0] * M + W20[0] * W31[0] + 0.5 * W22[0] * W31[0], 0.0])
    )
    P15 = (
        (2.0 * u_c - 1.0) * chi_cr * k_sq
        * np.array([W41[0] + W20[0] * W32[1] - 0.5 * W22[0] * W32[1] + W32[0] * W22[1]
                    + 1.5 * W22[0] * W33[1] - W33[0] * W22[1] + W43[1] * M - 0.5 * W43[0], 0.0])
        + chi_cr * k_sq
        * np.array([0.5 * M * W32[0] - 0.5 * M * W33[0] + 2.0 * W20[0] * W22[1] * M
                    + 0.25 * W32[1] * M * M + 0.75 * W33[1] * M * M
                    + W20[0] ** 2 + 0.5 * W22[0] ** 2 - W20[0] * W22[0], 0.0])
        + 2.0 * mu / u_c
        * np.array([W41[0] * M + 0.5 * W43[0] * M + W20[0] * W32[0]
                    + 0.5 * W22[0] * W32[0] + 0.5 * W22[0] * W33[0], 0.0])
    )

    sigma_t = float((-sigma * W31 + P11) @ psi) / denom
    L_t = float((3.0 * sigma * W32 - L * W31 + P13) @ psi) / denom
    Q_t = float((3.0 * L * W32 - P15) @ psi) / denom

    e2 = setup.eps ** 2
    vectors = CorrectionVectors(
        W20=W20, W22=W22, W31=W31, W32=W32, W33=W33,
        W40=W40, W41=W41, W42=W42, W43=W43, W44=W44,
        F0=F0, F2=F2, G11=G11, G13=G13, G3=G3,
        H02=H02, H04=H04, H22=H22, H24=H24, H4=H4,
        P11=P11, P13=P13, P15=P15,
    )
    return LandauCoefficients(
        sigma=sigma, L_cubic=L, sigma_tilde=sigma_t, L_tilde=L_t, Q_tilde=Q_t,
        sigma_bar=sigma + e2 * sigma_t, L_bar=L + e2 * L_t, Q_bar=e2 * Q_t,
        criticality="supercritical" if L > 0 else "subcritical",
        setup=setup, pair=pair, vectors=vectors,
    )


def stationary_amplitude_cubic(coeffs: LandauCoefficients) -> float:
    """Globally attracting amplitude sqrt(sigma/L) of the cubic equation.

    Only meaningful in the supercritical case; for L <= 0 the cubic
    equation has no finite attractor and the quintic one must be used.
    """
    if coeffs.L_cubic <= 0:
        raise ValueError("subcritical: use quintic")
    if coeffs.sigma <= 0:
        raise ValueError("sigma must be positive")
    return math.sqrt(coeffs.sigma / coeffs.L_cubic)


def stationary_amplitude_quintic(coeffs: LandauCoefficients):
    """Equilibrium amplitudes (stable, unstable) of the quintic equation at
    the setup's eps.

    The stable branch is

        A_inf = sqrt((L_bar - sqrt(L_bar^2 - 4 sigma_bar Q_bar)) / (2 Q_bar));

    the companion root of the quartic equilibrium equation is returned as
    the unstable branch when its square is positive (above the threshold
    it is not, and ``None`` is returned). Returns (None, None) when no
    nonzero equilibrium exists.
    """
    sb, Lb, Qb = coeffs.sigma_bar, coeffs.L_bar, coeffs.Q_bar
    if Qb == 0:
        if Lb > 0 and sb > 0:
            return math.sqrt(sb / Lb), None
        return None, None
    disc = Lb * Lb - 4.0 * sb * Qb
    if disc < 0:
        return None, None
    root = math.sqrt(disc)
    sq_stable = (Lb - root) / (2.0 * Qb)
    sq_unstable = (Lb + root) / (2.0 * Qb)
    a_stable = math.sqrt(sq_stable) if sq_stable > 0 else None
    a_unstable = math.sqrt(sq_unstable) if sq_unstable > 0 else None
    return a_stable, a_unstable


def chi_s(p: ModelParams, coeffs: Optional[LandauCoefficients] = None,
          mode_policy: str = "exact", bracket: tuple = (0.9, 1.0),
          n_scan: int = 200) -> float:
    """Saddle-node value chi_s < chi_c where the quintic branch turns around.

    chi_s is the zero of the discriminant L_bar^2 - 4 sigma_bar Q_bar with
    the coefficients continued below threshold via eps^2 = chi/chi_crit - 1
    (negative there). Found by root bracketing over
    (bracket[0]*chi_crit, chi_crit); requires the subcritical case and a
    positive double root (a genuine saddle-node), else raises
    ``ChiSNotFoundError`` carrying the scan trace.
    """
    if coeffs is None:
        coeffs = quintic_landau(p, setup_expansion(p, eps=0.1, mode_policy=mode_policy))
    if coeffs.L_cubic >= 0:
        raise ChiSNotFoundError(
            "cubic coefficient is positive (supercritical): no saddle-node below threshold"
        )
    chi_crit = coeffs.setup.chi_crit

    def disc(chi):
        sb, Lb, Qb = coeffs.at_eps_sq(chi / chi_crit - 1.0)
        return Lb * Lb - 4.0 * sb * Qb

    lo = bracket[0] * chi_crit
    hi = bracket[1] * chi_crit * (1.0 - 1e-13)
    chis = np.linspace(lo, hi, n_scan)
    vals = np.array([disc(c) for c in chis])
    trace = list(zip(chis.tolist(), vals.tolist()))
    sign_change = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
    if len(sign_change) == 0:
        raise ChiSNotFoundError(
            f"discriminant does not change sign in ({lo:.6g}, {hi:.6g})", trace
        )
    from scipy.optimize import brentq

    i = sign_change[-1]  # the zero closest to chi_crit
    root = brentq(disc, chis[i], chis[i + 1], xtol=1e-14, rtol=1e-14)
    # genuine saddle-node: the double root of the equilibrium equation must
    # sit at a positive squared physical amplitude a^2 = L_bar / (2 Q_tilde)
    _, Lb, _ = coeffs.at_eps_sq(root / chi_crit - 1.0)
    if coeffs.Q_tilde == 0 or Lb / (2.0 * coeffs.Q_tilde) <= 0:
        raise ChiSNotFoundError(
            "discriminant zero does not correspond to a positive-amplitude saddle-node",
            trace,
        )
    return float(root)


def reconstruct_second_order(p: ModelParams, setup: ExpansionSetup, x: np.ndarray,
                             amplitude: Optional[float] = None) -> tuple:
    """Second-order stationary pattern

        (u, v) = (u_bar, v_bar) + eps A rho cos(kx)
                 + eps^2 A^2 (W20 + W22 cos(2kx)),

    with A = sqrt(sigma/L) unless an explicit (possibly signed)
    ``amplitude`` is supplied. Returns (u, v) sampled on ``x``.
    """
    pair = eigenpair(p, setup.k)
    if amplitude is None:
        sigma, L, crit = cubic_landau(p, setup)
        if crit != "supercritical":
            raise ValueError("subcritical: use quintic")
        amplitude = math.sqrt(sigma / L)
    W20, W22 = second_order_vectors(p, pair)
    ss = uniform_steady_state(p)
    eps, k = setup.eps, setup.k
    x = np.asarray(x, dtype=float)
    c1, c2 = np.cos(k * x), np.cos(2.0 * k * x)
    A = amplitude
    u = ss.u_bar + eps * A * pair.M * c1 + eps**2 * A**2 * (W20[0] + W22[0] * c2)
    v = ss.v_bar + eps * A * c1 + eps**2 * A**2 * (W20[1] + W22[1] * c2)
    return u, v


def reconstruct_fourth_order(p: ModelParams, setup: ExpansionSetup, x: np.ndarray,
                             coeffs: Optional[LandauCoefficients] = None,
                             amplitude: Optional[float] = None) -> tuple:
    """Fourth-order stationary pattern including all correction fields:

        w = eps A rho cos(kx)
          + eps^2 A^2 (W20 + W22 cos 2kx)
          + eps^3 [(A W31 + A^3 W32) cos kx + A^3 W33 cos 3kx]
          + eps^4 [A^2 W40 + A^4 W41 + (A^2 W42 + A^4 W43) cos 2kx
                   + A^4 W44 cos 4kx].

    A defaults to the stable quintic equilibrium at the setup's eps.
    """
    if coeffs is None:
        coeffs = quintic_landau(p, setup)
    if amplitude is None:
        amplitude, _ = stationary_amplitude_quintic(coeffs)
        if amplitude is None:
            raise ValueError("no stable nonzero equilibrium at this eps")
    V = coeffs.vectors
    pair = coeffs.pair
    ss = uniform_steady_state(p)
    eps, k = setup.eps, setup.k
    x = np.asarray(x, dtype=float)
    c1, c2, c3, c4 = (np.cos(m * k * x) for m in (1, 2, 3, 4))
    A = amplitude
    out = []
    for comp, rho_c in ((0, pair.M), (1, 1.0)):
        w = (
            eps * A * rho_c * c1
            + eps**2 * A**2 * (V.W20[comp] + V.W22[comp] * c2)
            + eps**3 * ((A * V.W31[comp] + A**3 * V.W32[comp]) * c1 + A**3 * V.W33[comp] * c3)
            + eps**4 * (A**2 * V.W40[comp] + A**4 * V.W41[comp]
                        + (A**2 * V.W42[comp] + A**4 * V.W43[comp]) * c2
                        + A**4 * V.W44[comp] * c4)
        )
        out.append(w)
    return ss.u_bar + out[0], ss.v_bar + out[1]


@dataclass(frozen=True)
class BranchPoint:
    chi: float
    amplitude: float  # leading-order physical amplitude eps*A (0 on the trivial branch)
    stable: bool


@dataclass(frozen=True)
class BifurcationReport:
    chi_c: float
    chi_s: Optional[float]
    points: list
    coexistence_window: Optional[tuple]

    def to_dict(self) -> dict:
        return {
            "chi_c": self.chi_c,
            "chi_s": self.chi_s,
            "coexistence_window": self.coexistence_window,
            "points": [{"chi": q.chi, "amplitude": q.amplitude, "stable": q.stable}
                       for q in self.points],
        }


def bifurcation_branches(p: ModelParams, chi_lo: float, chi_hi: float,
                         samples: int = 400, mode_policy: str = "exact") -> BifurcationReport:
    """All nonnegative equilibria of the quintic amplitude equation over a
    chi interval, with linear stability flags.

    Branch values are the leading-order *physical* amplitudes a = eps*A of
    the pattern field: in terms of a the amplitude dynamics read

        da/dt = eps^2 sigma_bar a - L_bar a^3 + Q_tilde a^5,

    which continues smoothly through the threshold (below it eps^2 < 0 and
    A itself is no longer real while a is). Stability is the sign of the
    derivative of that physical-time flow; above threshold this agrees
    with the slow-time criterion.
    """
    setup = setup_expansion(p, eps=0.1, mode_policy=mode_policy)
    coeffs = quintic_landau(p, setup)
    chi_crit = setup.chi_crit
    try:
        xs = chi_s(p, coeffs)
    except ChiSNotFoundError:
        xs = None
    Qt = coeffs.Q_tilde
    points = []
    for chi in np.linspace(chi_lo, chi_hi, samples):
        e2 = chi / chi_crit - 1.0
        sb, Lb, _ = coeffs.at_eps_sq(e2)
        lin = e2 * sb  # growth rate of the trivial branch

        def fprime(a_sq):
            return lin - 3.0 * Lb * a_sq + 5.0 * Qt * a_sq * a_sq

        points.append(BranchPoint(chi, 0.0, lin < 0))
        if abs(Qt) < 1e-300:
            roots = [lin / Lb] if Lb != 0 else []
        else:
            disc = Lb * Lb - 4.0 * Qt * lin
            if disc < 0:
                roots = []
            else:
                r = math.sqrt(disc)
                roots = [(Lb - r) / (2.0 * Qt), (Lb + r) / (2.0 * Qt)]
        for a_sq in roots:
            if a_sq > 1e-14:
                points.append(BranchPoint(chi, math.sqrt(a_sq), fprime(a_sq) < 0))
    window = (xs, chi_crit) if xs is not None else None
    return BifurcationReport(chi_c=chi_crit, chi_s=xs, points=points,
                             coexistence_window=window)
