"""Competition between two simultaneously unstable modes.

When the chemotaxis strength sits far enough above threshold that two
discrete modes k1 and k2 are linearly unstable, the expansion with
w1 = A1 rho1 cos(k1 x) + A2 rho2 cos(k2 x) yields coupled cubic amplitude
equations in the slow time T:

    dA1/dT = sigma1 A1 - L1 A1^3 - Omega1 A1 A2^2,
    dA2/dT = sigma2 A2 - L2 A2^3 - Omega2 A2 A1^2.

The coefficients come from projecting the third-order forcing of each
critical harmonic onto its adjoint vector; the second-order slaved fields
now include the mixed harmonics at k1 +/- k2 besides the means and second
harmonics of each mode. The axes A1 = 0 and A2 = 0 are invariant, the
semi-trivial equilibria (sqrt(sigma_l/L_l) on each axis) correspond to
pure single-mode patterns, and which one wins is decided by the basin of
attraction the initial data lands in.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import ModelParams, require_valid, uniform_steady_state
from .linear_stability import chi_c, linearization_matrices, unstable_band
from .amplitude import ResonanceError


@dataclass(frozen=True, eq=False)
class CompetitionCoefficients:
    """Amplitude-equation coefficients for a pair of unstable modes."""

    k1: float
    k2: float
    eps: float
    chi_crit: float
    M1: float
    M2: float
    M1_star: float
    M2_star: float
    sigma1: float
    sigma2: float
    L1: float
    L2: float
    Omega1: float
    Omega2: float
    W20_1: np.ndarray
    W20_2: np.ndarray
    W22_1: np.ndarray
    W22_2: np.ndarray
    W2p: np.ndarray
    W2m: np.ndarray

    def flow(self, A1: float, A2: float):
        """Right-hand side of the coupled amplitude equations."""
        return (
            self.sigma1 * A1 - self.L1 * A1**3 - self.Omega1 * A1 * A2**2,
            self.sigma2 * A2 - self.L2 * A2**3 - self.Omega2 * A2 * A1**2,
        )

    def jacobian(self, A1: float, A2: float) -> np.ndarray:
        """Analytic Jacobian of the flow at (A1, A2)."""
        return np.array([
            [self.sigma1 - 3.0 * self.L1 * A1**2 - self.Omega1 * A2**2,
             -2.0 * self.Omega1 * A1 * A2],
            [-2.0 * self.Omega2 * A1 * A2,
             self.sigma2 - 3.0 * self.L2 * A2**2 - self.Omega2 * A1**2],
        ])

    def to_dict(self) -> dict:
        return {
            "k1": self.k1, "k2": self.k2, "eps": self.eps, "chi_crit": self.chi_crit,
            "sigma1": self.sigma1, "L1": self.L1, "Omega1": self.Omega1,
            "sigma2": self.sigma2, "L2": self.L2, "Omega2": self.Omega2,
        }


def _solve2(L: np.ndarray, rhs: np.ndarray, what: str) -> np.ndarray:
    det = L[0, 0] * L[1, 1] - L[0, 1] * L[1, 0]
    scale = float(np.abs(L).max()) ** 2
    if abs(det) < 1e-12 * max(scale, 1e-300):
        raise ResonanceError(f"harmonic resonance between modes ({what})")
    return np.array([L[1, 1] * rhs[0] - L[0, 1] * rhs[1],
                     L[0, 0] * rhs[1] - L[1, 0] * rhs[0]]) / det


def competition_coefficients(p: ModelParams, k1: float, k2: float, eps: float) -> CompetitionCoefficients:
    """Assemble sigma_l, L_l, Omega_l for the mode pair (k1, k2).

    Both modes must be inside the unstable band at chi = chi_c (1+eps^2)
    and distinct; the slaved harmonics 2k1, 2k2, k1+k2 and |k1-k2| must be
    nonresonant with the critical operator (in particular k1 = 2 k2 and
    k2 = 2 k1 are rejected).
    """
    require_valid(p)
    if k1 == k2:
        raise ValueError("the two modes must be distinct")
    if abs(k1 - 2.0 * k2) < 1e-9 or abs(k2 - 2.0 * k1) < 1e-9:
        raise ResonanceError("harmonic resonance between modes (2:1 ratio)")
    chi_crit = chi_c(p)
    band = unstable_band(p, chi_crit * (1.0 + eps * eps))
    for k in (k1, k2):
        if band is None or not (band[0] < k * k < band[1]):
            raise ValueError(f"mode k={k} is not unstable at chi = chi_c(1+eps^2)")

    u_c, mu, alpha, beta = p.u_c, p.mu, p.alpha, p.beta
    K, D = linearization_matrices(p, chi_crit)
    Lop = lambda k_sq: K - k_sq * D

    M1 = (beta + k1 * k1 * p.d2) / alpha
    M2 = (beta + k2 * k2 * p.d2) / alpha
    Ms1 = alpha / (mu + p.d1 * k1 * k1)
    Ms2 = alpha / (mu + p.d1 * k2 * k2)

    def F0(Mi):
        return np.array([mu * Mi * Mi / (2.0 * u_c), 0.0])

    def F2(ki, Mi):
        return np.array([mu * Mi * Mi / (2.0 * u_c) - ki * ki * chi_crit * (1.0 - 2.0 * u_c) * Mi, 0.0])

    Fp = np.array([mu / u_c * M1 * M2 + 0.5 * (2.0 * u_c - 1.0) * chi_crit
                   * (k2 * k2 * M1 + k1 * k1 * M2 + k1 * k2 * M1 + k1 * k2 * M2), 0.0])
    Fm = np.array([mu / u_c * M1 * M2 + 0.5 * (2.0 * u_c - 1.0) * chi_crit
                   * (k2 * k2 * M1 + k1 * k1 * M2 - k1 * k2 * M1 - k1 * k2 * M2), 0.0])

    W20_1 = _solve2(K, F0(M1), "mean, mode 1")
    W20_2 = _solve2(K, F0(M2), "mean, mode 2")
    W22_1 = _solve2(Lop(4.0 * k1 * k1), F2(k1, M1), "second harmonic of k1")
    W22_2 = _solve2(Lop(4.0 * k2 * k2), F2(k2, M2), "second harmonic of k2")
    W2p = _solve2(Lop((k1 + k2) ** 2), Fp, "sum harmonic k1+k2")
    W2m = _solve2(Lop((k1 - k2) ** 2), Fm, "difference harmonic k1-k2")

    def G13(kl, Ml, W20l, W22l):
        return np.array([
            (2.0 * u_c - 1.0) * chi_crit * kl * kl * (W22l[1] * Ml - 0.5 * W22l[0] + W20l[0])
            + 0.25 * chi_crit * kl * kl * Ml * Ml
            + mu / u_c * Ml * (2.0 * W20l[0] + W22l[0]),
            0.0,
        ])

    def G12(kl, ko, Ml, Mo, W20o):
        return np.array([
            0.5 * (2.0 * u_c - 1.0) * chi_crit
            * ((kl * kl + kl * ko) * W2p[1] * Mo + (kl * kl - kl * ko) * W2m[1] * Mo
               + kl * ko * (W2m[0] - W2p[0]) + 2.0 * W20o[0] * kl * kl)
            + 0.5 * chi_crit * kl * kl * Mo * Mo
            + mu / u_c * (2.0 * W20o[0] * Ml + W2p[0] * Mo + W2m[0] * Mo),
            0.0,
        ])

    chi2 = chi_crit  # chi = chi_c (1 + eps^2)
    out = {}
    for lbl, kl, ko, Ml, Mo, Msl, W20l, W22l, W20o in (
        (1, k1, k2, M1, M2, Ms1, W20_1, W22_1, W20_2),
        (2, k2, k1, M2, M1, Ms2, W20_2, W22_2, W20_1),
    ):
        rho = np.array([Ml, 1.0])
        psi = np.array([Msl, 1.0])
        den = float(rho @ psi)
        out[lbl] = (
            kl * kl * chi2 * u_c * (1.0 - u_c) * Msl / den,
            float(G13(kl, Ml, W20l, W22l) @ psi) / den,
            float(G12(kl, ko, Ml, Mo, W20o) @ psi) / den,
        )
    return CompetitionCoefficients(
        k1=k1, k2=k2, eps=eps, chi_crit=chi_crit,
        M1=M1, M2=M2, M1_star=Ms1, M2_star=Ms2,
        sigma1=out[1][0], L1=out[1][1], Omega1=out[1][2],
        sigma2=out[2][0], L2=out[2][1], Omega2=out[2][2],
        W20_1=W20_1, W20_2=W20_2, W22_1=W22_1, W22_2=W22_2, W2p=W2p, W2m=W2m,
    )


def auto_mode_pair(p: ModelParams, eps: float):
    """Pick the two admissible unstable modes closest to the most unstable
    wavenumber at chi = chi_c (1+eps^2)."""
    from .linear_stability import admissible_unstable_modes, most_unstable_mode

    chi = chi_c(p) * (1.0 + eps * eps)
    modes = admissible_unstable_modes(p, chi)
    if len(modes) < 2:
        raise ValueError("fewer than two admissible unstable modes at this eps")
    km_sq, _ = most_unstable_mode(p, eps)
    km = math.sqrt(km_sq)
    ranked = sorted(modes, key=lambda nk: abs(nk[1] - km))
    return ranked[0][1], ranked[1][1]


@dataclass(frozen=True, eq=False)
class Equilibrium:
    A1: float
    A2: float
    jacobian: np.ndarray
    eigenvalues: np.ndarray
    kind: str  # "stable node" | "unstable node" | "saddle" | "degenerate"


@dataclass(frozen=True)
class EquilibriumSet:
    points: list

    def nearest(self, A1: float, A2: float) -> Equilibrium:
        return min(self.points, key=lambda e: math.hypot(e.A1 - A1, e.A2 - A2))

    def to_dict(self) -> dict:
        return {
            "equilibria": [
                {"A1": e.A1, "A2": e.A2, "kind": e.kind,
                 "eigenvalues": [float(v) for v in np.real(e.eigenvalues)]}
                for e in self.points
            ]
        }


def _classify(J: np.ndarray, zero_tol: float = 1e-9) -> tuple:
    eig = np.linalg.eigvals(J)
    re = np.real(eig)
    if np.any(np.abs(re) < zero_tol):
        return eig, "degenerate"
    if np.all(re < 0):
        return eig, "stable node"
    if np.all(re > 0):
        return eig, "unstable node"
    return eig, "saddle"


def equilibria(cc: CompetitionCoefficients) -> EquilibriumSet:
    """All nonnegative equilibria of the competition system with analytic
    Jacobians and stability classes.

    Besides the origin, the semi-trivial points (sqrt(sigma_l/L_l) on each
    axis) exist when their radicand is positive; the interior point solves
    the linear system sigma_l = L_l A_l^2 + Omega_l A_other^2 in the
    squared amplitudes and is kept only when both squares are positive.
    """
    pts = [(0.0, 0.0)]
    if cc.sigma1 / cc.L1 > 0:
        pts.append((math.sqrt(cc.sigma1 / cc.L1), 0.0))
    if cc.sigma2 / cc.L2 > 0:
        pts.append((0.0, math.sqrt(cc.sigma2 / cc.L2)))
    det = cc.L1 * cc.L2 - cc.Omega1 * cc.Omega2
    if det != 0:
        a1_sq = (cc.sigma1 * cc.L2 - cc.sigma2 * cc.Omega1) / det
        a2_sq = (cc.sigma2 * cc.L1 - cc.sigma1 * cc.Omega2) / det
        if a1_sq > 0 and a2_sq > 0:
            pts.append((math.sqrt(a1_sq), math.sqrt(a2_sq)))
    out = []
    for A1, A2 in pts:
        J = cc.jacobian(A1, A2)
        eig, kind = _classify(J)
        out.append(Equilibrium(A1=A1, A2=A2, jacobian=J, eigenvalues=eig, kind=kind))
    return EquilibriumSet(out)


@dataclass(frozen=True, eq=False)
class AmplitudeTrajectory:
    T: np.ndarray
    A1: np.ndarray
    A2: np.ndarray
    attractor: Optional[Equilibrium]
    diverged: bool

    @property
    def final(self) -> tuple:
        return float(self.A1[-1]), float(self.A2[-1])


def integrate_amplitudes(cc: CompetitionCoefficients, A0: tuple, horizon: float = 400.0,
                         rtol: float = 1e-9, atol: float = 1e-12,
                         match_tol: float = 1e-4) -> AmplitudeTrajectory:
    """Integrate the amplitude equations from ``A0`` with an embedded 4(5)
    pair until the flow stalls (||dA/dT|| < 1e-10), blows up (||A|| > 1e3),
    or the horizon is reached. The endpoint is matched to the nearest
    equilibrium within ``match_tol``; no match leaves ``attractor`` None.
    """
    from scipy.integrate import solve_ivp

    if A0[0] < 0 or A0[1] < 0:
        raise ValueError("initial amplitudes must be nonnegative")

    def f(_, y):
        return cc.flow(y[0], y[1])

    def settled(_, y):
        f1, f2 = cc.flow(y[0], y[1])
        return math.hypot(f1, f2) - 1e-10

    settled.terminal = True
    settled.direction = -1

    def blowup(_, y):
        return math.hypot(y[0], y[1]) - 1e3

    blowup.terminal = True
    blowup.direction = 1

    sol = solve_ivp(f, (0.0, horizon), list(A0), method="RK45", rtol=rtol, atol=atol,
                    events=[settled, blowup], dense_output=False)
    diverged = len(sol.t_events[1]) > 0
    if diverged:
        return AmplitudeTrajectory(sol.t, sol.y[0], sol.y[1], None, True)
    eq = equilibria(cc)
    last = (float(sol.y[0, -1]), float(sol.y[1, -1]))
    near = eq.nearest(*last)
    if math.hypot(near.A1 - last[0], near.A2 - last[1]) > match_tol:
        near = None
    return AmplitudeTrajectory(sol.t, sol.y[0], sol.y[1], near, False)


def basin_map(cc: CompetitionCoefficients, a1_values: np.ndarray, a2_values: np.ndarray,
              horizon: float = 400.0) -> tuple:
    """Label every grid start by the equilibrium it converges to.

    Returns (labels, legend): ``labels[i, j]`` is the index into ``legend``
    of the attractor reached from (a1_values[i], a2_values[j]); -1 marks
    divergence or no match.
    """
    eq = equilibria(cc)
    legend = eq.points
    labels = np.full((len(a1_values), len(a2_values)), -1, dtype=int)
    for i, a1 in enumerate(a1_values):
        for j, a2 in enumerate(a2_values):
            tr = integrate_amplitudes(cc, (float(a1), float(a2)), horizon=horizon)
            if tr.attractor is not None:
                labels[i, j] = min(
                    range(len(legend)),
                    key=lambda m: math.hypot(legend[m].A1 - tr.attractor.A1,
                                             legend[m].A2 - tr.attractor.A2),
                )
    return labels, legend


def reconstruct_two_mode(p: ModelParams, cc: CompetitionCoefficients, attractor: tuple,
                         eps: float, x: np.ndarray) -> tuple:
    """Leading-order stationary pattern for an attractor (A1, A2):

        u = u_c  + eps (A1 M1 cos k1 x + A2 M2 cos k2 x),
        v = v_bar + eps (A1    cos k1 x + A2    cos k2 x).
    """
    ss = uniform_steady_state(p)
    A1, A2 = attractor
    x = np.asarray(x, dtype=float)
    c1, c2 = np.cos(cc.k1 * x), np.cos(cc.k2 * x)
    u = ss.u_bar + eps * (A1 * cc.M1 * c1 + A2 * cc.M2 * c2)
    v = ss.v_bar + eps * (A1 * c1 + A2 * c2)
    return u, v
