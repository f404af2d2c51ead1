import dataclasses
import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from chemopattern import (
    ChiSNotFoundError,
    ModelParams,
    SolvabilityError,
    bifurcation_branches,
    chi_c,
    chi_min,
    chi_s,
    cubic_landau,
    eigenpair,
    k_c,
    quintic_landau,
    reconstruct_fourth_order,
    reconstruct_second_order,
    second_order_vectors,
    setup_expansion,
    solve_reduced,
    stationary_amplitude_cubic,
    stationary_amplitude_quintic,
    uniform_steady_state,
)
from chemopattern.amplitude import reduced_operator
from chemopattern.linear_stability import chi_critical_for_mode

import oracles


# ---------------------------------------------------------------- eigenpairs

def test_eigenpair_reference_values(sub_params, super_params):
    pair = eigenpair(sub_params, k_c(sub_params))
    assert pair.M == pytest.approx(1.40825, abs=1e-4)
    pair2 = eigenpair(super_params, 3.5)
    assert pair2.M == pytest.approx((34.0 + 12.25 * 0.6) / 36.0, rel=1e-14)


def test_eigenpair_unit_M():
    # beta + k^2 d2 = alpha makes the first kernel component 1
    p = ModelParams(d1=0.5, d2=1.0, chi=0.0, mu=0.2, u_c=0.4,
                    alpha=2.0, beta=1.0, domain_length=10.0)
    assert eigenpair(p, 1.0).M == pytest.approx(1.0, rel=1e-14)


def test_kernel_and_adjoint_nullity(sub_params, super_params):
    for p, k in ((sub_params, k_c(sub_params)), (super_params, 3.5)):
        pair = eigenpair(p, k)
        L1 = reduced_operator(p, k, 1)
        assert np.linalg.norm(L1 @ pair.rho) < 1e-10
        assert np.linalg.norm(L1.T @ pair.psi) < 1e-10


# ------------------------------------------------------- second-order fields

def test_w20_component_ratio(sub_params, super_params):
    for p, k in ((sub_params, k_c(sub_params)), (super_params, 3.5)):
        W20, _ = second_order_vectors(p, eigenpair(p, k))
        assert W20[1] / W20[0] == pytest.approx(p.alpha / p.beta, rel=1e-13)


def test_w22_two_path_agreement(sub_params, super_params):
    from chemopattern.amplitude import _second_order_rhs

    for p, k in ((sub_params, k_c(sub_params)), (super_params, 3.5)):
        pair = eigenpair(p, k)
        W20, W22 = second_order_vectors(p, pair)
        F0, F2 = _second_order_rhs(p, pair, chi_critical_for_mode(p, k * k))
        W20_solve = solve_reduced(0, F0 / 4.0, p, k)
        W22_solve = solve_reduced(2, F2 / 4.0, p, k)
        assert np.allclose(W20, W20_solve, rtol=1e-10, atol=1e-14)
        assert np.allclose(W22, W22_solve, rtol=1e-10, atol=1e-14)


def test_half_capacity_kills_quadratic_taxis_forcing(sub_params):
    # at u_c = 1/2 the (1-2u_c) term drops and F2 reduces to F0
    from chemopattern.amplitude import _second_order_rhs

    pair = eigenpair(sub_params, k_c(sub_params))
    F0, F2 = _second_order_rhs(sub_params, pair, chi_c(sub_params))
    assert np.allclose(F0, F2, rtol=1e-14)


def test_resonant_second_harmonic_detected(sub_params):
    # the second-harmonic denominator vanishes exactly when k^2 = k_c^2 / 2
    from chemopattern.amplitude import ResonanceError

    k = k_c(sub_params) / math.sqrt(2.0)
    with pytest.raises(ResonanceError, match="second harmonic"):
        second_order_vectors(sub_params, eigenpair(sub_params, k))


# -------------------------------------------------------------- solve_reduced

def test_solve_reduced_zero_rhs_singular(sub_params):
    x = solve_reduced(1, np.zeros(2), sub_params, k_c(sub_params))
    assert np.all(x == 0.0)


def test_solve_reduced_rejects_nonorthogonal_rhs(sub_params):
    pair = eigenpair(sub_params, k_c(sub_params))
    with pytest.raises(SolvabilityError):
        solve_reduced(1, pair.psi, sub_params, k_c(sub_params))


def test_solve_reduced_mean_system_always_solvable(sub_params):
    # the harmonic-0 operator is the reaction matrix, determinant mu*beta > 0
    x = solve_reduced(0, np.array([1.0, 0.0]), sub_params, k_c(sub_params))
    L0 = reduced_operator(sub_params, k_c(sub_params), 0)
    assert np.allclose(L0 @ x, [1.0, 0.0], atol=1e-12)


def test_solve_reduced_solution_orthogonal_to_kernel(sub_params):
    pair = eigenpair(sub_params, k_c(sub_params))
    setup = setup_expansion(sub_params, eps=0.1, mode_policy="exact")
    sigma, L, _ = cubic_landau(sub_params, setup)
    coeffs = quintic_landau(sub_params, setup)
    for vec in (coeffs.vectors.W31, coeffs.vectors.W32):
        assert abs(vec @ pair.rho) < 1e-12 * np.linalg.norm(vec)


# -------------------------------------------------------------- cubic branch

def test_sigma_positive(sub_params, super_params):
    for p, policy in ((sub_params, "exact"), (super_params, "substitute")):
        sigma, _, _ = cubic_landau(p, setup_expansion(p, eps=0.1, mode_policy=policy))
        assert sigma > 0


def test_cubic_sign_flip_over_growth_rate():
    # at u_c = 1/2 the cubic coefficient changes sign from supercritical to
    # subcritical as the growth rate increases
    signs = []
    for mu in (0.05, 0.2, 0.5, 1.0, 2.0):
        p = ModelParams(d1=0.3, d2=1.0, chi=0.0, mu=mu, u_c=0.5,
                        alpha=10.0, beta=10.0, domain_length=20.0)
        _, L, _ = cubic_landau(p, setup_expansion(p, eps=0.1, mode_policy="exact"))
        signs.append(L > 0)
    assert signs[0] and not signs[-1]
    assert sum(1 for a, b in zip(signs, signs[1:]) if a != b) == 1


def test_subcritical_reference_case(sub_params):
    _, L, crit = cubic_landau(sub_params, setup_expansion(sub_params, eps=0.1,
                                                          mode_policy="exact"))
    assert L < 0 and crit == "subcritical"


def test_supercritical_reference_case(super_params):
    sigma, L, crit = cubic_landau(super_params,
                                  setup_expansion(super_params, eps=0.1))
    assert L > 0 and crit == "supercritical"
    assert math.sqrt(sigma / L) == pytest.approx(0.3129, abs=2e-4)


# ------------------------------------------------------------- quintic branch

def test_quintic_reference_values(sub_params):
    setup = setup_expansion(sub_params, eps=0.1, mode_policy="exact")
    c = quintic_landau(sub_params, setup)
    assert c.sigma_bar == pytest.approx(1.5351, abs=2e-3)
    assert c.L_bar == pytest.approx(-0.7588, abs=2e-3)
    assert c.Q_bar == pytest.approx(-0.6415, abs=2e-3)
    a_inf, a_un = stationary_amplitude_quintic(c)
    assert a_inf == pytest.approx(1.4992, abs=5e-3)
    assert a_un is None  # above threshold only the stable branch exists


def test_bars_collapse_as_offset_vanishes(sub_params):
    c = quintic_landau(sub_params, setup_expansion(sub_params, eps=0.1,
                                                   mode_policy="exact"))
    sb, Lb, Qb = c.at_eps_sq(0.0)
    assert sb == c.sigma and Lb == c.L_cubic and Qb == 0.0


def test_correction_vector_residuals(sub_params, super_params):
    # every fourth-order solve re-substitutes to its right-hand side
    for p, policy in ((sub_params, "exact"), (super_params, "substitute")):
        setup = setup_expansion(p, eps=0.1, mode_policy=policy)
        c = quintic_landau(p, setup)
        V = c.vectors
        k = setup.k
        systems = [
            (0, V.W40, 2.0 * c.sigma * V.W20 + V.H02),
            (0, V.W41, -2.0 * c.L_cubic * V.W20 + V.H04),
            (2, V.W42, 2.0 * c.sigma * V.W22 + V.H22),
            (2, V.W43, -2.0 * c.L_cubic * V.W22 + V.H24),
            (4, V.W44, V.H4),
            (3, V.W33, V.G3),
        ]
        for i, w, rhs_vec in systems:
            Li = reduced_operator(p, k, i, setup.chi_crit)
            resid = np.linalg.norm(Li @ w - rhs_vec)
            assert resid < 1e-9 * max(1.0, np.linalg.norm(rhs_vec))


def test_third_order_solvability(sub_params, super_params):
    # the singular-system right-hand sides are orthogonal to the adjoint
    # null vector before solving
    for p, policy in ((sub_params, "exact"), (super_params, "substitute")):
        setup = setup_expansion(p, eps=0.1, mode_policy=policy)
        c = quintic_landau(p, setup)
        pair = c.pair
        r31 = c.sigma * pair.rho - c.vectors.G11
        r32 = -c.L_cubic * pair.rho + c.vectors.G13
        for r in (r31, r32):
            assert abs(r @ pair.psi) <= 1e-9 * max(1.0, np.linalg.norm(r))
        # and the solved fields satisfy the singular systems
        L1 = reduced_operator(p, setup.k, 1, setup.chi_crit)
        assert np.linalg.norm(L1 @ c.vectors.W31 - r31) < 1e-9 * max(1.0, np.linalg.norm(r31))
        assert np.linalg.norm(L1 @ c.vectors.W32 - r32) < 1e-9 * max(1.0, np.linalg.norm(r32))


def test_psi_rescaling_invariance(sub_params):
    # every coefficient is a ratio of projections onto the adjoint vector,
    # so rescaling it must not move sigma or L at all
    setup = setup_expansion(sub_params, eps=0.1, mode_policy="exact")
    c = quintic_landau(sub_params, setup)
    pair = c.pair
    for scale in (7.0, 1e-3):
        psi = scale * pair.psi
        den = float(pair.rho @ psi)
        sigma = float(c.vectors.G11 @ psi) / den
        L = float(c.vectors.G13 @ psi) / den
        assert sigma == pytest.approx(c.sigma, rel=1e-12)
        assert L == pytest.approx(c.L_cubic, rel=1e-12)


@pytest.mark.parametrize("params,policy", [
    ("sub", "exact"),
    ("super", "substitute"),
    ("other", "exact"),
])
def test_against_independent_expansion_engine(params, policy, sub_params, super_params):
    p = {"sub": sub_params, "super": super_params,
         "other": ModelParams(d1=0.4, d2=0.9, chi=0.0, mu=0.7, u_c=0.3,
                              alpha=12.0, beta=8.0, domain_length=15.0)}[params]
    setup = setup_expansion(p, eps=0.1, mode_policy=policy)
    c = quintic_landau(p, setup)
    ref = oracles.quintic_coefficients(p, setup.k, setup.chi_crit, setup.chi2)
    assert c.sigma == pytest.approx(ref["sigma"], rel=1e-10)
    assert c.L_cubic == pytest.approx(ref["L"], rel=1e-10)
    assert c.sigma_tilde == pytest.approx(ref["sigma_tilde"], rel=1e-9)
    assert c.L_tilde == pytest.approx(ref["L_tilde"], rel=1e-9)
    assert c.Q_tilde == pytest.approx(ref["Q_tilde"], rel=1e-9)
    # the slaved fields agree too
    V = c.vectors
    f = ref["fields"]
    assert np.allclose(V.W20, f[2][(2, 0)], rtol=1e-10)
    assert np.allclose(V.W22, f[2][(2, 2)], rtol=1e-10)
    assert np.allclose(V.W31, f[3][(1, 1)], rtol=1e-9, atol=1e-12)
    assert np.allclose(V.W32, f[3][(3, 1)], rtol=1e-9, atol=1e-12)
    assert np.allclose(V.W33, f[3][(3, 3)], rtol=1e-9, atol=1e-12)
    assert np.allclose(V.W44, f[4][(4, 4)], rtol=1e-9, atol=1e-12)


# ------------------------------------------------------ stationary amplitudes

def test_cubic_amplitude_simple_ratios(super_params):
    c = quintic_landau(super_params, setup_expansion(super_params, eps=0.1))
    one = dataclasses.replace(c, sigma=2.5, L_cubic=2.5)
    assert stationary_amplitude_cubic(one) == pytest.approx(1.0)
    two = dataclasses.replace(c, sigma=4.0, L_cubic=1.0)
    assert stationary_amplitude_cubic(two) == pytest.approx(2.0)


def test_cubic_amplitude_rejects_subcritical(sub_params):
    c = quintic_landau(sub_params, setup_expansion(sub_params, eps=0.1,
                                                   mode_policy="exact"))
    with pytest.raises(ValueError, match="subcritical"):
        stationary_amplitude_cubic(c)


def test_quintic_amplitude_is_equilibrium(sub_params):
    c = quintic_landau(sub_params, setup_expansion(sub_params, eps=0.1,
                                                   mode_policy="exact"))
    a, _ = stationary_amplitude_quintic(c)
    flow = c.sigma_bar * a - c.L_bar * a**3 + c.Q_bar * a**5
    assert abs(flow) < 1e-12 * c.sigma_bar * a


def test_quintic_amplitude_small_sigma_limit(sub_params):
    c = quintic_landau(sub_params, setup_expansion(sub_params, eps=0.1,
                                                   mode_policy="exact"))
    tiny = dataclasses.replace(c, sigma_bar=1e-14)
    a, _ = stationary_amplitude_quintic(tiny)
    assert a == pytest.approx(math.sqrt(c.L_bar / c.Q_bar), rel=1e-6)


def test_quintic_amplitude_no_equilibrium():
    # negative linear coefficient and negative discriminant: nothing nonzero
    import chemopattern.amplitude as ampmod

    class Fake:
        sigma_bar, L_bar, Q_bar = -1.0, 1.0, -1.0
    a, b = ampmod.stationary_amplitude_quintic(Fake())
    assert a is None and b is None


def test_quintic_flow_converges_to_equilibrium(sub_params):
    # ODE oracle: integrating the quintic amplitude equation from a small
    # seed lands on the predicted equilibrium
    c = quintic_landau(sub_params, setup_expansion(sub_params, eps=0.1,
                                                   mode_policy="exact"))
    a_inf, _ = stationary_amplitude_quintic(c)
    sol = solve_ivp(lambda t, y: c.sigma_bar * y - c.L_bar * y**3 + c.Q_bar * y**5,
                    (0.0, 400.0), [0.01], rtol=1e-12, atol=1e-14)
    assert abs(sol.y[0, -1] - a_inf) < 1e-6


# ----------------------------------------------------------------- chi_s

def test_chi_s_reference(sub_params):
    value = chi_s(sub_params)
    assert value == pytest.approx(2.3728, abs=2e-3)
    assert value < chi_c(sub_params)


def test_chi_s_not_found_for_supercritical(super_params):
    with pytest.raises(ChiSNotFoundError):
        chi_s(super_params, mode_policy="substitute")


# ------------------------------------------------------------- reconstruction

def test_reconstruction_collapses_at_zero_offset(super_params, sub_params):
    x = np.linspace(0.0, super_params.domain_length, 64)
    setup = dataclasses.replace(setup_expansion(super_params, eps=0.1), eps=0.0)
    u, v = reconstruct_second_order(super_params, setup, x)
    ss = uniform_steady_state(super_params)
    assert np.allclose(u, ss.u_bar) and np.allclose(v, ss.v_bar)

    setup4 = dataclasses.replace(setup_expansion(sub_params, eps=0.1,
                                                 mode_policy="exact"), eps=0.0)
    u4, v4 = reconstruct_fourth_order(sub_params, setup4,
                                      np.linspace(0, 20, 64), amplitude=1.2)
    ss4 = uniform_steady_state(sub_params)
    assert np.allclose(u4, ss4.u_bar) and np.allclose(v4, ss4.v_bar)


def test_reconstruction_peak_to_trough(super_params):
    eps = 0.05
    setup = setup_expansion(super_params, eps=eps)
    sigma, L, _ = cubic_landau(super_params, setup)
    a = math.sqrt(sigma / L)
    M = eigenpair(super_params, setup.k).M
    x = np.linspace(0.0, super_params.domain_length, 4001)
    u, _ = reconstruct_second_order(super_params, setup, x)
    expected = 2.0 * eps * a * M
    assert u.max() - u.min() == pytest.approx(expected, rel=10 * eps)


def test_reconstruction_amplitude_scaling(super_params):
    # halving eps halves the leading amplitude up to O(eps) relative error
    x = np.linspace(0.0, super_params.domain_length, 2001)
    amps = {}
    for eps in (0.1, 0.05):
        setup = setup_expansion(super_params, eps=eps)
        u, _ = reconstruct_second_order(super_params, setup, x)
        amps[eps] = 0.5 * (u.max() - u.min())
    ratio = amps[0.1] / amps[0.05]
    assert ratio == pytest.approx(2.0, rel=0.1)


def test_fourth_order_truncation_structure(sub_params):
    # at leading order the fourth-order pattern reduces to the eps^1 term
    eps = 1e-4
    setup = dataclasses.replace(setup_expansion(sub_params, eps=0.1,
                                                mode_policy="exact"), eps=eps)
    coeffs = quintic_landau(sub_params, setup_expansion(sub_params, eps=0.1,
                                                        mode_policy="exact"))
    x = np.linspace(0.0, sub_params.domain_length, 501)
    A = 1.3
    u, v = reconstruct_fourth_order(sub_params, setup, x, coeffs=coeffs, amplitude=A)
    ss = uniform_steady_state(sub_params)
    pair = coeffs.pair
    lead_u = eps * A * pair.M * np.cos(setup.k * x)
    assert np.abs((u - ss.u_bar) - lead_u).max() < 10 * eps**2


# ---------------------------------------------------------------- bifurcation

def test_branch_structure_through_the_window(sub_params):
    xc = chi_c(sub_params)
    xs = chi_s(sub_params)
    rep = bifurcation_branches(sub_params, xs - 2 * (xc - xs), xc + 2 * (xc - xs),
                               samples=201)
    assert rep.chi_s == pytest.approx(xs, rel=1e-10)
    assert rep.coexistence_window == (rep.chi_s, rep.chi_c)

    def rows(chi_target):
        chis = sorted({q.chi for q in rep.points}, key=lambda c: abs(c - chi_target))
        got = [q for q in rep.points if q.chi == chis[0]]
        return sorted(got, key=lambda q: q.amplitude)

    below = rows(xs - 1.5 * (xc - xs))
    assert len(below) == 1 and below[0].amplitude == 0.0 and below[0].stable

    inside = rows(0.5 * (xs + xc))
    assert len(inside) == 3
    assert inside[0].amplitude == 0.0 and inside[0].stable
    assert not inside[1].stable and inside[1].amplitude > 0
    assert inside[2].stable and inside[2].amplitude > inside[1].amplitude

    above = rows(xc + 1.5 * (xc - xs))
    assert len(above) == 2
    assert above[0].amplitude == 0.0 and not above[0].stable
    assert above[1].stable and above[1].amplitude > 0


def test_branch_supercritical_single_forward(super_params):
    xc = chi_min(super_params).chi_min
    rep = bifurcation_branches(super_params, 0.99 * xc, 1.03 * xc, samples=101,
                               mode_policy="substitute")
    assert rep.chi_s is None
    for chi in (0.995 * xc, 1.02 * xc):
        got = [q for q in rep.points
               if abs(q.chi - chi) == min(abs(r.chi - chi) for r in rep.points)]
        nontrivial = [q for q in got if q.amplitude > 0]
        if chi < xc:
            assert not nontrivial
        else:
            assert len(nontrivial) == 1 and nontrivial[0].stable


def test_branch_amplitude_continuous_at_threshold(sub_params):
    # the stable branch's physical amplitude tends to sqrt(L/Q_tilde) from
    # both sides of the threshold
    setup = setup_expansion(sub_params, eps=0.1, mode_policy="exact")
    c = quintic_landau(sub_params, setup)
    xc = setup.chi_crit
    target = math.sqrt(c.L_cubic / c.Q_tilde)
    rep = bifurcation_branches(sub_params, xc * (1 - 1e-6), xc * (1 + 1e-6), samples=5)
    stable_pos = [q.amplitude for q in rep.points if q.stable and q.amplitude > 0]
    assert stable_pos and all(abs(a - target) < 1e-3 * target for a in stable_pos)
