"""Independent multiple-scales engine used as a test oracle.

Instead of the hand-collected coefficient formulas in the package, this
engine performs the expansion mechanically. Fields are stored as sparse
cosine series with amplitude-power bookkeeping,

    w = sum over (p, j) of  c[p, j] * A^p * cos(j*k*x),

and the order-m right-hand side is generated directly from the model's
nonlinearity (quadratic taxis term, cubic taxis term, quadratic logistic
term, and the chi-expansion couplings) by convolving the series. The
harmonic-1 solvability conditions then *define* the amplitude-equation
coefficients. Nothing here shares code with the package's assembly, so
agreement is a genuine two-path check.
"""
from __future__ import annotations

import numpy as np


def _k_mat(p):
    return np.array([[-p.mu, 0.0], [p.alpha, -p.beta]])


def _d_mat(p, chi):
    return np.array([[p.d1, -chi * p.u_c * (1.0 - p.u_c)], [0.0, p.d2]])


def _sadd(d, key, val):
    d[key] = d.get(key, 0.0) + val


def _comp(field, c):
    return {key: vec[c] for key, vec in field.items() if vec[c] != 0.0}


def _smul(a, b):
    out = {}
    for (pa, ja), va in a.items():
        for (pb, jb), vb in b.items():
            _sadd(out, (pa + pb, ja + jb), 0.5 * va * vb)
            _sadd(out, (pa + pb, abs(ja - jb)), 0.5 * va * vb)
    return out


def _chemo(a, b, k0):
    """Cosine series of d/dx(a * d/dx b) for scalar series on the lattice k0."""
    out = {}
    for (pa, ja), va in a.items():
        for (pb, jb), vb in b.items():
            c = -0.5 * k0 * k0 * va * vb * jb
            _sadd(out, (pa + pb, ja + jb), c * (jb + ja))
            _sadd(out, (pa + pb, abs(jb - ja)), c * (jb - ja))
    return out


def _vec_first(scalar):
    return {key: np.array([v, 0.0]) for key, v in scalar.items()}


def _vadd(*fields):
    out = {}
    for f in fields:
        for key, vec in f.items():
            if key in out:
                out[key] = out[key] + vec
            else:
                out[key] = vec.copy()
    return out


def _dT2(field, dA):
    """Slow-time derivative: A^p -> p A^(p-1) * dA/dT with dA/dT the
    polynomial {power: coeff}."""
    out = {}
    for (pw, j), vec in field.items():
        if pw == 0:
            continue
        for q, c in dA.items():
            key = (pw - 1 + q, j)
            if key in out:
                out[key] = out[key] + pw * c * vec
            else:
                out[key] = pw * c * vec
    return out


def quintic_coefficients(p, k, chi_crit, chi2):
    """(sigma, L, sigma_tilde, L_tilde, Q_tilde) plus all order fields."""
    u_c, mu = p.u_c, p.mu
    M = (p.beta + k * k * p.d2) / p.alpha
    Ms = p.alpha / (mu + p.d1 * k * k)
    rho = np.array([M, 1.0])
    psi = np.array([Ms, 1.0])
    denom = float(rho @ psi)
    K = _k_mat(p)
    D = _d_mat(p, chi_crit)
    Lmat = {j: K - (j * k) ** 2 * D for j in range(0, 9)}
    chis = {0: chi_crit, 2: chi2}

    def rhs_order(m, ws):
        terms = []
        # chi-expansion couplings: + M_chi_c * laplacian(w_j), c + j = m
        for c, chi_v in chis.items():
            if c == 0:
                continue
            j = m - c
            if j in ws:
                t = {}
                for (pw, jj), vec in ws[j].items():
                    t[(pw, jj)] = np.array(
                        [chi_v * u_c * (1.0 - u_c) * (-((jj * k) ** 2)) * vec[1], 0.0])
                terms.append(t)
        # quadratic taxis: +(1-2u_c) chi_c d/dx(W_i^(1) d/dx W_j^(2))
        for c, chi_v in chis.items():
            for i in range(1, m):
                j = m - c - i
                if j < 1 or i not in ws or j not in ws:
                    continue
                q = _chemo(_comp(ws[i], 0), _comp(ws[j], 1), k)
                terms.append(_vec_first({key: (1.0 - 2.0 * u_c) * chi_v * v
                                         for key, v in q.items()}))
        # cubic taxis: - chi_c d/dx(W_i^(1) W_j^(1) d/dx W_r^(2))
        for c, chi_v in chis.items():
            for i in range(1, m):
                for j in range(1, m):
                    r = m - c - i - j
                    if r < 1 or i not in ws or j not in ws or r not in ws:
                        continue
                    q = _chemo(_smul(_comp(ws[i], 0), _comp(ws[j], 0)), _comp(ws[r], 1), k)
                    terms.append(_vec_first({key: -chi_v * v for key, v in q.items()}))
        # quadratic logistic: +(mu/u_c) W_i^(1) W_j^(1)
        for i in range(1, m):
            j = m - i
            if i not in ws or j not in ws:
                continue
            q = _smul(_comp(ws[i], 0), _comp(ws[j], 0))
            terms.append(_vec_first({key: mu / u_c * v for key, v in q.items()}))
        return _vadd(*terms) if terms else {}

    def solve_harmonic(j, rhs):
        return np.linalg.solve(Lmat[j], rhs)

    ws = {1: {(1, 1): rho}}
    # order 2
    F = rhs_order(2, ws)
    ws[2] = {key: solve_harmonic(key[1], vec) for key, vec in F.items()}
    # order 3 with solvability at harmonic 1
    G = rhs_order(3, ws)
    dA2 = {}
    for (pw, j), vec in G.items():
        if j == 1:
            dA2[pw] = dA2.get(pw, 0.0) - float(vec @ psi) / denom
    sigma = dA2.get(1, 0.0)
    L = -dA2.get(3, 0.0)
    w3 = {}
    for (pw, j), vec in G.items():
        if j == 1:
            r = vec + dA2[pw] * rho
            x, *_ = np.linalg.lstsq(Lmat[1], r, rcond=None)
            w3[(pw, j)] = x - float(x @ rho) / float(rho @ rho) * rho
        else:
            w3[(pw, j)] = solve_harmonic(j, vec)
    ws[3] = w3
    # order 4: no critical-harmonic content remains after the conventions
    H = _vadd(rhs_order(4, ws), _dT2(ws[2], dA2))
    for (pw, j), vec in H.items():
        if j == 1:
            assert np.abs(vec).max() < 1e-9, "unexpected critical-harmonic forcing at order 4"
    ws[4] = {key: solve_harmonic(key[1], vec) for key, vec in H.items() if key[1] != 1}
    # order 5 solvability
    P = _vadd(rhs_order(5, ws), _dT2(ws[3], dA2))
    dA4 = {}
    for (pw, j), vec in P.items():
        if j == 1:
            dA4[pw] = dA4.get(pw, 0.0) - float(vec @ psi) / denom
    return {
        "sigma": sigma,
        "L": L,
        "sigma_tilde": dA4.get(1, 0.0),
        "L_tilde": -dA4.get(3, 0.0),
        "Q_tilde": dA4.get(5, 0.0),
        "fields": ws,
    }


def competition_coefficients(p, k0, j1, j2, chi_crit, chi2):
    """Two-mode cubic coefficients on the commensurate lattice k0
    (k1 = j1*k0, k2 = j2*k0). Returns {1: (sigma, L, Omega), 2: ...}."""
    u_c, mu = p.u_c, p.mu
    K = _k_mat(p)
    D = _d_mat(p, chi_crit)
    k1, k2 = j1 * k0, j2 * k0
    M1 = (p.beta + k1 * k1 * p.d2) / p.alpha
    M2 = (p.beta + k2 * k2 * p.d2) / p.alpha
    rho1, rho2 = np.array([M1, 1.0]), np.array([M2, 1.0])
    psi1 = np.array([p.alpha / (mu + p.d1 * k1 * k1), 1.0])
    psi2 = np.array([p.alpha / (mu + p.d1 * k2 * k2), 1.0])

    def comp2(f, c):
        return {key: vec[c] for key, vec in f.items() if vec[c] != 0.0}

    def smul2(a, b):
        out = {}
        for (pa1, pa2, ja), va in a.items():
            for (pb1, pb2, jb), vb in b.items():
                _sadd(out, (pa1 + pb1, pa2 + pb2, ja + jb), 0.5 * va * vb)
                _sadd(out, (pa1 + pb1, pa2 + pb2, abs(ja - jb)), 0.5 * va * vb)
        return out

    def chemo2(a, b):
        out = {}
        for (pa1, pa2, ja), va in a.items():
            for (pb1, pb2, jb), vb in b.items():
                c = -0.5 * k0 * k0 * va * vb * jb
                _sadd(out, (pa1 + pb1, pa2 + pb2, ja + jb), c * (jb + ja))
                _sadd(out, (pa1 + pb1, pa2 + pb2, abs(jb - ja)), c * (jb - ja))
        return out

    def vec2(scal):
        return {key: np.array([v, 0.0]) for key, v in scal.items()}

    w1 = {(1, 0, j1): rho1, (0, 1, j2): rho2}
    q = chemo2(comp2(w1, 0), comp2(w1, 1))
    F = _vadd(vec2({key: (1.0 - 2.0 * u_c) * chi_crit * v for key, v in q.items()}),
              vec2({key: mu / u_c * v
                    for key, v in smul2(comp2(w1, 0), comp2(w1, 0)).items()}))
    w2 = {}
    for (p1, p2, j), vec in F.items():
        assert j not in (j1, j2), "resonant pair"
        w2[(p1, p2, j)] = np.linalg.solve(K - (j * k0) ** 2 * D, vec)

    terms = []
    t = {}
    for (p1, p2, j), vec in w1.items():
        t[(p1, p2, j)] = np.array([chi2 * u_c * (1.0 - u_c) * (-((j * k0) ** 2)) * vec[1], 0.0])
    terms.append(t)
    q = _vadd(chemo2(comp2(w1, 0), comp2(w2, 1)), chemo2(comp2(w2, 0), comp2(w1, 1)))
    terms.append(vec2({key: (1.0 - 2.0 * u_c) * chi_crit * v for key, v in q.items()}))
    qc = chemo2(smul2(comp2(w1, 0), comp2(w1, 0)), comp2(w1, 1))
    terms.append(vec2({key: -chi_crit * v for key, v in qc.items()}))
    rr = smul2(comp2(w1, 0), comp2(w2, 0))
    terms.append(vec2({key: 2.0 * mu / u_c * v for key, v in rr.items()}))
    G = _vadd(*terms)

    out = {}
    for lbl, jj, rho, psi in ((1, j1, rho1, psi1), (2, j2, rho2, psi2)):
        den = float(rho @ psi)
        coeffs = {}
        for (p1, p2, j), vec in G.items():
            if j == jj:
                coeffs[(p1, p2)] = coeffs.get((p1, p2), 0.0) - float(vec @ psi) / den
        lin = (1, 0) if lbl == 1 else (0, 1)
        cub = (3, 0) if lbl == 1 else (0, 3)
        cross = (1, 2) if lbl == 1 else (2, 1)
        out[lbl] = (coeffs.get(lin, 0.0), -coeffs.get(cub, 0.0), -coeffs.get(cross, 0.0))
    return out
