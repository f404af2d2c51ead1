"""Hot loops of the finite-difference solver.

The chemotactic flux is discretized in conservative form on a
node-centered grid: flux at face j+1/2 is chi*ub*(1-ub)*(v[j+1]-v[j])/dx
with the arithmetic-mean face density ub, and the boundary faces carry
zero flux (the boundary nodes own half cells, hence the factor-2
divergences there). With this layout the cosine modes cos(n*pi*x/l) are
exact eigenvectors of the diffusion stencil and the trapezoid-rule mass
changes only through the reaction terms, to round-off.

Compiled with numba when available; the pure-numpy fallback implements
the identical arithmetic. Set CHEMOPATTERN_DISABLE_NUMBA=1 to force the
fallback.
"""
from __future__ import annotations

import os

import numpy as np


def _rhs_py(u, v, du, dv, d1, d2, chi, mu, u_c, alpha, beta, dx):
    inv = 1.0 / dx
    inv2 = inv * inv
    ub = 0.5 * (u[:-1] + u[1:])
    flux = chi * ub * (1.0 - ub) * (v[1:] - v[:-1]) * inv
    du[1:-1] = (
        d1 * (u[2:] - 2.0 * u[1:-1] + u[:-2]) * inv2
        - (flux[1:] - flux[:-1]) * inv
        + mu * u[1:-1] * (1.0 - u[1:-1] / u_c)
    )
    dv[1:-1] = d2 * (v[2:] - 2.0 * v[1:-1] + v[:-2]) * inv2 + alpha * u[1:-1] - beta * v[1:-1]
    du[0] = d1 * 2.0 * (u[1] - u[0]) * inv2 - 2.0 * flux[0] * inv + mu * u[0] * (1.0 - u[0] / u_c)
    dv[0] = d2 * 2.0 * (v[1] - v[0]) * inv2 + alpha * u[0] - beta * v[0]
    du[-1] = (d1 * 2.0 * (u[-2] - u[-1]) * inv2 + 2.0 * flux[-1] * inv
              + mu * u[-1] * (1.0 - u[-1] / u_c))
    dv[-1] = d2 * 2.0 * (v[-2] - v[-1]) * inv2 + alpha * u[-1] - beta * v[-1]


def _rk4_chunk_py(u, v, dt, nsteps, d1, d2, chi, mu, u_c, alpha, beta, dx):
    n = u.shape[0]
    k = [np.empty(n) for _ in range(8)]
    tu = np.empty(n)
    tv = np.empty(n)
    k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v = k
    for s in range(nsteps):
        _rhs_py(u, v, k1u, k1v, d1, d2, chi, mu, u_c, alpha, beta, dx)
        np.multiply(k1u, 0.5 * dt, out=tu); tu += u
        np.multiply(k1v, 0.5 * dt, out=tv); tv += v
        _rhs_py(tu, tv, k2u, k2v, d1, d2, chi, mu, u_c, alpha, beta, dx)
        np.multiply(k2u, 0.5 * dt, out=tu); tu += u
        np.multiply(k2v, 0.5 * dt, out=tv); tv += v
        _rhs_py(tu, tv, k3u, k3v, d1, d2, chi, mu, u_c, alpha, beta, dx)
        np.multiply(k3u, dt, out=tu); tu += u
        np.multiply(k3v, dt, out=tv); tv += v
        _rhs_py(tu, tv, k4u, k4v, d1, d2, chi, mu, u_c, alpha, beta, dx)
        u += dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if not np.isfinite(u[0]):
            return s
    return nsteps


HAVE_NUMBA = False
rhs_kernel = _rhs_py
rk4_chunk = _rk4_chunk_py

if not os.environ.get("CHEMOPATTERN_DISABLE_NUMBA"):
    try:
        from numba import njit

        @njit(cache=True, nogil=True)
        def _rhs_nb(u, v, du, dv, d1, d2, chi, mu, u_c, alpha, beta, dx):  # pragma: no cover
            n = u.shape[0]
            inv = 1.0 / dx
            inv2 = inv * inv
            for j in range(1, n - 1):
                ubr = 0.5 * (u[j] + u[j + 1])
                ubl = 0.5 * (u[j - 1] + u[j])
                fr = chi * ubr * (1.0 - ubr) * (v[j + 1] - v[j]) * inv
                fl = chi * ubl * (1.0 - ubl) * (v[j] - v[j - 1]) * inv
                du[j] = (d1 * (u[j + 1] - 2.0 * u[j] + u[j - 1]) * inv2
                         - (fr - fl) * inv + mu * u[j] * (1.0 - u[j] / u_c))
                dv[j] = (d2 * (v[j + 1] - 2.0 * v[j] + v[j - 1]) * inv2
                         + alpha * u[j] - beta * v[j])
            ub0 = 0.5 * (u[0] + u[1])
            f0 = chi * ub0 * (1.0 - ub0) * (v[1] - v[0]) * inv
            du[0] = (d1 * 2.0 * (u[1] - u[0]) * inv2 - 2.0 * f0 * inv
                     + mu * u[0] * (1.0 - u[0] / u_c))
            dv[0] = d2 * 2.0 * (v[1] - v[0]) * inv2 + alpha * u[0] - beta * v[0]
            ubn = 0.5 * (u[n - 2] + u[n - 1])
            fn = chi * ubn * (1.0 - ubn) * (v[n - 1] - v[n - 2]) * inv
            du[n - 1] = (d1 * 2.0 * (u[n - 2] - u[n - 1]) * inv2 + 2.0 * fn * inv
                         + mu * u[n - 1] * (1.0 - u[n - 1] / u_c))
            dv[n - 1] = (d2 * 2.0 * (v[n - 2] - v[n - 1]) * inv2
                         + alpha * u[n - 1] - beta * v[n - 1])

        @njit(cache=True, nogil=True)
        def _rk4_chunk_nb(u, v, dt, nsteps, d1, d2, chi, mu, u_c, alpha, beta, dx):  # pragma: no cover
            n = u.shape[0]
            k1u = np.empty(n); k1v = np.empty(n)
            k2u = np.empty(n); k2v = np.empty(n)
            k3u = np.empty(n); k3v = np.empty(n)
            k4u = np.empty(n); k4v = np.empty(n)
            tu = np.empty(n); tv = np.empty(n)
            for s in range(nsteps):
                _rhs_nb(u, v, k1u, k1v, d1, d2, chi, mu, u_c, alpha, beta, dx)
                for j in range(n):
                    tu[j] = u[j] + 0.5 * dt * k1u[j]
                    tv[j] = v[j] + 0.5 * dt * k1v[j]
                _rhs_nb(tu, tv, k2u, k2v, d1, d2, chi, mu, u_c, alpha, beta, dx)
                for j in range(n):
                    tu[j] = u[j] + 0.5 * dt * k2u[j]
                    tv[j] = v[j] + 0.5 * dt * k2v[j]
                _rhs_nb(tu, tv, k3u, k3v, d1, d2, chi, mu, u_c, alpha, beta, dx)
                for j in range(n):
                    tu[j] = u[j] + dt * k3u[j]
                    tv[j] = v[j] + dt * k3v[j]
                _rhs_nb(tu, tv, k4u, k4v, d1, d2, chi, mu, u_c, alpha, beta, dx)
                for j in range(n):
                    u[j] = u[j] + dt / 6.0 * (k1u[j] + 2.0 * k2u[j] + 2.0 * k3u[j] + k4u[j])
                    v[j] = v[j] + dt / 6.0 * (k1v[j] + 2.0 * k2v[j] + 2.0 * k3v[j] + k4v[j])
                if not np.isfinite(u[0]):
                    return s
            return nsteps

        rhs_kernel = _rhs_nb
        rk4_chunk = _rk4_chunk_nb
        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover
        pass
