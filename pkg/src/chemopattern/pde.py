"""Method-of-lines finite-difference solver for the full chemotaxis system.

This is the ground truth the asymptotic predictions are tested against:
the model is discretized on a node-centered grid over [0, l] with
zero-flux boundaries (conservative flux form for the taxis term,
ghost-node reflection equivalent for diffusion) and advanced with
explicit fourth-order Runge-Kutta under a diffusive step-size cap.
``run_to_steady`` iterates until the density residual drops below
tolerance; ``measure_pattern`` projects the final state onto the cosine
modes of the interval so predicted and simulated patterns can be
compared mode by mode.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .model import ModelParams, require_valid, uniform_steady_state
from ._kernels import rhs_kernel, rk4_chunk


class SimulationBlowup(RuntimeError):
    """The explicit stepper produced a non-finite value."""

    def __init__(self, message: str, last_good=None):
        super().__init__(message)
        self.last_good = last_good


@dataclass(frozen=True)
class Grid1D:
    """Uniform node-centered grid: x_j = j*dx, j = 0..n_cells-1, dx = l/(n_cells-1)."""

    n_cells: int
    l: float

    def __post_init__(self):
        if self.n_cells < 16:
            raise ValueError("n_cells must be at least 16")
        if not self.l > 0:
            raise ValueError("domain length must be positive")

    @property
    def dx(self) -> float:
        return self.l / (self.n_cells - 1)

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.n_cells) * self.dx

    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.n_cells, self.dx)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w


@dataclass(frozen=True, eq=False)
class FieldState:
    """Discrete (u, v) fields at time t with stepping diagnostics."""

    grid: Grid1D
    u: np.ndarray
    v: np.ndarray
    t: float = 0.0
    residual: Optional[float] = None  # last ||du/dt||_inf
    steps: int = 0

    def copy(self) -> "FieldState":
        return replace(self, u=self.u.copy(), v=self.v.copy())


def uniform_state(p: ModelParams, grid: Grid1D) -> FieldState:
    ss = uniform_steady_state(p)
    return FieldState(grid, np.full(grid.n_cells, ss.u_bar), np.full(grid.n_cells, ss.v_bar))


def random_perturbation_state(p: ModelParams, grid: Grid1D, seed: int,
                              rel_amplitude: float = 0.01) -> FieldState:
    """Multiplicative uniform noise around the steady state:
    u = u_bar (1 + a xi), v = v_bar (1 + a xi'), xi uniform in [-1, 1]."""
    ss = uniform_steady_state(p)
    rng = np.random.default_rng(seed)
    u = ss.u_bar * (1.0 + rel_amplitude * rng.uniform(-1.0, 1.0, grid.n_cells))
    v = ss.v_bar * (1.0 + rel_amplitude * rng.uniform(-1.0, 1.0, grid.n_cells))
    return FieldState(grid, u, v)


def cosine_state(p: ModelParams, grid: Grid1D, k: float, amp_u: float,
                 amp_v: float = 0.0) -> FieldState:
    """u = u_bar + amp_u cos(kx), v = v_bar + amp_v cos(kx)."""
    ss = uniform_steady_state(p)
    c = np.cos(k * grid.x)
    return FieldState(grid, ss.u_bar + amp_u * c, ss.v_bar + amp_v * c)


def mode_superposition_state(p: ModelParams, grid: Grid1D, modes, eps: float) -> FieldState:
    """Leading-order two-field perturbation eps * sum_l A_l rho_l cos(k_l x),
    with rho_l = ((beta + k_l^2 d2)/alpha, 1); ``modes`` is [(k, A), ...].

    For large eps*A the superposition can undershoot zero near the
    troughs; the fields are clipped at 0 so the state remains admissible
    initial data.
    """
    ss = uniform_steady_state(p)
    u = np.full(grid.n_cells, ss.u_bar)
    v = np.full(grid.n_cells, ss.v_bar)
    for k, amp in modes:
        M = (p.beta + k * k * p.d2) / p.alpha
        c = np.cos(k * grid.x)
        u += eps * amp * M * c
        v += eps * amp * c
    return FieldState(grid, np.maximum(u, 0.0), np.maximum(v, 0.0))


def rhs(state: FieldState, p: ModelParams):
    """Semi-discrete time derivatives (du/dt, dv/dt) of the current state."""
    n = state.grid.n_cells
    du = np.empty(n)
    dv = np.empty(n)
    rhs_kernel(state.u, state.v, du, dv, p.d1, p.d2, p.chi, p.mu, p.u_c,
               p.alpha, p.beta, state.grid.dx)
    return du, dv


def stable_dt(p: ModelParams, grid: Grid1D, safety: float = 0.2) -> float:
    """Diffusive step cap dt = safety * dx^2 / D_eff with
    D_eff = max(d1, d2, chi/4); chi/4 bounds the taxis coupling since the
    volume-filling factor u(1-u) never exceeds 1/4.

    An implicit-explicit stepper could lift this cap; at desk scale the
    compiled explicit kernel is fast enough that none is provided.
    """
    d_eff = max(p.d1, p.d2, 0.25 * p.chi)
    return safety * grid.dx * grid.dx / d_eff


def step(state: FieldState, p: ModelParams, dt: Optional[float] = None) -> FieldState:
    """One explicit RK4 step (dt capped by ``stable_dt`` when not given)."""
    if dt is None:
        dt = stable_dt(p, state.grid)
    elif dt <= 0:
        raise ValueError("dt must be positive")
    new = state.copy()
    done = rk4_chunk(new.u, new.v, dt, 1, p.d1, p.d2, p.chi, p.mu, p.u_c,
                     p.alpha, p.beta, state.grid.dx)
    if done < 1:
        raise SimulationBlowup("non-finite value during step", last_good=state)
    du, _ = rhs(new, p)
    return replace(new, t=state.t + dt, residual=float(np.abs(du).max()),
                   steps=state.steps + 1)


@dataclass(frozen=True, eq=False)
class SteadyResult:
    state: FieldState
    converged: bool
    blew_up: bool
    residual_history: list  # [(t, residual), ...]


def run_to_steady(initial: FieldState, p: ModelParams, residual_tol: float = 1e-8,
                  t_max: float = 4000.0, dt: Optional[float] = None,
                  check_interval: float = 1.0,
                  stop_when: Optional[Callable[[FieldState], bool]] = None) -> SteadyResult:
    """Advance until ||du/dt||_inf < residual_tol or the horizon t_max.

    The residual is checked every ``check_interval`` time units. An
    optional ``stop_when`` predicate ends the run early (used e.g. to stop
    once the state is within a target distance of the uniform state). On a
    non-finite value the last good state is returned with ``blew_up`` set.
    """
    require_valid(p)
    if np.any(initial.u < 0) or np.any(initial.v < 0):
        raise ValueError("initial data must be nonnegative")
    if dt is None:
        dt = stable_dt(p, initial.grid)
    chunk = max(1, int(math.ceil(check_interval / dt)))
    state = initial.copy()
    u, v = state.u, state.v
    t = state.t
    steps = state.steps
    history = []
    du = np.empty(initial.grid.n_cells)
    dv = np.empty(initial.grid.n_cells)
    dx = initial.grid.dx
    while True:
        u_save, v_save = u.copy(), v.copy()
        done = rk4_chunk(u, v, dt, chunk, p.d1, p.d2, p.chi, p.mu, p.u_c,
                         p.alpha, p.beta, dx)
        if done < chunk:
            last = FieldState(initial.grid, u_save, v_save, t, None, steps)
            return SteadyResult(last, False, True, history)
        t += chunk * dt
        steps += chunk
        rhs_kernel(u, v, du, dv, p.d1, p.d2, p.chi, p.mu, p.u_c, p.alpha, p.beta, dx)
        res = float(np.abs(du).max())
        history.append((t, res))
        state = FieldState(initial.grid, u, v, t, res, steps)
        if res < residual_tol:
            return SteadyResult(state, True, False, history)
        if stop_when is not None and stop_when(state):
            return SteadyResult(state, True, False, history)
        if t >= t_max:
            return SteadyResult(state, False, False, history)


@dataclass(frozen=True, eq=False)
class PatternMeasure:
    """Cosine-mode content of a (near-)steady state."""

    mode_amplitudes: np.ndarray  # a_n for n = 1..n_max (signed)
    mean_shift: float  # a_0 = mean of u - u_bar
    dominant_n: int
    dominant_k: float
    dominant_amplitude: float  # signed coefficient of the dominant mode
    peak_to_trough_u: float
    sup_distance_u: float  # ||u - u_bar||_inf
    sup_distance_v: float

    def to_dict(self) -> dict:
        return {
            "dominant_n": self.dominant_n,
            "dominant_k": self.dominant_k,
            "dominant_amplitude": self.dominant_amplitude,
            "mean_shift": self.mean_shift,
            "peak_to_trough_u": self.peak_to_trough_u,
            "sup_distance_u": self.sup_distance_u,
            "sup_distance_v": self.sup_distance_v,
            "mode_amplitudes": [float(a) for a in self.mode_amplitudes],
        }


def measure_pattern(state: FieldState, p: ModelParams, n_max: int = 64) -> PatternMeasure:
    """Trapezoid-rule cosine projections a_n = (2/l) integral (u-u_bar) cos(n pi x/l) dx.

    The dominant mode maximizes |a_n| over n >= 1.
    """
    grid = state.grid
    n_max = min(n_max, grid.n_cells // 4)
    ss = uniform_steady_state(p)
    w = grid.trapezoid_weights()
    du = state.u - ss.u_bar
    x = grid.x
    amps = np.array([
        2.0 / grid.l * float(np.sum(w * du * np.cos(n * math.pi * x / grid.l)))
        for n in range(1, n_max + 1)
    ])
    mean = float(np.sum(w * du)) / grid.l
    nd = int(np.argmax(np.abs(amps))) + 1
    return PatternMeasure(
        mode_amplitudes=amps,
        mean_shift=mean,
        dominant_n=nd,
        dominant_k=nd * math.pi / grid.l,
        dominant_amplitude=float(amps[nd - 1]),
        peak_to_trough_u=float(state.u.max() - state.u.min()),
        sup_distance_u=float(np.abs(du).max()),
        sup_distance_v=float(np.abs(state.v - ss.v_bar).max()),
    )


def convergence_study(p: ModelParams, ic: Callable[[Grid1D], FieldState], t_end: float,
                      n_list, dt: Optional[float] = None) -> dict:
    """Observed spatial order from runs on nested grids.

    ``n_list`` must contain at least three node counts, each refining the
    previous by n -> 2n-1 so coarse nodes are shared; the order between
    successive pairs is log2 of the sup-norm error ratio at the shared
    nodes. ``dt`` defaults to the finest grid's stable step so temporal
    error is common to all runs.
    """
    n_list = list(n_list)
    if len(n_list) < 3:
        raise ValueError("need at least three grids")
    if len(set(n_list)) != len(n_list):
        raise ValueError("grids must differ")
    for a, b in zip(n_list, n_list[1:]):
        if b != 2 * a - 1:
            raise ValueError("grids must nest: each n must be 2*previous - 1")
    if dt is None:
        dt = stable_dt(p, Grid1D(max(n_list), p.domain_length))
    sols = []
    for n in n_list:
        grid = Grid1D(n, p.domain_length)
        state = ic(grid)
        nsteps = int(round(t_end / dt))
        out = state.copy()
        done = rk4_chunk(out.u, out.v, dt, nsteps, p.d1, p.d2, p.chi, p.mu, p.u_c,
                         p.alpha, p.beta, grid.dx)
        if done < nsteps:
            raise SimulationBlowup("blow-up during convergence study")
        sols.append(out.u)
    errors = []
    for coarse, fine in zip(sols, sols[1:]):
        errors.append(float(np.abs(fine[::2] - coarse).max()))
    orders = [math.log2(e0 / e1) for e0, e1 in zip(errors, errors[1:])]
    return {"errors": errors, "orders": orders, "observed_order": orders[-1]}
