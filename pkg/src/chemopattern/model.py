"""Model parameters and uniform steady states.

The system under study is the 1-D volume-filling chemotaxis model with
logistic cell growth on the interval [0, l] with zero-flux boundaries:

    u_t = (d1 u_x - chi u(1-u) v_x)_x + mu u(1 - u/u_c)
    v_t = d2 v_xx + alpha u - beta v

where u is the cell density (crowding capacity 1), v the chemical
concentration, and all quantities are nondimensional. ``ModelParams``
holds the seven physical constants plus the domain length; every other
module reads from it.
"""
from __future__ import annotations

from dataclasses import dataclass, replace


class ParameterError(ValueError):
    """Raised when model parameters violate their bounds."""


@dataclass(frozen=True)
class ModelParams:
    """Immutable parameter set for the chemotaxis model.

    Attributes
    ----------
    d1 : float
        Cell diffusivity (> 0).
    d2 : float
        Chemical diffusivity (> 0).
    chi : float
        Chemotactic coefficient (>= 0); the bifurcation parameter.
    mu : float
        Logistic growth rate (>= 0). ``mu = 0`` is accepted but there is
        then no finite critical wavenumber; threshold analysis must use
        the first discrete bifurcation value instead.
    u_c : float
        Carrying capacity, a dimensionless density in (0, 1).
    alpha : float
        Chemical production rate (> 0).
    beta : float
        Chemical degradation rate (> 0).
    domain_length : float
        Interval length l (> 0).
    """

    d1: float
    d2: float
    chi: float
    mu: float
    u_c: float
    alpha: float
    beta: float
    domain_length: float

    def with_chi(self, chi: float) -> "ModelParams":
        """Copy of the parameters with the chemotaxis strength replaced."""
        return replace(self, chi=chi)

    @property
    def growth_free(self) -> bool:
        """True when mu = 0, i.e. no finite critical-wavenumber analysis applies."""
        return self.mu == 0.0


def validate(p: ModelParams) -> list[str]:
    """Check every parameter bound; return one message per violation.

    An empty list means the parameters are valid. Nothing is clamped or
    repaired. ``mu = 0`` is legal and therefore not reported here.
    """
    errors = []
    for name in ("d1", "d2", "alpha", "beta"):
        if not getattr(p, name) > 0:
            errors.append(f"{name} must be positive")
    if not p.chi >= 0:
        errors.append("chi must be nonnegative")
    if not p.mu >= 0:
        errors.append("mu must be nonnegative")
    if not 0 < p.u_c < 1:
        errors.append("u_c must lie in (0,1)")
    if not p.domain_length > 0:
        errors.append("domain_length must be positive")
    return errors


def require_valid(p: ModelParams) -> ModelParams:
    """Return ``p`` unchanged, raising ``ParameterError`` listing all violations."""
    errors = validate(p)
    if errors:
        raise ParameterError("; ".join(errors))
    return p


@dataclass(frozen=True)
class UniformSteadyState:
    """The nontrivial spatially uniform equilibrium (u_c, alpha*u_c/beta)."""

    u_bar: float
    v_bar: float


#: The trivial extinction state; exposed as a constant, never computed.
TRIVIAL_STEADY_STATE = UniformSteadyState(0.0, 0.0)


def uniform_steady_state(p: ModelParams) -> UniformSteadyState:
    """Nontrivial uniform steady state: u = u_c, v = alpha*u_c/beta.

    Both reaction terms vanish there: mu*u(1-u/u_c) = 0 and
    alpha*u - beta*v = 0.
    """
    require_valid(p)
    return UniformSteadyState(p.u_c, p.alpha * p.u_c / p.beta)
