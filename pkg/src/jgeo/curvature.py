"""Levi-Civita connections and curvature on orbits of functionals and states.

Everything is expressed through gradient fields ``Y_a`` (resp. ``YY_a`` on
states) generated by self-adjoint elements.  The connection on positive
functionals is

    nabla_{Y_a} Y_b = 1/2 (Y_{a,b} - X_{[[a,b]]}),

and the Riemann tensor only involves metric values of gradient and
Hamiltonian fields of Lie products.  On states the Gauss equation adds the
term coming from the second fundamental form of the state orbit inside the
orbit of positive functionals.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Element, jordan, lie, require_self_adjoint
from .errors import DegeneratePlaneError
from .metric import metric_G1_fields, metric_G_fields, metric_G_hamiltonian
from .orbits import (
    PositiveFunctional,
    StateFunctional,
    TangentVector,
    expectation,
    gradient_vec,
    hamiltonian_vec,
    tangent_from_pair,
)

PLANE_RTOL = 1e-12


@dataclass(frozen=True)
class CurvaturePlane:
    """Tangent 2-plane spanned by the gradient fields of ``a`` and ``b``."""

    a: Element
    b: Element

    def __post_init__(self):
        require_self_adjoint(self.a, "a")
        require_self_adjoint(self.b, "b")


def _as_positive(x: PositiveFunctional) -> PositiveFunctional:
    return PositiveFunctional(x.density, check=False)


def covariant_derivative_O(omega: PositiveFunctional, a: Element, b: Element) -> TangentVector:
    """``nabla_{Y_a} Y_b`` at ``omega``."""
    omega = _as_positive(omega)
    y = tangent_from_pair(omega, jordan(a, b), Element.zeros(omega.shape))
    x = hamiltonian_vec(omega, lie(a, b))
    return 0.5 * (y - x)


def covariant_derivative_O1(rho: StateFunctional, a: Element, b: Element) -> TangentVector:
    """``nabla1_{YY_a} YY_b`` at the state ``rho``."""
    ea, eb = expectation(rho, a), expectation(rho, b)
    val = (
        gradient_vec(rho, jordan(a, b)).value
        - ea * gradient_vec(rho, b).value
        - eb * gradient_vec(rho, a).value
        - hamiltonian_vec(rho, lie(a, b)).value
    )
    return TangentVector(rho, 0.5 * val)


def riemann_O(omega: PositiveFunctional, a: Element, b: Element, c: Element, d: Element) -> float:
    """``G(R(Y_a, Y_b) Y_c, Y_d)`` at ``omega``."""
    omega = _as_positive(omega)
    L = lie
    gy = lambda x, y: metric_G_fields(omega, x, y)
    gx = lambda x, y: metric_G_hamiltonian(omega, x, y)
    ab, ac, ad, bc, bd, cd = L(a, b), L(a, c), L(a, d), L(b, c), L(b, d), L(c, d)
    return (
        0.25 * gy(ad, bc)
        - 0.25 * gy(ac, bd)
        - 0.5 * gy(ab, cd)
        + 0.5 * gx(ab, cd)
        + 0.25 * gx(ac, bd)
        - 0.25 * gx(bc, ad)
    )


def plane_normalization_O(omega: PositiveFunctional, a: Element, b: Element) -> float:
    g = lambda x, y: metric_G_fields(omega, x, y)
    return g(a, a) * g(b, b) - g(a, b) ** 2


def plane_normalization_O1(rho: StateFunctional, a: Element, b: Element) -> float:
    g = lambda x, y: metric_G1_fields(rho, x, y)
    return g(a, a) * g(b, b) - g(a, b) ** 2


def _check_plane(n: float, scale: float):
    if n <= PLANE_RTOL * max(scale, 1e-300):
        raise DegeneratePlaneError(f"the two directions span a degenerate plane (normalization {n:.3e})")


def sectional_O(omega: PositiveFunctional, plane: CurvaturePlane) -> float:
    """Sectional curvature of the orbit of positive functionals."""
    omega = _as_positive(omega)
    a, b = plane.a, plane.b
    n = plane_normalization_O(omega, a, b)
    _check_plane(n, metric_G_fields(omega, a, a) * metric_G_fields(omega, b, b))
    c = lie(a, b)
    return 0.75 / n * (metric_G_fields(omega, c, c) - metric_G_hamiltonian(omega, c, c))


def second_fundamental_form(rho: PositiveFunctional, a: Element, b: Element) -> TangentVector:
    """Normal component of ``nabla_{Y_a} Y_b`` along the Euler direction ``Y_I = rho``."""
    rho = _as_positive(rho)
    coeff = 0.5 * (rho(jordan(a, b)) - rho(a) * rho(b))
    return TangentVector(rho, coeff * rho.density)


def gauss_term(rho: StateFunctional, a: Element, b: Element, c: Element, d: Element) -> float:
    g = lambda x, y: metric_G1_fields(rho, x, y)
    return (g(a, d) * g(b, c) - g(a, c) * g(b, d)) / 4


def riemann_O1(rho: StateFunctional, a: Element, b: Element, c: Element, d: Element) -> float:
    """``G1(R1(YY_a, YY_b) YY_c, YY_d)`` at the state ``rho``."""
    return riemann_O(rho, a, b, c, d) + gauss_term(rho, a, b, c, d)


def sectional_O1(rho: StateFunctional, plane: CurvaturePlane) -> float:
    """Sectional curvature of the orbit of states; identically 1/4 in the Abelian case."""
    a, b = plane.a, plane.b
    n = plane_normalization_O1(rho, a, b)
    _check_plane(n, metric_G1_fields(rho, a, a) * metric_G1_fields(rho, b, b) + PLANE_RTOL)
    c = lie(a, b)
    ec = expectation(rho, c)
    pos = _as_positive(rho)
    return 0.25 + 0.75 / n * (metric_G1_fields(rho, c, c) + ec * ec - metric_G_hamiltonian(pos, c, c))
