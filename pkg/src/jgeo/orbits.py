"""Positive functionals, states, and the group actions on them.

A functional ``xi`` on the algebra is stored through its trace dual, the
self-adjoint element ``density`` with ``xi(a) = Tr(density a)``.  Tangent
vectors at ``xi`` are self-adjoint elements as well (traceless at states).

The invertible group acts on positive functionals by ``xi -> g xi g^dagger``
and on states by the same map followed by renormalization.  The fundamental
vector fields of these actions are built from a gradient part
``{xi, a}`` and a Hamiltonian part ``(xi b - b xi)/2i``.
"""

from __future__ import annotations

import functools
from dataclasses import InitVar, dataclass

import numpy as np

from .algebra import (
    AlgebraShape,
    Element,
    group_exp,
    jordan,
    lie,
    mul,
    require_self_adjoint,
    trace_pair,
)
from .errors import InputError, ShapeMismatchError

KERNEL_RTOL = 1e-12
PSD_ATOL = 1e-12
TRACE_ATOL = 1e-12


@dataclass(frozen=True)
class RankSignature:
    """Per-block ranks; labels the orbit a functional belongs to."""

    ranks: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.ranks)

    def __str__(self):
        return "(" + ",".join(map(str, self.ranks)) + ")"


@dataclass(frozen=True)
class PositiveFunctional:
    """Nonzero positive linear functional, stored as its density element."""

    density: Element
    check: InitVar[bool] = True

    def __post_init__(self, check):
        if not isinstance(self.density, Element):
            raise InputError("density must be an Element")
        if check:
            self._validate()

    def _validate(self):
        if not self.density.is_self_adjoint():
            raise InputError("density is not self-adjoint")
        lam = self.eigenvalues
        top = max(float(np.max(np.abs(l))) for l in lam)
        if top == 0.0:
            raise InputError("the null functional is not a positive functional")
        low = min(float(np.min(l)) for l in lam)
        if low < -PSD_ATOL * max(1.0, top):
            raise InputError(f"density is not positive semi-definite (min eigenvalue {low:.3e})")

    @property
    def shape(self) -> AlgebraShape:
        return self.density.shape

    def __call__(self, a: Element):
        return trace_pair(self.density, a)

    @functools.cached_property
    def _eigh(self):
        return [np.linalg.eigh((b + b.conj().T) / 2) for b in self.density.blocks]

    @property
    def eigenvalues(self) -> list[np.ndarray]:
        return [e[0] for e in self._eigh]

    @property
    def eigenvectors(self) -> list[np.ndarray]:
        return [e[1] for e in self._eigh]

    @property
    def lambda_max(self) -> float:
        return max(float(np.max(l)) for l in self.eigenvalues)

    def kernel_masks(self, tol: float = KERNEL_RTOL) -> list[np.ndarray]:
        """Per block, which eigenvalues count as zero (relative to ``lambda_max``)."""
        thr = tol * self.lambda_max
        return [l <= thr for l in self.eigenvalues]

    def is_faithful(self, tol: float = KERNEL_RTOL) -> bool:
        return not any(m.any() for m in self.kernel_masks(tol))

    def total(self) -> float:
        return self.density.trace().real


@dataclass(frozen=True)
class StateFunctional(PositiveFunctional):
    """Positive functional with unit value on the identity."""

    def _validate(self):
        super()._validate()
        tr = self.density.trace()
        if abs(tr - 1.0) > TRACE_ATOL:
            raise InputError(f"state density must have unit trace, got {tr.real:.17g}")


@dataclass(frozen=True)
class TangentVector:
    """Tangent vector ``value`` attached at ``base``.

    At a state the value is traceless; at a positive functional it is any
    self-adjoint element.  Membership in the orbit tangent space (no mass on
    the kernel x kernel sub-block) is checked by :meth:`is_orbit_tangent`,
    not at construction time.
    """

    base: PositiveFunctional
    value: Element

    def __post_init__(self):
        if self.value.shape != self.base.shape:
            raise ShapeMismatchError("tangent value and base point live in different algebras")
        if not self.value.is_self_adjoint():
            raise InputError("tangent value is not self-adjoint")
        if isinstance(self.base, StateFunctional):
            tr = self.value.trace()
            if abs(tr) > TRACE_ATOL * max(1.0, self.value.max_abs()):
                raise InputError(f"tangent vector at a state must be traceless, got trace {tr.real:.3e}")

    def kernel_mass(self, tol: float = KERNEL_RTOL) -> float:
        """Largest entry of the value on the kernel x kernel block of the base."""
        mass = 0.0
        for u, m, v in zip(self.base.eigenvectors, self.base.kernel_masks(tol), self.value.blocks):
            if m.any():
                vv = u.conj().T @ v @ u
                mass = max(mass, float(np.max(np.abs(vv[np.ix_(m, m)]))))
        return mass

    def is_orbit_tangent(self, tol: float = 1e-10) -> bool:
        return self.kernel_mass() <= tol * (1.0 + self.value.max_abs())

    def __add__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector(self.base, self.value + other.value)

    def __sub__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector(self.base, self.value - other.value)

    def __mul__(self, scalar: float) -> "TangentVector":
        return TangentVector(self.base, float(scalar) * self.value)

    __rmul__ = __mul__


def as_state(density: Element, check: bool = True) -> StateFunctional:
    return StateFunctional(density, check)


def as_positive(density: Element, check: bool = True) -> PositiveFunctional:
    return PositiveFunctional(density, check)


def rank_signature(x: PositiveFunctional, tol: float = KERNEL_RTOL) -> RankSignature:
    """Count eigenvalues above ``tol * lambda_max`` in each block."""
    return RankSignature(tuple(int((~m).sum()) for m in x.kernel_masks(tol)))


def _conjugate(g: Element, density: Element) -> Element:
    out = mul(mul(g, density), g.adjoint())
    return out.hermitian_part()


def act_positive(g_a: Element, g_b: Element, xi: PositiveFunctional) -> PositiveFunctional:
    """``xi -> g xi g^dagger`` with ``g = exp((g_a + i g_b)/2)``."""
    g = group_exp(g_a, g_b)
    return PositiveFunctional(_conjugate(g, xi.density), check=False)


def act_state(g_a: Element, g_b: Element, rho: StateFunctional) -> StateFunctional:
    """Same conjugation as :func:`act_positive`, renormalized to unit trace."""
    g = group_exp(g_a, g_b)
    d = _conjugate(g, rho.density)
    return StateFunctional(d / d.trace().real, check=False)


def expectation(rho: PositiveFunctional, a: Element) -> float:
    require_self_adjoint(a, "observable")
    return trace_pair(rho.density, a)


def gradient_vec(rho: StateFunctional, a: Element) -> TangentVector:
    """Gradient direction on states: ``{rho, a} - rho(a) rho``."""
    value = jordan(rho.density, a) - expectation(rho, a) * rho.density
    return TangentVector(rho, value)


def hamiltonian_vec(rho: PositiveFunctional, b: Element) -> TangentVector:
    """Hamiltonian direction ``(rho b - b rho)/2i``.

    This is the unique self-adjoint ``v`` with ``Tr(v c) = rho([[b, c]])``
    for every self-adjoint ``c``.
    """
    require_self_adjoint(b, "b")
    v = Element(rho.shape, [(r @ x - x @ r) / 2j for r, x in zip(rho.density.blocks, b.blocks)])
    return TangentVector(rho, v.hermitian_part())


def tangent_from_pair(xi: PositiveFunctional, a: Element, b: Element) -> TangentVector:
    """Fundamental field of the action at ``xi``: gradient along ``a`` plus Hamiltonian along ``b``."""
    value = jordan(xi.density, a) + hamiltonian_vec(xi, b).value
    if isinstance(xi, StateFunctional):
        # gradient part alone is not tangent to the states; read it as a vector on P
        xi = PositiveFunctional(xi.density, check=False)
    return TangentVector(xi, value)


def fundamental_operator(a: Element, b: Element):
    """The linear map ``xi -> V_ab(xi)`` on densities (used for bracket checks)."""

    def apply(x: Element) -> Element:
        sx = x.hermitian_part()
        grad = jordan(sx, a)
        ham = Element(x.shape, [(r @ y - y @ r) / 2j for r, y in zip(sx.blocks, b.blocks)])
        return grad + ham.hermitian_part()

    return apply


def lie_bracket_parameters(a: Element, b: Element, c: Element, d: Element):
    """Parameters of ``[V_ab, V_cd]`` as a fundamental field ``V_xy``."""
    return lie(a, d) + lie(b, c), lie(c, a) + lie(b, d)
