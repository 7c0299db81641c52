"""Riemannian metrics induced by the Jordan product.

On an orbit of positive functionals the metric is the inverse of the
symmetric tensor ``R(a, b) = xi({a, b})``.  Concretely, tangent vectors are
self-adjoint elements ``v`` and

    G(v, w) = Tr(v A^+(w)),    A(x) = {xi, x},

where ``A^+`` inverts the anticommutator on the orbit tangent space.  On
states the same recipe gives ``G1``, which is the Bures-Helstrom metric at
faithful states and the Fisher-Rao metric in the Abelian case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Element, jordan, lie, require_self_adjoint, trace_pair
from .errors import IncompatibleTangentError, InputError, NotFaithfulError, SupportMismatchError
from .orbits import (
    KERNEL_RTOL,
    PositiveFunctional,
    StateFunctional,
    TangentVector,
    expectation,
    hamiltonian_vec,
)

MASS_RTOL = 1e-9


@dataclass(frozen=True)
class LyapunovSolution:
    """Solution ``x`` of ``{base, x} = rhs`` with zero kernel x kernel block."""

    base: PositiveFunctional
    rhs: TangentVector
    solution: Element
    residual: float


def _functional(xi) -> PositiveFunctional:
    if isinstance(xi, PositiveFunctional):
        return xi
    if isinstance(xi, Element):
        return PositiveFunctional(xi)
    raise InputError(f"expected a functional, got {type(xi).__name__}")


def _tangent(xi: PositiveFunctional, v) -> TangentVector:
    if isinstance(v, TangentVector):
        return v
    return TangentVector(PositiveFunctional(xi.density, check=False), v)


def lyapunov_solve(xi, v, tol: float = KERNEL_RTOL, mass_tol: float | None = None) -> LyapunovSolution:
    """Invert ``x -> {xi, x}`` on the tangent space of the orbit through ``xi``.

    Works blockwise in the eigenbasis of ``xi``: entry ``(i, j)`` of the
    solution is ``2 v_ij / (l_i + l_j)``.  Eigenvalues below
    ``tol * lambda_max`` count as kernel; the kernel x kernel block of the
    solution is set to zero, and ``v`` must have no mass there.
    """
    xi = _functional(xi)
    v = _tangent(xi, v)
    if v.value.shape != xi.shape:
        raise InputError("tangent vector and functional live in different algebras")
    if mass_tol is None:
        mass_tol = MASS_RTOL * (1.0 + v.value.max_abs())
    thr = tol * xi.lambda_max
    out = []
    for lam, u, vb in zip(xi.eigenvalues, xi.eigenvectors, v.value.blocks):
        vv = u.conj().T @ vb @ u
        ker = lam <= thr
        both = np.logical_and.outer(ker, ker)
        if both.any():
            mass = float(np.max(np.abs(vv[both])))
            if mass > mass_tol:
                raise IncompatibleTangentError(
                    f"tangent has mass {mass:.3e} on the kernel of the base point; it is not tangent to the orbit"
                )
        denom = lam[:, None] + lam[None, :]
        s = np.zeros_like(vv)
        s[~both] = 2 * vv[~both] / denom[~both]
        x = u @ s @ u.conj().T
        out.append((x + x.conj().T) / 2)
    sol = Element(xi.shape, out)
    residual = (jordan(xi.density, sol) - v.value).max_abs()
    return LyapunovSolution(xi, v, sol, residual)


def r_tensor(xi, a: Element, b: Element) -> float:
    """Symmetric tensor ``xi({a, b})``."""
    return trace_pair(_functional(xi).density, jordan(a, b))


def lambda_tensor(xi, a: Element, b: Element) -> float:
    """Poisson tensor ``xi([[a, b]])``."""
    return trace_pair(_functional(xi).density, lie(a, b))


def metric_G(omega, v, w) -> float:
    omega = _functional(omega)
    v, w = _tangent(omega, v), _tangent(omega, w)
    sol = lyapunov_solve(omega, w).solution
    # also validates v against the orbit
    lyapunov_solve(omega, v)
    return trace_pair(v.value, sol)


def metric_G_fields(omega, a: Element, b: Element) -> float:
    """Metric between the gradient fields of ``a`` and ``b``."""
    return r_tensor(omega, a, b)


def metric_G_mixed(omega, a: Element, b: Element) -> float:
    """Metric between the gradient field of ``a`` and the Hamiltonian field of ``b``."""
    return lambda_tensor(omega, b, a)


def hamiltonian_to_gradient(omega, b: Element, tol: float = KERNEL_RTOL) -> Element:
    """An element ``B`` whose gradient field at ``omega`` equals the Hamiltonian field of ``b``.

    Not unique in general; this is the representative with no kernel x kernel part.
    """
    omega = _functional(omega)
    x = hamiltonian_vec(omega, b)
    return lyapunov_solve(omega, x, tol).solution


def metric_G_hamiltonian(omega, a: Element, b: Element) -> float:
    """Metric between the Hamiltonian fields of ``a`` and ``b``."""
    require_self_adjoint(a, "a")
    return trace_pair(_functional(omega).density, lie(a, hamiltonian_to_gradient(omega, b)))


def _state_tangent(rho: StateFunctional, v) -> TangentVector:
    if isinstance(v, TangentVector):
        return v
    return TangentVector(rho, v)


def metric_G1(rho: StateFunctional, v, w) -> float:
    """Metric on the orbit of states; ``v`` and ``w`` are traceless."""
    if not isinstance(rho, StateFunctional):
        raise InputError("metric_G1 needs a state")
    v, w = _state_tangent(rho, v), _state_tangent(rho, w)
    return metric_G(rho, v, w)


def metric_G1_fields(rho: StateFunctional, a: Element, b: Element) -> float:
    """Covariance form ``e_{a,b} - e_a e_b`` of the state metric on gradient fields."""
    return expectation(rho, jordan(a, b)) - expectation(rho, a) * expectation(rho, b)


def fisher_rao(p: StateFunctional, v, w, tol: float = KERNEL_RTOL) -> float:
    """``sum_j v_j w_j / p_j`` over the support of an Abelian state."""
    if not p.shape.is_abelian:
        raise InputError("fisher_rao needs an Abelian algebra")
    pv = np.array([b[0, 0].real for b in p.density.blocks])
    vals = []
    for x in (v, w):
        x = x.value if isinstance(x, TangentVector) else x
        vals.append(np.array([b[0, 0].real for b in x.blocks]))
    vv, ww = vals
    supp = pv > tol * pv.max()
    off = np.concatenate([vv[~supp], ww[~supp]])
    if off.size and np.max(np.abs(off)) > MASS_RTOL * (1.0 + np.max(np.abs(np.concatenate([vv, ww])))):
        raise SupportMismatchError("tangent vector has mass outside the support of the distribution")
    return float(np.sum(vv[supp] * ww[supp] / pv[supp]))


def bures_helstrom(rho: StateFunctional, a, b, tol: float = KERNEL_RTOL) -> float:
    """``Tr(a A^{-1}(b))`` at a faithful state (no factor 1/2)."""
    if not rho.is_faithful(tol):
        raise NotFaithfulError("the Bures-Helstrom form is defined here only at faithful states")
    return metric_G1(rho, a, b)
