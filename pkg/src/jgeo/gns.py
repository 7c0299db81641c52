"""GNS construction and the sphere picture of the state orbit.

For a reference state ``rho`` the algebra carries the pre-inner product
``<x, y> = rho(x^dagger y)``.  In matrix-unit coordinates (row-major per
block) its Gram matrix is ``blockdiag(I (x) rho_k^T)``.  Dividing out the
kernel (the Gel'fand ideal) leaves a Hilbert space of dimension
``sum_k n_k * rank_k`` on which the algebra acts by left multiplication.

Hilbert-space coordinates are ``Q y`` for a matrix-unit coordinate vector
``y``, where ``Q = diag(sqrt(l)) W^dagger`` comes from the nonzero part of
the Gram eigendecomposition.  The state attached to a unit vector ``psi`` is
``c -> <psi, rep(c) psi>``; the sphere carries ``E = 4 Re<u, v>`` and
``Omega = 4 Im<u, v>``.  With these constants the projection is a
Riemannian submersion onto the state orbit with its metric ``G1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .algebra import (
    AlgebraShape,
    Element,
    complex_coords,
    from_complex_coords,
    group_exp,
    hermitian_basis,
    require_self_adjoint,
    trace_pair,
)
from .errors import InputError, ShapeMismatchError
from .metric import lyapunov_solve, metric_G1_fields
from .orbits import StateFunctional, TangentVector, rank_signature

GRAM_RTOL = 1e-12
COMMUTANT_RTOL = 1e-8
NORM_ATOL = 1e-12


def _left_mult(x: Element) -> np.ndarray:
    """Matrix of ``y -> x y`` in row-major matrix-unit coordinates."""
    mats = [np.kron(b, np.eye(b.shape[0])) for b in x.blocks]
    return scipy.linalg.block_diag(*mats)


def _commutator_gram(r: np.ndarray) -> np.ndarray:
    """``K^dagger K`` for ``K(M) = r M - M r`` in row-major vec coordinates."""
    n = r.shape[0]
    k = np.kron(r, np.eye(n)) - np.kron(np.eye(n), r.T)
    return k.conj().T @ k


def _generators(shape: AlgebraShape) -> list[Element]:
    """Small generating set: diagonal units and adjacent symmetric units in every block."""
    out = []
    for k, n in enumerate(shape.blocks):
        mats = []
        for i in range(n):
            m = np.zeros((n, n))
            m[i, i] = 1
            mats.append(m)
        for i in range(n - 1):
            m = np.zeros((n, n))
            m[i, i + 1] = m[i + 1, i] = 1
            mats.append(m)
        for m in mats:
            blocks = [np.zeros((p, p)) for p in shape.blocks]
            blocks[k] = m
            out.append(Element(shape, blocks))
    return out


@dataclass(frozen=True)
class GnsData:
    reference: StateFunctional
    gram: np.ndarray
    ideal_basis: tuple[Element, ...]
    hilbert_basis: np.ndarray  # columns: orthonormal basis of the quotient, in matrix-unit coords
    to_hilbert: np.ndarray  # Q
    from_hilbert: np.ndarray  # Q^+
    cyclic: np.ndarray
    commutant_basis: tuple[np.ndarray, ...]  # complex basis, trace-orthonormal
    commutant_skew_basis: tuple[np.ndarray, ...]  # real basis of skew-adjoint part

    @property
    def shape(self) -> AlgebraShape:
        return self.reference.shape

    @property
    def hilbert_dim(self) -> int:
        return self.to_hilbert.shape[0]

    @property
    def ideal_dim(self) -> int:
        return len(self.ideal_basis)

    @property
    def commutant_dim(self) -> int:
        return len(self.commutant_basis)

    def rep(self, x: Element) -> np.ndarray:
        if x.shape != self.shape:
            raise ShapeMismatchError("element and GNS data live in different algebras")
        return self.to_hilbert @ _left_mult(x) @ self.from_hilbert

    def vector_of(self, g: Element) -> np.ndarray:
        """Class of ``g`` in the quotient, as Hilbert coordinates."""
        return self.to_hilbert @ complex_coords(g)

    def element_of(self, psi: np.ndarray) -> Element:
        """Representative of a Hilbert vector with no component in the ideal."""
        return from_complex_coords(self.shape, self.from_hilbert @ psi)


def build_gns(rho: StateFunctional, tol: float = GRAM_RTOL) -> GnsData:
    shape = rho.shape
    gram = scipy.linalg.block_diag(*[np.kron(np.eye(b.shape[0]), b.T) for b in rho.density.blocks])
    gram = (gram + gram.conj().T) / 2
    lam, w = np.linalg.eigh(gram)
    keep = lam > tol * lam.max()
    wk, lk = w[:, keep], lam[keep]
    q = np.sqrt(lk)[:, None] * wk.conj().T
    q_pinv = wk / np.sqrt(lk)[None, :]
    ideal = tuple(from_complex_coords(shape, w[:, i]) for i in np.flatnonzero(~keep))
    cyclic = q @ complex_coords(Element.identity(shape))

    d = q.shape[0]
    h = np.zeros((d * d, d * d), complex)
    for e in _generators(shape):
        h += _commutator_gram(q @ _left_mult(e) @ q_pinv)
    h = (h + h.conj().T) / 2
    hl, hv = np.linalg.eigh(h)
    null = hl <= COMMUTANT_RTOL * max(hl.max(), 1.0)
    comm = [hv[:, i].reshape(d, d) for i in np.flatnonzero(null)]
    skew = _skew_basis(comm, d)
    return GnsData(rho, gram, ideal, wk, q, q_pinv, cyclic, tuple(comm), tuple(skew))


def _skew_basis(comm: list[np.ndarray], d: int) -> list[np.ndarray]:
    """Real basis of the skew-adjoint part of a *-closed complex span."""
    if not comm:
        return []
    herm = []
    for m in comm:
        herm.append((m + m.conj().T) / 2)
        herm.append((m - m.conj().T) / 2j)
    real = np.array([np.concatenate([x.real.ravel(), x.imag.ravel()]) for x in herm]).T
    u, s, _ = np.linalg.svd(real, full_matrices=False)
    r = int(np.sum(s > 1e-8 * s.max()))
    out = []
    for k in range(r):
        v = u[:, k]
        x = (v[: d * d] + 1j * v[d * d :]).reshape(d, d)
        x = (x + x.conj().T) / 2
        out.append(1j * x)
    return out


def is_star_homomorphism(gns: GnsData) -> float:
    """Largest residual of ``rep(xy) - rep(x)rep(y)`` and ``rep(x^dagger) - rep(x)^dagger`` over basis pairs."""
    basis = hermitian_basis(gns.shape)
    reps = [gns.rep(e) for e in basis]
    worst = 0.0
    for e, r in zip(basis, reps):
        worst = max(worst, float(np.max(np.abs(gns.rep(e.adjoint()) - r.conj().T))))
        for f, s in zip(basis, reps):
            worst = max(worst, float(np.max(np.abs(gns.rep(e @ f) - r @ s))))
    return worst


def ideal_orthogonality_check(gns: GnsData, a_in_ideal, b) -> float:
    """``max |rho(a^dagger b)|, |rho(b a)|`` over the supplied pairs."""
    if isinstance(a_in_ideal, Element):
        a_in_ideal = [a_in_ideal]
    if isinstance(b, Element):
        b = [b]
    rho = gns.reference.density
    worst = 0.0
    for a in a_in_ideal:
        for x in b:
            worst = max(worst, abs(trace_pair(rho, a.adjoint() @ x)), abs(trace_pair(rho, x @ a)))
    return worst


@dataclass(frozen=True)
class SphereVector:
    gns: GnsData
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, np.complex128)
        if c.shape != (self.gns.hilbert_dim,):
            raise ShapeMismatchError(f"expected {self.gns.hilbert_dim} coordinates, got {c.shape}")
        if abs(np.linalg.norm(c) - 1.0) > NORM_ATOL:
            raise InputError("sphere vector must have unit norm")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    @classmethod
    def normalized(cls, gns: GnsData, coords) -> "SphereVector":
        c = np.asarray(coords, np.complex128)
        return cls(gns, c / np.linalg.norm(c))


def sphere_point(gns: GnsData, g: Element) -> SphereVector:
    """Normalized class of the algebra element ``g``."""
    return SphereVector.normalized(gns, gns.vector_of(g))


def cyclic_point(gns: GnsData) -> SphereVector:
    return SphereVector(gns, gns.cyclic)


def project_pi(psi: SphereVector) -> StateFunctional:
    """State ``c -> <psi, rep(c) psi>``."""
    gns = psi.gns
    out = Element.zeros(gns.shape)
    for e in hermitian_basis(gns.shape):
        val = np.vdot(psi.coords, gns.rep(e) @ psi.coords).real
        out = out + val * e
    return StateFunctional(out.hermitian_part(), check=False)


def in_orbit_sector(psi: SphereVector) -> bool:
    """Whether ``psi`` projects into the orbit of the reference state."""
    return rank_signature(project_pi(psi)) == rank_signature(psi.gns.reference)


def beta_act(g_a: Element, g_b: Element, psi: SphereVector) -> SphereVector:
    g = group_exp(g_a, g_b)
    return SphereVector.normalized(psi.gns, psi.gns.rep(g) @ psi.coords)


def psi_field(psi: SphereVector, a: Element, b: Element) -> np.ndarray:
    """Fundamental field of the group action on the sphere, at ``psi``."""
    require_self_adjoint(a, "a")
    require_self_adjoint(b, "b")
    ra, rb = psi.gns.rep(a), psi.gns.rep(b)
    p = psi.coords
    mean = np.vdot(p, ra @ p).real
    return 0.5 * (ra + 1j * rb) @ p - 0.5 * mean * p


def ambient_metric(u: np.ndarray, v: np.ndarray) -> float:
    """``E(u, v) = 2(<u,v> + <v,u>)``."""
    return 4.0 * np.vdot(u, v).real


def ambient_symplectic(u: np.ndarray, v: np.ndarray) -> float:
    """``Omega(u, v) = (2/i)(<u,v> - <v,u>)``."""
    return 4.0 * np.vdot(u, v).imag


def in_commutant(gns: GnsData, m: np.ndarray, tol: float = 1e-10) -> bool:
    scale = 1.0 + float(np.max(np.abs(m)))
    for e in _generators(gns.shape):
        r = gns.rep(e)
        if np.max(np.abs(r @ m - m @ r)) > tol * scale:
            return False
    return True


def xi_field(psi: SphereVector, b: np.ndarray) -> np.ndarray:
    """Vertical field ``B psi`` of a skew-adjoint commutant element ``B``."""
    b = np.asarray(b, np.complex128)
    scale = 1.0 + float(np.max(np.abs(b))) if b.size else 1.0
    if np.max(np.abs(b + b.conj().T)) > 1e-10 * scale:
        raise InputError("commutant generator must be skew-adjoint")
    if not in_commutant(psi.gns, b):
        raise InputError("operator does not commute with the represented algebra")
    return b @ psi.coords


def horizontal_lift(psi: SphereVector, v) -> np.ndarray:
    """Horizontal vector at ``psi`` projecting onto the state tangent ``v``."""
    rho = project_pi(psi)
    value = v.value if isinstance(v, TangentVector) else v
    a = lyapunov_solve(rho, TangentVector(rho, value)).solution
    return psi_field(psi, a, Element.zeros(rho.shape))


def pushforward(psi: SphereVector, u: np.ndarray) -> Element:
    """Differential of the projection: ``c -> 2 Re<u, rep(c) psi>`` as a density."""
    gns = psi.gns
    out = Element.zeros(gns.shape)
    for e in hermitian_basis(gns.shape):
        val = 2.0 * np.vdot(u, gns.rep(e) @ psi.coords).real
        out = out + val * e
    return out.hermitian_part()


def free_action_check(gns: GnsData, psi: SphereVector, tol: float = 1e-8) -> bool:
    """True iff no nonzero skew-adjoint commutant element annihilates ``psi``."""
    if not gns.commutant_skew_basis:
        return True
    cols = [b @ psi.coords for b in gns.commutant_skew_basis]
    m = np.array([np.concatenate([c.real, c.imag]) for c in cols]).T
    s = np.linalg.svd(m, compute_uv=False)
    return bool(s.min() > tol * max(s.max(), 1.0))


SUBMERSION_CALIBRATION = 1.0


def calibrate_submersion() -> float:
    """Ratio ``G1 / E`` on the Abelian two-point case; 1 with the constants above."""
    rho = StateFunctional(Element.diagonal([0.5, 0.5]))
    gns = build_gns(rho)
    psi = cyclic_point(gns)
    a = Element.diagonal([1.0, -1.0])
    u = psi_field(psi, a, Element.zeros(rho.shape))
    return metric_G1_fields(rho, a, a) / ambient_metric(u, u)
