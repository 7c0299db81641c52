"""Independent reference computations used only by the tests.

None of these share code paths with the package routines they check:
the Lyapunov oracle solves a dense linear system in real coordinates
instead of dividing in an eigenbasis, the curvature oracle builds
Christoffel symbols of the coordinate metric and differentiates them
numerically, and the fidelity oracle goes through ``sqrt(rho) sigma sqrt(rho)``
instead of a singular value decomposition.
"""

import functools

import numpy as np

from jgeo.algebra import Element, from_coords, hermitian_basis, to_coords


@functools.lru_cache(maxsize=None)
def anticommutator_matrices(shape):
    """``(M_k)_ij = Tr(e_i {e_k, e_j})`` over the trace-orthonormal basis."""
    e = np.array([b.dense() for b in hermitian_basis(shape)])
    prod = np.einsum("kab,jbc->kjac", e, e)
    sym = (prod + prod.transpose(1, 0, 2, 3)) / 2
    return np.einsum("iba,kjab->kij", e, sym).real


def lyapunov_dense(density: Element, v: Element) -> Element:
    """Minimum-norm solution of ``{density, x} = v`` by least squares in coordinates."""
    mk = anticommutator_matrices(density.shape)
    m = np.einsum("k,kij->ij", to_coords(density), mk)
    x, *_ = np.linalg.lstsq(m, to_coords(v), rcond=1e-12)
    return from_coords(density.shape, x)


class CoordinateMetric:
    """The orbit metric on faithful positive functionals, written in basis coordinates.

    At coordinates ``x`` the metric matrix is ``g(x) = M(x)^{-1}`` with
    ``M(x) = sum_k x_k M_k``; the gradient field of ``a`` has coordinates
    ``M(x) coords(a)``.
    """

    def __init__(self, shape):
        self.shape = shape
        self.mk = anticommutator_matrices(shape)
        self.dim = self.mk.shape[0]

    def m(self, x):
        return np.einsum("k,kij->ij", x, self.mk)

    def g(self, x):
        return np.linalg.inv(self.m(x))

    def christoffel(self, x):
        """``Gamma[l, i, j]`` from analytic metric derivatives ``dg_k = -g M_k g``."""
        g = self.g(x)
        ginv = self.m(x)
        dg = np.array([-g @ mk @ g for mk in self.mk])  # dg[k, i, j] = d_k g_ij
        # lower Christoffel: G[m, i, j] = 1/2 (d_i g_mj + d_j g_mi - d_m g_ij)
        low = 0.5 * (np.einsum("imj->mij", dg) + np.einsum("jmi->mij", dg) - dg)
        return np.einsum("lm,mij->lij", ginv, low)

    def riemann(self, x, h=1e-5):
        """``R[l, i, j, k]`` with ``R(d_j, d_k) d_i = R^l_ijk d_l``."""
        n = self.dim
        gam = self.christoffel(x)
        dgam = np.zeros((n, n, n, n))  # dgam[p, l, i, j] = d_p Gamma^l_ij
        for p in range(n):
            e = np.zeros(n)
            e[p] = h
            dgam[p] = (self.christoffel(x + e) - self.christoffel(x - e)) / (2 * h)
        r = (
            np.einsum("jlki->lijk", dgam)
            - np.einsum("klji->lijk", dgam)
            + np.einsum("ljm,mki->lijk", gam, gam)
            - np.einsum("lkm,mji->lijk", gam, gam)
        )
        return r

    def riemann_fields(self, density: Element, a, b, c, d, h=1e-5):
        """``G(R(Y_a, Y_b) Y_c, Y_d)`` computed in coordinates."""
        x = to_coords(density)
        m = self.m(x)
        ya, yb, yc, yd = (m @ to_coords(e) for e in (a, b, c, d))
        r = self.riemann(x, h)
        g = self.g(x)
        return float(np.einsum("j,k,i,n,nl,lijk->", ya, yb, yc, yd, g, r))


def fidelity_eig(rho: Element, sigma: Element) -> float:
    """``sum_k Tr sqrt(sqrt(rho_k) sigma_k sqrt(rho_k))`` via eigendecompositions."""
    total = 0.0
    for r, s in zip(rho.blocks, sigma.blocks):
        lam, u = np.linalg.eigh(r)
        sr = (u * np.sqrt(np.clip(lam, 0, None))) @ u.conj().T
        m = sr @ s @ sr
        mu = np.linalg.eigvalsh((m + m.conj().T) / 2)
        total += float(np.sum(np.sqrt(np.clip(mu, 0, None))))
    return total


def fisher_rao_geodesic_residual(p_of_t, t, h):
    """Residual of ``p'' - p'^2/(2p) + 1/2 (sum p'^2/p) p`` by finite differences."""
    pm, p0, pp = p_of_t(t - h), p_of_t(t), p_of_t(t + h)
    dp = (pp - pm) / (2 * h)
    ddp = (pp - 2 * p0 + pm) / (h * h)
    res = ddp - dp**2 / (2 * p0) + 0.5 * np.sum(dp**2 / p0) * p0
    return float(np.max(np.abs(res)))
