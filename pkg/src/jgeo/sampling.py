"""Random test objects.

All samplers take a ``numpy.random.Generator``; the CLI seeds it with
``np.random.default_rng(seed)`` (PCG64).  Densities are drawn as
``g g^dagger / Tr`` with standard complex Gaussian ``g``, which reaches every
rank stratum.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraShape, Element
from .orbits import PositiveFunctional, StateFunctional


def _ginibre(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2)


def random_self_adjoint(rng: np.random.Generator, shape: AlgebraShape) -> Element:
    out = []
    for n in shape.blocks:
        g = _ginibre(rng, n, n)
        out.append((g + g.conj().T) / 2)
    return Element(shape, out)


def random_traceless(rng: np.random.Generator, shape: AlgebraShape) -> Element:
    x = random_self_adjoint(rng, shape)
    return x - (x.trace().real / shape.size) * Element.identity(shape)


def random_unitary(rng: np.random.Generator, shape: AlgebraShape) -> Element:
    out = []
    for n in shape.blocks:
        q, r = np.linalg.qr(_ginibre(rng, n, n))
        d = np.diag(r)
        out.append(q * (d / np.abs(d)))
    return Element(shape, out)


def random_positive(rng: np.random.Generator, shape: AlgebraShape, ranks=None) -> PositiveFunctional:
    """Positive functional with the given per-block ranks (full rank by default)."""
    if ranks is None:
        ranks = shape.blocks
    out = []
    for n, r in zip(shape.blocks, ranks):
        if r == 0:
            out.append(np.zeros((n, n)))
            continue
        g = _ginibre(rng, n, r)
        m = g @ g.conj().T
        out.append((m + m.conj().T) / 2)
    return PositiveFunctional(Element(shape, out))


def random_state(rng: np.random.Generator, shape: AlgebraShape, ranks=None) -> StateFunctional:
    x = random_positive(rng, shape, ranks).density
    return StateFunctional(x / x.trace().real)


def random_pure_state(rng: np.random.Generator, n: int) -> StateFunctional:
    return random_state(rng, AlgebraShape((n,)), ranks=(1,))


def random_abelian_state(rng: np.random.Generator, m: int) -> StateFunctional:
    p = rng.dirichlet(np.ones(m))
    return StateFunctional(Element.diagonal(p))
