"""Finite-dimensional C*-algebras as direct sums of full matrix algebras.

An algebra ``M_{n_1}(C) + ... + M_{n_k}(C)`` is described by its
:class:`AlgebraShape`; its elements are :class:`Element` instances holding
one dense complex matrix per block.  On the self-adjoint part we expose the
symmetrized (Jordan) product ``(ab + ba)/2`` and the Lie product
``(ab - ba)/2i``, both of which return self-adjoint elements again.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import InputError, NotSelfAdjointError, ShapeMismatchError

SA_RTOL = 1e-10


@dataclass(frozen=True)
class AlgebraShape:
    """Block signature ``(n_1, ..., n_k)`` of a multimatrix algebra."""

    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(int(n) for n in self.blocks)
        if not blocks:
            raise InputError("an algebra needs at least one block")
        if any(n < 1 for n in blocks):
            raise InputError(f"block sizes must be >= 1, got {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def of(cls, *blocks: int) -> "AlgebraShape":
        return cls(tuple(blocks))

    @property
    def dim(self) -> int:
        """Complex dimension of the algebra (= real dimension of its self-adjoint part)."""
        return sum(n * n for n in self.blocks)

    @property
    def size(self) -> int:
        """Side length of the block-diagonal embedding."""
        return sum(self.blocks)

    @property
    def is_abelian(self) -> bool:
        return all(n == 1 for n in self.blocks)

    def __str__(self):
        return "+".join(f"M{n}" for n in self.blocks)


class Element:
    """Immutable block-diagonal complex matrix."""

    __slots__ = ("shape", "blocks")

    def __init__(self, shape: AlgebraShape, blocks: Sequence[np.ndarray]):
        if not isinstance(shape, AlgebraShape):
            shape = AlgebraShape(tuple(shape))
        if len(blocks) != len(shape.blocks):
            raise ShapeMismatchError(
                f"expected {len(shape.blocks)} blocks for {shape}, got {len(blocks)}"
            )
        arrs = []
        for n, b in zip(shape.blocks, blocks):
            arr = np.array(b, dtype=np.complex128)
            if arr.shape != (n, n):
                raise ShapeMismatchError(f"block of shape {arr.shape} does not fit M{n}")
            arr.flags.writeable = False
            arrs.append(arr)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "blocks", tuple(arrs))

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    # constructors

    @classmethod
    def identity(cls, shape: AlgebraShape) -> "Element":
        return cls(shape, [np.eye(n) for n in shape.blocks])

    @classmethod
    def zeros(cls, shape: AlgebraShape) -> "Element":
        return cls(shape, [np.zeros((n, n)) for n in shape.blocks])

    @classmethod
    def from_blocks(cls, *blocks) -> "Element":
        arrs = [np.atleast_2d(np.asarray(b, dtype=np.complex128)) for b in blocks]
        return cls(AlgebraShape(tuple(a.shape[0] for a in arrs)), arrs)

    @classmethod
    def diagonal(cls, values: Iterable[complex]) -> "Element":
        """Element of the Abelian algebra C^m with the given components."""
        vals = list(values)
        return cls(AlgebraShape((1,) * len(vals)), [[[v]] for v in vals])

    @classmethod
    def from_dense(cls, shape: AlgebraShape, matrix) -> "Element":
        """Cut the diagonal blocks out of a dense ``size x size`` matrix."""
        m = np.asarray(matrix, dtype=np.complex128)
        if m.shape != (shape.size, shape.size):
            raise ShapeMismatchError(f"dense matrix {m.shape} does not fit {shape}")
        out, i = [], 0
        for n in shape.blocks:
            out.append(m[i : i + n, i : i + n])
            i += n
        return cls(shape, out)

    # views

    def dense(self) -> np.ndarray:
        return scipy.linalg.block_diag(*self.blocks)

    def adjoint(self) -> "Element":
        return Element(self.shape, [b.conj().T for b in self.blocks])

    def max_abs(self) -> float:
        return max(float(np.max(np.abs(b))) for b in self.blocks)

    def is_self_adjoint(self, rtol: float = SA_RTOL) -> bool:
        scale = 1.0 + self.max_abs()
        return all(np.max(np.abs(b - b.conj().T)) <= rtol * scale for b in self.blocks)

    def hermitian_part(self) -> "Element":
        return Element(self.shape, [(b + b.conj().T) / 2 for b in self.blocks])

    def trace(self) -> complex:
        return complex(sum(np.trace(b) for b in self.blocks))

    def allclose(self, other: "Element", atol: float = 1e-12) -> bool:
        _check_same_shape(self, other)
        return all(np.allclose(x, y, rtol=0, atol=atol) for x, y in zip(self.blocks, other.blocks))

    def dist(self, other: "Element") -> float:
        """Entrywise max-norm distance."""
        return (self - other).max_abs()

    # linear structure

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        _check_same_shape(self, other)
        return Element(self.shape, [x + y for x, y in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        _check_same_shape(self, other)
        return Element(self.shape, [x - y for x, y in zip(self.blocks, other.blocks)])

    def __neg__(self):
        return Element(self.shape, [-x for x in self.blocks])

    def __mul__(self, scalar):
        if isinstance(scalar, Element):
            return NotImplemented
        return Element(self.shape, [scalar * x for x in self.blocks])

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Element(self.shape, [x / scalar for x in self.blocks])

    def __matmul__(self, other):
        return mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.shape == other.shape and all(
            np.array_equal(x, y) for x, y in zip(self.blocks, other.blocks)
        )

    __hash__ = None

    def __repr__(self):
        return f"Element({self.shape}, {[b.tolist() for b in self.blocks]!r})"


def _check_same_shape(a: Element, b: Element):
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")


def require_self_adjoint(x: Element, name: str = "element"):
    if not x.is_self_adjoint():
        raise NotSelfAdjointError(f"{name} is not self-adjoint")


def mul(a: Element, b: Element) -> Element:
    """Blockwise associative product."""
    _check_same_shape(a, b)
    return Element(a.shape, [x @ y for x, y in zip(a.blocks, b.blocks)])


def jordan(a: Element, b: Element) -> Element:
    """Symmetrized product ``(ab + ba)/2`` of two self-adjoint elements."""
    _check_same_shape(a, b)
    require_self_adjoint(a, "a")
    require_self_adjoint(b, "b")
    out = []
    for x, y in zip(a.blocks, b.blocks):
        s = (x @ y + y @ x) / 2
        out.append((s + s.conj().T) / 2)
    return Element(a.shape, out)


def lie(a: Element, b: Element) -> Element:
    """Lie product ``(ab - ba)/2i`` of two self-adjoint elements."""
    _check_same_shape(a, b)
    require_self_adjoint(a, "a")
    require_self_adjoint(b, "b")
    out = []
    for x, y in zip(a.blocks, b.blocks):
        s = (x @ y - y @ x) / 2j
        out.append((s + s.conj().T) / 2)
    return Element(a.shape, out)


def trace_pair(xi: Element, a: Element):
    """``sum_k Tr(xi_k a_k)``; a float when both arguments are self-adjoint."""
    _check_same_shape(xi, a)
    # Tr(XA) = sum_ij X_ij A_ji
    val = sum(np.sum(x * y.T) for x, y in zip(xi.blocks, a.blocks))
    val = complex(val)
    if xi.is_self_adjoint() and a.is_self_adjoint():
        return val.real
    return val


def hermitian_basis(shape: AlgebraShape) -> list[Element]:
    """Trace-orthonormal basis of the self-adjoint part.

    Per block, in order: diagonal units ``E_ii``; symmetric pairs
    ``(E_ij + E_ji)/sqrt2`` for ``i < j``; antisymmetric pairs
    ``i(E_ij - E_ji)/sqrt2`` for ``i < j``.  Blocks are visited in order.
    """
    out = []
    r2 = math.sqrt(2.0)
    for k, n in enumerate(shape.blocks):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        mats = []
        for i in range(n):
            m = np.zeros((n, n), complex)
            m[i, i] = 1
            mats.append(m)
        for i, j in pairs:
            m = np.zeros((n, n), complex)
            m[i, j] = m[j, i] = 1 / r2
            mats.append(m)
        for i, j in pairs:
            m = np.zeros((n, n), complex)
            m[i, j] = 1j / r2
            m[j, i] = -1j / r2
            mats.append(m)
        for m in mats:
            blocks = [np.zeros((p, p)) for p in shape.blocks]
            blocks[k] = m
            out.append(Element(shape, blocks))
    return out


hermitian_basis = functools.lru_cache(maxsize=64)(hermitian_basis)


def to_coords(x: Element) -> np.ndarray:
    """Real coordinates of a self-adjoint element in :func:`hermitian_basis`."""
    return np.array([trace_pair(e, x.hermitian_part()) for e in hermitian_basis(x.shape)], float)


def from_coords(shape: AlgebraShape, coords) -> Element:
    basis = hermitian_basis(shape)
    c = np.asarray(coords, float)
    if c.shape != (len(basis),):
        raise ShapeMismatchError(f"expected {len(basis)} coordinates, got {c.shape}")
    out = Element.zeros(shape)
    for ci, e in zip(c, basis):
        out = out + ci * e
    return out


def complex_coords(x: Element) -> np.ndarray:
    """Coordinates in the matrix-unit basis (row-major per block, blocks in order)."""
    return np.concatenate([b.reshape(-1) for b in x.blocks])


def from_complex_coords(shape: AlgebraShape, coords) -> Element:
    c = np.asarray(coords, np.complex128)
    out, i = [], 0
    for n in shape.blocks:
        out.append(c[i : i + n * n].reshape(n, n))
        i += n * n
    return Element(shape, out)


def _commute(x: np.ndarray, y: np.ndarray) -> bool:
    scale = np.max(np.abs(x)) * np.max(np.abs(y))
    return np.max(np.abs(x @ y - y @ x)) <= 1e-12 * scale


def _expm_normal(m: np.ndarray) -> np.ndarray | None:
    # complex Schur form of a normal matrix is diagonal; None if it is not
    t, z = scipy.linalg.schur(m, output="complex")
    off = t - np.diag(np.diag(t))
    if np.max(np.abs(off), initial=0.0) > 1e-12 * (1.0 + np.max(np.abs(t))):
        return None
    return (z * np.exp(np.diag(t))) @ z.conj().T


def group_exp(a: Element, b: Element) -> Element:
    """The invertible element ``exp((a + ib)/2)``."""
    _check_same_shape(a, b)
    require_self_adjoint(a, "a")
    require_self_adjoint(b, "b")
    out = []
    for x, y in zip(a.blocks, b.blocks):
        m = (x + 1j * y) / 2
        g = _expm_normal(m) if _commute(x, y) else None
        out.append(scipy.linalg.expm(m) if g is None else g)
    return Element(a.shape, out)
