"""Closed-form geodesics of the state metric, and a few checks around them.

A geodesic through ``rho`` with initial velocity ``YY_a(rho)`` is the
projection of a great circle on the GNS sphere.  Lifting ``rho`` to the
cyclic vector and ``YY_a`` to ``phi = 1/2 a_g psi`` (with
``a_g = a - rho(a) I``) gives ``|phi| = N/2`` where ``N^2 = rho(a_g^2)``,
and projecting back yields

    sigma(t) = cos^2(Nt/2) rho + sin^2(Nt/2)/N^2 a_g rho a_g + sin(Nt)/N {rho, a_g}.

The curve has constant speed ``N`` and period ``2 pi / N``.  It may touch a
lower rank stratum and come back; the rank is reported per sample.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.integrate

from .algebra import Element, jordan, mul, require_self_adjoint
from .curvature import covariant_derivative_O, covariant_derivative_O1
from .errors import InputError, StepTooSmallError, ZeroDirectionError
from .gns import SphereVector
from .metric import lyapunov_solve, metric_G1
from .orbits import (
    PositiveFunctional,
    RankSignature,
    StateFunctional,
    TangentVector,
    expectation,
    rank_signature,
)

MIN_STEP = 1e-6
DIRECTION_RTOL = 1e-12


@dataclass(frozen=True)
class GeodesicSpec:
    """Start state and generating direction, with the derived quantities."""

    start: StateFunctional
    direction: Element

    def __post_init__(self):
        require_self_adjoint(self.direction, "direction")
        if self.direction.shape != self.start.shape:
            raise InputError("direction and start state live in different algebras")
        rho = self.start.density
        mean = expectation(self.start, self.direction)
        ag = self.direction - mean * Element.identity(rho.shape)
        n2 = expectation(self.start, jordan(ag, ag))
        scale = 1.0 + self.direction.max_abs() ** 2
        if n2 <= DIRECTION_RTOL * scale:
            raise ZeroDirectionError("direction generates a zero tangent vector at the start state")
        object.__setattr__(self, "centered", ag)
        object.__setattr__(self, "speed", float(np.sqrt(n2)))
        object.__setattr__(self, "rho_a", mul(mul(ag, rho), ag).hermitian_part())
        object.__setattr__(self, "rho_sym", jordan(rho, ag))

    @property
    def period(self) -> float:
        return 2 * np.pi / self.speed


@dataclass(frozen=True)
class GeodesicPoint:
    t: float
    state: StateFunctional
    rank: RankSignature
    min_eigenvalue: float

    @property
    def trace(self) -> float:
        return self.state.density.trace().real


def _sigma(spec: GeodesicSpec, t: float) -> Element:
    n = spec.speed
    c, s = np.cos(n * t / 2), np.sin(n * t / 2)
    return c * c * spec.start.density + (s * s / (n * n)) * spec.rho_a + (np.sin(n * t) / n) * spec.rho_sym


def geodesic_point(spec: GeodesicSpec, t: float) -> GeodesicPoint:
    d = _sigma(spec, float(t))
    state = StateFunctional(d.hermitian_part(), check=False)
    lam = min(float(np.min(l)) for l in state.eigenvalues)
    return GeodesicPoint(float(t), state, rank_signature(state), lam)


def velocity(spec: GeodesicSpec, t: float) -> Element:
    n = spec.speed
    s, c = np.sin(n * t), np.cos(n * t)
    return (-0.5 * n * s) * spec.start.density + (s / (2 * n)) * spec.rho_a + c * spec.rho_sym


def sample(spec: GeodesicSpec, t_max: float, samples: int) -> list[GeodesicPoint]:
    if samples < 1:
        raise InputError("need at least one sample")
    ts = [0.0] if samples == 1 or t_max == 0 else np.linspace(0.0, t_max, samples)
    return [geodesic_point(spec, t) for t in ts]


def great_circle(psi, phi: np.ndarray, t: float):
    """``cos(|phi| t) psi + sin(|phi| t) phi/|phi|`` for horizontal ``phi``."""
    phi = np.asarray(phi, np.complex128)
    norm = float(np.linalg.norm(phi))
    if norm <= DIRECTION_RTOL:
        raise ZeroDirectionError("great circle needs a nonzero direction")
    if abs(np.vdot(psi.coords, phi).real) > 1e-10 * norm:
        raise InputError("direction is not tangent to the sphere")
    c = np.cos(norm * t) * psi.coords + np.sin(norm * t) * phi / norm
    return SphereVector.normalized(psi.gns, c)


def arc_length(spec: GeodesicSpec, t0: float, t1: float) -> float:
    return abs(t1 - t0) * spec.speed


def arc_length_quadrature(spec: GeodesicSpec, t0: float, t1: float, panels: int = 10_000) -> float:
    """Simpson quadrature of ``sqrt(G1(sigma', sigma'))`` along the curve."""
    if t0 == t1:
        return 0.0
    ts = np.linspace(t0, t1, 2 * (panels // 2) + 1)
    speeds = []
    for t in ts:
        p = geodesic_point(spec, t)
        v = velocity(spec, t)
        v = v - v.trace().real * p.state.density
        speeds.append(np.sqrt(max(metric_G1(p.state, v, v), 0.0)))
    return float(abs(scipy.integrate.simpson(speeds, x=ts)))


def _christoffel_state(rho: StateFunctional, v: Element) -> Element:
    """Christoffel term ``Gamma(v, v)`` of the state connection in density coordinates."""
    u = lyapunov_solve(rho, TangentVector(rho, v)).solution
    cov = covariant_derivative_O1(rho, u, u).value
    # derivative of the field YY_u along v with u frozen
    flat = jordan(v, u) - (v @ u).trace().real * rho.density - expectation(rho, u) * v
    return cov - flat


def geodesic_residual(spec: GeodesicSpec, t: float, h: float) -> float:
    """Max-entry size of ``sigma'' + Gamma(sigma', sigma')``, with ``sigma''`` by central differences."""
    if h < MIN_STEP:
        raise StepTooSmallError(f"step {h:g} is below the cancellation guard {MIN_STEP:g}")
    acc = (velocity(spec, t + h) - velocity(spec, t - h)) / (2 * h)
    p = geodesic_point(spec, t).state
    v = velocity(spec, t)
    return (acc + _christoffel_state(p, v)).max_abs()


@dataclass(frozen=True)
class PositiveGeodesicSpec:
    """Geodesic of the metric on positive functionals: ``(I + ta/2) xi (I + ta/2)``."""

    start: PositiveFunctional
    direction: Element

    def __post_init__(self):
        require_self_adjoint(self.direction, "direction")
        if self.direction.shape != self.start.shape:
            raise InputError("direction and start live in different algebras")


def positive_geodesic_point(spec: PositiveGeodesicSpec, t: float) -> PositiveFunctional:
    m = Element.identity(spec.start.shape) + (t / 2) * spec.direction
    return PositiveFunctional((m @ spec.start.density @ m).hermitian_part(), check=False)


def positive_velocity(spec: PositiveGeodesicSpec, t: float) -> Element:
    a, x = spec.direction, spec.start.density
    m = Element.identity(x.shape) + (t / 2) * a
    return (0.5 * (a @ x @ m + m @ x @ a)).hermitian_part()


def positive_geodesic_residual(spec: PositiveGeodesicSpec, t: float, h: float) -> float:
    if h < MIN_STEP:
        raise StepTooSmallError(f"step {h:g} is below the cancellation guard {MIN_STEP:g}")
    acc = (positive_velocity(spec, t + h) - positive_velocity(spec, t - h)) / (2 * h)
    xi = positive_geodesic_point(spec, t)
    v = positive_velocity(spec, t)
    u = lyapunov_solve(xi, TangentVector(xi, v)).solution
    gamma = covariant_derivative_O(xi, u, u).value - jordan(v, u)
    return (acc + gamma).max_abs()


def fidelity(rho: StateFunctional, sigma: StateFunctional) -> float:
    """Root fidelity ``Tr|sqrt(rho) sqrt(sigma)|`` via singular values."""
    total = 0.0
    for x, y in zip(_sqrt_blocks(rho), _sqrt_blocks(sigma)):
        total += float(np.sum(np.linalg.svd(x @ y, compute_uv=False)))
    return total


def _sqrt_blocks(rho: PositiveFunctional) -> list[np.ndarray]:
    return [(u * np.sqrt(np.clip(l, 0, None))) @ u.conj().T for l, u in zip(rho.eigenvalues, rho.eigenvectors)]


DISTANCE_CALIBRATION = 2.0


def distance(rho: StateFunctional, sigma: StateFunctional) -> float:
    """Geodesic distance ``2 arccos(fidelity)`` of the state metric.

    The constant 2 matches the arc length of the closed-form geodesic joining
    two commuting states (see :func:`calibrate_distance`).
    """
    if rho.shape != sigma.shape:
        raise InputError("states live in different algebras")
    f = min(max(fidelity(rho, sigma), 0.0), 1.0)
    return DISTANCE_CALIBRATION * float(np.arccos(f))


def calibrate_distance(p: float = 0.5, q: float = 0.9) -> float:
    """Ratio of arc length to ``arccos(fidelity)`` for two points of the two-point simplex."""
    rho = StateFunctional(Element.diagonal([p, 1 - p]))
    target = StateFunctional(Element.diagonal([q, 1 - q]))
    # along the geodesic generated by a = diag(1,-1) the first weight is a sinusoid in sqrt-space
    spec = GeodesicSpec(rho, Element.diagonal([1.0, -1.0]))
    n = spec.speed
    theta0 = np.arcsin(np.sqrt(p))
    theta1 = np.arcsin(np.sqrt(q))
    t = 2 * abs(theta1 - theta0) / n
    reached = geodesic_point(spec, t if q > p else -t).state
    if not reached.density.allclose(target.density, atol=1e-10):
        raise ArithmeticError("calibration geodesic missed the target")
    return arc_length(spec, 0.0, t) / float(np.arccos(fidelity(rho, target)))
