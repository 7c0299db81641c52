"""Randomized property suites behind ``jgeo verify``.

Each suite runs ``trials`` independent draws; trial ``i`` gets its own
generator spawned from the master seed, so results do not depend on how the
trials are scheduled across workers.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import AlgebraShape, Element, jordan, lie
from .curvature import CurvaturePlane, riemann_O, sectional_O, sectional_O1
from .errors import InputError
from .geodesic import GeodesicSpec, calibrate_distance, distance, geodesic_point, geodesic_residual, great_circle
from .gns import (
    ambient_metric,
    build_gns,
    cyclic_point,
    free_action_check,
    horizontal_lift,
    is_star_homomorphism,
    project_pi,
    sphere_point,
)
from .metric import bures_helstrom, fisher_rao, lyapunov_solve, metric_G1, metric_G1_fields
from .orbits import StateFunctional, gradient_vec
from .sampling import (
    random_abelian_state,
    random_pure_state,
    random_self_adjoint,
    random_state,
    random_traceless,
)


@dataclass
class SuiteResult:
    suite: str
    passed: bool
    max_residual: float
    tolerance: float
    trials: int
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "trials": self.trials,
            **({"details": self.details} if self.details else {}),
        }


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("JGEO_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn: Callable, items) -> list:
    """Ordered map over a thread pool capped by ``JGEO_THREADS``."""
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _rel(x: float, y: float) -> float:
    return abs(x - y) / max(1.0, abs(x), abs(y))


def _jordan(rng, dim):
    s = AlgebraShape((dim,))
    a, b, c = (random_self_adjoint(rng, s) for _ in range(3))
    aa = jordan(a, a)
    res = [
        jordan(a, b).dist(jordan(b, a)),
        (lie(a, lie(b, c)) + lie(b, lie(c, a)) + lie(c, lie(a, b))).max_abs(),
        lie(a, jordan(b, c)).dist(jordan(lie(a, b), c) + jordan(b, lie(a, c))),
        jordan(jordan(a, b), aa).dist(jordan(a, jordan(b, aa))),
        (a @ b).dist(jordan(a, b) + 1j * lie(a, b)),
    ]
    return max(res)


def _lyapunov(rng, dim):
    s = AlgebraShape((dim,))
    rank = int(rng.integers(1, dim + 1))
    rho = random_state(rng, s, (rank,))
    v = gradient_vec(rho, random_self_adjoint(rng, s))
    sol = lyapunov_solve(rho, v)
    return sol.residual / (1.0 + v.value.max_abs())


def _bures(rng, dim):
    s = AlgebraShape((dim,))
    rho = random_state(rng, s)
    a, b = random_self_adjoint(rng, s), random_self_adjoint(rng, s)
    lhs = metric_G1_fields(rho, a, b)
    rhs = bures_helstrom(rho, gradient_vec(rho, a), gradient_vec(rho, b))
    return _rel(lhs, rhs)


def _fisher_rao(rng, dim):
    m = max(dim, 2)
    p = random_abelian_state(rng, m)
    v = random_traceless(rng, p.shape)
    w = random_traceless(rng, p.shape)
    return _rel(metric_G1(p, v, w), fisher_rao(p, v, w))


def _abelian_curvature(rng, dim):
    m = max(dim, 3)
    p = random_abelian_state(rng, m)
    plane = CurvaturePlane(random_self_adjoint(rng, p.shape), random_self_adjoint(rng, p.shape))
    k = sectional_O1(p, plane)
    return max(abs(k - 0.25), abs(sectional_O(p, plane))), k


def _fubini_study(rng, dim):
    rho = random_pure_state(rng, 2)
    plane = CurvaturePlane(random_self_adjoint(rng, rho.shape), random_self_adjoint(rng, rho.shape))
    k = sectional_O1(rho, plane)
    return abs(k - 1.0), k


def _submersion(rng, dim):
    s = AlgebraShape((dim,))
    ranks = None if rng.random() < 0.5 else (1,)
    rho = random_state(rng, s, ranks)
    gns = build_gns(rho)
    g = Element(s, [rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))])
    psi = sphere_point(gns, g)
    base = project_pi(psi)
    a, b = random_self_adjoint(rng, s), random_self_adjoint(rng, s)
    ua = horizontal_lift(psi, gradient_vec(base, a))
    ub = horizontal_lift(psi, gradient_vec(base, b))
    res = [_rel(ambient_metric(ua, ub), metric_G1_fields(base, a, b))]
    for bb in gns.commutant_skew_basis:
        res.append(abs(ambient_metric(ua, bb @ psi.coords)))
    return max(res)


def _geodesic(rng, dim):
    s = AlgebraShape((dim,))
    rho = random_state(rng, s)
    spec = GeodesicSpec(rho, random_self_adjoint(rng, s))
    psi = cyclic_point(build_gns(rho))
    phi = horizontal_lift(psi, gradient_vec(rho, spec.direction))
    res = []
    for t in np.linspace(0, spec.period, 17):
        p = geodesic_point(spec, t)
        res.append(abs(p.trace - 1.0))
        res.append(max(0.0, -p.min_eigenvalue))
        res.append(project_pi(great_circle(psi, phi, t)).density.dist(p.state.density))
    t = float(rng.uniform(0, spec.period))
    try:
        r1, r2 = geodesic_residual(spec, t, 2e-3), geodesic_residual(spec, t, 1e-3)
        if r2 > 1e-12:
            res.append(0.0 if 3.5 <= r1 / r2 <= 4.5 else abs(r1 / r2 - 4.0))
    except ArithmeticError:
        pass  # sampled time landed on a lower stratum
    return max(res)


def _riemann(rng, dim):
    s = AlgebraShape((dim,))
    rho = random_state(rng, s)
    a, b, c, d = (random_self_adjoint(rng, s) for _ in range(4))
    R = lambda *x: riemann_O(rho, *x)
    r = R(a, b, c, d)
    scale = max(1.0, abs(r))
    return max(
        abs(r + R(b, a, c, d)),
        abs(r + R(a, b, d, c)),
        abs(r - R(c, d, a, b)),
        abs(r + R(b, c, a, d) + R(c, a, b, d)),
    ) / scale


def _gns(rng, dim):
    s = AlgebraShape((dim,))
    res = []
    for ranks, expect in ((None, (dim * dim, dim * dim)), ((1,), (dim, 1))):
        rho = random_state(rng, s, ranks)
        gns = build_gns(rho)
        res.append(0.0 if (gns.hilbert_dim, gns.commutant_dim) == expect else 1.0)
        res.append(is_star_homomorphism(gns))
        g = Element(s, [rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))])
        res.append(0.0 if free_action_check(gns, sphere_point(gns, g)) else 1.0)
        psi = cyclic_point(gns)
        res.append(project_pi(psi).density.dist(rho.density))
    return max(res)


def _distance(rng, dim):
    p, q = rng.uniform(0.01, 0.99, 2)
    rho = StateFunctional(Element.diagonal([p, 1 - p]))
    sig = StateFunctional(Element.diagonal([q, 1 - q]))
    closed = 2 * np.arccos(np.sqrt(p * q) + np.sqrt((1 - p) * (1 - q)))
    return max(abs(distance(rho, sig) - closed), abs(calibrate_distance() - 2.0))


@dataclass(frozen=True)
class Suite:
    name: str
    fn: Callable
    tolerance: float
    default_dim: int


SUITES = {
    s.name: s
    for s in [
        Suite("jordan", _jordan, 1e-12, 3),
        Suite("lyapunov", _lyapunov, 1e-10, 3),
        Suite("bures", _bures, 1e-10, 3),
        Suite("fisher-rao", _fisher_rao, 1e-12, 4),
        Suite("abelian-curvature", _abelian_curvature, 1e-10, 4),
        Suite("fubini-study", _fubini_study, 1e-8, 2),
        Suite("submersion", _submersion, 1e-10, 2),
        Suite("geodesic", _geodesic, 1e-10, 2),
        Suite("riemann", _riemann, 1e-8, 3),
        Suite("gns", _gns, 1e-10, 2),
        Suite("distance", _distance, 1e-10, 2),
    ]
}


def run_suite(name: str, dim: int | None = None, seed: int = 0, trials: int = 100, tol: float | None = None) -> SuiteResult:
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    suite = SUITES[name]
    dim = suite.default_dim if dim is None else dim
    tol = suite.tolerance if tol is None else tol
    seeds = np.random.SeedSequence(seed).spawn(trials)
    outs = parallel_map(lambda ss: suite.fn(np.random.default_rng(ss), dim), seeds)
    residuals = [float(o[0] if isinstance(o, tuple) else o) for o in outs]
    observed = [float(o[1]) for o in outs if isinstance(o, tuple)]
    worst = max(residuals) if residuals else 0.0
    details = {}
    if observed:
        details = {"observed_min": min(observed), "observed_max": max(observed)}
    return SuiteResult(name, bool(worst <= tol), worst, tol, trials, details)


def run(suite: str, dim: int | None = None, seed: int = 0, trials: int = 100, tol: float | None = None) -> list[SuiteResult]:
    names = list(SUITES) if suite == "all" else [suite]
    return [run_suite(n, dim, seed, trials, tol) for n in names]
