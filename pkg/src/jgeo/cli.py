"""``jgeo`` command-line driver.

Exit codes: 0 success, 1 a verify suite failed, 2 invalid input, 3 a solver
refused a well-formed input.
"""

from __future__ import annotations

import sys

import click
import numpy as np

from . import io
from .algebra import Element
from .curvature import (
    CurvaturePlane,
    plane_normalization_O,
    plane_normalization_O1,
    riemann_O,
    riemann_O1,
    sectional_O,
    sectional_O1,
)
from .errors import InputError, JgeoError, SolverError
from .geodesic import GeodesicSpec, arc_length, geodesic_point
from .gns import build_gns, cyclic_point, free_action_check, is_star_homomorphism
from .metric import bures_helstrom, fisher_rao, metric_G1, metric_G1_fields
from .orbits import StateFunctional, gradient_vec, rank_signature
from .verify import SUITES, parallel_map, run


def _load_state(path) -> StateFunctional:
    value = io.load(path)
    if not isinstance(value, StateFunctional):
        raise InputError(f"{path}: expected a state document")
    return value


def _load_element(path, shape) -> Element:
    value = io.load(path)
    if isinstance(value, Element):
        x = value
    elif hasattr(value, "density"):
        x = value.density
    else:
        raise InputError(f"{path}: expected an element document")
    if x.shape != shape:
        raise InputError(f"{path}: direction lives in {x.shape}, state in {shape}")
    return x


def _rel(x: float, y: float) -> float:
    return abs(x - y) / max(1.0, abs(x), abs(y))


def _out(obj):
    click.echo(io.dumps(obj))


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except JgeoError as exc:
            report = {"error": exc.code, "message": str(exc)}
            if getattr(exc, "path", ""):
                report["path"] = exc.path
            click.echo(io.dumps(report), err=True)
            ctx.exit(3 if isinstance(exc, SolverError) else 2)
        except OSError as exc:
            click.echo(io.dumps({"error": "IO_ERROR", "message": str(exc)}), err=True)
            ctx.exit(2)


@click.group(cls=_Group)
@click.version_option(package_name="artifact")
def main():
    """Jordan-product information geometry on finite-dimensional C*-algebras."""


state_opt = click.option("--state", "state_path", required=True, type=click.Path(dir_okay=False), help="State document (JSON).")
dir_a_opt = click.option("--dir-a", "dir_a", required=True, type=click.Path(dir_okay=False), help="First direction (element document).")
dir_b_opt = click.option("--dir-b", "dir_b", type=click.Path(dir_okay=False), help="Second direction (element document).")


@main.command("metric")
@state_opt
@dir_a_opt
@dir_b_opt
@click.option("--bh-half", is_flag=True, help="Report the Bures-Helstrom value with the extra factor 1/2.")
def metric_cmd(state_path, dir_a, dir_b, bh_half):
    """Compare the field, Lyapunov, Bures-Helstrom and Fisher-Rao paths."""
    rho = _load_state(state_path)
    a = _load_element(dir_a, rho.shape)
    b = _load_element(dir_b, rho.shape) if dir_b else a
    v, w = gradient_vec(rho, a), gradient_vec(rho, b)
    report = {"g1_fields": metric_G1_fields(rho, a, b), "g1_tangent": metric_G1(rho, v, w)}
    if rho.is_faithful():
        bh = bures_helstrom(rho, v, w)
        report["bures_helstrom"] = 0.5 * bh if bh_half else bh
    if rho.shape.is_abelian:
        report["fisher_rao"] = fisher_rao(rho, v, w)
    keys = [k for k in ("g1_fields", "g1_tangent", "bures_helstrom", "fisher_rao") if k in report]
    scale = {"bures_helstrom": 2.0 if bh_half else 1.0}
    diffs = {}
    for i, k in enumerate(keys):
        for m in keys[i + 1 :]:
            diffs[f"{k}/{m}"] = _rel(report[k] * scale.get(k, 1.0), report[m] * scale.get(m, 1.0))
    report["relative_differences"] = diffs
    _out(report)


@main.command("curvature")
@state_opt
@dir_a_opt
@dir_b_opt
def curvature_cmd(state_path, dir_a, dir_b):
    """Sectional curvatures of the plane spanned by two gradient directions."""
    rho = _load_state(state_path)
    a = _load_element(dir_a, rho.shape)
    if not dir_b:
        raise InputError("curvature needs --dir-b")
    b = _load_element(dir_b, rho.shape)
    plane = CurvaturePlane(a, b)
    _out(
        {
            "sectional_O": sectional_O(rho, plane),
            "sectional_O1": sectional_O1(rho, plane),
            "riemann_O_abba": riemann_O(rho, a, b, b, a),
            "riemann_O1_abba": riemann_O1(rho, a, b, b, a),
            "normalization_O": plane_normalization_O(rho, a, b),
            "normalization_O1": plane_normalization_O1(rho, a, b),
        }
    )


@main.command("geodesic")
@state_opt
@dir_a_opt
@click.option("--t-max", type=float, default=float(np.pi), show_default=True)
@click.option("--samples", type=click.IntRange(min=1), default=101, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv", show_default=True)
def geodesic_cmd(state_path, dir_a, t_max, samples, fmt):
    """Sample the geodesic through the state along the gradient of a direction."""
    rho = _load_state(state_path)
    spec = GeodesicSpec(rho, _load_element(dir_a, rho.shape))
    ts = [0.0] if samples == 1 or t_max == 0 else list(np.linspace(0.0, t_max, samples))
    points = parallel_map(lambda t: geodesic_point(spec, float(t)), ts)
    if fmt == "csv":
        click.echo(io.emit_csv(points), nl=False)
        return
    _out(
        {
            "speed": spec.speed,
            "period": spec.period,
            "arc_length": arc_length(spec, 0.0, ts[-1]),
            "samples": [
                {
                    "t": p.t,
                    "trace": p.trace,
                    "min_eigenvalue": p.min_eigenvalue,
                    "rank": list(p.rank.ranks),
                    "state": io.to_document(p.state)["state"],
                }
                for p in points
            ],
        }
    )


@main.command("gns")
@state_opt
@click.option("--report", is_flag=True, help="Emit the structure report (the default output).")
def gns_cmd(state_path, report):
    """GNS dimensions and representation residuals for a reference state."""
    rho = _load_state(state_path)
    gns = build_gns(rho)
    _out(
        {
            "rank_signature": list(rank_signature(rho).ranks),
            "algebra_dimension": rho.shape.dim,
            "ideal_dimension": gns.ideal_dim,
            "quotient_dimension": gns.hilbert_dim,
            "commutant_dimension": gns.commutant_dim,
            "homomorphism_residual": is_star_homomorphism(gns),
            "free_action_at_cyclic": free_action_check(gns, cyclic_point(gns)),
        }
    )


@main.command("verify")
@click.option("--suite", type=click.Choice(sorted(SUITES) + ["all"]), default="all", show_default=True)
@click.option("--dim", type=click.IntRange(min=1, max=6), default=None, help="Block size (suite default if omitted).")
@click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), default=0, show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--tol", type=float, default=None, help="Override the suite tolerance.")
def verify_cmd(suite, dim, seed, trials, tol):
    """Run randomized property suites; exit 0 iff all pass."""
    results = run(suite, dim, seed, trials, tol)
    _out({"seed": seed, "results": [r.as_dict() for r in results], "passed": all(r.passed for r in results)})
    if not all(r.passed for r in results):
        sys.exit(1)


if __name__ == "__main__":
    main()
