"""Command-line front end.

Subcommands: check-psi, quantities, eig, sweep, catalog, report.  All
reports are deterministic for a fixed seed (stable key order, fixed
float formatting), newline-terminated UTF-8 text.
"""

from __future__ import annotations

import sys
from fractions import Fraction

import click

from . import catalog as catalog_mod
from . import serialize
from .poly import PolyParseError, parse_poly
from .psi import check_h1, check_h2
from .quantities import QuantityContext, finite_type_order_x, g, in_n1, in_n2, m1, m2
from .spectral import (
    GridPolicy,
    GridSpec,
    InsufficientData,
    MinEigResult,
    NoConvergence,
    assemble_witten,
    fit_exponent,
    min_eig,
    sweep,
)

EXIT_FAILS = 2
EXIT_UNDECIDED = 3
EXIT_NO_CONVERGENCE = 4
EXIT_EXPECTATION_MISMATCH = 5
EXIT_CONFIG = 64

click.UsageError.exit_code = EXIT_CONFIG

DEFAULT_ALPHA = 0.25
DEFAULT_BOX = 0.5
DEFAULT_SAMPLES = 129
DEFAULT_LAMBDA_START = 10.0
DEFAULT_LAMBDA_FACTOR = 2.0
DEFAULT_LAMBDA_COUNT = 8
DEFAULT_TOL = 1e-8
DEFAULT_SEED = 42


def _parse_phi(expr: str):
    try:
        return parse_poly(expr)
    except PolyParseError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        click.echo(text)


def _lambda_schedule(start, factor, count):
    if start <= 0 or factor <= 1 or count < 1:
        click.echo("error: lambda schedule must be positive and increasing", err=True)
        sys.exit(EXIT_CONFIG)
    return [start * factor**k for k in range(count)]


@click.group()
def main():
    """Sign-change analysis and spectral scaling for polynomial potentials."""


@main.command("check-psi")
@click.option("--phi", required=True, help="potential expression in x, y")
@click.option("--alpha", type=float, default=DEFAULT_ALPHA, show_default=True)
@click.option("--box", type=float, default=DEFAULT_BOX, show_default=True)
@click.option("--samples", type=int, default=DEFAULT_SAMPLES, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def cmd_check_psi(phi, alpha, box, samples, out):
    """Decide the sign-change assumptions H1/H2 on the box."""
    if alpha <= 0 or box <= 0 or samples < 33:
        click.echo("error: alpha, box must be positive; samples >= 33", err=True)
        sys.exit(EXIT_CONFIG)
    poly = _parse_phi(phi)
    delta = Fraction(box)
    h1 = check_h1(poly, (delta, delta), alpha, samples)
    h2 = check_h2(poly, (delta, delta), alpha, samples)
    report = {
        "schema": serialize.SCHEMA_VERSION,
        "phi": poly.render(),
        "alpha": float(alpha),
        "box": float(box),
        "h1": serialize.verdict_dict(h1),
        "h2": serialize.verdict_dict(h2),
    }
    _emit(serialize.dumps(report), out)
    statuses = {h1.status, h2.status}
    # the subellipticity theorem assumes H1 or H2, so either suffices
    if "holds" in statuses:
        return
    if statuses == {"fails"}:
        sys.exit(EXIT_FAILS)
    sys.exit(EXIT_UNDECIDED)


@main.command("quantities")
@click.option("--phi", required=True)
@click.option("--x0", type=float, default=0.0, show_default=True)
@click.option("--y0", type=float, default=0.0, show_default=True)
@click.option("--lam", type=float, default=1.0, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def cmd_quantities(phi, x0, y0, lam, out):
    """Evaluate the derivative sums and finite-type data at a point."""
    poly = _parse_phi(phi)
    if lam <= 0:
        click.echo("error: lam must be positive", err=True)
        sys.exit(EXIT_CONFIG)
    ctx = QuantityContext(poly, lam)
    k = finite_type_order_x(poly)
    report = {
        "schema": serialize.SCHEMA_VERSION,
        "phi": poly.render(),
        "lambda": float(lam),
        "point": [float(x0), float(y0)],
        "m1": m1(ctx, x0, y0),
        "m2": m2(ctx, x0, y0),
        "g": g(ctx, x0, y0),
        "finite_type_order": k,
        "in_n1": in_n1(ctx, Fraction(y0)),
        "in_n2": in_n2(ctx, Fraction(x0)),
    }
    _emit(serialize.dumps(report), out)


@main.command("eig")
@click.option("--phi", required=True)
@click.option("--lam", type=float, default=DEFAULT_LAMBDA_START, show_default=True)
@click.option("--box", type=float, default=DEFAULT_BOX, show_default=True)
@click.option("--grid-n", type=int, default=64, show_default=True)
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def cmd_eig(phi, lam, box, grid_n, tol, out):
    """Smallest eigenvalue of the discretized quadratic form."""
    poly = _parse_phi(phi)
    grid = GridSpec(box, grid_n)
    K = assemble_witten(poly, lam, grid)
    try:
        res = min_eig(K, tol=tol)
    except NoConvergence as exc:
        res = exc.best
    report = {
        "schema": serialize.SCHEMA_VERSION,
        "phi": poly.render(),
        "lambda": float(lam),
        "n": grid_n,
        "mu_min": res.mu,
        "residual": res.residual,
        "iterations": res.iterations,
        "converged": res.converged,
    }
    _emit(serialize.dumps(report), out)
    if not res.converged:
        sys.exit(EXIT_NO_CONVERGENCE)


def _sweep_options(fn):
    for deco in reversed(
        [
            click.option("--box", type=float, default=DEFAULT_BOX, show_default=True),
            click.option(
                "--lambda-start", type=float, default=DEFAULT_LAMBDA_START,
                show_default=True,
            ),
            click.option(
                "--lambda-factor", type=float, default=DEFAULT_LAMBDA_FACTOR,
                show_default=True,
            ),
            click.option(
                "--lambda-count", type=int, default=DEFAULT_LAMBDA_COUNT,
                show_default=True,
            ),
            click.option("--grid-n", type=int, default=None,
                         help="fix the grid size, bypassing refinement"),
            click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True),
            click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True),
        ]
    ):
        fn = deco(fn)
    return fn


def _run_sweep(poly, box, lambda_start, lambda_factor, lambda_count, grid_n, tol):
    lambdas = _lambda_schedule(lambda_start, lambda_factor, lambda_count)
    policy = GridPolicy(delta=box, eig_tol=tol, fixed_n=grid_n)
    return sweep(poly, lambdas, policy)


@main.command("sweep")
@click.option("--phi", required=True)
@_sweep_options
@click.option("--out", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv",
              show_default=True)
def cmd_sweep(phi, box, lambda_start, lambda_factor, lambda_count, grid_n, tol,
              seed, out, fmt):
    """Lambda sweep of the smallest eigenvalue, plus a log-log fit."""
    poly = _parse_phi(phi)
    records = _run_sweep(
        poly, box, lambda_start, lambda_factor, lambda_count, grid_n, tol
    )
    try:
        fit = fit_exponent(records)
        fit_obj = serialize.fit_dict(fit)
    except InsufficientData as exc:
        fit_obj = {"schema": serialize.SCHEMA_VERSION, "error": str(exc)}
    if fmt == "csv":
        text = "\n".join(
            serialize.sweep_csv_rows(records) + [serialize.dumps(fit_obj)]
        )
    else:
        text = serialize.dumps(
            {
                "schema": serialize.SCHEMA_VERSION,
                "phi": poly.render(),
                "seed": seed,
                "records": [
                    {
                        "lambda": r.lam,
                        "mu_min": r.mu_min,
                        "n_used": r.n_used,
                        "converged": r.converged,
                        "residual": r.residual,
                    }
                    for r in records
                ],
                "fit": fit_obj,
            }
        )
    _emit(text, out)
    if out:
        # two-column data file for log-log plotting
        with open(str(out) + ".dat", "w", encoding="utf-8") as fh:
            for r in records:
                fh.write(f"{r.lam:.12e} {r.mu_min:.12e}\n")
    if any(not r.converged for r in records):
        sys.exit(EXIT_NO_CONVERGENCE)


@main.command("report")
@click.option("--phi", required=True)
@_sweep_options
@click.option("--out", type=click.Path(), required=True,
              help="output prefix; writes .csv, .dat, .json and .png")
def cmd_report(phi, box, lambda_start, lambda_factor, lambda_count, grid_n, tol,
               seed, out):
    """Full sweep report: delimited data plus a rendered figure."""
    from .plots import render_sweep_figure

    poly = _parse_phi(phi)
    records = _run_sweep(
        poly, box, lambda_start, lambda_factor, lambda_count, grid_n, tol
    )
    fit = None
    try:
        fit = fit_exponent(records)
        fit_obj = serialize.fit_dict(fit)
    except InsufficientData as exc:
        fit_obj = {"schema": serialize.SCHEMA_VERSION, "error": str(exc)}
    with open(out + ".csv", "w", encoding="utf-8") as fh:
        fh.write("\n".join(serialize.sweep_csv_rows(records)) + "\n")
    with open(out + ".dat", "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(f"{r.lam:.12e} {r.mu_min:.12e}\n")
    with open(out + ".json", "w", encoding="utf-8") as fh:
        fh.write(serialize.dumps(fit_obj) + "\n")
    render_sweep_figure(records, fit, poly.render(), out + ".png")
    click.echo(f"report written to {out}.{{csv,dat,json,png}}")
    if any(not r.converged for r in records):
        sys.exit(EXIT_NO_CONVERGENCE)


@main.group("catalog")
def cmd_catalog():
    """Inspect or run the built-in example potentials."""


@cmd_catalog.command("list")
def catalog_list():
    for entry in catalog_mod.ENTRIES:
        exp = (
            f"slope~{entry.expected_exponent:.4f}"
            if entry.expected_exponent is not None
            else "slope unpinned"
        )
        click.echo(
            f"{entry.name:12s} {entry.potential:22s} "
            f"h1={entry.expected_h1:8s} {exp}  # {entry.note}"
        )


@cmd_catalog.command("run")
@click.argument("name")
@click.option("--alpha", type=float, default=DEFAULT_ALPHA, show_default=True)
@click.option("--box", type=float, default=None,
              help="override the entry's own box half-width")
@click.option("--samples", type=int, default=DEFAULT_SAMPLES, show_default=True)
@click.option("--lambda-count", type=int, default=None,
              help="override the entry's own schedule length",
              show_default=True)
@click.option("--skip-sweep", is_flag=True, help="only run the H1 check")
def catalog_run(name, alpha, box, samples, lambda_count, skip_sweep):
    """Re-verify one catalog entry against its expected fields."""
    try:
        entry = catalog_mod.by_name(name)
    except KeyError:
        click.echo(f"error: no catalog entry named {name!r}", err=True)
        sys.exit(EXIT_CONFIG)
    poly = entry.poly()
    box = entry.box if box is None else box
    lambda_count = entry.lambda_count if lambda_count is None else lambda_count
    delta = Fraction(box)
    verdict = check_h1(poly, (delta, delta), alpha, samples)
    ok = verdict.status == entry.expected_h1
    click.echo(
        f"h1: got {verdict.status}, expected {entry.expected_h1} "
        f"-> {'pass' if ok else 'FAIL'}"
    )
    if not skip_sweep and entry.exponent_band is not None:
        records = _run_sweep(
            poly, box, DEFAULT_LAMBDA_START, DEFAULT_LAMBDA_FACTOR,
            lambda_count, None, DEFAULT_TOL,
        )
        try:
            fit = fit_exponent(records)
            lo, hi = entry.exponent_band
            fit_ok = lo <= fit.slope <= hi
            click.echo(
                f"sweep: slope {fit.slope:.4f}, band [{lo}, {hi}] "
                f"-> {'pass' if fit_ok else 'FAIL'}"
            )
            ok = ok and fit_ok
        except InsufficientData as exc:
            click.echo(f"sweep: {exc} -> FAIL")
            ok = False
    if not ok:
        sys.exit(EXIT_EXPECTATION_MISMATCH)
    click.echo("pass")


if __name__ == "__main__":
    main()
