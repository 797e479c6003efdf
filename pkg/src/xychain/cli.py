"""Command-line front end: point queries, scans, figure data, acceptance."""

from __future__ import annotations

import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import click
import numpy as np

from . import __version__, acceptance
from .correlators import correlator_set
from .entanglement import (
    FitError,
    PositivityError,
    RangeStatus,
    UndeterminedError,
    concurrence,
    concurrence_at,
    concurrence_profile,
    concurrence_range,
    second_order_cr,
    tangles,
    xi2se,
)
from .expansions import DomainError, Oracle, evaluate
from .gfunction import DEFAULT_TOL, GTable, QuadratureFailure
from .model import ModelPoint

NUMERICAL_ERRORS = (QuadratureFailure, PositivityError, FitError, UndeterminedError)


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _write_csv(out, header_lines: list[str], columns: list[str], rows) -> None:
    """CSV with a '#' header block; deterministic float formatting."""

    def emit(fh):
        fh.write(f"# xychain {__version__}\n")
        for line in header_lines:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])

    if out:
        with open(out, "w") as fh:
            emit(fh)
        click.echo(f"wrote {out}")
    else:
        emit(sys.stdout)


def _point_from_flags(gamma, h, eps, side) -> ModelPoint:
    if h is not None and eps is not None:
        raise click.UsageError("give either --h or --eps, not both")
    if h is None and eps is None:
        raise click.UsageError("one of --h or --eps is required")
    try:
        if h is not None:
            return ModelPoint(gamma, h)
        return ModelPoint.from_eps(gamma, eps, side)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _handle_numerics(exc: Exception) -> None:
    click.echo(f"numerical-failure: {type(exc).__name__}: {exc}", err=True)
    sys.exit(3)


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Pairwise entanglement of the infinite transverse-field XY chain."""


@main.command()
@click.option("--gamma", type=float, required=True, help="anisotropy in [0, 1]")
@click.option("--h", type=float, default=None, help="transverse field")
@click.option("--eps", type=float, default=None, help="distance |h - h_f| from the factorizing field")
@click.option("--side", type=click.Choice(["above", "below"]), default="above")
@click.option("--rmax", type=int, default=10, show_default=True)
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def point(gamma, h, eps, side, rmax, tol, out):
    """Correlators, concurrences and tangles at one (gamma, h)."""
    pt = _point_from_flags(gamma, h, eps, side)
    try:
        table = GTable.build(pt, rmax + 1, tol)
        rows = []
        for r in range(1, rmax + 1):
            cs = correlator_set(pt, r, table, mx2=0.0)
            entry = concurrence(cs)
            rows.append(
                [pt.gamma, pt.h, r, cs.gxx, cs.gyy, cs.gzz, cs.mz,
                 entry.C, entry.channel.value]
            )
        rep = tangles(pt, table=table, r_max=max(rmax, 80), tol=tol)
    except NUMERICAL_ERRORS as exc:
        _handle_numerics(exc)
    header = [
        f"point gamma={_fmt(pt.gamma)} h={_fmt(pt.h)} rmax={rmax} tol={_fmt(tol)}",
        f"tau1={_fmt(rep.tau1)} tau2={_fmt(rep.tau2)} "
        f"residual={_fmt(rep.residual)} ratio={_fmt(rep.ratio)}",
        f"regime={pt.regime.value} lower_bound={rep.lower_bound_flag}",
    ]
    _write_csv(out, header, ["gamma", "h", "r", "gxx", "gyy", "gzz", "mz", "C", "channel"], rows)


def _scan_one(args):
    gamma, h, rmax, tol = args
    pt = ModelPoint(gamma, h)
    table = GTable.build(pt, rmax + 1, tol)
    rows = []
    for r in range(1, rmax + 1):
        cs = correlator_set(pt, r, table, mx2=0.0)
        entry = concurrence(cs)
        rows.append(
            [gamma, h, r, cs.gxx, cs.gyy, cs.gzz, cs.mz, entry.C, entry.channel.value]
        )
    return rows


def _float_list(text: str, flag: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise click.UsageError(f"{flag} expects a comma-separated list of numbers")
    if not values:
        raise click.UsageError(f"{flag} must be non-empty")
    return values


@main.command()
@click.option("--gamma", required=True, help="comma-separated anisotropy grid")
@click.option("--h", default=None, help="comma-separated field grid")
@click.option("--eps", default=None, help="comma-separated eps grid (with --side)")
@click.option("--side", type=click.Choice(["above", "below"]), default="above")
@click.option("--rmax", type=int, default=10, show_default=True)
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def scan(gamma, h, eps, side, rmax, tol, jobs, out):
    """Correlators and concurrences over a (gamma, h) grid."""
    gammas = _float_list(gamma, "--gamma")
    if (h is None) == (eps is None):
        raise click.UsageError("give exactly one of --h or --eps")
    if h is not None:
        hs_of = lambda g: _float_list(h, "--h")
    else:
        eps_vals = _float_list(eps, "--eps")
        hs_of = lambda g: [ModelPoint.from_eps(g, e, side).h for e in eps_vals]
    try:
        tasks = [(g, hv, rmax, tol) for g in gammas for hv in hs_of(g)]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                chunks = list(pool.map(_scan_one, tasks))
        else:
            chunks = [_scan_one(t) for t in tasks]
    except NUMERICAL_ERRORS as exc:
        _handle_numerics(exc)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    rows = [row for chunk in chunks for row in chunk]
    header = [f"scan rmax={rmax} tol={_fmt(tol)} jobs={jobs}"]
    _write_csv(out, header, ["gamma", "h", "r", "gxx", "gyy", "gzz", "mz", "C", "channel"], rows)


def _fig1(tol):
    rows = []
    for g in np.linspace(0.0, 1.0, 21):
        for hv in np.linspace(0.0, 2.0, 21):
            entry = concurrence_at(ModelPoint(float(g), float(hv)), 1, tol=tol)
            rows.append([float(g), float(hv), entry.C, entry.channel.value])
    return (
        ["nearest-neighbour concurrence and winning channel over the (gamma, h) plane"],
        ["gamma", "h", "C1", "channel"],
        rows,
    )


def _fig2(tol):
    gamma = 0.5
    rows = []
    for r in (1, 2, 3):
        for e in np.logspace(-4, -1, 25):
            pt = ModelPoint.from_eps(gamma, float(e), "above")
            c = concurrence_at(pt, r, tol=tol).C
            first = evaluate(Oracle.CR_FIRST, gamma=gamma, eps=float(e), r=r)
            second = second_order_cr(gamma, float(e), r)
            rows.append([float(e), r, c, first, second])
    return (
        [f"gamma={gamma}: numeric C_r vs first- and second-order series, h above h_f"],
        ["eps", "r", "C_numeric", "C_first_order", "C_second_order"],
        rows,
    )


def _fig3(tol):
    rows = []
    for r in range(1, 8):
        for hv in np.linspace(0.0, 1.2, 49):
            c = concurrence_at(ModelPoint(0.0, float(hv)), r, tol=tol).C
            rows.append([float(hv), r, c])
    return (
        ["isotropic chain: C_r(h) for r = 1..7; all vanish at saturation h = 1"],
        ["h", "r", "C_r"],
        rows,
    )


def _fig4(tol):
    rows = []
    for g in np.logspace(-6, -2, 9):
        pt = ModelPoint(float(g), 1.2)
        c1 = concurrence_at(pt, 1, tol=1e-14).C
        ztol = max(1e-13, 1e-6 * c1)
        res = concurrence_range(pt, 60, zero_tol=ztol, tol=1e-14)
        rows.append([float(g), math.log(1.0 / float(g)), res.value])
    return (
        ["h=1.2: range R grows logarithmically as gamma -> 0"],
        ["gamma", "ln_inv_gamma", "R"],
        rows,
    )


def _fig5(tol):
    rows = []
    for g in (0.1, 0.08, 0.06, 0.05, 0.04, 0.03, 0.02):
        pt = ModelPoint(g, 1.0)
        res = concurrence_range(pt, int(2.5 / g) + 20, tol=tol)
        rows.append([1.0 / g, res.value])
    return (
        ["h=1: range R vs 1/gamma, linear trend"],
        ["inv_gamma", "R"],
        rows,
    )


def _fig6(tol):
    from scipy.optimize import curve_fit

    gamma = 7.5e-9
    hs = np.array([1.01, 1.02, 1.04, 1.06, 1.08, 1.12, 1.16, 1.2])
    xis = []
    for hv in hs:
        pt = ModelPoint(gamma, float(hv))
        prof = concurrence_profile(pt, 80, tol=1e-14, zero_tol=1e-13)
        xis.append(xi2se(pt, prof, zero_tol=1e-13).xi)
    law = lambda x, c0, c1, nu: c0 + c1 / (x - 1.0) ** nu
    (c0, c1, nu), _ = curve_fit(law, hs, xis, p0=(0.05, 0.7, 0.5), maxfev=20000)
    header = [
        f"gamma={gamma}: two-spin entanglement length vs h above saturation",
        f"fit xi(h) = c0 + c1/(h-1)^nu: c0={_fmt(float(c0))} "
        f"c1={_fmt(float(c1))} nu={_fmt(float(nu))}",
    ]
    return (header, ["h", "xi"], [[float(hv), x] for hv, x in zip(hs, xis)])


_FIGURES = {1: _fig1, 2: _fig2, 3: _fig3, 4: _fig4, 5: _fig5, 6: _fig6}


@main.command()
@click.argument("n", type=click.IntRange(1, 6))
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def figure(n, tol, out):
    """Regenerate the dataset behind figure N (1..6)."""
    try:
        header, columns, rows = _FIGURES[n](tol)
    except NUMERICAL_ERRORS as exc:
        _handle_numerics(exc)
    _write_csv(out or f"fig{n}.csv", [f"figure {n}", *header, f"tol={_fmt(tol)}"], columns, rows)


@main.command(name="xi2se")
@click.option("--gamma", type=float, required=True)
@click.option("--h", type=float, default=None)
@click.option("--eps", type=float, default=None)
@click.option("--side", type=click.Choice(["above", "below"]), default="below")
@click.option("--rmax", type=int, default=60, show_default=True)
@click.option("--tol", type=float, default=1e-12, show_default=True)
def xi2se_cmd(gamma, h, eps, side, rmax, tol):
    """Two-spin entanglement length from the decay of C_r."""
    pt = _point_from_flags(gamma, h, eps, side)
    try:
        prof = concurrence_profile(pt, rmax, tol=tol)
        fit = xi2se(pt, prof)
    except NUMERICAL_ERRORS as exc:
        _handle_numerics(exc)
    click.echo(f"xi = {_fmt(fit.xi)}")
    if not math.isnan(fit.analytic_xi):
        click.echo(f"analytic 1/|ln alpha^2| = {_fmt(fit.analytic_xi)}")
    click.echo(f"fit window r in {fit.fit_window}, rms residual {_fmt(fit.fit_residual)}")


@main.command(name="range")
@click.option("--gamma", type=float, required=True)
@click.option("--h", type=float, default=None)
@click.option("--eps", type=float, default=None)
@click.option("--side", type=click.Choice(["above", "below"]), default="above")
@click.option("--rmax", type=int, default=60, show_default=True, help="search budget")
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True)
def range_cmd(gamma, h, eps, side, rmax, tol):
    """Range R of the concurrence: largest r with C_r > 0."""
    pt = _point_from_flags(gamma, h, eps, side)
    try:
        res = concurrence_range(pt, rmax, tol=tol)
    except NUMERICAL_ERRORS as exc:
        _handle_numerics(exc)
    if res.status is RangeStatus.DETERMINED:
        click.echo(f"R = {int(res.value)}")
    elif res.status is RangeStatus.INFINITE:
        click.echo(f"R > {rmax} (still positive at the search budget)")
    else:
        click.echo("R undetermined at this budget", err=True)
        sys.exit(3)


@main.command()
@click.option("--only", multiple=True, help="run a subset of criteria by name")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="JSON report path")
def accept(only, out):
    """Run the acceptance suite; nonzero exit on any criterion failure."""
    try:
        results = acceptance.run(list(only) or None)
    except KeyError as exc:
        raise click.UsageError(str(exc.args[0]))
    for res in results:
        click.echo(res.summary())
    report = {
        "version": __version__,
        "passed": all(r.passed for r in results),
        "criteria": [
            {
                "name": r.name,
                "passed": r.passed,
                "runtime_s": round(r.runtime_s, 2),
                "subresults": [
                    {"label": s.label, "passed": s.passed, "detail": s.detail}
                    for s in r.subresults
                ],
            }
            for r in results
        ],
    }
    if out:
        with open(out, "w") as fh:
            json.dump(report, fh, indent=2)
        click.echo(f"wrote {out}")
    n_fail = sum(not r.passed for r in results)
    click.echo(f"{len(results) - n_fail}/{len(results)} criteria passed")
    if n_fail:
        sys.exit(1)


if __name__ == "__main__":
    main()
