"""Command-line interface: ingestion, verification orchestration, CSV/JSON emission.

Exit codes: 0 all checks pass, 1 a check or numerical run failed, 2 the
input could not be parsed.
"""
from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import fields, moduli, nahm, spectral, verification
from .fields import ExplicitHiggsField, extract_data, model_field
from .moduli import ConnectionData, HiggsData, connection_to_higgs
from .serialize import SpecError, data_from_dict, data_to_dict, realization_from_dict

PARSE_ERROR = 2
CHECK_FAILURE = 1


def _fail_parse(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(PARSE_ERROR)


def _load_spec(path: str) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        _fail_parse(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        _fail_parse(f"{path} is not valid JSON: {exc}")
    if not isinstance(obj, dict):
        _fail_parse(f"{path}: top-level value must be an object")
    return obj


def _load_data(path: str):
    obj = _load_spec(path)
    try:
        data = data_from_dict(obj)
        realization = realization_from_dict(obj.get("realization"))
    except SpecError as exc:
        _fail_parse(str(exc))
    return data, realization


def _realize(data, realization) -> tuple[ExplicitHiggsField, HiggsData]:
    """Explicit field for a datum: the diagonal model or a conjugated variant.

    The returned HiggsData is re-extracted from the field and is the ground
    truth for spectral comparisons.
    """
    hd = connection_to_higgs(data) if isinstance(data, ConnectionData) else data
    field, extracted = model_field(hd)
    if realization["mode"] == "diagonal":
        return field, extracted
    rng = np.random.default_rng(realization["seed"])
    residues = np.empty_like(field.residues)
    for j in range(field.punctures.size):
        g = fields._well_conditioned(rng, field.rank)
        residues[j] = g @ field.residues[j] @ np.linalg.inv(g)
    conj = ExplicitHiggsField(field.a_diag, field.punctures, residues, field.weights)
    return conj, extract_data(conj, weights=field.weights, degree=hd.degree)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def emit_csv(branches, destination) -> None:
    """Branch samples as CSV, rows ordered by path index then branch label."""
    destination.write("xi_re,xi_im,branch,q_re,q_im,coker_dim\n")
    if not branches:
        return
    n_samples = len(branches[0].samples)
    for i in range(n_samples):
        for b, br in enumerate(branches):
            xi, q = br.samples[i]
            dim = br.coker_dims[i]
            destination.write(
                f"{_fmt(xi.real)},{_fmt(xi.imag)},{b},{_fmt(q.real)},{_fmt(q.imag)},{dim}\n"
            )


def _echo_report(report: verification.VerificationReport) -> bool:
    for c in report.checks:
        status = "PASS" if c.ok else "FAIL"
        line = f"[{status}] {report.suite} :: {c.name} (residual {c.residual:.3e}, tol {c.tol:.3e})"
        if c.detail:
            line += f" -- {c.detail}"
        click.echo(line)
    return report.ok


@click.group()
def main():
    """Nahm transform of singularity data: transform, verify, scan."""


@main.command()
@click.argument("spec", type=click.Path())
@click.option("--out", type=click.Path(), default=None, help="Write the JSON report here instead of stdout.")
def transform(spec, out):
    """Transform the datum in SPEC and emit a JSON report."""
    data, _ = _load_data(spec)
    try:
        report = nahm.transform_report(data)
    except nahm.TransformError as exc:
        click.echo(f"transform failed: {exc}", err=True)
        sys.exit(CHECK_FAILURE)
    payload = {
        "input": data_to_dict(report.input),
        "output": data_to_dict(report.output),
        "r_hat": report.r_hat,
        "induced_degree": report.induced_degree,
        "transformed_degree": report.transformed_degree,
        "induced_weights": list(report.induced_weights),
        "hypothesis_preserved": report.hypothesis_preserved,
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w") as fh:
            fh.write(text)


@main.command()
@click.argument("spec", type=click.Path())
def involution(spec):
    """Check transform^2 = pullback under z -> -z on the datum in SPEC."""
    data, _ = _load_data(spec)
    report = nahm.involution_check(data)
    if report.precondition_failure:
        click.echo(f"[FAIL] involution :: precondition failed -- {report.precondition_failure}")
        sys.exit(CHECK_FAILURE)
    status = "PASS" if report.ok else "FAIL"
    click.echo(
        f"[{status}] involution :: transform^2 = (-1)-pullback "
        f"(residual {report.residual:.3e}, rank recovered: {report.rank_recovered})"
    )
    sys.exit(0 if report.ok else CHECK_FAILURE)


@main.command()
@click.argument("spec", type=click.Path(), required=False)
@click.option("--count", type=int, default=200, show_default=True, help="Random instances per suite.")
@click.option("--seed", type=int, default=0, envvar="NAHMKIT_SEED", show_default=True)
def verify(spec, count, seed):
    """Run the invariant suites on SPEC, or on a random corpus without it."""
    if spec is not None:
        data, _ = _load_data(spec)
        reports = [verification.instance_suite(data)]
    else:
        reports = verification.full_corpus_suites(count, seed)
    ok = all([_echo_report(r) for r in reports])
    total = sum(len(r.checks) for r in reports)
    passed = sum(1 for r in reports for c in r.checks if c.ok)
    click.echo(f"{passed}/{total} checks passed")
    sys.exit(0 if ok else CHECK_FAILURE)


@main.command(name="spectral-scan")
@click.argument("spec", type=click.Path())
@click.option("--xi-path", default=None, help="Semicolon-separated xi nodes, each 're,im'.")
@click.option("--around", type=int, default=None, help="Infinity-group index to approach.")
@click.option("--radii", default="1e-2,1e-3,1e-4", show_default=True, help="Approach radii for --around.")
@click.option("--out", type=click.Path(), default=None, help="CSV destination (default stdout).")
def spectral_scan(spec, xi_path, around, radii, out):
    """Track spectral branches along a xi-path and emit CSV."""
    data, realization = _load_data(spec)
    field, _ = _realize(data, realization)
    if (xi_path is None) == (around is None):
        _fail_parse("exactly one of --xi-path and --around is required")
    if xi_path is not None:
        try:
            path = [complex(*map(float, node.split(","))) for node in xi_path.split(";") if node]
        except (TypeError, ValueError):
            _fail_parse(f"--xi-path {xi_path!r} is not a ';'-separated list of 're,im' pairs")
        if not path:
            _fail_parse("--xi-path is empty")
    else:
        if not 0 <= around < len(data.inf_groups):
            _fail_parse(f"--around {around} out of range (datum has {len(data.inf_groups)} infinity groups)")
        try:
            rr = sorted(float(t) for t in radii.split(","))
        except ValueError:
            _fail_parse(f"--radii {radii!r} is not a comma-separated list of numbers")
        if not rr or rr[0] <= 0:
            _fail_parse("--radii must be positive")
        center = data.inf_groups[around].xi
        nodes, _ = spectral._geometric_path(center, rr[-1], rr[0], np.exp(0.37j))
        extra = [center + rho * np.exp(0.37j) for rho in rr]
        path = sorted(set(nodes) | set(extra), key=lambda x: -abs(x - center))
    try:
        branches = spectral.track_branches(field, path)
    except spectral.SpectralError as exc:
        click.echo(f"spectral scan failed: {exc}", err=True)
        sys.exit(CHECK_FAILURE)
    if out is None:
        emit_csv(branches, sys.stdout)
    else:
        with open(out, "w") as fh:
            emit_csv(branches, fh)


@main.command(name="local-check")
@click.argument("spec", type=click.Path())
@click.option("--count", type=int, default=1000, show_default=True, help="Random gauge-identity samples.")
@click.option("--seed", type=int, default=0, envvar="NAHMKIT_SEED", show_default=True)
def local_check(spec, count, seed):
    """Polar-model decomposition and gauge identity for the datum in SPEC."""
    data, _ = _load_data(spec)
    cd = data if isinstance(data, ConnectionData) else moduli.higgs_to_connection(data)
    worst_decomp = 0.0
    for lp in cd.log_points:
        for e in lp.entries:
            models = fields.local_models_at(e.value, e.weight, picture="connection")
            worst_decomp = max(worst_decomp, (models.d_full - (models.d_plus + models.phi)).max_abs())
    rng = np.random.default_rng(seed)
    worst_gauge = 0.0
    for _ in range(count):
        omega = fields.LocalForm(*(complex(a, b) for a, b in rng.uniform(-3, 3, size=(4, 2))))
        xi = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        worst_gauge = max(worst_gauge, fields.gauge_relation_check(omega, xi, z))
    ok_decomp = worst_decomp <= 1e-12
    ok_gauge = worst_gauge <= 1e-14
    click.echo(f"[{'PASS' if ok_decomp else 'FAIL'}] local :: D = D+ + Phi (residual {worst_decomp:.3e}, tol 1e-12)")
    click.echo(f"[{'PASS' if ok_gauge else 'FAIL'}] local :: gauge relation (residual {worst_gauge:.3e}, tol 1e-14)")
    sys.exit(0 if ok_decomp and ok_gauge else CHECK_FAILURE)


if __name__ == "__main__":
    main()
