"""Script execution, JSON run reports, parameter sweeps, and demo scripts.

Statements run in order on the evolving state: beams advance it, verify
statements record a predicted light variance, asserts and reports evaluate
against the state at their position. A run is deterministic given (script,
seed): the JSON report is byte-identical apart from its timestamp.
"""

from __future__ import annotations

import csv
import io
import json
import re
import string
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np

from . import dsl
from ._version import __version__
from .criteria import (
    cluster_nullifier_variances,
    duan_test,
    ghz_pairwise_test,
    log_negativity,
    odd_scheme_test,
    vacuum_nullifier_variances,
    vlf_test,
)
from .gaussian import GaussianState, NumericalError, vacuum_state, variance_of
from .graphs import Graph, path_graph
from .interface import Beam, apply_beam, make_samples, verification_variance
from .protocols import (
    build_cluster,
    build_epr,
    build_eraser,
    build_ghz_generic,
    eraser_kappa2,
    protocol_to_script,
)

STATUS_EXIT = {
    "ok": 0,
    "assert_failed": 1,
    "script_error": 2,
    "numerical_error": 3,
}


class RunError(RuntimeError):
    """A script failed during execution (numerical trouble, bad state)."""


def _term_vector(state: GaussianState, terms, orientations) -> np.ndarray:
    vec = np.zeros(state.dim)
    for sign, target, quad in terms:
        sids = range(1, state.n_modes + 1) if target == "*" else (target,)
        for sid in sids:
            if quad == "y":
                vec[2 * (sid - 1)] += sign
            else:
                vec[2 * (sid - 1) + 1] += sign * orientations[sid - 1]
    return vec


def evaluate_report(stmt, state: GaussianState, orientations) -> float:
    if isinstance(stmt, dsl.ReportVar):
        return float(variance_of(state, _term_vector(state, stmt.terms, orientations)))
    if isinstance(stmt, dsl.ReportNegativity):
        return float(log_negativity(state, stmt.samples))
    raise TypeError(f"not a report statement: {stmt!r}")


def evaluate_assert(stmt, state: GaussianState, orientations) -> dict:
    """Evaluate one assert statement into a JSON-ready dict with `passed`."""
    if isinstance(stmt, dsl.AssertDuan):
        rep = duan_test(state, (stmt.i, stmt.j), stmt.lam, stmt.signs, orientations,
                        stmt.tol)
        passed = rep.violated == (stmt.expect == "violated")
        return {
            "kind": "duan", "pair": [stmt.i, stmt.j], "lambda": stmt.lam,
            "signs": list(stmt.signs), "lhs": rep.lhs, "bound": rep.bound,
            "violated": rep.violated, "expect": stmt.expect, "tol": stmt.tol,
            "passed": passed,
        }
    if isinstance(stmt, dsl.AssertPairwise):
        rep = ghz_pairwise_test(state, stmt.i, stmt.j, orientations, stmt.tol)
        passed = rep.violated == (stmt.expect == "violated")
        return {
            "kind": "pairwise", "pair": [stmt.i, stmt.j], "lhs": rep.lhs,
            "bound": rep.bound, "violated": rep.violated, "expect": stmt.expect,
            "tol": stmt.tol, "passed": passed,
        }
    if isinstance(stmt, dsl.AssertOdd):
        rep = odd_scheme_test(state, orientations, stmt.tol)
        passed = rep.violated == (stmt.expect == "violated")
        return {
            "kind": "odd", "lhs": rep.lhs, "bound": rep.bound,
            "violated": rep.violated, "expect": stmt.expect, "tol": stmt.tol,
            "passed": passed,
        }
    if isinstance(stmt, dsl.AssertVlf):
        rep = vlf_test(state, stmt.h, stmt.g, stmt.side_a, orientations, stmt.tol)
        passed = rep.violated == (stmt.expect == "violated")
        return {
            "kind": "vlf", "h": list(stmt.h), "g": list(stmt.g),
            "side_a": list(stmt.side_a), "lhs": rep.lhs, "bound": rep.bound,
            "violated": rep.violated, "expect": stmt.expect, "tol": stmt.tol,
            "passed": passed,
        }
    if isinstance(stmt, dsl.AssertNegativity):
        value = log_negativity(state, stmt.samples)
        passed = value <= stmt.tol if stmt.expect == "zero" else value > stmt.tol
        return {
            "kind": "negativity", "samples": list(stmt.samples), "value": value,
            "expect": stmt.expect, "tol": stmt.tol, "passed": passed,
        }
    if isinstance(stmt, dsl.AssertNullifiers):
        graph = Graph(state.n_modes, stmt.edges)
        measured = cluster_nullifier_variances(state, graph, stmt.rotated)
        vacuum = vacuum_nullifier_variances(graph)
        if stmt.expect == "below_vacuum":
            passed = all(v < ref - stmt.tol
                         for (_, v), (_, ref) in zip(measured, vacuum))
        else:
            passed = all(abs(v - ref) <= stmt.tol
                         for (_, v), (_, ref) in zip(measured, vacuum))
        return {
            "kind": "nullifiers", "edges": [list(e) for e in stmt.edges],
            "rotated": stmt.rotated,
            "variances": [[a, v] for a, v in measured],
            "vacuum": [[a, v] for a, v in vacuum],
            "expect": stmt.expect, "tol": stmt.tol, "passed": passed,
        }
    raise TypeError(f"not an assert statement: {stmt!r}")


def run_script(script: dsl.Script, seed: int = 0) -> dict:
    """Execute a parsed script and return the JSON-ready run report."""
    decl = script.samples
    orientations = script.orientations
    samples = make_samples(orientations)
    state = vacuum_state(decl.count)
    rng = np.random.default_rng(seed)

    outcomes: list[float | None] = []
    predictions: list[float] = []
    variances: dict[str, float] = {}
    negativities: dict[str, float] = {}
    asserts: list[dict] = []
    beam_index = 0
    for stmt in script.statements:
        try:
            if isinstance(stmt, dsl.SamplesStmt):
                continue
            if isinstance(stmt, dsl.BeamStmt):
                beam_index += 1
                beam = Beam(stmt.kappa, stmt.passes, stmt.measure, stmt.pin, stmt.seed)
                state, outcome = apply_beam(state, beam, samples, rng=rng)
                outcomes.append(None if outcome is None else float(outcome))
            elif isinstance(stmt, dsl.VerifyStmt):
                beam = Beam(stmt.kappa, stmt.passes)
                predictions.append(float(verification_variance(state, beam, samples)))
            elif isinstance(stmt, (dsl.ReportVar, dsl.ReportNegativity)):
                name = dsl.report_name(stmt)
                value = evaluate_report(stmt, state, orientations)
                if isinstance(stmt, dsl.ReportVar):
                    variances[name] = value
                else:
                    negativities[name] = value
            else:
                asserts.append(evaluate_assert(stmt, state, orientations))
        except NumericalError as exc:
            raise RunError(f"beam {beam_index}: {exc}") from exc

    status = "ok" if all(item["passed"] for item in asserts) else "assert_failed"
    return {
        "schema": 1,
        "version": __version__,
        "seed": int(seed),
        "n_samples": decl.count,
        "orientations": list(orientations),
        "outcomes": outcomes,
        "predictions": predictions,
        "variances": variances,
        "negativities": negativities,
        "asserts": asserts,
        "status": status,
        "final_mean": [float(v) for v in state.mean],
        "final_cov": [[float(v) for v in row] for row in state.cov],
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def report_to_json(report: dict) -> str:
    """Canonical JSON text (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def execute_text(text: str, seed: int = 0):
    """Parse and run script text.

    Returns (status, report or None, error message or None) with status one
    of the STATUS_EXIT keys.
    """
    try:
        script = dsl.parse_script(text)
    except dsl.ScriptError as exc:
        return "script_error", None, str(exc)
    try:
        report = run_script(script, seed)
    except (RunError, NumericalError) as exc:
        return "numerical_error", None, str(exc)
    return report["status"], report, None


def check_text(text: str):
    """Parse only. Returns (status, statement count or None, error or None)."""
    try:
        script = dsl.parse_script(text)
    except dsl.ScriptError as exc:
        return "script_error", None, str(exc)
    return "ok", len(script.statements), None


_AXIS_RE = re.compile(
    r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*([^:,]+):([^:,]+):(\d+)\s*$"
)


def parse_grid(spec: str) -> list[tuple[str, np.ndarray]]:
    """Parse `name=lo:hi:count` axes (comma separated) into linspace arrays."""
    if not isinstance(spec, str) or not spec.strip():
        raise dsl.ScriptError("empty grid spec")
    axes: list[tuple[str, np.ndarray]] = []
    seen = set()
    for part in spec.split(","):
        m = _AXIS_RE.match(part)
        if not m:
            raise dsl.ScriptError(f"bad grid axis {part!r} (want name=lo:hi:count)")
        name, lo_s, hi_s, count_s = m.groups()
        if name in seen:
            raise dsl.ScriptError(f"duplicate grid axis {name!r}")
        seen.add(name)
        try:
            lo, hi = float(lo_s), float(hi_s)
        except ValueError:
            raise dsl.ScriptError(f"bad grid bounds in {part!r}") from None
        count = int(count_s)
        if count < 1:
            raise dsl.ScriptError(f"grid axis {name!r} needs at least one point")
        axes.append((name, np.linspace(lo, hi, count)))
    return axes


def _format_param(value: float) -> str:
    value = float(value)
    return str(int(value)) if value.is_integer() else repr(value)


def _fill_template(text: str, mapping: dict[str, str]) -> str:
    try:
        return string.Template(text).substitute(mapping)
    except KeyError as exc:
        raise dsl.ScriptError(
            f"script template references undefined ${exc.args[0]}"
        ) from None
    except ValueError as exc:
        raise dsl.ScriptError(f"bad template placeholder: {exc}") from None


def _point_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence((int(seed), index)).generate_state(1)[0])


def sweep_csv(template_text: str, grid: str, seed: int = 0,
              jobs: int = 1) -> tuple[str, bool]:
    """Run the script template over the cartesian parameter grid.

    Returns (CSV text, any assert failed). One row per grid point in grid
    index order (last axis fastest); columns are the parameters followed by
    the script's report names; floats use 17 significant digits.
    """
    axes = parse_grid(grid)
    names = [name for name, _ in axes]
    points = [()]
    for _, values in axes:
        points = [combo + (float(v),) for combo in points for v in values]

    def run_point(item):
        index, combo = item
        mapping = {name: _format_param(v) for name, v in zip(names, combo)}
        text = _fill_template(template_text, mapping)
        status, report, error = execute_text(text, _point_seed(seed, index))
        return index, combo, status, report, error

    items = list(enumerate(points))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_point, items))
    else:
        results = [run_point(item) for item in items]

    any_failed = False
    columns: list[str] | None = None
    rows = []
    for index, combo, status, report, error in results:
        if status == "script_error":
            raise dsl.ScriptError(f"grid point {index}: {error}")
        if status == "numerical_error":
            raise RunError(f"grid point {index}: {error}")
        if status == "assert_failed":
            any_failed = True
        point_columns = list(report["variances"]) + list(report["negativities"])
        if columns is None:
            columns = point_columns
        elif columns != point_columns:
            raise dsl.ScriptError("report names differ across grid points")
        values = {**report["variances"], **report["negativities"]}
        rows.append([f"{v:.17g}" for v in combo]
                    + [f"{values[name]:.17g}" for name in columns])

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(names + (columns or []))
    writer.writerows(rows)
    return out.getvalue(), any_failed


DEMO_NAMES = ("epr", "eraser", "ghz", "cluster")


def demo_protocol(name: str):
    if name == "epr":
        return build_epr(1.0)
    if name == "eraser":
        return build_eraser(1.0, eraser_kappa2(1.0, 2), 2)
    if name == "ghz":
        return build_ghz_generic(3, 1.0)
    if name == "cluster":
        return build_cluster(path_graph(4), 1.0, rotated=True)
    raise KeyError(name)


def demo_script_text(name: str) -> str:
    """Built-in example scripts, printed from their builders."""
    return dsl.script_to_text(protocol_to_script(demo_protocol(name)))
