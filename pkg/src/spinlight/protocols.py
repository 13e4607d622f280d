"""Protocol builders and the closed-form variance tables they must reproduce.

A Protocol is a register of samples, an ordered list of measured or discarded
beams, a separate list of verification beams (pure predictions, never
applied, since an applied-but-unmeasured beam injects back-action noise), and
the criteria checks and variance reports it declares. Builders construct the
standard schemes; the expected_variances_* functions give the analytic values
their simulations must match exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dsl
from .gaussian import GaussianState, vacuum_state
from .graphs import Graph
from .interface import Beam, Sample, apply_beam, make_samples, verification_variance

_HALF_PI = math.pi / 2
_QUARTER_PI = math.pi / 4


@dataclass(frozen=True)
class Protocol:
    name: str
    description: str
    samples: tuple[Sample, ...]
    beams: tuple[Beam, ...]
    verification: tuple[Beam, ...] = ()
    checks: tuple = ()
    reports: tuple = ()
    warnings: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        samples = tuple(self.samples)
        ids = tuple(sample.id for sample in samples)
        if ids != tuple(range(1, len(ids) + 1)):
            raise ValueError("sample ids must be contiguous from 1")
        known = set(ids)
        beams = tuple(self.beams)
        verification = tuple(self.verification)
        for beam in beams + verification:
            for sid, _ in beam.passes:
                if sid not in known:
                    raise ValueError(f"beam passes through unknown sample {sid}")
        for beam in verification:
            if beam.measure:
                raise ValueError("verification beams carry no measurement")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "beams", beams)
        object.__setattr__(self, "verification", verification)
        object.__setattr__(self, "checks", tuple(self.checks))
        object.__setattr__(self, "reports", tuple(self.reports))
        object.__setattr__(self, "warnings", tuple(self.warnings))

    @property
    def n_samples(self) -> int:
        return len(self.samples)

    @property
    def orientations(self) -> tuple[int, ...]:
        return tuple(sample.orientation for sample in self.samples)


@dataclass(frozen=True)
class SimulationResult:
    """Final state, one outcome (or None) per beam, and one predicted light
    variance per verification beam."""

    state: GaussianState
    outcomes: tuple
    predictions: tuple[float, ...]


def simulate(protocol: Protocol, seed: int = 0,
             rng: np.random.Generator | None = None) -> SimulationResult:
    """Run the protocol's beams in order from vacuum.

    Sampled outcomes draw from `rng` (default_rng(seed) if not given); the
    covariance is outcome-independent, so the seed only moves the mean.
    """
    if rng is None:
        rng = np.random.default_rng(seed)
    state = vacuum_state(protocol.n_samples)
    outcomes = []
    for beam in protocol.beams:
        state, outcome = apply_beam(state, beam, protocol.samples, rng=rng)
        outcomes.append(outcome)
    predictions = tuple(
        verification_variance(state, beam, protocol.samples)
        for beam in protocol.verification
    )
    return SimulationResult(state, tuple(outcomes), predictions)


def expected_variances_bipartite(kappa: float) -> dict[str, float]:
    """Post-measurement variances after one joint beam on two samples."""
    k2 = float(kappa) ** 2
    return {
        "x_sum": 1.0 + 2.0 * k2,
        "x_diff": 1.0,
        "p_sum": 1.0 / (1.0 + 2.0 * k2),
        "p_diff": 1.0,
    }


def expected_variances_two_beam(kappa1: float, kappa2: float) -> dict[str, float]:
    """Variances after the second, orthogonally coupled beam of the eraser."""
    a = 2.0 * float(kappa1) ** 2 + 1.0
    k2 = float(kappa2) ** 2
    return {
        "x_sum": a / (2.0 * a * k2 + 1.0),
        "x_diff": 1.0,
        "p_sum": 2.0 * k2 + 1.0 / a,
        "p_diff": 1.0,
    }


def expected_variances_ghz(n_samples: int, kappa: float) -> dict[str, float]:
    """Total-p and pairwise x-difference variances of the N-sample scheme."""
    n = int(n_samples)
    k2 = float(kappa) ** 2
    return {
        "p_total": n / (2.0 + 2.0 * n * k2),
        "x_pair_diff": 1.0 / (1.0 + n * k2),
    }


def eraser_kappa2(kappa1: float, n_samples: int = 2) -> float:
    """Second-beam coupling that erases the first beam's entanglement.

    kappa2^2 = kappa1^2 / (1 + N kappa1^2); it decreases with the register
    size at fixed kappa1.
    """
    kappa1 = float(kappa1)
    if kappa1 < 0:
        raise ValueError("coupling must be non-negative")
    n = int(n_samples)
    if n < 2:
        raise ValueError("the eraser needs at least two samples")
    return math.sqrt(kappa1**2 / (1.0 + n * kappa1**2))


def _all_pass(n: int, angle_of) -> tuple[tuple[int, float], ...]:
    return tuple((i, angle_of(i)) for i in range(1, n + 1))


def _sum_report(n: int, quad: str) -> dsl.ReportVar:
    return dsl.ReportVar(tuple((1, i, quad) for i in range(1, n + 1)))


def _pair_reports() -> tuple[dsl.ReportStmt, ...]:
    return (
        dsl.ReportVar(((1, 1, "y"), (1, 2, "y"))),
        dsl.ReportVar(((1, 1, "y"), (-1, 2, "y"))),
        dsl.ReportVar(((1, 1, "z"), (1, 2, "z"))),
        dsl.ReportVar(((1, 1, "z"), (-1, 2, "z"))),
    )


def build_epr(kappa: float) -> Protocol:
    """One beam through both samples at alpha = 0, measured; entangles the
    pair for any kappa > 0. Verification beam at +-pi/4 with the same kappa."""
    kappa = float(kappa)
    expect = "violated" if kappa > 0 else "satisfied"
    return Protocol(
        name="epr",
        description="two samples entangled by one measured beam",
        samples=make_samples((1, 1)),
        beams=(Beam(kappa, ((1, 0.0), (2, 0.0)), measure=True),),
        verification=(Beam(kappa, ((1, _QUARTER_PI), (2, -_QUARTER_PI))),),
        checks=(dsl.AssertDuan(1, 2, 1.0, expect, signs=(-1, 1)),),
        reports=_pair_reports(),
    )


def build_two_variable_epr(kappa: float) -> Protocol:
    """EPR beam plus a second beam at (+pi/2, -pi/2) squeezing the x
    difference; the p sum keeps its single-beam value."""
    kappa = float(kappa)
    expect = "violated" if kappa > 0 else "satisfied"
    return Protocol(
        name="two_variable_epr",
        description="both spin variables squeezed by two orthogonal beams",
        samples=make_samples((1, 1)),
        beams=(
            Beam(kappa, ((1, 0.0), (2, 0.0)), measure=True),
            Beam(kappa, ((1, _HALF_PI), (2, -_HALF_PI)), measure=True),
        ),
        verification=(Beam(kappa, ((1, _QUARTER_PI), (2, -_QUARTER_PI))),),
        checks=(dsl.AssertDuan(1, 2, 1.0, expect, signs=(-1, 1)),),
        reports=_pair_reports(),
    )


def build_eraser(kappa1: float, kappa2: float, n_samples: int = 2) -> Protocol:
    """First beam entangles all samples; a second beam coupled to the
    orthogonal collective variable erases the entanglement when kappa2
    matches eraser_kappa2 (the state returns to vacuum, displaced)."""
    kappa1, kappa2 = float(kappa1), float(kappa2)
    n = int(n_samples)
    if n < 2:
        raise ValueError("the eraser needs at least two samples")
    target = eraser_kappa2(kappa1, n)
    matched = abs(kappa2 - target) <= 1e-12 * max(1.0, target)
    reports = (_sum_report(n, "y"), _sum_report(n, "z"), dsl.ReportNegativity((1,)))
    return Protocol(
        name="eraser",
        description="entangling beam followed by an erasing beam",
        samples=make_samples((1,) * n),
        beams=(
            Beam(kappa1, _all_pass(n, lambda i: 0.0), measure=True),
            Beam(kappa2, _all_pass(n, lambda i: _HALF_PI), measure=True),
        ),
        checks=(dsl.AssertNegativity((1,), "zero" if matched else "positive"),),
        reports=reports,
    )


def build_ghz_generic(n_samples: int, kappa: float,
                      pair_kappa: float | None = None) -> Protocol:
    """Global p-sum beam plus one (+pi/2, -pi/2) beam per pair; beam count
    1 + N(N-1)/2. All pairwise inequalities are declared as checks."""
    n = int(n_samples)
    if n < 2:
        raise ValueError("need at least two samples")
    kappa = float(kappa)
    pk = kappa if pair_kappa is None else float(pair_kappa)
    beams = [Beam(kappa, _all_pass(n, lambda i: 0.0), measure=True)]
    reports: list[dsl.ReportStmt] = [_sum_report(n, "z")]
    checks = []
    lhs = 1.0 / (1.0 + n * pk**2) + n / (2.0 + 2.0 * n * kappa**2)
    expect = "violated" if lhs < 2.0 - dsl.DEFAULT_TOL else "satisfied"
    for j in range(1, n + 1):
        for i in range(j + 1, n + 1):
            beams.append(Beam(pk, ((j, _HALF_PI), (i, -_HALF_PI)), measure=True))
            checks.append(dsl.AssertPairwise(i, j, expect))
            reports.append(dsl.ReportVar(((1, j, "y"), (-1, i, "y"))))
    return Protocol(
        name="ghz",
        description="collective sum and all pairwise differences squeezed",
        samples=make_samples((1,) * n),
        beams=tuple(beams),
        checks=tuple(checks),
        reports=tuple(reports),
    )


def build_ghz_even(n_pairs: int, kappa1: float, kappa2: float,
                   kappa_v: float) -> Protocol:
    """Even-register scheme: a global beam and one alternating +-pi/2 beam
    produce a pure multipartite entangled state in two measurements; the
    alternating +-pi/4 verification beam predicts the light variance."""
    m = int(n_pairs)
    if m < 1:
        raise ValueError("need at least one pair of samples")
    n = 2 * m
    kappa1, kappa2, kappa_v = float(kappa1), float(kappa2), float(kappa_v)

    def alt(angle):
        return lambda i: angle if i % 2 == 1 else -angle

    lhs = m / (1.0 + 2.0 * m * kappa2**2) + m / (1.0 + 2.0 * m * kappa1**2)
    expect = "violated" if lhs < 2.0 - dsl.DEFAULT_TOL else "satisfied"
    alternating = tuple(1.0 if i % 2 == 1 else -1.0 for i in range(1, n + 1))
    ones = (1.0,) * n
    checks = tuple(
        dsl.AssertVlf(alternating, ones, (k,), expect) for k in range(1, n + 1)
    )
    return Protocol(
        name="ghz_even",
        description="two beams entangle an even register; a third verifies",
        samples=make_samples((1,) * n),
        beams=(
            Beam(kappa1, _all_pass(n, lambda i: 0.0), measure=True),
            Beam(kappa2, _all_pass(n, alt(_HALF_PI)), measure=True),
        ),
        verification=(Beam(kappa_v, _all_pass(n, alt(_QUARTER_PI))),),
        checks=checks,
        reports=(
            dsl.ReportVar(tuple((1 if i % 2 == 1 else -1, i, "y")
                                for i in range(1, n + 1))),
            _sum_report(n, "z"),
        ),
    )


def build_odd_scheme(n_samples: int, kappa: float, orientations=None) -> Protocol:
    """Oppositely polarized register squeezed in both collective sums.

    With zero net polarization the two collective variables commute and a
    single beam pair squeezes both; the collective test is declared. An
    unbalanced register (odd count) gets the closest balance, a warning, and
    no collective check (its bound does not apply).
    """
    n = int(n_samples)
    if n < 2:
        raise ValueError("need at least two samples")
    kappa = float(kappa)
    if orientations is None:
        n_plus = (n + 1) // 2
        orientations = (1,) * n_plus + (-1,) * (n - n_plus)
    else:
        orientations = tuple(int(o) for o in orientations)
        if len(orientations) != n:
            raise ValueError("orientations must cover every sample")
        if any(o not in (1, -1) for o in orientations):
            raise ValueError("orientations must be +1 or -1")
    if len(set(orientations)) == 1:
        raise ValueError("orientations must mix +1 and -1")
    balanced = sum(orientations) == 0
    warnings = () if balanced else (
        "net polarization is nonzero; the collective bound is omitted",
    )
    checks = ()
    if balanced:
        checks = (dsl.AssertOdd("violated" if kappa > 0 else "satisfied"),)
    return Protocol(
        name="odd",
        description="collective sums squeezed on an oppositely polarized register",
        samples=make_samples(orientations),
        beams=(
            Beam(kappa, _all_pass(n, lambda i: 0.0), measure=True),
            Beam(kappa, _all_pass(n, lambda i: _HALF_PI), measure=True),
        ),
        checks=checks,
        reports=(_sum_report(n, "y"), _sum_report(n, "z")),
        warnings=warnings,
    )


def build_cluster(graph: Graph, kappa: float, rotated: bool = True) -> Protocol:
    """One measured beam per vertex squeezing that vertex's nullifier.

    Rotated form: the vertex passes at +pi/4 and each neighbor at -pi/4,
    coupling p'_a - sum x'_b in the rotated variables. Plain form: vertex at
    0, neighbors at -pi/2. The nullifiers commute, so the beams squeeze them
    cumulatively in any order.
    """
    if graph.n_vertices < 2:
        raise ValueError("a cluster needs at least two vertices")
    kappa = float(kappa)
    beams = []
    for a in range(1, graph.n_vertices + 1):
        members = sorted((a, *graph.neighbors(a)))
        if rotated:
            passes = tuple(
                (s, _QUARTER_PI if s == a else -_QUARTER_PI) for s in members
            )
        else:
            passes = tuple((s, 0.0 if s == a else -_HALF_PI) for s in members)
        beams.append(Beam(kappa, passes, measure=True))
    expect = "below_vacuum" if kappa > 0 else "at_vacuum"
    return Protocol(
        name="cluster",
        description="sequential squeezing of graph nullifiers",
        samples=make_samples((1,) * graph.n_vertices),
        beams=tuple(beams),
        checks=(dsl.AssertNullifiers(graph.edges, expect, rotated),),
    )


def protocol_to_script(protocol: Protocol) -> dsl.Script:
    """Canonical script: samples, beams, verify beams, checks, reports."""
    statements: list = [
        dsl.SamplesStmt(protocol.n_samples, protocol.orientations)
    ]
    for beam in protocol.beams:
        statements.append(
            dsl.BeamStmt(beam.kappa, beam.passes, beam.measure, beam.pin, beam.seed)
        )
    for beam in protocol.verification:
        statements.append(dsl.VerifyStmt(beam.kappa, beam.passes))
    statements.extend(protocol.checks)
    statements.extend(protocol.reports)
    return dsl.Script(tuple(statements))


def protocol_from_script(script: dsl.Script, name: str = "script",
                         description: str = "") -> Protocol:
    """Regroup a parsed script into a Protocol (statement kinds, in order)."""
    samples = make_samples(script.orientations)
    beams, verification, checks, reports = [], [], [], []
    for stmt in script.statements:
        if isinstance(stmt, dsl.SamplesStmt):
            continue
        if isinstance(stmt, dsl.BeamStmt):
            beams.append(Beam(stmt.kappa, stmt.passes, stmt.measure, stmt.pin,
                              stmt.seed))
        elif isinstance(stmt, dsl.VerifyStmt):
            verification.append(Beam(stmt.kappa, stmt.passes))
        elif isinstance(stmt, (dsl.ReportVar, dsl.ReportNegativity)):
            reports.append(stmt)
        else:
            checks.append(stmt)
    return Protocol(name, description, samples, tuple(beams), tuple(verification),
                    tuple(checks), tuple(reports))
