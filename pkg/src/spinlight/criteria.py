"""Entanglement criteria evaluated on Gaussian states of sample registers.

All functions speak in terms of 1-based sample ids. Combination coefficients
are given in the collective-spin language (h on the J_y side, g on the J_z
side); orientations translate them to canonical quadratures, since a sample
polarized along -x carries p = -J_z / sqrt(hbar |J_x|). With the package
normalization, a bound quoted as a multiple of hbar J_x is the bare number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping

import numpy as np

from .gaussian import GaussianState, partial_transpose, symplectic_spectrum, variance_of
from .graphs import Graph

DEFAULT_TOL = 1e-9
GOLDEN_TOL = 1e-10


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of one variance-based criterion evaluation.

    `violated` is True when lhs < bound - tol; witness records the
    combinations that were tested.
    """

    name: str
    lhs: float
    bound: float
    violated: bool
    tol: float = DEFAULT_TOL
    witness: Mapping = field(default_factory=dict)


def _norm_orientations(state: GaussianState, orientations) -> tuple[int, ...]:
    if orientations is None:
        return (1,) * state.n_modes
    out = tuple(int(o) for o in orientations)
    if len(out) != state.n_modes:
        raise ValueError("orientations must cover every sample")
    if any(o not in (1, -1) for o in out):
        raise ValueError("orientations must be +1 or -1")
    return out


def _check_sample(state: GaussianState, sid: int) -> None:
    if not 1 <= sid <= state.n_modes:
        raise ValueError(f"sample {sid} out of range for {state.n_modes} samples")


def _combination(state, x_coeffs: dict[int, float], p_coeffs: dict[int, float]) -> np.ndarray:
    vec = np.zeros(state.dim)
    for sid, c in x_coeffs.items():
        vec[2 * (sid - 1)] = c
    for sid, c in p_coeffs.items():
        vec[2 * (sid - 1) + 1] = c
    return vec


def duan_test(
    state: GaussianState,
    pair: tuple[int, int],
    lam: float,
    signs: tuple[int, int] = (1, -1),
    orientations=None,
    tol: float = DEFAULT_TOL,
) -> CriterionReport:
    """Two-sample inseparability test on the combinations

        u = |lam| x_i + s_x r x_j / lam
        v = |lam| p_i + s_p r p_j / lam

    where r is the pair's relative orientation (+1 parallel, -1 antiparallel)
    and s_x * s_p = -1 (default (+1, -1)); a separable state obeys
    Var(u) + Var(v) >= lam^2 + 1/lam^2. Vacuum saturates the bound at every
    lam. Folding r keeps one sign convention tracking the squeezed pair: for
    an antiparallel register the same s choice that tests (x_i - x_j,
    p_i + p_j) on a parallel one tests (x_i + x_j, p_i - p_j).
    """
    i, j = int(pair[0]), int(pair[1])
    _check_sample(state, i)
    _check_sample(state, j)
    if i == j:
        raise ValueError("the pair must name two distinct samples")
    if not math.isfinite(lam) or lam == 0:
        raise ValueError("lam must be finite and nonzero")
    s_x, s_p = signs
    if s_x * s_p != -1 or {abs(s_x), abs(s_p)} != {1}:
        raise ValueError("signs must be (+1,-1) or (-1,+1)")
    eta = _norm_orientations(state, orientations)
    rel = eta[i - 1] * eta[j - 1]
    al = abs(lam)
    u = _combination(state, {i: al, j: s_x * rel / lam}, {})
    v = _combination(state, {}, {i: al, j: s_p * rel / lam})
    lhs = variance_of(state, u) + variance_of(state, v)
    bound = lam**2 + 1.0 / lam**2
    return CriterionReport(
        name="duan",
        lhs=lhs,
        bound=bound,
        violated=lhs < bound - tol,
        tol=tol,
        witness={"pair": (i, j), "lam": lam, "signs": (s_x, s_p)},
    )


def _golden_section(fn, lo: float, hi: float, tol: float) -> float:
    """Minimize a unimodal function on [lo, hi]; returns the argmin."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    return (a + b) / 2.0


def duan_optimal_lambda(
    state: GaussianState,
    pair: tuple[int, int],
    signs: tuple[int, int] = (1, -1),
    orientations=None,
    bracket: tuple[float, float] = (1e-3, 1e3),
    tol: float = DEFAULT_TOL,
) -> CriterionReport:
    """Golden-section minimization of lhs/bound over lam in the bracket.

    The search runs over log(lam) with interval tolerance 1e-10 and returns
    the report at the optimizing lam (recorded in the witness).
    """

    def ratio(t: float) -> float:
        rep = duan_test(state, pair, math.exp(t), signs, orientations, tol)
        return rep.lhs / rep.bound

    t_best = _golden_section(ratio, math.log(bracket[0]), math.log(bracket[1]), GOLDEN_TOL)
    return duan_test(state, pair, math.exp(t_best), signs, orientations, tol)


def vlf_f(h, g, m: int, n: int, group_m, group_n) -> float:
    """Bound coefficient f = |h_m g_m + sum_I h g| + |h_n g_n + sum_I' h g|.

    m and n are the distinguished samples; group_m and group_n are the rest of
    each side. The four pieces must partition 1..len(h).
    """
    h = tuple(float(v) for v in h)
    g = tuple(float(v) for v in g)
    if len(h) != len(g) or not h:
        raise ValueError("h and g must have equal, nonzero length")
    count = len(h)
    m, n = int(m), int(n)
    side_m = {m} | {int(v) for v in group_m}
    side_n = {n} | {int(v) for v in group_n}
    if m == n or m in set(group_m) or n in set(group_n):
        raise ValueError("m and n must be distinct distinguished samples")
    if side_m & side_n or side_m | side_n != set(range(1, count + 1)):
        raise ValueError("{m} u I u {n} u I' must partition the samples")
    left = sum(h[i - 1] * g[i - 1] for i in side_m)
    right = sum(h[i - 1] * g[i - 1] for i in side_n)
    return abs(left) + abs(right)


def _side_key(side_a, count: int) -> tuple[frozenset, frozenset]:
    side_a = frozenset(int(v) for v in side_a)
    full = frozenset(range(1, count + 1))
    if not side_a or not side_a < full:
        raise ValueError("splitting must be a nonempty proper subset of the samples")
    return side_a, full - side_a


def vlf_test(
    state: GaussianState,
    h,
    g,
    side_a,
    orientations=None,
    tol: float = DEFAULT_TOL,
) -> CriterionReport:
    """Multi-sample separability test across one bipartite splitting.

    u = sum h_i x_i and v = sum g_i p_i (orientation-aware); a state
    separable across side_a | rest obeys Var(u) + Var(v) >= f with
    f = |sum_{side_a} h_i g_i| + |sum_{rest} h_i g_i|, where the products are
    taken orientation-aware. Violation certifies entanglement across exactly
    that splitting.
    """
    h = tuple(float(v) for v in h)
    g = tuple(float(v) for v in g)
    if len(h) != state.n_modes or len(g) != state.n_modes:
        raise ValueError("h and g must have one coefficient per sample")
    eta = _norm_orientations(state, orientations)
    side_a, side_b = _side_key(side_a, state.n_modes)
    u = _combination(state, {i: h[i - 1] for i in range(1, state.n_modes + 1)}, {})
    v = _combination(
        state, {}, {i: g[i - 1] * eta[i - 1] for i in range(1, state.n_modes + 1)}
    )
    lhs = variance_of(state, u) + variance_of(state, v)
    products = [h[i - 1] * g[i - 1] * eta[i - 1] for i in range(1, state.n_modes + 1)]
    bound = abs(sum(products[i - 1] for i in side_a)) + abs(
        sum(products[i - 1] for i in side_b)
    )
    return CriterionReport(
        name="vlf",
        lhs=lhs,
        bound=bound,
        violated=lhs < bound - tol,
        tol=tol,
        witness={
            "h": h,
            "g": g,
            "side_a": tuple(sorted(side_a)),
            "side_b": tuple(sorted(side_b)),
        },
    )


def vlf_certify_genuine(
    state: GaussianState,
    h,
    g,
    orientations=None,
    overrides: Mapping | None = None,
    tol: float = DEFAULT_TOL,
    allow_large: bool = False,
) -> tuple[bool, tuple[CriterionReport, ...]]:
    """Evaluate the splitting test across every bipartition of the register.

    Returns (genuine, reports): genuine is True only when every splitting is
    violated. `overrides` maps a frozenset of sample ids (either side) to a
    replacement (h, g) pair for that splitting, since one fixed combination
    can carry a vanishing bound on some splittings. Registers above 12
    samples (2047 splittings) are refused unless allow_large is set.
    """
    count = state.n_modes
    if count < 2:
        raise ValueError("certification needs at least two samples")
    if count > 12 and not allow_large:
        raise ValueError("more than 12 samples: pass allow_large=True to enumerate")
    normalized_overrides = {}
    if overrides:
        for key, pair in overrides.items():
            side_a, side_b = _side_key(frozenset(key), count)
            canonical = side_a if 1 in side_a else side_b
            normalized_overrides[canonical] = pair
    reports = []
    genuine = True
    rest = list(range(2, count + 1))
    for size in range(0, count - 1):
        for extra in combinations(rest, size):
            side = frozenset((1,) + extra)
            hh, gg = normalized_overrides.get(side, (h, g))
            report = vlf_test(state, hh, gg, side, orientations, tol)
            reports.append(report)
            genuine = genuine and report.violated
    return genuine, tuple(reports)


def log_negativity(state: GaussianState, partition) -> float:
    """Logarithmic negativity across the bipartition (partition | rest).

    Sum of -log2(2 nu) over partially transposed symplectic eigenvalues
    below 1/2; zero for states with a positive partial transpose.
    """
    ids = sorted(set(int(v) for v in partition))
    for sid in ids:
        _check_sample(state, sid)
    if not ids or len(ids) >= state.n_modes:
        raise ValueError("partition must be a nonempty proper subset of the samples")
    pt_cov = partial_transpose(state.cov, [sid - 1 for sid in ids])
    nu = symplectic_spectrum(pt_cov)
    terms = -np.log2(2.0 * nu[nu < 0.5])
    return float(terms.sum()) if terms.size else 0.0


def ghz_pairwise_test(
    state: GaussianState,
    i: int,
    j: int,
    orientations=None,
    tol: float = DEFAULT_TOL,
) -> CriterionReport:
    """Pairwise witness: Var(x_i - x_j) + Var(sum of all p) >= 2 for states
    separable across any splitting that puts i and j on opposite sides.

    Violation for every pair certifies genuine multipartite entanglement.
    """
    i, j = int(i), int(j)
    _check_sample(state, i)
    _check_sample(state, j)
    if i == j:
        raise ValueError("the pair must name two distinct samples")
    eta = _norm_orientations(state, orientations)
    u = _combination(state, {i: 1.0, j: -1.0}, {})
    v = _combination(state, {}, {k: float(eta[k - 1]) for k in range(1, state.n_modes + 1)})
    lhs = variance_of(state, u) + variance_of(state, v)
    return CriterionReport(
        name="ghz_pairwise",
        lhs=lhs,
        bound=2.0,
        violated=lhs < 2.0 - tol,
        tol=tol,
        witness={"pair": (i, j)},
    )


def odd_scheme_test(
    state: GaussianState, orientations, tol: float = DEFAULT_TOL
) -> CriterionReport:
    """Collective-sum witness for registers with zero net polarization:

        Var(sum x_i) + Var(sum eta_i p_i) >= N

    for fully separable states; vacuum gives equality. Raises when the
    orientations do not sum to zero (the bound then does not apply).
    """
    eta = _norm_orientations(state, orientations)
    if sum(eta) != 0:
        raise ValueError("test needs zero net polarization (orientations summing to 0)")
    count = state.n_modes
    u = _combination(state, {i: 1.0 for i in range(1, count + 1)}, {})
    v = _combination(state, {}, {i: float(eta[i - 1]) for i in range(1, count + 1)})
    lhs = variance_of(state, u) + variance_of(state, v)
    bound = float(count)
    return CriterionReport(
        name="odd_scheme",
        lhs=lhs,
        bound=bound,
        violated=lhs < bound - tol,
        tol=tol,
        witness={"orientations": eta},
    )


def nullifier_coefficients(
    graph: Graph, vertex: int, n_modes: int, rotated: bool = True
) -> np.ndarray:
    """Coefficient vector of the cluster nullifier at one vertex.

    Rotated form (the protocols' working variables, each mode turned by -pi/4):
    p'_a - sum_{b ~ a} x'_b with p' = (x + p)/sqrt2 and x' = (x - p)/sqrt2.
    Plain form: p_a - sum_{b ~ a} x_b. Nullifiers of either form commute
    pairwise for any simple graph.
    """
    if graph.n_vertices != n_modes:
        raise ValueError("graph vertices must match the sample count")
    vec = np.zeros(2 * n_modes)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    a = int(vertex)
    if rotated:
        vec[2 * (a - 1)] += inv_sqrt2
        vec[2 * (a - 1) + 1] += inv_sqrt2
        for b in graph.neighbors(a):
            vec[2 * (b - 1)] -= inv_sqrt2
            vec[2 * (b - 1) + 1] += inv_sqrt2
    else:
        vec[2 * (a - 1) + 1] += 1.0
        for b in graph.neighbors(a):
            vec[2 * (b - 1)] -= 1.0
    return vec


def cluster_nullifier_variances(
    state: GaussianState, graph: Graph, rotated: bool = True
) -> tuple[tuple[int, float], ...]:
    """(vertex, variance) for each vertex nullifier, in vertex order.

    On vacuum the variance at vertex a is (1 + deg(a)) / 2; a cluster
    protocol drives every entry below that.
    """
    if graph.n_vertices != state.n_modes:
        raise ValueError("graph vertices must match the sample count")
    return tuple(
        (a, variance_of(state, nullifier_coefficients(graph, a, state.n_modes, rotated)))
        for a in range(1, graph.n_vertices + 1)
    )


def vacuum_nullifier_variances(graph: Graph) -> tuple[tuple[int, float], ...]:
    """The vacuum reference values (vertex, (1 + deg(a)) / 2), in vertex order."""
    return tuple(
        (a, (1.0 + graph.degree(a)) / 2.0) for a in range(1, graph.n_vertices + 1)
    )
