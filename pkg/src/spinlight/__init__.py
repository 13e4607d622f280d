"""Gaussian simulator of light-mediated entanglement between atomic ensembles.

Covariance-matrix states, QND atom-light passes, homodyne conditioning,
entanglement criteria, protocol builders, a protocol script language, and a
CLI/HTTP interface for runs and parameter sweeps.
"""

from ._version import __version__
from .criteria import (
    DEFAULT_TOL,
    CriterionReport,
    cluster_nullifier_variances,
    duan_optimal_lambda,
    duan_test,
    ghz_pairwise_test,
    log_negativity,
    nullifier_coefficients,
    odd_scheme_test,
    vacuum_nullifier_variances,
    vlf_certify_genuine,
    vlf_f,
    vlf_test,
)
from .dsl import (
    Script,
    ScriptError,
    ScriptLexError,
    ScriptSemanticError,
    ScriptSyntaxError,
    parse_script,
    script_to_text,
)
from .gaussian import (
    CouplingParams,
    GaussianState,
    NumericalError,
    SymplecticMap,
    append_vacuum_mode,
    apply_symplectic,
    drop_mode,
    homodyne_condition,
    is_bona_fide,
    is_pure,
    partial_transpose,
    qnd_pass_map,
    rotate_mode,
    rotation_map,
    symplectic_form,
    symplectic_spectrum,
    vacuum_state,
    variance_of,
)
from .graphs import Graph, path_graph
from .interface import (
    Beam,
    Sample,
    apply_beam,
    coupled_combination,
    make_samples,
    verification_variance,
)
from .protocols import (
    Protocol,
    SimulationResult,
    build_cluster,
    build_epr,
    build_eraser,
    build_ghz_even,
    build_ghz_generic,
    build_odd_scheme,
    build_two_variable_epr,
    eraser_kappa2,
    expected_variances_bipartite,
    expected_variances_ghz,
    expected_variances_two_beam,
    protocol_from_script,
    protocol_to_script,
    simulate,
)
from .runner import (
    DEMO_NAMES,
    STATUS_EXIT,
    RunError,
    check_text,
    demo_script_text,
    execute_text,
    report_to_json,
    run_script,
    sweep_csv,
)

__all__ = [
    "__version__",
    "DEFAULT_TOL",
    "CriterionReport",
    "cluster_nullifier_variances",
    "duan_optimal_lambda",
    "duan_test",
    "ghz_pairwise_test",
    "log_negativity",
    "nullifier_coefficients",
    "odd_scheme_test",
    "vacuum_nullifier_variances",
    "vlf_certify_genuine",
    "vlf_f",
    "vlf_test",
    "Script",
    "ScriptError",
    "ScriptLexError",
    "ScriptSemanticError",
    "ScriptSyntaxError",
    "parse_script",
    "script_to_text",
    "CouplingParams",
    "GaussianState",
    "NumericalError",
    "SymplecticMap",
    "append_vacuum_mode",
    "apply_symplectic",
    "drop_mode",
    "homodyne_condition",
    "is_bona_fide",
    "is_pure",
    "partial_transpose",
    "qnd_pass_map",
    "rotate_mode",
    "rotation_map",
    "symplectic_form",
    "symplectic_spectrum",
    "vacuum_state",
    "variance_of",
    "Graph",
    "path_graph",
    "Beam",
    "Sample",
    "apply_beam",
    "coupled_combination",
    "make_samples",
    "verification_variance",
    "Protocol",
    "SimulationResult",
    "build_cluster",
    "build_epr",
    "build_eraser",
    "build_ghz_even",
    "build_ghz_generic",
    "build_odd_scheme",
    "build_two_variable_epr",
    "eraser_kappa2",
    "expected_variances_bipartite",
    "expected_variances_ghz",
    "expected_variances_two_beam",
    "protocol_from_script",
    "protocol_to_script",
    "simulate",
    "DEMO_NAMES",
    "STATUS_EXIT",
    "RunError",
    "check_text",
    "demo_script_text",
    "execute_text",
    "report_to_json",
    "run_script",
    "sweep_csv",
]
