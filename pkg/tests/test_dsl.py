"""Tests for the protocol script grammar: parsing, printing, diagnostics."""

import math
import pathlib

import pytest

from spinlight.dsl import (
    AssertDuan,
    AssertNegativity,
    AssertNullifiers,
    AssertOdd,
    AssertPairwise,
    AssertVlf,
    BeamStmt,
    ReportNegativity,
    ReportVar,
    SamplesStmt,
    ScriptError,
    ScriptLexError,
    ScriptSemanticError,
    ScriptSyntaxError,
    VerifyStmt,
    format_angle,
    format_float,
    parse_angle,
    parse_float,
    parse_int,
    parse_script,
    report_name,
    script_to_text,
)
from spinlight.graphs import path_graph
from spinlight.protocols import (
    build_cluster,
    build_epr,
    build_eraser,
    build_ghz_even,
    build_ghz_generic,
    build_odd_scheme,
    eraser_kappa2,
    protocol_to_script,
)

GOLDEN = pathlib.Path(__file__).parent / "golden"


def test_golden_files_round_trip_byte_for_byte():
    for name in ("epr", "eraser", "ghz", "cluster"):
        text = (GOLDEN / f"{name}.proto").read_text()
        script = parse_script(text)
        assert script_to_text(script) == text


def test_golden_epr_matches_builder():
    text = (GOLDEN / "epr.proto").read_text()
    assert parse_script(text) == protocol_to_script(build_epr(1.0))


def test_builder_scripts_round_trip_through_text():
    protos = (
        build_epr(1.0),
        build_eraser(1.0, eraser_kappa2(1.0, 2)),
        build_ghz_generic(3, 1.0),
        build_ghz_even(2, 1.0, 0.7, 0.9),
        build_odd_scheme(4, 1.0),
        build_cluster(path_graph(4), 1.0),
        build_cluster(path_graph(3), 1.0, rotated=False),
    )
    for proto in protos:
        script = protocol_to_script(proto)
        assert parse_script(script_to_text(script)) == script


def test_parse_angle():
    assert parse_angle("pi") == math.pi
    assert parse_angle("-pi/4") == -math.pi / 4
    assert parse_angle("3pi/4") == (3 * math.pi) / 4
    assert parse_angle("2pi") == 2 * math.pi
    assert parse_angle("0.25") == 0.25
    assert parse_angle("-1e-3") == -1e-3
    with pytest.raises(ScriptLexError):
        parse_angle("pi/0")
    with pytest.raises(ScriptLexError):
        parse_angle("xpi")
    with pytest.raises(ScriptLexError):
        parse_angle("pi/2/3")


def test_parse_float_and_int():
    assert parse_float("-2.5e-1") == -0.25
    assert parse_int("17") == 17
    with pytest.raises(ScriptLexError):
        parse_float("abc")
    with pytest.raises(ScriptLexError):
        parse_int("-3")
    with pytest.raises(ScriptLexError):
        parse_int("2.0")


def test_format_angle():
    assert format_angle(0.0) == "0"
    assert format_angle(math.pi / 3) == "pi/3"
    assert format_angle(-math.pi / 4) == "-pi/4"
    assert format_angle(2 * math.pi) == "2pi"
    assert format_angle((3 * math.pi) / 4) == "3pi/4"
    # fractions print only when reparsing is bit-exact; otherwise repr
    for angle in (0.7, math.pi / 5, -1.234e-5, math.pi / 2, 11 * math.pi / 12):
        assert parse_angle(format_angle(angle)) == angle
    assert format_float(1.0) == "1.0"


def test_comments_and_blank_lines_are_ignored():
    text = "# leading comment\n\nsamples 2  # two samples\n  beam k=1.0 pass 1@0 2@0 measure\n\n"
    script = parse_script(text)
    assert len(script.statements) == 2
    assert script.samples.count == 2


def test_samples_statement():
    script = parse_script("samples 3 orient + - +\n")
    assert script.statements[0] == SamplesStmt(3, (1, -1, 1))
    assert script.orientations == (1, -1, 1)
    plain = parse_script("samples 2\n")
    assert plain.statements[0].orientations is None
    assert plain.orientations == (1, 1)
    # all-plus orientations normalize to the implicit default
    assert SamplesStmt(2, (1, 1)) == SamplesStmt(2, None)


def test_samples_errors():
    with pytest.raises(ScriptSemanticError):
        parse_script("")  # no declaration at all
    with pytest.raises(ScriptSemanticError):
        parse_script("beam k=1.0 pass 1@0\n")  # beam before samples
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 0\n")
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 2\nsamples 2\n")
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 2 orient + x\n")
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 2 orient +\n")  # one sign short
    with pytest.raises(ScriptLexError):
        parse_script("samples two\n")


def test_beam_statement_forms():
    script = parse_script(
        "samples 2\n"
        "beam k=0.5 pass 1@pi/2 2@-pi/2\n"
        "beam k=1.0 pass 1@0 measure\n"
        "beam k=1.0 pass 2@0 measure pin -0.25\n"
        "beam k=1.0 pass 1@0 2@0 measure seed=7\n"
    )
    beams = script.statements[1:]
    assert beams[0] == BeamStmt(0.5, ((1, math.pi / 2), (2, -math.pi / 2)), False, None, None)
    assert beams[1] == BeamStmt(1.0, ((1, 0.0),), True, None, None)
    assert beams[2] == BeamStmt(1.0, ((2, 0.0),), True, -0.25, None)
    assert beams[3] == BeamStmt(1.0, ((1, 0.0), (2, 0.0)), True, None, 7)


def test_beam_pass_sugar_expands_at_parse():
    script = parse_script("samples 3\nbeam k=1.0 pass *@pi/2 measure\n")
    beam = script.statements[1]
    assert beam.passes == ((1, math.pi / 2), (2, math.pi / 2), (3, math.pi / 2))


def test_beam_errors():
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 2\nbeam k=-1.0 pass 1@0\n")
    with pytest.raises(ScriptLexError):
        parse_script("samples 2\nbeam k=abc pass 1@0\n")
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 2\nbeam k=1.0 pass 1@0 1@pi\n")
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 2\nbeam k=1.0 pass measure\n")  # no passes
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 2\nbeam k=1.0 pass 1@0 pin 0.5\n")  # pin needs measure
    with pytest.raises(ScriptLexError):
        parse_script("samples 2\nbeam k=1.0 pass 1@@0\n")
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 2\nbeam k=1.0 pass 1@0 seed=3\n")
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 2\nbeam k=1.0 pass 1@0 measure pin 0.0 seed=3\n")
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 2\nverify k=1.0 pass 1@0 measure\n")


def test_error_positions_are_precise():
    with pytest.raises(ScriptSemanticError) as info:
        parse_script("samples 2\nbeam k=1.0 pass 3@0 measure\n")
    err = info.value
    assert err.line == 2
    assert err.col == 17
    assert "sample 3 out of range" in err.message

    with pytest.raises(ScriptSyntaxError) as info:
        parse_script("samples 1\nfoo\n")
    err = info.value
    assert (err.line, err.col) == (2, 1)
    assert err.expected == ("samples", "beam", "verify", "assert", "report")
    assert "line 2" in str(err)


def test_assert_duan_parsing():
    script = parse_script(
        "samples 2\n"
        "assert duan 1 2 lambda=1.0 expect=violated\n"
        "assert duan 2 1 lambda=0.5 signs=-+ expect=satisfied tol=1e-6\n"
    )
    a, b = script.statements[1:]
    assert a == AssertDuan(1, 2, 1.0, "violated")
    assert a.signs == (1, -1) and a.tol == 1e-9
    assert b == AssertDuan(2, 1, 0.5, "satisfied", (-1, 1), 1e-6)


def test_assert_duan_errors():
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 2\nassert duan 1 1 lambda=1.0 expect=violated\n")
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 2\nassert duan 1 2 lambda=0 expect=violated\n")
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 2\nassert duan 1 2 lambda=1.0 signs=++ expect=violated\n")
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 2\nassert duan 1 2 lambda=1.0\n")  # missing expect
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 2\nassert duan 1 2 lambda=1.0 lambda=2.0 expect=violated\n")
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 2\nassert duan 1 2 lambda=1.0 expect=violated bogus=1\n")
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 2\nassert duan 1 2 lambda=1.0 expect=maybe\n")
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 2\nassert duan 1 2 lambda=1.0 expect=violated tol=-1\n")


def test_assert_pairwise_and_odd():
    script = parse_script(
        "samples 4 orient + + - -\n"
        "assert pairwise 2 1 expect=violated\n"
        "assert odd expect=violated\n"
    )
    assert script.statements[1] == AssertPairwise(2, 1, "violated")
    assert script.statements[2] == AssertOdd("violated")
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 2\nassert odd expect=violated\n")  # net polarization


def test_assert_vlf_parsing():
    script = parse_script(
        "samples 3\nassert vlf h=1,-1,0 g=1,1,1 split=1:2,3 expect=violated\n"
    )
    stmt = script.statements[1]
    assert stmt == AssertVlf((1.0, -1.0, 0.0), (1.0, 1.0, 1.0), (1,), "violated")
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 3\nassert vlf h=1,-1 g=1,1,1 split=1:2,3 expect=violated\n")
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 3\nassert vlf h=1,-1,0 g=1,1,1 split=1:2 expect=violated\n")
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 3\nassert vlf h=1,-1,0 g=1,1,1 split=1,2:2,3 expect=violated\n")
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 3\nassert vlf h=1,-1,0 g=1,1,1 split=123 expect=violated\n")


def test_assert_negativity_parsing():
    script = parse_script("samples 3\nassert negativity 2 1 expect=zero tol=1e-8\n")
    assert script.statements[1] == AssertNegativity((1, 2), "zero", 1e-8)
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 2\nassert negativity 1 2 expect=zero\n")  # not proper
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 2\nassert negativity 1 expect=negative\n")
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 2\nassert negativity expect=zero\n")


def test_assert_nullifiers_parsing():
    script = parse_script(
        "samples 3\n"
        "assert nullifiers edges=2-1,2-3 expect=below_vacuum\n"
        "assert nullifiers edges=1-2,2-3 rotated=false expect=at_vacuum\n"
    )
    a, b = script.statements[1:]
    assert a == AssertNullifiers(((1, 2), (2, 3)), "below_vacuum")
    assert a.rotated is True
    assert b.rotated is False
    with pytest.raises(ScriptLexError):
        parse_script("samples 3\nassert nullifiers edges=1-2-3 expect=at_vacuum\n")
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 4\nassert nullifiers edges=1-2 expect=at_vacuum\n")
    with pytest.raises(ScriptSyntaxError):
        parse_script(
            "samples 3\nassert nullifiers edges=1-2,2-3 rotated=maybe expect=at_vacuum\n"
        )


def test_unknown_criterion_and_report_kind():
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 2\nassert parity 1 2 expect=violated\n")
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 2\nreport purity\n")


def test_report_var_parsing_and_star():
    script = parse_script("samples 3\nreport var +1y -2z\nreport var +*z\n")
    plain, star = script.statements[1:]
    assert plain == ReportVar(((1, 1, "y"), (-1, 2, "z")))
    # the star stays symbolic so the report name is register-size independent
    assert star == ReportVar(((1, "*", "z"),))
    assert report_name(star) == "var +*z"
    with pytest.raises(ScriptLexError):
        parse_script("samples 2\nreport var 1y\n")  # sign is required
    with pytest.raises(ScriptLexError):
        parse_script("samples 2\nreport var +1w\n")
    with pytest.raises(ScriptSyntaxError):
        parse_script("samples 2\nreport var\n")


def test_report_negativity_parsing():
    script = parse_script("samples 3\nreport negativity 3 1\n")
    assert script.statements[1] == ReportNegativity((1, 3))
    assert report_name(script.statements[1]) == "negativity 1 3"
    with pytest.raises(ScriptSemanticError):
        parse_script("samples 2\nreport negativity 1 2\n")


def test_printer_omits_defaults():
    text = script_to_text(
        parse_script(
            "samples 2\n"
            "beam k=1.0 pass 1@0 2@0 measure\n"
            "assert duan 1 2 lambda=1.0 signs=+- expect=violated tol=1e-9\n"
        )
    )
    assert "signs" not in text
    assert "tol" not in text
    assert text.endswith("\n")


def test_parse_rejects_non_text():
    with pytest.raises(ScriptLexError):
        parse_script(b"samples 2\n")


def test_script_error_is_common_base():
    for bad in ("samples 2\nbeam k=x pass 1@0\n", "samples 2\nfrob\n", "samples 9x\n"):
        with pytest.raises(ScriptError):
            parse_script(bad)
