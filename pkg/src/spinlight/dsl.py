"""Line-oriented protocol script language.

Grammar (one statement per line, `#` starts a comment, blank lines ignored):

    samples <n> [orient <+|-> ...]
    beam k=<float> pass <id>@<angle> ... [measure [pin <float>]] [seed=<int>]
    verify k=<float> pass <id>@<angle> ...
    assert duan <i> <j> lambda=<float> [signs=+-|-+] expect=<verdict> [tol=<float>]
    assert pairwise <i> <j> expect=<verdict> [tol=<float>]
    assert odd expect=<verdict> [tol=<float>]
    assert vlf h=<csv> g=<csv> split=<ids>:<ids> expect=<verdict> [tol=<float>]
    assert negativity <id> ... expect=zero|positive [tol=<float>]
    assert nullifiers edges=<a-b,...> [rotated=true|false] expect=below_vacuum|at_vacuum [tol=<float>]
    report var <sign><id><y|z> ...
    report negativity <id> ...

where <verdict> is violated|satisfied and <angle> is a pi fraction like
pi/4, -pi/2, 2pi/3, or a decimal in radians. A pass id of `*` and a var term
id of `*` expand to every declared sample at parse time. `y` names the
J_y-side quadrature (canonical x) and `z` the J_z side (canonical p, folded
by the sample's orientation when evaluated). The printer emits a canonical
form that omits defaults; parse(print(ast)) == ast.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

from .criteria import DEFAULT_TOL
from .graphs import Graph


class ScriptError(Exception):
    """Structured diagnostic with a 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None,
                 expected: tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        where = ""
        if line is not None:
            where = f"line {line}"
            if col is not None:
                where += f", col {col}"
            where += ": "
        hint = ""
        if self.expected:
            hint = " (expected " + " | ".join(self.expected) + ")"
        super().__init__(f"{where}{message}{hint}")


class ScriptLexError(ScriptError):
    """A token does not form a valid number, angle, pass, or term."""


class ScriptSyntaxError(ScriptError):
    """A statement is malformed: unknown keyword, missing or extra tokens."""


class ScriptSemanticError(ScriptError):
    """A well-formed statement violates script-level consistency."""


@dataclass(frozen=True)
class SamplesStmt:
    count: int
    orientations: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.orientations is not None:
            tup = tuple(int(o) for o in self.orientations)
            object.__setattr__(self, "orientations", None if all(o == 1 for o in tup) else tup)


def _float_tuple(values) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


def _id_tuple(values) -> tuple[int, ...]:
    return tuple(sorted({int(v) for v in values}))


def _pass_tuple(passes) -> tuple[tuple[int, float], ...]:
    return tuple((int(sid), float(angle)) for sid, angle in passes)


@dataclass(frozen=True)
class BeamStmt:
    kappa: float
    passes: tuple[tuple[int, float], ...]
    measure: bool = False
    pin: float | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kappa", float(self.kappa))
        object.__setattr__(self, "passes", _pass_tuple(self.passes))
        if self.pin is not None:
            object.__setattr__(self, "pin", float(self.pin))
        if self.seed is not None:
            object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class VerifyStmt:
    kappa: float
    passes: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "kappa", float(self.kappa))
        object.__setattr__(self, "passes", _pass_tuple(self.passes))


@dataclass(frozen=True)
class AssertDuan:
    i: int
    j: int
    lam: float
    expect: str
    signs: tuple[int, int] = (1, -1)
    tol: float = DEFAULT_TOL

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        object.__setattr__(self, "tol", float(self.tol))


@dataclass(frozen=True)
class AssertPairwise:
    i: int
    j: int
    expect: str
    tol: float = DEFAULT_TOL

    def __post_init__(self) -> None:
        object.__setattr__(self, "tol", float(self.tol))


@dataclass(frozen=True)
class AssertOdd:
    expect: str
    tol: float = DEFAULT_TOL

    def __post_init__(self) -> None:
        object.__setattr__(self, "tol", float(self.tol))


@dataclass(frozen=True)
class AssertVlf:
    h: tuple[float, ...]
    g: tuple[float, ...]
    side_a: tuple[int, ...]
    expect: str
    tol: float = DEFAULT_TOL

    def __post_init__(self) -> None:
        object.__setattr__(self, "h", _float_tuple(self.h))
        object.__setattr__(self, "g", _float_tuple(self.g))
        object.__setattr__(self, "side_a", _id_tuple(self.side_a))
        object.__setattr__(self, "tol", float(self.tol))


@dataclass(frozen=True)
class AssertNegativity:
    samples: tuple[int, ...]
    expect: str
    tol: float = DEFAULT_TOL

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", _id_tuple(self.samples))
        object.__setattr__(self, "tol", float(self.tol))


@dataclass(frozen=True)
class AssertNullifiers:
    edges: tuple[tuple[int, int], ...]
    expect: str
    rotated: bool = True
    tol: float = DEFAULT_TOL

    def __post_init__(self) -> None:
        edges = sorted({(min(int(a), int(b)), max(int(a), int(b)))
                        for a, b in self.edges})
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "tol", float(self.tol))


@dataclass(frozen=True)
class ReportVar:
    # (sign, sample id or "*" for every sample, 'y' | 'z'); a star keeps the
    # report's name stable when the sample count is a sweep parameter
    terms: tuple[tuple[int, int | str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "terms",
            tuple((int(s), "*" if t == "*" else int(t), str(q))
                  for s, t, q in self.terms),
        )


@dataclass(frozen=True)
class ReportNegativity:
    samples: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", _id_tuple(self.samples))


AssertStmt = Union[AssertDuan, AssertPairwise, AssertOdd, AssertVlf,
                   AssertNegativity, AssertNullifiers]
ReportStmt = Union[ReportVar, ReportNegativity]
Statement = Union[SamplesStmt, BeamStmt, VerifyStmt, AssertStmt, ReportStmt]


@dataclass(frozen=True)
class Script:
    statements: tuple = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "statements", tuple(self.statements))

    @property
    def samples(self) -> SamplesStmt:
        for stmt in self.statements:
            if isinstance(stmt, SamplesStmt):
                return stmt
        raise ValueError("script declares no samples")

    @property
    def orientations(self) -> tuple[int, ...]:
        decl = self.samples
        return decl.orientations or (1,) * decl.count


_FLOAT_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
_INT_RE = re.compile(r"^\d+$")
_ANGLE_RE = re.compile(r"^([+-]?)(\d*)pi(?:/(\d+))?$")
_PASS_RE = re.compile(r"^(\d+|\*)@(.+)$")
_TERM_RE = re.compile(r"^([+-])(\d+|\*)([yz])$")


def parse_float(token: str, line: int | None = None, col: int | None = None) -> float:
    if not _FLOAT_RE.match(token):
        raise ScriptLexError(f"{token!r} is not a number", line, col)
    return float(token)


def parse_int(token: str, line: int | None = None, col: int | None = None) -> int:
    if not _INT_RE.match(token):
        raise ScriptLexError(f"{token!r} is not a non-negative integer", line, col)
    return int(token)


def parse_angle(token: str, line: int | None = None, col: int | None = None) -> float:
    """An angle is `[-][k]pi[/d]` or a decimal number of radians."""
    m = _ANGLE_RE.match(token)
    if m:
        sign_s, num_s, den_s = m.groups()
        num = int(num_s) if num_s else 1
        den = int(den_s) if den_s else 1
        if den == 0:
            raise ScriptLexError(f"{token!r} has a zero denominator", line, col)
        value = (num * math.pi) / den
        return -value if sign_s == "-" else value
    if _FLOAT_RE.match(token):
        return float(token)
    raise ScriptLexError(f"{token!r} is not an angle", line, col)


_DENOMINATORS = (1, 2, 3, 4, 6, 8, 12, 16, 24, 48)


def format_float(value: float) -> str:
    return repr(float(value))


def format_angle(angle: float) -> str:
    """Shortest pi-fraction that reparses to the exact same float, else repr."""
    angle = float(angle)
    if angle == 0.0:
        return "0"
    negative = angle < 0
    magnitude = abs(angle)
    for den in _DENOMINATORS:
        num = round(magnitude * den / math.pi)
        if num < 1 or num > 200:
            continue
        if (num * math.pi) / den == magnitude:
            head = "" if num == 1 else str(num)
            tail = "" if den == 1 else f"/{den}"
            return ("-" if negative else "") + f"{head}pi{tail}"
    return repr(angle)


class _Cursor:
    """Token stream for one line."""

    def __init__(self, line_no: int, tokens: list[tuple[str, int]]):
        self.line = line_no
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self, what: str) -> tuple[str, int]:
        if self.pos >= len(self.tokens):
            tail, tail_col = self.tokens[-1]
            raise ScriptSyntaxError(
                f"missing {what}", self.line, tail_col + len(tail), expected=(what,)
            )
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def end(self) -> None:
        if self.pos < len(self.tokens):
            token, col = self.tokens[self.pos]
            raise ScriptSyntaxError(f"unexpected token {token!r}", self.line, col)


def _tokenize(text: str):
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = []
        i = 0
        while i < len(line):
            if line[i].isspace():
                i += 1
                continue
            j = i
            while j < len(line) and not line[j].isspace():
                j += 1
            tokens.append((line[i:j], i + 1))
            i = j
        if tokens:
            yield _Cursor(line_no, tokens)


def _take_kv(cur: _Cursor, allowed: dict[str, str], required: tuple[str, ...]) -> dict:
    """Consume trailing key=value tokens; values parsed per the allowed table."""
    found: dict[str, tuple[str, int]] = {}
    while cur.peek() is not None:
        token, col = cur.take("key=value")
        if "=" not in token:
            raise ScriptSyntaxError(
                f"unexpected token {token!r}", cur.line, col,
                expected=tuple(f"{k}=" for k in allowed),
            )
        key, value = token.split("=", 1)
        if key not in allowed:
            raise ScriptSyntaxError(
                f"unknown option {key!r}", cur.line, col,
                expected=tuple(f"{k}=" for k in allowed),
            )
        if key in found:
            raise ScriptSyntaxError(f"duplicate option {key!r}", cur.line, col)
        if not value:
            raise ScriptLexError(f"empty value for {key!r}", cur.line, col)
        found[key] = (value, col)
    for key in required:
        if key not in found:
            tail, tail_col = cur.tokens[-1]
            raise ScriptSyntaxError(
                f"missing {key}=", cur.line, tail_col + len(tail), expected=(f"{key}=",)
            )
    return found


def _parse_expect(found: dict, cur: _Cursor, choices: tuple[str, ...]) -> str:
    value, col = found["expect"]
    if value not in choices:
        raise ScriptSyntaxError(f"bad expect value {value!r}", cur.line, col,
                                expected=choices)
    return value


def _parse_tol(found: dict, cur: _Cursor) -> float:
    if "tol" not in found:
        return DEFAULT_TOL
    value, col = found["tol"]
    tol = parse_float(value, cur.line, col)
    if not math.isfinite(tol) or tol < 0:
        raise ScriptSemanticError("tol must be finite and non-negative", cur.line, col)
    return tol


def _parse_id_list(value: str, cur: _Cursor, col: int) -> tuple[int, ...]:
    return tuple(parse_int(part, cur.line, col) for part in value.split(","))


class _Parser:
    def __init__(self) -> None:
        self.decl: SamplesStmt | None = None
        self.statements: list[Statement] = []

    @property
    def count(self) -> int:
        return self.decl.count if self.decl else 0

    def require_decl(self, cur: _Cursor, col: int) -> None:
        if self.decl is None:
            raise ScriptSemanticError(
                "samples must be declared before any other statement", cur.line, col
            )

    def check_sample(self, sid: int, cur: _Cursor, col: int) -> None:
        if not 1 <= sid <= self.count:
            raise ScriptSemanticError(
                f"sample {sid} out of range (1..{self.count})", cur.line, col
            )

    def parse(self, text: str) -> Script:
        for cur in _tokenize(text):
            keyword, col = cur.take("statement")
            handler = {
                "samples": self.parse_samples,
                "beam": self.parse_beam,
                "verify": self.parse_verify,
                "assert": self.parse_assert,
                "report": self.parse_report,
            }.get(keyword)
            if handler is None:
                raise ScriptSyntaxError(
                    f"unknown keyword {keyword!r}", cur.line, col,
                    expected=("samples", "beam", "verify", "assert", "report"),
                )
            if keyword != "samples":
                self.require_decl(cur, col)
            handler(cur)
        if self.decl is None:
            raise ScriptSemanticError("script declares no samples")
        return Script(tuple(self.statements))

    def parse_samples(self, cur: _Cursor) -> None:
        if self.decl is not None:
            raise ScriptSemanticError("samples already declared", cur.line,
                                      cur.tokens[0][1])
        token, col = cur.take("sample count")
        count = parse_int(token, cur.line, col)
        if count < 1:
            raise ScriptSemanticError("sample count must be at least 1", cur.line, col)
        orientations = None
        if cur.peek() == "orient":
            cur.take("orient")
            signs = []
            for _ in range(count):
                token, col = cur.take("+ or -")
                if token not in ("+", "-"):
                    raise ScriptSyntaxError(
                        f"bad orientation {token!r}", cur.line, col, expected=("+", "-")
                    )
                signs.append(1 if token == "+" else -1)
            orientations = tuple(signs)
        cur.end()
        self.decl = SamplesStmt(count, orientations)
        self.statements.append(self.decl)

    def _parse_passes(self, cur: _Cursor) -> tuple[tuple[int, float], ...]:
        token, col = cur.take("k=<float>")
        if not token.startswith("k="):
            raise ScriptSyntaxError(
                f"expected k=<float>, got {token!r}", cur.line, col, expected=("k=",)
            )
        kappa = parse_float(token[2:], cur.line, col)
        if kappa < 0:
            raise ScriptSemanticError("coupling must be non-negative", cur.line, col)
        token, col = cur.take("pass")
        if token != "pass":
            raise ScriptSyntaxError(
                f"expected pass, got {token!r}", cur.line, col, expected=("pass",)
            )
        passes: list[tuple[int, float]] = []
        while True:
            token = cur.peek()
            if token is None or token == "measure" or token.startswith("seed="):
                break
            token, col = cur.take("pass")
            m = _PASS_RE.match(token)
            if not m:
                if "@" in token:
                    raise ScriptLexError(f"bad pass {token!r}", cur.line, col)
                raise ScriptSyntaxError(
                    f"unexpected token {token!r}", cur.line, col,
                    expected=("<id>@<angle>", "measure", "seed="),
                )
            target, angle_s = m.groups()
            angle = parse_angle(angle_s, cur.line, col)
            if target == "*":
                passes.extend((sid, angle) for sid in range(1, self.count + 1))
            else:
                sid = parse_int(target, cur.line, col)
                self.check_sample(sid, cur, col)
                passes.append((sid, angle))
        if not passes:
            tail, tail_col = cur.tokens[-1]
            raise ScriptSyntaxError("a beam needs at least one pass", cur.line,
                                    tail_col + len(tail), expected=("<id>@<angle>",))
        seen = set()
        for sid, _ in passes:
            if sid in seen:
                raise ScriptSemanticError(
                    f"sample {sid} appears twice in one beam", cur.line, cur.tokens[0][1]
                )
            seen.add(sid)
        self._kappa = kappa
        return tuple(passes)

    def parse_beam(self, cur: _Cursor) -> None:
        passes = self._parse_passes(cur)
        measure = False
        pin = None
        seed = None
        if cur.peek() == "measure":
            cur.take("measure")
            measure = True
            if cur.peek() == "pin":
                _, col = cur.take("pin")
                token, col = cur.take("pinned outcome")
                pin = parse_float(token, cur.line, col)
                if not math.isfinite(pin):
                    raise ScriptSemanticError("pinned outcome must be finite",
                                              cur.line, col)
        token = cur.peek()
        if token is not None and token.startswith("seed="):
            token, col = cur.take("seed")
            if not measure:
                raise ScriptSemanticError("seed requires a measured beam", cur.line, col)
            if pin is not None:
                raise ScriptSemanticError("seed has no effect on a pinned outcome",
                                          cur.line, col)
            seed = parse_int(token[len("seed="):], cur.line, col)
        cur.end()
        self.statements.append(BeamStmt(self._kappa, passes, measure, pin, seed))

    def parse_verify(self, cur: _Cursor) -> None:
        passes = self._parse_passes(cur)
        cur.end()
        self.statements.append(VerifyStmt(self._kappa, passes))

    def parse_assert(self, cur: _Cursor) -> None:
        keyword, col = cur.take("criterion")
        handler = {
            "duan": self.parse_assert_duan,
            "pairwise": self.parse_assert_pairwise,
            "odd": self.parse_assert_odd,
            "vlf": self.parse_assert_vlf,
            "negativity": self.parse_assert_negativity,
            "nullifiers": self.parse_assert_nullifiers,
        }.get(keyword)
        if handler is None:
            raise ScriptSyntaxError(
                f"unknown criterion {keyword!r}", cur.line, col,
                expected=("duan", "pairwise", "odd", "vlf", "negativity", "nullifiers"),
            )
        handler(cur)

    def _take_pair(self, cur: _Cursor) -> tuple[int, int]:
        token, col = cur.take("sample id")
        i = parse_int(token, cur.line, col)
        self.check_sample(i, cur, col)
        token, col = cur.take("sample id")
        j = parse_int(token, cur.line, col)
        self.check_sample(j, cur, col)
        if i == j:
            raise ScriptSemanticError("the pair must name two distinct samples",
                                      cur.line, col)
        return i, j

    def parse_assert_duan(self, cur: _Cursor) -> None:
        i, j = self._take_pair(cur)
        found = _take_kv(cur, {"lambda": "", "signs": "", "expect": "", "tol": ""},
                         ("lambda", "expect"))
        value, col = found["lambda"]
        lam = parse_float(value, cur.line, col)
        if lam == 0 or not math.isfinite(lam):
            raise ScriptSemanticError("lambda must be finite and nonzero", cur.line, col)
        signs = (1, -1)
        if "signs" in found:
            value, col = found["signs"]
            if value == "+-":
                signs = (1, -1)
            elif value == "-+":
                signs = (-1, 1)
            else:
                raise ScriptSyntaxError(f"bad signs {value!r}", cur.line, col,
                                        expected=("+-", "-+"))
        expect = _parse_expect(found, cur, ("violated", "satisfied"))
        self.statements.append(
            AssertDuan(i, j, lam, expect, signs, _parse_tol(found, cur))
        )

    def parse_assert_pairwise(self, cur: _Cursor) -> None:
        i, j = self._take_pair(cur)
        found = _take_kv(cur, {"expect": "", "tol": ""}, ("expect",))
        expect = _parse_expect(found, cur, ("violated", "satisfied"))
        self.statements.append(AssertPairwise(i, j, expect, _parse_tol(found, cur)))

    def parse_assert_odd(self, cur: _Cursor) -> None:
        found = _take_kv(cur, {"expect": "", "tol": ""}, ("expect",))
        expect = _parse_expect(found, cur, ("violated", "satisfied"))
        orientations = self.decl.orientations or (1,) * self.count
        if sum(orientations) != 0:
            raise ScriptSemanticError(
                "the collective test needs zero net polarization", cur.line,
                cur.tokens[0][1],
            )
        self.statements.append(AssertOdd(expect, _parse_tol(found, cur)))

    def parse_assert_vlf(self, cur: _Cursor) -> None:
        found = _take_kv(cur, {"h": "", "g": "", "split": "", "expect": "", "tol": ""},
                         ("h", "g", "split", "expect"))
        coeffs = {}
        for key in ("h", "g"):
            value, col = found[key]
            coeffs[key] = tuple(
                parse_float(part, cur.line, col) for part in value.split(",")
            )
            if len(coeffs[key]) != self.count:
                raise ScriptSemanticError(
                    f"{key} needs one coefficient per sample ({self.count})",
                    cur.line, col,
                )
        value, col = found["split"]
        halves = value.split(":")
        if len(halves) != 2 or not halves[0] or not halves[1]:
            raise ScriptSyntaxError(f"bad split {value!r}", cur.line, col,
                                    expected=("<ids>:<ids>",))
        side_a = _parse_id_list(halves[0], cur, col)
        side_b = _parse_id_list(halves[1], cur, col)
        for sid in side_a + side_b:
            self.check_sample(sid, cur, col)
        if set(side_a) & set(side_b) or set(side_a) | set(side_b) != set(
            range(1, self.count + 1)
        ):
            raise ScriptSemanticError("split sides must partition the samples",
                                      cur.line, col)
        expect = _parse_expect(found, cur, ("violated", "satisfied"))
        self.statements.append(
            AssertVlf(coeffs["h"], coeffs["g"], tuple(sorted(set(side_a))), expect,
                      _parse_tol(found, cur))
        )

    def parse_assert_negativity(self, cur: _Cursor) -> None:
        ids = []
        while cur.peek() is not None and _INT_RE.match(cur.peek()):
            token, col = cur.take("sample id")
            sid = parse_int(token, cur.line, col)
            self.check_sample(sid, cur, col)
            ids.append(sid)
        if not ids:
            tail, tail_col = cur.tokens[-1]
            raise ScriptSyntaxError("missing sample ids", cur.line,
                                    tail_col + len(tail), expected=("<id>",))
        ids = tuple(sorted(set(ids)))
        if len(ids) >= self.count:
            raise ScriptSemanticError(
                "negativity needs a proper subset of the samples", cur.line,
                cur.tokens[0][1],
            )
        found = _take_kv(cur, {"expect": "", "tol": ""}, ("expect",))
        expect = _parse_expect(found, cur, ("zero", "positive"))
        self.statements.append(AssertNegativity(ids, expect, _parse_tol(found, cur)))

    def parse_assert_nullifiers(self, cur: _Cursor) -> None:
        found = _take_kv(cur, {"edges": "", "rotated": "", "expect": "", "tol": ""},
                         ("edges", "expect"))
        value, col = found["edges"]
        edges = []
        for part in value.split(","):
            ends = part.split("-")
            if len(ends) != 2:
                raise ScriptLexError(f"bad edge {part!r}", cur.line, col)
            a = parse_int(ends[0], cur.line, col)
            b = parse_int(ends[1], cur.line, col)
            self.check_sample(a, cur, col)
            self.check_sample(b, cur, col)
            edges.append((a, b))
        try:
            graph = Graph(self.count, edges)
        except ValueError as exc:
            raise ScriptSemanticError(str(exc), cur.line, col) from exc
        rotated = True
        if "rotated" in found:
            value, col = found["rotated"]
            if value not in ("true", "false"):
                raise ScriptSyntaxError(f"bad rotated value {value!r}", cur.line, col,
                                        expected=("true", "false"))
            rotated = value == "true"
        expect = _parse_expect(found, cur, ("below_vacuum", "at_vacuum"))
        self.statements.append(
            AssertNullifiers(graph.edges, expect, rotated, _parse_tol(found, cur))
        )

    def parse_report(self, cur: _Cursor) -> None:
        keyword, col = cur.take("report kind")
        if keyword == "var":
            terms: list[tuple[int, int, str]] = []
            while cur.peek() is not None:
                token, col = cur.take("term")
                m = _TERM_RE.match(token)
                if not m:
                    raise ScriptLexError(f"bad term {token!r} (want <sign><id><y|z>)",
                                         cur.line, col)
                sign_s, target, quad = m.groups()
                sign = 1 if sign_s == "+" else -1
                if target == "*":
                    terms.append((sign, "*", quad))
                else:
                    sid = parse_int(target, cur.line, col)
                    self.check_sample(sid, cur, col)
                    terms.append((sign, sid, quad))
            if not terms:
                tail, tail_col = cur.tokens[-1]
                raise ScriptSyntaxError("missing terms", cur.line, tail_col + len(tail),
                                        expected=("<sign><id><y|z>",))
            self.statements.append(ReportVar(tuple(terms)))
        elif keyword == "negativity":
            ids = []
            while cur.peek() is not None:
                token, col = cur.take("sample id")
                sid = parse_int(token, cur.line, col)
                self.check_sample(sid, cur, col)
                ids.append(sid)
            if not ids:
                tail, tail_col = cur.tokens[-1]
                raise ScriptSyntaxError("missing sample ids", cur.line,
                                        tail_col + len(tail), expected=("<id>",))
            ids = tuple(sorted(set(ids)))
            if len(ids) >= self.count:
                raise ScriptSemanticError(
                    "negativity needs a proper subset of the samples", cur.line,
                    cur.tokens[0][1],
                )
            self.statements.append(ReportNegativity(ids))
        else:
            raise ScriptSyntaxError(f"unknown report kind {keyword!r}", cur.line, col,
                                    expected=("var", "negativity"))


def parse_script(text: str) -> Script:
    """Parse script text; raises a ScriptError subclass on any malformation."""
    if not isinstance(text, str):
        raise ScriptLexError("script must be text")
    return _Parser().parse(text)


def _format_passes(kappa: float, passes) -> str:
    body = " ".join(f"{sid}@{format_angle(angle)}" for sid, angle in passes)
    return f"k={format_float(kappa)} pass {body}"


def _format_tol(tol: float) -> str:
    return "" if tol == DEFAULT_TOL else f" tol={format_float(tol)}"


def _format_statement(stmt: Statement) -> str:
    if isinstance(stmt, SamplesStmt):
        if stmt.orientations is None:
            return f"samples {stmt.count}"
        signs = " ".join("+" if o == 1 else "-" for o in stmt.orientations)
        return f"samples {stmt.count} orient {signs}"
    if isinstance(stmt, BeamStmt):
        text = f"beam {_format_passes(stmt.kappa, stmt.passes)}"
        if stmt.measure:
            text += " measure"
            if stmt.pin is not None:
                text += f" pin {format_float(stmt.pin)}"
        if stmt.seed is not None:
            text += f" seed={stmt.seed}"
        return text
    if isinstance(stmt, VerifyStmt):
        return f"verify {_format_passes(stmt.kappa, stmt.passes)}"
    if isinstance(stmt, AssertDuan):
        text = f"assert duan {stmt.i} {stmt.j} lambda={format_float(stmt.lam)}"
        if stmt.signs != (1, -1):
            text += " signs=-+"
        return text + f" expect={stmt.expect}" + _format_tol(stmt.tol)
    if isinstance(stmt, AssertPairwise):
        return (f"assert pairwise {stmt.i} {stmt.j} expect={stmt.expect}"
                + _format_tol(stmt.tol))
    if isinstance(stmt, AssertOdd):
        return f"assert odd expect={stmt.expect}" + _format_tol(stmt.tol)
    if isinstance(stmt, AssertVlf):
        h = ",".join(format_float(v) for v in stmt.h)
        g = ",".join(format_float(v) for v in stmt.g)
        side_a = ",".join(str(v) for v in stmt.side_a)
        side_b = ",".join(
            str(v) for v in range(1, len(stmt.h) + 1) if v not in set(stmt.side_a)
        )
        return (f"assert vlf h={h} g={g} split={side_a}:{side_b}"
                f" expect={stmt.expect}" + _format_tol(stmt.tol))
    if isinstance(stmt, AssertNegativity):
        ids = " ".join(str(v) for v in stmt.samples)
        return f"assert negativity {ids} expect={stmt.expect}" + _format_tol(stmt.tol)
    if isinstance(stmt, AssertNullifiers):
        edges = ",".join(f"{a}-{b}" for a, b in stmt.edges)
        text = f"assert nullifiers edges={edges}"
        if not stmt.rotated:
            text += " rotated=false"
        return text + f" expect={stmt.expect}" + _format_tol(stmt.tol)
    if isinstance(stmt, ReportVar):
        terms = " ".join(
            f"{'+' if sign == 1 else '-'}{sid}{quad}" for sign, sid, quad in stmt.terms
        )
        return f"report var {terms}"
    if isinstance(stmt, ReportNegativity):
        ids = " ".join(str(v) for v in stmt.samples)
        return f"report negativity {ids}"
    raise TypeError(f"not a statement: {stmt!r}")


def script_to_text(script: Script) -> str:
    """Canonical textual form; parse(script_to_text(s)) == s."""
    return "\n".join(_format_statement(stmt) for stmt in script.statements) + "\n"


def report_name(stmt: ReportStmt) -> str:
    """Stable key naming a report statement in run output and CSV headers."""
    text = _format_statement(stmt)
    assert text.startswith("report ")
    return text[len("report "):]
