"""A small plain-text config language for charts, metrics, structures and maps.

Statement forms (one per line, ``#`` starts a comment)::

    dim = 2
    domain x1 = [0.2, 1.7]
    g = [[1, 0], [0, sin(x1)^2]]      # or elementwise: g[2][2] = sin(x1)^2
    J = [[0, -1], [1, 0]]             # optional
    map square -> 2 = [x1^2 - x2^2, 2*x1*x2]

Expressions use coordinates x1..xd, numeric literals, ``+ - * / ^``, unary
minus and the functions sin cos tan exp log sqrt atan2.  ``^`` is
right-associative and binds tighter than unary minus, so ``-x1^2`` is
``-(x1^2)``.  The grammar has no conditionals or user functions, keeping every
parsed field smooth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (ConfigError, DimensionMismatch, DslSyntaxError,
                     EvaluationError, UnknownSymbol)

FUNCTIONS = {
    "sin": (1, math.sin),
    "cos": (1, math.cos),
    "tan": (1, math.tan),
    "exp": (1, math.exp),
    "log": (1, math.log),
    "sqrt": (1, math.sqrt),
    "atan2": (2, math.atan2),
}


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Coord:
    index: int  # 1-based, as written


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


Expr = Num | Coord | Neg | BinOp | Call


def evaluate(expr: Expr, point) -> float:
    """Evaluate recursively; NaN/Inf and math-domain violations raise
    EvaluationError."""
    point = np.asarray(point, dtype=float)
    try:
        value = _eval(expr, point)
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise EvaluationError(str(exc)) from exc
    if not math.isfinite(value):
        raise EvaluationError(f"expression produced {value}")
    return value


def _eval(expr: Expr, point: np.ndarray) -> float:
    if isinstance(expr, Num):
        return expr.value
    if isinstance(expr, Coord):
        if expr.index > len(point):
            raise EvaluationError(
                f"coordinate x{expr.index} beyond point of dimension {len(point)}")
        return float(point[expr.index - 1])
    if isinstance(expr, Neg):
        return -_eval(expr.arg, point)
    if isinstance(expr, BinOp):
        a = _eval(expr.left, point)
        b = _eval(expr.right, point)
        if expr.op == "+":
            return a + b
        if expr.op == "-":
            return a - b
        if expr.op == "*":
            return a * b
        if expr.op == "/":
            return a / b
        return math.pow(a, b)
    arity, fn = FUNCTIONS[expr.name]
    return fn(*(_eval(a, point) for a in expr.args))


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def pretty(expr: Expr) -> str:
    """Canonical source form; parses back to an equal tree."""
    return _pretty(expr, 0)


def _pretty(expr: Expr, parent: int) -> str:
    if isinstance(expr, Num):
        return repr(expr.value)
    if isinstance(expr, Coord):
        return f"x{expr.index}"
    if isinstance(expr, Call):
        return f"{expr.name}({', '.join(_pretty(a, 0) for a in expr.args)})"
    if isinstance(expr, Neg):
        inner = _pretty(expr.arg, _PRECEDENCE["neg"])
        out = f"-{inner}"
        return f"({out})" if parent > _PRECEDENCE["neg"] else out
    prec = _PRECEDENCE[expr.op]
    # left-associative chains reparse correctly without parens on the left;
    # the right operand needs them at equal precedence (except ^, which is
    # right-associative and needs them on the left instead)
    if expr.op == "^":
        left = _pretty(expr.left, prec + 1)
        right = _pretty(expr.right, prec)
    else:
        left = _pretty(expr.left, prec)
        right = _pretty(expr.right, prec + 1)
    out = f"{left} {expr.op} {right}"
    return f"({out})" if parent > prec else out


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # NUMBER IDENT SYMBOL END
    text: str
    line: int
    col: int


_SYMBOLS = ("->", "+", "-", "*", "/", "^", "(", ")", "[", "]", ",", "=")


def _tokenize_line(text: str, line_no: int) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "#":
            break
        if ch.isspace():
            i += 1
            continue
        col = i + 1
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            tokens.append(_Token("NUMBER", text[i:j], line_no, col))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("IDENT", text[i:j], line_no, col))
            i = j
            continue
        matched = None
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                matched = sym
                break
        if matched is None:
            raise DslSyntaxError(line_no, col, f"a token (got {ch!r})")
        tokens.append(_Token("SYMBOL", matched, line_no, col))
        i += len(matched)
    tokens.append(_Token("END", "", line_no, len(text) + 1))
    return tokens


class _Parser:
    """Recursive descent over one statement line."""

    def __init__(self, tokens: list[_Token], dim: int | None):
        self.tokens = tokens
        self.pos = 0
        self.dim = dim

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def error(self, expected: str):
        tok = self.current
        raise DslSyntaxError(tok.line, tok.col, expected)

    def accept(self, kind: str, text: str | None = None) -> _Token | None:
        tok = self.current
        if tok.kind == kind and (text is None or tok.text == text):
            self.pos += 1
            return tok
        return None

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.accept(kind, text)
        if tok is None:
            self.error(text if text is not None else kind.lower())
        return tok

    def at_end(self) -> bool:
        return self.current.kind == "END"

    # expression grammar -----------------------------------------------------

    def expr(self) -> Expr:
        node = self.term()
        while True:
            if self.accept("SYMBOL", "+"):
                node = BinOp("+", node, self.term())
            elif self.accept("SYMBOL", "-"):
                node = BinOp("-", node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.unary()
        while True:
            if self.accept("SYMBOL", "*"):
                node = BinOp("*", node, self.unary())
            elif self.accept("SYMBOL", "/"):
                node = BinOp("/", node, self.unary())
            else:
                return node

    def unary(self) -> Expr:
        if self.accept("SYMBOL", "-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("SYMBOL", "^"):
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.accept("NUMBER")
        if tok is not None:
            return Num(float(tok.text))
        if self.accept("SYMBOL", "("):
            node = self.expr()
            self.expect("SYMBOL", ")")
            return node
        tok = self.accept("IDENT")
        if tok is not None:
            name = tok.text
            if name in FUNCTIONS:
                self.expect("SYMBOL", "(")
                args = [self.expr()]
                while self.accept("SYMBOL", ","):
                    args.append(self.expr())
                self.expect("SYMBOL", ")")
                arity = FUNCTIONS[name][0]
                if len(args) != arity:
                    raise DslSyntaxError(tok.line, tok.col,
                                         f"{arity} argument(s) to {name}")
                return Call(name, tuple(args))
            if name.startswith("x") and name[1:].isdigit():
                index = int(name[1:])
                if index < 1:
                    raise UnknownSymbol(f"line {tok.line}: {name!r} is not a coordinate")
                if self.dim is not None and index > self.dim:
                    raise DimensionMismatch(
                        f"line {tok.line}: coordinate {name} exceeds dimension {self.dim}")
                return Coord(index)
            raise UnknownSymbol(f"line {tok.line}, col {tok.col}: unknown symbol {name!r}")
        self.error("a number, coordinate, function or '('")

    # bracketed collections ---------------------------------------------------

    def vector(self) -> list[Expr]:
        self.expect("SYMBOL", "[")
        items = [self.expr()]
        while self.accept("SYMBOL", ","):
            items.append(self.expr())
        self.expect("SYMBOL", "]")
        return items

    def matrix(self) -> list[list[Expr]]:
        self.expect("SYMBOL", "[")
        rows = [self.vector()]
        while self.accept("SYMBOL", ","):
            rows.append(self.vector())
        self.expect("SYMBOL", "]")
        return rows


def parse_expr(text: str, dim: int | None = None, line_no: int = 1) -> Expr:
    """Parse one standalone expression."""
    parser = _Parser(_tokenize_line(text, line_no), dim)
    try:
        node = parser.expr()
    except RecursionError:
        raise DslSyntaxError(line_no, parser.current.col, "a less deeply nested expression")
    if not parser.at_end():
        parser.error("end of expression")
    return node


# ---------------------------------------------------------------------------
# config
# ---------------------------------------------------------------------------

#: Load-time validation bound on J^2 + I.
J_SQUARE_TOL = 1e-9
#: Asymmetry beyond this triggers a symmetrization warning.
SYMMETRY_WARN = 1e-12


@dataclass
class GeoConfig:
    """Parsed chart description: dimension, box, metric/structure/map trees."""

    dim: int
    domain: list
    metric: list          # dim x dim nested list of Expr
    structure: list | None
    maps: dict            # name -> (target_dim, [Expr])
    warnings: list = field(default_factory=list)

    def metric_fn(self) -> Callable:
        def fn(x):
            g = np.array([[evaluate(self.metric[i][j], x) for j in range(self.dim)]
                          for i in range(self.dim)])
            return 0.5 * (g + g.T)
        return fn

    def structure_fn(self) -> Callable | None:
        if self.structure is None:
            return None

        def fn(x):
            return np.array([[evaluate(self.structure[i][j], x)
                              for j in range(self.dim)] for i in range(self.dim)])
        return fn

    def map_fn(self, name: str) -> tuple[int, Callable]:
        target_dim, exprs = self.maps[name]

        def fn(x):
            return np.array([evaluate(e, x) for e in exprs])
        return target_dim, fn

    def probe_points(self, count: int = 5) -> list[np.ndarray]:
        lo = np.array([a for a, _ in self.domain])
        hi = np.array([b for _, b in self.domain])
        rng = np.random.default_rng(0)
        pts = [0.5 * (lo + hi)]
        for _ in range(count - 1):
            pts.append(rng.uniform(lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo)))
        return pts

    def to_source(self) -> str:
        lines = [f"dim = {self.dim}"]
        for i, (a, b) in enumerate(self.domain):
            lines.append(f"domain x{i + 1} = [{a!r}, {b!r}]")
        rows = ", ".join("[" + ", ".join(pretty(e) for e in row) + "]"
                         for row in self.metric)
        lines.append(f"g = [{rows}]")
        if self.structure is not None:
            rows = ", ".join("[" + ", ".join(pretty(e) for e in row) + "]"
                             for row in self.structure)
            lines.append(f"J = [{rows}]")
        for name, (target_dim, exprs) in self.maps.items():
            body = ", ".join(pretty(e) for e in exprs)
            lines.append(f"map {name} -> {target_dim} = [{body}]")
        return "\n".join(lines) + "\n"


def _constant(expr: Expr, line_no: int) -> float:
    try:
        return evaluate(expr, np.zeros(0))
    except EvaluationError as exc:
        raise DslSyntaxError(line_no, 1, f"a constant expression ({exc})") from exc


def parse(source: str) -> GeoConfig:
    """Parse and numerically validate a config; all failures are structured
    DslError subclasses."""
    try:
        return _parse(source)
    except RecursionError:
        raise DslSyntaxError(0, 0, "a less deeply nested input")


def _parse(source: str) -> GeoConfig:
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DslSyntaxError(0, 0, f"UTF-8 text ({exc})") from exc
    dim: int | None = None
    domain: dict[int, tuple] = {}
    metric_rows: list | None = None
    metric_elems: dict[tuple, Expr] = {}
    structure_rows: list | None = None
    structure_elems: dict[tuple, Expr] = {}
    maps: dict[str, tuple] = {}

    for line_no, raw in enumerate(source.splitlines(), start=1):
        tokens = _tokenize_line(raw, line_no)
        p = _Parser(tokens, dim)
        if p.at_end():
            continue
        head = p.expect("IDENT")
        if head.text == "dim":
            p.expect("SYMBOL", "=")
            tok = p.expect("NUMBER")
            value = float(tok.text)
            if value != int(value) or int(value) < 1:
                raise DslSyntaxError(tok.line, tok.col, "a positive integer dimension")
            dim = int(value)
        elif head.text == "domain":
            axis = p.expect("IDENT")
            if not (axis.text.startswith("x") and axis.text[1:].isdigit()):
                raise DslSyntaxError(axis.line, axis.col, "a coordinate name like x1")
            idx = int(axis.text[1:])
            p.expect("SYMBOL", "=")
            p.expect("SYMBOL", "[")
            lo = _constant(p.expr(), line_no)
            p.expect("SYMBOL", ",")
            hi = _constant(p.expr(), line_no)
            p.expect("SYMBOL", "]")
            if lo >= hi:
                raise ConfigError(f"line {line_no}: empty domain interval for x{idx}")
            domain[idx] = (lo, hi)
        elif head.text in ("g", "J"):
            target_rows = "metric" if head.text == "g" else "structure"
            if p.accept("SYMBOL", "["):
                i_tok = p.expect("NUMBER")
                p.expect("SYMBOL", "]")
                p.expect("SYMBOL", "[")
                j_tok = p.expect("NUMBER")
                p.expect("SYMBOL", "]")
                p.expect("SYMBOL", "=")
                expr = p.expr()
                i, j = int(float(i_tok.text)), int(float(j_tok.text))
                if i < 1 or j < 1:
                    raise DslSyntaxError(i_tok.line, i_tok.col, "1-based indices")
                if target_rows == "metric":
                    metric_elems[(i, j)] = expr
                else:
                    structure_elems[(i, j)] = expr
            else:
                p.expect("SYMBOL", "=")
                rows = p.matrix()
                if target_rows == "metric":
                    metric_rows = rows
                else:
                    structure_rows = rows
        elif head.text == "map":
            name = p.expect("IDENT").text
            p.expect("SYMBOL", "->")
            tgt = p.expect("NUMBER")
            target_dim = int(float(tgt.text))
            if target_dim < 1:
                raise DslSyntaxError(tgt.line, tgt.col, "a positive target dimension")
            p.expect("SYMBOL", "=")
            exprs = p.vector()
            if len(exprs) != target_dim:
                raise DimensionMismatch(
                    f"line {line_no}: map {name!r} declares target dimension "
                    f"{target_dim} but has {len(exprs)} components")
            maps[name] = (target_dim, exprs)
        else:
            raise DslSyntaxError(head.line, head.col,
                                 "'dim', 'domain', 'g', 'J' or 'map'")
        if not p.at_end():
            p.error("end of line")

    if dim is None:
        raise ConfigError("no 'dim = <n>' statement")
    warnings: list[str] = []
    metric = _assemble_matrix(metric_rows, metric_elems, dim, "g")
    if metric is None:
        raise ConfigError("no metric given (use 'g = [[...]]' or 'g[i][j] = ...')")
    structure = _assemble_matrix(structure_rows, structure_elems, dim, "J")
    for idx in domain:
        if idx > dim:
            raise DimensionMismatch(f"domain declared for x{idx} but dim = {dim}")
    box = [domain.get(i + 1, (-1.0, 1.0)) for i in range(dim)]
    config = GeoConfig(dim, box, metric, structure, maps, warnings)
    _validate(config)
    return config


def _assemble_matrix(rows, elems, dim: int, label: str):
    if rows is not None and elems:
        raise ConfigError(f"{label}: mix of whole-matrix and elementwise assignments")
    if rows is not None:
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise DimensionMismatch(f"{label} must be a {dim} x {dim} matrix")
        return rows
    if elems:
        out = [[Num(0.0) for _ in range(dim)] for _ in range(dim)]
        for (i, j), expr in elems.items():
            if i > dim or j > dim:
                raise DimensionMismatch(f"{label}[{i}][{j}] exceeds dimension {dim}")
            out[i - 1][j - 1] = expr
        return out
    return None


def _validate(config: GeoConfig) -> None:
    probes = config.probe_points()
    metric = config.metric_fn()
    for p in probes:
        raw = np.array([[evaluate(config.metric[i][j], p) for j in range(config.dim)]
                        for i in range(config.dim)])
        asym = float(np.max(np.abs(raw - raw.T)))
        if asym > SYMMETRY_WARN:
            config.warnings.append(
                f"metric asymmetry {asym:.3g} at probe {p.tolist()}; symmetrized")
        g = metric(p)
        eigs = np.linalg.eigvalsh(g)
        if eigs.min() <= 0:
            raise ConfigError(f"metric is not positive-definite at probe {p.tolist()}")
    structure = config.structure_fn()
    if structure is not None:
        if config.dim % 2 != 0:
            raise ConfigError("J needs an even-dimensional chart")
        for p in probes:
            j = structure(p)
            resid = float(np.max(np.abs(j @ j + np.eye(config.dim))))
            if resid > J_SQUARE_TOL:
                raise ConfigError(
                    f"J^2 + I has residual {resid:.3g} at probe {p.tolist()}")
    for name, (target_dim, exprs) in config.maps.items():
        for p in probes:
            for e in exprs:
                evaluate(e, p)


def to_chart(config: GeoConfig, name: str = "user"):
    """Build (Chart, AlmostComplexField | None) from a parsed config."""
    from .hermitian import AlmostComplexField
    from .manifold import Box, Chart

    box = Box(tuple(a for a, _ in config.domain), tuple(b for _, b in config.domain))
    chart = Chart(dim=config.dim, box=box, metric_fn=config.metric_fn(), name=name)
    structure_fn = config.structure_fn()
    structure = None
    if structure_fn is not None:
        structure = AlmostComplexField(chart, structure_fn, source="intrinsic")
    return chart, structure


def to_map(config: GeoConfig, name: str, cfg, source_chart=None, structure=None):
    """Build a MapSpec for a named config map; the target is a flat chart."""
    from .catalog import multiplication_by_i
    from .hermitian import AlmostComplexField
    from .manifold import Box, Chart
    from .maps import MapSpec

    if source_chart is None:
        source_chart, structure = to_chart(config)
    target_dim, fn = config.map_fn(name)
    target = Chart(dim=target_dim,
                   box=Box((-1e9,) * target_dim, (1e9,) * target_dim),
                   metric_fn=lambda x: np.eye(target_dim), name=f"{name}-target")
    target_structure = None
    if target_dim % 2 == 0 and structure is not None:
        target_structure = AlmostComplexField(
            target, lambda x: multiplication_by_i(target_dim // 2), source="intrinsic")
    return MapSpec(source_chart, target, fn, cfg, source_structure=structure,
                   target_structure=target_structure, name=name)
