"""Manifold file grammar: lexer, expression AST, parser, printer.

File layout (lines; '#' starts a comment):

    manifold NAME
    n = <int>
    d = <int>
    phi1 = <expr>
    ...
    phid = <expr>
    point z0 = <const>, ... ; s0 = <const>, ...   (zero or more)

Expressions use the tokens z1..zn, zb1..zbn (explicit conjugates),
s1..sd, the imaginary unit i, integer or rational literals (a/b), the
operators + - * ^ and parentheses.  Exponents are nonnegative integer
literals.  parse -> print -> parse is the identity on the AST.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .manifold import GenericManifold, ManifoldError
from .poly import Poly
from .registry import graph_registry
from .scalars import GaussianRational, I, ONE


class ManifoldSyntaxError(ValueError):
    def __init__(self, message, line, col):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


# -- AST -------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Imag:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Neg:
    operand: object


# -- lexer -----------------------------------------------------------------------

_PUNCT = set("+-*^(),;=")


def tokenize(text: str, line_no: int = 1):
    """Yield (kind, value, line, col) with kind in num/name/punct/end."""
    tokens = []
    i = 0
    col = 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t":
            i += 1
            col += 1
            continue
        if ch == "#":
            break
        start_col = col
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            num = int(text[i:j])
            den = 1
            if j < n and text[j] == "/":
                k = j + 1
                if k >= n or not text[k].isdigit():
                    raise ManifoldSyntaxError("malformed rational literal", line_no, start_col + (j - i))
                m = k
                while m < n and text[m].isdigit():
                    m += 1
                den = int(text[k:m])
                if den == 0:
                    raise ManifoldSyntaxError("zero denominator", line_no, start_col)
                j = m
            tokens.append(("num", Fraction(num, den), line_no, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], line_no, start_col))
            col += j - i
            i = j
            continue
        if ch in _PUNCT:
            tokens.append(("punct", ch, line_no, start_col))
            i += 1
            col += 1
            continue
        raise ManifoldSyntaxError(f"unexpected character {ch!r}", line_no, col)
    tokens.append(("end", None, line_no, col))
    return tokens


# -- expression parser (precedence climbing) ---------------------------------------


class _ExprParser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ManifoldSyntaxError(msg, tok[2], tok[3])

    def parse_expression(self):
        node = self.parse_term()
        while True:
            kind, val, _, _ = self.peek()
            if kind == "punct" and val in "+-":
                self.next()
                rhs = self.parse_term()
                node = Add(node, rhs) if val == "+" else Sub(node, rhs)
            else:
                return node

    def parse_term(self):
        node = self.parse_factor()
        while True:
            kind, val, _, _ = self.peek()
            if kind == "punct" and val == "*":
                self.next()
                node = Mul(node, self.parse_factor())
            else:
                return node

    def parse_factor(self):
        kind, val, _, _ = self.peek()
        if kind == "punct" and val == "-":
            self.next()
            return Neg(self.parse_factor())
        if kind == "punct" and val == "+":
            self.next()
            return self.parse_factor()
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        kind, val, _, _ = self.peek()
        if kind == "punct" and val == "^":
            self.next()
            tok = self.peek()
            if tok[0] != "num" or tok[1].denominator != 1 or tok[1] < 0:
                self.error("exponent must be a nonnegative integer")
            self.next()
            return Pow(base, int(tok[1]))
        return base

    def parse_atom(self):
        kind, val, line, col = self.peek()
        if kind == "num":
            self.next()
            return Num(val)
        if kind == "name":
            self.next()
            if val == "i":
                return Imag()
            return Var(val)
        if kind == "punct" and val == "(":
            self.next()
            node = self.parse_expression()
            tok = self.peek()
            if not (tok[0] == "punct" and tok[1] == ")"):
                self.error("expected ')'")
            self.next()
            return node
        self.error("expected a number, variable, or '('")


def parse_expression(text: str, line_no: int = 1):
    p = _ExprParser(tokenize(text, line_no))
    node = p.parse_expression()
    tok = p.peek()
    if tok[0] != "end":
        raise ManifoldSyntaxError(f"unexpected trailing input {tok[1]!r}", tok[2], tok[3])
    return node


# -- printer ------------------------------------------------------------------------

# precedence: Add/Sub = 1, Mul = 2, Neg = 3, Pow = 4, atoms = 5


def _prec(node):
    if isinstance(node, (Add, Sub)):
        return 1
    if isinstance(node, Mul):
        return 2
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def print_expression(node) -> str:
    def wrap(child, minimum):
        s = print_expression(child)
        return f"({s})" if _prec(child) < minimum else s

    if isinstance(node, Num):
        v = node.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(node, Imag):
        return "i"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Add):
        return f"{wrap(node.left, 1)} + {wrap(node.right, 2)}"
    if isinstance(node, Sub):
        return f"{wrap(node.left, 1)} - {wrap(node.right, 2)}"
    if isinstance(node, Mul):
        return f"{wrap(node.left, 2)}*{wrap(node.right, 3)}"
    if isinstance(node, Neg):
        return f"-{wrap(node.operand, 4)}"
    if isinstance(node, Pow):
        return f"{wrap(node.base, 5)}^{node.exponent}"
    raise TypeError(f"not an expression node: {node!r}")


# -- evaluation ---------------------------------------------------------------------


def expression_to_poly(node, registry) -> Poly:
    if isinstance(node, Num):
        return Poly.const(registry, GaussianRational(node.value, 0))
    if isinstance(node, Imag):
        return Poly.const(registry, I)
    if isinstance(node, Var):
        if node.name not in registry:
            raise ManifoldError(f"unknown variable {node.name!r}")
        return Poly.variable(registry, node.name)
    if isinstance(node, Add):
        return expression_to_poly(node.left, registry) + expression_to_poly(node.right, registry)
    if isinstance(node, Sub):
        return expression_to_poly(node.left, registry) - expression_to_poly(node.right, registry)
    if isinstance(node, Mul):
        return expression_to_poly(node.left, registry) * expression_to_poly(node.right, registry)
    if isinstance(node, Neg):
        return -expression_to_poly(node.operand, registry)
    if isinstance(node, Pow):
        return expression_to_poly(node.base, registry) ** node.exponent
    raise TypeError(f"not an expression node: {node!r}")


def constant_fold(node) -> GaussianRational:
    """Evaluate a variable-free expression exactly."""
    if isinstance(node, Num):
        return GaussianRational(node.value, 0)
    if isinstance(node, Imag):
        return I
    if isinstance(node, Add):
        return constant_fold(node.left) + constant_fold(node.right)
    if isinstance(node, Sub):
        return constant_fold(node.left) - constant_fold(node.right)
    if isinstance(node, Mul):
        return constant_fold(node.left) * constant_fold(node.right)
    if isinstance(node, Neg):
        return -constant_fold(node.operand)
    if isinstance(node, Pow):
        return constant_fold(node.base) ** node.exponent
    if isinstance(node, Var):
        raise ManifoldError(f"variable {node.name!r} in a constant context")
    raise TypeError(f"not an expression node: {node!r}")


def parse_gaussian(text: str, line_no: int = 1) -> GaussianRational:
    return constant_fold(parse_expression(text, line_no))


# -- manifold files -------------------------------------------------------------------


class ManifoldFile:
    """Parsed file: header, phi expression ASTs, and optional point blocks."""

    def __init__(self, name, n, d, phi_exprs, points):
        self.name = name
        self.n = n
        self.d = d
        self.phi_exprs = phi_exprs  # list of AST nodes
        self.points = points  # list of (z0: [GR], s0: [Fraction])

    def to_manifold(self) -> GenericManifold:
        reg = graph_registry(self.n, self.d)
        phi = [expression_to_poly(node, reg) for node in self.phi_exprs]
        return GenericManifold(self.n, self.d, phi, label=self.name)

    def __eq__(self, other):
        return (
            isinstance(other, ManifoldFile)
            and (self.name, self.n, self.d) == (other.name, other.n, other.d)
            and self.phi_exprs == other.phi_exprs
            and self.points == other.points
        )


def _split_assignment(text, line_no, expect_lhs=None):
    if "=" not in text:
        raise ManifoldSyntaxError("expected '='", line_no, len(text) + 1)
    lhs, rhs = text.split("=", 1)
    lhs = lhs.strip()
    if expect_lhs is not None and lhs != expect_lhs:
        raise ManifoldSyntaxError(f"expected '{expect_lhs} = ...'", line_no, 1)
    return lhs, rhs


def parse_manifold_text(text: str) -> ManifoldFile:
    lines = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((no, body))
    if not lines:
        raise ManifoldSyntaxError("empty manifold file", 1, 1)

    pos = 0

    def take():
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0]
            raise ManifoldSyntaxError("unexpected end of file", last + 1, 1)
        item = lines[pos]
        pos += 1
        return item

    no, body = take()
    if not body.startswith("manifold "):
        raise ManifoldSyntaxError("expected 'manifold NAME'", no, 1)
    name = body[len("manifold "):].strip()
    if not name or not all(c.isalnum() or c in "_-" for c in name):
        raise ManifoldSyntaxError("bad manifold name", no, len("manifold ") + 1)

    dims = {}
    for key in ("n", "d"):
        no, body = take()
        _, rhs = _split_assignment(body, no, expect_lhs=key)
        rhs = rhs.strip()
        if not rhs.isdigit() or int(rhs) < 1:
            raise ManifoldSyntaxError(f"{key} must be a positive integer", no, body.index("=") + 2)
        dims[key] = int(rhs)
    n, d = dims["n"], dims["d"]

    phi_exprs = []
    for j in range(1, d + 1):
        no, body = take()
        lhs, rhs = _split_assignment(body, no)
        if lhs != f"phi{j}":
            raise ManifoldSyntaxError(f"expected 'phi{j} = ...'", no, 1)
        phi_exprs.append(parse_expression(rhs, no))

    points = []
    while pos < len(lines):
        no, body = take()
        if not body.startswith("point "):
            raise ManifoldSyntaxError("expected a 'point' line or end of file", no, 1)
        points.append(parse_point_spec(body[len("point "):], no, n, d))
    return ManifoldFile(name, n, d, phi_exprs, points)


def parse_point_spec(text: str, line_no: int, n: int, d: int):
    """'z0 = c1, ..., cn ; s0 = r1, ..., rd' with exact constant entries."""
    if ";" not in text:
        raise ManifoldSyntaxError("point needs 'z0 = ... ; s0 = ...'", line_no, 1)
    left, right = text.split(";", 1)
    _, zpart = _split_assignment(left.strip(), line_no, expect_lhs="z0")
    _, spart = _split_assignment(right.strip(), line_no, expect_lhs="s0")
    z0 = [parse_gaussian(chunk, line_no) for chunk in zpart.split(",")]
    s0c = [parse_gaussian(chunk, line_no) for chunk in spart.split(",")]
    if len(z0) != n:
        raise ManifoldSyntaxError(f"z0 needs {n} entries", line_no, 1)
    if len(s0c) != d:
        raise ManifoldSyntaxError(f"s0 needs {d} entries", line_no, 1)
    for v in s0c:
        if not v.is_real():
            raise ManifoldSyntaxError("s0 entries must be real", line_no, 1)
    return (z0, [v.re for v in s0c])


def print_manifold_file(mf: ManifoldFile) -> str:
    out = [f"manifold {mf.name}", f"n = {mf.n}", f"d = {mf.d}"]
    for j, node in enumerate(mf.phi_exprs, start=1):
        out.append(f"phi{j} = {print_expression(node)}")
    for z0, s0 in mf.points:
        zs = ", ".join(_print_gaussian_expr(v) for v in z0)
        ss = ", ".join(
            str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"
            for r in s0
        )
        out.append(f"point z0 = {zs} ; s0 = {ss}")
    return "\n".join(out) + "\n"


def _print_gaussian_expr(v: GaussianRational) -> str:
    def frac(f):
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"

    if not v.im:
        return frac(v.re)
    imp = f"{frac(v.im)}*i" if v.im != 1 else "i"
    if v.im == -1:
        imp = "-i"
    if not v.re:
        return imp
    if imp.startswith("-"):
        return f"{frac(v.re)} - {imp[1:]}"
    return f"{frac(v.re)} + {imp}"


def parse_manifold_file(path) -> ManifoldFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_manifold_text(fh.read())


def load_fixture(name: str) -> ManifoldFile:
    """Named fixture shipped with the package (heis2, plane, prod3, st0, st3)."""
    from importlib import resources

    ref = resources.files("crwb").joinpath("fixtures", f"{name.lower()}.m")
    return parse_manifold_text(ref.read_text(encoding="utf-8"))
