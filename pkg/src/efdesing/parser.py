"""Recursive-descent parser for the problem-file language.

Expressions::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | base ('^' uint)?
    base    := int | VAR | '(' expr ')'

A rational literal ``p/q`` is read as a division.  The unary minus is an
extension so that printed polynomials read back.
"""

import re
import shlex
from dataclasses import dataclass, field
from fractions import Fraction

from .core_exact import Poly, RatFun
from .errors import AlgebraError, ParseError
from .efunc import (
    bessel_type_function, cos_function, exp_function, poly_times_exp,
    recurrence_function, sin_function,
)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def tokenize(text, line=1):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.lastindex is None:
            break
        start = m.start(m.lastindex)
        kind = ("num", "name", "op")[m.lastindex - 1]
        tokens.append((kind, m.group(m.lastindex), line, start + 1))
        pos = m.end()
    tokens.append(("end", "", line, len(text) + 1))
    return tokens


class _Linear:
    """sum_j c_j(k) a[k+j] while parsing a recurrence right-hand side."""

    def __init__(self, terms):
        self.terms = terms

    def _combine(self, other, sign):
        if not isinstance(other, _Linear):
            raise AlgebraError("constant term in a homogeneous recurrence")
        out = dict(self.terms)
        for j, c in other.terms.items():
            out[j] = out.get(j, RatFun.coerce(0)) + c * sign
        return _Linear(out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __radd__(self, other):
        raise AlgebraError("constant term in a homogeneous recurrence")

    __rsub__ = __radd__

    def __neg__(self):
        return _Linear({j: -c for j, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, _Linear):
            raise AlgebraError("nonlinear recurrence")
        return _Linear({j: c * other for j, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _Linear):
            raise AlgebraError("nonlinear recurrence")
        return _Linear({j: c / other for j, c in self.terms.items()})

    def __rtruediv__(self, other):
        raise AlgebraError("nonlinear recurrence")


class ExprParser:
    def __init__(self, text, var="z", line=1, allow_sequence=False):
        self.text = text
        self.var = var
        self.tokens = tokenize(text, line)
        self.i = 0
        self.allow_sequence = allow_sequence

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok[2], tok[3])

    def expect(self, value):
        tok = self.next()
        if tok[1] != value:
            raise self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def parse(self):
        value = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[1] in ("*", "/"):
            tok = self.next()
            rhs = self.factor()
            if tok[1] == "*":
                value = value * rhs
            else:
                if isinstance(rhs, RatFun) and not rhs:
                    raise ParseError("division by the zero polynomial", tok[2], tok[3])
                value = value / rhs
        return value

    def factor(self):
        if self.peek()[1] == "-":
            self.next()
            return -self.factor()
        value = self.base()
        if self.peek()[1] == "^":
            self.next()
            tok = self.next()
            if tok[0] != "num":
                raise self.error("exponent must be a non-negative integer", tok)
            if isinstance(value, _Linear):
                raise self.error("nonlinear recurrence", tok)
            value = value ** int(tok[1])
        return value

    def base(self):
        tok = self.next()
        kind, text = tok[0], tok[1]
        if kind == "num":
            return RatFun.coerce(int(text))
        if kind == "name" and text == self.var:
            return RatFun(Poly.z(), None, True)
        if kind == "name" and text == "a" and self.allow_sequence:
            return self._sequence_ref()
        if text == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise self.error(f"unexpected {text or 'end of input'!r}", tok)

    def _sequence_ref(self):
        self.expect("[")
        tok = self.next()
        if tok[1] != self.var:
            raise self.error(f"expected {self.var!r}", tok)
        shift = 0
        if self.peek()[1] == "+":
            self.next()
            tok = self.next()
            if tok[0] != "num":
                raise self.error("expected an integer shift", tok)
            shift = int(tok[1])
        self.expect("]")
        return _Linear({shift: RatFun.coerce(1)})


def parse_ratfun(text, var="z", line=1):
    """Parse an expression into a normalized RatFun."""
    value = ExprParser(text, var, line).parse()
    return RatFun.coerce(value)


def parse_rational(text, line=1):
    value = parse_ratfun(text, line=line)
    if not value.is_poly() or value.num.degree > 0:
        raise ParseError(f"expected a rational constant, got {text!r}", line, 1)
    return value.num[0]


def parse_poly(text, line=1):
    value = parse_ratfun(text, line=line)
    if not value.is_poly():
        raise ParseError(f"expected a polynomial, got {text!r}", line, 1)
    return value.as_poly()


def _call_arg(text, name):
    m = re.fullmatch(rf"\s*{name}\s*\((.*)\)\s*", text, re.S)
    return m.group(1) if m else None


def parse_recurrence(text, line=1):
    """``rec: a[k+r] = q(k)*a[k+r-1] + ... ; init: v0, v1, ...``"""
    body = text.split(":", 1)[1]
    parts = [p.strip() for p in body.split(";") if p.strip()]
    if len(parts) != 2 or not parts[1].startswith("init"):
        raise ParseError("recurrence needs 'a[k+r] = ...; init: ...'", line, 1)
    eq, init = parts
    if "=" not in eq:
        raise ParseError("recurrence needs '='", line, 1)
    lhs, rhs = eq.split("=", 1)
    left = ExprParser(lhs, "k", line, allow_sequence=True).parse()
    if not isinstance(left, _Linear) or len(left.terms) != 1 or list(left.terms.values())[0] != 1:
        raise ParseError("left-hand side must be a[k+r]", line, 1)
    r = next(iter(left.terms))
    right = ExprParser(rhs, "k", line, allow_sequence=True).parse()
    if not isinstance(right, _Linear):
        raise ParseError("right-hand side must be linear in a[k+j]", line, 1)
    if any(j >= r or j < 0 for j in right.terms):
        raise ParseError(f"right-hand side may only use a[k]..a[k+{r - 1}]", line, 1)
    coeffs = [right.terms.get(j, RatFun.coerce(0)) for j in range(r)]
    values = [parse_rational(v, line) for v in init.split(":", 1)[1].split(",") if v.strip()]
    return recurrence_function(coeffs, values, name=text.strip())


def parse_efunction(text, line=1):
    """E-function text: exp(c), poly(p)*exp(c), cos(c), sin(c), bessel0, or rec: ..."""
    t = text.strip()
    if t.startswith("rec:"):
        return parse_recurrence(t, line)
    if t == "bessel0":
        return bessel_type_function()
    for name, ctor in (("exp", exp_function), ("cos", cos_function), ("sin", sin_function)):
        arg = _call_arg(t, name)
        if arg is not None and _balanced(arg):
            return ctor(parse_rational(arg, line))
    m = re.fullmatch(r"poly\s*\((.*)\)\s*\*\s*exp\s*\((.*)\)", t, re.S)
    if m and _balanced(m.group(1)) and _balanced(m.group(2)):
        return poly_times_exp(parse_poly(m.group(1), line), parse_rational(m.group(2), line))
    raise ParseError(f"unrecognized E-function {t!r}", line, 1)


def _balanced(s):
    depth = 0
    for ch in s:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


COMMANDS = ("desing", "relations", "apparent", "sympow", "minop", "growth", "series", "check")


@dataclass
class ProblemFile:
    system: list                      # rows of RatFun
    functions: list = field(default_factory=list)
    function_specs: list = field(default_factory=list)
    operator: list = None             # coefficient polynomials p_0..p_r
    tasks: list = field(default_factory=list)   # (name, [args])


def parse_problem(text):
    """Parse a problem file with [system], [functions], [operator], [tasks]."""
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            current = m.group(1)
            if current not in ("system", "functions", "operator", "tasks"):
                raise ParseError(f"unknown section [{current}]", lineno, 1)
            sections.setdefault(current, [])
            continue
        if current is None:
            raise ParseError("content before the first section", lineno, 1)
        sections[current].append((lineno, line))
    if "system" not in sections:
        raise ParseError("missing [system] section", 1, 1)
    system = []
    for lineno, line in sections["system"]:
        system.append([parse_ratfun(e, line=lineno) for e in line.split(";")])
    n = len(system)
    if any(len(r) != n for r in system):
        raise AlgebraError(f"system matrix is not square ({n} rows)")
    functions, specs = [], []
    for lineno, line in sections.get("functions", []):
        functions.append(parse_efunction(line, lineno))
        specs.append(line)
    if functions and len(functions) != n:
        raise AlgebraError(f"{len(functions)} functions for a system of dimension {n}")
    operator = None
    if sections.get("operator"):
        joined = ";".join(line for _, line in sections["operator"])
        lineno = sections["operator"][0][0]
        operator = [parse_poly(p, lineno) for p in joined.split(";") if p.strip()]
    tasks = []
    for lineno, line in sections.get("tasks", []):
        words = shlex.split(line)
        if words[0] not in COMMANDS:
            raise ParseError(f"unknown task {words[0]!r}", lineno, 1)
        tasks.append((words[0], words[1:]))
    return ProblemFile(system, functions, specs, operator, tasks)
