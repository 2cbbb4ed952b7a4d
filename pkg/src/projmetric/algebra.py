"""Exact multivariate polynomials with rational coefficients.

A :class:`Poly` carries an ordered tuple of variable names and a dict from
exponent tuples to nonzero coefficients.  Coefficients are Python ``int``
whenever integral and :class:`fractions.Fraction` otherwise, which keeps the
integer-heavy tensor contractions fast while staying exact.

Polynomials over different variable tuples combine freely; the result lives
over the union (left operand's order first).  Equality is semantic, so
``x1`` declared over ``("x1",)`` equals ``x1`` declared over
``("x1", "x2", "x3")``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from operator import add
from typing import Iterable, Mapping, Sequence

from .errors import (
    ExponentError,
    MissingAssignmentError,
    ParseError,
    UnknownIdentifierError,
)

Rat = Fraction
Monomial = tuple[int, ...]


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def as_rat(value) -> Fraction:
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


class Poly:
    __slots__ = ("variables", "terms", "_canon")

    def __init__(self, terms: Mapping[Monomial, object] | None = None,
                 variables: Sequence[str] = ()):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    if len(e) != n:
                        raise ValueError(f"exponent {e} does not match {self.variables}")
                    clean[tuple(e)] = _norm(c)
        self.terms = clean
        self._canon = None

    @classmethod
    def _raw(cls, terms: dict, variables: tuple) -> "Poly":
        # trusted constructor: terms already normalised and zero-free
        p = object.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._canon = None
        return p

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, variables: Sequence[str] = ()) -> "Poly":
        return cls._raw({}, tuple(variables))

    @classmethod
    def const(cls, c, variables: Sequence[str] = ()) -> "Poly":
        variables = tuple(variables)
        c = _norm(as_rat(c)) if not isinstance(c, int) else c
        if not c:
            return cls._raw({}, variables)
        return cls._raw({(0,) * len(variables): c}, variables)

    @classmethod
    def var(cls, name: str, variables: Sequence[str] | None = None) -> "Poly":
        variables = (name,) if variables is None else tuple(variables)
        if name not in variables:
            raise UnknownIdentifierError(f"variable {name!r} not in {variables}")
        e = tuple(1 if v == name else 0 for v in variables)
        return cls._raw({e: 1}, variables)

    @classmethod
    def coerce(cls, value, variables: Sequence[str] = ()) -> "Poly":
        if isinstance(value, Poly):
            return value
        return cls.const(value, variables)

    # -- basic queries --------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial (raises if not constant)."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        if not self.terms:
            return Fraction(0)
        return Fraction(next(iter(self.terms.values())))

    def free_variables(self) -> tuple[str, ...]:
        used = [False] * len(self.variables)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def degree(self, variable: str | None = None) -> int:
        if not self.terms:
            return -1
        if variable is None:
            return max(sum(e) for e in self.terms)
        if variable not in self.variables:
            return 0
        i = self.variables.index(variable)
        return max(e[i] for e in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    # -- alignment ------------------------------------------------------
    def over(self, variables: Sequence[str]) -> "Poly":
        """Re-express over ``variables`` (must contain every used variable)."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        n = len(variables)
        idx = []
        for i, v in enumerate(self.variables):
            idx.append(pos.get(v))
        out = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, k in enumerate(e):
                if k:
                    j = idx[i]
                    if j is None:
                        raise UnknownIdentifierError(
                            f"variable {self.variables[i]!r} not in {variables}")
                    new[j] = k
            out[tuple(new)] = c
        return Poly._raw(out, variables)

    @staticmethod
    def _align(a: "Poly", b: "Poly") -> tuple[dict, dict, tuple]:
        va, vb = a.variables, b.variables
        if va is vb or va == vb:
            return a.terms, b.terms, va
        if not vb:
            return a.terms, b.over(va).terms, va
        if not va:
            return a.over(vb).terms, b.terms, vb
        extra = tuple(v for v in vb if v not in va)
        union = va + extra
        return a.over(union).terms, b.over(union).terms, union

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, Rational):
                if not other:
                    return self
                other = Poly.const(other, self.variables)
            else:
                return NotImplemented
        if not other.terms and (not other.variables or other.variables == self.variables):
            return self
        if not self.terms and (not self.variables or other.variables == self.variables):
            return other
        ta, tb, vs = Poly._align(self, other)
        out = dict(ta)
        get = out.get
        for e, c in tb.items():
            s = get(e, 0) + c
            if s:
                out[e] = _norm(s)
            else:
                out.pop(e, None)
        return Poly._raw(out, vs)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({e: -c for e, c in self.terms.items()}, self.variables)

    def __pos__(self) -> "Poly":
        return self

    def __sub__(self, other):
        if not isinstance(other, (Poly, Rational)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if not isinstance(other, Rational):
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, Rational):
                if not other:
                    return Poly._raw({}, self.variables)
                if other == 1:
                    return self
                other = _norm(Fraction(other)) if not isinstance(other, int) else other
                return Poly._raw({e: _norm(c * other) for e, c in self.terms.items()},
                                 self.variables)
            return NotImplemented
        if not self.terms or not other.terms:
            vs = self.variables if len(self.variables) >= len(other.variables) else other.variables
            return Poly._raw({}, vs)
        ta, tb, vs = Poly._align(self, other)
        if len(tb) > len(ta):
            ta, tb = tb, ta
        out: dict = {}
        get = out.get
        for eb, cb in tb.items():
            for ea, ca in ta.items():
                e = tuple(map(add, ea, eb))
                out[e] = get(e, 0) + ca * cb
        return Poly._raw({e: _norm(c) for e, c in out.items() if c}, vs)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ExponentError(f"exponent must be a non-negative integer, got {n!r}")
        result = Poly.const(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, Rational):
            if not other:
                raise ZeroDivisionError("division of a polynomial by zero")
            return self * (1 / Fraction(other))
        return NotImplemented

    # -- equality -------------------------------------------------------
    def _canonical(self) -> frozenset:
        if self._canon is None:
            names = self.variables
            items = []
            for e, c in self.terms.items():
                mono = tuple(sorted((names[i], k) for i, k in enumerate(e) if k))
                items.append((mono, c))
            self._canon = frozenset(items)
        return self._canon

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            if self.variables == other.variables:
                return self.terms == other.terms
            return self._canonical() == other._canonical()
        if isinstance(other, Rational):
            if not other:
                return not self.terms
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._canonical())

    # -- calculus and substitution -------------------------------------
    def diff(self, variable: str) -> "Poly":
        if variable not in self.variables:
            return Poly._raw({}, self.variables)
        i = self.variables.index(variable)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                new = list(e)
                new[i] = k - 1
                out[tuple(new)] = c * k
        return Poly._raw(out, self.variables)

    def subs(self, mapping: Mapping[str, object]) -> "Poly":
        """Substitute polynomials (or rationals) for variables."""
        mapping = {v: q for v, q in mapping.items() if v in self.variables}
        if not mapping:
            return self
        keep = tuple(v for v in self.variables if v not in mapping)
        keep_idx = [i for i, v in enumerate(self.variables) if v not in mapping]
        sub_idx = [(i, Poly.coerce(mapping[v])) for i, v in enumerate(self.variables)
                   if v in mapping]
        powers: dict = {}
        pieces = []
        for e, c in self.terms.items():
            factor = Poly._raw({tuple(e[i] for i in keep_idx): c}, keep)
            for i, q in sub_idx:
                k = e[i]
                if k:
                    if (i, k) not in powers:
                        powers[(i, k)] = q ** k
                    factor = factor * powers[(i, k)]
            pieces.append(factor)
        return poly_sum(pieces, keep)

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        return evaluate(self, point)

    def coefficients(self, variables: Sequence[str]) -> dict[Monomial, "Poly"]:
        """Split into ``{exponents in variables: coefficient polynomial}``.

        The coefficient polynomials live over the remaining variables.
        """
        sel = [self.variables.index(v) if v in self.variables else None for v in variables]
        rest_idx = [i for i, v in enumerate(self.variables) if v not in variables]
        rest_vars = tuple(self.variables[i] for i in rest_idx)
        groups: dict = {}
        for e, c in self.terms.items():
            key = tuple(e[i] if i is not None else 0 for i in sel)
            groups.setdefault(key, {})[tuple(e[i] for i in rest_idx)] = c
        return {k: Poly._raw(t, rest_vars) for k, t in groups.items()}

    # -- printing -------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        """Terms in graded lexicographic order, largest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}"
                for v, k in zip(self.variables, e) if k)
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{_fmt_rat(a)}*{mono}"
            else:
                body = _fmt_rat(a)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r}, variables={self.variables!r})"


def _fmt_rat(c) -> str:
    if isinstance(c, int):
        return str(c)
    return f"{c.numerator}/{c.denominator}"


def poly_sum(polys: Iterable, variables: Sequence[str] = ()) -> Poly:
    """Sum many polynomials through a single accumulator."""
    polys = [Poly.coerce(p) for p in polys]
    polys = [p for p in polys if p.terms]
    if not polys:
        return Poly.zero(variables)
    vs = polys[0].variables
    if any(p.variables != vs for p in polys):
        allv = list(vs)
        for p in polys:
            for v in p.variables:
                if v not in allv:
                    allv.append(v)
        vs = tuple(allv)
        polys = [p.over(vs) for p in polys]
    out: dict = {}
    get = out.get
    for p in polys:
        for e, c in p.terms.items():
            out[e] = get(e, 0) + c
    return Poly._raw({e: _norm(c) for e, c in out.items() if c}, vs)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+)|(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        dec, num, ident, op = m.groups()
        if dec is not None:
            tokens.append(("dec", dec, start))
        elif num is not None:
            tokens.append(("int", int(num), start))
        elif ident is not None:
            tokens.append(("id", ident, start))
        elif op is not None:
            if op not in "+-*^/()":
                raise ParseError(f"unexpected character {op!r}", start, text)
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...]):
        self.text = text
        self.variables = variables
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None, cls=ParseError):
        tok = tok or self.peek()
        raise cls(message, tok[2], self.text)

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> Poly:
        total = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            total = total + t if op == "+" else total - t
        return total

    def term(self) -> Poly:
        negate = False
        if self.peek()[:2] == ("op", "-"):
            self.take()
            negate = True
        p = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            p = p * self.factor()
        return -p if negate else p

    def factor(self) -> Poly:
        b = self.base()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok[:2] == ("op", "-"):
                self.error("negative exponent", tok, ExponentError)
            if tok[0] == "dec":
                self.error(f"non-integer exponent {tok[1]}", tok, ExponentError)
            if tok[0] != "int":
                self.error("exponent must be a non-negative integer literal", tok, ExponentError)
            self.take()
            if self.peek()[:2] == ("op", "/"):
                self.error("non-integer exponent", tok, ExponentError)
            b = b ** tok[1]
        return b

    def base(self) -> Poly:
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            if self.peek()[:2] == ("op", "/"):
                self.take()
                den = self.take()
                if den[0] != "int":
                    self.error("expected a positive integer denominator", den)
                if den[1] == 0:
                    self.error("zero denominator", den)
                return Poly.const(Fraction(val, den[1]), self.variables)
            return Poly.const(val, self.variables)
        if kind == "id":
            if val not in self.variables:
                self.error(f"unknown identifier {val!r}", tok, UnknownIdentifierError)
            return Poly.var(val, self.variables)
        if kind == "op" and val == "(":
            p = self.expr()
            close = self.take()
            if close[:2] != ("op", ")"):
                self.error("expected ')'", close)
            return p
        if kind == "dec":
            self.error(f"decimal literal {val!r} is not exact; write a fraction", tok)
        if kind == "end":
            self.error("unexpected end of expression", tok)
        self.error(f"unexpected token {val!r}", tok)


def parse_poly(text: str, variables: Sequence[str]) -> Poly:
    """Parse expression text into a canonical polynomial over ``variables``.

    Grammar: ``expr := term (('+'|'-') term)*``, ``term := ['-'] factor
    ('*' factor)*``, ``factor := base ('^' int)?``, ``base := int | int/int |
    identifier | '(' expr ')'``.
    """
    variables = tuple(variables)
    for v in variables:
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", v):
            raise ParseError(f"invalid variable name {v!r}")
    return _Parser(text, variables).parse()


def evaluate(p: Poly, point: Mapping[str, object]) -> Fraction:
    """Exact value of ``p`` at ``point``; every used variable must be assigned."""
    values = []
    for v in p.variables:
        if v in point:
            values.append(as_rat(point[v]))
        else:
            values.append(None)
    total = Fraction(0)
    for e, c in p.terms.items():
        term = Fraction(c)
        for k, x, name in zip(e, values, p.variables):
            if k:
                if x is None:
                    raise MissingAssignmentError(f"no value assigned to {name!r}")
                term *= x ** k
        total += term
    return total


def divide_exact(p: Poly, q: Poly) -> Poly | None:
    """Return ``r`` with ``p == q*r``, or ``None`` when ``q`` does not divide ``p``."""
    q = Poly.coerce(q)
    p = Poly.coerce(p)
    if not q.terms:
        raise ZeroDivisionError("exact division by the zero polynomial")
    ta, tb, vs = Poly._align(p, q)
    rem = dict(ta)
    lead_q = max(tb, key=lambda e: (sum(e), e))
    lc_q = tb[lead_q]
    quot: dict = {}
    key = lambda e: (sum(e), e)
    while rem:
        lead = max(rem, key=key)
        shift = tuple(a - b for a, b in zip(lead, lead_q))
        if any(s < 0 for s in shift):
            return None
        c = _norm(Fraction(rem[lead]) / lc_q)
        quot[shift] = c
        for e, d in tb.items():
            m = tuple(map(add, e, shift))
            s = rem.get(m, 0) - c * d
            if s:
                rem[m] = _norm(s)
            else:
                rem.pop(m, None)
    return Poly._raw(quot, vs)
