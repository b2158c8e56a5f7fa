"""Exact polynomial arithmetic over the rationals.

Two carriers: ``BivariatePoly`` for potentials phi(x, y) and
``UnivariatePoly`` for their one-variable sections.  Coefficients are
``fractions.Fraction`` end to end so that every sign decision downstream
is exact; floating point only enters when a caller evaluates at float
arguments.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Number = Union[int, float, Fraction]


def _frac(c: Number) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class PolyParseError(ValueError):
    """Raised on malformed polynomial expressions; carries a byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnivariatePoly:
    """Dense univariate polynomial, lowest-degree coefficient first."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable[Number], var: str = "s"):
        if var not in ("x", "y", "s"):
            raise ValueError(f"bad variable tag {var!r}")
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def zero(cls, var: str = "s") -> "UnivariatePoly":
        return cls((), var)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def leading(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def monic(self) -> "UnivariatePoly":
        lc = self.leading()
        return UnivariatePoly((c / lc for c in self.coeffs), self.var)

    def derivative(self) -> "UnivariatePoly":
        return UnivariatePoly(
            (i * c for i, c in enumerate(self.coeffs) if i > 0), self.var
        )

    def __call__(self, t: Number):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UnivariatePoly)
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __neg__(self) -> "UnivariatePoly":
        return UnivariatePoly((-c for c in self.coeffs), self.var)

    def __add__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UnivariatePoly(out, self.var)

    def __sub__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        return self + (-other)

    def __mul__(self, other) -> "UnivariatePoly":
        if isinstance(other, (int, float, Fraction)):
            return UnivariatePoly(
                (_frac(other) * c for c in self.coeffs), self.var
            )
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UnivariatePoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UnivariatePoly":
        if n < 0:
            raise ValueError("negative exponent")
        out = UnivariatePoly((Fraction(1),), self.var)
        for _ in range(n):
            out = out * self
        return out

    def divmod(self, other: "UnivariatePoly"):
        """Exact polynomial division with remainder."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db, lb = other.degree(), other.leading()
        quot = [Fraction(0)] * max(len(rem) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            if rem[i] == 0:
                continue
            q = rem[i] / lb
            quot[i - db] = q
            for j, b in enumerate(other.coeffs):
                rem[i - db + j] -= q * b
        return (
            UnivariatePoly(quot, self.var),
            UnivariatePoly(rem, self.var),
        )

    def __repr__(self) -> str:
        return f"UnivariatePoly({list(self.coeffs)!r}, var={self.var!r})"


def poly_gcd(a: UnivariatePoly, b: UnivariatePoly) -> UnivariatePoly:
    """Monic gcd; returns the zero polynomial when both inputs are zero."""
    while not b.is_zero:
        a, b = b, a.divmod(b)[1]
    return a if a.is_zero else a.monic()


class BivariatePoly:
    """Sparse exponent-map polynomial in x and y.

    Immutable; ``terms`` maps (i, j) to a nonzero Fraction.  Equality of
    maps is equality of polynomials.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, Number]):
        clean = {}
        for (i, j), c in terms.items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            c = _frac(c)
            if c != 0:
                clean[(int(i), int(j))] = c
        self.terms = clean

    @classmethod
    def zero(cls) -> "BivariatePoly":
        return cls({})

    @classmethod
    def const(cls, c: Number) -> "BivariatePoly":
        return cls({(0, 0): c})

    @classmethod
    def var(cls, name: str) -> "BivariatePoly":
        if name == "x":
            return cls({(1, 0): 1})
        if name == "y":
            return cls({(0, 1): 1})
        raise ValueError(f"unknown variable {name!r}")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Maximum i+j over stored terms; 0 for the zero polynomial."""
        return max((i + j for i, j in self.terms), default=0)

    def degree_in(self, axis: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if self.is_zero:
            return -1
        k = 0 if axis == "x" else 1
        return max(ij[k] for ij in self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, BivariatePoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> "BivariatePoly":
        return BivariatePoly({ij: -c for ij, c in self.terms.items()})

    def __add__(self, other: "BivariatePoly") -> "BivariatePoly":
        out = dict(self.terms)
        for ij, c in other.terms.items():
            out[ij] = out.get(ij, Fraction(0)) + c
        return BivariatePoly(out)

    def __sub__(self, other: "BivariatePoly") -> "BivariatePoly":
        return self + (-other)

    def __mul__(self, other) -> "BivariatePoly":
        if isinstance(other, (int, float, Fraction)):
            c = _frac(other)
            return BivariatePoly(
                {ij: c * v for ij, v in self.terms.items()}
            )
        out: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                ij = (i1 + i2, j1 + j2)
                out[ij] = out.get(ij, Fraction(0)) + c1 * c2
        return BivariatePoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BivariatePoly":
        if n < 0:
            raise ValueError("negative power")
        out = BivariatePoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def diff(self, axis: str, order: int = 1) -> "BivariatePoly":
        """Exact partial derivative along x or y; order 0 is identity."""
        if order < 0:
            raise ValueError("negative derivative order")
        p = self
        for _ in range(order):
            out: dict = {}
            for (i, j), c in p.terms.items():
                if axis == "x" and i > 0:
                    out[(i - 1, j)] = c * i
                elif axis == "y" and j > 0:
                    out[(i, j - 1)] = c * j
            p = BivariatePoly(out)
        return p

    def evaluate(self, x0: Number, y0: Number):
        """Horner evaluation, exact when both arguments are rational."""
        # group by x-power, Horner in y inside, then Horner in x
        by_i: dict = {}
        for (i, j), c in self.terms.items():
            by_i.setdefault(i, {})[j] = c
        acc = 0
        for i in range(self.degree_in("x"), -1, -1):
            acc = acc * x0
            row = by_i.get(i)
            if row:
                inner = 0
                for j in range(max(row), -1, -1):
                    inner = inner * y0 + row.get(j, 0)
                acc = acc + inner
        return acc

    def restrict(self, fixed_axis: str, value: Number) -> UnivariatePoly:
        """Substitute one variable, returning the section in the other."""
        value = _frac(value)
        free = "y" if fixed_axis == "x" else "x"
        out: dict = {}
        for (i, j), c in self.terms.items():
            if fixed_axis == "x":
                k, contrib = j, c * value**i
            else:
                k, contrib = i, c * value**j
            out[k] = out.get(k, Fraction(0)) + contrib
        deg = max(out, default=-1)
        return UnivariatePoly(
            [out.get(k, Fraction(0)) for k in range(deg + 1)], free
        )

    def taylor_table(self, x0: Number, y0: Number, max_order: int) -> dict:
        """Raw mixed partials d_x^i d_y^j p(x0, y0) for i+j <= max_order."""
        x0, y0 = _frac(x0), _frac(y0)
        table = {}
        for i in range(max_order + 1):
            dxi = self.diff("x", i)
            for j in range(max_order + 1 - i):
                table[(i, j)] = dxi.diff("y", j).evaluate(x0, y0)
        return table

    def swap_vars(self) -> "BivariatePoly":
        return BivariatePoly({(j, i): c for (i, j), c in self.terms.items()})

    def render(self) -> str:
        """Canonical rendering: graded lexicographic, x before y."""
        if self.is_zero:
            return "0"
        keys = sorted(self.terms, key=lambda ij: (-(ij[0] + ij[1]), -ij[0]))
        parts = []
        for n, (i, j) in enumerate(keys):
            c = self.terms[(i, j)]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            factors = []
            if mag != 1 or (i == 0 and j == 0):
                factors.append(str(mag))
            if i:
                factors.append("x" if i == 1 else f"x^{i}")
            if j:
                factors.append("y" if j == 1 else f"y^{j}")
            body = "*".join(factors)
            if n == 0:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"BivariatePoly({self.render()!r})"


# ---------------------------------------------------------------------------
# Expression parsing (recursive descent)
#
# expr   := ['+'|'-'] term (('+'|'-') term)*
# term   := factor ('*' factor)*
# factor := base ('^' uint)?
# base   := 'x' | 'y' | number | '(' expr ')'
# number := uint ('/' uint)? | decimal
#
# Whitespace is insignificant.  Implicit multiplication is an error.
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise PolyParseError(msg, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def parse(self) -> BivariatePoly:
        p = self.expr()
        if self.peek():
            self.error(f"unexpected character {self.peek()!r}")
        return p

    def expr(self) -> BivariatePoly:
        negate = False
        if self.peek() in ("+", "-"):
            negate = self.take() == "-"
        p = self.term()
        if negate:
            p = -p
        while self.peek() in ("+", "-"):
            op = self.take()
            q = self.term()
            p = p - q if op == "-" else p + q
        return p

    def term(self) -> BivariatePoly:
        p = self.factor()
        while self.peek() == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self) -> BivariatePoly:
        p = self.base()
        if self.peek() == "^":
            self.take()
            n = self.uint()
            p = p**n
        if self.peek() == "^":
            self.error("chained exponent")
        return p

    def base(self) -> BivariatePoly:
        ch = self.peek()
        if ch == "(":
            self.take()
            p = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.take()
            return p
        if ch == "x" or ch == "y":
            self.take()
            nxt = self.text[self.pos : self.pos + 1]
            if nxt.isalnum():
                self.error(
                    "implicit multiplication or unknown variable"
                )
            return BivariatePoly.var(ch)
        if ch.isdigit():
            return BivariatePoly.const(self.number())
        if ch.isalpha():
            self.error(f"unknown variable {ch!r} (only x, y allowed)")
        self.error("expected variable, number or '('")

    def uint(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected nonnegative integer exponent")
        return int(self.text[start : self.pos])

    def number(self) -> Fraction:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos < len(self.text) and self.text[self.pos] == ".":
            self.pos += 1
            frac_start = self.pos
            while (
                self.pos < len(self.text) and self.text[self.pos].isdigit()
            ):
                self.pos += 1
            if self.pos == frac_start:
                self.error("expected digits after decimal point")
            # exact rational, never a binary float
            return Fraction(self.text[start : self.pos])
        num = int(self.text[start : self.pos])
        if self.peek() == "/":
            self.take()
            dstart = self.pos
            while (
                self.pos < len(self.text) and self.text[self.pos].isdigit()
            ):
                self.pos += 1
            if self.pos == dstart:
                self.error("expected denominator")
            den = int(self.text[dstart : self.pos])
            if den == 0:
                self.pos = dstart
                self.error("zero denominator")
            return Fraction(num, den)
        return Fraction(num)


def parse_poly(expr: str) -> BivariatePoly:
    """Parse a polynomial expression in x and y into exact form."""
    return _Parser(expr).parse()
