"""Pointwise quantities entering the subellipticity estimates.

Derivative sums M1, M2 and G, the dense sets N1/N2 where they never
vanish along a line, the finite-type order at the origin, the iterated
commutator brackets A_{p,q}, the scaled one-variable profiles, and an
empirical slow-variation scan.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .poly import BivariatePoly, UnivariatePoly, poly_gcd
from .roots import sturm_roots


class ZeroScale(ValueError):
    """The normalizing quantity vanishes at the base point."""


class ClosedFormMismatch(AssertionError):
    """Commutator recursion disagrees with direct differentiation."""


@dataclass
class QuantityContext:
    """Potential with its degree data and the spectral parameter."""

    phi: BivariatePoly
    lam: float
    L: int = 0  # degree in x of d_x phi (0 when the derivative vanishes)
    d: int = 0  # degree in y of d_y phi
    m: int = 0  # total degree of phi

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        self.L = max(self.phi.diff("x").degree_in("x"), 0)
        self.d = max(self.phi.diff("y").degree_in("y"), 0)
        self.m = self.phi.total_degree()
        # cached pure-derivative polynomials for fast float evaluation
        self._dx = [
            self.phi.diff("x", j + 1) for j in range(self.L + 1)
        ]
        self._dy = [
            self.phi.diff("y", j + 1) for j in range(self.d + 1)
        ]
        self._mixed = [
            (i, j, self.phi.diff("x", i).diff("y", j))
            for i in range(self.m + 1)
            for j in range(self.m + 1 - i)
            if 1 <= i + j <= self.m
        ]


def m1(ctx: QuantityContext, x0, y0) -> float:
    """Sum over j of |lam * d_x^{j+1} phi|^{1/(j+1)} at the point."""
    return sum(
        abs(ctx.lam * float(p.evaluate(x0, y0))) ** (1.0 / (j + 1))
        for j, p in enumerate(ctx._dx)
    )


def m2(ctx: QuantityContext, x0, y0) -> float:
    """Sum over j of |lam * d_y^{j+1} phi|^{1/(j+1)} at the point."""
    return sum(
        abs(ctx.lam * float(p.evaluate(x0, y0))) ** (1.0 / (j + 1))
        for j, p in enumerate(ctx._dy)
    )


def g(ctx: QuantityContext, x0, y0) -> float:
    """Sum over 1 <= i+j <= m of |lam * d_x^i d_y^j phi|^{1/(i+j)}."""
    return sum(
        abs(ctx.lam * float(p.evaluate(x0, y0))) ** (1.0 / (i + j))
        for i, j, p in ctx._mixed
    )


def _family_has_common_root(sections) -> bool:
    """Exact: do the univariate polynomials share a real root?"""
    gcd = UnivariatePoly.zero()
    for q in sections:
        gcd = poly_gcd(gcd, q)
    if gcd.is_zero:
        return True  # every section vanishes identically
    if gcd.degree() == 0:
        return False
    # Cauchy bound on the gcd's real roots
    lc = abs(gcd.leading())
    bound = 1 + max(abs(c) / lc for c in gcd.coeffs)
    return len(sturm_roots(gcd, -bound - 1, bound + 1)) > 0


def in_n1(ctx: QuantityContext, y0) -> bool:
    """True iff M1(x, y0) != 0 for every real x (decided exactly)."""
    y0 = Fraction(y0)
    dphix = ctx.phi.diff("x")
    if dphix.is_zero:
        return False
    # fast path: nonvanishing leading coefficient a_L(y0)
    lead = UnivariatePoly(
        [
            dphix.terms.get((ctx.L, j), Fraction(0))
            for j in range(dphix.degree_in("y") + 1)
        ],
        "y",
    )
    if lead(y0) != 0:
        return True
    return not _family_has_common_root(
        [p.restrict("y", y0) for p in ctx._dx]
    )


def in_n2(ctx: QuantityContext, x0) -> bool:
    """True iff M2(x0, y) != 0 for every real y (decided exactly)."""
    x0 = Fraction(x0)
    dphiy = ctx.phi.diff("y")
    if dphiy.is_zero:
        return False
    lead = UnivariatePoly(
        [
            dphiy.terms.get((i, ctx.d), Fraction(0))
            for i in range(dphiy.degree_in("x") + 1)
        ],
        "x",
    )
    if lead(x0) != 0:
        return True
    return not _family_has_common_root(
        [p.restrict("x", x0) for p in ctx._dy]
    )


def finite_type_order_x(phi: BivariatePoly) -> Optional[int]:
    """Smallest k >= 1 with d_x^{k+1} phi(0,0) != 0, else None."""
    for k in range(1, phi.total_degree() + 1):
        if phi.diff("x", k + 1).evaluate(0, 0) != 0:
            return k
    return None


def bracket_A(phi: BivariatePoly, lam, p: int, q: int) -> BivariatePoly:
    """Iterated commutator bracket A_{p,q}, returned as lam * d_y^p d_x^{q+1} phi.

    The bracket of the derivation d_x/i with multiplication by a
    function is multiplication by the derivative over i; the recursion
    is run on (polynomial, power-of-i) symbols and must reproduce the
    direct-differentiation closed form exactly.  The common factor -i
    carried by every A_{p,q} is factored out of the returned polynomial.
    """
    if p < 0 or q < 1:
        raise ValueError("need p >= 0 and q >= 1")
    lam = Fraction(lam)
    # recursion on symbols: (poly, k) represents i**k * poly
    poly, ipow = lam * phi.diff("x"), 0
    for _ in range(q):  # bracket with X = d_x / i
        poly, ipow = poly.diff("x"), (ipow - 1) % 4
    ipow = (ipow + q - 1) % 4  # prefactor i**(q-1)
    for _ in range(p):  # A_{p,q} = i [Y, A_{p-1,q}], Y = d_y / i
        poly, ipow = poly.diff("y"), ipow  # the two i factors cancel
    direct = lam * phi.diff("y", p).diff("x", q + 1)
    if ipow != 3 or poly != direct:
        raise ClosedFormMismatch(
            f"recursion produced i^{ipow} * {poly.render()}, "
            f"expected i^3 * {direct.render()}"
        )
    return direct


@dataclass
class ProfileReport:
    """A scaled one-variable section with its normalization data."""

    profile: UnivariatePoly
    sup_coeff: float  # max_j |d^j profile(0)|
    peak_order: int
    peak_value: float
    c0_bound: float


def scaled_profile(ctx: QuantityContext, axis: str, x0, y0, scale: str = "m") -> ProfileReport:
    """Section of the gradient rescaled by M (or G) at the base point.

    For axis y the profile is t -> lam * d_y phi(x0, y0 + t/M) / M with
    M = M2(x0, y0); axis x uses d_x phi and M1; scale "g" divides by G
    instead.  Every normalized derivative at 0 has magnitude <= 1 and
    the peak-order derivative is bounded below by (m+1)^-(m+1).
    """
    if axis == "y":
        derivs, count = ctx._dy, ctx.d
        base_scale = m2(ctx, x0, y0)
    elif axis == "x":
        derivs, count = ctx._dx, ctx.L
        base_scale = m1(ctx, x0, y0)
    else:
        raise ValueError("axis must be 'x' or 'y'")
    if scale == "g":
        base_scale = g(ctx, x0, y0)
    elif scale != "m":
        raise ValueError("scale must be 'm' or 'g'")
    if base_scale == 0.0:
        raise ZeroScale(f"normalizing quantity vanishes at ({x0}, {y0})")

    normalized = []  # |d^j profile(0)| for j = 0..count
    coeffs = []
    fact = 1.0
    for j in range(count + 1):
        dval = ctx.lam * float(derivs[j].evaluate(x0, y0))
        nd = dval / base_scale ** (j + 1)
        normalized.append(abs(nd))
        if j > 0:
            fact *= j
        coeffs.append(nd / fact)
    peak_order = max(
        range(count + 1), key=lambda j: normalized[j] ** (1.0 / (j + 1))
    )
    mdeg = ctx.m
    return ProfileReport(
        profile=UnivariatePoly([Fraction(c) for c in coeffs], "s"),
        sup_coeff=max(normalized),
        peak_order=peak_order,
        peak_value=normalized[peak_order],
        c0_bound=float(mdeg + 1) ** (-(mdeg + 1)),
    )


def slow_variation_scan(ctx: QuantityContext, box, r0: float, n_pairs: int, seed: int) -> dict:
    """Empirical slow-variation constants for M1, M2 and G.

    Samples pairs of points in the box; a pair is admissible when
    |p* - p~| * Q(p*) < r0, and the scan reports the worst two-sided
    ratio max(Q(p*)/Q(p~), Q(p~)/Q(p*)) over admissible pairs (1.0 when
    every pair is inadmissible).  For M1 the transverse coordinate is
    restricted to sampled points of N1, for M2 to N2.
    """
    if n_pairs < 1:
        raise ValueError("need at least one pair")
    delta = float(box)
    rng = np.random.default_rng(seed)

    def find_line(membership) -> Optional[float]:
        for _ in range(64):
            t = float(rng.uniform(-delta, delta))
            if membership(Fraction(t)):
                return t
        return None

    def scan(quantity, vary_first: bool, line: Optional[float]) -> float:
        worst = 1.0
        for _ in range(n_pairs):
            a = float(rng.uniform(-delta, delta))
            b = float(rng.uniform(-delta, delta))
            fixed = (
                line
                if line is not None
                else float(rng.uniform(-delta, delta))
            )
            if vary_first:
                qa, qb = quantity(ctx, a, fixed), quantity(ctx, b, fixed)
            else:
                qa, qb = quantity(ctx, fixed, a), quantity(ctx, fixed, b)
            if abs(a - b) * qa >= r0 or qa == 0.0 or qb == 0.0:
                continue
            ratio = qa / qb
            worst = max(worst, ratio, 1.0 / ratio)
        return worst

    y_line = find_line(lambda t: in_n1(ctx, t))
    x_line = find_line(lambda t: in_n2(ctx, t))
    return {
        "m1": scan(m1, True, y_line) if y_line is not None else 1.0,
        "m2": scan(m2, False, x_line) if x_line is not None else 1.0,
        "g": scan(g, False, None),
    }
