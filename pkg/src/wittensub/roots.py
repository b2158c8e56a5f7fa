"""Exact real-root isolation and sign-transition classification.

Sturm sequences over the rationals isolate the distinct real roots of a
univariate section; Yun's square-free decomposition supplies
multiplicities.  Transitions (- to +, + to -, no change) follow from the
multiplicity parity and one exact sign evaluation to the right of each
root.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .poly import UnivariatePoly, poly_gcd

WIDTH_SHIFT = 40  # isolating intervals are refined to (hi-lo) * 2**-40


class IdenticallyZero(ValueError):
    """The section under analysis is the zero polynomial."""


class Transition(enum.Enum):
    MINUS_TO_PLUS = "minus_to_plus"
    PLUS_TO_MINUS = "plus_to_minus"
    NO_CHANGE = "no_change"


@dataclass(frozen=True)
class IsolatingInterval:
    """Rational interval holding exactly one distinct real root."""

    lo: Fraction
    hi: Fraction
    multiplicity: int

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class SignChangeEvent:
    location: IsolatingInterval
    transition: Transition


def squarefree_decomposition(q: UnivariatePoly):
    """Yun's algorithm: q = c * prod f_k^k with f_k square-free, coprime."""
    if q.is_zero:
        raise IdenticallyZero("zero polynomial")
    if q.degree() == 0:
        return []
    f = q.monic()
    fp = f.derivative()
    a = poly_gcd(f, fp)
    b = f.divmod(a)[0]
    c = fp.divmod(a)[0]
    d = c - b.derivative()
    out = []
    k = 1
    while b.degree() > 0:
        g = poly_gcd(b, d)
        if g.degree() > 0:
            out.append((g, k))
        b = b.divmod(g)[0] if not g.is_zero else b
        c = d.divmod(g)[0] if not g.is_zero else d
        d = c - b.derivative()
        k += 1
    return out


def _sturm_chain(p: UnivariatePoly):
    chain = [p, p.derivative()]
    while not chain[-1].is_zero and chain[-1].degree() > 0:
        rem = chain[-2].divmod(chain[-1])[1]
        chain.append(-rem)
    if chain[-1].is_zero:
        chain.pop()
    return chain

def _variations(chain, t: Fraction) -> int:
    signs = []
    for p in chain:
        v = p(t)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count_roots(chain, lo: Fraction, hi: Fraction) -> int:
    """Distinct roots in (lo, hi]; requires chain[0](lo) != 0."""
    return _variations(chain, lo) - _variations(chain, hi)


def _deflate_at(p: UnivariatePoly, r: Fraction) -> UnivariatePoly:
    lin = UnivariatePoly([-r, 1], p.var)
    while p(r) == 0:
        p = p.divmod(lin)[0]
    return p


def _refine(p: UnivariatePoly, lo: Fraction, hi: Fraction, target: Fraction):
    """Shrink a sign-changing bracket of the square-free p to width <= target.

    Endpoints stay sign-definite for p.  A midpoint hitting the root
    exactly yields a symmetric bracket around the rational root.
    """
    slo, shi = p(lo), p(hi)
    assert slo * shi < 0, "bracket must straddle a simple root"
    while hi - lo > target:
        mid = (lo + hi) / 2
        v = p(mid)
        if v == 0:
            w = target / 4
            a, b = mid - w, mid + w
            while p(a) == 0 or p(b) == 0:
                w /= 2
                a, b = mid - w, mid + w
            return a, b
        if (v > 0) == (slo > 0):
            lo = mid
        else:
            hi = mid
    return lo, hi


def _isolate_squarefree(p: UnivariatePoly, lo: Fraction, hi: Fraction, target: Fraction):
    """Isolating brackets for all roots of square-free p in the open (lo, hi)."""
    # roots exactly at the box boundary are excluded by deflation
    p = _deflate_at(p, lo)
    p = _deflate_at(p, hi)
    if p.degree() <= 0:
        return []
    chain = _sturm_chain(p)
    out = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = _count_roots(chain, a, b)  # roots in (a, b]; p(b) != 0 so open
        if n == 0:
            continue
        if n == 1 and p(a) * p(b) < 0:
            out.append(_refine(p, a, b, target))
            continue
        mid = (a + b) / 2
        if p(mid) == 0:
            # exact rational root at mid: bracket it, recurse on the rest
            w = target / 4
            while (
                p(mid - w) == 0
                or p(mid + w) == 0
                or _count_roots(chain, mid - w, mid + w) != 1
            ):
                w /= 2
            out.append((mid - w, mid + w))
            stack.append((a, mid - w))
            stack.append((mid + w, b))
        else:
            stack.append((a, mid))
            stack.append((mid, b))
    out.sort()
    return out


def sturm_roots(q: UnivariatePoly, lo, hi):
    """All distinct real roots of q in the open interval (lo, hi).

    Returns isolating intervals of width <= (hi-lo) * 2**-40, pairwise
    disjoint, each carrying the root multiplicity from the square-free
    decomposition.  Raises IdenticallyZero for the zero polynomial.
    """
    if q.is_zero:
        raise IdenticallyZero("cannot isolate roots of the zero polynomial")
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        raise ValueError("empty interval")
    target = (hi - lo) / (1 << WIDTH_SHIFT)
    found = []
    for factor, mult in squarefree_decomposition(q):
        for a, b in _isolate_squarefree(factor, lo, hi, target):
            found.append(IsolatingInterval(a, b, mult))
    found.sort(key=lambda iv: iv.lo)
    # distinct roots of coprime factors cannot coincide; shrink any
    # touching brackets until they are strictly disjoint
    for idx in range(len(found) - 1):
        a, b = found[idx], found[idx + 1]
        while a.hi >= b.lo:
            fa = _factor_of(q, a)
            na, nb = _refine(fa, a.lo, a.hi, a.width / 4)
            a = IsolatingInterval(na, nb, a.multiplicity)
            fb = _factor_of(q, b)
            nc, nd = _refine(fb, b.lo, b.hi, b.width / 4)
            b = IsolatingInterval(nc, nd, b.multiplicity)
        found[idx], found[idx + 1] = a, b
    return found


def _factor_of(q: UnivariatePoly, iv: IsolatingInterval) -> UnivariatePoly:
    for factor, mult in squarefree_decomposition(q):
        if mult == iv.multiplicity and factor(iv.lo) * factor(iv.hi) < 0:
            return factor
    raise AssertionError("interval does not bracket a root of q")


def classify_sign_changes(q: UnivariatePoly, lo, hi):
    """One SignChangeEvent per distinct root of q in (lo, hi), ordered.

    The transition is decided by multiplicity parity and the exact sign
    of q strictly to the right of the root.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    intervals = sturm_roots(q, lo, hi)
    events = []
    for idx, iv in enumerate(intervals):
        right = (
            (iv.hi + intervals[idx + 1].lo) / 2
            if idx + 1 < len(intervals)
            else (iv.hi + hi) / 2
        )
        sign_right = q(right)
        assert sign_right != 0
        if iv.multiplicity % 2 == 0:
            tr = Transition.NO_CHANGE
        elif sign_right > 0:
            tr = Transition.MINUS_TO_PLUS
        else:
            tr = Transition.PLUS_TO_MINUS
        events.append(SignChangeEvent(iv, tr))
    return events


def section_psi_bar_ok(q: UnivariatePoly, lo, hi) -> bool:
    """True iff q never changes sign from - to + on (lo, hi).

    The identically zero section counts as compliant.
    """
    if q.is_zero:
        return True
    return all(
        ev.transition is not Transition.MINUS_TO_PLUS
        for ev in classify_sign_changes(q, lo, hi)
    )


def refine_interval(q: UnivariatePoly, iv: IsolatingInterval, target) -> IsolatingInterval:
    """Shrink an isolating interval of q to width <= target."""
    target = Fraction(target)
    if iv.width <= target:
        return iv
    factor = _factor_of(q, iv)
    a, b = _refine(factor, iv.lo, iv.hi, target)
    return IsolatingInterval(a, b, iv.multiplicity)
