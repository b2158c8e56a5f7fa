"""Sign-change curve tracing and the H1/H2 box verdicts.

The box verdict samples y on a uniform rational grid, makes every
per-sample decision exactly (Sturm isolation, rational sign evaluation),
links the minus-to-plus transitions of the x-sections of d_x phi into
curve branches, and checks the three clauses of the sign-change
assumption: at most one minus-to-plus transition per section, a
compliant y-section of d_y phi along the traced curve, and a certified
slope bound |dr/dy| >= alpha.

Decisions that would rest on uncertified data (a root bracket whose two
endpoints disagree, a slope at a degenerate root) are reported as
Undecided, never as Holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .poly import BivariatePoly
from .roots import (
    IsolatingInterval,
    Transition,
    classify_sign_changes,
    refine_interval,
    section_psi_bar_ok,
)

LINK_SHIFT = 20  # continuation rule refines brackets to (2*dx) * 2**-20


class MultipleSignChanges(ValueError):
    """Some section has two or more minus-to-plus transitions."""

    def __init__(self, y: Fraction, intervals):
        super().__init__(
            f"{len(intervals)} minus-to-plus transitions at y = {y}"
        )
        self.y = y
        self.intervals = intervals


@dataclass
class SlopeEstimate:
    value: float
    certified: bool
    exact: Optional[Fraction] = None  # present when certified


@dataclass
class CurveBranch:
    """A maximal traced minus-to-plus curve x = r(y)."""

    omega: tuple  # open interval in y, as Fractions clipped to the box
    samples: list  # ordered list of (y: Fraction, IsolatingInterval)
    slope_bound: float = 0.0  # min certified |dr/dy| over samples

    def root_at(self, y: Fraction) -> Optional[IsolatingInterval]:
        for ys, iv in self.samples:
            if ys == y:
                return iv
        return None


@dataclass
class H1Verdict:
    status: str  # "holds" | "fails" | "undecided"
    certificate: list = field(default_factory=list)  # CurveBranch list
    witness: Optional[dict] = None
    notes: str = ""
    degenerate: list = field(default_factory=list)  # y values
    n_samples: int = 0


def _sample_grid(delta: Fraction, n_samples: int):
    """n_samples uniformly spaced rational points inside (-delta, delta)."""
    step = 2 * delta / (n_samples + 1)
    return [-delta + (i + 1) * step for i in range(n_samples)]


def _m2p_events(section, lo, hi):
    return [
        ev
        for ev in classify_sign_changes(section, lo, hi)
        if ev.transition is Transition.MINUS_TO_PLUS
    ]


def trace_branches(phi: BivariatePoly, box, n_samples: int):
    """Trace the minus-to-plus curves of s -> d_x phi(s, y) over the box.

    Returns (branches, degenerate) where degenerate is the list of
    sampled y at which the section vanishes identically or the
    transition count changes.  Raises MultipleSignChanges when a sample
    carries two or more minus-to-plus transitions.
    """
    dx, dy = Fraction(box[0]), Fraction(box[1])
    if n_samples < 33:
        raise ValueError("need at least 33 samples")
    dphix = phi.diff("x")
    if dphix.is_zero:
        raise ValueError("d_x phi is identically zero")

    ys = _sample_grid(dy, n_samples)
    per_sample = []  # (y, None for degenerate-zero | list of intervals)
    for y in ys:
        section = dphix.restrict("y", y)
        if section.is_zero:
            per_sample.append((y, None))
            continue
        events = _m2p_events(section, -dx, dx)
        if len(events) >= 2:
            raise MultipleSignChanges(y, [ev.location for ev in events])
        per_sample.append((y, [ev.location for ev in events]))

    link_width = 2 * dx / (1 << LINK_SHIFT)
    dxx = dphix.diff("x")
    dxy = dphix.diff("y")

    def refined(y, iv):
        return refine_interval(dphix.restrict("y", y), iv, link_width)

    def linked(prev_y, prev_iv, y, iv):
        """Continuation test: brackets overlap, or the gap is within a
        Lipschitz allowance derived from implicit differentiation."""
        gap = max(iv.lo - prev_iv.hi, prev_iv.lo - iv.hi)
        if gap <= 2 * link_width:
            return True
        lip = None
        for yy, jj in ((prev_y, prev_iv), (y, iv)):
            den = dxx.evaluate(jj.midpoint, yy)
            if den != 0:
                slope = abs(Fraction(dxy.evaluate(jj.midpoint, yy)) / den)
                lip = slope if lip is None else max(lip, slope)
        if lip is None:
            return True  # no certified slope data; assume continuation
        return gap <= 4 * lip * (y - prev_y) + 2 * link_width

    branches = []
    degenerate = []
    current: list = []  # list of (y, interval)

    def counts(idx):
        y, ivs = per_sample[idx]
        return -1 if ivs is None else len(ivs)

    def close_branch(next_boundary):
        nonlocal current
        if current:
            first_y = current[0][0]
            i0 = ys.index(first_y)
            left = _boundary(i0 - 1, i0, -dy)
            branches.append(
                CurveBranch(omega=(left, next_boundary), samples=current)
            )
        current = []

    def _boundary(outside_idx, inside_idx, box_edge):
        if outside_idx < 0 or outside_idx >= len(ys):
            return box_edge
        y_out, ivs_out = per_sample[outside_idx]
        if ivs_out is None or len(ivs_out) != 1:
            return y_out  # degenerate/zero-count neighbor marks the edge
        return (y_out + ys[inside_idx]) / 2  # linking failed mid-run

    for idx, (y, ivs) in enumerate(per_sample):
        if ivs is None:
            degenerate.append(y)
            close_branch(y)
            continue
        if len(ivs) == 0:
            prev_c = counts(idx - 1) if idx > 0 else 0
            next_c = counts(idx + 1) if idx + 1 < len(ys) else 0
            if prev_c > 0 or next_c > 0:
                degenerate.append(y)
            close_branch(y if (prev_c > 0 or next_c > 0) else _boundary(idx, idx - 1, dy))
            continue
        iv = refined(y, ivs[0])
        if current:
            prev_y, prev_iv = current[-1]
            if not linked(prev_y, prev_iv, y, iv):
                gap = (prev_y + y) / 2
                degenerate.append(gap)
                close_branch(gap)
        current.append((y, iv))
    if current:
        close_branch(dy)
    return branches, degenerate


def branch_slope(phi: BivariatePoly, branch: CurveBranch, y) -> SlopeEstimate:
    """Slope dr/dy at a sampled y of the branch.

    Simple roots (d_x^2 phi sign-definite across the bracket) get the
    exact implicit-function value -(d_y d_x phi)/(d_x^2 phi) at the
    bracket midpoint; degenerate roots fall back to an uncertified
    difference quotient between neighboring samples.
    """
    y = Fraction(y)
    iv = branch.root_at(y)
    if iv is None:
        raise ValueError(f"y = {y} is not a sample of this branch")
    dxx = phi.diff("x", 2)
    v_lo = dxx.evaluate(iv.lo, y)
    v_hi = dxx.evaluate(iv.hi, y)
    if v_lo != 0 and v_hi != 0 and (v_lo > 0) == (v_hi > 0):
        mid = iv.midpoint
        slope = Fraction(-phi.diff("x").diff("y").evaluate(mid, y)) / Fraction(
            dxx.evaluate(mid, y)
        )
        return SlopeEstimate(value=float(slope), certified=True, exact=slope)
    # difference quotient between the neighboring samples
    idx = next(i for i, (ys, _) in enumerate(branch.samples) if ys == y)
    lo_idx = max(idx - 1, 0)
    hi_idx = min(idx + 1, len(branch.samples) - 1)
    if lo_idx == hi_idx:
        return SlopeEstimate(value=0.0, certified=False)
    (y0, iv0), (y1, iv1) = branch.samples[lo_idx], branch.samples[hi_idx]
    quot = (iv1.midpoint - iv0.midpoint) / (y1 - y0)
    return SlopeEstimate(value=float(quot), certified=False)


def _secondary_section_ok(phi, iv, dy) -> Optional[bool]:
    """Clause (ii) secondary test at both rational bracket endpoints.

    Returns True/False when the endpoints agree, None when they do not
    (the verdict would depend on an uncertified bracket).
    """
    dphiy = phi.diff("y")
    answers = set()
    for endpoint in (iv.lo, iv.hi):
        section = dphiy.restrict("x", endpoint)
        answers.add(section_psi_bar_ok(section, -dy, dy))
    if len(answers) == 1:
        return answers.pop()
    return None


def check_h1(phi: BivariatePoly, box, alpha, n_samples: int = 129) -> H1Verdict:
    """Decide the sampled H1(alpha) verdict on the box.

    Holds requires every clause to be certified at every sample; any
    exact violation yields Fails with a re-checkable witness; decisions
    resting on uncertified data yield Undecided.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    dx, dy = Fraction(box[0]), Fraction(box[1])
    alpha_frac = Fraction(alpha)

    dphix = phi.diff("x")
    if dphix.is_zero:
        return H1Verdict(
            status="holds",
            notes="d_x phi is identically zero: no section has any "
            "minus-to-plus transition (vacuous)",
            n_samples=n_samples,
        )
    try:
        branches, degenerate = trace_branches(phi, (dx, dy), n_samples)
    except MultipleSignChanges as exc:
        return H1Verdict(
            status="fails",
            witness={
                "clause": "multiple_minus_to_plus",
                "y": str(exc.y),
                "intervals": [
                    {"lo": str(iv.lo), "hi": str(iv.hi)}
                    for iv in exc.intervals
                ],
            },
            notes="a sampled section carries more than one minus-to-plus "
            "transition",
            degenerate=[],
            n_samples=n_samples,
        )

    undecided_notes = []
    for branch in branches:
        certified_min = None
        for y, iv in branch.samples:
            violations = []
            sec_ok = _secondary_section_ok(phi, iv, dy)
            if sec_ok is False:
                violations.append(
                    {
                        "clause": "section_sign",
                        "y": str(y),
                        "root_lo": str(iv.lo),
                        "root_hi": str(iv.hi),
                        "detail": "d_y phi(r(y), .) has a minus-to-plus "
                        "transition at both bracket endpoints",
                    }
                )
            slope = branch_slope(phi, branch, y)
            if slope.certified:
                if abs(slope.exact) < alpha_frac:
                    violations.append(
                        {
                            "clause": "slope",
                            "y": str(y),
                            "slope": str(slope.exact),
                            "alpha": repr(float(alpha)),
                            "detail": "certified |dr/dy| below alpha",
                        }
                    )
                mag = abs(slope.value)
                certified_min = (
                    mag if certified_min is None else min(certified_min, mag)
                )
            else:
                undecided_notes.append(
                    f"uncertified slope at y = {y} (degenerate root)"
                )
            if sec_ok is None:
                undecided_notes.append(
                    f"section verdict not sign-stable across bracket at y = {y}"
                )
            if violations:
                return H1Verdict(
                    status="fails",
                    witness={"violations": violations},
                    certificate=branches,
                    degenerate=degenerate,
                    n_samples=n_samples,
                )
        branch.slope_bound = certified_min if certified_min is not None else 0.0
    if undecided_notes:
        return H1Verdict(
            status="undecided",
            certificate=branches,
            notes="; ".join(undecided_notes[:8]),
            degenerate=degenerate,
            n_samples=n_samples,
        )
    return H1Verdict(
        status="holds",
        certificate=branches,
        degenerate=degenerate,
        n_samples=n_samples,
    )


def check_h2(phi: BivariatePoly, box, alpha, n_samples: int = 129) -> H1Verdict:
    """H2(alpha) is H1(alpha) of the variable-swapped polynomial."""
    swapped_box = (Fraction(box[1]), Fraction(box[0]))
    verdict = check_h1(phi.swap_vars(), swapped_box, alpha, n_samples)
    verdict.notes = ("[swapped variables] " + verdict.notes).strip()
    return verdict
