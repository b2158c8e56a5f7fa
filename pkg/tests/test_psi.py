"""Curve tracing and H1/H2 verdicts on the example potentials."""

import math
from fractions import Fraction

import pytest

from wittensub import (
    MultipleSignChanges,
    Transition,
    branch_slope,
    by_name,
    check_h1,
    check_h2,
    classify_sign_changes,
    parse_poly,
    refine_interval,
    trace_branches,
)

F = Fraction
BOX_1 = (F(1), F(1))
BOX_HALF = (F(1, 2), F(1, 2))


class TestTraceBranches:
    def test_maire_two_branches(self):
        # [PAPER] two curves r(y) = +-y/sqrt(3) split by the degenerate y=0
        phi = parse_poly("x^3 - x*y^2")
        branches, degenerate = trace_branches(phi, BOX_1, 65)
        assert len(branches) == 2
        assert degenerate == [F(0)]
        (lo1, hi1), (lo2, hi2) = branches[0].omega, branches[1].omega
        assert (float(lo1), float(hi1)) == (-1.0, 0.0)
        assert (float(lo2), float(hi2)) == (0.0, 1.0)
        for br, sign in zip(branches, (-1, 1)):
            for y, iv in br.samples:
                r = sign * float(y) / math.sqrt(3.0)
                assert float(iv.lo) <= r <= float(iv.hi)

    def test_concave_no_branches(self):
        # d_x phi = -x changes + to -, never - to +
        branches, degenerate = trace_branches(
            parse_poly("-1/2*x^2"), BOX_1, 65
        )
        assert branches == []
        assert degenerate == []

    def test_well_single_flat_branch(self):
        branches, degenerate = trace_branches(
            parse_poly("1/2*x^2 + 1/2*y^2"), BOX_1, 65
        )
        assert len(branches) == 1
        assert degenerate == []
        (lo, hi) = branches[0].omega
        assert (float(lo), float(hi)) == (-1.0, 1.0)
        for _, iv in branches[0].samples:
            assert iv.lo <= 0 <= iv.hi

    def test_multiple_transitions_raise(self):
        # d_x phi = 4x^3 - 5x = x(4x^2-5): minus-to-plus at -sqrt(5)/2 and 0...
        # sign pattern - + - + gives two minus-to-plus events inside (-2, 2)
        phi = parse_poly("x^4 - 5/2*x^2")
        with pytest.raises(MultipleSignChanges):
            trace_branches(phi, (F(2), F(2)), 65)

    def test_sample_count_floor(self):
        with pytest.raises(ValueError):
            trace_branches(parse_poly("x^2"), BOX_1, 16)


class TestBranchSlope:
    def test_maire_implicit_slope(self):
        phi = parse_poly("x^3 - x*y^2")
        branches, _ = trace_branches(phi, BOX_1, 65)
        target = 1.0 / math.sqrt(3.0)
        for br in branches:
            for y, _ in br.samples:
                est = branch_slope(phi, br, y)
                assert est.certified
                assert abs(abs(est.value) - target) < 1e-9

    def test_flat_branch_slope_zero(self):
        phi = parse_poly("1/2*x^2 + 1/2*y^2")
        branches, _ = trace_branches(phi, BOX_1, 65)
        (br,) = branches
        y = br.samples[3][0]
        est = branch_slope(phi, br, y)
        assert est.certified and est.exact == 0

    def test_shear_slope_is_minus_c(self):
        # r(y) = -c*y for phi = x^2/2 + c*x*y
        for c in (F(1, 3), F(2), F(-3, 4)):
            phi = parse_poly("1/2*x^2") + parse_poly("x*y") * c
            branches, _ = trace_branches(phi, BOX_1, 65)
            (br,) = branches
            y = br.samples[5][0]
            est = branch_slope(phi, br, y)
            assert est.certified and est.exact == -c


class TestCheckH1:
    def test_maire_holds(self):
        v = check_h1(parse_poly("x^3 - x*y^2"), BOX_1, 0.5, 65)
        assert v.status == "holds"
        assert len(v.certificate) == 2
        for br in v.certificate:
            assert br.slope_bound >= 0.5

    def test_well_fails_with_witness(self):
        v = check_h1(parse_poly("1/2*x^2 + 1/2*y^2"), BOX_1, 0.5, 65)
        assert v.status == "fails"
        clauses = {w["clause"] for w in v.witness["violations"]}
        assert "slope" in clauses
        assert "section_sign" in clauses

    def test_well_witness_recheck(self):
        # the witness re-checks: d_y phi(0, s) = s really ascends through 0
        phi = parse_poly("1/2*x^2 + 1/2*y^2")
        v = check_h1(phi, BOX_1, 0.5, 65)
        slope_witness = next(
            w for w in v.witness["violations"] if w["clause"] == "slope"
        )
        assert F(slope_witness["slope"]) == 0

    def test_elliptic_holds_vacuously(self):
        v = check_h1(parse_poly("-1/2*x^2 - 1/2*y^2"), BOX_1, 0.5, 65)
        assert v.status == "holds"
        assert v.certificate == []

    def test_zero_gradient_vacuous(self):
        v = check_h1(parse_poly("0"), BOX_1, 0.5, 65)
        assert v.status == "holds"

    def test_alpha_must_be_positive(self):
        with pytest.raises(ValueError):
            check_h1(parse_poly("x^2"), BOX_1, 0.0, 65)

    def test_alpha_monotone_on_catalog(self):
        # raising alpha may only move holds toward fails
        rank = {"holds": 0, "undecided": 1, "fails": 2}
        for name in (
            "maire-l1",
            "maire-l2",
            "well",
            "elliptic",
            "shear",
            "zero",
        ):
            phi = by_name(name).poly()
            statuses = [
                check_h1(phi, BOX_HALF, alpha, 65).status
                for alpha in (0.1, 0.5, 1.0)
            ]
            ranks = [rank[s] for s in statuses]
            assert ranks == sorted(ranks), (name, statuses)


class TestCheckH2:
    def test_swap_duality_on_catalog(self):
        for name in ("maire-l1", "well", "elliptic", "shear", "zero"):
            phi = by_name(name).poly()
            direct = check_h2(phi, BOX_HALF, 0.5, 65)
            swapped = check_h1(phi.swap_vars(), BOX_HALF, 0.5, 65)
            assert direct.status == swapped.status
            assert len(direct.certificate) == len(swapped.certificate)

    def test_pure_cubic_in_y(self):
        # H2 of y^3 matches H1 of x^3
        a = check_h2(parse_poly("y^3"), BOX_1, 0.5, 65)
        b = check_h1(parse_poly("x^3"), BOX_1, 0.5, 65)
        assert a.status == b.status

    def test_well_symmetric_failure(self):
        v = check_h2(parse_poly("1/2*x^2 + 1/2*y^2"), BOX_1, 0.5, 65)
        assert v.status == "fails"


class TestMaireFamily:
    def test_l2_l3_hold_with_two_branches(self):
        for expr in ("x^5 - x*y^2", "x^7 - x*y^2"):
            v = check_h1(parse_poly(expr), BOX_1, 0.05, 65)
            assert v.status == "holds"
            assert len(v.certificate) == 2

    @pytest.mark.parametrize("ell", [2, 3])
    def test_higher_ell_slopes_match_finite_differences(self, ell):
        # oracle: central difference of exactly isolated roots at y +- eps
        phi = parse_poly(f"x^{2 * ell + 1} - x*y^2")
        dphix = phi.diff("x")

        def exact_root(y):
            section = dphix.restrict("y", y)
            events = [
                ev
                for ev in classify_sign_changes(section, F(-1), F(1))
                if ev.transition is Transition.MINUS_TO_PLUS
            ]
            (ev,) = events
            iv = refine_interval(section, ev.location, F(1, 1 << 60))
            return (iv.lo + iv.hi) / 2

        branches, _ = trace_branches(phi, BOX_1, 65)
        for br in branches:
            for y, _ in br.samples[::8]:
                est = branch_slope(phi, br, y)
                assert est.certified
                eps = abs(y) / (1 << 15)
                fd = (exact_root(y + eps) - exact_root(y - eps)) / (2 * eps)
                assert abs(est.value - float(fd)) <= 1e-6 * abs(float(fd))
