"""Derivative sums, set membership, brackets, profiles, slow variation."""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wittensub import (
    BivariatePoly,
    QuantityContext,
    ZeroScale,
    bracket_A,
    finite_type_order_x,
    g,
    in_n1,
    in_n2,
    m1,
    m2,
    parse_poly,
    scaled_profile,
    slow_variation_scan,
)

F = Fraction
MAIRE = parse_poly("x^3 - x*y^2")


def random_poly(rng, max_degree=6):
    terms = {}
    for _ in range(rng.randint(1, 6)):
        i = rng.randint(0, max_degree)
        j = rng.randint(0, max_degree - i)
        terms[(i, j)] = F(rng.randint(-9, 9), rng.randint(1, 4))
    p = BivariatePoly(dict(terms))
    return p if not p.is_zero else BivariatePoly.var("x")


class TestDerivativeSums:
    def test_maire_m1_at_origin(self):
        # only d_x^3 phi = 6 survives: M1 = 6^(1/3)
        ctx = QuantityContext(MAIRE, 1.0)
        assert m1(ctx, 0.0, 0.0) == pytest.approx(6 ** (1 / 3), abs=1e-12)

    def test_maire_g_at_origin(self):
        # surviving terms: d_x d_y^2 phi = -2 (order 3), d_x^3 phi = 6
        ctx = QuantityContext(MAIRE, 1.0)
        expected = 2 ** (1 / 3) + 6 ** (1 / 3)
        assert g(ctx, 0.0, 0.0) == pytest.approx(expected, abs=1e-12)

    def test_quadratic_m1(self):
        # phi = x^2/2, lam = 4: |4*1| + |4|^(1/2) = 6 at (1,0)
        ctx = QuantityContext(parse_poly("1/2*x^2"), 4.0)
        assert m1(ctx, 1.0, 0.0) == pytest.approx(6.0, abs=1e-12)

    def test_zero_potential(self):
        ctx = QuantityContext(parse_poly("0"), 1.0)
        assert m1(ctx, 0.3, -0.2) == 0.0
        assert m2(ctx, 0.3, -0.2) == 0.0
        assert g(ctx, 0.3, -0.2) == 0.0

    def test_linear_g_is_lambda(self):
        ctx = QuantityContext(parse_poly("x"), 9.0)
        for pt in ((0.0, 0.0), (0.25, -0.4), (1.0, 1.0)):
            assert g(ctx, *pt) == pytest.approx(9.0, abs=1e-12)

    def test_m1_dominated_by_g(self):
        # every M1 term reappears in G at index (j+1, 0)
        rng = random.Random(7)
        for _ in range(20):
            ctx = QuantityContext(random_poly(rng), 3.0)
            for _ in range(5):
                x0 = rng.uniform(-1, 1)
                y0 = rng.uniform(-1, 1)
                assert m1(ctx, x0, y0) <= g(ctx, x0, y0) + 1e-12

    def test_lambda_scaling_per_term(self):
        # scaling lam -> c*lam scales term j+1 by c^(1/(j+1))
        c = 5.0
        base = QuantityContext(MAIRE, 2.0)
        scaled = QuantityContext(MAIRE, 2.0 * c)
        x0, y0 = 0.3, -0.1
        resummed = sum(
            c ** (1.0 / (j + 1))
            * abs(base.lam * float(p.evaluate(x0, y0))) ** (1.0 / (j + 1))
            for j, p in enumerate(base._dx)
        )
        assert m1(scaled, x0, y0) == pytest.approx(resummed, rel=1e-12)


class TestMembership:
    def test_maire_fast_path(self):
        ctx = QuantityContext(MAIRE, 1.0)
        assert in_n1(ctx, F(1)) is True

    def test_zero_x_gradient_never_in_n1(self):
        ctx = QuantityContext(parse_poly("y^2"), 1.0)
        assert in_n1(ctx, F(0)) is False
        assert in_n1(ctx, F(1, 3)) is False

    def test_common_root_excluded(self):
        # phi = x^2*y: d_x phi = 2xy and d_x^2 phi = 2y share x-root sets at y=0
        ctx = QuantityContext(parse_poly("x^2*y"), 1.0)
        assert in_n1(ctx, F(0)) is False
        assert in_n1(ctx, F(1, 2)) is True

    def test_in_n2_mirrors_in_n1(self):
        ctx = QuantityContext(MAIRE, 1.0)
        sw = QuantityContext(MAIRE.swap_vars(), 1.0)
        for t in (F(0), F(1, 3), F(-1, 2)):
            assert in_n2(ctx, t) == in_n1(sw, t)


class TestFiniteType:
    def test_maire_order_two(self):
        assert finite_type_order_x(MAIRE) == 2

    def test_quadratic_order_one(self):
        assert finite_type_order_x(parse_poly("1/2*x^2")) == 1

    def test_pure_y_none(self):
        assert finite_type_order_x(parse_poly("y^2")) is None


class TestBrackets:
    def test_single_bracket_maire(self):
        assert bracket_A(MAIRE, 1, 0, 1) == parse_poly("6*x")

    def test_mixed_bracket_vanishes(self):
        assert bracket_A(MAIRE, 1, 1, 1).is_zero

    def test_order_exceeding_degree(self):
        assert bracket_A(MAIRE, 1, 0, 7).is_zero

    def test_lambda_scales_linearly(self):
        assert bracket_A(MAIRE, F(3), 0, 1) == parse_poly("18*x")

    def test_recursion_matches_closed_form_randomized(self):
        # the identity A_{p,q} = lam * d_y^p d_x^{q+1} phi, exactly
        rng = random.Random(1234)
        for _ in range(50):
            phi = random_poly(rng)
            lam = F(rng.randint(1, 9), rng.randint(1, 4))
            for p in range(0, 6):
                for q in range(1, 7 - p):
                    got = bracket_A(phi, lam, p, q)
                    want = phi.diff("y", p).diff("x", q + 1) * lam
                    assert got == want


class TestScaledProfile:
    def test_maire_y_profile_at_base(self):
        # M2(1,0) = sqrt(2); zeta(y) = -y exactly
        ctx = QuantityContext(MAIRE, 1.0)
        rep = scaled_profile(ctx, "y", 1.0, 0.0, scale="m")
        coeffs = [float(c) for c in rep.profile.coeffs]
        assert coeffs[0] == pytest.approx(0.0, abs=1e-12)
        assert coeffs[1] == pytest.approx(-1.0, abs=1e-9)
        assert rep.peak_order == 1
        assert rep.peak_value == pytest.approx(1.0, abs=1e-9)

    def test_pure_quadratic_profile(self):
        ctx = QuantityContext(parse_poly("1/2*y^2"), 1.0)
        rep = scaled_profile(ctx, "y", 0.0, 0.0, scale="m")
        assert rep.peak_order == 1
        assert float(rep.profile.coeffs[1]) == pytest.approx(1.0, abs=1e-12)

    def test_zero_scale_raises(self):
        ctx = QuantityContext(parse_poly("0") + parse_poly("x"), 1.0)
        with pytest.raises(ZeroScale):
            scaled_profile(ctx, "y", 0.0, 0.0, scale="m")

    def test_profile_bounds_randomized(self):
        rng = random.Random(99)
        checked = 0
        while checked < 100:
            phi = random_poly(rng)
            ctx = QuantityContext(phi, float(rng.randint(1, 20)))
            x0 = rng.uniform(-1, 1)
            y0 = rng.uniform(-1, 1)
            axis = rng.choice("xy")
            try:
                rep = scaled_profile(ctx, axis, x0, y0, scale="m")
            except ZeroScale:
                continue
            assert rep.sup_coeff <= 1.0 + 1e-12
            assert rep.peak_value >= rep.c0_bound - 1e-12
            assert rep.c0_bound == (ctx.m + 1) ** (-(ctx.m + 1))
            checked += 1


class TestSlowVariation:
    def test_constant_m1_gives_unit_constant(self):
        # phi = x: M1 = lam everywhere, every admissible ratio is exactly 1
        ctx = QuantityContext(parse_poly("x"), 3.0)
        scan = slow_variation_scan(ctx, 1.0, 0.5, 500, 7)
        assert scan["m1"] == 1.0

    def test_maire_within_proof_constant(self):
        # r0 = (L+2)^-2 / 2 with L = 2; bound (L+2)^2 = 16
        ctx = QuantityContext(MAIRE, 10.0)
        scan = slow_variation_scan(ctx, 0.5, 1.0 / 32.0, 2000, 11)
        assert 1.0 <= scan["m1"] <= 16.0

    def test_vacuous_scan_returns_one(self):
        ctx = QuantityContext(parse_poly("x"), 1.0)
        scan = slow_variation_scan(ctx, 1.0, 1e-30, 50, 3)
        assert scan == {"m1": 1.0, "m2": 1.0, "g": 1.0}

    def test_deterministic_in_seed(self):
        ctx = QuantityContext(MAIRE, 2.0)
        a = slow_variation_scan(ctx, 0.5, 0.1, 300, 21)
        b = slow_variation_scan(ctx, 0.5, 0.1, 300, 21)
        assert a == b
