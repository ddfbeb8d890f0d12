from fractions import Fraction

import pytest
from conftest import random_poly

from singularity_series.exactpoly import (
    ONE,
    A,
    HalfInt,
    LaurentPoly,
    Q,
    QSeries,
    T,
    equal_upto,
    first_difference,
    motivic,
    one_minus_q_power,
    parse,
    series_div_geometric,
    substitute,
    substitute_series,
)


def geometric(trunc: int) -> QSeries:
    return series_div_geometric(QSeries.from_poly(ONE, trunc), 1)


class TestHalfInt:
    def test_of_and_value(self):
        assert HalfInt.of(Fraction(3, 2)).doubled == 3
        assert HalfInt.of(2).value == 2
        assert str(HalfInt(-3)) == "-3/2"

    def test_rejects_quarters(self):
        with pytest.raises(ValueError, match="not a half-integer"):
            HalfInt.of(Fraction(1, 4))


class TestLaurentPoly:
    def test_no_zero_coefficients_stored(self):
        p = LaurentPoly({(0, 0, 0): 0, (2, 0, 0): 3})
        assert p.terms == {(2, 0, 0): Fraction(3)}
        assert (A - A).is_zero()

    def test_ring_axioms(self, rng):
        for _ in range(25):
            f, g, h = (random_poly(rng, half=True) for _ in range(3))
            assert (f * g) * h == f * (g * h)
            assert f * (g + h) == f * g + f * h
            assert f * ONE == f
            assert f + LaurentPoly.zero() == f
            assert f - f == 0

    def test_negative_powers_only_for_monomials(self):
        assert (2 * A * Q**-1) ** -2 == LaurentPoly.monomial(a=-2, q=2, coeff=Fraction(1, 4))
        with pytest.raises(ValueError, match="monomials"):
            (ONE + A) ** -1

    def test_degrees(self):
        p = Q**-1 + A * T ** 3 + LaurentPoly.monomial(q=Fraction(5, 2))
        assert p.degree("q") == HalfInt(5)
        assert p.low_degree("q") == HalfInt(-2)
        assert p.degree("t").value == 3
        assert p.coefficient("t", 3) == A

    def test_divide_exact(self):
        product = (ONE + A) * (ONE - Q + Q * T + A * T)
        assert product.divide_exact(ONE + A) == ONE - Q + Q * T + A * T
        with pytest.raises(RuntimeError, match="not divisible"):
            (ONE + Q).divide_exact(ONE + A)
        with pytest.raises(ZeroDivisionError):
            A.divide_exact(LaurentPoly.zero())

    def test_evaluate_and_specialize(self):
        p = ONE + 2 * A * Q + Q * T**2
        assert p.evaluate(a=1, q=2, t=3) == 1 + 4 + 18
        assert p.specialize(a=0) == ONE + Q * T**2
        with pytest.raises(ValueError, match="negative power"):
            (A**-1).specialize(a=0)


class TestSubstitute:
    def test_monomial_map(self):
        assert substitute(A * T, {"t": Q * T**2}) == A * Q * T**2

    def test_ors_substitution_of_trefoil(self):
        x = ONE + Q * T + A * T
        images = {"a": A**2 * T, "q": Q**2, "t": Q**2 * T**2}
        assert substitute(x, images) == ONE + Q**4 * T**2 + A**2 * Q**2 * T**3

    def test_identity_map(self, rng):
        for _ in range(10):
            p = random_poly(rng, half=True)
            assert substitute(p, {}) == p
            assert substitute(p, {"a": A, "q": Q, "t": T}) == p

    def test_homomorphism_and_composition(self, rng):
        first = {"t": LaurentPoly.monomial(q=Fraction(1, 2), t=1)}
        second = {"q": Q**2, "a": A**2 * T}
        composed = {
            "t": LaurentPoly.monomial(q=1, t=1),
            "q": Q**2,
            "a": A**2 * T,
        }
        for _ in range(10):
            f, g = random_poly(rng), random_poly(rng)
            assert substitute(f * g, first) == substitute(f, first) * substitute(g, first)
            assert substitute(substitute(f, first), second) == substitute(f, composed)

    def test_rejects_finer_than_half_integers(self):
        with pytest.raises(ValueError, match="half-integer grid"):
            substitute(LaurentPoly.monomial(t=Fraction(1, 2)), {"t": LaurentPoly.monomial(t=Fraction(1, 2))})

    def test_rejects_non_monomial_image(self):
        with pytest.raises(ValueError, match="single monomial"):
            substitute(T, {"t": ONE + T})


class TestParse:
    @pytest.mark.parametrize(
        "poly",
        [
            ONE + Q * T + A * T,
            Q**-1 - 2 * Q**2 * LaurentPoly.monomial(t=Fraction(3, 2)) + Fraction(1, 3) * A,
            A**-2 * Q**-6 + A**10 * T**8,
            LaurentPoly.zero(),
        ],
    )
    def test_printer_round_trip(self, poly):
        assert parse(str(poly)) == poly

    def test_canonical_order(self):
        assert str(Q * T + A + ONE) == "1 + a + q*t"
        assert str(LaurentPoly.monomial(q=Fraction(-1, 2))) == "q^(-1/2)"

    def test_rejects_garbage(self):
        with pytest.raises(ValueError, match="cannot parse"):
            parse("1 + x")


class TestMotivic:
    def test_classes(self):
        assert motivic(pt=1) == ONE
        assert motivic(A1=1) == T**2
        assert motivic(Gm=1) == T**2 - 1
        assert motivic(P1=1) == ONE + T**2
        assert motivic(pt=2, Gm=1) == ONE + T**2

    def test_unknown_class(self):
        with pytest.raises(ValueError, match="Available"):
            motivic(P2=1)


class TestQSeries:
    def test_geometric_series(self):
        s = geometric(5)
        assert s.to_poly() == sum((Q**j for j in range(6)), LaurentPoly.zero())
        assert s.trunc == HalfInt(10)

    def test_cancellation(self):
        s = series_div_geometric(QSeries.from_poly(ONE - Q, 8), 2)
        assert s == geometric(8)

    def test_cusp_quot_from_pic(self):
        pic = QSeries.from_poly(ONE + Q * motivic(A1=1), 10)
        quot = series_div_geometric(pic, 1)
        expected = ONE + sum((Q**ell * motivic(P1=1) for ell in range(1, 11)), LaurentPoly.zero())
        assert quot.to_poly() == expected

    def test_division_round_trip(self, rng):
        for b in range(5):
            poly = random_poly(rng).specialize(q=1) * Q ** rng.randint(0, 3)
            s = QSeries.from_poly(poly + Q**2 * A, 12)
            back = series_div_geometric(s, b) * one_minus_q_power(b, 12)
            assert equal_upto(back, s, 12)

    def test_step_division(self):
        s = series_div_geometric(QSeries.from_poly(ONE, 6), 1, step=2)
        assert s.to_poly() == ONE + Q**2 + Q**4 + Q**6

    def test_truncation_is_min(self):
        assert (geometric(3) + geometric(7)).trunc == HalfInt.of(3)
        assert (geometric(3) * geometric(7)).trunc == HalfInt.of(3)

    def test_scale_by_negative_power_lowers_truncation(self):
        scaled = geometric(4).scale(A * Q**-2)
        assert scaled.trunc == HalfInt.of(2)
        assert scaled[-2] == A

    def test_getitem_beyond_truncation(self):
        with pytest.raises(ValueError, match="beyond the truncation"):
            geometric(3)[4]

    def test_rejects_q_in_coefficients(self):
        with pytest.raises(ValueError, match="must not contain q"):
            QSeries({0: Q}, 3)

    def test_substitute_series(self):
        s = QSeries.from_poly(ONE + Q * T**2, 5)
        image = substitute_series(s, {"t": LaurentPoly.monomial(q=Fraction(1, 2), t=1)})
        assert image.to_poly() == ONE + Q**2 * T**2
        assert image.trunc == s.trunc
        doubled = substitute_series(s, {"q": Q**2})
        assert doubled.trunc == HalfInt.of(10)

    def test_substitute_keeps_the_truncation(self):
        s = QSeries.from_poly(ONE + Q * T**2 + Q**6 * A, 6)
        halved = s.substitute({"t": LaurentPoly.monomial(t=Fraction(1, 2))})
        assert halved.trunc == HalfInt.of(6)
        assert halved.to_poly() == ONE + Q * T + Q**6 * A
        squared = s.substitute({"q": Q**2})
        assert squared.trunc == HalfInt.of(12)
        assert squared.to_poly() == ONE + Q**2 * T**2 + Q**12 * A
        rooted = s.substitute({"q": LaurentPoly.monomial(q=Fraction(1, 2))})
        assert rooted.trunc == HalfInt.of(3)

    def test_substitute_series_guards(self):
        s = QSeries.from_poly(ONE + Q * T**-2, 5)
        with pytest.raises(ValueError, match="positive q-power"):
            substitute_series(s, {"q": Q**-1})
        with pytest.raises(ValueError, match="truncation would be lost"):
            substitute_series(s, {"t": Q * T})

    def test_json_round_trip(self):
        s = series_div_geometric(QSeries.from_poly(ONE + A * LaurentPoly.monomial(t=Fraction(1, 2)), 6), 2)
        assert QSeries.from_json(s.to_json()) == s
        assert s.to_json()["trunc2"] == 12


class TestEqualUpto:
    def test_agreement(self):
        partial = QSeries.from_poly(sum((Q**j for j in range(10)), LaurentPoly.zero()), 9)
        assert equal_upto(geometric(12), partial, 9)

    def test_disagreement(self):
        assert not equal_upto(geometric(12), QSeries.from_poly(ONE, 5), 1)
        exponent, left, right = first_difference(geometric(12), QSeries.from_poly(ONE, 5), 1)
        assert exponent == HalfInt.of(1)
        assert (left, right) == (ONE, LaurentPoly.zero())

    def test_guard(self):
        with pytest.raises(ValueError, match="exceeds a truncation"):
            equal_upto(geometric(4), geometric(6), 5)
