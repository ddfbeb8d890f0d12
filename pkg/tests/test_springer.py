import itertools
import math

import pytest

from singularity_series.exactpoly import ONE, Q, T
from singularity_series.gammamod import GammaModule, GermParams, cell_dim
from singularity_series.linkseries import pic_series, specialize_a0
from singularity_series.springer import (
    a_stat,
    a_stat_inverse,
    gap_generating_sum,
    gap_stat,
    gm_dual,
    hikita_rows,
    iota,
    mu_to_delta,
    mu_values,
    top_stratum,
    valid_cocharacters,
    validate_cocharacter,
)

# mu, a, values, module, min
HIKITA_34 = [
    ((0, 0, 0), (0, 0), (2, 1, 0), (3, 4, 5), 3),
    ((-1, 0, 1), (0, 1), (-1, 1, 3), (6, 4, 2), 2),
    ((-1, 1, 0), (1, 0), (-1, 4, 0), (3, 7, 2), 2),
    ((0, -1, 1), (1, 1), (2, -2, 3), (6, 1, 5), 1),
    ((1, 0, -1), (2, 1), (5, 1, -3), (0, 4, 8), 0),
]

# y^n = x^d and y^d = x^n are the same germ, so n < d covers every coprime pair
PAIRS_UP_TO_12 = [(n, d) for n in range(2, 6) for d in range(n + 1, 13 - n) if math.gcd(n, d) == 1]


class TestCocharacters:
    def test_validation(self):
        assert validate_cocharacter([1, -1]) == (1, -1)
        with pytest.raises(ValueError, match="does not sum to zero"):
            validate_cocharacter((1, 1))
        with pytest.raises(ValueError, match="at least one entry"):
            validate_cocharacter(())

    @pytest.mark.parametrize(("mu", "a", "values", "_genvec", "_min"), HIKITA_34)
    def test_statistics(self, mu, a, values, _genvec, _min):
        assert a_stat(mu) == a
        assert a_stat_inverse(a) == mu
        assert mu_values(mu) == values

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_a_stat_is_a_bijection(self, n):
        for head in itertools.product(range(-3, 4), repeat=n - 1):
            mu = (*head, -sum(head))
            assert a_stat_inverse(a_stat(mu), n) == mu
        for a in itertools.product(range(4), repeat=n - 1):
            assert a_stat(a_stat_inverse(a, n)) == a

    def test_inverse_guards(self):
        with pytest.raises(ValueError, match="nonnegative"):
            a_stat_inverse((-1, 0))
        with pytest.raises(ValueError, match="needs 2 entries"):
            a_stat_inverse((1,), 3)

    def test_iota(self):
        assert iota((-1, 1, 0)) == (0, -1, 1)
        assert iota(iota((2, -3, 1))) == (2, -3, 1)


class TestDictionary:
    @pytest.mark.parametrize(("mu", "_a", "_values", "genvec", "low"), HIKITA_34)
    def test_modules(self, p34, mu, _a, _values, genvec, low):
        delta = mu_to_delta(mu, p34)
        assert delta.genvec == genvec
        assert delta.min == low
        assert gap_stat(delta) == 3 - low

    def test_valid_cocharacters_34(self, p34):
        assert valid_cocharacters(p34) == [row[0] for row in HIKITA_34]

    @pytest.mark.parametrize(("n", "d"), [(2, 3), (2, 5), (3, 4), (3, 5), (4, 5)])
    def test_dictionary_covers_the_top_stratum(self, n, d):
        params = GermParams(n=n, d=d)
        modules = {mu_to_delta(mu, params) for mu in valid_cocharacters(params)}
        assert modules == set(top_stratum(params))

    @pytest.mark.parametrize(("n", "d"), PAIRS_UP_TO_12)
    def test_a_size_is_the_gap(self, n, d):
        params = GermParams(n=n, d=d)
        for mu in valid_cocharacters(params):
            delta = mu_to_delta(mu, params)
            assert sum(a_stat(mu)) == params.delta - delta.min == gap_stat(delta), mu

    def test_invalid_cocharacter(self, p34):
        with pytest.raises(ValueError, match="not valid"):
            mu_to_delta((2, 0, -2), p34)
        with pytest.raises(ValueError, match="expected 3"):
            mu_to_delta((1, -1), p34)

    def test_hikita_rows(self, p34):
        rows = hikita_rows(p34)
        assert [(tuple(r.mu), tuple(r.a), r.a_size, tuple(r.values), r.min) for r in rows] == [
            (mu, a, sum(a), values, low) for mu, a, values, _, low in HIKITA_34
        ]
        assert [r.module for r in rows] == [
            "Delta_{3,4,5}",
            "Delta_{6,4,2}",
            "Delta_{3,7,2}",
            "Delta_{6,1,5}",
            "Delta_{0,4,8}",
        ]


class TestDuality:
    @pytest.mark.parametrize(("n", "d"), PAIRS_UP_TO_12)
    def test_preserves_cell_dimension(self, n, d):
        params = GermParams(n=n, d=d)
        for mu in valid_cocharacters(params):
            delta = mu_to_delta(mu, params)
            assert cell_dim(gm_dual(delta)) == cell_dim(delta), mu

    def test_examples(self, p34):
        images = {m.genvec: gm_dual(m).genvec for m in top_stratum(p34)}
        assert images == {
            (3, 4, 5): (3, 4, 5),
            (0, 4, 8): (0, 4, 8),
            (6, 4, 2): (6, 4, 2),
            (3, 7, 2): (6, 1, 5),
            (6, 1, 5): (3, 7, 2),
        }

    @pytest.mark.parametrize(("n", "d"), [(2, 5), (3, 5), (4, 5)])
    def test_involution(self, n, d):
        for delta in top_stratum(GermParams(n=n, d=d)):
            assert gm_dual(gm_dual(delta)) == delta

    def test_requires_top_stratum(self, p34):
        with pytest.raises(ValueError, match="not in I\\^delta"):
            gm_dual(GammaModule((0, 1, 2), p34))


class TestGapSum:
    def test_torus_34(self, p34):
        expected = ONE + Q * T**2 + Q * T**4 + Q**2 * T**4 + Q**3 * T**6
        assert gap_generating_sum(p34) == expected

    @pytest.mark.parametrize(("n", "d"), [(2, 3), (3, 4), (3, 5), (2, 7)])
    def test_matches_picard_at_a0(self, n, d):
        params = GermParams(n=n, d=d)
        pic = specialize_a0(pic_series(params, params.delta + 1).value).to_poly()
        assert gap_generating_sum(params) == pic

    def test_dimension_is_shift_invariant(self, p34):
        for delta in top_stratum(p34):
            base = delta.shift(-delta.min)
            assert cell_dim(delta) == cell_dim(base)
