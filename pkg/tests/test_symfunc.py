from fractions import Fraction

import pytest

from singularity_series import symfunc
from singularity_series.exactpoly import ONE, A, Q, T
from singularity_series.htilde_cache import HtildeCache
from singularity_series.symfunc import (
    SymFunc,
    bar,
    basis_element,
    character,
    conjugate,
    dominates,
    fit_polynomials,
    grid_values,
    hall_pair,
    hook_count,
    htilde_norm,
    macdonald_cauchy_pairing,
    macdonald_htilde,
    n_stat,
    nabla_eigenvalue,
    nabla_pow,
    omega,
    partitions,
    plethystic_scale,
    psi,
    z_lambda,
)


def schur(*lam):
    return basis_element("schur", lam)


def e(n):
    return basis_element("elem", (n,))


class TestPartitions:
    def test_enumeration(self):
        assert partitions(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))
        assert [len(partitions(n)) for n in range(1, 8)] == [1, 2, 3, 5, 7, 11, 15]

    def test_statistics(self):
        assert conjugate((3, 1)) == (2, 1, 1)
        assert conjugate(conjugate((4, 2, 2, 1))) == (4, 2, 2, 1)
        assert n_stat((2, 1)) == 1
        assert n_stat((1, 1, 1)) == 3
        assert hook_count((3, 2)) == 5
        assert z_lambda((2, 1, 1)) == 4

    def test_dominance(self):
        assert dominates((3, 1), (2, 2))
        assert not dominates((2, 2), (3, 1))
        assert not dominates((3, 1, 1, 1), (2, 2, 2))
        assert not dominates((2, 2, 2), (3, 1, 1, 1))


class TestCharacters:
    def test_values(self):
        assert character((2, 1), (1, 1, 1)) == 2
        assert character((2, 1), (3,)) == -1
        assert character((1, 1, 1), (2, 1)) == -1
        assert character((2, 2), (2, 2)) == 2

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_orthogonality(self, n):
        for lam in partitions(n):
            for mu in partitions(n):
                total = sum(
                    Fraction(character(lam, rho) * character(mu, rho), z_lambda(rho)) for rho in partitions(n)
                )
                assert total == (1 if lam == mu else 0)


class TestBases:
    def test_small_expansions(self):
        assert basis_element("power", (1, 1)) == schur(2) + schur(1, 1)
        assert basis_element("homog", (1, 1)) == schur(2) + schur(1, 1)
        assert e(2) == schur(1, 1)
        assert basis_element("elem", (2, 1)) == schur(2, 1) + schur(1, 1, 1)
        assert basis_element("homog", (3,)) == schur(3)

    def test_omega_and_pairing(self):
        assert omega(basis_element("homog", (4,))) == e(4)
        assert hall_pair(schur(2, 1), schur(2, 1)) == ONE
        assert hall_pair(basis_element("power", (1, 1, 1)), schur(2, 1)) == 2 * ONE
        assert hall_pair(basis_element("homog", (2, 1)), schur(2, 1)) == ONE
        assert hall_pair(basis_element("homog", (2, 1)), schur(3)) == ONE
        assert hall_pair(basis_element("homog", (2, 1)), schur(1, 1, 1)).is_zero()
        assert hall_pair(e(4), schur(1, 1, 1, 1)) == ONE
        assert hall_pair(basis_element("homog", (4,)), schur(4)) == ONE

    def test_degree_mismatch(self):
        with pytest.raises(ValueError, match="degree mismatch"):
            schur(2) + schur(3)
        with pytest.raises(ValueError, match="does not have size"):
            SymFunc(2, {(3,): 1})

    def test_guards(self):
        with pytest.raises(ValueError, match="Unknown basis"):
            basis_element("monomial", (2,))
        with pytest.raises(ValueError, match="exceeds the limit"):
            schur(9)

    def test_psi(self):
        assert psi(schur(3)) == ONE + A
        assert psi(schur(2, 1)) == (ONE + A) * A
        assert psi(schur(2, 2)).is_zero()

    def test_plethystic_scale(self):
        assert plethystic_scale(schur(1), Q) == schur(1) * (ONE - Q)
        assert plethystic_scale(schur(2), ONE).coeffs == {}

    def test_bar(self):
        assert bar(schur(2) * (Q + T**2)) == schur(2) * (Q**-1 + T**-2)


class TestInterpolation:
    def test_grid_values_are_disjoint(self):
        assert grid_values(3, 1) == [2, 5, 11]
        assert grid_values(3, 0) == [3, 7, 13]

    def test_fit(self):
        polys = fit_polynomials(lambda q, t: [q * t + 2, q**2], 2, 1, "test")
        assert polys == [Q * T + 2 * ONE, Q**2]

    def test_fit_detects_low_degree_bound(self):
        with pytest.raises(RuntimeError, match="fails its check"):
            fit_polynomials(lambda q, t: [q**3], 1, 0, "cubic")


class TestMacdonald:
    @pytest.mark.parametrize(
        ("mu", "expected"),
        [
            ((2,), {(2,): ONE, (1, 1): Q}),
            ((1, 1), {(2,): ONE, (1, 1): T}),
            ((3,), {(3,): ONE, (2, 1): Q + Q**2, (1, 1, 1): Q**3}),
            ((2, 1), {(3,): ONE, (2, 1): Q + T, (1, 1, 1): Q * T}),
            ((1, 1, 1), {(3,): ONE, (2, 1): T + T**2, (1, 1, 1): T**3}),
            (
                (2, 2),
                {
                    (4,): ONE,
                    (3, 1): Q + T + Q * T,
                    (2, 2): Q**2 + T**2,
                    (2, 1, 1): Q * T + Q**2 * T + Q * T**2,
                    (1, 1, 1, 1): Q**2 * T**2,
                },
            ),
        ],
    )
    def test_known_values(self, mu, expected):
        assert macdonald_htilde(mu) == SymFunc(sum(mu), expected)

    def test_qt_symmetry(self):
        swap = {"q": T, "t": Q}
        for mu in partitions(4):
            swapped = macdonald_htilde(conjugate(mu)).map_coeffs(lambda c: c.substitute(swap))
            assert macdonald_htilde(mu) == swapped

    @pytest.mark.parametrize("n", [2, 3, 4, pytest.param(5, marks=pytest.mark.slow)])
    def test_positivity_and_specialization(self, n):
        for mu in partitions(n):
            h = macdonald_htilde(mu)
            assert h[(n,)] == ONE
            for lam, coeff in h.coeffs.items():
                assert coeff.coefficients_nonnegative_integers(), (mu, lam)
                assert coeff.evaluate(q=1, t=1) == character(lam, (1,) * n), (mu, lam)

    @pytest.mark.slow
    def test_qt_symmetry_degree_five(self):
        swap = {"q": T, "t": Q}
        for mu in partitions(5):
            swapped = macdonald_htilde(conjugate(mu)).map_coeffs(lambda c: c.substitute(swap))
            assert macdonald_htilde(mu) == swapped

    def test_degree_guard(self):
        with pytest.raises(ValueError, match="limited to degree"):
            macdonald_htilde((4, 3))

    def test_eigenvalue_and_norm(self):
        assert nabla_eigenvalue((2, 1)) == Q * T
        assert nabla_eigenvalue((3,)) == Q**3
        assert htilde_norm((1,)) == (ONE - T) * (ONE - Q)

    def test_disk_cache_is_filled_and_read(self, tmp_path):
        cache = HtildeCache(tmp_path / "htilde.json")
        macdonald_htilde.cache_clear()
        try:
            symfunc.use_cache(cache)
            expected = macdonald_htilde((2, 1))
            assert (2, 1) in cache
            assert SymFunc(3, cache.get((2, 1))) == expected

            cache.put((2, 1), {(3,): ONE})
            macdonald_htilde.cache_clear()
            assert macdonald_htilde((2, 1)) == schur(3)
        finally:
            symfunc.use_cache(None)
            macdonald_htilde.cache_clear()


class TestNabla:
    def test_degree_two(self):
        assert nabla_pow(e(2), 1) == schur(2) + schur(1, 1) * (Q + T)
        p11 = basis_element("power", (1, 1))
        assert nabla_pow(p11, 1) == schur(2) + schur(1, 1) * (Q + T - Q * T)

    def test_degree_three(self):
        expected = (
            schur(3)
            + schur(2, 1) * (Q**2 + Q * T + T**2 + Q + T)
            + schur(1, 1, 1) * (Q**3 + Q**2 * T + Q * T**2 + T**3 + Q * T)
        )
        assert nabla_pow(e(3), 1) == expected

    def test_eigenvectors(self):
        for mu in partitions(3):
            h = macdonald_htilde(mu)
            assert nabla_pow(h, 2) == h * nabla_eigenvalue(mu) ** 2

    def test_inverse(self):
        assert nabla_pow(nabla_pow(e(2), 1), -1) == e(2)
        assert nabla_pow(e(3), 0) == e(3)

    def test_rejects_a(self):
        with pytest.raises(ValueError, match="q and t only"):
            nabla_pow(schur(2) * A, 1)

    def test_catalan_count_degree_four(self):
        assert nabla_pow(e(4), 1)[(1, 1, 1, 1)].evaluate(q=1, t=1) == 14

    @pytest.mark.slow
    def test_catalan_count_degree_five(self):
        assert nabla_pow(e(5), 1)[(1, 1, 1, 1, 1)].evaluate(q=1, t=1) == 42


class TestCauchyPairing:
    def test_degree_one(self):
        assert macdonald_cauchy_pairing(1, 3) == schur(1)

    def test_without_nabla_gives_p1n(self):
        assert macdonald_cauchy_pairing(2, 0) == basis_element("power", (1, 1))
