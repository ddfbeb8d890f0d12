import math

import pytest

from singularity_series.dyckpath import (
    DyckPath,
    all_dyck_paths,
    area,
    check_updown,
    codinv,
    distance_order,
    from_dyck,
    grid_svg,
    heights,
    inner_vertex_generator,
    kappa,
    rowmotion,
    square_label,
    tau_sequence,
    to_dyck,
    vertex_sets,
)
from singularity_series.gammamod import (
    GammaModule,
    GermParams,
    cell_dim,
    fundamental_domain,
    generators,
    xi_count,
)

EXAMPLE = DyckPath("NNENEEENENEE")
EXAMPLE_PARAMS = GermParams(n=7, d=5)
# y^n = x^d and y^d = x^n are the same germ, so n < d covers every coprime pair
PAIRS_UP_TO_13 = [(n, d) for n in range(2, 7) for d in range(n + 1, 14 - n) if math.gcd(n, d) == 1]


class TestDyckPath:
    def test_shape(self):
        assert (EXAMPLE.n, EXAMPLE.d) == (7, 5)
        assert heights(EXAMPLE) == [2, 3, 3, 3, 4, 5, 5]
        assert area(EXAMPLE) == 2

    def test_rejects_bad_paths(self):
        with pytest.raises(ValueError, match="only N and E"):
            DyckPath("NXE")
        with pytest.raises(ValueError, match="dips below"):
            DyckPath("ENNE")

    def test_square_labels(self, p34):
        assert square_label(p34, 0, 0) == -4
        assert square_label(p34, 1, 0) == -8
        assert square_label(p34, 0, 3) == 5

    @pytest.mark.parametrize(("n", "d"), [(2, 3), (3, 4), (3, 5), (4, 5), (7, 5)])
    def test_path_count_is_rational_catalan(self, n, d):
        assert len(all_dyck_paths(GermParams(n=n, d=d))) == math.comb(n + d, n) // (n + d)


class TestBijection:
    @pytest.mark.parametrize(("n", "d"), [(2, 5), (3, 4), (3, 5), (4, 5)])
    def test_round_trip(self, n, d):
        params = GermParams(n=n, d=d)
        for delta in fundamental_domain(params):
            path = to_dyck(delta)
            assert from_dyck(path, params) == delta
            assert area(path) == delta.codim
            assert codinv(path) == cell_dim(delta)

    def test_paths_cover_the_domain(self, p34, domain_34):
        assert {from_dyck(path, p34) for path in all_dyck_paths(p34)} == set(domain_34)

    def test_outside_fundamental_domain(self, p34):
        with pytest.raises(ValueError, match="fundamental domain"):
            to_dyck(GammaModule((3, 4, 5), p34))

    def test_grid_mismatch(self, p34):
        with pytest.raises(ValueError, match="does not fit"):
            from_dyck(EXAMPLE, p34)


class TestVertices:
    def test_example_corners(self):
        inner, outer = vertex_sets(EXAMPLE)
        assert inner == [(1, 2), (4, 3), (5, 4)]
        assert outer == [(0, 2), (1, 3), (4, 4), (5, 5)]

    def test_example_tau(self):
        order = distance_order(EXAMPLE)
        assert order[0].point == (1, 3)
        assert order[0].kind == "outer"
        assert tau_sequence(EXAMPLE) == [1, 2, 2, 2, 2, 1]

    def test_inner_vertices_are_generators(self):
        delta = from_dyck(EXAMPLE, EXAMPLE_PARAMS)
        inner, _ = vertex_sets(EXAMPLE)
        assert generators(delta) == [0, 1, 3, 9]
        assert sorted(inner_vertex_generator(EXAMPLE, p) for p in inner) == [1, 3, 9]
        assert kappa(EXAMPLE, (1, 2)) == 2
        assert xi_count(delta, 9) == kappa(EXAMPLE, (1, 2))

    def test_kappa_off_path(self):
        with pytest.raises(ValueError, match="not on the path"):
            kappa(EXAMPLE, (3, 0))

    @pytest.mark.parametrize(("n", "d"), PAIRS_UP_TO_13)
    def test_updown(self, n, d):
        assert all(check_updown(path) for path in all_dyck_paths(GermParams(n=n, d=d)))

    def test_updown_example(self):
        assert check_updown(EXAMPLE)


class TestRowmotion:
    def test_example(self, p34, domain_34):
        assert rowmotion(GammaModule((0, 1, 2), p34), domain_34).genvec == (0, 4, 5)

    @pytest.mark.parametrize(("n", "d"), [(2, 3), (2, 5), (3, 4), (3, 5), (4, 5), (2, 7)])
    def test_bijection(self, n, d):
        domain = fundamental_domain(GermParams(n=n, d=d))
        assert {rowmotion(delta, domain) for delta in domain} == set(domain)

    def test_requires_min_zero(self, p34):
        with pytest.raises(ValueError, match="fundamental domain"):
            rowmotion(GammaModule((3, 4, 5), p34))


class TestGridSvg:
    def test_svg(self, p34):
        svg = grid_svg(GammaModule((0, 4, 5), p34))
        assert svg.startswith("<svg")
        assert svg.endswith("</svg>")
        assert svg.count("<rect") == 12
        assert "<polyline" in svg
