import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from topopurity import (BoundaryUndefinedError, GroundStateOracle, LatticeConfig, Region,
                        annulus, build_lattice, constant_one_oracle, disk, plaquette,
                        purity_geometric, purity_group, rectangle, star_generator_matrix)
from topopurity.group_purity import (group_order, prime_factors, product_generator_matrix,
                                     rank_mod_p, smith_valuations, span_order,
                                     subgroup_order_supported_in)
from topopurity.oracle import build_ground_state, reduced_purity


def _span_brute(matrix, d):
    rows = [tuple(int(x) % d for x in r) for r in np.asarray(matrix)]
    n = len(rows[0]) if rows else 0
    seen = {tuple([0] * n)}
    for coeffs in itertools.product(range(d), repeat=len(rows)):
        seen.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % d for j in range(n)))
    return len(seen)


small_matrices = st.integers(1, 4).flatmap(lambda m: st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 11), min_size=n, max_size=n),
                       min_size=m, max_size=m)))


@given(small_matrices, st.sampled_from([2, 3, 4, 6, 8, 9, 12]))
def test_span_order_brute_force(matrix, d):
    assert span_order(matrix, d) == _span_brute(matrix, d)


@given(small_matrices, st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_p_brute_force(matrix, p):
    assert p ** rank_mod_p(matrix, p) == _span_brute(matrix, p)


def test_smith_valuations_example():
    # diag(1, 2, 4) over Z_8: span order 8 * 4 * 2.
    assert sorted(smith_valuations([[1, 0, 0], [0, 2, 0], [0, 0, 4]], 2, 3)) == [0, 1, 2]
    assert prime_factors(360) == {2: 3, 3: 2, 5: 1}


@pytest.mark.parametrize("L, d", [(2, 2), (3, 3), (4, 4), (3, 6)])
def test_star_group_order(L, d):
    # L^2 stars with a single relation (product of all stars is the identity).
    lat = build_lattice(LatticeConfig(L, d))
    assert group_order(star_generator_matrix(lat)) == L * L - 1


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
class TestHandValues:
    """Purity = |stabilizers inside R| / d^|R| counted by hand for small shapes."""

    def test_single_edge(self, d):
        lat = build_lattice(LatticeConfig(5, d))
        o = GroundStateOracle(lat)
        assert o(Region.from_edges(lat, [0])) == Fraction(1, d)

    def test_star(self, d):
        lat = build_lattice(LatticeConfig(5, d))
        assert GroundStateOracle(lat)(disk(lat, 2, 2, 1)) == Fraction(1, d ** 3)

    def test_plaquette(self, d):
        lat = build_lattice(LatticeConfig(5, d))
        assert GroundStateOracle(lat)(plaquette(lat, 2, 2)) == Fraction(1, d ** 3)

    def test_rectangle(self, d):
        # A 2x1 vertex block: 7 edges holding two whole stars and no whole plaquette.
        lat = build_lattice(LatticeConfig(6, d))
        assert GroundStateOracle(lat)(rectangle(lat, 1, 1, 2, 1)) == Fraction(1, d ** 5)


@given(st.sets(st.integers(0, 17), min_size=1, max_size=17))
def test_complementary_regions(edges):
    lat = build_lattice(LatticeConfig(3, 3))
    o = GroundStateOracle(lat)
    r = Region.from_edges(lat, edges)
    assert o(r) == o(~r)


@given(st.sets(st.integers(0, 7), min_size=1, max_size=7))
def test_matches_statevector_L2(edges):
    lat = build_lattice(LatticeConfig(2, 2))
    state = build_ground_state(lat)
    r = Region.from_edges(lat, edges)
    g = purity_group(star_generator_matrix(lat), r)
    assert abs(float(g.exact) - reduced_purity(state, r)) < 1e-10
    r_in, r_out, r_all = g.exponents
    assert g.exact == Fraction(2) ** (r_in + r_out - r_all)


def test_matches_statevector_composite_d():
    lat = build_lattice(LatticeConfig(2, 4))
    state = build_ground_state(lat)
    o = GroundStateOracle(lat)
    rng = np.random.default_rng(1)
    for _ in range(15):
        mask = rng.random(lat.n_edges) < 0.5
        if 0 < mask.sum() < lat.n_edges:
            r = Region.from_bool_mask(lat, mask)
            assert abs(float(o(r)) - reduced_purity(state, r)) < 1e-10


@given(st.integers(0, 11), st.integers(0, 11), st.integers(1, 6), st.integers(1, 6),
       st.sampled_from([2, 3, 5]))
def test_geometric_equals_group_on_rectangles(r0, c0, h, w, d):
    lat = build_lattice(LatticeConfig(12, d))
    region = rectangle(lat, r0, c0, h, w)
    assert purity_geometric(region).exact == purity_group(star_generator_matrix(lat), region).exact


@pytest.mark.parametrize("outer, thickness", [(6, 2), (8, 2), (9, 3), (7, 1)])
def test_geometric_equals_group_on_annuli(outer, thickness):
    lat = build_lattice(LatticeConfig(12, 3))
    region = annulus(lat, 2, 1, outer, thickness)
    g = purity_group(star_generator_matrix(lat), region)
    assert purity_geometric(region).exact == g.exact
    assert purity_geometric(region).log2 == pytest.approx(g.log2)


def test_trivial_regions():
    lat = build_lattice(LatticeConfig(3, 2))
    o = GroundStateOracle(lat)
    assert o(Region.empty(lat)) == 1 and o(Region.full(lat)) == 1
    with pytest.raises(BoundaryUndefinedError):
        purity_group(star_generator_matrix(lat), Region.empty(lat))
    assert o.exponent(plaquette(lat, 0, 0)) == -3


def test_product_state_group():
    lat = build_lattice(LatticeConfig(3, 2))
    m = product_generator_matrix(lat)
    r = plaquette(lat, 1, 1)
    assert group_order(m) == 0 and subgroup_order_supported_in(m, r) == 0
    assert purity_group(m, r).exact == 1 == constant_one_oracle(r)


def test_subgroup_supported_in_star():
    lat = build_lattice(LatticeConfig(4, 3))
    assert subgroup_order_supported_in(star_generator_matrix(lat), disk(lat, 1, 1, 1)) == 1
