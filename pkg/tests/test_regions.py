import pytest
from hypothesis import given, strategies as st

from topopurity import (BoundaryUndefinedError, ConfigurationError, LatticeConfig,
                        LatticeMismatchError, Region, annulus, boundary_stats, build_lattice,
                        disk, plaquette, rectangle, standard_partition)
from topopurity.regions import (boundary_band, boundary_components, connected_components,
                                edge_graph_components, touches, vertex_block_region)

LAT = build_lattice(LatticeConfig(6, 2))
edge_sets = st.sets(st.integers(0, LAT.n_edges - 1))


@given(edge_sets, edge_sets)
def test_set_algebra_matches_python_sets(a, b):
    ra, rb = Region.from_edges(LAT, a), Region.from_edges(LAT, b)
    assert set((ra | rb).edges) == a | b
    assert set((ra & rb).edges) == a & b
    assert set((ra - rb).edges) == a - b
    assert set((~ra).edges) == set(range(LAT.n_edges)) - a
    assert ra.issubset(rb) == (a <= b)
    assert ra.isdisjoint(rb) == (not a & b)
    assert len(ra) == len(a)


@given(edge_sets)
def test_triples_round_trip(a):
    r = Region.from_edges(LAT, a)
    assert Region.from_triples(LAT, r.triples()) == r


def test_mixing_lattices_fails():
    other = build_lattice(LatticeConfig(6, 3))
    with pytest.raises(LatticeMismatchError):
        Region.full(LAT) | Region.full(other)


def _stats_by_enumeration(region):
    # Direct count from the definition: per vertex, the number of legs inside.
    lat = region.lattice
    legs = [sum(int(e) in set(region.edges) for e in lat.star_edges[v])
            for v in range(lat.n_vertices)]
    crossing = [v for v, k in enumerate(legs) if 0 < k < 4]
    return (sum(legs[v] for v in crossing), sum(k == 2 for k in legs), sum(k == 3 for k in legs))


@given(edge_sets.filter(lambda s: 0 < len(s) < LAT.n_edges))
def test_boundary_stats_by_enumeration(a):
    st_ = boundary_stats(Region.from_edges(LAT, a))
    assert (st_.boundary_size, st_.n2, st_.n3) == _stats_by_enumeration(Region.from_edges(LAT, a))
    assert st_.n_components == len(st_.components) >= 1


def test_boundary_undefined():
    with pytest.raises(BoundaryUndefinedError):
        boundary_stats(Region.empty(LAT))
    with pytest.raises(BoundaryUndefinedError):
        boundary_stats(Region.full(LAT))


def test_rectangle_boundary():
    lat = build_lattice(LatticeConfig(12, 2))
    r = rectangle(lat, 2, 3, 4, 3)
    st_ = boundary_stats(r)
    # Each outside neighbour of a 4x3 vertex block has exactly one leg inside.
    assert st_.boundary_size == 2 * (4 + 3)
    assert (st_.n2, st_.n3, st_.n_components) == (0, 0, 1)


def test_annulus_has_two_boundaries():
    lat = build_lattice(LatticeConfig(12, 2))
    st_ = boundary_stats(annulus(lat, 1, 1, 9, 2))
    assert st_.n_components == 2
    # Outer ring 4*9 stars and inner ring 4*5 stars, one leg each.
    assert st_.boundary_size == 4 * 9 + 4 * 5


def test_shapes():
    lat = build_lattice(LatticeConfig(8, 2))
    assert len(plaquette(lat, 3, 3)) == 4
    assert disk(lat, 3, 3, 1) == Region.from_edges(lat, lat.star(lat.vertex_id(3, 3)))
    assert len(disk(lat, 3, 3, 2)) == 16
    assert edge_graph_components(plaquette(lat, 0, 0) | plaquette(lat, 4, 4)) == 2
    with pytest.raises(ConfigurationError):
        rectangle(lat, 0, 0, 7, 3)
    with pytest.raises(ConfigurationError):
        disk(lat, 0, 0, 4)


def test_touches_and_band():
    lat = build_lattice(LatticeConfig(8, 2))
    r = rectangle(lat, 2, 2, 2, 2)
    assert touches(r, plaquette(lat, 0, 1))
    assert not touches(r, plaquette(lat, 6, 6))
    band = boundary_band(r)
    assert r.issubset(band | r) and not band.isdisjoint(~r)


def test_connected_components_simple():
    comps = connected_components(range(6), lambda u: {u ^ 1})
    assert comps == [frozenset({0, 1}), frozenset({2, 3}), frozenset({4, 5})]


def test_vertex_block_region_is_star_union():
    lat = build_lattice(LatticeConfig(6, 2))
    vs = {lat.vertex_id(1, 1), lat.vertex_id(1, 2)}
    expected = set()
    for v in vs:
        expected |= set(lat.star(v))
    assert set(vertex_block_region(lat, vs).edges) == expected


class TestStandardPartition:
    def test_layout_L12(self, lat12, part12):
        rows = lambda r: {lat12.vertex_coords(v)[0] for v in r.vertices}
        # Subregions are star unions, so their vertex support extends one site outward.
        full = lambda r: {lat12.vertex_coords(v) for v in r.vertices
                          if set(lat12.star(v)) <= set(r.edges)}
        assert {p[0] for p in full(part12.A)} == {1, 2}
        assert {p[0] for p in full(part12.C)} == {8, 9}
        assert {p[1] for p in full(part12.B_left)} == {1, 2}
        assert {p[1] for p in full(part12.B_right)} == {8, 9}
        assert rows(part12.A) and rows(part12.C)

    def test_disjoint_cover(self, lat12, part12):
        parts = [part12.A, part12.B_left, part12.B_right, part12.C, part12.D]
        total = sum(len(p) for p in parts)
        assert total == lat12.n_edges
        for i, x in enumerate(parts):
            for y in parts[i + 1:]:
                assert x.isdisjoint(y)

    def test_boundary_counts(self, part12):
        n = {k: boundary_stats(r).n_components for k, r in part12.composites().items()}
        assert n == {"AB": 1, "BC": 1, "B": 2, "ABC": 2}
        size = {k: boundary_stats(r).boundary_size for k, r in part12.composites().items()}
        assert size["AB"] + size["BC"] == size["B"] + size["ABC"]
        assert part12.outer and part12.inner and not part12.outer & part12.inner

    def test_disk_variant(self, lat12):
        p = standard_partition(lat12, kind="disk")
        n = {k: boundary_stats(r).n_components for k, r in p.composites().items()}
        assert n == {"AB": 1, "BC": 1, "B": 1, "ABC": 1}
        assert not p.B_right and not p.inner

    @pytest.mark.parametrize("kw", [dict(outer=20), dict(thickness=1), dict(kind="triangle")])
    def test_rejects(self, lat12, kw):
        with pytest.raises(ConfigurationError):
            standard_partition(lat12, **kw)

    def test_boundary_components_match_stats(self, part12):
        comps = boundary_components(part12.ABC)
        assert set().union(*comps) == part12.outer | part12.inner
