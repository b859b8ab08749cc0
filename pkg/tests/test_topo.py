from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from topopurity import (DeformationError, DomainString, GroundStateOracle, LatticeConfig,
                        Region, build_lattice, classify, constant_one_oracle, disk,
                        evolved_topological_purity, lemma1_check, make_bridge, make_cut,
                        pairing_check, plaquette, random_shallow_string, standard_partition,
                        topological_purity)
from topopurity.group_purity import purity_geometric
from topopurity.regions import boundary_stats
from topopurity.topo import (TopoReport, classify_ratio, deformed_composites, domain_sides,
                             format_ratio, modified_composites, parse_ratio, static_ratio)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_static_ratio_is_d_minus_two(d):
    lat = build_lattice(LatticeConfig(10, d))
    rep = topological_purity(GroundStateOracle(lat), standard_partition(lat))
    assert rep.ratio == Fraction(1, d * d)
    assert rep.classification == "topological"
    assert rep.gamma_expected == pytest.approx(np.log2(d))
    assert rep.renyi2_topological == pytest.approx(2 * np.log2(d))
    assert rep.recomputed_ratio() == rep.ratio


@pytest.mark.parametrize("d", [2, 3])
def test_static_ratio_geometric_engine(d):
    lat = build_lattice(LatticeConfig(12, d))
    geo = lambda r: purity_geometric(r).exact
    assert topological_purity(geo, standard_partition(lat)).ratio == Fraction(1, d * d)


def test_simply_connected_and_trivial(lat12, part12, ground12):
    assert topological_purity(ground12, standard_partition(lat12, kind="disk")).ratio == 1
    rep = topological_purity(constant_one_oracle, part12)
    assert rep.ratio == 1 and rep.classification == "trivial"


def test_empty_string_is_static(part12, ground12, lat12):
    rep = evolved_topological_purity(ground12, part12, DomainString(lat12))
    assert rep.ratio == topological_purity(ground12, part12).ratio
    assert rep.term_counts == {"AB": 1, "BC": 1, "B": 1, "ABC": 1}


@given(st.integers(-40, 40), st.sampled_from([2, 3, 5, 6]))
def test_ratio_text_round_trip(k, d):
    value = Fraction(d) ** k
    assert parse_ratio(format_ratio(value, d)) == value


@given(st.fractions(min_value=Fraction(1, 10 ** 6), max_value=10 ** 6))
def test_ratio_text_round_trip_rationals(value):
    assert parse_ratio(format_ratio(value, 2)) == value


def test_ratio_text():
    assert format_ratio(Fraction(1, 4), 2) == "2^-2"
    assert format_ratio(Fraction(1), 3) == "3^0"
    assert format_ratio(Fraction(9), 3) == "3^2"
    assert format_ratio(Fraction(2, 3), 3) == "2/3"
    assert classify_ratio(Fraction(1, 9), 3) == "topological"
    assert classify_ratio(Fraction(1, 3), 3) == "other"


def test_report_text_and_csv(part12, ground12):
    rep = topological_purity(ground12, part12)
    assert rep.ratio_text() == "2^-2 (0.25)"
    assert "ratio = 2^-2 (0.25)" in rep.to_text()
    row = rep.csv_fields()
    assert row["ratio"] == "2^-2" and parse_ratio(row["P_AB"]) == rep.entries["AB"]


def test_report_mc_entries():
    entries = {"AB": (0.5, 0.01), "BC": (0.5, 0.01), "B": (1.0, 0.0), "ABC": (1.0, 0.0)}
    rep = TopoReport(2, entries, 0.25, "topological", 0.007)
    assert not rep.exact and rep.recomputed_ratio() == pytest.approx(0.25)
    assert rep.ratio_text() == "0.25 +- 0.007"
    assert rep.csv_fields()["ratio"] == ""


class TestLemma1:
    def test_outer_bump(self, part12):
        x = plaquette(part12.lattice, 0, 3)
        assert lemma1_check(part12, x)
        assert deformed_composites(part12, Region.empty(part12.lattice)) == part12.composites()

    def test_bumps_everywhere(self, part12, ground12):
        lat = part12.lattice
        checked = 0
        for r in range(lat.L):
            for c in range(lat.L):
                for x in (plaquette(lat, r, c), disk(lat, r, c, 1)):
                    try:
                        ok = lemma1_check(part12, x, ground12)
                    except DeformationError:
                        continue
                    assert ok
                    checked += 1
        assert checked >= 20

    def test_violations(self, part12):
        lat = part12.lattice
        with pytest.raises(DeformationError):
            deformed_composites(part12, plaquette(lat, 5, 5))
        bridge = Region.empty(lat)
        for x in make_bridge(part12, "A", "C"):
            bridge = bridge | x
        with pytest.raises(DeformationError):
            deformed_composites(part12, bridge)


class TestModifiedRegions:
    """Single-branch pictures of the unsafe constructions."""

    def _union(self, s):
        out = Region.empty(s.lattice)
        for x in s:
            out = out | x
        return out

    def test_cut_drop_branch_is_trivial(self):
        lat = build_lattice(LatticeConfig(20, 2))
        part = standard_partition(lat, thickness=5)
        comps = modified_composites(part, self._union(make_cut(part)), "drop")
        assert static_ratio(GroundStateOracle(lat), comps) == 1

    def test_b_bridge_add_branch_is_trivial(self, part12, ground12):
        x = self._union(make_bridge(part12, "B_left", "B_right"))
        comps = modified_composites(part12, x, "add")
        n = {k: boundary_stats(r).n_components for k, r in comps.items()}
        assert n == {"AB": 1, "BC": 1, "B": 1, "ABC": 2}
        assert static_ratio(ground12, comps) == 1

    def test_corner_wall_keeps_ratio(self):
        lat = build_lattice(LatticeConfig(16, 2))
        part = standard_partition(lat)
        comps = modified_composites(part, self._union(make_bridge(part, "A", "B_left")), "add")
        n = {k: boundary_stats(r).n_components for k, r in comps.items()}
        assert n == {"AB": 2, "BC": 1, "B": 2, "ABC": 3}
        assert static_ratio(GroundStateOracle(lat), comps) == Fraction(1, 4)

    def test_bad_branch(self, part12):
        with pytest.raises(ValueError):
            modified_composites(part12, Region.empty(part12.lattice), "keep")


@pytest.mark.parametrize("seed", range(6))
def test_pairing_on_safe_strings(part12, ground12, seed):
    s = random_shallow_string(part12.lattice, part12, 1 + seed % 3, "mixed", seed,
                              focus="boundary")
    for oracle in (ground12, constant_one_oracle):
        rep = pairing_check(oracle, part12, s)
        assert rep.ok, rep.failures[:3]
        assert rep.quadruples == 4 ** len(s)


def test_domain_sides(part12):
    lat = part12.lattice
    s = DomainString(lat, [plaquette(lat, 0, 4), plaquette(lat, 9, 4)])
    assert classify(s, part12).safe
    assert domain_sides(s.reverse().domains, part12) == ["C", "A"]


def test_product_state_ratio_moves_on_unsafe_bridge(part12):
    # The product-state ratio is 1 on safe strings but not on every string: the A-C
    # bridge leaves its purities unequal, so the exact ratio drifts just below 1.
    s = make_bridge(part12, "A", "C")
    ratio = evolved_topological_purity(constant_one_oracle, part12, s).ratio
    assert ratio == Fraction(34286475995, 34290540251)
    assert not classify(s, part12).safe
