"""Strings that break the safe-string conditions.

Three adversarial constructions: a cut through A, a bridge across the hole
from B_left to B_right, and a wall of disks that fences off a corner of the
hole.  The classifier names the violated condition for the cut and the
bridge.  On their single branch where every domain is dropped (cut) or added
(bridge) the modified regions read as a trivial state, ratio 1.  The twirled
average sums over all branches and stays close to d^-2.  The corner wall is
classified safe and its all-add branch keeps d^-2.
"""

from topopurity import (GroundStateOracle, LatticeConfig, build_lattice, classify,
                        evolved_topological_purity, make_bridge, make_cut, standard_partition)
from topopurity.topo import modified_composites, static_ratio


def union(s):
    out = s.domains[0]
    for x in s.domains[1:]:
        out = out | x
    return out


cases = [
    (20, {"thickness": 5}, lambda p: make_cut(p), "drop"),
    (12, {}, lambda p: make_bridge(p, "B_left", "B_right"), "add"),
    (16, {}, lambda p: make_bridge(p, "A", "B_left"), "add"),
]
for L, kw, build, branch in cases:
    lat = build_lattice(LatticeConfig(L, 2))
    part = standard_partition(lat, **kw)
    s = build(part)
    ground = GroundStateOracle(lat)
    verdict = classify(s, part)
    single = static_ratio(ground, modified_composites(part, union(s), branch))
    print(f"L={L}: {verdict.describe()}")
    print(f"  all-{branch} branch ratio: {single}")
    rep = evolved_topological_purity(ground, part, s)
    print(f"  twirled ratio: {float(rep.ratio):.9f}")
