"""Shallow random circuits that respect the safe-string conditions.

Draws safe strings of Haar-random domains near the boundary of the annulus,
evolves the four swap operators symbolically and checks that the ratio stays
exactly d^-2 for the ground state and exactly 1 for a product state.  The
pairing check then shows why: every branch quadruple cancels term by term.
"""

from fractions import Fraction

from topopurity import (GroundStateOracle, LatticeConfig, build_lattice, classify,
                        constant_one_oracle, evolved_topological_purity, pairing_check,
                        random_shallow_string, standard_partition)

lat = build_lattice(LatticeConfig(12, 2))
part = standard_partition(lat)
ground = GroundStateOracle(lat)

for i in range(8):
    s = random_shallow_string(lat, part, 1 + i % 4, "mixed", seed=i, focus="boundary")
    rep = evolved_topological_purity(ground, part, s)
    triv = evolved_topological_purity(constant_one_oracle, part, s)
    terms = sum(rep.term_counts.values())
    print(f"string {i}: depth {len(s)}  {classify(s, part).describe():<6}  "
          f"ground {rep.ratio_text():<12} product {triv.ratio}  ({terms} terms)")
    assert rep.ratio == Fraction(1, 4) and triv.ratio == 1

s = random_shallow_string(lat, part, 3, "plaquette", seed=42, focus="boundary")
pair = pairing_check(ground, part, s)
print(f"pairing: {pair.nonzero}/{pair.quadruples} nonzero quadruples, ok={pair.ok}")
