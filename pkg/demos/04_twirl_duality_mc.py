"""Symbolic twirl versus Monte-Carlo Haar sampling on a 2 x 2 torus.

The swap on a region evolves under a Haar-random unitary on a domain into a
two-term combination (drop or add the domain).  This script samples the
random circuit directly on the 8-qubit ground state and compares the estimate
with the exact symbolic value.  The same two domains applied in the two
possible orders give different answers.
"""

from topopurity import (GroundStateOracle, LatticeConfig, SwapCombo, apply_string,
                        build_ground_state, build_lattice, evaluate, mc_string_expectation,
                        reduced_purity)
from topopurity.circuits import order_sensitive_pair

lat = build_lattice(LatticeConfig(2, 2))
state = build_ground_state(lat)
oracle = GroundStateOracle(lat)
region, s_a, s_b = order_sensitive_pair(lat)
print(f"static purity of the region: {reduced_purity(state, region):.4f}")

for name, s in (("order a", s_a), ("order b", s_b)):
    combo = apply_string(SwapCombo.single(region), s)
    exact = float(evaluate(combo, oracle))
    mean, err = mc_string_expectation(state, region, s, 20_000, seed=5)
    print(f"{name}: {len(combo)} terms  symbolic {exact:.4f}  MC {mean:.4f} +- {err:.4f}")
