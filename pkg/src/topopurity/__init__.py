"""Topological purity of Z_d quantum doubles under shallow random circuits.

Exact purity engines (stabilizer-group rank and a closed boundary formula), a
symbolic Haar-twirl evolution of swap operators, a safe-string classifier, a
dense state-vector oracle and the batch/CLI layer in :mod:`topopurity.experiments`.
"""

from .circuits import (DomainString, SafetyVerdict, classify, make_bridge, make_cut,
                       order_sensitive_pair, random_shallow_string)
from .errors import (BoundaryUndefinedError, BudgetExceededError, ConfigurationError,
                     DeformationError, LatticeMismatchError, OracleError, TopoPurityError)
from .group_purity import (GroundStateOracle, PurityValue, constant_one_oracle,
                           purity_geometric, purity_group, star_generator_matrix)
from .lattice import Lattice, LatticeConfig, build_lattice
from .oracle import (build_ground_state, build_product_state, mc_string_expectation,
                     reduced_purity)
from .regions import (BoundaryStats, Partition, Region, annulus, boundary_stats, disk,
                      plaquette, rectangle, standard_partition)
from .swap_dynamics import SwapCombo, apply_string, apply_twirl, evaluate, twirl_coefficients
from .topo import (TopoReport, evolved_topological_purity, lemma1_check, pairing_check,
                   topological_purity)

__version__ = "0.1.0"

__all__ = [
    "BoundaryStats",
    "BoundaryUndefinedError",
    "BudgetExceededError",
    "ConfigurationError",
    "DeformationError",
    "DomainString",
    "GroundStateOracle",
    "Lattice",
    "LatticeConfig",
    "LatticeMismatchError",
    "OracleError",
    "Partition",
    "PurityValue",
    "Region",
    "SafetyVerdict",
    "SwapCombo",
    "TopoPurityError",
    "TopoReport",
    "annulus",
    "apply_string",
    "apply_twirl",
    "boundary_stats",
    "build_ground_state",
    "build_lattice",
    "build_product_state",
    "classify",
    "constant_one_oracle",
    "disk",
    "evaluate",
    "evolved_topological_purity",
    "lemma1_check",
    "make_bridge",
    "make_cut",
    "mc_string_expectation",
    "order_sensitive_pair",
    "pairing_check",
    "plaquette",
    "purity_geometric",
    "purity_group",
    "random_shallow_string",
    "rectangle",
    "reduced_purity",
    "standard_partition",
    "star_generator_matrix",
    "topological_purity",
    "twirl_coefficients",
]
