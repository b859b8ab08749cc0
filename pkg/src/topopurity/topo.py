"""Topological purity ``P_AB P_BC / (P_B P_ABC)`` for static and twirled states.

For a ``Z_d`` quantum double the ratio is ``d^-2 = 2^(-2 gamma)`` with
``gamma = log2 d``; for a topologically trivial pure state it is 1.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .circuits import DomainString, PAIR_NAMES, reach_table
from .errors import DeformationError, LatticeMismatchError
from .regions import Partition, Region, boundary_stats
from .swap_dynamics import DEFAULT_TERM_CAP, SwapCombo, apply_string, evaluate, twirl_coefficients

COMPOSITES = ("AB", "BC", "B", "ABC")


def format_ratio(value: Fraction, d: int) -> str:
    """``"d^-k"`` when ``value`` is an integer power of ``d``, else ``"p/q"``."""
    value = Fraction(value)
    if value == 1:
        return f"{d}^0"
    for num, den, sign in ((value.numerator, value.denominator, "-"),
                           (value.denominator, value.numerator, "")):
        if num == 1:
            k, n = 0, den
            while n % d == 0:
                n //= d
                k += 1
            if n == 1:
                return f"{d}^{sign}{k}"
    return f"{value.numerator}/{value.denominator}"


def parse_ratio(text: str) -> Fraction:
    """Inverse of :func:`format_ratio`."""
    text = text.strip()
    if "^" in text:
        base, exp = text.split("^")
        return Fraction(int(base)) ** int(exp)
    return Fraction(text)


def classify_ratio(ratio: Fraction, d: int) -> str:
    if ratio == Fraction(1, d * d):
        return "topological"
    if ratio == 1:
        return "trivial"
    return "other"


@dataclass
class TopoReport:
    """Four purities and their ratio.

    ``entries`` maps each composite to an exact ``Fraction`` (exact path) or a
    ``(mean, stderr)`` pair (Monte-Carlo path).  ``term_counts`` records the
    combo sizes of an evolved computation.
    """

    d: int
    entries: dict
    ratio: Fraction | float
    classification: str
    ratio_err: float | None = None
    term_counts: dict = field(default_factory=dict)

    @property
    def gamma_expected(self) -> float:
        return math.log2(self.d)

    @property
    def exact(self) -> bool:
        return isinstance(self.ratio, Fraction)

    @property
    def renyi2_topological(self) -> float:
        """``-log2`` of the ratio (twice the topological 2-Renyi entropy at the fixed point)."""
        return -math.log2(float(self.ratio))

    def recomputed_ratio(self):
        vals = {k: (v if isinstance(v, Fraction) else v[0]) for k, v in self.entries.items()}
        return vals["AB"] * vals["BC"] / (vals["B"] * vals["ABC"])

    def ratio_text(self) -> str:
        if self.exact:
            return f"{format_ratio(self.ratio, self.d)} ({float(self.ratio):.6g})"
        return f"{self.ratio:.6g} +- {self.ratio_err:.2g}"

    def to_text(self) -> str:
        lines = []
        for k in COMPOSITES:
            v = self.entries[k]
            if isinstance(v, Fraction):
                lines.append(f"P_{k} = {format_ratio(v, self.d)}")
            else:
                lines.append(f"P_{k} = {v[0]:.6g} +- {v[1]:.2g}")
        lines.append(f"ratio = {self.ratio_text()}")
        lines.append(f"classification = {self.classification}")
        return "\n".join(lines)

    def csv_fields(self) -> dict:
        row = {"ratio": format_ratio(self.ratio, self.d) if self.exact else "",
               "ratio_float": f"{float(self.ratio):.12g}",
               "classification": self.classification}
        for k in COMPOSITES:
            v = self.entries[k]
            row[f"P_{k}"] = format_ratio(v, self.d) if isinstance(v, Fraction) else f"{v[0]:.12g}"
            row[f"terms_{k}"] = self.term_counts.get(k, "")
        return row


def _report(d, entries, term_counts=None) -> TopoReport:
    ratio = entries["AB"] * entries["BC"] / (entries["B"] * entries["ABC"])
    return TopoReport(d, entries, ratio, classify_ratio(ratio, d), None, term_counts or {})


def topological_purity(oracle: Callable[[Region], Fraction], partition: Partition) -> TopoReport:
    """Static ratio from a purity oracle."""
    entries = {k: Fraction(oracle(r)) for k, r in partition.composites().items()}
    return _report(partition.lattice.d, entries)


def evolved_topological_purity(oracle: Callable[[Region], Fraction], partition: Partition,
                               string, *, term_cap: int = DEFAULT_TERM_CAP) -> TopoReport:
    """Ratio of evolved swap expectations after the circuit ``string``."""
    entries, counts = {}, {}
    for k, r in partition.composites().items():
        combo = apply_string(SwapCombo.single(r), string, term_cap=term_cap)
        counts[k] = len(combo)
        entries[k] = evaluate(combo, oracle)
    return _report(partition.lattice.d, entries, counts)


# -- boundary deformation ----------------------------------------------------

def deformed_composites(partition: Partition, x: Region) -> dict[str, Region]:
    """Composites after gluing a boundary bump ``x``.

    ``x`` joins every composite containing a subregion it shares a vertex
    with (``ABC`` always).  Raises :class:`DeformationError` when ``x`` meets
    both boundary components, neither of them, or both ``A`` and ``C``.
    """
    if x.lattice != partition.lattice:
        raise LatticeMismatchError("deformation and partition live on different lattices")
    comps = partition.composites()
    if not x:
        return comps
    verts = x.vertices
    hits = [bool(verts & partition.outer), bool(verts & partition.inner)]
    if all(hits):
        raise DeformationError("deformation touches both boundary components of ABC")
    if not any(hits):
        raise DeformationError("deformation does not touch the boundary of ABC")
    subs = {k for k, r in partition.subregions().items() if r and not verts.isdisjoint(r.vertices)}
    if {"A", "C"} <= subs:
        raise DeformationError("deformation touches both A and C")
    if {"B_left", "B_right"} <= subs:
        raise DeformationError("deformation touches both B_left and B_right")
    return modified_composites(partition, x, "add")


def modified_composites(partition: Partition, x: Region, branch: str) -> dict[str, Region]:
    """Composites on a single branch of a twirl on ``x``, with no validity checks.

    ``branch='drop'`` removes ``x`` from every composite.  ``branch='add'``
    glues ``x`` onto each composite holding a subregion it shares a vertex with
    (``ABC`` always), the same rule as :func:`deformed_composites`.
    """
    comps = partition.composites()
    if branch == "drop":
        return {k: r - x for k, r in comps.items()}
    if branch != "add":
        raise ValueError("branch must be 'add' or 'drop'")
    verts = x.vertices
    subs = {k for k, r in partition.subregions().items() if r and not verts.isdisjoint(r.vertices)}
    members = {"AB": {"A", "B_left", "B_right"}, "BC": {"B_left", "B_right", "C"},
               "B": {"B_left", "B_right"}}
    return {k: r | x if k == "ABC" or members[k] & subs else r for k, r in comps.items()}


def static_ratio(oracle, composites: dict[str, Region]) -> Fraction:
    v = {k: Fraction(oracle(r)) for k, r in composites.items()}
    return v["AB"] * v["BC"] / (v["B"] * v["ABC"])


def lemma1_check(partition: Partition, x: Region, oracle=None) -> bool:
    """True when gluing ``x`` onto the boundary leaves the ratio unchanged."""
    from .group_purity import GroundStateOracle

    oracle = GroundStateOracle(partition.lattice) if oracle is None else oracle
    before = topological_purity(oracle, partition).ratio
    return static_ratio(oracle, deformed_composites(partition, x)) == before


# -- trajectory pairing -----------------------------------------------------

@dataclass
class PairingReport:
    ok: bool
    quadruples: int
    nonzero: int
    failures: list = field(default_factory=list)


def domain_sides(bar, partition: Partition) -> list[str]:
    """``'A'`` or ``'C'`` for each position of ``S-bar``: which side's pairing rule applies.

    A domain reached by a chain from ``C`` (or lying in ``C`` when inert) uses
    the C-side rule; everything else uses the A-side rule.
    """
    reach = reach_table(bar, partition)
    out = []
    for j, x in enumerate(bar):
        if reach["A"][j] and reach["C"][j]:
            raise DeformationError(f"domain {j} of S-bar is reached from both A and C")
        c_side = reach["C"][j] or (not reach["A"][j] and not x.isdisjoint(partition.C))
        out.append("C" if c_side else "A")
    return out


def _branches(region: Region, bar, choices):
    cur, coeff = region, Fraction(1)
    for x, take in zip(bar, choices):
        c = twirl_coefficients(region.lattice.d, len(x), len(cur & x))
        if take:
            coeff *= c.n_add
            cur = cur | x
        else:
            coeff *= c.n_drop
            cur = cur - x
    return cur, coeff


def _boundary_size(region: Region) -> int:
    if not region or len(region) == region.lattice.n_edges:
        return 0
    return boundary_stats(region).boundary_size


def pairing_check(oracle, partition: Partition, string: DomainString) -> PairingReport:
    """Verify the term-by-term cancellation behind the constant ratio.

    Every branch of the four expansions is labeled by its drop/add choice at
    each domain of ``S-bar``.  A pair of branches ``(eta, zeta)`` of ``B`` and
    ``ABC`` maps to branches ``(alpha, beta)`` of ``AB`` and ``BC``: A-side
    domains copy ``AB``'s choice from ``ABC`` and ``BC``'s from ``B``, C-side
    domains the other way round.  For every quadruple the check asserts
    ``m_alpha m_beta = m_eta m_zeta`` and, when the weight is nonzero, equal
    boundary sums and ``P_alpha P_beta / (P_eta P_zeta)`` equal to the static
    ratio.
    """
    bar = list(string.reverse().domains)
    sides = domain_sides(bar, partition)
    comps = partition.composites()
    target = topological_purity(oracle, partition).ratio
    k = len(bar)
    cache = {name: {} for name in COMPOSITES}

    def branch(name, choices):
        hit = cache[name].get(choices)
        if hit is None:
            hit = cache[name][choices] = _branches(comps[name], bar, choices)
        return hit

    failures, nonzero, total = [], 0, 0
    for eta in itertools.product((0, 1), repeat=k):
        for zeta in itertools.product((0, 1), repeat=k):
            alpha = tuple(z if s == "A" else e for s, e, z in zip(sides, eta, zeta))
            beta = tuple(e if s == "A" else z for s, e, z in zip(sides, eta, zeta))
            (ra, ma), (rb, mb) = branch("AB", alpha), branch("BC", beta)
            (re, me), (rz, mz) = branch("B", eta), branch("ABC", zeta)
            total += 1
            if ma * mb != me * mz:
                failures.append(("coefficient", eta, zeta))
                continue
            if not me * mz:
                continue
            nonzero += 1
            if _boundary_size(ra) + _boundary_size(rb) != _boundary_size(re) + _boundary_size(rz):
                failures.append(("boundary", eta, zeta))
            elif Fraction(oracle(ra)) * oracle(rb) != target * oracle(re) * oracle(rz):
                failures.append(("purity", eta, zeta))
    return PairingReport(not failures, total, nonzero, failures)


__all__ = [
    "COMPOSITES", "PAIR_NAMES", "PairingReport", "TopoReport", "classify_ratio",
    "deformed_composites", "domain_sides", "evolved_topological_purity", "format_ratio",
    "lemma1_check", "modified_composites", "pairing_check", "parse_ratio",
    "static_ratio", "topological_purity",
]
