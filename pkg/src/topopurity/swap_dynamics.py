"""Heisenberg-picture dynamics of swap operators under Haar twirls.

A :class:`SwapCombo` is a finite sum ``sum_a m_a T_{R_a}`` of swap operators with
exact rational weights.  Averaging ``U_X (x) U_X`` over the Haar measure of the
qudits in a domain ``X`` maps a single swap to

    R_X(T_R) = n_drop * T_{R - X} + n_add * T_{R | X},

    n_drop = (d_X^2 - d_I^2) / d_I / (d_X^2 - 1),
    n_add  = d_X (d_I^2 - 1) / d_I / (d_X^2 - 1),

with ``d_X = d^|X|`` and ``d_I = d^|R & X|``.  The coefficients degenerate to
``(1, 0)`` when ``X`` misses ``R`` and to ``(0, 1)`` when ``X`` lies inside it, so
the split is applied unconditionally and zero branches are dropped.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import BudgetExceededError, LatticeMismatchError, OracleError
from .lattice import Lattice
from .regions import Region, boundary_band

DEFAULT_TERM_CAP = 2 ** 18


@dataclass(frozen=True)
class TwirlCoefficients:
    n_drop: Fraction
    n_add: Fraction
    d_x: int
    d_overlap: int


def twirl_coefficients(d: int, size_x: int, size_overlap: int) -> TwirlCoefficients:
    """Weights of ``T_{R - X}`` and ``T_{R | X}`` for ``|X| = size_x``, ``|R & X| = size_overlap``."""
    if size_x < 1:
        raise ValueError("twirl domain must be nonempty")
    if not 0 <= size_overlap <= size_x:
        raise ValueError("overlap must lie between 0 and |X|")
    dx, di = d ** size_x, d ** size_overlap
    denom = di * (dx * dx - 1)
    return TwirlCoefficients(
        n_drop=Fraction(dx * dx - di * di, denom),
        n_add=Fraction(dx * (di * di - 1), denom),
        d_x=dx,
        d_overlap=di,
    )


def boundary_hit(x: Region, region: Region) -> int:
    """Gate ``f(X, R)``: 1 when the twirl on ``X`` can change ``T_R``.

    ``X`` counts as hitting the boundary when it straddles the region or meets
    the edges attached to the region's crossing stars.  Both readings give the
    same dynamics because the coefficients degenerate off the straddling case.
    """
    if x.lattice != region.lattice:
        raise LatticeMismatchError("domain and region live on different lattices")
    if not x:
        return 0
    if not x.issubset(region) and not x.isdisjoint(region):
        return 1
    if not region or len(region) == region.lattice.n_edges:
        return 0
    return int(not x.isdisjoint(boundary_band(region)))


class SwapCombo:
    """Weighted sum of swap operators, keyed by region; zero weights are never stored."""

    def __init__(self, lattice: Lattice, terms: dict[Region, Fraction] | None = None):
        self.lattice = lattice
        self.terms: dict[Region, Fraction] = {}
        for region, coeff in (terms or {}).items():
            self.add(region, coeff)

    @classmethod
    def single(cls, region: Region) -> "SwapCombo":
        return cls(region.lattice, {region: Fraction(1)})

    def add(self, region: Region, coeff) -> None:
        if region.lattice != self.lattice:
            raise LatticeMismatchError("term region lives on a different lattice")
        coeff = Fraction(coeff)
        if not coeff:
            return
        total = self.terms.get(region, 0) + coeff
        if total:
            self.terms[region] = total
        else:
            del self.terms[region]

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __eq__(self, other):
        return isinstance(other, SwapCombo) and self.terms == other.terms

    def __repr__(self):
        return f"SwapCombo({len(self)} terms, weight {self.total_weight()})"

    def total_weight(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def copy(self) -> "SwapCombo":
        out = SwapCombo(self.lattice)
        out.terms = dict(self.terms)
        return out


def _split(region: Region, x: Region):
    c = twirl_coefficients(region.lattice.d, len(x), len(region & x))
    if c.n_drop:
        yield region - x, c.n_drop
    if c.n_add:
        yield region | x, c.n_add


def apply_twirl(combo: SwapCombo, x: Region) -> SwapCombo:
    """Image of ``combo`` under the Haar twirl on ``x``."""
    if not x:
        raise ValueError("twirl domain must be nonempty")
    out = SwapCombo(combo.lattice)
    for region, m in combo.terms.items():
        for new, w in _split(region, x):
            out.add(new, m * w)
    return out


def apply_twirl_gated(combo: SwapCombo, x: Region) -> SwapCombo:
    """Same map written with the explicit gate ``(1 - f) T_R + f [split]``."""
    out = SwapCombo(combo.lattice)
    for region, m in combo.terms.items():
        if boundary_hit(x, region):
            for new, w in _split(region, x):
                out.add(new, m * w)
        else:
            out.add(region, m)
    return out


def apply_string(combo: SwapCombo, string: Iterable[Region], *,
                 term_cap: int = DEFAULT_TERM_CAP) -> SwapCombo:
    """Heisenberg image ``R_{S-bar}(combo)`` for the circuit ``string``.

    The circuit applies its domains first-to-last to the state, so the swap
    operators see them last-to-first.
    """
    domains = list(getattr(string, "domains", string))
    for step, x in enumerate(reversed(domains)):
        combo = apply_twirl(combo, x)
        if len(combo) > term_cap:
            raise BudgetExceededError(
                f"combo grew to {len(combo)} terms at step {step} (cap {term_cap})", step=step)
    return combo


def evaluate(combo: SwapCombo, oracle: Callable[[Region], Fraction]) -> Fraction:
    """``sum_a m_a * oracle(R_a)`` in exact arithmetic."""
    total = Fraction(0)
    for region, m in combo.terms.items():
        try:
            value = oracle(region)
        except OracleError:
            raise
        except Exception as exc:
            raise OracleError(f"purity oracle failed: {exc}", region=region) from exc
        total += m * Fraction(value)
    return total


@dataclass(frozen=True)
class Trajectory:
    """One unmerged branch of a twirl expansion.

    ``path`` records, per domain in the order the swap sees them, ``'keep'`` when
    the twirl acts trivially, else ``'drop'`` or ``'add'``.
    """

    path: tuple[str, ...]
    region: Region
    coeff: Fraction


def expand_trajectories(region: Region, string: Iterable[Region], *,
                        term_cap: int = DEFAULT_TERM_CAP) -> list[Trajectory]:
    """All branches of ``apply_string(SwapCombo.single(region), string)`` without merging."""
    domains = list(getattr(string, "domains", string))
    paths = [Trajectory((), region, Fraction(1))]
    for step, x in enumerate(reversed(domains)):
        nxt = []
        for t in paths:
            c = twirl_coefficients(region.lattice.d, len(x), len(t.region & x))
            if not c.n_drop or not c.n_add:
                nxt.append(Trajectory(t.path + ("keep",), t.region, t.coeff))
                continue
            nxt.append(Trajectory(t.path + ("drop",), t.region - x, t.coeff * c.n_drop))
            nxt.append(Trajectory(t.path + ("add",), t.region | x, t.coeff * c.n_add))
        paths = nxt
        if len(paths) > term_cap:
            raise BudgetExceededError(
                f"trajectory count {len(paths)} exceeds cap at step {step}", step=step)
    return paths
