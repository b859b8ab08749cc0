"""Domain strings, their reversal and the safety classifier.

A circuit is an ordered string ``S = [X~1, ..., X~k]`` of twirl domains.  The
swap operators see the reversed string ``S-bar``, so every chain search below
runs in ``S-bar`` order: a chain ``Y1, Y2, ...`` takes strictly increasing
positions in ``S-bar`` and consecutive members are adjacent.  Two domains are
adjacent when a vertex of one lies on a face (or coincides with a vertex) of the
other; this is the adjacency that joins boundary components, so edits of two
non-adjacent domains never merge or split a boundary.

A string is unsafe when, in ``S-bar`` order,

* (II) a single chain starts on one marker of a forbidden pair and ends on the
  other, or
* (I) two chains start on the two markers of a pair and their last domains
  are adjacent (or coincide).

Only active domains (see :func:`active_domains`) take part in chains.

The forbidden pairs are the two boundary components of ``ABC`` (outer, inner),
``(A, C)`` and ``(B_left, B_right)``.  A domain touches a boundary marker when
it is adjacent to one of the marker's crossing stars, and a subregion marker
when it is adjacent to a vertex of the subregion's edges.  Condition II is reported before
condition I because a II witness is also a I witness.
"""

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceededError, ConfigurationError, LatticeMismatchError
from .lattice import Lattice
from .regions import Partition, Region, disk, plaquette

PAIR_NAMES = {
    "boundary": ("outer", "inner"),
    "AC": ("A", "C"),
    "B": ("B_left", "B_right"),
}
_II_TAGS = {"boundary": "II.a", "AC": "II.b(A,C)", "B": "II.b(B_left,B_right)"}
_I_TAGS = {"boundary": "I.i", "AC": "I.ii(A,C)", "B": "I.ii(B_left,B_right)"}
VIOLATION_TAGS = tuple(_II_TAGS.values()) + tuple(_I_TAGS.values())


@dataclass(frozen=True)
class DomainString:
    """Ordered circuit ``[X~1, ..., X~k]``; ``X~1`` acts on the state first."""

    lattice: Lattice
    domains: tuple[Region, ...] = ()
    labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "domains", tuple(self.domains))
        for x in self.domains:
            if not x:
                raise ConfigurationError("domain strings may not contain empty domains")
            if x.lattice != self.lattice:
                raise LatticeMismatchError("domain lives on a different lattice")
        if self.labels and len(self.labels) != len(self.domains):
            raise ConfigurationError("labels must match the domains one to one")
        object.__setattr__(self, "labels", tuple(self.labels))

    def __len__(self):
        return len(self.domains)

    def __iter__(self) -> Iterator[Region]:
        return iter(self.domains)

    def __getitem__(self, i):
        return self.domains[i]

    @property
    def depth(self) -> int:
        return len(self.domains)

    def reverse(self) -> "DomainString":
        return DomainString(self.lattice, self.domains[::-1], self.labels[::-1])

    @property
    def max_chain_length(self) -> int:
        """Longest chain of successively adjacent domains, in string order."""
        best = []
        for j, x in enumerate(self.domains):
            prev = [best[i] for i in range(j) if adjacent(self.domains[i], x)]
            best.append(1 + max(prev, default=0))
        return max(best, default=0)


def reverse(s: DomainString) -> DomainString:
    return s.reverse()


@dataclass(frozen=True)
class SafetyVerdict:
    """Outcome of :func:`classify`.

    ``witness`` holds the offending chains as tuples of positions in ``S-bar``
    (one chain for condition II, two for condition I).
    """

    safe: bool
    violated_condition: str | None = None
    witness: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if self.safe != (self.witness is None):
            raise ValueError("a verdict is safe exactly when it has no witness")

    def describe(self) -> str:
        if self.safe:
            return "SAFE"
        chains = "; ".join("S-bar[" + ",".join(map(str, c)) + "]" for c in self.witness)
        return f"UNSAFE condition {self.violated_condition} witness {chains}"


def marker_vertices(partition: Partition) -> dict[str, frozenset]:
    """Vertex sets whose contact with a domain counts as touching each marker."""
    out = {"outer": partition.outer, "inner": partition.inner}
    for name, region in partition.subregions().items():
        out[name] = region.vertices
    return out


class _Reach:
    """Chains in ``S-bar`` order that start on one marker.

    ``pred[j]`` is ``-1`` when domain ``j`` touches the marker itself, the
    index of its chain predecessor when some earlier chain reaches it, and
    ``None`` otherwise.
    """

    def __init__(self, verts: Sequence[frozenset], adj, marker: frozenset,
                 active: Sequence[bool]):
        self.pred: list[int | None] = []
        for j, vj in enumerate(verts):
            if not active[j]:
                self.pred.append(None)
                continue
            if marker and not vj.isdisjoint(marker):
                self.pred.append(-1)
                continue
            self.pred.append(next((i for i in range(j)
                                   if self.pred[i] is not None and adj[i][j]), None))

    def reached(self, j: int) -> bool:
        return self.pred[j] is not None

    def chain(self, j: int) -> tuple[int, ...]:
        out = [j]
        while self.pred[out[-1]] != -1:
            out.append(self.pred[out[-1]])
        return tuple(reversed(out))


def halo(x: Region) -> frozenset:
    """Vertices of ``x`` together with every vertex sharing a face with one of them."""
    nbrs = x.lattice.vertex_face_neighbors
    out = set(x.vertices)
    for v in x.vertices:
        out |= nbrs[v]
    return frozenset(out)


def adjacent(x: Region, y: Region) -> bool:
    """Face-level adjacency of two domains (see module docstring)."""
    return not halo(x).isdisjoint(y.vertices)


def _touch_matrix(domains: Sequence[Region]):
    verts = [halo(x) for x in domains]
    n = len(domains)
    adj = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            adj[i][j] = adj[j][i] = not verts[i].isdisjoint(domains[j].vertices)
    return verts, adj


def active_domains(bar: Sequence[Region], partition: Partition) -> list[bool]:
    """Which positions of ``S-bar`` can act nontrivially on some trajectory.

    A domain is active when it straddles one of the four composites or shares
    an edge with an earlier active domain.  Every trajectory region differs
    from its starting composite only on edges of earlier active domains, so an
    inactive domain never straddles a trajectory region and acts as identity.
    """
    composites = list(partition.composites().values())
    out, touched = [], Region.empty(partition.lattice)
    for x in bar:
        act = (not x.isdisjoint(touched)) or any(
            not x.issubset(r) and not x.isdisjoint(r) for r in composites)
        out.append(act)
        if act:
            touched = touched | x
    return out


def reach_table(bar: Sequence[Region], partition: Partition) -> dict[str, list[bool]]:
    """For each marker, which positions of ``S-bar`` a chain from that marker reaches."""
    verts, adj = _touch_matrix(bar)
    active = active_domains(bar, partition)
    return {name: [r.reached(j) for j in range(len(bar))]
            for name, m in marker_vertices(partition).items()
            for r in [_Reach(verts, adj, m, active)]}


def classify(s: DomainString, partition: Partition) -> SafetyVerdict:
    """Decide whether ``s`` belongs to the safe set."""
    if partition is None or not isinstance(partition, Partition):
        raise ConfigurationError("classify needs a labeled Partition")
    if s.lattice != partition.lattice:
        raise LatticeMismatchError("string and partition live on different lattices")
    bar = s.reverse().domains
    verts, adj = _touch_matrix(bar)
    markers = marker_vertices(partition)
    active = active_domains(bar, partition)
    reach = {name: _Reach(verts, adj, m, active) for name, m in markers.items()}
    n = len(bar)

    for key, (p, q) in PAIR_NAMES.items():
        for a, b in ((p, q), (q, p)):
            if not markers[b]:
                continue
            for j in range(n):
                if reach[a].reached(j) and not verts[j].isdisjoint(markers[b]):
                    return SafetyVerdict(False, _II_TAGS[key], (reach[a].chain(j),))

    for key, (p, q) in PAIR_NAMES.items():
        for j in range(n):
            if not reach[p].reached(j):
                continue
            for k in range(n):
                if reach[q].reached(k) and (j == k or adj[j][k]):
                    return SafetyVerdict(False, _I_TAGS[key],
                                         (reach[p].chain(j), reach[q].chain(k)))
    return SafetyVerdict(True)


# -- generators ------------------------------------------------------------

SHAPES = ("plaquette", "disk", "mixed")


def _domain_at(lattice: Lattice, shape: str, r: int, c: int) -> tuple[Region, str]:
    if shape == "plaquette":
        return plaquette(lattice, r, c), f"plaquette {r} {c}"
    return disk(lattice, r, c, 1), f"disk {r} {c} 1"


def candidate_positions(lattice: Lattice, partition: Partition | None = None,
                        focus: str = "all") -> list[tuple[int, int]]:
    """Grid positions to sample from.

    ``focus='boundary'`` keeps positions within distance 2 of a crossing star of
    ``ABC`` or of a cut between subregions, so most domains act nontrivially.
    """
    L = lattice.L
    every = [(r, c) for r in range(L) for c in range(L)]
    if focus == "all":
        return every
    if focus != "boundary" or partition is None:
        raise ConfigurationError("focus must be 'all', or 'boundary' with a partition")
    hot = set(partition.outer | partition.inner)
    subs = list(partition.subregions().values())
    for i, x in enumerate(subs):
        for y in subs[i + 1:]:
            hot |= x.vertices & y.vertices
    coords = [lattice.vertex_coords(v) for v in hot]

    def near(r, c):
        return any(min(abs(r - a), L - abs(r - a)) + min(abs(c - b), L - abs(c - b)) <= 2
                   for a, b in coords)

    return [rc for rc in every if near(*rc)]


def random_string(lattice: Lattice, depth: int, shape: str, rng: np.random.Generator,
                  positions: Sequence[tuple[int, int]]) -> DomainString:
    if shape not in SHAPES:
        raise ConfigurationError(f"unknown domain shape {shape!r}; expected one of {SHAPES}")
    doms, labels = [], []
    for _ in range(depth):
        r, c = positions[rng.integers(len(positions))]
        kind = shape if shape != "mixed" else ("plaquette", "disk")[rng.integers(2)]
        x, label = _domain_at(lattice, kind, r, c)
        doms.append(x)
        labels.append(label)
    return DomainString(lattice, doms, labels)


def random_shallow_string(lattice: Lattice, partition: Partition, depth: int,
                          shape: str = "plaquette", seed=None, *,
                          focus: str = "all", max_rejections: int = 10_000) -> DomainString:
    """Sample a safe string of ``depth`` domains by rejecting whole unsafe draws."""
    return sample_safe_string(lattice, partition, depth, shape, seed, focus=focus,
                              max_rejections=max_rejections)[0]


def sample_safe_string(lattice: Lattice, partition: Partition, depth: int,
                       shape: str = "plaquette", seed=None, *,
                       focus: str = "all",
                       max_rejections: int = 10_000) -> tuple[DomainString, int]:
    """Like :func:`random_shallow_string`, also returning how many draws were rejected."""
    if depth < 0:
        raise ConfigurationError("depth budget must be >= 0")
    rng = np.random.default_rng(seed)
    positions = candidate_positions(lattice, partition, focus)
    rejected = 0
    while True:
        s = random_string(lattice, depth, shape, rng, positions)
        if classify(s, partition).safe:
            return s, rejected
        rejected += 1
        if rejected > max_rejections:
            raise BudgetExceededError(
                f"no safe string found after {max_rejections} rejections", step=rejected)


# -- adversarial constructions ---------------------------------------------

def _from_bar(lattice: Lattice, sites: Sequence[tuple[int, int]],
              shape: str = "plaquette") -> DomainString:
    """String whose reversal applies the domains at ``sites`` in the given order."""
    pairs = [_domain_at(lattice, shape, r, c) for r, c in sites]
    doms = [x for x, _ in pairs]
    labels = [label for _, label in pairs]
    return DomainString(lattice, doms[::-1], labels[::-1])


def _ring_geometry(partition: Partition):
    if partition.kind != "annulus":
        raise ConfigurationError("bridge and cut constructions need an annular partition")
    lat = partition.lattice
    rows, cols = zip(*(lat.vertex_coords(v) for v in partition.inner))
    # Inner crossing stars are the hole vertices touching the ring.
    return min(rows), max(rows), min(cols), max(cols)


def make_bridge(partition: Partition, src: str = "A", dst: str = "C") -> DomainString:
    """Chain of domains through the hole from subregion ``src`` to ``dst``.

    ``A -> C`` is a column of plaquettes whose end plaquettes straddle the inner
    boundary next to ``A`` and ``C``; ``B_left -> B_right`` is the matching row.  ``A -> B_left`` is an L-shaped wall of
    radius-1 disks that fences off two hole vertices in the corner, so the
    all-join branch splits the hole in two.
    """
    lat = partition.lattice
    top, bottom, left, right = _ring_geometry(partition)
    if (src, dst) == ("A", "C"):
        col = (left + right) // 2
        return _from_bar(lat, [(r, col) for r in range(top - 1, bottom + 1)])
    if (src, dst) == ("B_left", "B_right"):
        row = (top + bottom) // 2
        return _from_bar(lat, [(row, c) for c in range(left - 1, right + 1)])
    if (src, dst) == ("A", "B_left"):
        if right - left < 6 or bottom - top < 6:
            raise ConfigurationError("hole too small for a corner wall away from B_right and C")
        wall = [(top, left + 2), (top + 1, left + 2), (top + 1, left + 1), (top + 1, left)]
        return _from_bar(lat, wall, shape="disk")
    raise ConfigurationError(f"no bridge construction for {src} -> {dst}")


def make_cut(partition: Partition) -> DomainString:
    """Two plaquette chains through ``A``, one from each boundary, meeting mid-ring.

    The column runs from the plaquette straddling the outer boundary to the one
    straddling the inner boundary.  In ``S-bar`` order the inner chain (two
    plaquettes, growing upward) comes first and the outer chain (growing
    downward) second, so the two chains end side by side.  On rings at least
    five vertices thick neither chain comes near the opposite boundary and the
    verdict is condition I.i; thinner rings give II.a.
    """
    lat = partition.lattice
    top, _, left, right = _ring_geometry(partition)
    col = (left + right) // 2
    above = [r for r, c in (lat.vertex_coords(v) for v in partition.outer)
             if c == col and r < top]
    if not above:
        raise ConfigurationError("no outer boundary above the hole in the cut column")
    first, last = max(above), top - 1
    span = last - first
    m = span - 2 if span - 2 >= 3 else span // 2
    outer_chain = [(first + i, col) for i in range(m + 1)]
    inner_chain = [(r, col) for r in range(last, first + m, -1)]
    return _from_bar(lat, inner_chain + outer_chain)


def order_sensitive_pair(lattice: Lattice):
    """Region and two orderings of the same two domains that evolve differently.

    ``X1`` straddles ``region``; ``X2`` sits inside ``region`` but straddles
    ``region - X1``.  With ``S-bar = [X1, X2]`` the swap on ``region`` becomes
    three terms; with ``S-bar = [X2, X1]`` it becomes two.  On the ``L = 2``
    ground state the two expectations are 0.18 and 0.3.
    Returns ``(region, s_a, s_b)`` as circuits (reverse of the ``S-bar`` orders).
    """
    e = lattice.edge_id
    region = Region.from_edges(lattice, [e(0, 1, "v"), e(1, 0, "h"), e(1, 0, "v"),
                                         e(1, 1, "h"), e(1, 1, "v")])
    x1 = Region.from_edges(lattice, [e(0, 1, "h"), e(1, 0, "v")])
    x2 = Region.from_edges(lattice, [e(1, 0, "v"), e(1, 1, "v")])
    s_a = DomainString(lattice, (x2, x1))
    s_b = DomainString(lattice, (x1, x2))
    return region, s_a, s_b
