"""Edge regions, their boundary statistics, and the standard four-region partitions.

Boundary convention
-------------------
The boundary of a region is read off the stars.  A star is on the boundary
(a *crossing star*) when it owns edges both inside and outside the region.  Each
crossing star contributes as many boundary bonds as it has legs inside the
region, so

* ``boundary_size`` is the total number of such bonds,
* ``n2`` / ``n3`` count crossing stars with exactly two / three legs inside,

and ``boundary_size - n2 - 2 * n3`` is the number of crossing stars.  A block of
vertices together with all edges touching it (see :func:`vertex_block_region`)
has every crossing star attached by a single bond, so convex rectangles have
``n2 = n3 = 0``.  Boundary components are connected pieces of the crossing-star
set, two stars being adjacent when they share a plaquette.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BoundaryUndefinedError, ConfigurationError, LatticeMismatchError
from .lattice import Lattice, crossing_stars, star_legs, vertex_support


class Region:
    """A set of edges of a fixed lattice, stored as an integer bitmask.

    Regions are immutable and hashable; equal edge sets compare equal.  The
    operators ``|``, ``&``, ``-`` and ``~`` implement union, intersection,
    difference and complement.
    """

    def __init__(self, lattice: Lattice, mask: int = 0):
        if mask < 0 or mask >> lattice.n_edges:
            raise ValueError("region mask has bits outside the lattice")
        self.lattice = lattice
        self.mask = mask

    @classmethod
    def from_edges(cls, lattice: Lattice, edges) -> "Region":
        mask = 0
        for e in edges:
            e = int(e)
            if not 0 <= e < lattice.n_edges:
                raise IndexError(f"edge id {e} out of range")
            mask |= 1 << e
        return cls(lattice, mask)

    @classmethod
    def from_triples(cls, lattice: Lattice, triples) -> "Region":
        return cls.from_edges(lattice, (lattice.edge_id(r, c, o) for r, c, o in triples))

    @classmethod
    def from_bool_mask(cls, lattice: Lattice, mask) -> "Region":
        return cls.from_edges(lattice, np.flatnonzero(mask))

    @classmethod
    def empty(cls, lattice: Lattice) -> "Region":
        return cls(lattice, 0)

    @classmethod
    def full(cls, lattice: Lattice) -> "Region":
        return cls(lattice, (1 << lattice.n_edges) - 1)

    # -- set protocol ------------------------------------------------------

    def _same(self, other):
        if not isinstance(other, Region):
            return NotImplemented
        if other.lattice != self.lattice:
            raise LatticeMismatchError("regions live on different lattices")
        return True

    def __or__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        return Region(self.lattice, self.mask | other.mask)

    def __and__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        return Region(self.lattice, self.mask & other.mask)

    def __sub__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        return Region(self.lattice, self.mask & ~other.mask)

    def __invert__(self):
        return Region(self.lattice, ((1 << self.lattice.n_edges) - 1) & ~self.mask)

    def complement(self) -> "Region":
        return ~self

    def __len__(self):
        return self.mask.bit_count()

    def __bool__(self):
        return self.mask != 0

    def __contains__(self, e):
        return bool(self.mask >> int(e) & 1)

    def __iter__(self):
        return iter(self.edges)

    def __eq__(self, other):
        return isinstance(other, Region) and other.lattice == self.lattice and other.mask == self.mask

    def __hash__(self):
        return hash((self.lattice.config, self.mask))

    def __lt__(self, other):
        return self.mask < other.mask

    def __repr__(self):
        return f"Region({len(self)} edges on L={self.lattice.L})"

    def issubset(self, other: "Region") -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "Region") -> bool:
        self._same(other)
        return self.mask & other.mask == 0

    @cached_property
    def edges(self) -> tuple[int, ...]:
        m, out = self.mask, []
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return tuple(out)

    @cached_property
    def bool_mask(self) -> np.ndarray:
        out = np.zeros(self.lattice.n_edges, dtype=bool)
        out[list(self.edges)] = True
        out.setflags(write=False)
        return out

    @cached_property
    def vertices(self) -> frozenset:
        """Vertices touched by at least one edge of the region."""
        return vertex_support(self.lattice, self)

    def triples(self) -> list[tuple[int, int, str]]:
        """Sorted ``(row, col, orientation)`` triples, the serialization order."""
        return sorted(self.lattice.edge_coords(e) for e in self.edges)


def region_union(a: Region, b: Region) -> Region:
    return a | b


def region_diff(a: Region, b: Region) -> Region:
    return a - b


def region_complement(a: Region) -> Region:
    return ~a


def touches(x: Region, y: Region) -> bool:
    """True when the two edge sets share an edge or an endpoint vertex."""
    return not x.vertices.isdisjoint(y.vertices)


# -- constructors -----------------------------------------------------------

def vertex_block_region(lattice: Lattice, vertices) -> Region:
    """All edges with at least one endpoint in ``vertices``."""
    vs = np.fromiter((int(v) for v in vertices), dtype=np.int64)
    if vs.size == 0:
        return Region.empty(lattice)
    return Region.from_edges(lattice, np.unique(lattice.star_edges[vs]))


def block_vertices(lattice: Lattice, r0: int, c0: int, height: int, width: int) -> frozenset:
    """Vertex ids of the ``height x width`` block with corner ``(r0, c0)``."""
    return frozenset(lattice.vertex_id(r0 + i, c0 + j)
                     for i in range(height) for j in range(width))


def rectangle(lattice: Lattice, r0: int, c0: int, height: int, width: int) -> Region:
    """Rectangle of ``height x width`` vertices together with every edge touching it."""
    if not (1 <= height <= lattice.L - 2 and 1 <= width <= lattice.L - 2):
        raise ConfigurationError("rectangle must leave at least two free rows and columns")
    return vertex_block_region(lattice, block_vertices(lattice, r0, c0, height, width))


def annulus(lattice: Lattice, r0: int, c0: int, outer: int, thickness: int) -> Region:
    """Square ring of vertices (side ``outer``, ring width ``thickness``) with its edges."""
    hole = outer - 2 * thickness
    if thickness < 1 or hole < 2:
        raise ConfigurationError("annulus needs thickness >= 1 and a hole of at least 2x2 vertices")
    if outer > lattice.L - 2:
        raise ConfigurationError("annulus does not fit inside the torus")
    ring = (block_vertices(lattice, r0, c0, outer, outer)
            - block_vertices(lattice, r0 + thickness, c0 + thickness, hole, hole))
    return vertex_block_region(lattice, ring)


def plaquette(lattice: Lattice, r: int, c: int) -> Region:
    """The four edges around face ``(r, c)``."""
    return Region.from_edges(lattice, lattice.face(lattice.face_id(r, c)))


def disk(lattice: Lattice, r: int, c: int, radius: int) -> Region:
    """Edges with both endpoints within graph distance ``radius`` of vertex ``(r, c)``.

    ``radius = 1`` gives the four edges of the star at ``(r, c)``.
    """
    if radius < 1:
        raise ConfigurationError("disk radius must be >= 1")
    if 2 * radius + 1 > lattice.L:
        raise ConfigurationError("disk wraps around the torus")
    ball = {lattice.vertex_id(r + i, c + j)
            for i in range(-radius, radius + 1)
            for j in range(-radius, radius + 1)
            if abs(i) + abs(j) <= radius}
    ends = lattice.endpoints
    inside = np.isin(ends[:, 0], list(ball)) & np.isin(ends[:, 1], list(ball))
    return Region.from_bool_mask(lattice, inside)


# -- boundary statistics ----------------------------------------------------

@dataclass(frozen=True)
class BoundaryStats:
    """Boundary statistics of a proper, nonempty region."""

    boundary_size: int
    n2: int
    n3: int
    n_components: int
    components: tuple[frozenset, ...] = field(repr=False)

    @property
    def n_crossing(self) -> int:
        return self.boundary_size - self.n2 - 2 * self.n3

    @property
    def geometric_correction(self) -> int:
        """``n2 + 2 n3``; multiply by ``log2 d`` for the geometric term."""
        return self.n2 + 2 * self.n3


def connected_components(nodes, neighbors) -> list[frozenset]:
    """Components of ``nodes`` under the adjacency function ``neighbors``.

    Components come back sorted by their smallest member.
    """
    remaining = set(nodes)
    comps = []
    for start in sorted(remaining):
        if start not in remaining:
            continue
        stack, comp = [start], {start}
        remaining.discard(start)
        while stack:
            u = stack.pop()
            for w in neighbors(u):
                if w in remaining:
                    remaining.discard(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(frozenset(comp))
    return comps


def boundary_components(region: Region) -> list[frozenset]:
    """Crossing stars of ``region`` split into plaquette-connected components."""
    lat = region.lattice
    cross = crossing_stars(lat, region)
    return connected_components(cross, lambda v: lat.vertex_face_neighbors[v])


def boundary_stats(region: Region) -> BoundaryStats:
    """Boundary size, ``n2``, ``n3`` and labeled components of ``region``."""
    lat = region.lattice
    if not region or len(region) == lat.n_edges:
        raise BoundaryUndefinedError("boundary is undefined for the empty or full region")
    legs = star_legs(lat, region)
    on_boundary = (legs > 0) & (legs < 4)
    comps = boundary_components(region)
    return BoundaryStats(
        boundary_size=int(legs[on_boundary].sum()),
        n2=int(np.count_nonzero(legs == 2)),
        n3=int(np.count_nonzero(legs == 3)),
        n_components=len(comps),
        components=tuple(comps),
    )


def boundary_band(region: Region, component=None) -> Region:
    """All edges incident to the crossing stars of ``region`` (or of one component)."""
    lat = region.lattice
    stars = crossing_stars(lat, region) if component is None else component
    if not stars:
        return Region.empty(lat)
    return Region.from_edges(lat, np.unique(lat.star_edges[sorted(stars)]))


def edge_graph_components(region: Region) -> int:
    """Number of connected components of the graph formed by the region's edges."""
    lat = region.lattice
    parent = list(range(lat.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in region.edges:
        a, b = find(int(lat.endpoints[e, 0])), find(int(lat.endpoints[e, 1]))
        if a != b:
            parent[a] = b
    return len({find(v) for v in region.vertices})


# -- standard partitions ----------------------------------------------------

@dataclass(frozen=True)
class Partition:
    """Four-region arrangement used for the topological purity.

    ``A``, ``B_left``, ``B_right``, ``C`` and ``D`` are disjoint edge sets covering
    the lattice.  ``outer`` and ``inner`` are the crossing-star sets of the two
    boundary components of ``ABC`` (``inner`` is empty for the simply connected
    variant).
    """

    kind: str
    A: Region
    B_left: Region
    B_right: Region
    C: Region
    outer: frozenset
    inner: frozenset

    @property
    def lattice(self) -> Lattice:
        return self.A.lattice

    @property
    def B(self) -> Region:
        return self.B_left | self.B_right

    @property
    def AB(self) -> Region:
        return self.A | self.B

    @property
    def BC(self) -> Region:
        return self.B | self.C

    @property
    def ABC(self) -> Region:
        return self.A | self.B | self.C

    @property
    def D(self) -> Region:
        return ~self.ABC

    def composites(self) -> dict[str, Region]:
        return {"AB": self.AB, "BC": self.BC, "B": self.B, "ABC": self.ABC}

    def subregions(self) -> dict[str, Region]:
        return {"A": self.A, "B_left": self.B_left, "B_right": self.B_right, "C": self.C}


def partition_from_vertex_sets(lattice: Lattice, kind: str, wa, wbl, wbr, wc) -> Partition:
    """Build a partition from disjoint vertex sets of the four subregions.

    Edges touching a B vertex belong to B, then edges touching A or C; this keeps
    the edge sets disjoint while every composite stays a vertex-block region.
    """
    wa, wbl, wbr, wc = map(frozenset, (wa, wbl, wbr, wc))
    if (wa & wbl) or (wa & wbr) or (wa & wc) or (wbl & wbr) or (wbl & wc) or (wbr & wc):
        raise ConfigurationError("subregion vertex sets overlap")
    bl = vertex_block_region(lattice, wbl)
    br = vertex_block_region(lattice, wbr)
    if not bl.isdisjoint(br):
        raise ConfigurationError("B_left and B_right touch")
    b = bl | br
    a = vertex_block_region(lattice, wa) - b
    c = vertex_block_region(lattice, wc) - b
    if not a.isdisjoint(c):
        raise ConfigurationError("A and C touch; they must be separated by B")
    abc = a | b | c
    comps = boundary_components(abc)
    expected = 2 if kind == "annulus" else 1
    if len(comps) != expected:
        raise ConfigurationError(
            f"{kind} partition has {len(comps)} boundary components, expected {expected}")
    outer, inner = _label_outer_inner(lattice, abc, comps)
    part = Partition(kind, a, bl, br, c, outer, inner)
    _check_partition(part)
    return part


def _label_outer_inner(lattice, abc, comps):
    if len(comps) == 1:
        return comps[0], frozenset()
    # The inner component is enclosed: removing ABC disconnects it from the rest.
    outside = ~abc
    sizes = []
    for comp in comps:
        band = boundary_band(abc, comp) & outside
        reach = _reachable_edges(outside, band)
        sizes.append(len(reach))
    order = sorted(range(len(comps)), key=lambda i: -sizes[i])
    return comps[order[0]], comps[order[1]]


def _reachable_edges(within: Region, seed: Region) -> Region:
    lat = within.lattice
    seen = set(seed.edges)
    stack = list(seen)
    allowed = within.bool_mask
    while stack:
        e = stack.pop()
        for v in lat.endpoints[e]:
            for f in lat.star_edges[v]:
                f = int(f)
                if allowed[f] and f not in seen:
                    seen.add(f)
                    stack.append(f)
    return Region.from_edges(lat, seen)


def _check_partition(part: Partition):
    sizes = {k: boundary_stats(r).boundary_size for k, r in part.composites().items()}
    if sizes["AB"] + sizes["BC"] != sizes["B"] + sizes["ABC"]:
        raise ConfigurationError("boundary-length cancellation fails for this partition")
    if len(part.outer & part.inner):
        raise ConfigurationError("outer and inner boundary components overlap")


def standard_partition(lattice: Lattice, *, origin=(1, 1), outer: int | None = None,
                       thickness: int | None = None, kind: str = "annulus") -> Partition:
    """Annular (or simply connected) arrangement of A, B_left, C, B_right.

    For ``kind='annulus'`` the square ring of side ``outer`` and width
    ``thickness`` is cut into four arcs: ``A`` on top, ``C`` at the bottom and
    ``B_left`` / ``B_right`` on the sides, so the B arcs separate A from C.
    For ``kind='disk'`` a solid ``thickness x outer`` strip is cut into
    ``A | B | C`` from left to right (``B_right`` is empty).

    ``outer`` defaults to ``L - 3`` and ``thickness`` to ``(outer - 2) // 3``
    (annulus) or ``3`` (disk).
    """
    L = lattice.L
    r0, c0 = origin
    if kind == "annulus":
        outer = L - 3 if outer is None else outer
        thickness = max(2, (outer - 2) // 3) if thickness is None else thickness
        hole = outer - 2 * thickness
        if thickness < 2 or hole < 2:
            raise ConfigurationError(
                "annulus needs thickness >= 2 and hole >= 2 (2-edge clearance between boundaries)")
        if outer > L - 3:
            raise ConfigurationError(f"annulus of side {outer} does not fit on L={L} with clearance")
        top = block_vertices(lattice, r0, c0, thickness, outer)
        bottom = block_vertices(lattice, r0 + outer - thickness, c0, thickness, outer)
        left = block_vertices(lattice, r0 + thickness, c0, hole, thickness)
        right = block_vertices(lattice, r0 + thickness, c0 + outer - thickness, hole, thickness)
        return partition_from_vertex_sets(lattice, "annulus", top, left, right, bottom)
    if kind == "disk":
        outer = L - 3 if outer is None else outer
        thickness = 3 if thickness is None else thickness
        if outer < 3 or thickness < 1 or outer > L - 3 or thickness > L - 3:
            raise ConfigurationError("disk partition does not fit with clearance")
        w = outer // 3
        wa = block_vertices(lattice, r0, c0, thickness, w)
        wb = block_vertices(lattice, r0, c0 + w, thickness, outer - 2 * w)
        wc = block_vertices(lattice, r0, c0 + outer - w, thickness, w)
        return partition_from_vertex_sets(lattice, "disk", wa, wb, frozenset(), wc)
    raise ConfigurationError(f"unknown partition kind {kind!r}")
