"""Periodic square lattice with qudits on the edges.

Vertices ``(r, c)`` carry star operators, faces ``(r, c)`` carry plaquette
operators and every edge hosts one qudit of dimension ``d``.  Edge ``(r, c, 'h')``
runs from vertex ``(r, c)`` to ``(r, c + 1)`` and edge ``(r, c, 'v')`` runs from
``(r, c)`` to ``(r + 1, c)``; all coordinates wrap modulo ``L``.

Indices are row-major: vertex ``(r, c)`` and face ``(r, c)`` both have index
``r * L + c``; edge ``(r, c, o)`` has index ``2 * (r * L + c) + (o == 'v')``.

The orientation fixes the signs of the Z_d star and plaquette operators.  A star
shifts outgoing edges by ``+m`` and incoming edges by ``-m``; a plaquette checks
the circulation ``h(r,c) + v(r,c+1) - h(r+1,c) - v(r,c)``.  For ``d = 2`` the
signs are irrelevant and the model is the toric code.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigurationError

HORIZONTAL = "h"
VERTICAL = "v"
ORIENTATIONS = (HORIZONTAL, VERTICAL)


@dataclass(frozen=True)
class LatticeConfig:
    """Linear size ``L`` of the torus and local qudit dimension ``d``."""

    L: int
    d: int

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 2:
            raise ConfigurationError(f"lattice size L must be an integer >= 2, got {self.L!r}")
        if int(self.d) != self.d or self.d < 2:
            raise ConfigurationError(f"qudit dimension d must be an integer >= 2, got {self.d!r}")


class Lattice:
    """Incidence structure of an ``L x L`` torus.

    Immutable after construction.  Use :func:`build_lattice` rather than calling
    the constructor directly.
    """

    def __init__(self, config: LatticeConfig):
        self.config = config
        L = config.L
        self.L = L
        self.d = config.d
        self.n_vertices = L * L
        self.n_faces = L * L
        self.n_edges = 2 * L * L

        r, c = np.divmod(np.arange(L * L), L)
        right = r * L + (c + 1) % L
        down = ((r + 1) % L) * L + c

        endpoints = np.empty((self.n_edges, 2), dtype=np.int64)
        endpoints[0::2, 0] = r * L + c
        endpoints[0::2, 1] = right
        endpoints[1::2, 0] = r * L + c
        endpoints[1::2, 1] = down
        self.endpoints = endpoints

        h = 2 * (r * L + c)
        h_left = 2 * (r * L + (c - 1) % L)
        v = 2 * (r * L + c) + 1
        v_up = 2 * (((r - 1) % L) * L + c) + 1
        self.star_edges = np.stack([h, v, h_left, v_up], axis=1)
        self.star_signs = np.tile(np.array([1, 1, -1, -1], dtype=np.int64), (L * L, 1))

        h_below = 2 * (((r + 1) % L) * L + c)
        v_right = 2 * (r * L + (c + 1) % L) + 1
        self.face_edges = np.stack([h, v_right, h_below, v], axis=1)
        self.face_signs = np.tile(np.array([1, 1, -1, -1], dtype=np.int64), (L * L, 1))
        diag = ((r + 1) % L) * L + (c + 1) % L
        self.face_vertices = np.stack([r * L + c, right, diag, down], axis=1)

        for arr in (self.endpoints, self.star_edges, self.star_signs,
                    self.face_edges, self.face_signs, self.face_vertices):
            arr.setflags(write=False)

    def __repr__(self):
        return f"Lattice(L={self.L}, d={self.d})"

    def __eq__(self, other):
        return isinstance(other, Lattice) and other.config == self.config

    def __hash__(self):
        return hash(self.config)

    # -- coordinates -------------------------------------------------------

    def vertex_id(self, r: int, c: int) -> int:
        return (r % self.L) * self.L + (c % self.L)

    def vertex_coords(self, v: int) -> tuple[int, int]:
        self._check_vertex(v)
        return divmod(int(v), self.L)

    def face_id(self, r: int, c: int) -> int:
        return (r % self.L) * self.L + (c % self.L)

    def edge_id(self, r: int, c: int, orientation: str) -> int:
        if orientation not in ORIENTATIONS:
            raise ValueError(f"orientation must be 'h' or 'v', got {orientation!r}")
        return 2 * self.vertex_id(r, c) + (orientation == VERTICAL)

    def edge_coords(self, e: int) -> tuple[int, int, str]:
        self._check_edge(e)
        v, o = divmod(int(e), 2)
        r, c = divmod(v, self.L)
        return r, c, ORIENTATIONS[o]

    def _check_edge(self, e):
        if not 0 <= e < self.n_edges:
            raise IndexError(f"edge id {e} out of range [0, {self.n_edges})")

    def _check_vertex(self, v):
        if not 0 <= v < self.n_vertices:
            raise IndexError(f"vertex id {v} out of range [0, {self.n_vertices})")

    # -- incidence ---------------------------------------------------------

    def star(self, v: int) -> tuple[int, ...]:
        """The four edges incident to vertex ``v``."""
        self._check_vertex(v)
        return tuple(int(e) for e in self.star_edges[v])

    def face(self, p: int) -> tuple[int, ...]:
        """The four edges bounding face ``p``."""
        if not 0 <= p < self.n_faces:
            raise IndexError(f"face id {p} out of range [0, {self.n_faces})")
        return tuple(int(e) for e in self.face_edges[p])

    def edge_stars(self, e: int) -> tuple[int, int]:
        """The two vertices whose stars contain edge ``e`` (its endpoints)."""
        self._check_edge(e)
        tail, head = self.endpoints[e]
        return int(tail), int(head)

    @cached_property
    def _neighbor_table(self):
        table = []
        for e in range(self.n_edges):
            tail, head = self.endpoints[e]
            nbrs = set(self.star_edges[tail].tolist()) | set(self.star_edges[head].tolist())
            nbrs.discard(e)
            table.append(frozenset(nbrs))
        return tuple(table)

    @cached_property
    def vertex_face_neighbors(self) -> tuple[frozenset, ...]:
        """For each vertex, the other vertices sharing at least one face with it."""
        out = [set() for _ in range(self.n_vertices)]
        for quad in self.face_vertices.tolist():
            for a in quad:
                out[a].update(quad)
        for v, s in enumerate(out):
            s.discard(v)
        return tuple(frozenset(s) for s in out)

    def edge_mask(self, edges) -> np.ndarray:
        """Boolean membership vector for an edge collection or region."""
        mask = getattr(edges, "bool_mask", None)
        if mask is not None:
            return mask
        out = np.zeros(self.n_edges, dtype=bool)
        idx = np.fromiter((int(e) for e in edges), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.n_edges):
            raise IndexError("edge id out of range")
        out[idx] = True
        return out


def build_lattice(config: LatticeConfig | None = None, *, L: int | None = None,
                  d: int | None = None) -> Lattice:
    """Build the torus lattice for ``config`` (or for keyword ``L``, ``d``)."""
    if config is None:
        if L is None or d is None:
            raise ConfigurationError("build_lattice needs a LatticeConfig or both L and d")
        config = LatticeConfig(L, d)
    return Lattice(config)


def edge_neighbors(lattice: Lattice, e: int) -> frozenset:
    """Edges sharing at least one endpoint with ``e``, excluding ``e`` itself."""
    lattice._check_edge(e)
    return lattice._neighbor_table[e]


def star_legs(lattice: Lattice, region) -> np.ndarray:
    """Number of edges of each star that lie inside ``region`` (0 to 4)."""
    mask = lattice.edge_mask(region)
    return mask[lattice.star_edges].sum(axis=1)


def crossing_stars(lattice: Lattice, region) -> frozenset:
    """Vertices whose star has edges both inside and outside ``region``."""
    legs = star_legs(lattice, region)
    return frozenset(np.flatnonzero((legs > 0) & (legs < 4)).tolist())


def vertex_support(lattice: Lattice, edges) -> frozenset:
    """All endpoint vertices of the given edges."""
    mask = lattice.edge_mask(edges)
    return frozenset(np.unique(lattice.endpoints[mask]).tolist())
