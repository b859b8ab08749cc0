"""Exact ground-state purities from the star group.

The ground state is the uniform superposition over the orbit of ``|0...0>``
under the group ``G`` generated by the star operators, so every group element
is an exponent vector in ``(Z_d)^N``: the Z_d-span of the rows of the star
generator matrix.  For a region ``R`` with complement ``R'``

    P_R = |G_R| |G_R'| / |G|,

where ``G_R`` are the elements supported inside ``R``.  ``G_R`` is the kernel of
the restriction of ``G`` to the columns of ``R'``, so ``|G_R| = |G| / |G|_{R'}|``
and only sizes of row spans are ever needed.  Those are ranks over ``Z_p`` for
prime ``d`` and Smith normal forms over ``Z_{p^k}`` for each prime-power factor
of a composite ``d``.

:func:`purity_geometric` evaluates the closed form
``P = d^(-|boundary| + n2 + 2 n3 + n_components)`` from the boundary statistics
instead; the two engines agree on rectangles and annuli.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BoundaryUndefinedError
from .lattice import Lattice
from .regions import Region, boundary_stats


def prime_factors(n: int) -> dict[int, int]:
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def rank_mod_p(matrix, p: int) -> int:
    """Rank of an integer matrix over the field Z_p (``p`` prime)."""
    A = np.array(matrix, dtype=np.int64) % p
    n_rows, n_cols = A.shape
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        nz = np.flatnonzero(A[rank:, col])
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            A[[rank, piv]] = A[[piv, rank]]
        A[rank] = A[rank] * pow(int(A[rank, col]), -1, p) % p
        below = rank + 1 + np.flatnonzero(A[rank + 1:, col])
        if below.size:
            A[below] = (A[below] - np.outer(A[below, col], A[rank])) % p
        rank += 1
    return rank


def smith_valuations(matrix, p: int, k: int) -> list[int]:
    """p-adic valuations of the nonzero Smith invariants of a matrix over Z_{p^k}.

    The row span of the matrix in ``(Z_{p^k})^n`` has order
    ``prod(p ** (k - v) for v in valuations)``.
    """
    q = p ** k
    A = np.array(matrix, dtype=np.int64) % q
    vals = []
    while A.size and A.any():
        for j in range(k):
            hits = np.argwhere(A % p ** (j + 1) != 0)
            if hits.size:
                i, l = hits[0]
                break
        pj = p ** j
        unit = int(A[i, l]) // pj
        A[i] = A[i] * pow(unit, -1, q) % q
        others = np.flatnonzero(A[:, l])
        others = others[others != i]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, l] // pj, A[i])) % q
        vals.append(j)
        A = np.delete(np.delete(A, i, axis=0), l, axis=1)
    return vals


def span_order(matrix, d: int) -> int:
    """Number of distinct Z_d-combinations of the rows of ``matrix``."""
    A = np.asarray(matrix)
    if A.size == 0:
        return 1
    order = 1
    for p, k in prime_factors(d).items():
        if k == 1:
            order *= p ** rank_mod_p(A, p)
        else:
            order *= math.prod(p ** (k - v) for v in smith_valuations(A, p, k))
    return order


def _log_d(order: int, d: int) -> int:
    r, n = 0, order
    while n > 1:
        n, rem = divmod(n, d)
        if rem:
            raise ValueError(f"group order {order} is not a power of d={d}")
        r += 1
    return r


@dataclass(frozen=True)
class GeneratorMatrix:
    """Exponent vectors of the group generators, one row per generator, entries mod d."""

    rows: np.ndarray
    lattice: Lattice

    @property
    def d(self) -> int:
        return self.lattice.d

    @property
    def n_generators(self) -> int:
        return self.rows.shape[0]


def star_generator_matrix(lattice: Lattice) -> GeneratorMatrix:
    """One row per star ``A_1(v)``: ``+1`` on outgoing and ``-1`` on incoming edges."""
    rows = np.zeros((lattice.n_vertices, lattice.n_edges), dtype=np.int64)
    v = np.arange(lattice.n_vertices)[:, None]
    np.add.at(rows, (np.broadcast_to(v, lattice.star_edges.shape), lattice.star_edges),
              lattice.star_signs)
    rows %= lattice.d
    rows.setflags(write=False)
    return GeneratorMatrix(rows, lattice)


def product_generator_matrix(lattice: Lattice) -> GeneratorMatrix:
    """Empty generator set: the group is trivial and the state is ``|0...0>``."""
    rows = np.zeros((0, lattice.n_edges), dtype=np.int64)
    rows.setflags(write=False)
    return GeneratorMatrix(rows, lattice)


def _restricted_order(matrix: GeneratorMatrix, region: Region) -> int:
    cols = list(region.edges)
    if not cols or matrix.n_generators == 0:
        return 1
    return span_order(matrix.rows[:, cols], matrix.d)


def group_order(matrix: GeneratorMatrix) -> int:
    """Exponent ``r`` with ``|G| = d^r``."""
    if matrix.n_generators == 0:
        return 0
    return _log_d(span_order(matrix.rows, matrix.d), matrix.d)


def subgroup_order_supported_in(matrix: GeneratorMatrix, region: Region) -> int:
    """Exponent ``r_R`` with ``|G_R| = d^(r_R)`` for elements supported inside ``region``."""
    total = span_order(matrix.rows, matrix.d) if matrix.n_generators else 1
    outside = _restricted_order(matrix, ~region)
    return _log_d(total // outside, matrix.d)


@dataclass(frozen=True)
class PurityValue:
    """Exact purity with its base-2 logarithm.

    ``exponents`` holds ``(r_R, r_R', r)`` for the group engine and is ``None``
    for the geometric one.
    """

    exact: Fraction
    log2: float
    exponents: tuple[int, int, int] | None = None

    @classmethod
    def from_exact(cls, exact: Fraction, exponents=None) -> "PurityValue":
        exact = Fraction(exact)
        return cls(exact, math.log2(exact.numerator) - math.log2(exact.denominator), exponents)

    def __float__(self):
        return float(self.exact)


def purity_group(matrix: GeneratorMatrix, region: Region) -> PurityValue:
    """``|G_R| |G_R'| / |G|`` from rank computations over Z_d."""
    lat = matrix.lattice
    if not region or len(region) == lat.n_edges:
        raise BoundaryUndefinedError("purity of the empty or full region is trivially 1")
    d = matrix.d
    r = group_order(matrix)
    total = d ** r
    r_in = _log_d(total // _restricted_order(matrix, ~region), d)
    r_out = _log_d(total // _restricted_order(matrix, region), d)
    return PurityValue.from_exact(Fraction(d) ** (r_in + r_out - r), (r_in, r_out, r))


def purity_geometric(region: Region) -> PurityValue:
    """Closed form ``d^(-|boundary| + n2 + 2 n3 + n_components)``."""
    st = boundary_stats(region)
    d = region.lattice.d
    exponent = -st.boundary_size + st.geometric_correction + st.n_components
    return PurityValue.from_exact(Fraction(d) ** exponent)


class GroundStateOracle:
    """Memoized ground-state purity ``Region -> Fraction`` backed by :func:`purity_group`.

    The empty and full regions return 1, matching the purity of a pure state.
    """

    def __init__(self, lattice: Lattice, matrix: GeneratorMatrix | None = None):
        self.lattice = lattice
        self.matrix = star_generator_matrix(lattice) if matrix is None else matrix
        self._r = group_order(self.matrix)
        self._cache: dict[int, Fraction] = {}

    def __call__(self, region: Region) -> Fraction:
        hit = self._cache.get(region.mask)
        if hit is not None:
            return hit
        if not region or len(region) == self.lattice.n_edges:
            value = Fraction(1)
        else:
            d = self.lattice.d
            img_in = _log_d(_restricted_order(self.matrix, region), d)
            img_out = _log_d(_restricted_order(self.matrix, ~region), d)
            value = Fraction(d) ** (self._r - img_in - img_out)
        self._cache[region.mask] = value
        return value

    def exponent(self, region: Region) -> int:
        """``log_d`` of the purity (always a nonpositive integer)."""
        return _log_d(self(region).denominator, self.lattice.d) * -1


def constant_one_oracle(region: Region) -> Fraction:
    """Purity of a pure product state: 1 for every region."""
    return Fraction(1)
