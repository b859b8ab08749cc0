"""Dense state-vector ground truth for small lattices.

States are stored as complex vectors of length ``d**N`` whose axis ``e`` (after
reshaping to ``(d,) * N``) is the qudit on edge ``e``.  Everything here is
brute force on purpose: it is the reference the symbolic engines are checked
against.

Monte-Carlo estimates evolve only the qudits a circuit touches or the region
contains; the rest of the state enters through a factor of the reduced density
matrix.  Samples are split into fixed-size chunks, each drawing from its own
``SeedSequence`` child of the user seed, so results do not depend on the number
of worker threads.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, ConfigurationError, LatticeMismatchError
from .group_purity import GeneratorMatrix, star_generator_matrix
from .lattice import Lattice
from .regions import Region

DEFAULT_MAX_AMPLITUDES = 2 ** 20
MIN_SAMPLES = 100
CHUNK = 250
CHUNK_AMPLITUDES = 2 ** 22


@dataclass
class StateVector:
    amplitudes: np.ndarray
    lattice: Lattice

    def __post_init__(self):
        expected = self.lattice.d ** self.lattice.n_edges
        if self.amplitudes.shape != (expected,):
            raise ValueError(f"state needs {expected} amplitudes, got {self.amplitudes.shape}")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.lattice.d,) * self.lattice.n_edges)


def _check_cap(lattice: Lattice, max_amplitudes: int):
    size = lattice.d ** lattice.n_edges
    if size > max_amplitudes:
        raise BudgetExceededError(
            f"state vector needs {size} amplitudes (cap {max_amplitudes}); "
            f"L={lattice.L}, d={lattice.d} is too large for the dense oracle")


def group_elements(matrix: GeneratorMatrix) -> np.ndarray:
    """All distinct exponent vectors in the Z_d-span of the generator rows."""
    d = matrix.d
    elems = {bytes(np.zeros(matrix.lattice.n_edges, dtype=np.uint8))}
    frontier = [np.zeros(matrix.lattice.n_edges, dtype=np.int64)]
    while frontier:
        nxt = []
        for vec in frontier:
            for row in matrix.rows:
                new = (vec + row) % d
                key = bytes(new.astype(np.uint8))
                if key not in elems:
                    elems.add(key)
                    nxt.append(new)
        frontier = nxt
    return np.array([np.frombuffer(k, dtype=np.uint8) for k in sorted(elems)], dtype=np.int64)


def basis_index(lattice: Lattice, labels: np.ndarray) -> np.ndarray:
    """Flat index of computational basis states (edge 0 is the most significant digit)."""
    weights = lattice.d ** np.arange(lattice.n_edges - 1, -1, -1, dtype=np.int64)
    return np.asarray(labels, dtype=np.int64) @ weights


def build_ground_state(lattice: Lattice, *, max_amplitudes: int = DEFAULT_MAX_AMPLITUDES,
                       check: bool = True) -> StateVector:
    """Uniform superposition over the star-group orbit of ``|0...0>``."""
    _check_cap(lattice, max_amplitudes)
    elems = group_elements(star_generator_matrix(lattice))
    psi = np.zeros(lattice.d ** lattice.n_edges, dtype=complex)
    psi[basis_index(lattice, elems)] = 1 / math.sqrt(len(elems))
    state = StateVector(psi, lattice)
    if check:
        worst = stabilizer_violation(state)
        if worst > 1e-10:
            raise AssertionError(f"ground state violates a stabilizer by {worst:.3e}")
    return state


def build_product_state(lattice: Lattice, local=None, *,
                        max_amplitudes: int = DEFAULT_MAX_AMPLITUDES) -> StateVector:
    """``|phi>^N`` for a single-qudit state ``local`` (default ``|0>``)."""
    _check_cap(lattice, max_amplitudes)
    d = lattice.d
    phi = np.zeros(d, dtype=complex)
    phi[0] = 1
    if local is not None:
        phi = np.asarray(local, dtype=complex)
        phi = phi / np.linalg.norm(phi)
    psi = np.ones(1, dtype=complex)
    for _ in range(lattice.n_edges):
        psi = np.kron(psi, phi)
    return StateVector(psi, lattice)


def apply_star(state: StateVector, v: int, power: int = 1) -> StateVector:
    """Shift operator of star ``v``: ``+power`` on outgoing, ``-power`` on incoming edges."""
    lat = state.lattice
    t = state.tensor()
    for e, sign in zip(lat.star_edges[v], lat.star_signs[v]):
        t = np.roll(t, int(sign) * power, axis=int(e))
    return StateVector(t.reshape(-1).copy(), lat)


def plaquette_phase(state: StateVector, p: int) -> StateVector:
    """``omega^(circulation)`` applied to each basis state (the Z-type plaquette operator)."""
    lat = state.lattice
    d = lat.d
    labels = np.indices((d,) * lat.n_edges).reshape(lat.n_edges, -1)
    circ = (lat.face_signs[p][:, None] * labels[lat.face_edges[p]]).sum(axis=0) % d
    return StateVector(state.amplitudes * np.exp(2j * np.pi * circ / d), lat)


def stabilizer_violation(state: StateVector) -> float:
    """Largest ``|<psi|O|psi> - 1|`` over all star shifts and plaquette phases."""
    lat = state.lattice
    psi = state.amplitudes
    worst = 0.0
    for v in range(lat.n_vertices):
        worst = max(worst, abs(np.vdot(psi, apply_star(state, v).amplitudes) - 1))
    for p in range(lat.n_faces):
        worst = max(worst, abs(np.vdot(psi, plaquette_phase(state, p).amplitudes) - 1))
    return worst


def _split_matrix(tensor: np.ndarray, lattice: Lattice, edges) -> np.ndarray:
    """Reshape a state tensor (with optional leading batch axis) into ``(…, d^|R|, d^|R'|)``."""
    n = lattice.n_edges
    batch = tensor.ndim - n
    inside = sorted(int(e) for e in edges)
    outside = [e for e in range(n) if e not in set(inside)]
    perm = list(range(batch)) + [batch + e for e in inside] + [batch + e for e in outside]
    t = np.transpose(tensor, perm)
    lead = tensor.shape[:batch]
    return t.reshape(*lead, lattice.d ** len(inside), lattice.d ** len(outside))


def _purity_from_matrix(m: np.ndarray) -> np.ndarray:
    if m.shape[-2] <= m.shape[-1]:
        rho = m @ np.conj(np.swapaxes(m, -1, -2))
    else:
        rho = np.conj(np.swapaxes(m, -1, -2)) @ m
    return np.sum(np.abs(rho) ** 2, axis=(-2, -1))


def reduced_purity(state: StateVector, region) -> float:
    """``tr(rho_R^2)`` by explicit partial trace."""
    lat = state.lattice
    edges = region.edges if isinstance(region, Region) else tuple(region)
    if isinstance(region, Region) and region.lattice != lat:
        raise LatticeMismatchError("region and state live on different lattices")
    return float(_purity_from_matrix(_split_matrix(state.tensor(), lat, edges)))


def reduced_density_matrix(state: StateVector, region: Region) -> np.ndarray:
    m = _split_matrix(state.tensor(), state.lattice, region.edges)
    return m @ m.conj().T


# -- Haar sampling -----------------------------------------------------------

class HaarSampler:
    """Haar-random unitaries of dimension ``dim`` from QR of complex Gaussians."""

    def __init__(self, dim: int, rng: np.random.Generator):
        if dim < 1:
            raise ValueError("unitary dimension must be positive")
        self.dim = dim
        self.rng = rng

    def sample(self, n: int) -> np.ndarray:
        z = (self.rng.standard_normal((n, self.dim, self.dim))
             + 1j * self.rng.standard_normal((n, self.dim, self.dim))) / math.sqrt(2)
        q, r = np.linalg.qr(z)
        diag = np.diagonal(r, axis1=-2, axis2=-1)
        return q * (diag / np.abs(diag))[:, None, :]


def _apply_on_axes(t: np.ndarray, axes, unitaries: np.ndarray) -> np.ndarray:
    """Apply ``unitaries[b]`` on tensor axes ``axes`` of ``t[b]`` (axis 0 is the batch)."""
    axes = [int(a) for a in axes]
    rest = [a for a in range(1, t.ndim) if a not in set(axes)]
    perm = [0] + axes + rest
    moved = np.transpose(t, perm)
    shape = moved.shape
    dim = math.prod(shape[1:1 + len(axes)])
    moved = (unitaries @ moved.reshape(shape[0], dim, -1)).reshape(shape)
    return np.transpose(moved, np.argsort(perm))


def apply_unitaries(tensors: np.ndarray, lattice: Lattice, edges, unitaries: np.ndarray
                    ) -> np.ndarray:
    """Apply ``unitaries[b]`` on ``edges`` of state ``tensors[b]`` (batch axis first)."""
    return _apply_on_axes(tensors, [1 + int(e) for e in edges], unitaries)


def reduced_factor(state: StateVector, edges, tol: float = 1e-12) -> np.ndarray:
    """Matrix ``F`` with ``rho_E = F F^dagger`` and one column per nonzero singular value."""
    m = _split_matrix(state.tensor(), state.lattice, edges)
    u, sv, _ = np.linalg.svd(m, full_matrices=False)
    rank = max(1, int(np.sum(sv > tol * sv[0])))
    return u[:, :rank] * sv[:rank]


def _domains(s):
    return list(getattr(s, "domains", s))


def _chunk_sizes(samples: int, state_size: int) -> list[int]:
    """Fixed split of the samples; depends only on the sample count and state size."""
    chunk = max(1, min(CHUNK, CHUNK_AMPLITUDES // state_size))
    full, rem = divmod(samples, chunk)
    return [chunk] * full + ([rem] if rem else [])


def default_workers() -> int:
    """Worker threads for Monte-Carlo chunks, from ``TOPOPURITY_WORKERS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("TOPOPURITY_WORKERS", "1")))
    except ValueError as exc:
        raise ConfigurationError("TOPOPURITY_WORKERS must be an integer") from exc


def mc_string_expectation(state: StateVector, region: Region, string, samples: int,
                          seed=None, *, workers: int | None = None) -> tuple[float, float]:
    """Mean and standard error of the purity on ``region`` after random circuits.

    Each sample draws one Haar unitary per domain and applies them in string
    order (first domain first).
    """
    if samples < MIN_SAMPLES:
        raise ConfigurationError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    lat = state.lattice
    domains = _domains(string)
    for x in domains:
        if x.lattice != lat:
            raise LatticeMismatchError("domain and state live on different lattices")
    # Qudits outside the region and every domain are never touched: evolve a
    # factor of their reduced state instead of the full vector.
    support = sorted(set(region.edges).union(*(x.edges for x in domains)))
    local = {e: i for i, e in enumerate(support)}
    d = lat.d
    factor = reduced_factor(state, support)
    base = factor.reshape((d,) * len(support) + (factor.shape[1],))
    keep = [local[e] for e in region.edges]
    sizes = _chunk_sizes(samples, factor.size)
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    seqs = root.spawn(len(sizes))

    def run(i):
        rng = np.random.default_rng(seqs[i])
        t = np.broadcast_to(base, (sizes[i],) + base.shape).copy()
        for x in domains:
            u = HaarSampler(d ** len(x), rng).sample(sizes[i])
            t = _apply_on_axes(t, [1 + local[e] for e in x.edges], u)
        rest = [a for a in range(1, t.ndim) if a - 1 not in set(keep)]
        m = np.transpose(t, [0] + [1 + k for k in keep] + rest)
        return _purity_from_matrix(m.reshape(sizes[i], d ** len(keep), -1))

    workers = default_workers() if workers is None else workers
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]
    values = np.concatenate(parts)
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(samples))


def mc_twirl_expectation(state: StateVector, region: Region, domain: Region, samples: int,
                         seed=None, *, workers: int | None = None) -> tuple[float, float]:
    """Mean and standard error of the purity on ``region`` after a Haar twirl on ``domain``."""
    if not domain:
        raise ConfigurationError("twirl domain must be nonempty")
    return mc_string_expectation(state, region, [domain], samples, seed, workers=workers)
