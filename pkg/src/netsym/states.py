"""Dense numerics for small multiqudit states.

States are immutable wrappers around a complex numpy array, either a unit
vector or a density matrix, with a list of local dimensions.  Pauli
expectation values act on basis indices directly instead of building the
2^n x 2^n operator.  Qubit 0 is the leftmost tensor factor (most
significant bits of a basis index).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .graphs import Graph
from .pauli import PauliString

VECTOR_CAP = 12      # qubits for pure vectors
DENSITY_CAP = 10     # qubits for density matrices
TOTAL_DIM_CAP = 4096

HERMITICITY_TOL = 1e-10
NORM_TOL = 1e-12


class StateError(ValueError):
    """Invalid state data or mismatched dimensions."""


@dataclass(frozen=True)
class DenseState:
    """State vector or density matrix over a list of local dimensions."""

    dims: tuple[int, ...]
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        dim = math.prod(self.dims)
        if dim > TOTAL_DIM_CAP:
            raise StateError(f"total dimension {dim} exceeds cap {TOTAL_DIM_CAP}")
        arr = np.asarray(self.data, dtype=complex)
        if arr.shape == (dim,):
            norm = np.linalg.norm(arr)
            if abs(norm - 1.0) > 1e-9:
                raise StateError(f"vector norm {norm} is not 1")
        elif arr.shape == (dim, dim):
            if dim > 2 ** DENSITY_CAP and all(d == 2 for d in self.dims):
                raise StateError(f"density matrix beyond {DENSITY_CAP}-qubit cap")
            if np.linalg.norm(arr - arr.conj().T) > HERMITICITY_TOL * max(1, dim):
                raise StateError("density matrix is not hermitian")
            if abs(np.trace(arr).real - 1.0) > 1e-9:
                raise StateError(f"trace {np.trace(arr)} is not 1")
        else:
            raise StateError(f"data shape {arr.shape} fits neither vector nor matrix of dim {dim}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    @property
    def num_parties(self) -> int:
        return len(self.dims)

    @property
    def is_pure_vector(self) -> bool:
        return self.data.ndim == 1

    @property
    def is_qubits(self) -> bool:
        return all(d == 2 for d in self.dims)

    def to_density(self) -> "DenseState":
        if not self.is_pure_vector:
            return self
        cached = getattr(self, "_density_cache", None)
        if cached is None:
            cached = DenseState(self.dims, np.outer(self.data, self.data.conj()))
            object.__setattr__(self, "_density_cache", cached)
        return cached

    def density(self) -> np.ndarray:
        return self.to_density().data

    def to_json_dict(self) -> dict:
        flat = np.asarray(self.data).reshape(-1)
        inter = np.empty(2 * flat.size)
        inter[0::2], inter[1::2] = flat.real, flat.imag
        return {
            "dims": list(self.dims),
            "kind": "vector" if self.is_pure_vector else "density",
            "data": inter.tolist(),
        }

    @staticmethod
    def from_json_dict(d: dict) -> "DenseState":
        dims = tuple(int(x) for x in d["dims"])
        inter = np.asarray(d["data"], dtype=float)
        flat = inter[0::2] + 1j * inter[1::2]
        dim = math.prod(dims)
        if d["kind"] == "vector":
            return DenseState(dims, flat)
        return DenseState(dims, flat.reshape(dim, dim))


def _require_qubits(s: DenseState):
    if not s.is_qubits:
        raise StateError("operation requires qubit local dimensions")


# -- constructors ------------------------------------------------------------

def ghz(n: int) -> DenseState:
    """The n-qubit GHZ state (|0...0> + |1...1>)/sqrt(2)."""
    if n < 2:
        raise StateError("GHZ needs n >= 2")
    if n > VECTOR_CAP:
        raise StateError(f"n={n} beyond the {VECTOR_CAP}-qubit dense cap")
    vec = np.zeros(2 ** n, dtype=complex)
    vec[0] = vec[-1] = 1 / math.sqrt(2)
    return DenseState((2,) * n, vec)


def dicke(n: int, k: int) -> DenseState:
    """Equal superposition of all weight-k computational basis states."""
    if not 0 <= k <= n:
        raise StateError(f"excitation count {k} outside 0..{n}")
    if n > VECTOR_CAP:
        raise StateError(f"n={n} beyond the {VECTOR_CAP}-qubit dense cap")
    vec = np.zeros(2 ** n, dtype=complex)
    idx = [b for b in range(2 ** n) if bin(b).count("1") == k]
    vec[idx] = 1 / math.sqrt(len(idx))
    return DenseState((2,) * n, vec)


def basis_state(dims: tuple[int, ...], levels: tuple[int, ...]) -> DenseState:
    dim = math.prod(dims)
    index = 0
    for d, level in zip(dims, levels):
        index = index * d + level
    vec = np.zeros(dim, dtype=complex)
    vec[index] = 1.0
    return DenseState(dims, vec)


def graph_state(g: Graph) -> DenseState:
    """Common +1 eigenstate of the stabilizer generators X_i Z_{N(i)}.

    Built as |+>^n followed by a CZ on every edge.
    """
    if g.n > VECTOR_CAP:
        raise StateError(f"graph has {g.n} > {VECTOR_CAP} vertices")
    dim = 2 ** g.n
    vec = np.full(dim, 1 / math.sqrt(dim), dtype=complex)
    idx = np.arange(dim)
    for i, j in g.edges():
        bi = (idx >> (g.n - 1 - i)) & 1
        bj = (idx >> (g.n - 1 - j)) & 1
        vec = vec * np.where(bi & bj, -1.0, 1.0)
    return DenseState((2,) * g.n, vec)


def white_noise(s: DenseState, p: float) -> DenseState:
    """p * rho + (1-p) * identity/D."""
    if not 0.0 <= p <= 1.0:
        raise StateError(f"mixing parameter {p} outside [0,1]")
    rho = s.density()
    mixed = p * rho + (1 - p) * np.eye(s.dim) / s.dim
    return DenseState(s.dims, mixed)


# -- measurements -------------------------------------------------------------

def _index_masks(p: PauliString, n: int) -> tuple[int, int]:
    """Translate qubit-indexed masks into basis-index bit masks."""
    xm = zm = 0
    for j in range(n):
        bit = 1 << (n - 1 - j)
        if p.x >> j & 1:
            xm |= bit
        if p.z >> j & 1:
            zm |= bit
    return xm, zm


def pauli_apply(p: PauliString, vec: np.ndarray) -> np.ndarray:
    """Apply a Pauli string to a state vector by index arithmetic."""
    n = p.n
    xm, zm = _index_masks(p, n)
    idx = np.arange(len(vec), dtype=np.uint64)
    signs = np.where(np.bitwise_count(idx & np.uint64(zm)) & 1, -1.0, 1.0)
    out = np.empty_like(vec)
    out[idx ^ np.uint64(xm)] = (1j ** p.e) * signs * vec
    return out


def expectation(s: DenseState, p: PauliString) -> float:
    """<P> without materializing the Pauli matrix.

    For a vector: sum_b conj(psi[b ^ x]) * i^e (-1)^{z.b} psi[b].
    For a density matrix: sum_b i^e (-1)^{z.b} rho[b, b ^ x].
    """
    _require_qubits(s)
    if p.n != s.num_parties:
        raise StateError(f"Pauli width {p.n} != party count {s.num_parties}")
    xm, zm = _index_masks(p, p.n)
    idx = np.arange(s.dim, dtype=np.uint64)
    signs = np.where(np.bitwise_count(idx & np.uint64(zm)) & 1, -1.0, 1.0)
    flipped = idx ^ np.uint64(xm)
    if s.is_pure_vector:
        val = (1j ** p.e) * np.sum(s.data[flipped].conj() * signs * s.data)
    else:
        val = (1j ** p.e) * np.sum(signs * s.data[idx, flipped])
    if p.is_hermitian and abs(val.imag) > HERMITICITY_TOL:
        raise StateError(f"nonreal expectation {val} for hermitian {p}")
    return float(val.real) if p.is_hermitian else val


def fidelity(s: DenseState, target: DenseState) -> float:
    """<psi|rho|psi> with a pure target."""
    if s.dims != target.dims:
        raise StateError(f"dimension mismatch {s.dims} vs {target.dims}")
    if not target.is_pure_vector:
        raise StateError("fidelity target must be a pure vector")
    psi = target.data
    if s.is_pure_vector:
        return float(abs(np.vdot(psi, s.data)) ** 2)
    return float(np.real(psi.conj() @ s.data @ psi))


# -- partial operations --------------------------------------------------------

def _as_tensor(s: DenseState) -> np.ndarray:
    rho = s.density()
    return rho.reshape(s.dims + s.dims)


def partial_trace(s: DenseState, keep) -> DenseState:
    """Marginal on the given parties (order preserved as listed)."""
    keep = list(keep)
    parties = s.num_parties
    if len(set(keep)) != len(keep) or any(not 0 <= k < parties for k in keep):
        raise StateError(f"bad party subset {keep}")
    if sorted(keep) == list(range(parties)) and keep == sorted(keep):
        return s
    tensor = _as_tensor(s)
    traced = [q for q in range(parties) if q not in keep]
    for q in sorted(traced, reverse=True):
        tensor = np.trace(tensor, axis1=q, axis2=q + tensor.ndim // 2)
    remaining = [q for q in range(parties) if q in keep]
    perm = [remaining.index(k) for k in keep]
    half = tensor.ndim // 2
    tensor = tensor.transpose(perm + [p + half for p in perm])
    new_dims = tuple(s.dims[k] for k in keep)
    dim = math.prod(new_dims)
    return DenseState(new_dims, tensor.reshape(dim, dim))


def partial_transpose(s: DenseState, subset) -> np.ndarray:
    subset = set(subset)
    parties = s.num_parties
    if any(not 0 <= k < parties for k in subset):
        raise StateError(f"bad party subset {sorted(subset)}")
    tensor = _as_tensor(s)
    axes = list(range(2 * parties))
    for q in subset:
        axes[q], axes[q + parties] = axes[q + parties], axes[q]
    return tensor.transpose(axes).reshape(s.dim, s.dim)


def partial_transpose_min_eig(s: DenseState, subset) -> float:
    """Minimum eigenvalue of the partial transpose over the subset."""
    pt = partial_transpose(s, subset)
    return float(np.linalg.eigvalsh(pt)[0])


def has_npt_cut(s: DenseState, tol: float = 1e-9) -> tuple[int, ...] | None:
    """First bipartition (as a party subset) with a negative partial
    transpose, or None if every cut is PPT."""
    parties = s.num_parties
    for size in range(1, parties // 2 + 1):
        for subset in combinations(range(parties), size):
            if size == parties / 2 and subset[0] != 0:
                continue  # complements repeat
            if partial_transpose_min_eig(s, subset) < -tol:
                return subset
    return None
