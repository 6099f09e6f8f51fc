"""Permutational (bosonic) and antisymmetric (fermionic) structure.

Flip operators, full (anti)symmetrizers by group averaging, symmetry
detection, and the network-infeasibility verdict for permutationally
symmetric states: an entangled symmetric state cannot come from any
network whose sources span fewer than all parties, and an antisymmetric
state cannot come from a network at all.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .states import DenseState, StateError, has_npt_cut, partial_trace

SYM_TOL = 1e-9


def _permutation_operator(dims: tuple[int, ...], perm: tuple[int, ...]) -> np.ndarray:
    """Matrix sending |i_1 .. i_N> to |i_{perm^-1(1)} .. >, i.e. moving the
    content of slot k to slot perm[k]."""
    dim = math.prod(dims)
    op = np.zeros((dim, dim))
    strides = np.cumprod((1,) + dims[::-1][:-1])[::-1]
    for idx in range(dim):
        levels = [(idx // strides[k]) % dims[k] for k in range(len(dims))]
        out_levels = [0] * len(dims)
        for k, lvl in enumerate(levels):
            out_levels[perm[k]] = lvl
        out = sum(l * strides[k] for k, l in enumerate(out_levels))
        op[out, idx] = 1.0
    return op


def flip_operator(dims: tuple[int, ...], i: int, j: int) -> np.ndarray:
    """The swap of parties i and j; unitary, hermitian, involutive."""
    if dims[i] != dims[j]:
        raise StateError(f"cannot flip unequal local dimensions {dims[i]} != {dims[j]}")
    perm = list(range(len(dims)))
    perm[i], perm[j] = perm[j], perm[i]
    return _permutation_operator(dims, tuple(perm))


def symmetric_projector(dims: tuple[int, ...], sign: int = +1) -> np.ndarray:
    """Projector onto the fully symmetric (+1) or antisymmetric (-1)
    subspace, built by averaging all N! permutation operators."""
    if any(d != dims[0] for d in dims):
        raise StateError("projector needs equal local dimensions")
    if sign not in (+1, -1):
        raise StateError("sign must be +1 or -1")
    n = len(dims)
    dim = math.prod(dims)
    acc = np.zeros((dim, dim))
    for perm in itertools.permutations(range(n)):
        par = _permutation_parity(perm)
        acc += (par if sign < 0 else 1.0) * _permutation_operator(dims, perm)
    return acc / math.factorial(n)


def _permutation_parity(perm) -> float:
    inv = sum(
        1 for a, b in itertools.combinations(range(len(perm)), 2) if perm[a] > perm[b]
    )
    return -1.0 if inv % 2 else 1.0


def _projector_distance(s: DenseState, sign: int) -> float:
    pi = symmetric_projector(s.dims, sign)
    if s.is_pure_vector:
        return float(np.linalg.norm(pi @ s.data - s.data))
    rho = s.data
    return float(np.linalg.norm(pi @ rho @ pi - rho))


def is_perm_symmetric(s: DenseState) -> bool:
    """Pi rho Pi == rho for the full symmetrizer (Pi|psi> = |psi> if pure)."""
    return _projector_distance(s, +1) <= SYM_TOL


def is_antisymmetric(s: DenseState) -> bool:
    return _projector_distance(s, -1) <= SYM_TOL


@dataclass(frozen=True)
class LiftResult:
    """Outcome of checking pair symmetry on marginals and its lift."""

    lifts: bool
    sign: int | None                    # +1 symmetric, -1 antisymmetric
    pair_marginals_ok: bool
    generates_full_group: bool
    global_ok: bool

    def __bool__(self) -> bool:
        return self.lifts


def _pair_sign(s: DenseState, i: int, j: int) -> int | None:
    marg = partial_trace(s, [i, j])
    f = flip_operator(marg.dims, 0, 1)
    rho = marg.density()
    if np.linalg.norm(f @ rho - rho) <= SYM_TOL:
        return +1
    if np.linalg.norm(f @ rho + rho) <= SYM_TOL:
        return -1
    return None


def _generates_symmetric_group(n: int, pairs) -> bool:
    # transpositions generate S_n iff their graph connects all parties
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in pairs:
        parent[find(i)] = find(j)
    return len({find(k) for k in range(n)}) == 1


def marginal_symmetry_lift(s: DenseState, pairs: list[tuple[int, int]]) -> LiftResult:
    """Check (anti)symmetry of the listed two-party marginals, that the
    transpositions generate the full permutation group, and that the
    global state indeed carries the lifted symmetry."""
    rho = s.to_density()
    signs = [_pair_sign(rho, i, j) for i, j in pairs]
    pair_ok = all(x is not None for x in signs) and len(set(signs)) == 1
    sign = signs[0] if pair_ok else None
    generates = _generates_symmetric_group(s.num_parties, pairs)
    global_ok = False
    if pair_ok:
        dist = _projector_distance(rho, sign)
        global_ok = dist <= SYM_TOL
    return LiftResult(
        lifts=pair_ok and generates and global_ok,
        sign=sign,
        pair_marginals_ok=pair_ok,
        generates_full_group=generates,
        global_ok=global_ok,
    )


# -- Observation 2 verdicts ----------------------------------------------------

@dataclass(frozen=True)
class SymmetryVerdict:
    symmetric: bool
    antisymmetric: bool
    npt_cut: tuple[int, ...] | None
    all_ppt: bool
    product_evidence: str | None        # how full separability was established
    verdict: str                        # network-infeasible | feasible-fully-separable
                                        # | inconclusive | not-applicable

    def to_json_dict(self) -> dict:
        return {
            "symmetric": self.symmetric,
            "antisymmetric": self.antisymmetric,
            "npt_cut": None if self.npt_cut is None else list(self.npt_cut),
            "all_ppt": self.all_ppt,
            "product_evidence": self.product_evidence,
            "verdict": self.verdict,
        }


def _is_product_vector(vec: np.ndarray, dims: tuple[int, ...], tol: float = 1e-9) -> bool:
    """Schmidt rank 1 across every leading cut."""
    left = 1
    for d in dims[:-1]:
        left *= d
        m = vec.reshape(left, -1)
        svals = np.linalg.svd(m, compute_uv=False)
        if len(svals) > 1 and svals[1] > tol:
            return False
    return True


def _separability_evidence(s: DenseState) -> str | None:
    """Explicit full-separability evidence, or None.

    Accepts pure product vectors and mixtures whose eigenvectors are all
    product states (a diagonal product-basis decomposition).
    """
    if s.is_pure_vector:
        return "pure-product" if _is_product_vector(s.data, s.dims) else None
    vals, vecs = np.linalg.eigh(s.data)
    for k, val in enumerate(vals):
        if val > 1e-9 and not _is_product_vector(vecs[:, k], s.dims):
            return None
    return "product-eigenbasis"


def observation2_verdict(s: DenseState, source_arity_cap: int) -> SymmetryVerdict:
    """Network feasibility for (anti)symmetric states.

    With sources spanning at most N-1 parties, an entangled symmetric state
    (here certified by an NPT cut) is network-infeasible, a fully separable
    one is feasible; antisymmetric states are infeasible in any network.
    States without full (anti)symmetry are out of the criterion's reach.
    """
    n = s.num_parties
    if any(d != s.dims[0] for d in s.dims):
        raise StateError("verdict needs equal local dimensions")
    if not 1 <= source_arity_cap <= n - 1:
        raise StateError(
            f"source arity cap must lie in 1..{n - 1}; the criterion says "
            "nothing about N-partite sources"
        )
    sym = is_perm_symmetric(s)
    antisym = is_antisymmetric(s)
    if antisym and not sym:
        return SymmetryVerdict(False, True, None, False, None, "network-infeasible")
    if not sym:
        return SymmetryVerdict(False, False, None, False, None, "not-applicable")
    cut = has_npt_cut(s)
    if cut is not None:
        return SymmetryVerdict(True, False, cut, False, None, "network-infeasible")
    evidence = _separability_evidence(s)
    if evidence is not None:
        return SymmetryVerdict(True, False, None, True, evidence, "feasible-fully-separable")
    return SymmetryVerdict(True, False, None, True, None, "inconclusive")
