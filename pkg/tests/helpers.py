"""Shared test utilities: random Pauli strings, anticommuting sets and
random dense states."""

from __future__ import annotations

import numpy as np

from netsym.pauli import PauliString, anticommutes
from netsym.states import DenseState

LETTERS = "1XYZ"


def random_pauli(n: int, rng: np.random.Generator, allow_identity: bool = True) -> PauliString:
    while True:
        letters = {j: LETTERS[rng.integers(0, 4)] for j in range(n)}
        sign = 1 if rng.random() < 0.5 else -1
        p = PauliString.from_letters(n, letters, sign)
        if allow_identity or not p.is_identity_letters:
            return p


def random_anticommuting_set(n: int, rng: np.random.Generator, max_size: int = 6,
                             attempts: int = 60) -> list[PauliString]:
    """Greedy random pairwise anticommuting family of hermitian strings."""
    target = int(rng.integers(1, max_size + 1))
    out: list[PauliString] = []
    for _ in range(attempts):
        if len(out) >= target:
            break
        cand = random_pauli(n, rng, allow_identity=False)
        if all(anticommutes(cand, p) for p in out):
            out.append(cand)
    if not out:
        out = [random_pauli(n, rng, allow_identity=False)]
    return out


def random_pure_state(n: int, rng: np.random.Generator, dims=None) -> DenseState:
    dims = dims or (2,) * n
    dim = int(np.prod(dims))
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    return DenseState(tuple(dims), v)


def random_density(n: int, rng: np.random.Generator, rank: int = 3) -> DenseState:
    dim = 2 ** n
    m = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    return DenseState((2,) * n, rho)
