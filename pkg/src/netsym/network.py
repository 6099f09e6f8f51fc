"""Network topologies, copy-and-rewire inflations and marginal equalities.

A network is a hypergraph of nodes and multiparty sources.  An inflation
re-distributes `copies` instances of every source among node copies.  Two
collections of node copies (possibly in different inflations of the same
base, with the base itself counting as the trivial one-copy inflation)
carry equal marginals whenever there is a base-label-preserving bijection
under which the grouping of source roles into source instances agrees; the
channels applied per node copy and the shared randomness are identical by
construction, so the reduced states coincide.  ``equal_marginals``
enumerates the maximal node-copy sets whose grouping agrees with the base.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .states import DenseState

NodeCopy = tuple[str, int]


class NetworkError(ValueError):
    """Invalid topology or wiring."""


@dataclass(frozen=True)
class Source:
    id: str
    parties: tuple[str, ...]

    def __post_init__(self):
        if len(self.parties) < 2 or len(set(self.parties)) != len(self.parties):
            raise NetworkError(f"source {self.id} must connect >= 2 distinct nodes")


@dataclass(frozen=True)
class Network:
    nodes: tuple[str, ...]
    sources: tuple[Source, ...]

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise NetworkError("node labels must be unique")
        ids = [s.id for s in self.sources]
        if len(set(ids)) != len(ids):
            raise NetworkError("source ids must be unique")
        for s in self.sources:
            for p in s.parties:
                if p not in self.nodes:
                    raise NetworkError(f"source {s.id} references unknown node {p}")

    def source(self, sid: str) -> Source:
        for s in self.sources:
            if s.id == sid:
                return s
        raise NetworkError(f"no source with id {sid}")

    def node_roles(self, node: str) -> list[tuple[str, int]]:
        """(source id, role index) pairs delivered to the node."""
        return [
            (s.id, r)
            for s in self.sources
            for r, p in enumerate(s.parties)
            if p == node
        ]

    def to_json_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "sources": [{"id": s.id, "parties": list(s.parties)} for s in self.sources],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "Network":
        return Network(
            tuple(d["nodes"]),
            tuple(Source(s["id"], tuple(s["parties"])) for s in d["sources"]),
        )


# wiring maps (source id, instance) -> endpoint list [(node, copy), ...]
Wiring = dict[tuple[str, int], tuple[NodeCopy, ...]]


@dataclass(frozen=True)
class Inflation:
    base: Network
    copies: int
    wiring: Wiring = field(hash=False)

    def __post_init__(self):
        if self.copies < 1:
            raise NetworkError("need at least one copy")
        expected = {(s.id, c) for s in self.base.sources for c in range(self.copies)}
        if set(self.wiring) != expected:
            raise NetworkError("wiring must cover every source instance exactly once")
        for (sid, c), endpoints in self.wiring.items():
            src = self.base.source(sid)
            if len(endpoints) != len(src.parties):
                raise NetworkError(f"wrong arity for source {sid} copy {c}")
            for role, (node, copy) in enumerate(endpoints):
                if node != src.parties[role]:
                    raise NetworkError(
                        f"source {sid} copy {c} role {role} must feed a copy of "
                        f"{src.parties[role]}, got {node}"
                    )
                if not 0 <= copy < self.copies:
                    raise NetworkError(f"copy index {copy} out of range")
        # per role, the instance -> node-copy assignment must be a bijection
        for s in self.base.sources:
            for role in range(len(s.parties)):
                hit = {self.wiring[(s.id, c)][role][1] for c in range(self.copies)}
                if len(hit) != self.copies:
                    raise NetworkError(
                        f"role {role} of source {s.id} feeds some node copy twice"
                    )

    def registers(self) -> list[NodeCopy]:
        """Canonical node-copy order: by base node order, then copy."""
        return [(node, c) for node in self.base.nodes for c in range(self.copies)]

    def instance_of(self, sid: str, role: int, nc: NodeCopy) -> int:
        """Which instance of the source delivers the given role to nc."""
        for c in range(self.copies):
            if self.wiring[(sid, c)][role] == nc:
                return c
        raise NetworkError(f"{nc} does not receive role {role} of {sid}")

    def to_json_dict(self) -> dict:
        return {
            "network": self.base.to_json_dict(),
            "copies": self.copies,
            "wiring": [
                {"source": sid, "copy": c, "endpoints": [[n, k] for n, k in eps]}
                for (sid, c), eps in sorted(self.wiring.items())
            ],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "Inflation":
        base = Network.from_json_dict(d["network"])
        wiring = {
            (w["source"], int(w["copy"])): tuple((n, int(k)) for n, k in w["endpoints"])
            for w in d["wiring"]
        }
        return Inflation(base, int(d["copies"]), wiring)


def trivial_inflation(base: Network) -> Inflation:
    wiring = {
        (s.id, 0): tuple((p, 0) for p in s.parties) for s in base.sources
    }
    return Inflation(base, 1, wiring)


# -- topology builders --------------------------------------------------------

def ring_network(nodes) -> Network:
    """Bipartite sources along a cycle; source s_XY sits between X and Y."""
    nodes = tuple(nodes)
    if len(nodes) < 3:
        raise NetworkError("ring needs >= 3 nodes")
    sources = []
    for i, a in enumerate(nodes):
        b = nodes[(i + 1) % len(nodes)]
        sources.append(Source(f"s_{a}{b}", (a, b)))
    return Network(nodes, tuple(sources))


def triangle_network() -> Network:
    """Nodes A, B, C with the conventional opposite-source naming."""
    return Network(
        ("A", "B", "C"),
        (Source("a", ("B", "C")), Source("b", ("A", "C")), Source("c", ("A", "B"))),
    )


def square_network() -> Network:
    return ring_network(("A", "B", "C", "D"))


def complete_network(nodes) -> Network:
    """A bipartite source for every pair of nodes."""
    nodes = tuple(nodes)
    sources = tuple(
        Source(f"s_{a}{b}", (a, b)) for a, b in itertools.combinations(nodes, 2)
    )
    return Network(nodes, sources)


def all_but_one_network(nodes) -> Network:
    """N sources of arity N-1; source w_X omits node X."""
    nodes = tuple(nodes)
    if len(nodes) < 3:
        raise NetworkError("need >= 3 nodes")
    sources = tuple(
        Source(f"w_{x}", tuple(n for n in nodes if n != x)) for x in nodes
    )
    return Network(nodes, sources)


def consecutive_triples_network(nodes) -> Network:
    """Tripartite sources on consecutive node triples around a cycle."""
    nodes = tuple(nodes)
    if len(nodes) < 4:
        raise NetworkError("need >= 4 nodes")
    sources = []
    for i in range(len(nodes)):
        triple = (nodes[i], nodes[(i + 1) % len(nodes)], nodes[(i + 2) % len(nodes)])
        sources.append(Source(f"t_{''.join(triple)}", triple))
    return Network(nodes, tuple(sources))


# -- inflation builders ---------------------------------------------------------

def standard_inflations(base: Network, kind: str, swap_source: str | None = None) -> Inflation:
    """The two-copy inflations: tau (plain doubling) and gamma (doubling
    with one designated source crossed between the copies).

    For gamma the default swapped source is the one between the first and
    last node of the base, if present.
    """
    if kind not in ("tau", "gamma"):
        raise NetworkError(f"unknown standard inflation {kind!r}")
    wiring: Wiring = {}
    swap = None
    if kind == "gamma":
        if swap_source is None:
            first, last = base.nodes[0], base.nodes[-1]
            for s in base.sources:
                if set(s.parties) == {first, last}:
                    swap = s.id
                    break
            if swap is None:
                raise NetworkError(
                    f"no bipartite source between {first} and {last}; "
                    "pass swap_source explicitly"
                )
        else:
            swap = base.source(swap_source).id
            if len(base.source(swap).parties) != 2:
                raise NetworkError("gamma swaps a bipartite source")
    for s in base.sources:
        for c in (0, 1):
            if s.id == swap:
                endpoints = ((s.parties[0], c), (s.parties[1], 1 - c))
            else:
                endpoints = tuple((p, c) for p in s.parties)
            wiring[(s.id, c)] = endpoints
    return Inflation(base, 2, wiring)


def custom_inflation(base: Network, copies: int, wiring: Wiring) -> Inflation:
    """Validated arbitrary inflation; raises NetworkError on bad wirings."""
    return Inflation(base, copies, dict(wiring))


def doubling_inflation(base: Network) -> Inflation:
    return standard_inflations(base, "tau")


def chain_inflation(base: Network) -> Inflation:
    """The two-copy inflation where source w_k feeds the unprimed nodes
    below k and the primed nodes above k (and its mirrored partner).

    Defined for the all-but-one topology; it leaves consecutive pairs and
    the wrap-around pair looking exactly like base marginals.
    """
    n = len(base.nodes)
    wiring: Wiring = {}
    for k, x in enumerate(base.nodes):
        sid = f"w_{x}"
        src = base.source(sid)
        plain, mirror = [], []
        for p in src.parties:
            below = base.nodes.index(p) < k
            plain.append((p, 0) if below else (p, 1))
            mirror.append((p, 1) if below else (p, 0))
        wiring[(sid, 0)] = tuple(plain)
        wiring[(sid, 1)] = tuple(mirror)
    return Inflation(base, 2, wiring)


# -- marginal correspondences ----------------------------------------------------

@dataclass(frozen=True)
class MarginalCorrespondence:
    """Node copies whose joint state equals the base marginal on their
    base labels (the bijection is label-matching)."""

    node_copies: tuple[NodeCopy, ...]
    base_nodes: tuple[str, ...]


def _grouping(infl: Inflation, node_copies) -> dict:
    """For each source, partition the roles landing in the set by the
    source instance delivering them."""
    members = set(node_copies)
    out = {}
    for s in infl.base.sources:
        hits: dict[int, set[int]] = {}
        for role in range(len(s.parties)):
            for nc in members:
                if nc[0] == s.parties[role]:
                    inst = infl.instance_of(s.id, role, nc)
                    hits.setdefault(inst, set()).add(role)
        if hits:
            out[s.id] = hits
    return out


def _matches_base(infl: Inflation, node_copies) -> bool:
    """True iff the set is base-injective and every source's roles inside
    arrive from a single instance (the base grouping)."""
    labels = [nc[0] for nc in node_copies]
    if len(set(labels)) != len(labels):
        return False
    for hits in _grouping(infl, node_copies).values():
        if len(hits) != 1:
            return False
    return True


def equal_marginals(infl: Inflation) -> list[MarginalCorrespondence]:
    """Maximal node-copy sets whose marginal equals the base marginal on
    their labels.  Subsets of reported sets are implied."""
    regs = infl.registers()
    valid_masks = []
    for mask in range(1, 1 << len(regs)):
        subset = [regs[i] for i in range(len(regs)) if mask >> i & 1]
        if _matches_base(infl, subset):
            valid_masks.append(mask)
    maximal = []
    for m in sorted(valid_masks, key=lambda m: -bin(m).count("1")):
        if not any(m | k == k for k in maximal):
            maximal.append(m)
    out = []
    for m in sorted(maximal):
        subset = tuple(regs[i] for i in range(len(regs)) if m >> i & 1)
        out.append(MarginalCorrespondence(subset, tuple(nc[0] for nc in subset)))
    return out


def patterns_equal(
    infl_a: Inflation, set_a, infl_b: Inflation, set_b,
    letters_a: dict | None = None, letters_b: dict | None = None,
) -> bool:
    """Whether two node-copy collections carry identical marginals.

    Looks for a base-label-preserving bijection that maps the source-role
    grouping of one side onto the other; with optional letter maps the
    bijection must also carry observables onto each other.  Both sides must
    live over the same base network.
    """
    set_a, set_b = list(set_a), list(set_b)
    if infl_a.base != infl_b.base or len(set_a) != len(set_b):
        return False
    by_label_a: dict[str, list[NodeCopy]] = {}
    by_label_b: dict[str, list[NodeCopy]] = {}
    for nc in set_a:
        by_label_a.setdefault(nc[0], []).append(nc)
    for nc in set_b:
        by_label_b.setdefault(nc[0], []).append(nc)
    if {k: len(v) for k, v in by_label_a.items()} != {k: len(v) for k, v in by_label_b.items()}:
        return False

    labels = sorted(by_label_a)
    choices = [itertools.permutations(by_label_b[lab]) for lab in labels]
    for combo in itertools.product(*choices):
        phi = {}
        for lab, perm in zip(labels, combo):
            for src, dst in zip(by_label_a[lab], perm):
                phi[src] = dst
        if letters_a is not None and letters_b is not None:
            if any(letters_a[nc] != letters_b[phi[nc]] for nc in set_a):
                continue
        if _grouping_isomorphic(infl_a, set_a, infl_b, phi):
            return True
    return False


def _grouping_isomorphic(infl_a, set_a, infl_b, phi) -> bool:
    for s in infl_a.base.sources:
        # role -> (instance delivering it) on each side, over roles landing
        # in the respective sets
        roles_a: dict[tuple[int, NodeCopy], int] = {}
        roles_b: dict[tuple[int, NodeCopy], int] = {}
        for role in range(len(s.parties)):
            for nc in set_a:
                if nc[0] == s.parties[role]:
                    roles_a[(role, nc)] = infl_a.instance_of(s.id, role, nc)
                    roles_b[(role, nc)] = infl_b.instance_of(s.id, role, phi[nc])
        keys = list(roles_a)
        for k1, k2 in itertools.combinations(keys, 2):
            if (roles_a[k1] == roles_a[k2]) != (roles_b[k1] == roles_b[k2]):
                return False
    return True


def separable_cut(infl: Inflation) -> tuple[tuple[NodeCopy, ...], tuple[NodeCopy, ...]] | None:
    """A bipartition of node copies crossed by no source instance, if any.

    Components of the instance hypergraph are grouped; a disconnected
    hypergraph yields the (first component | rest) split.
    """
    regs = infl.registers()
    index = {nc: i for i, nc in enumerate(regs)}
    parent = list(range(len(regs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    for endpoints in infl.wiring.values():
        first = index[endpoints[0]]
        for nc in endpoints[1:]:
            union(first, index[nc])
    comps: dict[int, list[NodeCopy]] = {}
    for nc, i in index.items():
        comps.setdefault(find(i), []).append(nc)
    if len(comps) < 2:
        return None
    groups = sorted(comps.values(), key=lambda g: [regs.index(nc) for nc in g])
    left = tuple(sorted(groups[0], key=regs.index))
    right = tuple(sorted([nc for grp in groups[1:] for nc in grp], key=regs.index))
    return left, right


# -- dense oracle -----------------------------------------------------------------

def _particle_layout(infl: Inflation):
    """Global particle slots: per register, its (source id, role) pairs in
    sorted order.  Returns slot owner lists and a lookup."""
    slots = []  # (register, source id, role, instance)
    for nc in infl.registers():
        recv = []
        for s in infl.base.sources:
            for role, party in enumerate(s.parties):
                if party == nc[0]:
                    recv.append((s.id, role, infl.instance_of(s.id, role, nc)))
        for sid, role, inst in sorted(recv):
            slots.append((nc, sid, role, inst))
    return slots


def inflation_marginal(
    infl: Inflation, source_states: dict[str, DenseState], node_copies,
) -> DenseState:
    """Reduced state on the given node copies with trivial channels.

    Only the sources feeding the requested registers are tensored (the rest
    integrate out); particles inside each register are ordered by
    (source id, role).
    """
    wanted = list(node_copies)
    slots = [s for s in _particle_layout(infl) if s[0] in wanted]
    # sort slots by requested register order, then (source, role)
    slots.sort(key=lambda s: (wanted.index(s[0]), s[1], s[2]))
    involved = sorted({(sid, inst) for _, sid, _, inst in slots})

    kets, dims_all, owner = [], [], []
    for sid, inst in involved:
        st = source_states[sid]
        if not st.is_pure_vector:
            raise NetworkError("oracle sources must be pure vectors")
        kets.append(st.data)
        for role, d in enumerate(st.dims):
            dims_all.append(d)
            owner.append((sid, inst, role))
    joint = kets[0]
    for k in kets[1:]:
        joint = np.kron(joint, k)
    tensor = joint.reshape(dims_all)

    keep_axes = [owner.index((sid, inst, role)) for _, sid, role, inst in slots]
    other_axes = [i for i in range(len(owner)) if i not in keep_axes]
    tensor = tensor.transpose(keep_axes + other_axes)
    dk = math.prod(dims_all[a] for a in keep_axes) if keep_axes else 1
    dr = math.prod(dims_all[a] for a in other_axes) if other_axes else 1
    m = tensor.reshape(dk, dr)
    rho = m @ m.conj().T
    dims = tuple(dims_all[a] for a in keep_axes)
    return DenseState(dims, rho)


def base_marginal(
    base: Network, source_states: dict[str, DenseState], nodes,
) -> DenseState:
    """Base-network marginal with trivial channels, same particle order."""
    infl = trivial_inflation(base)
    return inflation_marginal(infl, source_states, [(n, 0) for n in nodes])


def random_source_states(
    base: Network, rng: np.random.Generator, local_dim: int = 2,
) -> dict[str, DenseState]:
    out = {}
    for s in base.sources:
        dim = local_dim ** len(s.parties)
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        v /= np.linalg.norm(v)
        out[s.id] = DenseState((local_dim,) * len(s.parties), v)
    return out


def _haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def network_state_dense(
    base: Network,
    source_states: dict[str, DenseState],
    node_unitaries: list[dict[str, np.ndarray]],
    weights: list[float],
) -> DenseState:
    """Build the node-output density matrix of an explicit network state.

    Each node applies, per shared-randomness value, a unitary on its
    received particles and keeps the first qubit (the rest is traced out
    as the channel environment).  Qubit sources only.
    """
    if len(node_unitaries) != len(weights):
        raise NetworkError("one channel set per shared-randomness weight")
    if abs(sum(weights) - 1.0) > 1e-12 or any(w < 0 for w in weights):
        raise NetworkError("weights must form a distribution")
    infl = trivial_inflation(base)
    slots = _particle_layout(infl)

    kets, owner = [], []
    for s in base.sources:
        st = source_states[s.id]
        if not st.is_pure_vector or any(d != 2 for d in st.dims):
            raise NetworkError("harness sources must be pure qubit states")
        kets.append(st.data)
        owner.extend((s.id, role) for role in range(len(st.dims)))
    joint = kets[0]
    for kvec in kets[1:]:
        joint = np.kron(joint, kvec)
    tensor = joint.reshape((2,) * len(owner))
    perm = [owner.index((sid, role)) for _, sid, role, _ in slots]
    tensor = tensor.transpose(perm)

    node_sizes = [len(base.node_roles(node)) for node in base.nodes]
    n_nodes = len(base.nodes)
    blocks = tensor.reshape(tuple(2 ** k for k in node_sizes))

    out_dim = 2 ** n_nodes
    rho = np.zeros((out_dim, out_dim), dtype=complex)
    for chans, w in zip(node_unitaries, weights):
        cur = blocks
        for k, node in enumerate(base.nodes):
            u = chans[node]
            if u.shape != (2 ** node_sizes[k],) * 2:
                raise NetworkError(f"channel at {node} has wrong dimension")
            cur = np.moveaxis(np.tensordot(u, cur, axes=([1], [k])), 0, k)
        # split each node axis into (output qubit, environment)
        env_dims = [2 ** (node_sizes[k] - 1) for k in range(n_nodes)]
        shaped = cur.reshape(
            tuple(d for k in range(n_nodes) for d in (2, env_dims[k]))
        )
        order = list(range(0, 2 * n_nodes, 2)) + list(range(1, 2 * n_nodes, 2))
        m = shaped.transpose(order).reshape(out_dim, -1)
        rho += w * (m @ m.conj().T)
    return DenseState((2,) * n_nodes, rho)


def random_network_state(
    base: Network, rng: np.random.Generator, n_lambda: int = 1,
) -> DenseState:
    """Random state honestly prepared in the network: random pure sources,
    random local channels, optional shared-randomness mixing."""
    sources = random_source_states(base, rng)
    chans = [
        {
            node: _haar_unitary(2 ** len(base.node_roles(node)), rng)
            for node in base.nodes
        }
        for _ in range(n_lambda)
    ]
    if n_lambda == 1:
        weights = [1.0]
    else:
        raw = rng.uniform(0.1, 1.0, size=n_lambda)
        weights = list(raw / raw.sum())
    return network_state_dense(base, sources, chans, weights)
