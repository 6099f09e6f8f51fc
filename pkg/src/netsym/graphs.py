"""Simple undirected graphs on adjacency bitsets.

Covers graph6 I/O, local complementation and orbit exploration, the
neighbourhood-set decomposition around a triangle, and small utilities
(canonical forms, exhaustive enumeration) used by the no-go scanner.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from collections import deque

_MAX_VERTICES = 64


class GraphError(ValueError):
    """Malformed graph input or out-of-range vertex."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph; adj[i] is the neighbour bitset of vertex i."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= _MAX_VERTICES:
            raise GraphError(f"vertex count {self.n} outside 1..{_MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise GraphError("adjacency list length differs from n")
        for i, row in enumerate(self.adj):
            if row >> self.n:
                raise GraphError(f"adjacency bits beyond vertex count at {i}")
            if row >> i & 1:
                raise GraphError(f"self-loop at vertex {i}")
            for j in range(self.n):
                if (row >> j & 1) != (self.adj[j] >> i & 1):
                    raise GraphError(f"asymmetric adjacency between {i} and {j}")

    @staticmethod
    def from_edges(n: int, edges) -> "Graph":
        adj = [0] * n
        for i, j in edges:
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise GraphError(f"bad edge ({i},{j}) for n={n}")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return Graph(n, tuple(adj))

    def edges(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if self.adj[i] >> j & 1
        ]

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if self.adj[v] >> j & 1)

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def induced(self, vertices: list[int]) -> "Graph":
        """Induced subgraph; vertex k of the result is vertices[k]."""
        idx = {v: k for k, v in enumerate(vertices)}
        adj = [0] * len(vertices)
        for v, k in idx.items():
            for u in self.neighbors(v):
                if u in idx:
                    adj[k] |= 1 << idx[u]
        return Graph(len(vertices), tuple(adj))

    def relabel(self, perm: list[int]) -> "Graph":
        """Apply the vertex permutation: new label of v is perm[v]."""
        adj = [0] * self.n
        for i in range(self.n):
            for j in self.neighbors(i):
                adj[perm[i]] |= 1 << perm[j]
        return Graph(self.n, tuple(adj))

    def connected_components(self) -> list[list[int]]:
        seen, comps = 0, []
        for start in range(self.n):
            if seen >> start & 1:
                continue
            stack, comp = [start], []
            seen |= 1 << start
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in self.neighbors(v):
                    if not seen >> u & 1:
                        seen |= 1 << u
                        stack.append(u)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.connected_components()) == 1

    def to_json_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges()]}

    @staticmethod
    def from_json_dict(d: dict) -> "Graph":
        return Graph.from_edges(int(d["n"]), d["edges"])


# -- graph6 ---------------------------------------------------------------

def parse_graph6(text: str) -> Graph:
    """Decode a graph6 string (n <= 64; optional >>graph6<< header)."""
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    data = [ord(c) - 63 for c in s]
    if any(not 0 <= v <= 63 for v in data):
        raise GraphError(f"invalid graph6 character in {text!r}")
    if not data:
        raise GraphError("empty graph6 string")
    if data[0] < 63:
        n, body = data[0], data[1:]
    else:
        if len(data) < 4 or data[1] == 63:
            raise GraphError("unsupported graph6 size header")
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        body = data[4:]
    if not 1 <= n <= _MAX_VERTICES:
        raise GraphError(f"graph6 vertex count {n} outside 1..{_MAX_VERTICES}")
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise GraphError("graph6 body length does not match vertex count")
    bits = []
    for v in body:
        bits.extend((v >> k) & 1 for k in range(5, -1, -1))
    if any(bits[nbits:]):
        raise GraphError("nonzero padding bits in graph6 body")
    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    return Graph(n, tuple(adj))


def format_graph6(g: Graph) -> str:
    """Encode as graph6, bit-exact per the public format."""
    if g.n <= 62:
        head = [g.n + 63]
    else:
        head = [126, 63 + (g.n >> 12), 63 + ((g.n >> 6) & 63), 63 + (g.n & 63)]
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    while len(bits) % 6:
        bits.append(0)
    body = [
        63 + sum(b << (5 - k) for k, b in enumerate(bits[i:i + 6]))
        for i in range(0, len(bits), 6)
    ]
    return "".join(chr(c) for c in head + body)


# -- local complementation -------------------------------------------------

def local_complement(g: Graph, v: int) -> Graph:
    """Complement the induced subgraph on the neighbourhood of v."""
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range")
    nbhd = g.adj[v]
    adj = list(g.adj)
    for i in range(g.n):
        if nbhd >> i & 1:
            # toggle edges from i to the other neighbours of v
            adj[i] ^= nbhd & ~(1 << i)
    return Graph(g.n, tuple(adj))


# -- canonical form --------------------------------------------------------

def _refine_colors(g: Graph, colors: list[int]) -> list[int]:
    """Iterated neighbour-colour refinement to a fixpoint."""
    while True:
        sig = [
            (colors[v], tuple(sorted(colors[u] for u in g.neighbors(v))))
            for v in range(g.n)
        ]
        order = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [order[s] for s in sig]
        if new == colors:
            return colors
        colors = new


def _adjacency_key(g: Graph, order: list[int]) -> tuple[int, ...]:
    pos = {v: k for k, v in enumerate(order)}
    key = []
    for a in range(g.n):
        row = 0
        for b in range(a + 1, g.n):
            if g.has_edge(order[a], order[b]):
                row |= 1 << (b - a - 1)
        key.append(row)
    return tuple(key)


def canonical_key(g: Graph, leaf_cap: int = 200_000) -> tuple[int, ...]:
    """Isomorphism-invariant key via refinement + individualization.

    Colour classes are refined; non-singleton classes are split by
    individualizing each candidate vertex in turn, and the minimum adjacency
    key over all discrete orderings reached is returned.
    """
    best: list[tuple[int, ...] | None] = [None]
    leaves = [0]

    def descend(colors: list[int]):
        colors = _refine_colors(g, colors)
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            leaves[0] += 1
            if leaves[0] > leaf_cap:
                raise GraphError("canonical form search exceeded leaf cap")
            order = [v for c in sorted(cells) for v in cells[c]]
            key = _adjacency_key(g, order)
            if best[0] is None or key < best[0]:
                best[0] = key
            return
        base = max(colors) + 1
        for v in target:
            child = list(colors)
            child[v] = base
            descend(child)

    descend([0] * g.n)
    assert best[0] is not None
    return best[0]


def canonical_form(g: Graph) -> Graph:
    """A canonical representative: same key for isomorphic graphs."""
    key = canonical_key(g)
    adj = [0] * g.n
    for a, row in enumerate(key):
        for b in range(a + 1, g.n):
            if row >> (b - a - 1) & 1:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    return Graph(g.n, tuple(adj))


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and canonical_key(g) == canonical_key(h)


# -- LC orbit ----------------------------------------------------------------

@dataclass(frozen=True)
class OrbitResult:
    graphs: tuple[Graph, ...]
    truncated: bool


def lc_orbit(g: Graph, max_size: int = 1_000_000) -> OrbitResult:
    """Closure of g under local complementation, up to isomorphism.

    Breadth-first over canonical forms; LC commutes with relabelling, so
    exploring canonical representatives covers the whole labelled orbit.
    """
    start = canonical_form(g)
    seen = {start.adj: start}
    queue = deque([start])
    truncated = False
    while queue:
        cur = queue.popleft()
        for v in range(cur.n):
            if cur.degree(v) < 2:
                continue  # LC at degree <= 1 is the identity
            nxt = canonical_form(local_complement(cur, v))
            if nxt.adj not in seen:
                if len(seen) >= max_size:
                    truncated = True
                    queue.clear()
                    break
                seen[nxt.adj] = nxt
                queue.append(nxt)
    return OrbitResult(tuple(seen.values()), truncated)


# -- triangle decomposition --------------------------------------------------

@dataclass(frozen=True)
class TriangleDecomposition:
    """Neighbourhood sets around a labelled triangle (A, B, C).

    The seven sets exclude A, B, C themselves and partition the union of the
    three neighbourhoods.  r_ab etc. are the symmetric-difference supports
    showing up in products of two stabilizer generators.
    """

    triangle: tuple[int, int, int]
    t_abc: frozenset[int]
    j_ab: frozenset[int]
    j_ac: frozenset[int]
    j_bc: frozenset[int]
    e_a: frozenset[int]
    e_b: frozenset[int]
    e_c: frozenset[int]

    @property
    def r_ab(self) -> frozenset[int]:
        return self.e_a | self.e_b | self.j_ac | self.j_bc

    @property
    def r_ac(self) -> frozenset[int]:
        return self.e_a | self.e_c | self.j_ab | self.j_bc

    @property
    def r_bc(self) -> frozenset[int]:
        return self.e_b | self.e_c | self.j_ab | self.j_ac

    @property
    def frak_r(self) -> frozenset[int]:
        """Support of the B generator beyond the triangle itself."""
        return self.e_b | self.j_ab | self.j_bc | self.t_abc


def triangle_decomposition(g: Graph, a: int, b: int, c: int) -> TriangleDecomposition:
    """Split the neighbourhoods of a mutually adjacent triple into the
    seven disjoint sets T, J_xy and E_x."""
    if len({a, b, c}) != 3:
        raise GraphError("triangle vertices must be distinct")
    if not (g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c)):
        raise GraphError(f"({a},{b},{c}) is not a triangle")
    tri = {a, b, c}
    na = set(g.neighbors(a)) - tri
    nb = set(g.neighbors(b)) - tri
    nc = set(g.neighbors(c)) - tri
    t = na & nb & nc
    return TriangleDecomposition(
        triangle=(a, b, c),
        t_abc=frozenset(t),
        j_ab=frozenset((na & nb) - t),
        j_ac=frozenset((na & nc) - t),
        j_bc=frozenset((nb & nc) - t),
        e_a=frozenset(na - nb - nc),
        e_b=frozenset(nb - na - nc),
        e_c=frozenset(nc - na - nb),
    )


def is_path4(g: Graph, vertices) -> bool:
    """True iff the induced subgraph on the 4 given vertices is a path."""
    vs = sorted(set(vertices))
    if len(vs) != 4:
        raise GraphError("is_path4 needs exactly four distinct vertices")
    sub = g.induced(vs)
    return sorted(sub.degree(v) for v in range(4)) == [1, 1, 2, 2]


# -- exhaustive enumeration ---------------------------------------------------

def enumerate_graphs(n: int, connected: bool = False) -> list[Graph]:
    """All graphs on n vertices up to isomorphism (canonical representatives).

    Built by vertex augmentation from the (n-1)-vertex list; intended for
    desk-scale n (<= 8 or so).
    """
    if n < 1:
        raise GraphError("need n >= 1")
    level = [Graph(1, (0,))]
    for k in range(2, n + 1):
        seen: dict[tuple[int, ...], Graph] = {}
        for g in level:
            for mask in range(1 << (k - 1)):
                adj = [row | ((mask >> i & 1) << (k - 1)) for i, row in enumerate(g.adj)]
                adj.append(mask)
                cand = canonical_form(Graph(k, tuple(adj)))
                seen.setdefault(cand.adj, cand)
        level = list(seen.values())
    if connected:
        level = [g for g in level if g.is_connected()]
    return level
