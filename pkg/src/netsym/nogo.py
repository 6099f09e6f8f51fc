"""Graph-theoretic no-go decisions with machine-checkable certificates.

A certificate records a sequence of local complementations, a matched
condition (a triangle whose neighbourhood sets satisfy one of the three
emptiness cases, or a small-degree rule), and the resulting witness.  The
scanner walks the labelled LC orbit breadth-first and stops at the first
member where a rule fires.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .graphs import Graph, GraphError, is_path4, local_complement, triangle_decomposition
from .witness import Witness, theorem3_witness

_CASE_SETS = {
    1: lambda td: not td.j_ab and not td.j_bc,
    2: lambda td: not td.e_a and not td.e_c,
    3: lambda td: not td.e_a and not td.j_ab,
}


class NoGoError(ValueError):
    """Invalid scanner input."""


def theorem3_check(g: Graph) -> tuple[tuple[int, int, int], int] | None:
    """First (triangle labelling, case) whose emptiness condition holds.

    Triangles are scanned lexicographically, labellings in permutation
    order, cases in order 1, 2, 3.
    """
    for a, b, c in itertools.combinations(range(g.n), 3):
        if not (g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c)):
            continue
        for perm in itertools.permutations((a, b, c)):
            td = triangle_decomposition(g, *perm)
            for case in (1, 2, 3):
                if _CASE_SETS[case](td):
                    return perm, case
    return None


@dataclass(frozen=True)
class RuleMatch:
    """A degree-rule hit plus the constructive path to a triangle match."""

    rule: str                       # "degree<=3" or "degree4-not-path"
    vertex: int
    degree: int
    lc_sequence: tuple[int, ...]    # inner complementations of the proof
    triangle: tuple[int, int, int]
    case: int


def _triangle_match_on(g: Graph, candidates) -> tuple[tuple[int, int, int], int] | None:
    for tri in candidates:
        a, b, c = tri
        if not (g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c)):
            continue
        for perm in itertools.permutations(tri):
            td = triangle_decomposition(g, *perm)
            for case in (1, 2, 3):
                if _CASE_SETS[case](td):
                    return perm, case
    return None


def degree_rules_check(g: Graph) -> RuleMatch | None:
    """Corollary-style rules: a vertex of degree <= 3, or a degree-4 vertex
    whose neighbourhood does not induce a path.

    The returned match carries the constructive LC steps after which a
    triangle satisfies one of the three conditions.
    """
    if not g.is_connected():
        raise NoGoError("degree rules expect a connected graph")
    if g.n < 3:
        return None

    for v in range(g.n):
        deg = g.degree(v)
        if deg > 3:
            continue
        if deg == 1:
            w = g.neighbors(v)[0]
            seq = (w,)
            g2 = local_complement(g, w)
            others = [u for u in g2.neighbors(w) if u != v]
            cands = [(v, w, u) for u in others]
        elif deg == 2:
            w, u = g.neighbors(v)
            if g.has_edge(w, u):
                seq, g2 = (), g
            else:
                seq, g2 = (v,), local_complement(g, v)
            cands = [(v, w, u)]
        else:  # degree 3
            nbrs = list(g.neighbors(v))
            inner = sum(
                1 for x, y in itertools.combinations(nbrs, 2) if g.has_edge(x, y)
            )
            if inner <= 1:
                seq, g2 = (v,), local_complement(g, v)
            else:
                seq, g2 = (), g
            cands = [(v, x, y) for x, y in itertools.combinations(nbrs, 2)]
        hit = _triangle_match_on(g2, cands)
        if hit is not None:
            return RuleMatch("degree<=3", v, deg, seq, hit[0], hit[1])

    for v in range(g.n):
        if g.degree(v) != 4:
            continue
        nbrs = list(g.neighbors(v))
        if is_path4(g, nbrs):
            continue
        for seq in ((), (v,)):
            g2 = g
            for s in seq:
                g2 = local_complement(g2, s)
            cands = [(v, x, y) for x, y in itertools.combinations(nbrs, 2)]
            hit = _triangle_match_on(g2, cands)
            if hit is not None:
                return RuleMatch("degree4-not-path", v, 4, seq, hit[0], hit[1])
    return None


@dataclass(frozen=True)
class NoGoCertificate:
    """Proof that the graph state cannot come from bipartite sources.

    All vertex references are local to ``component`` (a sorted vertex list
    of the input graph; the identity for connected inputs).
    ``lc_sequence`` reaches the orbit member where the matched condition
    holds; ``witness_lc_sequence`` extends it by the constructive steps of
    a degree rule and ends at the graph the witness is built on.
    """

    input_graph: Graph
    component: tuple[int, ...]
    lc_sequence: tuple[int, ...]
    matched: str                         # "degree<=3" | "degree4-not-path" | "theorem3"
    vertex: int | None
    degree: int | None
    triangle: tuple[int, int, int]
    case: int
    witness_lc_sequence: tuple[int, ...]
    witness_graph: Graph
    witness: Witness

    def to_json_dict(self) -> dict:
        return {
            "input": self.input_graph.to_json_dict(),
            "component": list(self.component),
            "lc_sequence": list(self.lc_sequence),
            "matched": self.matched,
            "vertex": self.vertex,
            "degree": self.degree,
            "triangle": list(self.triangle),
            "case": self.case,
            "witness_lc_sequence": list(self.witness_lc_sequence),
            "witness_graph": self.witness_graph.to_json_dict(),
            "witness": self.witness.to_json_dict(),
        }


def replay_certificate(cert: NoGoCertificate, g: Graph) -> bool:
    """Re-run the matched check after applying the stored LC sequence."""
    member = g.induced(list(cert.component))
    for v in cert.lc_sequence:
        member = local_complement(member, v)
    if cert.matched == "degree<=3":
        if member.degree(cert.vertex) > 3:
            return False
    elif cert.matched == "degree4-not-path":
        if member.degree(cert.vertex) != 4 or is_path4(member, member.neighbors(cert.vertex)):
            return False
    final = g.induced(list(cert.component))
    for v in cert.witness_lc_sequence:
        final = local_complement(final, v)
    if final != cert.witness_graph:
        return False
    td = triangle_decomposition(final, *cert.triangle)
    return _CASE_SETS[cert.case](td)


@dataclass(frozen=True)
class ScanResult:
    certificate: NoGoCertificate | None
    explored: int
    exhausted: bool      # whole labelled orbit visited without a match


def _certificate_at(
    g: Graph, component: tuple[int, ...], member: Graph, path: tuple[int, ...]
) -> NoGoCertificate | None:
    rule = degree_rules_check(member)
    if rule is not None:
        final = member
        for v in rule.lc_sequence:
            final = local_complement(final, v)
        td = triangle_decomposition(final, *rule.triangle)
        w = theorem3_witness(final, td, rule.case)
        return NoGoCertificate(
            input_graph=g,
            component=component,
            lc_sequence=path,
            matched=rule.rule,
            vertex=rule.vertex,
            degree=rule.degree,
            triangle=rule.triangle,
            case=rule.case,
            witness_lc_sequence=path + rule.lc_sequence,
            witness_graph=final,
            witness=w,
        )
    hit = theorem3_check(member)
    if hit is not None:
        tri, case = hit
        td = triangle_decomposition(member, *tri)
        w = theorem3_witness(member, td, case)
        return NoGoCertificate(
            input_graph=g,
            component=component,
            lc_sequence=path,
            matched="theorem3",
            vertex=None,
            degree=None,
            triangle=tri,
            case=case,
            witness_lc_sequence=path,
            witness_graph=member,
            witness=w,
        )
    return None


def observation1_scan(g: Graph, orbit_cap: int = 100_000) -> ScanResult:
    """Breadth-first search of the labelled LC orbit for a no-go match.

    Components of size <= 2 are trivially preparable and skipped; a
    certificate for any larger component rules out the whole graph state.
    """
    comps = [c for c in g.connected_components() if len(c) >= 3]
    if not comps:
        return ScanResult(None, 0, True)
    explored_total, exhausted_all = 0, True
    for comp in comps:
        sub = g.induced(comp)
        seen = {sub.adj}
        queue = deque([(sub, ())])
        truncated = False
        while queue:
            member, path = queue.popleft()
            explored_total += 1
            cert = _certificate_at(g, tuple(comp), member, path)
            if cert is not None:
                return ScanResult(cert, explored_total, False)
            for v in range(member.n):
                if member.degree(v) < 2:
                    continue
                nxt = local_complement(member, v)
                if nxt.adj not in seen:
                    if len(seen) >= orbit_cap:
                        truncated = True
                        continue
                    seen.add(nxt.adj)
                    queue.append((nxt, path + (v,)))
        exhausted_all &= not truncated
    return ScanResult(None, explored_total, exhausted_all)
