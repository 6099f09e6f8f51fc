"""Anticommutation-based network witnesses.

A witness is a list of terms whose squares are summed against the bound 1.
Each term carries proof data: a lifted observable living on the node copies
of an inflation, such that (i) the lifted observables pairwise anticommute
and (ii) every base observable acts on a marginal that provably equals the
corresponding inflation marginal.  Chained terms lower-bound the expectation
of a product of commuting dichotomic observables by the sum of the factors'
expectations; the clamp at zero keeps only the branch where the bound is
informative.  Validation re-derives all of this instead of trusting the
constructors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from . import pauli as pl
from .graphs import Graph, TriangleDecomposition
from .network import (
    Inflation,
    Network,
    NodeCopy,
    all_but_one_network,
    chain_inflation,
    complete_network,
    consecutive_triples_network,
    custom_inflation,
    doubling_inflation,
    patterns_equal,
    square_network,
    standard_inflations,
    triangle_network,
    trivial_inflation,
)
from .pauli import PauliString, multiply, parse
from .states import DenseState, expectation, white_noise

VIOLATION_SLACK = 1e-9


class WitnessError(ValueError):
    """Invalid witness construction or proof data."""


# -- terms -------------------------------------------------------------------

@dataclass(frozen=True)
class Direct:
    observable: PauliString


@dataclass(frozen=True)
class Chained:
    observables: tuple[PauliString, ...]

    def __post_init__(self):
        if len(self.observables) < 2:
            raise WitnessError("chained terms need >= 2 link observables")


WitnessTerm = Direct | Chained


@dataclass(frozen=True)
class ChainProof:
    """Lifted chain data: commuting dichotomic links whose product is the
    target observable estimated by the chain."""

    inflation: str
    links: tuple[PauliString, ...]
    target: PauliString


@dataclass(frozen=True)
class Witness:
    name: str
    base: Network
    terms: tuple[WitnessTerm, ...]
    inflations: dict[str, Inflation] = field(hash=False)
    anticommuting_in: str
    lifted: tuple[PauliString, ...]
    chain_proofs: dict[int, ChainProof] = field(hash=False)

    @property
    def n(self) -> int:
        return len(self.base.nodes)

    def to_json_dict(self) -> dict:
        terms = []
        for t in self.terms:
            if isinstance(t, Direct):
                terms.append({"kind": "direct", "observable": str(t.observable)})
            else:
                terms.append({"kind": "chained", "observables": [str(o) for o in t.observables]})
        return {
            "name": self.name,
            "network": self.base.to_json_dict(),
            "terms": terms,
            "inflations": {k: v.to_json_dict() for k, v in self.inflations.items()},
            "anticommuting_in": self.anticommuting_in,
            "lifted": [str(p) for p in self.lifted],
            "chain_proofs": {
                str(i): {
                    "inflation": cp.inflation,
                    "links": [str(p) for p in cp.links],
                    "target": str(cp.target),
                }
                for i, cp in self.chain_proofs.items()
            },
        }

    @staticmethod
    def from_json_dict(d: dict) -> "Witness":
        terms = []
        for t in d["terms"]:
            if t["kind"] == "direct":
                terms.append(Direct(parse(t["observable"])))
            else:
                terms.append(Chained(tuple(parse(o) for o in t["observables"])))
        w = Witness(
            name=d["name"],
            base=Network.from_json_dict(d["network"]),
            terms=tuple(terms),
            inflations={k: Inflation.from_json_dict(v) for k, v in d["inflations"].items()},
            anticommuting_in=d["anticommuting_in"],
            lifted=tuple(parse(p) for p in d["lifted"]),
            chain_proofs={
                int(i): ChainProof(
                    cp["inflation"],
                    tuple(parse(p) for p in cp["links"]),
                    parse(cp["target"]),
                )
                for i, cp in d["chain_proofs"].items()
            },
        )
        validate_witness(w)
        return w


# -- lifting helpers ------------------------------------------------------------

def lift_letters(infl: Inflation, letters: dict[NodeCopy, str], sign: int = 1) -> PauliString:
    """Pauli string over the inflation registers from a node-copy letter map."""
    regs = infl.registers()
    idx = {nc: i for i, nc in enumerate(regs)}
    return PauliString.from_letters(len(regs), {idx[nc]: L for nc, L in letters.items()}, sign)


def _letters_of(p: PauliString, regs: list) -> dict:
    return {regs[j]: p.letter(j) for j in p.support}


def _base_letter_map(obs: PauliString, base: Network) -> dict[NodeCopy, str]:
    return {(base.nodes[j], 0): obs.letter(j) for j in obs.support}


def _lift_matches_base(infl: Inflation, lifted: PauliString, obs: PauliString) -> bool:
    """The lifted observable acts on node copies whose marginal equals the
    base marginal carrying the observable, with matching letters."""
    base = infl.base
    if obs.n != len(base.nodes):
        return False
    la = _letters_of(lifted, infl.registers())
    triv = trivial_inflation(base)
    lb = _base_letter_map(obs, base)
    return patterns_equal(infl, list(la), triv, list(lb), la, lb)


def _lifts_pattern_equal(
    infl_a: Inflation, pa: PauliString, infl_b: Inflation, pb: PauliString
) -> bool:
    la = _letters_of(pa, infl_a.registers())
    lb = _letters_of(pb, infl_b.registers())
    return patterns_equal(infl_a, list(la), infl_b, list(lb), la, lb)


def validate_witness(w: Witness) -> None:
    """Re-derive every proof obligation; raises WitnessError on failure.

    Successful validation is cached on the instance, so repeated
    evaluation of the same witness pays the proof check once.
    """
    if getattr(w, "_validated", False):
        return
    _validate_witness_impl(w)
    object.__setattr__(w, "_validated", True)


def _validate_witness_impl(w: Witness) -> None:
    if len(w.terms) != len(w.lifted):
        raise WitnessError("one lifted observable per term required")
    if w.anticommuting_in not in w.inflations:
        raise WitnessError(f"unknown inflation {w.anticommuting_in!r}")
    phi = w.inflations[w.anticommuting_in]
    width = len(phi.registers())
    for p in w.lifted:
        if p.n != width:
            raise WitnessError("lifted observable width != register count")
    if not pl.pairwise_anticommuting(list(w.lifted)):
        raise WitnessError("lifted observables do not pairwise anticommute")

    for i, (term, lifted) in enumerate(zip(w.terms, w.lifted)):
        if isinstance(term, Direct):
            if not term.observable.is_hermitian:
                raise WitnessError(f"term {i}: observable is not hermitian")
            if not _lift_matches_base(phi, lifted, term.observable):
                raise WitnessError(
                    f"term {i}: lifted observable does not match a base marginal"
                )
        else:
            if i not in w.chain_proofs:
                raise WitnessError(f"term {i}: chained term without chain proof")
            cp = w.chain_proofs[i]
            if cp.inflation not in w.inflations:
                raise WitnessError(f"term {i}: unknown chain inflation {cp.inflation!r}")
            psi = w.inflations[cp.inflation]
            if len(cp.links) != len(term.observables):
                raise WitnessError(f"term {i}: chain proof link count mismatch")
            for link in cp.links:
                if not link.is_hermitian:
                    raise WitnessError(f"term {i}: chain link not hermitian")
            for k1, k2 in itertools.combinations(cp.links, 2):
                if not pl.commutes(k1, k2):
                    raise WitnessError(f"term {i}: chain links must commute")
            prod = reduce(multiply, cp.links)
            if (prod.x, prod.z) != (cp.target.x, cp.target.z) or (prod.e - cp.target.e) % 2:
                raise WitnessError(f"term {i}: chain links do not multiply to the target")
            for obs, link in zip(term.observables, cp.links):
                if not obs.is_hermitian:
                    raise WitnessError(f"term {i}: chain observable not hermitian")
                if not _lift_matches_base(psi, link, obs):
                    raise WitnessError(
                        f"term {i}: chain link does not match its base marginal"
                    )
            if not _lifts_pattern_equal(psi, cp.target, phi, lifted):
                raise WitnessError(
                    f"term {i}: chain target and lifted observable live on "
                    "marginals that are not provably equal"
                )


# -- evaluation -------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessReport:
    witness: str
    term_values: tuple[float, ...]
    clamped_values: tuple[float, ...]
    lhs: float
    bound: float
    violated: bool
    slack: float
    detail: tuple[dict, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "witness": self.witness,
            "term_values": list(self.term_values),
            "clamped_values": list(self.clamped_values),
            "lhs": self.lhs,
            "bound": self.bound,
            "violated": self.violated,
            "slack": self.slack,
            "terms": [dict(d) for d in self.detail],
        }


def evaluate(w: Witness, s: DenseState) -> WitnessReport:
    """Evaluate every term on the state and compare against the bound 1."""
    validate_witness(w)
    if s.num_parties != w.n:
        raise WitnessError(f"state has {s.num_parties} parties, witness expects {w.n}")
    values, clamped, detail = [], [], []
    for term in w.terms:
        if isinstance(term, Direct):
            v = expectation(s, term.observable)
            values.append(v)
            clamped.append(v)
            detail.append({"kind": "direct", "observable": str(term.observable), "value": v})
        else:
            link_vals = [expectation(s, o) for o in term.observables]
            raw = sum(link_vals) - (len(link_vals) - 1)
            val = max(0.0, raw)
            values.append(raw)
            clamped.append(val)
            detail.append({
                "kind": "chained",
                "observables": [str(o) for o in term.observables],
                "link_values": link_vals,
                "raw": raw,
                "clamped": val,
            })
    lhs = float(sum(v * v for v in clamped))
    return WitnessReport(
        witness=w.name,
        term_values=tuple(values),
        clamped_values=tuple(clamped),
        lhs=lhs,
        bound=1.0,
        violated=lhs > 1.0 + VIOLATION_SLACK,
        slack=lhs - 1.0,
        detail=tuple(detail),
    )


# -- named witnesses ------------------------------------------------------------------

def ghz_triangle_witness(
    x_observable: str = "XXX", chain: tuple[str, str] = ("ZZ1", "1ZZ")
) -> Witness:
    """The triangle witness <M>^2 + (<L1> + <L2> - 1)^2 <= 1.

    The two chain links must be two-party observables overlapping in a
    single middle party; the crossed two-copy inflation used for the chain
    target swaps the source between the two outer parties.
    """
    base = triangle_network()
    xobs = parse(x_observable)
    l1, l2 = parse(chain[0]), parse(chain[1])
    if xobs.n != 3 or l1.n != 3 or l2.n != 3:
        raise WitnessError("triangle witness observables act on 3 parties")
    if len(l1.support) != 2 or len(l2.support) != 2:
        raise WitnessError("chain links must each act on exactly two parties")
    mid = set(l1.support) & set(l2.support)
    if len(mid) != 1:
        raise WitnessError("chain links must overlap in exactly one party")
    target = multiply(l1, l2)
    outer = sorted(target.support)
    u, v = base.nodes[outer[0]], base.nodes[outer[1]]

    tau = doubling_inflation(base)
    swap = next(s.id for s in base.sources if set(s.parties) == {u, v})
    gamma = standard_inflations(base, "gamma", swap_source=swap)

    lift_x = lift_letters(tau, _base_letter_map(xobs, base))
    target_letters = {(base.nodes[j], 0): target.letter(j) for j in target.support}
    lift_target_tau = lift_letters(
        tau, {(u, 1): target.letter(outer[0]), (v, 0): target.letter(outer[1])}
    )
    w = Witness(
        name=f"ghz-triangle[{x_observable};{chain[0]},{chain[1]}]",
        base=base,
        terms=(Direct(xobs), Chained((l1, l2))),
        inflations={"tau": tau, "gamma": gamma},
        anticommuting_in="tau",
        lifted=(lift_x, lift_target_tau),
        chain_proofs={
            1: ChainProof(
                inflation="gamma",
                links=(
                    lift_letters(gamma, _base_letter_map(l1, base)),
                    lift_letters(gamma, _base_letter_map(l2, base)),
                ),
                target=lift_letters(gamma, target_letters),
            )
        },
    )
    validate_witness(w)
    return w


def _square_xi_inflation(base: Network) -> Inflation:
    """Three-copy inflation of the square with the B-C source crossed so
    that {B',C,D}, {A,B,D} and {B'',D} all look like base marginals."""
    wiring = {}
    for s in base.sources:
        for c in range(3):
            wiring[(s.id, c)] = tuple((p, c) for p in s.parties)
    sbc = next(s for s in base.sources if set(s.parties) == {"B", "C"})
    b_role = sbc.parties.index("B")
    perm = {0: (1, 0), 1: (0, 1), 2: (2, 2)}  # copy -> (B copy, C copy)
    for c, (bc, cc) in perm.items():
        eps = [None, None]
        eps[b_role] = ("B", bc)
        eps[1 - b_role] = ("C", cc)
        wiring[(sbc.id, c)] = tuple(eps)
    return custom_inflation(base, 3, wiring)


def cluster_square_witness(kind: str = "xi") -> Witness:
    """Square-network witnesses for the ring cluster state.

    kind="xi": three direct terms <X_B X_D>, <Z_B X_C Z_D>, <X_A Y_B Y_D>
    proved through a third-order inflation.  kind="tau": the two-term
    variant <X_A X_C>^2 + <Y_A Y_B Z_C Z_D>^2 <= 1 from plain doubling.
    """
    base = square_network()
    if kind == "xi":
        xi = _square_xi_inflation(base)
        t1, t2, t3 = parse("1X1X"), parse("1ZXZ"), parse("XY1Y")
        lifted = (
            lift_letters(xi, {("B", 2): "X", ("D", 0): "X"}),
            lift_letters(xi, {("B", 1): "Z", ("C", 0): "X", ("D", 0): "Z"}),
            lift_letters(xi, {("A", 0): "X", ("B", 0): "Y", ("D", 0): "Y"}),
        )
        w = Witness(
            name="cluster-square[xi]",
            base=base,
            terms=(Direct(t1), Direct(t2), Direct(t3)),
            inflations={"xi": xi},
            anticommuting_in="xi",
            lifted=lifted,
            chain_proofs={},
        )
    elif kind == "tau":
        tau = doubling_inflation(base)
        t1, t2 = parse("X1X1"), parse("YYZZ")
        lifted = (
            lift_letters(tau, {("A", 0): "X", ("C", 1): "X"}),
            lift_letters(tau, {("A", 0): "Y", ("B", 0): "Y", ("C", 0): "Z", ("D", 0): "Z"}),
        )
        w = Witness(
            name="cluster-square[tau]",
            base=base,
            terms=(Direct(t1), Direct(t2)),
            inflations={"tau": tau},
            anticommuting_in="tau",
            lifted=lifted,
            chain_proofs={},
        )
    else:
        raise WitnessError(f"unknown cluster witness kind {kind!r}")
    validate_witness(w)
    return w


def _graph_generator(g: Graph, v: int) -> PauliString:
    letters = {v: "X"}
    letters.update({u: "Z" for u in g.neighbors(v)})
    return PauliString.from_letters(g.n, letters)


def theorem3_witness(g: Graph, td: TriangleDecomposition, case: int) -> Witness:
    """Graph-state witness from a triangle whose neighbourhood sets satisfy
    one of the three emptiness conditions.

    case 1 (J_AB = J_BC = empty): partner g_B; case 2 (E_A = E_C = empty):
    partner g_A g_B g_C; case 3 (E_A = J_AB = empty): partner g_A.  The
    chain runs through the crossed doubling of the complete network, the
    anticommuting pair through the rewiring that moves every source between
    R = E_A u E_C u J_AB u J_BC and A across the copies.
    """
    a, b, c = td.triangle
    if case == 1:
        ok = not td.j_ab and not td.j_bc
        partner = _graph_generator(g, b)
    elif case == 2:
        ok = not td.e_a and not td.e_c
        partner = reduce(multiply, [_graph_generator(g, v) for v in (a, b, c)])
    elif case == 3:
        ok = not td.e_a and not td.j_ab
        partner = _graph_generator(g, a)
    else:
        raise WitnessError(f"case must be 1, 2 or 3, got {case}")
    if not ok:
        raise WitnessError(f"triangle sets do not satisfy the case-{case} condition")

    nodes = tuple(str(i) for i in range(g.n))
    base = complete_network(nodes)
    ga, gb, gc = (_graph_generator(g, v) for v in (a, b, c))
    o_ab, o_bc, o_ac = multiply(ga, gb), multiply(gb, gc), multiply(ga, gc)

    swap = next(s.id for s in base.sources if set(s.parties) == {nodes[a], nodes[c]})
    gamma = standard_inflations(base, "gamma", swap_source=swap)

    rset = {nodes[r] for r in td.r_ac}
    wiring = {}
    for s in base.sources:
        rewire = nodes[a] in s.parties and (set(s.parties) - {nodes[a]}) <= rset
        for cc in (0, 1):
            if rewire:
                eps = tuple(
                    (p, 1 - cc) if p == nodes[a] else (p, cc) for p in s.parties
                )
            else:
                eps = tuple((p, cc) for p in s.parties)
            wiring[(s.id, cc)] = eps
    eta = custom_inflation(base, 2, wiring)

    target_letters_eta = {(nodes[j], 1 if j == a else 0): o_ac.letter(j) for j in o_ac.support}
    w = Witness(
        name=f"theorem3[case{case};triangle={td.triangle}]",
        base=base,
        terms=(Chained((o_ab, o_bc)), Direct(partner)),
        inflations={"gamma": gamma, "eta": eta},
        anticommuting_in="eta",
        lifted=(
            lift_letters(eta, target_letters_eta),
            lift_letters(eta, _base_letter_map(partner, base), 1),
        ),
        chain_proofs={
            0: ChainProof(
                inflation="gamma",
                links=(
                    lift_letters(gamma, _base_letter_map(o_ab, base)),
                    lift_letters(gamma, _base_letter_map(o_bc, base)),
                ),
                target=lift_letters(gamma, _base_letter_map(o_ac, base)),
            )
        },
    )
    validate_witness(w)
    return w


def _hexagon_xi_inflation(base: Network) -> Inflation:
    """Third-order inflation of the consecutive-triples hexagon aligning
    {A,B,D}, {A,E',D''} and {A,D''} with base marginals."""
    ident = {"t_ABC", "t_BCD", "t_FAB"}
    role_maps = {
        # source -> per-role copy image for instances 0,1,2
        "t_CDE": {"C": (0, 1, 2), "D": (2, 0, 1), "E": (1, 0, 2)},
        "t_DEF": {"D": (2, 0, 1), "E": (1, 0, 2), "F": (0, 1, 2)},
        "t_EFA": {"E": (1, 0, 2), "F": (0, 1, 2), "A": (0, 1, 2)},
    }
    wiring = {}
    for s in base.sources:
        for c in range(3):
            if s.id in ident:
                eps = tuple((p, c) for p in s.parties)
            else:
                eps = tuple((p, role_maps[s.id][p][c]) for p in s.parties)
            wiring[(s.id, c)] = eps
    return custom_inflation(base, 3, wiring)


def tripartite_demo_witnesses() -> list[Witness]:
    """The two demo witnesses for networks with tripartite sources.

    (i) four nodes, four three-party sources: a four-link chain around the
    square against <X_A Z_B Z_C Z_D>.  (ii) six nodes on a hexagon with
    consecutive-triple sources: three direct terms through a third-order
    inflation.
    """
    out = []

    base4 = all_but_one_network(("A", "B", "C", "D"))
    tau4 = doubling_inflation(base4)
    eta4 = chain_inflation(base4)
    links = tuple(parse(t) for t in ("YY11", "1YY1", "11YY", "Y11Y"))
    xterm = parse("XZZZ")
    lifted_links = (
        lift_letters(eta4, {("A", 0): "Y", ("B", 0): "Y"}),
        lift_letters(eta4, {("B", 0): "Y", ("C", 0): "Y"}),
        lift_letters(eta4, {("C", 0): "Y", ("D", 0): "Y"}),
        lift_letters(eta4, {("D", 0): "Y", ("A", 1): "Y"}),
    )
    w1 = Witness(
        name="tripartite-square",
        base=base4,
        terms=(Chained(links), Direct(xterm)),
        inflations={"tau": tau4, "eta": eta4},
        anticommuting_in="tau",
        lifted=(
            lift_letters(tau4, {("A", 0): "Y", ("A", 1): "Y"}),
            lift_letters(tau4, _base_letter_map(xterm, base4)),
        ),
        chain_proofs={
            0: ChainProof(
                inflation="eta",
                links=lifted_links,
                target=lift_letters(eta4, {("A", 0): "Y", ("A", 1): "Y"}),
            )
        },
    )
    validate_witness(w1)
    out.append(w1)

    base6 = consecutive_triples_network(("A", "B", "C", "D", "E", "F"))
    xi = _hexagon_xi_inflation(base6)
    t1, t2, t3 = parse("X11X11"), parse("ZX1Z11"), parse("Y11XY1")
    w2 = Witness(
        name="tripartite-hexagon",
        base=base6,
        terms=(Direct(t1), Direct(t2), Direct(t3)),
        inflations={"xi": xi},
        anticommuting_in="xi",
        lifted=(
            lift_letters(xi, {("A", 0): "X", ("D", 2): "X"}),
            lift_letters(xi, {("A", 0): "Z", ("B", 0): "X", ("D", 0): "Z"}),
            lift_letters(xi, {("A", 0): "Y", ("E", 1): "Y", ("D", 2): "X"}),
        ),
        chain_proofs={},
    )
    validate_witness(w2)
    out.append(w2)
    return out


# -- link certification ------------------------------------------------------------

def link_certification(
    s: DenseState, a: int, c: int, paulis: tuple[PauliString, PauliString, PauliString]
) -> WitnessReport:
    """Evaluate <X_a X_c P_1>^2 + <Y_a Y_c P_2>^2 + <Z_a Z_c P_3>^2.

    The P_i must be hermitian, supported on pairwise disjoint subsets not
    containing a or c.  Violation of the bound 1 certifies that the link
    between a and c distributes entanglement.
    """
    n = s.num_parties
    if a == c or not (0 <= a < n and 0 <= c < n):
        raise WitnessError(f"bad link ({a},{c}) for {n} parties")
    supports = []
    for p in paulis:
        if p.n != n:
            raise WitnessError("P observables must act on all parties")
        if not p.is_hermitian:
            raise WitnessError(f"{p} is not hermitian")
        supp = set(p.support)
        if a in supp or c in supp:
            raise WitnessError("P observables must avoid the linked parties")
        supports.append(supp)
    for s1, s2 in itertools.combinations(supports, 2):
        if s1 & s2:
            raise WitnessError("P observables must live on disjoint subsets")
    values, detail = [], []
    for letter, p in zip("XYZ", paulis):
        obs = multiply(PauliString.from_letters(n, {a: letter, c: letter}), p)
        v = expectation(s, obs)
        values.append(v)
        detail.append({"kind": "direct", "observable": str(obs), "value": v})
    lhs = float(sum(v * v for v in values))
    return WitnessReport(
        witness=f"link[{a},{c}]",
        term_values=tuple(values),
        clamped_values=tuple(values),
        lhs=lhs,
        bound=1.0,
        violated=lhs > 1.0 + VIOLATION_SLACK,
        slack=lhs - 1.0,
        detail=tuple(detail),
    )


def _pauli_coefficients(m: np.ndarray, k: int) -> np.ndarray:
    """Tr(P m) for every k-qubit Pauli string P, base-4 encoded with the
    qubit-0 letter in the most significant digit (digits 1, X, Y, Z)."""
    if k == 1:
        return np.array([m[0, 0] + m[1, 1], m[0, 1] + m[1, 0],
                         1j * m[0, 1] - 1j * m[1, 0], m[0, 0] - m[1, 1]])
    d = 2 ** (k - 1)
    m00, m01 = m[:d, :d], m[:d, d:]
    m10, m11 = m[d:, :d], m[d:, d:]
    blocks = [m00 + m11, m01 + m10, 1j * m01 - 1j * m10, m00 - m11]
    return np.concatenate([_pauli_coefficients(b, k - 1) for b in blocks])


def _string_support(code: int, k: int) -> int:
    """Bit mask of non-identity letters of a base-4 encoded string."""
    mask = 0
    for j in range(k):
        if (code >> (2 * (k - 1 - j))) & 3:
            mask |= 1 << j
    return mask


def _search_tables(s: DenseState, a: int, c: int, rest: list[int]) -> dict[str, np.ndarray]:
    """Coefficient tables Tr((t_a t_c ⊗ P) rho) over all P on `rest`."""
    n = s.num_parties
    k = len(rest)
    rho = s.density().reshape(s.dims + s.dims)
    # axis ids: row index of qubit q is q, column index is n + q
    tables = {}
    for letter in "XYZ":
        single = parse(letter).to_matrix()
        pair = np.kron(single, single).reshape(2, 2, 2, 2)
        out_subs = rest + [n + q for q in rest]
        contracted = np.einsum(
            rho, list(range(2 * n)), pair, [n + a, n + c, a, c], out_subs
        )
        dim = 2 ** k
        tables[letter] = _pauli_coefficients(contracted.reshape(dim, dim), k).real
    return tables


def link_certification_search(
    s: DenseState, a: int, c: int, partition=None
) -> WitnessReport:
    """Maximize the link-certification lhs over the free observables.

    Searches all Pauli strings on each subset; when no tri-partition of the
    remaining parties is given, also optimizes the partition.  Capped at 8
    remaining parties.
    """
    n = s.num_parties
    rest = [q for q in range(n) if q not in (a, c)]
    k = len(rest)
    if k > 8:
        raise WitnessError("search supports at most 8 remaining parties")
    if k == 0:
        ident = (PauliString.identity(n),) * 3
        return link_certification(s, a, c, ident)
    tables = _search_tables(s, a, c, rest)

    masks = None
    if partition is not None:
        parts = [list(p) for p in partition]
        flat = [q for p in parts for q in p]
        if len(parts) != 3 or sorted(flat) != sorted(set(flat)) or any(q not in rest for q in flat):
            raise WitnessError("partition must split the remaining parties into three disjoint groups")
        masks = [sum(1 << rest.index(q) for q in p) for p in parts]

    _, choices = _optimize_assignment(tables, k, masks)
    paulis = []
    for code in choices:
        letters = {}
        for j, q in enumerate(rest):
            letter = "1XYZ"[(code >> (2 * (k - 1 - j))) & 3]
            if letter != "1":
                letters[q] = letter
        paulis.append(PauliString.from_letters(n, letters))
    return link_certification(s, a, c, tuple(paulis))


def _optimize_assignment(tables, k: int, masks):
    """Best (X,Y,Z) strings under disjoint-support constraints."""
    supports = np.array([_string_support(code, k) for code in range(4 ** k)])
    best_per_support = {}
    for letter in "XYZ":
        vals = tables[letter] ** 2
        per = np.full(1 << k, -1.0)
        arg = np.zeros(1 << k, dtype=np.int64)
        for code in range(4 ** k):
            sm = supports[code]
            if vals[code] > per[sm]:
                per[sm] = vals[code]
                arg[sm] = code
        # superset closure: best over subsets of each mask
        for j in range(k):
            bit = 1 << j
            for m in range(1 << k):
                if m & bit and per[m ^ bit] > per[m]:
                    per[m] = per[m ^ bit]
                    arg[m] = arg[m ^ bit]
        best_per_support[letter] = (per, arg)

    px, ax = best_per_support["X"]
    py, ay = best_per_support["Y"]
    pz, az = best_per_support["Z"]
    full = (1 << k) - 1
    if masks is not None:
        mx, my, mz = masks
        return (px[mx] + py[my] + pz[mz]), (ax[mx], ay[my], az[mz])
    best, choice = -1.0, (0, 0, 0)
    for m1 in range(1 << k):
        rest_mask = full ^ m1
        m2 = rest_mask
        while True:
            m3 = rest_mask ^ m2
            tot = px[m1] + py[m2] + pz[m3]
            if tot > best:
                best = tot
                choice = (ax[m1], ay[m2], az[m3])
            if m2 == 0:
                break
            m2 = (m2 - 1) & rest_mask
    return best, choice


# -- thresholds ----------------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdResult:
    threshold: float
    found: bool
    lhs_at_one: float


def white_noise_threshold(
    w: Witness, pure: DenseState, tol: float = 1e-9
) -> ThresholdResult:
    """Least mixing p at which the witness flips to violated, by bisection.

    Returns threshold 1.0 with found=False when even the pure state does
    not violate.
    """
    def violated(p: float) -> bool:
        return evaluate(w, white_noise(pure, p)).violated

    lhs_one = evaluate(w, white_noise(pure, 1.0)).lhs
    if not violated(1.0):
        return ThresholdResult(1.0, False, lhs_one)
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if violated(mid):
            hi = mid
        else:
            lo = mid
    return ThresholdResult(hi, True, lhs_one)


def closed_form_threshold(w: Witness) -> float:
    """Threshold assuming every observable has expectation p on the noisy
    state: direct terms contribute p^2, k-link chains (kp - k + 1)^2."""
    def lhs(p: float) -> float:
        total = 0.0
        for term in w.terms:
            if isinstance(term, Direct):
                total += p * p
            else:
                klinks = len(term.observables)
                total += max(0.0, klinks * p - (klinks - 1)) ** 2
        return total

    lo, hi = 0.0, 1.0
    if lhs(1.0) <= 1.0:
        return 1.0
    while hi - lo > 1e-12:
        mid = (lo + hi) / 2
        if lhs(mid) > 1.0:
            hi = mid
        else:
            lo = mid
    return hi
