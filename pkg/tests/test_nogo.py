import numpy as np
import pytest

from netsym.graphs import Graph, enumerate_graphs, local_complement, parse_graph6
from netsym.nogo import (
    NoGoError,
    degree_rules_check,
    observation1_scan,
    replay_certificate,
    theorem3_check,
)
from netsym.states import graph_state
from netsym.witness import evaluate

K3 = parse_graph6("Bw")
C4 = parse_graph6("Cl")
K4 = Graph.from_edges(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])


def circulant(n, jumps):
    edges = set()
    for i in range(n):
        for j in jumps:
            edges.add(tuple(sorted((i, (i + j) % n))))
    return Graph.from_edges(n, sorted(edges))


def test_theorem3_check_k3():
    hit = theorem3_check(K3)
    assert hit is not None and hit[1] in (1, 2, 3)


def test_theorem3_check_k4():
    assert theorem3_check(K4) is not None


def test_theorem3_check_triangle_free():
    assert theorem3_check(C4) is None


def test_degree_rule_c4():
    m = degree_rules_check(C4)
    assert m is not None and m.rule == "degree<=3" and m.degree == 2


def test_degree_rule_wheel():
    wheel = Graph.from_edges(
        5, [(0, i) for i in range(1, 5)] + [(1, 2), (2, 3), (3, 4), (4, 1)]
    )
    m = degree_rules_check(wheel)
    assert m is not None and m.degree <= 3


def test_degree_rule_k5_via_degree4():
    k5 = Graph.from_edges(5, [(i, j) for i in range(5) for j in range(i + 1, 5)])
    m = degree_rules_check(k5)
    assert m is not None and m.rule == "degree4-not-path"


def test_degree_rule_silent_on_p4_neighbourhoods():
    # every vertex of C8(1,2) has degree 4 with a path neighbourhood, so
    # neither corollary rule fires on the graph itself
    g = circulant(8, (1, 2))
    assert all(g.degree(v) == 4 for v in range(8))
    assert degree_rules_check(g) is None


def test_degree_rule_needs_connected():
    dis = Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(NoGoError):
        degree_rules_check(dis)


def test_scan_c4_empty_sequence():
    res = observation1_scan(C4)
    cert = res.certificate
    assert cert is not None
    assert cert.lc_sequence == ()
    assert cert.matched == "degree<=3"
    assert replay_certificate(cert, C4)


def test_scan_circulant_needs_orbit_walk():
    g = circulant(7, (1, 2))
    assert degree_rules_check(g) is None and theorem3_check(g) is None
    res = observation1_scan(g)
    cert = res.certificate
    assert cert is not None and len(cert.lc_sequence) >= 1
    assert replay_certificate(cert, g)
    st = graph_state(cert.witness_graph)
    assert evaluate(cert.witness, st).lhs == pytest.approx(2.0, abs=1e-9)


def test_scan_grid_graph():
    # 3x3 grid: all degrees <= 4 with corner degree 2
    edges = []
    for r in range(3):
        for c in range(3):
            v = 3 * r + c
            if c < 2:
                edges.append((v, v + 1))
            if r < 2:
                edges.append((v, v + 3))
    grid = Graph.from_edges(9, edges)
    res = observation1_scan(grid)
    assert res.certificate is not None
    assert res.certificate.matched == "degree<=3"
    assert replay_certificate(res.certificate, grid)


def test_scan_disconnected_components():
    dis = Graph.from_edges(6, [(0, 1), (2, 3), (3, 4), (2, 4)])
    res = observation1_scan(dis)
    cert = res.certificate
    assert cert is not None and cert.component == (2, 3, 4)
    assert replay_certificate(cert, dis)


def test_scan_trivial_components_only():
    dis = Graph.from_edges(4, [(0, 1), (2, 3)])
    res = observation1_scan(dis)
    assert res.certificate is None and res.exhausted


def test_scan_cap_reported():
    g = circulant(7, (1, 2))
    res = observation1_scan(g, orbit_cap=1)
    # with the cap at one member nothing beyond the input is explored; the
    # input graph itself matches nothing, so the scan must not claim
    # exhaustion
    assert res.certificate is None and not res.exhausted


def test_degree_rule_agreement_with_scan():
    rng = np.random.default_rng(51)
    for _ in range(30):
        n = int(rng.integers(3, 8))
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5]
        g = Graph.from_edges(n, edges)
        if not g.is_connected():
            continue
        rule = degree_rules_check(g)
        if rule is None:
            continue
        res = observation1_scan(g)
        assert res.certificate is not None
        assert len(res.certificate.lc_sequence) <= 2


def test_exhaustive_small_graphs():
    for n in (3, 4, 5):
        for g in enumerate_graphs(n, connected=True):
            res = observation1_scan(g)
            assert res.certificate is not None, g.edges()
            assert replay_certificate(res.certificate, g)


def test_certificate_json():
    res = observation1_scan(C4)
    doc = res.certificate.to_json_dict()
    assert doc["matched"] == "degree<=3"
    assert doc["witness"]["terms"]
