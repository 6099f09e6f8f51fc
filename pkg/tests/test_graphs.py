import numpy as np
import pytest

from netsym.graphs import (
    Graph,
    GraphError,
    canonical_form,
    canonical_key,
    are_isomorphic,
    enumerate_graphs,
    format_graph6,
    is_path4,
    lc_orbit,
    local_complement,
    parse_graph6,
    triangle_decomposition,
)

K3 = parse_graph6("Bw")
C4 = parse_graph6("Cl")


def random_graph(n, rng, p=0.5):
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    return Graph.from_edges(n, edges)


# -- graph6 ---------------------------------------------------------------

def test_graph6_triangle():
    assert K3.edges() == [(0, 1), (0, 2), (1, 2)]
    assert format_graph6(K3) == "Bw"


def test_graph6_four_cycle():
    assert sorted(C4.edges()) == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert format_graph6(C4) == "Cl"


def test_graph6_single_vertex():
    g = parse_graph6("@")
    assert g.n == 1 and g.edges() == []


def test_graph6_header_and_errors():
    assert parse_graph6(">>graph6<<Bw") == K3
    with pytest.raises(GraphError):
        parse_graph6("B")          # truncated body
    with pytest.raises(GraphError):
        parse_graph6("")
    with pytest.raises(GraphError):
        parse_graph6("Bw\x19")     # invalid character


def test_graph6_roundtrip_random():
    rng = np.random.default_rng(5)
    for _ in range(100):
        g = random_graph(int(rng.integers(1, 21)), rng)
        assert parse_graph6(format_graph6(g)) == g


def test_graph6_long_form_n63():
    rng = np.random.default_rng(6)
    g = random_graph(63, rng, p=0.1)
    text = format_graph6(g)
    assert text.startswith(chr(126))
    assert parse_graph6(text) == g


# -- local complementation --------------------------------------------------

def test_lc_triangle():
    g = local_complement(K3, 0)
    assert sorted(g.edges()) == [(0, 1), (0, 2)]


def test_lc_involution_examples():
    assert local_complement(local_complement(K3, 1), 1) == K3


def test_lc_c4_adds_chord():
    g = local_complement(C4, 0)
    assert (1, 3) in g.edges()


def test_lc_involution_random():
    rng = np.random.default_rng(7)
    for _ in range(100):
        g = random_graph(int(rng.integers(2, 11)), rng)
        v = int(rng.integers(0, g.n))
        assert local_complement(local_complement(g, v), v) == g
        assert local_complement(g, v).n == g.n


def test_lc_out_of_range():
    with pytest.raises(GraphError):
        local_complement(K3, 3)


# -- orbits -------------------------------------------------------------------

def test_k3_orbit_is_triangle_and_path():
    orb = lc_orbit(K3)
    assert not orb.truncated
    keys = {canonical_key(h) for h in orb.graphs}
    p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert keys == {canonical_key(K3), canonical_key(p3)}


def test_single_edge_orbit():
    k2 = Graph.from_edges(2, [(0, 1)])
    assert len(lc_orbit(k2).graphs) == 1


def test_c4_orbit_contains_degree_one_vertex():
    orb = lc_orbit(C4)
    assert any(
        any(h.degree(v) == 1 for v in range(h.n)) for h in orb.graphs
    )


def test_orbit_truncation_flag():
    rng = np.random.default_rng(8)
    g = random_graph(8, rng, p=0.5)
    orb = lc_orbit(g, max_size=2)
    assert orb.truncated and len(orb.graphs) <= 3


# -- canonical forms ------------------------------------------------------------

def test_canonical_form_identifies_isomorphs():
    rng = np.random.default_rng(9)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        g = random_graph(n, rng)
        perm = list(rng.permutation(n))
        assert are_isomorphic(g, g.relabel(perm))


def test_canonical_form_separates_nonisomorphs():
    p4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert not are_isomorphic(p4, star)


# -- triangle decomposition -------------------------------------------------------

def test_k3_decomposition_empty():
    td = triangle_decomposition(K3, 0, 1, 2)
    assert not (td.t_abc | td.j_ab | td.j_ac | td.j_bc | td.e_a | td.e_b | td.e_c)


def test_k4_decomposition():
    k4 = Graph.from_edges(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    td = triangle_decomposition(k4, 0, 1, 2)
    assert td.t_abc == {3}
    assert not (td.j_ab | td.j_ac | td.j_bc | td.e_a | td.e_b | td.e_c)


def test_pendant_on_a():
    g = Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (0, 3)])
    td = triangle_decomposition(g, 0, 1, 2)
    assert td.e_a == {3}


def test_not_a_triangle_error():
    with pytest.raises(GraphError):
        triangle_decomposition(C4, 0, 1, 2)


def test_decomposition_partitions_neighbourhoods():
    rng = np.random.default_rng(10)
    found = 0
    while found < 40:
        g = random_graph(int(rng.integers(3, 10)), rng)
        tris = [
            (a, b, c)
            for a in range(g.n) for b in range(a + 1, g.n) for c in range(b + 1, g.n)
            if g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c)
        ]
        if not tris:
            continue
        a, b, c = tris[0]
        td = triangle_decomposition(g, a, b, c)
        sets = [td.t_abc, td.j_ab, td.j_ac, td.j_bc, td.e_a, td.e_b, td.e_c]
        union = set().union(*sets)
        nbhd = (set(g.neighbors(a)) | set(g.neighbors(b)) | set(g.neighbors(c))) - {a, b, c}
        assert union == nbhd
        assert sum(len(s) for s in sets) == len(union)
        found += 1


# -- path-4 ----------------------------------------------------------------------

def test_is_path4():
    p4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert is_path4(p4, [0, 1, 2, 3])
    assert not is_path4(C4, [0, 1, 2, 3])
    comp = Graph.from_edges(
        4, [(i, j) for i in range(4) for j in range(i + 1, 4) if not p4.has_edge(i, j)]
    )
    assert is_path4(comp, [0, 1, 2, 3])
    with pytest.raises(GraphError):
        is_path4(p4, [0, 1, 2])


# -- enumeration -------------------------------------------------------------------

def test_enumeration_counts():
    totals = {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156}
    connected = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112}
    for n, want in totals.items():
        gs = enumerate_graphs(n)
        assert len(gs) == want
        assert len([g for g in gs if g.is_connected()]) == connected[n]
