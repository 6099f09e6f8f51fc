"""Acceptance criteria, one test per criterion.

Each test prints a single PASS line (visible with pytest -s or in the
captured output summary); tolerances are pinned to the stated values.
"""

import math

import numpy as np
import pytest

from netsym.bounds import (
    cluster_fidelity_bound,
    covariance_matrix_z,
    ghz_fidelity_bound,
    gisin_check,
    itn_cm_check,
)
from netsym.graphs import Graph, enumerate_graphs, parse_graph6
from netsym.network import (
    base_marginal,
    equal_marginals,
    inflation_marginal,
    random_network_state,
    random_source_states,
    square_network,
    standard_inflations,
    triangle_network,
)
from netsym.nogo import observation1_scan, replay_certificate
from netsym.pauli import PauliString, parse
from netsym.states import (
    DenseState,
    basis_state,
    dicke,
    expectation,
    ghz,
    graph_state,
    white_noise,
)
from netsym.symmetry import observation2_verdict
from netsym.witness import (
    _square_xi_inflation,
    cluster_square_witness,
    evaluate,
    ghz_triangle_witness,
    link_certification,
    tripartite_demo_witnesses,
    white_noise_threshold,
)

from helpers import random_anticommuting_set, random_pure_state


def _report(line: str):
    print(f"PASS {line}")


def test_criterion_01_ghz_witness():
    w = ghz_triangle_witness()
    s = ghz(3)
    for p in np.linspace(0, 1, 21):
        rep = evaluate(w, white_noise(s, float(p)))
        want = p * p + max(0.0, 2 * p - 1) ** 2
        assert rep.lhs == pytest.approx(want, abs=1e-9)
    res = white_noise_threshold(w, s, tol=1e-8)
    assert res.found
    assert res.threshold == pytest.approx(0.8, abs=1e-6)
    _report(f"criterion 1: GHZ witness lhs closed form; threshold {res.threshold:.7f} = 0.8 +- 1e-6")


def test_criterion_02_cluster_witness():
    w = cluster_square_witness("xi")
    c4 = graph_state(parse_graph6("Cl"))
    rep = evaluate(w, c4)
    assert rep.lhs == pytest.approx(3.0, abs=1e-9)
    res = white_noise_threshold(w, c4, tol=1e-8)
    assert res.threshold == pytest.approx(1 / math.sqrt(3), abs=1e-6)
    _report(f"criterion 2: cluster witness lhs {rep.lhs:.10f} = 3; threshold {res.threshold:.7f} = 0.5773503 +- 1e-6")


def test_criterion_03_second_square_witness():
    w = cluster_square_witness("tau")
    rep = evaluate(w, graph_state(parse_graph6("Cl")))
    assert rep.lhs == pytest.approx(2.0, abs=1e-9)
    _report(f"criterion 3: second square witness lhs {rep.lhs:.10f} = 2")


def test_criterion_04_theorem3_scanner_exhaustive():
    graphs = []
    for n in range(3, 8):
        graphs.extend(enumerate_graphs(n, connected=True))
    assert len(graphs) == 2 + 6 + 21 + 112 + 853
    for g in graphs:
        res = observation1_scan(g)
        assert res.certificate is not None, f"no certificate for {g.edges()}"
        cert = res.certificate
        assert replay_certificate(cert, g)
        st = graph_state(cert.witness_graph)
        rep = evaluate(cert.witness, st)
        assert rep.lhs == pytest.approx(2.0, abs=1e-9), g.edges()
        th = white_noise_threshold(cert.witness, st, tol=1e-8)
        assert th.threshold == pytest.approx(0.8, abs=1e-6), g.edges()
    _report(f"criterion 4: certificates for all {len(graphs)} connected graphs with 3<=n<=7; "
            "witness lhs 2, threshold 0.8 +- 1e-6 each")


def test_criterion_05_ghz_fidelity_bounds():
    targets = {
        "cm_only": 3 - math.sqrt(5),
        "cm_extra": 0.75,
        "gisin_extra": 1 / math.sqrt(2),
    }
    results = {}
    for method, want in targets.items():
        res = ghz_fidelity_bound(method)
        assert res.bound == pytest.approx(want, abs=1e-3), method
        results[method] = res.bound
    _report("criterion 5: GHZ bounds " + ", ".join(
        f"{m}={v:.6f}" for m, v in results.items()) + " within 1e-3 of 0.763932/0.750000/0.707107")


def test_criterion_06_cluster_fidelity_bound():
    res = cluster_fidelity_bound()
    assert res.bound == pytest.approx(0.737684, abs=1e-4)
    _report(f"criterion 6: cluster fidelity bound {res.bound:.6f} = 0.737684 +- 1e-4")


def test_criterion_07_link_certification_example():
    s1 = np.zeros(16, dtype=complex)
    s2 = np.zeros(16, dtype=complex)
    s1[0b0000] = s1[0b1010] = 1 / math.sqrt(2)
    s2[0b0101] = 1 / math.sqrt(2)
    s2[0b1111] = -1 / math.sqrt(2)
    rho = 0.5 * np.outer(s1, s1.conj()) + 0.5 * np.outer(s2, s2.conj())
    state = DenseState((2,) * 4, rho)
    rep = link_certification(state, 0, 2, (parse("1111"), parse("111Z"), parse("1111")))
    assert rep.term_values == pytest.approx((0.0, -1.0, 1.0), abs=1e-9)
    assert rep.lhs == pytest.approx(2.0, abs=1e-9)
    assert rep.violated
    marginal_only = link_certification(state, 0, 2, (parse("1111"),) * 3)
    assert marginal_only.lhs <= 1.0 + 1e-9
    _report(f"criterion 7: link example values {tuple(round(v, 6) for v in rep.term_values)}, "
            f"lhs {rep.lhs:.10f} = 2; marginal-only lhs {marginal_only.lhs:.6f} <= 1")


def test_criterion_08_observation2_verdicts():
    v1 = observation2_verdict(dicke(3, 1), 2)
    assert v1.verdict == "network-infeasible" and v1.npt_cut is not None
    v2 = observation2_verdict(dicke(4, 2), 3)
    assert v2.verdict == "network-infeasible" and v2.npt_cut is not None
    v3 = observation2_verdict(basis_state((2,) * 4, (0,) * 4), 3)
    assert v3.verdict == "feasible-fully-separable"
    singlet = DenseState((2, 2), np.array([0, 1, -1, 0]) / math.sqrt(2))
    v4 = observation2_verdict(singlet, 1)
    assert v4.verdict == "network-infeasible" and v4.antisymmetric
    amp = np.zeros(64, dtype=complex)
    for pattern in ("000", "012", "120", "201", "132", "321", "213", "333"):
        i, j, k = (int(ch) for ch in pattern)
        amp[i * 16 + j * 4 + k] = 1 / (2 * math.sqrt(2))
    cyclic = DenseState((4, 4, 4), amp)
    v5 = observation2_verdict(cyclic, 2)
    assert v5.verdict == "not-applicable"
    _report("criterion 8: verdicts dicke(3,1)/dicke(4,2) infeasible (NPT), |0..0> feasible, "
            "singlet infeasible (antisymmetric), cyclic 3x4 not-applicable")


def test_criterion_09_soundness_no_false_positives():
    rng = np.random.default_rng(2024)
    tri, sq = triangle_network(), square_network()
    ghz_w = ghz_triangle_witness()
    ghz_v = ghz_triangle_witness("YYX", ("ZZ1", "Z1Z"))
    cl_xi = cluster_square_witness("xi")
    cl_tau = cluster_square_witness("tau")
    z = [PauliString.from_letters(3, {i: "Z"}) for i in range(3)]
    zz = [PauliString.from_letters(3, {i: "Z", j: "Z"}) for i, j in ((0, 1), (0, 2), (1, 2))]
    n_states = 0
    for k in range(600):
        s = random_network_state(tri, rng, n_lambda=1 + k % 3)
        n_states += 1
        assert not evaluate(ghz_w, s).violated
        assert not evaluate(ghz_v, s).violated
        if k % 3 == 0:  # these states have n_lambda == 1: no shared randomness
            assert itn_cm_check(covariance_matrix_z(s))
            singles = [expectation(s, p) for p in z]
            pairs = [expectation(s, p) for p in zz]
            _, _, ok = gisin_check(*singles, *pairs)
            assert ok
    for k in range(400):
        s = random_network_state(sq, rng, n_lambda=1 + k % 2)
        n_states += 1
        assert not evaluate(cl_xi, s).violated
        assert not evaluate(cl_tau, s).violated
    assert n_states == 1000
    _report("criterion 9: 1000 network-prepared states (600 triangle, 400 square), "
            "zero witness violations, all ITN checks passed")


def test_criterion_10_anticommutation_bound():
    rng = np.random.default_rng(4096)
    worst = 0.0
    for _ in range(10_000):
        n = int(rng.integers(1, 6))
        obs = random_anticommuting_set(n, rng)
        s = random_pure_state(n, rng)
        total = sum(expectation(s, m) ** 2 for m in obs)
        worst = max(worst, total)
        assert total <= 1.0 + 1e-9
    _report(f"criterion 10: 10000 anticommuting-set states, max sum of squares {worst:.9f} <= 1 + 1e-9")


def test_criterion_11_oracle_equivalences():
    rng = np.random.default_rng(11_000)
    from helpers import random_pauli

    for _ in range(400):
        n = int(rng.integers(1, 5))
        a, b = random_pauli(n, rng), random_pauli(n, rng)
        np.testing.assert_allclose(
            (a * b).to_matrix(), a.to_matrix() @ b.to_matrix(), atol=1e-12
        )
    tri, sq = triangle_network(), square_network()
    checked = 0
    cases = [
        (tri, standard_inflations(tri, "tau")),
        (tri, standard_inflations(tri, "gamma")),
        (sq, standard_inflations(sq, "tau")),
        (sq, standard_inflations(sq, "gamma")),
        (sq, _square_xi_inflation(sq)),
    ]
    for base, infl in cases:
        srcs = random_source_states(base, rng)
        for mc in equal_marginals(infl):
            lhs = inflation_marginal(infl, srcs, mc.node_copies)
            rhs = base_marginal(base, srcs, mc.base_nodes)
            assert np.linalg.norm(lhs.data - rhs.data) < 1e-9
            checked += 1
    _report(f"criterion 11: Pauli dense oracle (400 pairs, n<=4) and {checked} "
            "marginal correspondences verified against dense states at 1e-9")
