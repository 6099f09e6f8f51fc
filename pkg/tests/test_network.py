import numpy as np
import pytest

from netsym.network import (
    Inflation,
    Network,
    NetworkError,
    Source,
    all_but_one_network,
    base_marginal,
    chain_inflation,
    complete_network,
    custom_inflation,
    doubling_inflation,
    equal_marginals,
    inflation_marginal,
    network_state_dense,
    patterns_equal,
    random_network_state,
    random_source_states,
    separable_cut,
    square_network,
    standard_inflations,
    triangle_network,
    trivial_inflation,
)
from netsym.witness import _square_xi_inflation


TRI = triangle_network()
SQ = square_network()


def test_network_validation():
    with pytest.raises(NetworkError):
        Network(("A", "A"), ())
    with pytest.raises(NetworkError):
        Network(("A", "B"), (Source("s", ("A", "C")),))
    with pytest.raises(NetworkError):
        Source("s", ("A",))


def test_tau_marginals_are_the_two_copies():
    tau = standard_inflations(TRI, "tau")
    tops = {mc.node_copies for mc in equal_marginals(tau)}
    assert (("A", 0), ("B", 0), ("C", 0)) in tops
    assert (("A", 1), ("B", 1), ("C", 1)) in tops


def test_gamma_marginals_include_crossed_pair():
    gam = standard_inflations(TRI, "gamma")
    tops = {mc.node_copies for mc in equal_marginals(gam)}
    assert (("A", 1), ("C", 0)) in tops
    assert (("A", 0), ("C", 1)) in tops
    # no full triple survives the rewiring
    assert all(len(t) <= 2 for t in tops)


def test_square_xi_has_required_marginals():
    xi = _square_xi_inflation(SQ)
    tops = equal_marginals(xi)
    covered = set()
    for mc in tops:
        covered.add(mc.node_copies)
    # the three sets used by the cluster witness, possibly inside larger ones
    needed = [
        {("B", 2), ("D", 0)},
        {("B", 1), ("C", 0), ("D", 0)},
        {("A", 0), ("B", 0), ("D", 0)},
    ]
    for req in needed:
        assert any(req <= set(t) for t in covered), req


def test_separable_cuts():
    tau = standard_inflations(TRI, "tau")
    cut = separable_cut(tau)
    assert cut is not None
    left, right = cut
    assert set(left) == {("A", 0), ("B", 0), ("C", 0)}
    assert separable_cut(standard_inflations(TRI, "gamma")) is None
    ab1 = all_but_one_network(("A", "B", "C", "D"))
    cut = separable_cut(doubling_inflation(ab1))
    assert cut is not None and len(cut[0]) == 4


def test_invalid_wirings_rejected():
    tau = standard_inflations(TRI, "tau")
    bad = dict(tau.wiring)
    bad[("b", 0)] = (("A", 0), ("C", 1))   # role C of copy 1 now feeds C' twice
    with pytest.raises(NetworkError):
        custom_inflation(TRI, 2, bad)
    bad = dict(tau.wiring)
    bad[("b", 0)] = (("C", 0), ("A", 0))   # role order violated
    with pytest.raises(NetworkError):
        custom_inflation(TRI, 2, bad)
    bad = dict(tau.wiring)
    del bad[("b", 1)]
    with pytest.raises(NetworkError):
        custom_inflation(TRI, 2, bad)


def test_mutated_wirings_property():
    rng = np.random.default_rng(31)
    tau = standard_inflations(SQ, "tau")
    sids = [s.id for s in SQ.sources]
    for _ in range(50):
        bad = dict(tau.wiring)
        sid = sids[rng.integers(0, len(sids))]
        copy = int(rng.integers(0, 2))
        parties = SQ.source(sid).parties
        # duplicate one endpoint copy: breaks the per-role bijection
        eps = tuple((p, int(rng.integers(0, 2))) for p in parties)
        bad[(sid, copy)] = eps
        other = tau.wiring[(sid, 1 - copy)]
        if all(e[1] != o[1] for e, o in zip(eps, other)):
            Inflation(SQ, 2, bad)  # still a valid rewiring
        else:
            with pytest.raises(NetworkError):
                Inflation(SQ, 2, bad)


@pytest.mark.parametrize("kind", ["tau", "gamma"])
def test_triangle_marginal_soundness_dense(kind):
    rng = np.random.default_rng(32)
    infl = standard_inflations(TRI, kind)
    for _ in range(5):
        srcs = random_source_states(TRI, rng)
        for mc in equal_marginals(infl):
            lhs = inflation_marginal(infl, srcs, mc.node_copies)
            rhs = base_marginal(TRI, srcs, mc.base_nodes)
            assert np.linalg.norm(lhs.data - rhs.data) < 1e-9


@pytest.mark.parametrize("make", [
    lambda: standard_inflations(SQ, "tau"),
    lambda: standard_inflations(SQ, "gamma"),
    lambda: _square_xi_inflation(SQ),
])
def test_square_marginal_soundness_dense(make):
    rng = np.random.default_rng(33)
    infl = make()
    srcs = random_source_states(SQ, rng)
    for mc in equal_marginals(infl):
        lhs = inflation_marginal(infl, srcs, mc.node_copies)
        rhs = base_marginal(SQ, srcs, mc.base_nodes)
        assert np.linalg.norm(lhs.data - rhs.data) < 1e-9


def test_cross_inflation_pattern_transfer():
    tau = standard_inflations(TRI, "tau")
    gam = standard_inflations(TRI, "gamma")
    assert patterns_equal(gam, [("A", 0), ("C", 0)], tau, [("A", 1), ("C", 0)])
    assert not patterns_equal(gam, [("A", 0), ("C", 0)], tau, [("A", 0), ("C", 0)])
    rng = np.random.default_rng(34)
    srcs = random_source_states(TRI, rng)
    lhs = inflation_marginal(gam, srcs, [("A", 0), ("C", 0)])
    rhs = inflation_marginal(tau, srcs, [("A", 1), ("C", 0)])
    assert np.linalg.norm(lhs.data - rhs.data) < 1e-9


def test_pattern_equal_rejects_letter_mismatch():
    tau = standard_inflations(TRI, "tau")
    triv = trivial_inflation(TRI)
    la = {("A", 0): "X", ("B", 0): "X"}
    lb_ok = {("A", 0): "X", ("B", 0): "X"}
    lb_bad = {("A", 0): "X", ("B", 0): "Z"}
    assert patterns_equal(tau, list(la), triv, list(lb_ok), la, lb_ok)
    assert not patterns_equal(tau, list(la), triv, list(lb_bad), la, lb_bad)


def test_chain_inflation_supp4_equalities():
    ab1 = all_but_one_network(("A", "B", "C", "D"))
    eta = chain_inflation(ab1)
    tau = doubling_inflation(ab1)
    rng = np.random.default_rng(35)
    srcs = random_source_states(ab1, rng)
    # consecutive pairs and the wrap-around pair match base marginals
    for pair, base_pair in [
        ([("A", 0), ("B", 0)], ["A", "B"]),
        ([("B", 0), ("C", 0)], ["B", "C"]),
        ([("C", 0), ("D", 0)], ["C", "D"]),
        ([("D", 0), ("A", 1)], ["D", "A"]),
    ]:
        lhs = inflation_marginal(eta, srcs, pair)
        rhs = base_marginal(ab1, srcs, base_pair)
        assert np.linalg.norm(lhs.data - rhs.data) < 1e-9
    # the two A copies look identical in eta and in the doubling
    lhs = inflation_marginal(eta, srcs, [("A", 0), ("A", 1)])
    rhs = inflation_marginal(tau, srcs, [("A", 0), ("A", 1)])
    assert np.linalg.norm(lhs.data - rhs.data) < 1e-9


def test_gamma_needs_a_swap_source():
    hub = Network(("A", "B", "C"), (Source("s", ("A", "B")), Source("t", ("B", "C"))))
    with pytest.raises(NetworkError):
        standard_inflations(hub, "gamma")
    infl = standard_inflations(hub, "gamma", swap_source="s")
    assert infl.copies == 2


def test_network_json_roundtrip():
    for net in (TRI, SQ, all_but_one_network(("A", "B", "C", "D"))):
        assert Network.from_json_dict(net.to_json_dict()) == net
    tau = standard_inflations(SQ, "tau")
    back = Inflation.from_json_dict(tau.to_json_dict())
    assert back.wiring == tau.wiring and back.copies == 2


def test_random_network_state_is_valid():
    rng = np.random.default_rng(36)
    s = random_network_state(TRI, rng, n_lambda=2)
    assert s.dims == (2, 2, 2)
    evals = np.linalg.eigvalsh(s.data)
    assert evals[0] >= -1e-10
    assert np.trace(s.data).real == pytest.approx(1.0)


def test_network_state_dense_weight_validation():
    rng = np.random.default_rng(37)
    srcs = random_source_states(TRI, rng)
    with pytest.raises(NetworkError):
        network_state_dense(TRI, srcs, [{}], [0.5])
