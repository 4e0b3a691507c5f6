import math

import numpy as np
import pytest

from oracles import bfs_hops, brute_force_quantile, odd_parity_probability, pair_distribution
from repbench import rep_code
from repbench.sim import NoiseModel, location_fault_probability, sample
from repbench.syndrome_graph import (
    LEFT_END,
    RIGHT_END,
    EdgeStats,
    Node,
    SyndromeGraph,
    all_pairs_distances,
    build_graph,
    edge_probability_summary,
    estimate_edge_probability,
    format_summary,
    node_positions,
    summarize,
    weight_from_probability,
    weight_syndrome_graph,
)


@pytest.fixture(scope="module")
def graph31():
    return build_graph(rep_code.build(3, 1))


def test_node_count():
    for n, T in [(3, 1), (5, 2), (7, 3)]:
        g = build_graph(rep_code.build(n, T))
        assert len(g.nodes) == 2 + (T + 1) * (n - 1)


def test_node_positions_cover_string():
    string = rep_code.process_string("010 11", 3, 1)
    positions = [pos for pos, _ in node_positions(3, 1)]
    assert sorted(positions) == [i for i, c in enumerate(string) if c != " "]


def test_record_flip_edge(graph31):
    code = rep_code.build(3, 1)
    # first Measure in the circuit is link 0, round 1
    m = next(i for i, inst in enumerate(code.circuit_0.instructions) if type(inst).__name__ == "Measure")
    edge = next(e for e, locs in graph31.provenance.items() if any(l.position == m and l.kind == "flip" for l in locs))
    assert edge == (Node(1, 0), Node(2, 0))


def test_pre_circuit_end_qubit_edge(graph31):
    edge = next(e for e, locs in graph31.provenance.items()
                if any(l.position == -1 and l.qubit == 0 for l in locs))
    assert edge == (Node(0, RIGHT_END), Node(1, 0))


def test_graph_invariants(graph31):
    for (u, v), locs in graph31.provenance.items():
        assert u != v and u < v
        assert locs
    assert set(graph31.weights.values()) == {1.0}
    # the ends of the line are never joined directly
    assert (Node(0, RIGHT_END), Node(0, LEFT_END)) not in graph31.weights


def test_graph_is_order_independent():
    code = rep_code.build(4, 2)
    g1 = build_graph(code)
    g2 = build_graph(code)
    assert g1.weights == g2.weights and g1.provenance == g2.provenance


@pytest.mark.parametrize("n,T", [(5, 1), (4, 3)])
def test_unit_distances_match_bfs(n, T):
    g = build_graph(rep_code.build(n, T))
    dist = all_pairs_distances(g)
    assert dist.connected
    for u in g.nodes:
        hops = bfs_hops(g.edges, u)
        for v in g.nodes:
            assert dist(u, v) == hops[v]
    assert dist(Node(1, 0), Node(1, 3)) == bfs_hops(g.edges, Node(1, 0))[Node(1, 3)] if n == 5 else True


def test_distance_metric_properties():
    g = build_graph(rep_code.build(5, 2))
    rng = np.random.default_rng(0)
    g.weights = {e: float(rng.uniform(0.1, 3.0)) for e in g.edges}
    m = all_pairs_distances(g).matrix
    assert np.allclose(m, m.T)
    assert np.all(np.diag(m) == 0)
    k = len(g.nodes)
    for _ in range(500):
        a, b, c = rng.integers(0, k, 3)
        assert m[a, c] <= m[a, b] + m[b, c] + 1e-12


def test_negative_weight_rejected(graph31):
    g = SyndromeGraph(graph31.n, graph31.T, graph31.nodes, dict(graph31.weights), graph31.provenance)
    g.weights[g.edges[0]] = -0.5
    with pytest.raises(ValueError):
        all_pairs_distances(g)


def test_estimate_clamps():
    assert estimate_edge_probability(10, 10) == 0.5
    assert weight_from_probability(0.5) == 0.0
    assert estimate_edge_probability(0, 98) == pytest.approx(1 / 100)
    assert estimate_edge_probability(8, 0) == pytest.approx(1 - 1 / 10)
    assert weight_from_probability(0.9) == 0.0
    assert weight_from_probability(0.1) == pytest.approx(math.log(9))


def test_weighting_counts(graph31):
    results = {"0 0  00 00": 90, "0 1  01 00": 7, "0 0  01 01": 3}
    w = weight_syndrome_graph(graph31, results)
    edge = (Node(0, RIGHT_END), Node(1, 0))
    assert w.stats[edge] == EdgeStats(7, 90, 7 / 97)
    assert w.weights[edge] == pytest.approx(-math.log(7 / 90))
    assert w.edges == graph31.edges
    # the unweighted graph is untouched
    assert set(graph31.weights.values()) == {1.0}


def test_weighting_rejects_empty(graph31):
    with pytest.raises(ValueError):
        weight_syndrome_graph(graph31, {})


def test_edge_estimates_match_exact_pair_distribution():
    """The ratio estimator converges to P(11) / (P(11) + P(00)) of the node pair."""
    code = rep_code.build(3, 1)
    noise = NoiseModel(0.05, 0.05)
    shots = 100_000
    raw = {"0": sample(code.circuit_0, noise, shots, seed=21)}
    w = weight_syndrome_graph(build_graph(code), code.process_results(raw)["0"])
    positions = {node: pos for pos, node in node_positions(3, 1)}
    for (u, v), st in w.stats.items():
        joint = pair_distribution(code, noise, positions[u], positions[v])
        q = joint.get((1, 1), 0) / (joint.get((1, 1), 0) + joint[(0, 0)])
        se = math.sqrt(q * (1 - q) / (st.c11 + st.c00))
        assert abs(st.p_estimate - q) <= 3 * se + 1e-12, (u, v)


def _estimator_bias(code, noise):
    g = build_graph(code)
    positions = {node: pos for pos, node in node_positions(code.n, code.T)}
    bias = {}
    for edge, locs in g.provenance.items():
        exact = odd_parity_probability([location_fault_probability(code.circuit_0, l, noise) for l in locs])
        joint = pair_distribution(code, noise, positions[edge[0]], positions[edge[1]])
        q = joint.get((1, 1), 0) / (joint.get((1, 1), 0) + joint[(0, 0)])
        bias[edge] = q - exact
    return bias


def test_estimator_bias_is_second_order():
    """The ratio estimator differs from the edge's own fault probability only at
    second order in the noise strength."""
    code = rep_code.build(3, 1)
    coarse = _estimator_bias(code, NoiseModel(0.002, 0.002))
    fine = _estimator_bias(code, NoiseModel(0.001, 0.001))
    assert max(abs(b) for b in coarse.values()) < 25 * 0.002**2
    for edge, b in coarse.items():
        if abs(b) > 1e-12:
            assert 3.5 < b / fine[edge] < 4.5, edge


def test_summary_values():
    s = summarize([0.1])
    assert s["count"] == 1 and s["std"] == 0.0 and not s["std_defined"]
    assert s["min"] == s["25%"] == s["50%"] == s["75%"] == s["max"] == 0.1
    s = summarize([0.1, 0.3])
    assert s["mean"] == pytest.approx(0.2) and s["50%"] == pytest.approx(0.2)
    s = summarize([0.1, 0.2, 0.3, 0.4])
    assert s["25%"] == pytest.approx(0.175) and s["75%"] == pytest.approx(0.325)
    values = np.random.default_rng(3).uniform(size=17)
    s = summarize(values)
    for key, q in (("25%", 0.25), ("50%", 0.5), ("75%", 0.75)):
        assert s[key] == pytest.approx(brute_force_quantile(values, q))
    assert s["std"] == pytest.approx(math.sqrt(sum((x - values.mean()) ** 2 for x in values) / 16))


def test_summary_format_and_unit_graph(graph31):
    with pytest.raises(ValueError):
        edge_probability_summary(graph31)
    text = format_summary(summarize([0.1, 0.3]))
    lines = text.splitlines()
    assert lines[0] == "count: 2"
    assert lines[1] == "mean: 0.2"
    assert [l.split(":")[0] for l in lines] == ["count", "mean", "std", "min", "25%", "50%", "75%", "max"]


def test_exports(graph31):
    doc = graph31.to_json()
    assert doc["n"] == 3 and len(doc["edges"]) == len(graph31.edges)
    assert all(e["provenance"] for e in doc["edges"])
    dot = graph31.to_dot()
    assert dot.startswith("graph syndrome {") and dot.count("--") == len(graph31.edges)
