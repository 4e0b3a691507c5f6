"""Decoding graph for the repetition code.

Nodes are the characters of a processed string. Two nodes share an edge
when some single fault in the logical-0 circuit flips exactly that pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import networkx as nx
import numpy as np

from repbench import rep_code
from repbench.rep_code import RepetitionCode
from repbench.sim import ErrorLocation, enumerate_error_locations, run_with_errors

# logical-node indices (Node.t == 0)
RIGHT_END = 0  # code qubit 0
LEFT_END = 1  # code qubit n-1


class Node(NamedTuple):
    """A processed-string character.

    ``t == 0`` is a logical readout (``j`` is ``RIGHT_END`` or ``LEFT_END``);
    ``t >= 1`` is link ``j`` of syndrome-change block ``t``.
    """

    t: int
    j: int

    def __str__(self) -> str:
        if self.t == 0:
            return "L_left" if self.j == LEFT_END else "L_right"
        return f"S{self.t}_{self.j}"


class GraphConstructionError(RuntimeError):
    pass


def node_positions(n: int, T: int) -> list[tuple[int, Node]]:
    """``(string index, node)`` for every character of a processed string."""
    positions = [(0, Node(0, LEFT_END)), (2, Node(0, RIGHT_END))]
    for t in range(1, T + 2):
        start = 5 + (t - 1) * n
        for k in range(n - 1):
            positions.append((start + k, Node(t, n - 2 - k)))
    return positions


def flipped_nodes(processed: str, reference: str, n: int, T: int) -> list[Node]:
    return sorted(node for pos, node in node_positions(n, T) if processed[pos] != reference[pos])


@dataclass(frozen=True)
class EdgeStats:
    c11: int
    c00: int
    p_estimate: float


@dataclass
class SyndromeGraph:
    n: int
    T: int
    nodes: list[Node]
    weights: dict[tuple[Node, Node], float]
    provenance: dict[tuple[Node, Node], list[ErrorLocation]]
    stats: dict[tuple[Node, Node], EdgeStats] = field(default_factory=dict)

    @property
    def edges(self) -> list[tuple[Node, Node]]:
        return sorted(self.weights)

    @property
    def data_weighted(self) -> bool:
        return bool(self.stats)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        for (u, v), w in sorted(self.weights.items()):
            g.add_edge(u, v, weight=w)
        return g

    def to_json(self) -> dict:
        edges = []
        for edge in self.edges:
            u, v = edge
            item = {
                "u": str(u),
                "v": str(v),
                "weight": self.weights[edge],
                "provenance": [str(loc) for loc in self.provenance[edge]],
            }
            if edge in self.stats:
                s = self.stats[edge]
                item.update(c11=s.c11, c00=s.c00, p_estimate=s.p_estimate)
            edges.append(item)
        return {"n": self.n, "T": self.T, "nodes": [str(x) for x in self.nodes], "edges": edges}

    def to_dot(self) -> str:
        lines = ["graph syndrome {"]
        for node in self.nodes:
            lines.append(f'  "{node}";')
        for edge in self.edges:
            u, v = edge
            lines.append(f'  "{u}" -- "{v}" [weight={self.weights[edge]:.6g}, label="{self.weights[edge]:.3g}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_graph(code: RepetitionCode) -> SyndromeGraph:
    """Build the decoding graph by injecting every single fault into the
    logical-0 circuit and recording which processed characters change."""
    n, T = code.n, code.T
    reference = rep_code.process_string(
        run_with_errors(code.circuit_0, []), n, T
    )
    provenance: dict[tuple[Node, Node], list[ErrorLocation]] = {}
    for loc in enumerate_error_locations(code.circuit_0):
        processed = rep_code.process_string(run_with_errors(code.circuit_0, [loc]), n, T)
        flipped = flipped_nodes(processed, reference, n, T)
        if not flipped:
            continue
        if len(flipped) != 2:
            raise GraphConstructionError(
                f"fault {loc} flips {len(flipped)} characters ({', '.join(map(str, flipped))})"
            )
        provenance.setdefault((flipped[0], flipped[1]), []).append(loc)
    nodes = [node for _, node in node_positions(n, T)]
    return SyndromeGraph(
        n=n,
        T=T,
        nodes=sorted(nodes),
        weights={edge: 1.0 for edge in provenance},
        provenance={edge: sorted(locs) for edge, locs in provenance.items()},
    )


@dataclass(frozen=True)
class DistanceTable:
    nodes: list[Node]
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "index", {node: i for i, node in enumerate(self.nodes)})

    def __call__(self, u: Node, v: Node) -> float:
        return float(self.matrix[self.index[u], self.index[v]])

    def submatrix(self, nodes: list[Node]) -> np.ndarray:
        idx = [self.index[x] for x in nodes]
        return np.ascontiguousarray(self.matrix[np.ix_(idx, idx)])

    @property
    def connected(self) -> bool:
        return bool(np.isfinite(self.matrix).all())


def all_pairs_distances(graph: SyndromeGraph) -> DistanceTable:
    """Shortest-path distances between every pair of nodes (inf if unreachable)."""
    for edge, w in graph.weights.items():
        if w < 0 or math.isnan(w):
            raise ValueError(f"edge {edge[0]}-{edge[1]} has invalid weight {w}")
    g = graph.to_networkx()
    index = {node: i for i, node in enumerate(graph.nodes)}
    matrix = np.full((len(graph.nodes), len(graph.nodes)), np.inf)
    for source, lengths in nx.all_pairs_dijkstra_path_length(g, weight="weight"):
        for target, d in lengths.items():
            matrix[index[source], index[target]] = d
    return DistanceTable(list(graph.nodes), matrix)


def estimate_edge_probability(c11: int, c00: int) -> float:
    """``p`` from ``p/(1-p) = C11/C00``, clamped away from 0 and 1."""
    if c11 == 0:
        return 1.0 / (c00 + 2)
    if c00 == 0:
        return 1.0 - 1.0 / (c11 + 2)
    return c11 / (c11 + c00)


def weight_from_probability(p: float) -> float:
    # p > 1/2 would give a negative weight
    if p >= 0.5:
        return 0.0
    return -math.log(p / (1.0 - p))


def weight_syndrome_graph(graph: SyndromeGraph, results: dict[str, int]) -> SyndromeGraph:
    """Return a copy of ``graph`` with weights ``-ln(p/(1-p))`` estimated from
    processed logical-0 counts.

    For each edge, ``C11`` counts shots where both endpoint characters are 1
    and ``C00`` shots where both are 0.
    """
    if not results or sum(results.values()) == 0:
        raise ValueError("cannot weight the syndrome graph from empty results")
    positions = {node: pos for pos, node in node_positions(graph.n, graph.T)}
    for string in results:
        rep_code.split_processed(string, graph.n, graph.T)
    weights = {}
    stats = {}
    for edge in graph.edges:
        pu, pv = positions[edge[0]], positions[edge[1]]
        c11 = c00 = 0
        for string, count in results.items():
            a, b = string[pu], string[pv]
            if a == b == "1":
                c11 += count
            elif a == b == "0":
                c00 += count
        p = estimate_edge_probability(c11, c00)
        stats[edge] = EdgeStats(c11, c00, p)
        weights[edge] = weight_from_probability(p)
    return replace(graph, weights=weights, stats=stats)


def edge_probability_summary(graph: SyndromeGraph) -> dict:
    """count/mean/std/min/quartiles/max of the estimated edge probabilities.

    Quartiles use linear interpolation; ``std`` is the sample standard
    deviation and is reported as 0.0 with ``std_defined`` False for a single
    edge.
    """
    if not graph.data_weighted:
        raise ValueError("graph has no data-derived weights to summarize")
    probs = np.array([graph.stats[edge].p_estimate for edge in graph.edges])
    return summarize(probs)


def summarize(values) -> dict:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("nothing to summarize")
    q25, q50, q75 = np.quantile(values, [0.25, 0.5, 0.75], method="linear")
    std_defined = values.size > 1
    return {
        "count": int(values.size),
        "mean": float(values.mean()),
        "std": float(values.std(ddof=1)) if std_defined else 0.0,
        "min": float(values.min()),
        "25%": float(q25),
        "50%": float(q50),
        "75%": float(q75),
        "max": float(values.max()),
        "std_defined": std_defined,
    }


SUMMARY_KEYS = ("count", "mean", "std", "min", "25%", "50%", "75%", "max")


def format_summary(summary: dict) -> str:
    return "".join(f"{key}: {summary[key]}\n" for key in SUMMARY_KEYS)

