"""Decoders: majority-vote formulas, lookup tables and minimum-weight matching."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from repbench import _backend, rep_code
from repbench.rep_code import LABELS, Counts
from repbench.syndrome_graph import (
    DistanceTable,
    Node,
    SyndromeGraph,
    all_pairs_distances,
    node_positions,
)

# largest defect set the exact solver accepts (2^k table entries)
MAX_EXACT_DEFECTS = 16


class CapacityError(RuntimeError):
    """Defect set too large for the exact matching solver."""


class DecodingError(ValueError):
    pass


def analytic_majority(n: int, p: float) -> float:
    """Probability that a majority of ``n`` independent copies are flipped."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"majority vote needs an odd number of copies, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return sum(math.comb(n, k) * p**k * (1 - p) ** (n - k) for k in range(n // 2 + 1, n + 1))


@dataclass(frozen=True)
class LogicalErrorReport:
    label: str
    P: float
    shots: int
    decoder: str
    errors: float = 0.0

    @property
    def stderr(self) -> float:
        return math.sqrt(max(self.P * (1 - self.P), 0.0) / self.shots) if self.shots else 0.0


def lookup_decode(raw: dict[str, Counts], table: dict[str, Counts]) -> dict[str, LogicalErrorReport]:
    """Decode each raw string as the label under which it was most frequent
    in ``table``.

    Ties, including strings absent from the table, count as half an error.
    """
    if not table or all(not table.get(label) for label in LABELS):
        raise DecodingError("lookup table is empty")
    reports = {}
    for label, counts in raw.items():
        errors = 0.0
        total = 0
        for string, count in counts.items():
            total += count
            c0 = table.get("0", {}).get(string, 0)
            c1 = table.get("1", {}).get(string, 0)
            if c0 == c1:
                errors += count / 2
            elif ("0" if c0 > c1 else "1") != label:
                errors += count
        if total == 0:
            raise DecodingError(f"no shots for label {label!r}")
        reports[label] = LogicalErrorReport(label, errors / total, total, "lookup", errors)
    return reports


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[Node, Node], ...]
    total_weight: float


def mwpm(defects, distances: DistanceTable, limit: int = MAX_EXACT_DEFECTS) -> Matching:
    """Exact minimum-weight perfect matching of ``defects`` under ``distances``.

    Defects are sorted first; among optimal matchings the one where each
    lowest unmatched defect takes its lowest-ranked partner is returned.
    """
    nodes = sorted(defects)
    if len(nodes) % 2:
        raise DecodingError(f"odd number of defects ({len(nodes)})")
    if len(nodes) > limit:
        raise CapacityError(f"{len(nodes)} defects exceed the exact-solver limit of {limit}")
    if not nodes:
        return Matching((), 0.0)
    cost, partner = _backend.kernels.match_dp(distances.submatrix(nodes))
    pairs = tuple((nodes[i], nodes[j]) for i, j in enumerate(partner) if i < j)
    return Matching(pairs, float(cost))


class MatchingDecoder:
    """Two-hypothesis matching decoder over a syndrome graph.

    For each candidate logical value ``h``, the defects are the syndrome
    characters equal to 1 plus the logical characters differing from ``h``.
    The value whose defects have the cheaper minimum-weight matching wins.
    """

    def __init__(self, graph: SyndromeGraph, limit: int = MAX_EXACT_DEFECTS):
        self.graph = graph
        self.limit = limit
        self.distances = all_pairs_distances(graph)
        positions = node_positions(graph.n, graph.T)
        self._logical = [(pos, node) for pos, node in positions if node.t == 0]
        self._syndrome = [(pos, node) for pos, node in positions if node.t > 0]
        self._decode = lru_cache(maxsize=None)(self._decode_uncached)

    def defects(self, string: str, hypothesis: str) -> list[Node]:
        rep_code.split_processed(string, self.graph.n, self.graph.T)
        found = [node for pos, node in self._logical if string[pos] != hypothesis]
        found += [node for pos, node in self._syndrome if string[pos] == "1"]
        return sorted(found)

    def costs(self, string: str) -> dict[str, float]:
        out = {}
        for h in LABELS:
            d = self.defects(string, h)
            if len(d) % 2:
                raise DecodingError(f"processed string {string!r} has an odd number of defects")
            try:
                out[h] = mwpm(d, self.distances, self.limit).total_weight
            except CapacityError as exc:
                raise CapacityError(f"{exc} (string {string!r})") from None
        return out

    def _decode_uncached(self, string: str) -> str:
        w = self.costs(string)
        if w["0"] < w["1"]:
            return "0"
        if w["1"] < w["0"]:
            return "1"
        if math.isinf(w["0"]):
            raise DecodingError(f"no consistent matching for {string!r}")
        left, right = string[0], string[2]
        return left if left == right else "0"

    def decode(self, string: str) -> str:
        return self._decode(string)

    def get_logical_prob(self, results: dict[str, Counts]) -> dict[str, LogicalErrorReport]:
        if not results:
            raise DecodingError("no results to decode")
        reports = {}
        for label, counts in results.items():
            total = sum(counts.values())
            if total == 0:
                raise DecodingError(f"no shots for label {label!r}")
            errors = sum(c for s, c in counts.items() if self.decode(s) != label)
            reports[label] = LogicalErrorReport(label, errors / total, total, "matching", float(errors))
        return reports


def matching_decode(graph: SyndromeGraph, string: str) -> str:
    return MatchingDecoder(graph).decode(string)


def get_logical_prob(results: dict[str, Counts], graph: SyndromeGraph) -> dict[str, LogicalErrorReport]:
    return MatchingDecoder(graph).get_logical_prob(results)
