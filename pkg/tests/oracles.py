"""Independent reference computations used by the tests."""

from collections import deque
import math

from repbench import rep_code
from repbench.sim import (
    NoiseModel,
    enumerate_error_locations,
    location_fault_probability,
    run_ideal,
    run_with_errors,
)


def bfs_hops(edges, source):
    adj = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adj.get(u, ()):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def all_perfect_matchings(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for i, partner in enumerate(rest):
        for tail in all_perfect_matchings(rest[:i] + rest[i + 1:]):
            yield [(first, partner)] + tail


def brute_force_matching_cost(items, dist):
    best = math.inf
    for m in all_perfect_matchings(list(items)):
        best = min(best, sum(dist(u, v) for u, v in m))
    return best


def odd_parity_probability(probs):
    """Probability that an odd number of independent events fire."""
    prod = 1.0
    for p in probs:
        prod *= 1 - 2 * p
    return (1 - prod) / 2


def fault_effects(code):
    """Map each single fault of the logical-0 circuit to the set of processed
    string positions it flips, computed straight from the simulator."""
    n, T = code.n, code.T
    ref = rep_code.process_string(run_ideal(code.circuit_0), n, T)
    effects = {}
    for loc in enumerate_error_locations(code.circuit_0):
        s = rep_code.process_string(run_with_errors(code.circuit_0, [loc]), n, T)
        effects[loc] = frozenset(i for i, (a, b) in enumerate(zip(s, ref)) if a != b)
    return effects


def pair_distribution(code, noise: NoiseModel, pos_u, pos_v):
    """Exact joint distribution of the characters at two processed-string
    positions for the logical-0 circuit, by convolving every noise site."""
    dist = {(0, 0): 1.0}
    for loc, flipped in fault_effects(code).items():
        p = location_fault_probability(code.circuit_0, loc, noise)
        if p == 0:
            continue
        du, dv = int(pos_u in flipped), int(pos_v in flipped)
        if not (du or dv):
            continue
        new = {}
        for (a, b), q in dist.items():
            new[(a, b)] = new.get((a, b), 0.0) + q * (1 - p)
            key = (a ^ du, b ^ dv)
            new[key] = new.get(key, 0.0) + q * p
        dist = new
    return dist


def brute_force_quantile(values, q):
    xs = sorted(values)
    h = (len(xs) - 1) * q
    lo = math.floor(h)
    hi = min(lo + 1, len(xs) - 1)
    return xs[lo] + (h - lo) * (xs[hi] - xs[lo])


def random_defect_sets(nodes, rng, count, max_size):
    for _ in range(count):
        k = 2 * rng.integers(0, max_size // 2 + 1)
        yield sorted(nodes[i] for i in rng.choice(len(nodes), size=k, replace=False))


__all__ = [name for name in dir() if not name.startswith("_") and name not in ("deque", "math")]
