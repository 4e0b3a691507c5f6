"""Time the compiled kernels against the numpy/pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends are fed identical inputs and their outputs are checked for
equality before timing is reported.
"""

import argparse
import timeit

import numpy as np

from repbench import _backend, rep_code
from repbench.sim import NoiseModel, compile_circuit, sample_clbits
from repbench.syndrome_graph import all_pairs_distances, build_graph


def sampling_case(n, T, shots):
    circuit = rep_code.build(n, T).circuit_0
    noise = NoiseModel(0.01, 0.01)
    return f"sample n={n} T={T} shots={shots}", lambda: sample_clbits(circuit, noise, shots, seed=1)


def propagate_case(n, T, shots):
    circuit = rep_code.build(n, T).circuit_0
    ops, thresholds = compile_circuit(circuit, NoiseModel(0.01, 0.01))
    flips = (np.random.default_rng(1).random((shots, thresholds.size)) < thresholds).view(np.uint8)
    return (f"propagate n={n} T={T} shots={shots}",
            lambda: _backend.kernels.propagate_shots(ops, flips, circuit.num_qubits, circuit.num_clbits))


def matching_case(k):
    graph = build_graph(rep_code.build(9, 3))
    dist = all_pairs_distances(graph)
    rng = np.random.default_rng(0)
    sets = [sorted(graph.nodes[i] for i in rng.choice(len(graph.nodes), k, replace=False)) for _ in range(20)]
    mats = [dist.submatrix(s) for s in sets]
    return f"match_dp k={k} x20", lambda: [_backend.kernels.match_dp(m) for m in mats]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not _backend.COMPILED:
        parser.exit(1, "compiled kernels are not built; nothing to compare\n")
    cases = [sampling_case(3, 1, 100_000), sampling_case(7, 5, 20_000), propagate_case(7, 5, 8192),
              matching_case(8), matching_case(12)]
    print(f"{'case':34s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for label, fn in cases:
        times = {}
        results = {}
        for backend in ("python", "cython"):
            _backend.use(backend)
            results[backend] = fn()
            times[backend] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        a, b = results["python"], results["cython"]
        if isinstance(a, np.ndarray):
            assert np.array_equal(a, b), label
        else:
            assert [(c, list(p)) for c, p in a] == [(c, list(p)) for c, p in b], label
        print(f"{label:34s} {times['python']:10.4f} {times['cython']:10.4f} {times['python'] / times['cython']:8.1f}x")


if __name__ == "__main__":
    main()
