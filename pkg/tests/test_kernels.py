"""The compiled and numpy kernels must agree bit for bit."""

import numpy as np
import pytest

from repbench import _backend, _pykernels, rep_code
from repbench.sim import NoiseModel, compile_circuit, sample

needs_compiled = pytest.mark.skipif(not _backend.COMPILED, reason="compiled kernels not built")


@needs_compiled
@pytest.mark.parametrize("n,T,label", [(3, 1, "0"), (5, 2, "1"), (7, 3, "1")])
def test_propagate_shots_agree(n, T, label):
    circuit = rep_code.build(n, T).circuit[label]
    ops, thresholds = compile_circuit(circuit, NoiseModel(0.1, 0.1))
    rng = np.random.default_rng(0)
    flips = (rng.random((500, thresholds.size)) < 0.1).astype(np.uint8)
    args = (ops, flips, circuit.num_qubits, circuit.num_clbits)
    from repbench import _ckernels
    np.testing.assert_array_equal(_ckernels.propagate_shots(*args), _pykernels.propagate_shots(*args))


@needs_compiled
def test_sample_identical_across_backends():
    circuit = rep_code.build(5, 2).circuit_1
    noise = NoiseModel(0.05, 0.05)
    results = {}
    for name in ("python", "cython"):
        _backend.use(name)
        results[name] = sample(circuit, noise, 20000, seed=11)
    _backend.use("cython")
    assert results["python"] == results["cython"]


@needs_compiled
def test_match_dp_agree():
    from repbench import _ckernels
    rng = np.random.default_rng(1)
    for k in (0, 2, 4, 6, 8, 10):
        for _ in range(20):
            a = rng.integers(0, 4, size=(k, k)).astype(float)
            d = a + a.T
            c1, p1 = _ckernels.match_dp(d)
            c2, p2 = _pykernels.match_dp(d)
            assert c1 == c2
            assert list(p1) == list(p2)


def test_match_dp_unreachable(backend):
    d = np.array([[0, 1, np.inf, np.inf],
                  [1, 0, np.inf, np.inf],
                  [np.inf, np.inf, 0, np.inf],
                  [np.inf, np.inf, np.inf, 0]])
    cost, _ = _backend.kernels.match_dp(d)
    assert cost == np.inf


def test_propagate_rejects_unknown_opcode(backend):
    ops = np.array([[9, 0, 0]], dtype=np.int32)
    flips = np.zeros((1, 0), dtype=np.uint8)
    with pytest.raises(ValueError):
        _backend.kernels.propagate_shots(ops, flips, 1, 1)
