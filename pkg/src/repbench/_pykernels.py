"""Pure-Python/numpy versions of the hot kernels.

These must stay bit-for-bit equivalent to ``_ckernels.pyx``.
"""

import numpy as np

OP_X, OP_CX, OP_MEASURE, OP_RESET = 0, 1, 2, 3


def propagate_shots(ops, flips, num_qubits, num_clbits):
    """Run every shot through ``ops`` at once, XOR-ing in the pre-drawn flips.

    ``flips[s, k]`` is the flip bit of noise site ``k`` in shot ``s``; sites
    are consumed in op order (one per X, control then target per CX, one
    record flip per measure).
    """
    shots = flips.shape[0]
    state = np.zeros((shots, num_qubits), dtype=np.uint8)
    out = np.zeros((shots, num_clbits), dtype=np.uint8)
    k = 0
    for opcode, a, b in ops.tolist():
        if opcode == OP_X:
            state[:, a] ^= 1
            state[:, a] ^= flips[:, k]
            k += 1
        elif opcode == OP_CX:
            state[:, b] ^= state[:, a]
            state[:, a] ^= flips[:, k]
            state[:, b] ^= flips[:, k + 1]
            k += 2
        elif opcode == OP_MEASURE:
            out[:, b] = state[:, a] ^ flips[:, k]
            k += 1
        elif opcode == OP_RESET:
            state[:, a] = 0
        else:
            raise ValueError(f"unknown opcode {opcode}")
    return out


def match_dp(dist):
    """Exact minimum-weight perfect matching of a complete graph by subset DP.

    ``dist`` is a symmetric ``k x k`` float array with ``k`` even. Returns
    ``(cost, partner)`` where ``partner[i]`` is the vertex matched to ``i``.
    For each subset the lowest remaining vertex is paired with the
    lowest-index partner that achieves the strict minimum.
    """
    k = dist.shape[0]
    if k == 0:
        return 0.0, []
    d = dist.tolist()
    full = (1 << k) - 1
    inf = float("inf")
    best = [inf] * (1 << k)
    choice = [-1] * (1 << k)
    best[0] = 0.0
    for mask in range(1, full + 1):
        if bin(mask).count("1") & 1:
            continue
        i = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << i)
        row = d[i]
        b = inf
        c = -1
        m = rest
        while m:
            low = m & -m
            j = low.bit_length() - 1
            cand = row[j] + best[rest ^ low]
            if cand < b:
                b = cand
                c = j
            m ^= low
        best[mask] = b
        choice[mask] = c
    partner = [-1] * k
    mask = full
    while mask:
        i = (mask & -mask).bit_length() - 1
        j = choice[mask]
        if j < 0:
            # every pairing of this subset has infinite cost
            return inf, partner
        partner[i] = j
        partner[j] = i
        mask ^= (1 << i) | (1 << j)
    return best[full], partner
