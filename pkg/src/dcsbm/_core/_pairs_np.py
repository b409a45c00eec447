"""NumPy implementation of the counter-based pair sampler.

Each unordered pair (u, v) with u < v gets its own uniform draw derived
from a splitmix64-style hash of (seed, u, v). The draw never depends on
iteration order, so sampling is reproducible under any evaluation order
or parallel split.
"""

import numpy as np

_MASK = (1 << 64) - 1
_GOLD = 0x9E3779B97F4A7C15
_ROW = 0xD1342543DE82EF95
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_U_GOLD = np.uint64(_GOLD)
_U_MIX1 = np.uint64(_MIX1)
_U_MIX2 = np.uint64(_MIX2)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 2.0 ** -53


def _mix_scalar(z: int) -> int:
    z &= _MASK
    z ^= z >> 30
    z = (z * _MIX1) & _MASK
    z ^= z >> 27
    z = (z * _MIX2) & _MASK
    z ^= z >> 31
    return z


def _mix_vec(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> _S30)
    z = z * _U_MIX1
    z = z ^ (z >> _S27)
    z = z * _U_MIX2
    return z ^ (z >> _S31)


def _row_base(seed: int, u: int) -> int:
    seed_h = _mix_scalar((seed ^ _GOLD) & _MASK)
    return _mix_scalar((seed_h + u * _ROW) & _MASK)


def pair_uniform(seed: int, u: int, v: int) -> float:
    """Uniform draw in [0, 1) for the unordered pair (u, v), u < v."""
    h = _mix_scalar(_row_base(seed, u) ^ ((v * _GOLD) & _MASK))
    return (h >> 11) * _INV53


def sample_edges(seed, weights, labels, block, inv_ndbar):
    """Sample all pairs u < v with probability ((D_u*D_v)*B[s_u,s_v])*inv_ndbar.

    Returns (us, vs) int64 arrays sorted lexicographically.
    """
    n = weights.shape[0]
    v_hash = np.arange(n, dtype=np.uint64) * _U_GOLD
    us_out = []
    vs_out = []
    for u in range(n - 1):
        coef = block[labels[u], labels[u + 1 :]]
        if not coef.any():
            continue
        p = weights[u] * weights[u + 1 :] * coef * inv_ndbar
        base = np.uint64(_row_base(seed, u))
        h = _mix_vec(base ^ v_hash[u + 1 :])
        r = (h >> _S11).astype(np.float64) * _INV53
        hits = np.nonzero(r < p)[0]
        if hits.size:
            vs = hits.astype(np.int64) + (u + 1)
            us_out.append(np.full(vs.size, u, dtype=np.int64))
            vs_out.append(vs)
    if not us_out:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy()
    return np.concatenate(us_out), np.concatenate(vs_out)
