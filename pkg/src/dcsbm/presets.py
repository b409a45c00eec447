"""Named model families used by the experiments and the CLI.

eppm            two equal communities, within-rate a, cross-rate b, flat
                weights log^2 n.
fig1-3block     three equal communities, the rank-2 block matrix
                [[1,2,3],[2,0,2],[3,2,5]], weights growing like the cube
                root of the within-block position.
bimodal-allones all-ones block matrix, two equal communities whose weights
                differ by a fixed ratio: the communities are pure degree
                classes, invisible to the degree-normalized operator.
planted-hubs    two bulk communities plus a handful of very heavy vertices
                in a third block wired so hub-hub pairs never occur; the
                hubs capture the top adjacency eigenvectors.
"""

from __future__ import annotations

import numpy as np

from .model import DcsbmParams, contiguous_sigma, weight_family

PRESET_NAMES = ("eppm", "fig1-3block", "bimodal-allones", "planted-hubs")


def eppm(n: int, a: float = 5.0, b: float = 1.0,
         weight: float | None = None) -> DcsbmParams:
    alpha = np.array([0.5, 0.5])
    sigma = contiguous_sigma(n, alpha)
    w = weight if weight is not None else np.log(n) ** 2
    return DcsbmParams(
        n=n,
        K=2,
        alpha=alpha,
        sigma=sigma,
        weights=weight_family("constant", n, param=w),
        block=np.array([[a, b], [b, a]]),
    )


def fig1_3block(n: int = 3000) -> DcsbmParams:
    alpha = np.array([1, 1, 1]) / 3.0
    sigma = contiguous_sigma(n, alpha)
    return DcsbmParams(
        n=n,
        K=3,
        alpha=alpha,
        sigma=sigma,
        weights=weight_family("blockpow3", n, sigma=sigma),
        block=np.array([[1.0, 2.0, 3.0], [2.0, 0.0, 2.0], [3.0, 2.0, 5.0]]),
    )


def bimodal_allones(n: int, ratio: float = 10.0) -> DcsbmParams:
    """Degree classes as communities; the block matrix carries no signal.

    A weight ratio of 100 satisfies the edge-probability cap only for n
    in the tens of thousands; the default of 10 keeps the same structure
    at reachable sizes.
    """
    alpha = np.array([0.5, 0.5])
    sigma = contiguous_sigma(n, alpha)
    base = np.log(n) ** 2
    weights = np.where(sigma == 0, base, ratio * base)
    return DcsbmParams(
        n=n,
        K=2,
        alpha=alpha,
        sigma=sigma,
        weights=weights,
        block=np.ones((2, 2)),
    )


def planted_hubs(n: int = 4000, k: int = 5, bulk_weight: float | None = None,
                 a: float = 5.0, b: float = 0.5,
                 hub_degree_fractions: tuple[float, ...] | None = None) -> DcsbmParams:
    """Two bulk communities plus k heavyweight hub vertices.

    Hubs sit in a third block with zero hub-hub rate. hub_degree_fractions
    gives each hub's target expected degree as a fraction of n; a
    descending ladder keeps the star eigenvalues separated while staying
    small enough that the hub neighbourhoods overlap only lightly (the
    star picture needs hub degrees well below n). The bulk is kept sparse
    so the square roots of the hub degrees clear every bulk eigenvalue.
    """
    if k < 1 or k >= n // 2:
        raise ValueError("k out of range")
    bulk = n - k
    half = bulk // 2
    alpha = np.array([half / n, (bulk - half) / n, k / n])
    sigma = np.concatenate(
        [np.zeros(half, dtype=np.int64),
         np.ones(bulk - half, dtype=np.int64),
         np.full(k, 2, dtype=np.int64)]
    )
    w_bulk = bulk_weight if bulk_weight is not None else np.log(n) / 1.6
    if hub_degree_fractions is None:
        hub_degree_fractions = tuple(0.24 * 0.72 ** i for i in range(k))
    if len(hub_degree_fractions) != k:
        raise ValueError("need one degree fraction per hub")
    weights = np.full(n, w_bulk)
    # E[hub degree] = D_h * (bulk weight mass) / (n * Dbar); solve for the
    # hub weights D_h jointly with Dbar (linear in the ladder sum).
    frac = np.asarray(hub_degree_fractions, dtype=np.float64)
    mass_bulk = w_bulk * bulk
    # n * Dbar = mass_bulk + sum(D_h); D_h = f_i * n * (mass_bulk + S) / mass_bulk
    # => S = sum(f_i) * n * (mass_bulk + S) / mass_bulk
    fsum = float(frac.sum()) * n
    if fsum >= mass_bulk:
        raise ValueError("hub degree fractions too large for this bulk")
    s_total = fsum * mass_bulk / (mass_bulk - fsum)
    weights[bulk:] = frac * n * (mass_bulk + s_total) / mass_bulk
    block = np.array([[a, b, 1.0], [b, a, 1.0], [1.0, 1.0, 0.0]])
    return DcsbmParams(n=n, K=3, alpha=alpha, sigma=sigma, weights=weights, block=block)


def heavy_tail_hub_weights(n: int, d1: float, beta: float, gamma: float) -> np.ndarray:
    """Exponent-parameterized heavy-tail weights: d1 for all but the top
    k = n^beta nodes, then d1 * n^gamma * (rank within the tail). Only
    meaningful at very large n; the planted-hubs preset is the desk-scale
    stand-in."""
    return weight_family("heavytail", n, param=d1, extra=(beta, gamma))


def make_preset(name: str, n: int, **kwargs) -> DcsbmParams:
    if name == "eppm":
        return eppm(n, **kwargs)
    if name == "fig1-3block":
        return fig1_3block(n, **kwargs)
    if name == "bimodal-allones":
        return bimodal_allones(n, **kwargs)
    if name == "planted-hubs":
        return planted_hubs(n, **kwargs)
    raise ValueError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")
