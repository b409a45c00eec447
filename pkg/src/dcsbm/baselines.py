"""Comparison methods and failure-mode experiments.

Raw-adjacency spectral clustering (fooled by high-degree hubs), the
star-system diagnostic quantifying that failure, (regularized) Laplacian
spectral clustering with unit-sphere row projection, SCORE ratio
clustering and Frobenius-eigenvector thresholding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

from .detect import Clustering, DetectInfo
from .eigen import eigs_topk
from .model import Graph
from .spectra import SymMatrix, adjacency, laplacian


def kmeans(points: np.ndarray, K: int, seed: int = 0, restarts: int = 50,
           max_iter: int = 300) -> tuple[np.ndarray, np.ndarray, float]:
    """Lloyd's algorithm, best of `restarts` by within-cluster sum of squares.

    Seeding is k-means++-style from a generator seeded once, so results are
    deterministic given (points, K, seed). Ties between restarts keep the
    earliest. Returns (labels, centres, wcss).
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if K > n:
        raise ValueError("K exceeds number of points")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(max(1, restarts)):
        centres = _kpp_init(points, K, rng)
        labels = np.zeros(n, dtype=np.int64)
        for _ in range(max_iter):
            d2 = ((points[:, None, :] - centres[None, :, :]) ** 2).sum(axis=2)
            new_labels = np.argmin(d2, axis=1)
            for c in range(K):
                mask = new_labels == c
                if mask.any():
                    centres[c] = points[mask].mean(axis=0)
                else:
                    # Re-seed an empty cluster on the farthest point.
                    far = int(np.argmax(np.min(d2, axis=1)))
                    centres[c] = points[far]
                    new_labels[far] = c
            if np.array_equal(new_labels, labels):
                break
            labels = new_labels
        wcss = float(((points - centres[labels]) ** 2).sum())
        if best is None or wcss < best[2]:
            best = (labels.copy(), centres.copy(), wcss)
    return best


def _kpp_init(points: np.ndarray, K: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centres = np.empty((K, points.shape[1]))
    centres[0] = points[rng.integers(n)]
    d2 = ((points - centres[0]) ** 2).sum(axis=1)
    for c in range(1, K):
        total = d2.sum()
        if total <= 0:
            centres[c] = points[rng.integers(n)]
        else:
            centres[c] = points[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, ((points - centres[c]) ** 2).sum(axis=1))
    return centres


def _clustering_from_labels(labels: np.ndarray, K: int, points: np.ndarray,
                            warnings: list[str] | None = None) -> Clustering:
    centres = np.zeros((K, points.shape[1] if points.ndim > 1 else 1))
    for c in range(K):
        mask = labels == c
        if mask.any():
            centres[c] = points[mask].mean(axis=0)
    info = DetectInfo()
    if warnings:
        info.warnings.extend(warnings)
    return Clustering(labels=labels, C=K, centres=centres, info=info)


def adjacency_spectral(graph: Graph, K: int, seed: int = 0,
                       restarts: int = 50) -> Clustering:
    """k-means on the rows of the top-K adjacency eigenvectors."""
    if K < 1:
        raise ValueError("K must be >= 1")
    A = adjacency(graph)
    eigsys = eigs_topk(A, min(K, graph.n))
    rows = eigsys.vectors
    labels, _, _ = kmeans(rows, K, seed=seed, restarts=restarts)
    return _clustering_from_labels(labels, K, rows)


@dataclass
class StarReport:
    centre: int
    leaf_count: int
    eigenvalue: float
    cosine: float
    localization: float


@dataclass
class StarDominanceReport:
    """Alignment of the top adjacency eigenvectors with a greedy star system."""

    stars: list[StarReport] = field(default_factory=list)
    gap_estimate: float = float("nan")

    @property
    def cosines(self) -> np.ndarray:
        return np.array([s.cosine for s in self.stars])


def star_system(graph: Graph, k: int) -> list[tuple[int, np.ndarray]]:
    """Greedy vertex-disjoint stars: centres are the k highest-degree nodes,
    leaves are their neighbours not adjacent to an earlier centre."""
    if k > graph.n:
        raise ValueError("k exceeds node count")
    order = np.lexsort((np.arange(graph.n), -graph.degrees))
    centres = order[:k]
    A = adjacency(graph)
    csr = A._m
    centre_set = set(int(c) for c in centres)
    blocked = np.zeros(graph.n, dtype=bool)
    stars = []
    for c in centres:
        nbrs = csr.indices[csr.indptr[c] : csr.indptr[c + 1]]
        leaves = np.array(
            [v for v in nbrs if not blocked[v] and int(v) not in centre_set],
            dtype=np.int64,
        )
        stars.append((int(c), leaves))
        blocked[leaves] = True
        blocked[c] = True
    return stars


def _ideal_star_vector(n: int, centre: int, leaves: np.ndarray,
                       positive_branch: bool) -> np.ndarray:
    v = np.zeros(n)
    if leaves.size == 0:
        v[centre] = 1.0
        return v
    v[centre] = 1.0 / np.sqrt(2.0)
    leaf_val = 1.0 / np.sqrt(2.0 * leaves.size)
    v[leaves] = leaf_val if positive_branch else -leaf_val
    return v


def star_dominance(graph: Graph, k: int) -> StarDominanceReport:
    """Compare the top-k adjacency eigenvectors to the ideal star vectors."""
    stars = star_system(graph, k)
    A = adjacency(graph)
    eigsys = eigs_topk(A, min(k, graph.n))
    report = StarDominanceReport()
    star_degrees = sorted((leaves.size for _, leaves in stars), reverse=True)
    roots = np.sqrt(np.maximum(np.array(star_degrees, dtype=np.float64), 0.0))
    if len(roots) > 1:
        gaps = -np.diff(roots)
        report.gap_estimate = float(gaps.min()) if gaps.size else float("nan")
    elif len(roots) == 1:
        report.gap_estimate = float(roots[0])
    for j in range(eigsys.k):
        x = eigsys.vectors[:, j]
        lam = eigsys.values[j]
        best = None
        for centre, leaves in stars:
            ideal = _ideal_star_vector(graph.n, centre, leaves, lam >= 0)
            cos = abs(float(x @ ideal))
            support = np.concatenate([[centre], leaves]).astype(np.int64)
            mass = float((x[support] ** 2).sum())
            if best is None or cos > best[1]:
                best = (centre, cos, mass, leaves.size)
        report.stars.append(
            StarReport(
                centre=best[0],
                leaf_count=best[3],
                eigenvalue=float(lam),
                cosine=best[1],
                localization=best[2],
            )
        )
    return report


def laplacian_spectral(graph: Graph, K: int, tau: float = 0.0, seed: int = 0,
                       restarts: int = 50, n_vectors: int | None = None,
                       project: bool = True) -> Clustering:
    """k-means on unit-sphere-projected rows of the top Laplacian eigenvectors.

    Zero rows (isolated vertices at tau = 0 cannot occur; at tau > 0 they
    embed at the origin) stay at the origin and are left unassigned.

    n_vectors defaults to K. project=False clusters the raw rows instead:
    needed when the class signal lives in row magnitudes, as for pure
    degree classes under an uninformative block matrix, where the top
    eigenvector alone separates the classes and projection would erase it.
    """
    L = laplacian(graph, tau)
    dim = n_vectors if n_vectors is not None else K
    eigsys = eigs_topk(L, min(dim, graph.n))
    rows = eigsys.vectors.copy()
    norms = np.linalg.norm(rows, axis=1)
    nonzero = norms > 1e-12
    if project:
        rows[nonzero] /= norms[nonzero, None]
    labels = np.full(graph.n, -1, dtype=np.int64)
    if nonzero.any():
        sub_labels, _, _ = kmeans(rows[nonzero], K, seed=seed, restarts=restarts)
        labels[nonzero] = sub_labels
    return _clustering_from_labels(labels, K, rows)


def score_cluster(graph: Graph, K: int, seed: int = 0,
                  restarts: int = 50) -> Clustering:
    """SCORE: k-means on coordinate-wise ratios of leading adjacency eigenvectors.

    Ratios r_u(i) = x_{i+1}(u) / x_1(u), i = 1..K-1, restricted to the giant
    component and clipped to [-log n, log n]; other components unassigned.
    """
    if K < 2:
        raise ValueError("SCORE needs K >= 2")
    A = adjacency(graph)
    ncomp, comp = connected_components(A._m, directed=False)
    sizes = np.bincount(comp)
    giant = int(np.argmax(sizes))
    mask = comp == giant
    sub = A._m[mask][:, mask].tocsr()
    eigsys = eigs_topk(SymMatrix(sub, sparse=True), min(K, int(mask.sum())))
    lead = eigsys.vectors[:, 0]
    clip = np.log(graph.n)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = eigsys.vectors[:, 1:K] / lead[:, None]
    ratios = np.nan_to_num(ratios, nan=0.0, posinf=clip, neginf=-clip)
    ratios = np.clip(ratios, -clip, clip)
    sub_labels, _, _ = kmeans(ratios, K, seed=seed, restarts=restarts)
    labels = np.full(graph.n, -1, dtype=np.int64)
    labels[mask] = sub_labels
    points = np.zeros((graph.n, ratios.shape[1]))
    points[mask] = ratios
    return _clustering_from_labels(labels, K, points)


def frobenius_threshold(matrix: SymMatrix, index: int = 1) -> Clustering:
    """Two clusters split at zero on the index-th eigenvector by |lambda|.

    The sign convention (largest-magnitude entry positive) makes the split
    invariant under eigenvector sign flips. A one-sided split (for example
    the leading vector of a connected nonnegative operator, which is
    entrywise positive) is flagged degenerate.
    """
    if index < 1:
        raise ValueError("index must be >= 1 (1 = leading)")
    eigsys = eigs_topk(matrix, index)
    x = eigsys.vectors[:, index - 1]
    labels = (x > 0).astype(np.int64)
    warnings = []
    if labels.all() or not labels.any():
        warnings.append("degenerate split: eigenvector does not change sign")
    points = x[:, None]
    return _clustering_from_labels(labels, 2, points, warnings)
