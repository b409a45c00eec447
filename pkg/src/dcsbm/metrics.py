"""Clustering quality and concentration diagnostics.

misclassification matches predicted clusters to truth labels by optimal
assignment; concentration_report measures the spectral radii of the
operator decomposition Hhat - P = (Hhat - H) + (H - E[H]) + (E[H] - P)
against the population gap; random_walk_checks verifies the return-walk
identities satisfied by the degree-normalized adjacency matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .detect import Clustering
from .eigen import eigen_gap, spectral_radius
from .model import DcsbmParams, Graph, aggregates
from .spectra import (
    expected_model_normalized,
    model_normalized,
    normalized_adjacency,
    population_matrix,
    population_spectrum,
)

DENSE_LIMIT = 4096


def _labels_of(pred) -> np.ndarray:
    if isinstance(pred, Clustering):
        return pred.labels
    return np.asarray(pred, dtype=np.int64)


def misclassification(predicted, truth) -> tuple[float, dict[int, int]]:
    """Error fraction under the best injective map from clusters to labels.

    Unassigned nodes (label < 0) always count as errors. Returns the
    fraction and the optimal matching {cluster -> truth label}.
    """
    pred = _labels_of(predicted)
    truth = np.asarray(truth, dtype=np.int64)
    if pred.shape != truth.shape:
        raise ValueError("length mismatch")
    n = pred.size
    if n == 0:
        return 0.0, {}
    assigned = pred >= 0
    pred_ids = np.unique(pred[assigned])
    truth_ids = np.unique(truth)
    C, T = pred_ids.size, truth_ids.size
    if C == 0:
        return 1.0, {}
    conf = np.zeros((C, T), dtype=np.int64)
    pmap = {c: i for i, c in enumerate(pred_ids)}
    tmap = {t: j for j, t in enumerate(truth_ids)}
    for p, t in zip(pred[assigned], truth[assigned]):
        conf[pmap[p], tmap[t]] += 1
    side = max(C, T)
    padded = np.zeros((side, side), dtype=np.int64)
    padded[:C, :T] = conf
    rows, cols = linear_sum_assignment(padded, maximize=True)
    agree = int(padded[rows, cols].sum())
    matching = {
        int(pred_ids[r]): int(truth_ids[c])
        for r, c in zip(rows, cols)
        if r < C and c < T
    }
    return (n - agree) / n, matching


def misclassification_brute(predicted, truth) -> float:
    """Exhaustive minimum over injective cluster-to-label maps (small C only)."""
    from itertools import permutations

    pred = _labels_of(predicted)
    truth = np.asarray(truth, dtype=np.int64)
    n = pred.size
    assigned = pred >= 0
    pred_ids = list(np.unique(pred[assigned]))
    truth_ids = list(np.unique(truth))
    if len(pred_ids) > 6:
        raise ValueError("brute force limited to C <= 6")
    best = n
    universe = truth_ids + [None] * max(0, len(pred_ids) - len(truth_ids))
    for perm in permutations(universe, len(pred_ids)):
        agree = 0
        for c, t in zip(pred_ids, perm):
            if t is None:
                continue
            agree += int(np.count_nonzero((pred == c) & (truth == t)))
        best = min(best, n - agree)
    return best / n if n else 0.0


@dataclass(frozen=True)
class ConcentrationReport:
    """Spectral radii of the decomposition terms and the population gap."""

    rho_hat_h: float  # rho(Hhat - H)
    rho_h_eh: float  # rho(H - E[H])
    rho_eh_p: float  # rho(E[H] - P)
    rho_w: float  # rho(Hhat - P)
    gap_p: float  # gap of the population spectrum
    d_bar: float

    @property
    def scaled(self) -> dict[str, float]:
        return {
            "rho_hat_h_dbar": self.rho_hat_h * self.d_bar,
            "rho_h_eh_dbar": self.rho_h_eh * self.d_bar,
            "rho_eh_p_dbar": self.rho_eh_p * self.d_bar,
            "rho_w_dbar": self.rho_w * self.d_bar,
            "rho_w_over_gap": self.rho_w / self.gap_p if self.gap_p else float("inf"),
        }


def concentration_report(graph: Graph, params: DcsbmParams) -> ConcentrationReport:
    """Measure every decomposition term on one sampled graph."""
    if graph.n > DENSE_LIMIT:
        raise ValueError(f"n > {DENSE_LIMIT}: differences are dense, subsample first")
    hhat = normalized_adjacency(graph)
    h = model_normalized(graph, params)
    eh = expected_model_normalized(params)
    p = population_matrix(params)
    agg = aggregates(params)
    gap = eigen_gap(population_spectrum(params))
    return ConcentrationReport(
        rho_hat_h=spectral_radius(hhat - h),
        rho_h_eh=spectral_radius(h - eh),
        rho_eh_p=spectral_radius(eh - p),
        rho_w=spectral_radius(hhat - p),
        gap_p=gap,
        d_bar=agg.d_bar,
    )


@dataclass
class RandomWalkReport:
    """Return-walk identity and Perron bounds for the normalized adjacency."""

    identity_residual: float  # || degrees @ Hhat - 1{deg != 0} ||_inf
    lambda_max: float
    lower_bound: float  # 1 / max degree
    upper_bound: float  # max row sum
    lower_ok: bool
    upper_ok: bool
    entry_checks_ok: bool

    @property
    def all_ok(self) -> bool:
        return (
            self.identity_residual <= 1e-12
            and self.lower_ok
            and self.upper_ok
            and self.entry_checks_ok
        )


def random_walk_checks(graph: Graph, sample_edges: int = 256,
                       seed: int = 0) -> RandomWalkReport:
    """Verify degrees @ Hhat = 1{deg != 0}, the Perron bounds on the top
    eigenvalue, and the two-step return probability on sampled edges."""
    hhat = normalized_adjacency(graph)
    d = graph.degrees.astype(np.float64)
    lhs = hhat.matvec(d)  # symmetric, so row and column action agree
    target = (graph.degrees != 0).astype(np.float64)
    residual = float(np.max(np.abs(lhs - target))) if graph.n else 0.0
    if graph.num_edges == 0:
        return RandomWalkReport(residual, 0.0, 0.0, 0.0, True, True, True)
    lam = spectral_radius(hhat)
    lower = 1.0 / float(graph.degrees.max())
    upper = float(hhat.row_sums().max())
    rng = np.random.default_rng(seed)
    m = graph.num_edges
    take = rng.choice(m, size=min(sample_edges, m), replace=False)
    ok = True
    for idx in take:
        u, v = (int(x) for x in graph.edges[idx])
        step = (1.0 / d[u]) * (1.0 / d[v])  # P(u->v) * P(v->u)
        if abs(hhat.entry(u, v) - step) > 1e-15:
            ok = False
            break
    return RandomWalkReport(
        identity_residual=residual,
        lambda_max=lam,
        lower_bound=lower,
        upper_bound=upper,
        lower_ok=lam >= lower - 1e-10,
        upper_ok=lam <= upper + 1e-10,
        entry_checks_ok=ok,
    )


def estimate_block_ratios(graph: Graph, clustering) -> np.ndarray:
    """Estimator of B_ij / (Mbar_i Mbar_j) from one observed graph.

    Entry (i, j) = (sum of degrees) * (sum of Hhat over the cluster pair)
    / (n_i * n_j); unassigned nodes are excluded.
    """
    labels = _labels_of(clustering)
    hhat = normalized_adjacency(graph)
    ids = np.unique(labels[labels >= 0])
    if ids.size == 0:
        raise ValueError("no nonempty clusters")
    total_degree = float(graph.degrees.sum())
    C = ids.size
    out = np.zeros((C, C))
    indicators = [np.asarray(labels == c, dtype=np.float64) for c in ids]
    for a, ind_a in enumerate(indicators):
        ha = hhat.matvec(ind_a)
        for b, ind_b in enumerate(indicators):
            na, nb = ind_a.sum(), ind_b.sum()
            if na == 0 or nb == 0:
                raise ValueError("empty cluster")
            out[a, b] = total_degree * float(ind_b @ ha) / (na * nb)
    return out


@dataclass(frozen=True)
class ObservationRatioReport:
    """Both sides of the edge-count/degree-mass ratio identity.

    Expected counts use the idealized pair accounting of the model (ordered
    pairs, self-pairs included), under which proportional normalized rows
    make the two ratios agree exactly.
    """

    ratio_i: float
    ratio_l: float
    premise_holds: bool  # B_ij / M_i == B_lj / M_l (1e-9 relative)
    ratios_equal: bool
    implication_ok: bool


def observation_ratio_check(params: DcsbmParams, i: int, j: int,
                            l: int) -> ObservationRatioReport:
    """Check that proportional normalized block rows equalize the
    edges-to-degree-mass ratios of communities i and l against j."""
    agg = aggregates(params)
    w, sig, B = params.weights, params.sigma, params.block
    s = np.bincount(sig, weights=w, minlength=params.K)  # block weight mass
    scale = params.n * agg.d_bar

    def ratio(a: int) -> float:
        edges_aj = B[a, j] * s[a] * s[j] / scale  # ordered-pair accounting
        degree_a = s[a] * agg.M[a] / scale
        return edges_aj / degree_a

    ri, rl = ratio(i), ratio(l)
    lhs, rhs = B[i, j] / agg.M[i], B[l, j] / agg.M[l]
    premise = abs(lhs - rhs) <= 1e-9 * max(abs(lhs), abs(rhs), 1e-300)
    equal = abs(ri - rl) <= 1e-9 * max(abs(ri), abs(rl), 1e-300)
    return ObservationRatioReport(
        ratio_i=float(ri),
        ratio_l=float(rl),
        premise_holds=bool(premise),
        ratios_equal=bool(equal),
        implication_ok=bool(equal or not premise),
    )
