"""Operators built from graphs and models.

Constructors for A, the degree-normalized adjacency Hhat (entries
A_uv / (Dhat_u Dhat_v)), its expected-degree sibling H, the dense
population matrices E[H] and P, the K x K block matrix Z, and the
(regularized) Laplacian family. All are wrapped in SymMatrix, a thin
immutable facade over a CSR or dense ndarray backing.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .model import DcsbmParams, Graph, ModelError, aggregates, expected_degrees


class SymMatrix:
    """Symmetric real matrix, sparse (CSR) or dense, read-only after build."""

    __slots__ = ("n", "_m", "sparse")

    def __init__(self, mat, sparse: bool):
        self._m = mat
        self.sparse = sparse
        self.n = mat.shape[0]

    @staticmethod
    def from_upper(n: int, us: np.ndarray, vs: np.ndarray, vals: np.ndarray,
                   diag: np.ndarray | None = None) -> "SymMatrix":
        """Build from strictly-upper entries; mirroring guarantees symmetry."""
        rows = np.concatenate([us, vs])
        cols = np.concatenate([vs, us])
        data = np.concatenate([vals, vals])
        if diag is not None:
            idx = np.arange(n)
            rows = np.concatenate([rows, idx])
            cols = np.concatenate([cols, idx])
            data = np.concatenate([data, diag])
        m = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
        return SymMatrix(m, sparse=True)

    @staticmethod
    def from_dense(arr: np.ndarray) -> "SymMatrix":
        """Mirror the upper triangle onto the lower; never trusts both halves."""
        arr = np.asarray(arr, dtype=np.float64)
        out = np.triu(arr)
        out = out + np.triu(arr, 1).T
        return SymMatrix(out, sparse=False)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self._m @ x

    def toarray(self) -> np.ndarray:
        if self.sparse:
            return self._m.toarray()
        return self._m

    def row_sums(self) -> np.ndarray:
        if self.sparse:
            return np.asarray(self._m.sum(axis=1)).ravel()
        return self._m.sum(axis=1)

    @property
    def nnz(self) -> int:
        if self.sparse:
            return int(self._m.nnz)
        return int(np.count_nonzero(self._m))

    def entry(self, u: int, v: int) -> float:
        return float(self._m[u, v])

    def __sub__(self, other: "SymMatrix") -> "SymMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        if self.sparse and other.sparse:
            return SymMatrix((self._m - other._m).tocsr(), sparse=True)
        return SymMatrix(self.toarray() - other.toarray(), sparse=False)

    def dump(self, path) -> None:
        """Write 'u v value' coordinate text, upper triangle only."""
        arr_iter = self._iter_upper()
        with open(path, "w") as fh:
            fh.write(f"# symmatrix n={self.n}\n")
            for u, v, val in arr_iter:
                fh.write(f"{u} {v} {float(val)!r}\n")

    def _iter_upper(self):
        if self.sparse:
            coo = self._m.tocoo()
            keep = coo.row <= coo.col
            order = np.lexsort((coo.col[keep], coo.row[keep]))
            rows, cols, vals = coo.row[keep][order], coo.col[keep][order], coo.data[keep][order]
            yield from zip(rows, cols, vals)
        else:
            for u in range(self.n):
                for v in range(u, self.n):
                    if self._m[u, v] != 0.0:
                        yield u, v, self._m[u, v]

    @staticmethod
    def load(path) -> "SymMatrix":
        n = None
        us, vs, vals, diag_u, diag_v = [], [], [], [], []
        with open(path) as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    for tok in line[1:].split():
                        if tok.startswith("n="):
                            n = int(tok[2:])
                    continue
                try:
                    u_s, v_s, val_s = line.split()
                    u, v, val = int(u_s), int(v_s), float(val_s)
                except ValueError as exc:
                    raise ValueError(
                        f"{path}:{lineno}: expected 'u v value', got {line!r}"
                    ) from exc
                if u == v:
                    diag_u.append(u)
                    diag_v.append(val)
                else:
                    us.append(u)
                    vs.append(v)
                    vals.append(val)
        if n is None:
            tops = [*us, *vs, *diag_u]
            n = (max(tops) + 1) if tops else 0
        diag = np.zeros(n)
        if diag_u:
            diag[np.array(diag_u, dtype=np.int64)] = diag_v
        return SymMatrix.from_upper(
            n,
            np.array(us, dtype=np.int64),
            np.array(vs, dtype=np.int64),
            np.array(vals, dtype=np.float64),
            diag=diag if diag_u else None,
        )


def adjacency(graph: Graph) -> SymMatrix:
    """0/1 adjacency matrix, zero diagonal."""
    us, vs = graph.edges[:, 0], graph.edges[:, 1]
    return SymMatrix.from_upper(graph.n, us, vs, np.ones(us.shape[0]))


def normalized_adjacency(graph: Graph) -> SymMatrix:
    """Entry (u, v) is 1/(Dhat_u Dhat_v) on edges, zero elsewhere."""
    us, vs = graph.edges[:, 0], graph.edges[:, 1]
    d = graph.degrees.astype(np.float64)
    vals = 1.0 / (d[us] * d[vs])
    return SymMatrix.from_upper(graph.n, us, vs, vals)


def inflated_normalized_adjacency(graph: Graph, floor: float) -> SymMatrix:
    """Entry (u, v) is 1/max(Dhat_u Dhat_v, floor) on edges."""
    if floor <= 0:
        raise ValueError("floor must be positive")
    us, vs = graph.edges[:, 0], graph.edges[:, 1]
    d = graph.degrees.astype(np.float64)
    vals = 1.0 / np.maximum(d[us] * d[vs], floor)
    return SymMatrix.from_upper(graph.n, us, vs, vals)


def model_normalized(graph: Graph, params: DcsbmParams) -> SymMatrix:
    """Entry (u, v) is A_uv / (E[Dhat_u] E[Dhat_v]) on edges."""
    ed = expected_degrees(params)
    us, vs = graph.edges[:, 0], graph.edges[:, 1]
    if us.size and (np.any(ed[us] <= 0) or np.any(ed[vs] <= 0)):
        raise ModelError("edge endpoint with zero expected degree")
    vals = 1.0 / (ed[us] * ed[vs])
    return SymMatrix.from_upper(graph.n, us, vs, vals)


def expected_model_normalized(params: DcsbmParams) -> SymMatrix:
    """Dense E[H]: edge_probability(u, v) / (E[Dhat_u] E[Dhat_v]), zero diagonal."""
    ed = expected_degrees(params)
    if np.any(ed <= 0):
        raise ModelError("zero expected degree")
    w, sig = params.weights, params.sigma
    coef = params.block[np.ix_(sig, sig)]
    g = w / ed
    out = np.outer(g, g) * coef / (params.n * params.d_bar)
    np.fill_diagonal(out, 0.0)
    return SymMatrix(out, sparse=False)


def population_matrix(params: DcsbmParams) -> SymMatrix:
    """Dense P: (1/(n Dbar)) * B[s_u, s_v] / (Mbar_{s_u} Mbar_{s_v}), diagonal kept."""
    agg = aggregates(params)
    if np.any(agg.M_bar <= 0):
        raise ModelError("zero Mbar_i")
    sig = params.sigma
    C = params.block / np.outer(agg.M_bar, agg.M_bar)
    out = C[np.ix_(sig, sig)] / (params.n * agg.d_bar)
    return SymMatrix(out, sparse=False)


def population_matvec(params: DcsbmParams, x: np.ndarray) -> np.ndarray:
    """P @ x in O(nK) without forming P."""
    agg = aggregates(params)
    sig = params.sigma
    block_sums = np.bincount(sig, weights=x, minlength=params.K)
    C = params.block / np.outer(agg.M_bar, agg.M_bar)
    per_block = C @ block_sums / (params.n * agg.d_bar)
    return per_block[sig]


def block_matrix_Z(params: DcsbmParams) -> np.ndarray:
    """K x K matrix Z_ij = alpha_j B_ij / (Mbar_i Mbar_j); not symmetric."""
    agg = aggregates(params)
    if np.any(agg.M_bar <= 0):
        raise ModelError("zero Mbar_i")
    return params.alpha[None, :] * params.block / np.outer(agg.M_bar, agg.M_bar)


def block_matrix_Z_symmetrized(params: DcsbmParams) -> np.ndarray:
    """diag(sqrt(alpha)) C diag(sqrt(alpha)); similar to Z, so same spectrum."""
    agg = aggregates(params)
    root = np.sqrt(params.alpha)
    C = params.block / np.outer(agg.M_bar, agg.M_bar)
    return root[:, None] * C * root[None, :]


def z_spectrum(params: DcsbmParams) -> np.ndarray:
    """Real eigenvalues of Z, descending by absolute value."""
    vals = np.linalg.eigvalsh(block_matrix_Z_symmetrized(params))
    return vals[np.argsort(-np.abs(vals), kind="stable")]


def population_spectrum(params: DcsbmParams) -> np.ndarray:
    """Full eigenvalue multiset of P: lifted Z eigenvalues plus the zeros."""
    agg = aggregates(params)
    lifted = z_spectrum(params) / agg.d_bar
    return np.concatenate([lifted, np.zeros(params.n - lifted.size)])


def lift_Z_eigenvector(params: DcsbmParams, y: np.ndarray, lam: float,
                       tol: float = 1e-8) -> tuple[np.ndarray, float]:
    """Lift an eigenpair of Z to one of P: w_u = y(s_u), eigenvalue lam/Dbar."""
    y = np.asarray(y, dtype=np.float64)
    Z = block_matrix_Z(params)
    if np.linalg.norm(Z @ y - lam * y) > tol * max(np.linalg.norm(y), 1e-300):
        raise ModelError("y is not an eigenvector of Z for this eigenvalue")
    agg = aggregates(params)
    w = y[params.sigma]
    mu = lam / agg.d_bar
    resid = np.linalg.norm(population_matvec(params, w) - mu * w)
    if resid > tol * max(np.linalg.norm(w), 1e-300):
        raise ModelError(f"lifted vector residual {resid:.3g} exceeds tolerance")
    return w, float(mu)


def laplacian(graph: Graph, tau: float = 0.0) -> SymMatrix:
    """D_tau^{-1/2} A D_tau^{-1/2} with D_tau = D + tau I.

    tau = 0 requires no isolated vertices; see laplacian_shifted for I - L.
    """
    if tau < 0:
        raise ValueError("tau must be >= 0")
    d = graph.degrees.astype(np.float64) + tau
    if np.any(d == 0):
        raise ValueError("tau=0 with isolated vertex")
    us, vs = graph.edges[:, 0], graph.edges[:, 1]
    vals = 1.0 / np.sqrt(d[us] * d[vs])
    return SymMatrix.from_upper(graph.n, us, vs, vals)


def laplacian_shifted(graph: Graph, tau: float = 0.0) -> SymMatrix:
    """I - D_tau^{-1/2} A D_tau^{-1/2} (the conventional normalized Laplacian)."""
    base = laplacian(graph, tau)
    m = sp.identity(graph.n, format="csr") - base._m
    return SymMatrix(m.tocsr(), sparse=True)


def expected_laplacian(params: DcsbmParams) -> SymMatrix:
    """Population Laplacian side: E[D]^{-1/2} E[A] E[D]^{-1/2}, zero diagonal."""
    ed = expected_degrees(params)
    if np.any(ed <= 0):
        raise ModelError("zero expected degree")
    w, sig = params.weights, params.sigma
    coef = params.block[np.ix_(sig, sig)]
    g = w / np.sqrt(ed)
    out = np.outer(g, g) * coef / (params.n * params.d_bar)
    np.fill_diagonal(out, 0.0)
    return SymMatrix(out, sparse=False)
