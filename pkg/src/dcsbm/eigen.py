"""Symmetric eigensolving: Lanczos with full reorthogonalization.

eigs_topk returns the k eigenpairs of largest absolute eigenvalue, ordered
by descending |lambda| (ties: descending signed lambda, then ascending
position), with a fixed sign convention so runs are comparable. A dense
direct path handles small matrices and doubles as the test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .spectra import SymMatrix

DENSE_CUTOFF = 512
_LANCZOS_SEED = 0xD05EED


class ConvergenceError(RuntimeError):
    """Eigensolver failed to reach the residual tolerance."""


@dataclass(frozen=True)
class EigenSystem:
    """Eigenpairs ordered by descending |lambda|, orthonormal sign-fixed vectors."""

    values: np.ndarray  # (k,)
    vectors: np.ndarray  # (n, k) columns match values
    residuals: np.ndarray  # (k,) ||M x - lambda x||

    @property
    def k(self) -> int:
        return self.values.size


def _order_by_abs(vals: np.ndarray) -> np.ndarray:
    return np.lexsort((np.arange(vals.size), -vals, -np.abs(vals)))


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        i = int(np.argmax(np.abs(col)))
        if col[i] < 0:
            out[:, j] = -col
    return out


def _finalize(mat: SymMatrix, vals: np.ndarray, vecs: np.ndarray) -> EigenSystem:
    order = _order_by_abs(vals)
    vals = vals[order]
    vecs = _fix_signs(vecs[:, order])
    resid = np.array(
        [np.linalg.norm(mat.matvec(vecs[:, j]) - vals[j] * vecs[:, j])
         for j in range(vals.size)]
    )
    return EigenSystem(values=vals, vectors=vecs, residuals=resid)


def dense_eigensystem(mat: SymMatrix, k: int | None = None) -> EigenSystem:
    """Direct solve; the independent oracle for the iterative path."""
    vals, vecs = np.linalg.eigh(mat.toarray())
    sys = _finalize(mat, vals, vecs)
    if k is None or k >= sys.k:
        return sys
    return EigenSystem(sys.values[:k], sys.vectors[:, :k], sys.residuals[:k])


def eigs_topk(mat: SymMatrix, k: int, tol: float = 1e-10,
              max_iter: int | None = None, method: str = "auto") -> EigenSystem:
    """Top-k eigenpairs by |lambda|.

    method: 'auto' solves densely below DENSE_CUTOFF, else Lanczos;
    'dense' / 'lanczos' force a path. Raises ConvergenceError when the
    Krylov sweep cannot push all k residuals below tol within max_iter.
    """
    n = mat.n
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}")
    if method == "dense" or (method == "auto" and n <= DENSE_CUTOFF):
        return dense_eigensystem(mat, k)
    if max_iter is None:
        max_iter = 10 * n
    return _lanczos_topk(mat, k, tol, max_iter)


def _lanczos_topk(mat: SymMatrix, k: int, tol: float, max_iter: int) -> EigenSystem:
    n = mat.n
    rng = np.random.default_rng(_LANCZOS_SEED)
    max_dim = min(n, max(max_iter, k))
    Q = np.zeros((n, max_dim))
    alphas = np.zeros(max_dim)
    betas = np.zeros(max_dim)  # betas[j] couples q_j and q_{j+1}

    def fresh_vector(m: int) -> np.ndarray | None:
        for _ in range(5):
            v = rng.standard_normal(n)
            if m:
                v -= Q[:, :m] @ (Q[:, :m].T @ v)
                v -= Q[:, :m] @ (Q[:, :m].T @ v)
            norm = np.linalg.norm(v)
            if norm > 1e-8:
                return v / norm
        return None

    q = fresh_vector(0)
    m = 0
    check_every = 4
    exhausted = False
    while m < max_dim:
        Q[:, m] = q
        w = mat.matvec(q)
        alphas[m] = q @ w
        w = w - Q[:, : m + 1] @ (Q[:, : m + 1].T @ w)
        w = w - Q[:, : m + 1] @ (Q[:, : m + 1].T @ w)
        beta = np.linalg.norm(w)
        m += 1
        deflated = beta < 1e-14 * max(1.0, np.abs(alphas[:m]).max())
        beta_next = 0.0 if deflated else beta
        if m >= k and (deflated or m % check_every == 0 or m == max_dim):
            resid = _ritz_residual_bound(alphas, betas, m, k, beta_next)
            if np.all(resid <= 0.5 * tol):
                break
        if m == max_dim:
            break
        if deflated:
            # Invariant subspace found; deflate, continue from a fresh start.
            betas[m - 1] = 0.0
            q = fresh_vector(m)
            if q is None:
                exhausted = True
                break
        else:
            betas[m - 1] = beta
            q = w / beta
    sys = _extract(mat, Q, alphas, betas, m, k)
    if np.all(sys.residuals <= tol) or m == n or exhausted:
        return sys
    raise ConvergenceError(
        f"Lanczos did not converge: dim {m}, worst residual {sys.residuals.max():.3g}"
    )


def _ritz_residual_bound(alphas, betas, m, k, beta_next):
    if m == 1:
        return np.full(1, beta_next)
    vals, vecs = eigh_tridiagonal(alphas[:m], betas[: m - 1])
    order = _order_by_abs(vals)[:k]
    # Residual bound |beta_next| * |last Ritz component|; exact if beta_next = 0.
    return np.abs(vecs[-1, order]) * beta_next


def _extract(mat: SymMatrix, Q, alphas, betas, m, k) -> EigenSystem:
    if m == 1:
        vals = alphas[:1].copy()
        vecs = Q[:, :1].copy()
    else:
        tvals, tvecs = eigh_tridiagonal(alphas[:m], betas[: m - 1])
        order = _order_by_abs(tvals)[:k]
        vals = tvals[order]
        vecs = Q[:, :m] @ tvecs[:, order]
        norms = np.linalg.norm(vecs, axis=0)
        vecs /= np.maximum(norms, 1e-300)
    return _finalize(mat, vals[:k], vecs[:, :k])


def spectral_radius(mat: SymMatrix, tol: float = 1e-10) -> float:
    """max |lambda| via the top-1 eigenpair; 0 for an all-zero matrix."""
    if mat.n == 0:
        return 0.0
    if mat.nnz == 0:
        return 0.0
    sys = eigs_topk(mat, 1, tol=tol)
    return float(abs(sys.values[0]))


class DegenerateSpectrum(ValueError):
    """All eigenvalues equal after merging: the gap is undefined."""


def eigen_gap(values: np.ndarray, merge_tol: float = 1e-9) -> float:
    """Smallest gap between distinct eigenvalues, merging within merge_tol."""
    values = np.sort(np.asarray(values, dtype=np.float64))
    reps = []
    start = 0
    for i in range(1, values.size + 1):
        if i == values.size or values[i] - values[i - 1] > merge_tol:
            reps.append(values[start:i].mean())
            start = i
    if len(reps) < 2:
        raise DegenerateSpectrum("all eigenvalues equal; gap undefined")
    reps = np.array(reps)
    return float(np.min(np.diff(reps)))


@dataclass(frozen=True)
class AlignmentReport:
    """Empirical check of the eigenvalue/eigenvector alignment lemma.

    For symmetric A and perturbation dA with rho(dA) < gap(A)/2, the
    perturbed eigenvalues track the originals within rho(dA) (Weyl),
    perturbed eigenspaces are no larger than the originals, and each
    perturbed eigenvector has a matching original with dot product at
    least sqrt(1 - (rho(dA)/(gap/2))^2).
    """

    rho_delta: float
    gap: float
    bound: float
    hypothesis_ok: bool  # rho(dA) < gap/2
    value_shifts: np.ndarray  # |lambda_i - mu_i|
    weyl_ok: np.ndarray  # value_shifts <= rho_delta (+1e-10 slack)
    dots: np.ndarray  # best dot of v_i against the mu_i eigenspace
    dots_ok: np.ndarray  # dots >= bound (-1e-10 slack)
    dim_perturbed: np.ndarray
    dim_original: np.ndarray
    dims_ok: np.ndarray

    @property
    def all_ok(self) -> bool:
        return bool(
            self.weyl_ok.all()
            and (not self.hypothesis_ok or (self.dots_ok.all() and self.dims_ok.all()))
        )


def _merge_groups(values_desc: np.ndarray, merge_tol: float) -> np.ndarray:
    """Group ids for a descending eigenvalue list, chaining within merge_tol."""
    gid = np.zeros(values_desc.size, dtype=np.int64)
    for i in range(1, values_desc.size):
        same = abs(values_desc[i - 1] - values_desc[i]) <= merge_tol
        gid[i] = gid[i - 1] if same else gid[i - 1] + 1
    return gid


def alignment_report(a: SymMatrix, delta: SymMatrix,
                     merge_tol: float = 1e-9) -> AlignmentReport:
    """Verify the alignment lemma numerically on (A, dA); dense path."""
    if a.n != delta.n:
        raise ValueError("dimension mismatch")
    A = a.toarray()
    dA = delta.toarray()
    mu, W = np.linalg.eigh(A)
    mu, W = mu[::-1], W[:, ::-1]  # descending signed order
    lam, V = np.linalg.eigh(A + dA)
    lam, V = lam[::-1], V[:, ::-1]
    rho = float(np.max(np.abs(np.linalg.eigvalsh(dA)))) if a.n else 0.0
    try:
        gap = eigen_gap(mu, merge_tol)
    except DegenerateSpectrum:
        gap = 0.0
    hyp = gap > 0 and rho < gap / 2
    bound = float(np.sqrt(max(0.0, 1.0 - (rho / (gap / 2)) ** 2))) if gap > 0 else 0.0

    shifts = np.abs(lam - mu)
    weyl_ok = shifts <= rho + 1e-10

    mu_gid = _merge_groups(mu, merge_tol)
    lam_gid = _merge_groups(lam, merge_tol)
    mu_dim = np.bincount(mu_gid)
    lam_dim = np.bincount(lam_gid)

    n = a.n
    dots = np.zeros(n)
    for i in range(n):
        members = mu_gid == mu_gid[i]
        proj = W[:, members].T @ V[:, i]
        dots[i] = float(np.linalg.norm(proj))
    dots_ok = dots >= bound - 1e-10
    dim_p = lam_dim[lam_gid]
    dim_o = mu_dim[mu_gid]
    dims_ok = dim_p <= dim_o

    return AlignmentReport(
        rho_delta=rho,
        gap=gap,
        bound=bound,
        hypothesis_ok=bool(hyp),
        value_shifts=shifts,
        weyl_ok=weyl_ok,
        dots=dots,
        dots_ok=dots_ok,
        dim_perturbed=dim_p,
        dim_original=dim_o,
        dims_ok=dims_ok,
    )
