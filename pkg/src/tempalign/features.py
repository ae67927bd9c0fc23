"""Joint feature matrices, PCA reduction and cosine node similarity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .gots import GoTTensor, flatten

DEFAULT_VARIANCE_KEEP = 0.99


@dataclass(frozen=True)
class PCAResult:
    scores: np.ndarray          # rows x n_components projection
    components: np.ndarray      # n_features x n_components, orthonormal columns
    eigenvalues: np.ndarray     # all eigenvalues, descending
    explained_ratio: float      # retained share of total variance

    @property
    def n_components(self) -> int:
        return self.scores.shape[1]


def _orient(vectors: np.ndarray) -> np.ndarray:
    # first non-negligible coordinate of each component is made positive
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            out[:, j] = -col
    return out


def fit_pca(m: np.ndarray, variance_keep: float = DEFAULT_VARIANCE_KEEP) -> PCAResult:
    """PCA via eigendecomposition of the column covariance.

    Keeps the smallest leading set of components whose cumulative explained
    variance reaches ``variance_keep``. A matrix with no variance at all maps
    to a single all-zero column.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] < 2:
        raise ValueError("PCA needs a 2-D matrix with at least 2 rows")
    if not 0 < variance_keep <= 1:
        raise ValueError("variance_keep must be in (0, 1]")
    centered = m - m.mean(axis=0)
    cov = centered.T @ centered / (m.shape[0] - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals, kind="stable")[::-1]
    eigvals = np.clip(eigvals[order], 0.0, None)
    eigvecs = eigvecs[:, order]
    cum = np.cumsum(eigvals)
    total = cum[-1] if cum.size else 0.0
    if total <= 1e-12 * max(1.0, float(np.abs(m).max(initial=0.0))) ** 2:
        return PCAResult(np.zeros((m.shape[0], 1)), np.eye(m.shape[1], 1), eigvals, 1.0)
    n_keep = int(np.searchsorted(cum, variance_keep * total, side="left")) + 1
    n_keep = min(n_keep, len(eigvals))
    comps = _orient(eigvecs[:, :n_keep])
    return PCAResult(centered @ comps, comps, eigvals, float(cum[n_keep - 1] / total))


def pca_reduce(m: np.ndarray, variance_keep: float = DEFAULT_VARIANCE_KEEP) -> np.ndarray:
    return fit_pca(m, variance_keep).scores


def cosine_similarity(a, b) -> float:
    """Cosine rescaled to [0, 1]; a zero vector is neutral (0.5)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.5
    cos = float(a @ b) / (na * nb)
    return min(1.0, max(0.0, (1.0 + cos) / 2.0))


def similarity_matrix(a: np.ndarray, b: np.ndarray, zero_tol: float = 1e-9) -> np.ndarray:
    """Pairwise rescaled cosine between rows of ``a`` and rows of ``b``.

    Rows whose norm falls below ``zero_tol`` times the largest row norm are
    treated as zero vectors.
    """
    na = np.linalg.norm(a, axis=1)
    nb = np.linalg.norm(b, axis=1)
    scale = max(na.max(initial=0.0), nb.max(initial=0.0))
    za = na <= zero_tol * scale
    zb = nb <= zero_tol * scale
    ua = a / np.where(za, 1.0, na)[:, None]
    ub = b / np.where(zb, 1.0, nb)[:, None]
    sim = (1.0 + ua @ ub.T) / 2.0
    sim[za, :] = 0.5
    sim[:, zb] = 0.5
    return np.clip(sim, 0.0, 1.0)


def joint_matrix(gots_g: GoTTensor, gots_h: GoTTensor, ks=None, log1p: bool = False) -> np.ndarray:
    """Stack flattened features (G rows then H rows), dropping columns zero in both."""
    if gots_g.mode != gots_h.mode:
        raise ValueError(f"mode mismatch: {gots_g.mode} vs {gots_h.mode}")
    ks = gots_g.ks if ks is None else tuple(sorted(ks))
    if any(k not in gots_h.matrices for k in ks) or any(k not in gots_g.matrices for k in ks):
        raise ValueError(f"both tensors must contain k={ks}")
    joined = sp.vstack([flatten(gots_g, ks), flatten(gots_h, ks)], format="csc")
    used = np.flatnonzero(joined.getnnz(axis=0))
    dense = joined[:, used].toarray().astype(float)
    if log1p:
        dense = np.log1p(dense)
    return dense


def similarities_from_matrix(joined: np.ndarray, n_g: int, variance_keep: float = DEFAULT_VARIANCE_KEEP) -> np.ndarray:
    if joined.shape[1] == 0:
        return np.full((n_g, joined.shape[0] - n_g), 0.5)
    scores = pca_reduce(joined, variance_keep)
    return similarity_matrix(scores[:n_g], scores[n_g:])


def node_similarities(gots_g: GoTTensor, gots_h: GoTTensor, ks=None,
                      variance_keep: float = DEFAULT_VARIANCE_KEEP, log1p: bool = False) -> np.ndarray:
    """``n_G x n_H`` similarity matrix between the nodes of two networks."""
    joined = joint_matrix(gots_g, gots_h, ks, log1p)
    return similarities_from_matrix(joined, gots_g.n_nodes, variance_keep)


def format_similarity(sim: np.ndarray, header=()) -> str:
    lines = [f"# {h}" for h in header]
    lines += ["\t".join(f"{x:.12g}" for x in row) for row in sim]
    return "\n".join(lines) + "\n"
