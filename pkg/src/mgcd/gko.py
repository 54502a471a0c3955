"""Pivoted LU of Cauchy-like matrices computed on generators (GKO).

Each elimination step rebuilds one column (and one row) of the current Schur
complement from the generators, picks the pivot, and updates the generators
of the next Schur complement. The cost is ``O(alpha * m * n)`` overall.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .displacement import (
    NODE_FLOOR,
    CauchyGenerators,
    ToeplitzGenerators,
    toeplitz_to_cauchy,
    vector_from_cauchy,
    vector_to_cauchy,
)

#: Default relative pivot threshold for numerical rank.
RANK_TOL = 1e-8
#: Left generator growth that triggers re-orthonormalization (``gu`` pivoting).
GROWTH_LIMIT = 1e6


class NodeCollisionError(ValueError):
    def __init__(self, i: int, j: int, gap: float):
        self.pair = (i, j)
        self.gap = gap
        super().__init__(f"Cauchy nodes d1[{i}] and d2[{j}] are {gap:.3e} apart (floor {NODE_FLOOR:g})")


class SingularMatrixError(np.linalg.LinAlgError):
    def __init__(self, rank: int, corank: int):
        self.rank = rank
        self.corank = corank
        super().__init__(f"matrix is singular to working precision: rank {rank}, corank {corank}")


@dataclass(frozen=True, eq=False)
class StructuredLU:
    """``C[row_perm][:, col_perm] = L @ U`` with unit lower triangular ``L``."""

    row_perm: np.ndarray
    col_perm: np.ndarray
    L: np.ndarray
    U: np.ndarray
    pivots: np.ndarray
    shape: tuple[int, int]
    reorthogonalizations: int = 0

    def reconstruct(self) -> np.ndarray:
        """Dense ``C`` rebuilt from the factors (diagnostics only)."""
        C = np.empty(self.shape, dtype=complex)
        LU = self.L @ self.U
        C[np.ix_(self.row_perm, self.col_perm)] = LU
        return C


@dataclass(frozen=True)
class RankReport:
    numerical_rank: int
    corank: int
    pivot_magnitudes: np.ndarray
    gap_location: int | None
    threshold_used: float
    row_norms: np.ndarray = field(default_factory=lambda: np.zeros(0))


def check_nodes(cg: CauchyGenerators, floor: float = NODE_FLOOR) -> None:
    gaps = cg.node_gaps()
    if gaps.size == 0:
        return
    i, j = np.unravel_index(np.argmin(gaps), gaps.shape)
    if gaps[i, j] < floor:
        raise NodeCollisionError(int(i), int(j), float(gaps[i, j]))


def gko_lu(cg: CauchyGenerators, pivoting: str = "gu", growth: float = GROWTH_LIMIT) -> StructuredLU:
    """Gaussian elimination with pivoting on a Cauchy-like matrix.

    Parameters
    ----------
    cg : CauchyGenerators
        Nodes and generators of ``C``.
    pivoting : {"gu", "partial"}
        ``"partial"`` is plain row pivoting (``col_perm`` stays the identity).
        ``"gu"`` additionally swaps in the largest entry of the pivot row when
        it beats the column pivot, and re-orthonormalizes the left generator
        whenever its row norms grow past ``growth`` times their initial
        maximum.

    Returns
    -------
    StructuredLU
        All ``min(m, n)`` elimination steps; small trailing pivots are kept
        so that the rank can be judged afterwards.
    """
    if pivoting not in ("gu", "partial"):
        raise ValueError(f"unknown pivoting strategy {pivoting!r}")
    check_nodes(cg)
    m, n = cg.shape
    G = np.array(cg.G, dtype=complex)
    H = np.array(cg.H, dtype=complex)
    d1 = np.array(cg.d1, dtype=complex)
    d2 = np.array(cg.d2, dtype=complex)
    rperm = np.arange(m)
    cperm = np.arange(n)
    r = min(m, n)
    L = np.zeros((m, r), dtype=complex)
    U = np.zeros((r, n), dtype=complex)
    g0 = np.sqrt((np.abs(G) ** 2).sum(axis=1)).max() if G.size else 0.0
    reorth = 0

    for k in range(r):
        col = (G[k:] @ H[:, k]) / (d1[k:] - d2[k])
        p = int(np.argmax(np.abs(col)))
        if pivoting == "gu":
            row = (G[k + p] @ H[:, k:]) / (d1[k + p] - d2[k:])
            q = int(np.argmax(np.abs(row)))
            if q > 0 and abs(row[q]) > abs(col[p]):
                j = k + q
                H[:, [k, j]] = H[:, [j, k]]
                d2[[k, j]] = d2[[j, k]]
                cperm[[k, j]] = cperm[[j, k]]
                U[:k, [k, j]] = U[:k, [j, k]]
                col = (G[k:] @ H[:, k]) / (d1[k:] - d2[k])
                p = int(np.argmax(np.abs(col)))
        if p > 0:
            i = k + p
            G[[k, i]] = G[[i, k]]
            d1[[k, i]] = d1[[i, k]]
            rperm[[k, i]] = rperm[[i, k]]
            L[[k, i], :k] = L[[i, k], :k]
            col[[0, p]] = col[[p, 0]]
        row = (G[k] @ H[:, k:]) / (d1[k] - d2[k:])
        piv = col[0]
        U[k, k:] = row
        L[k, k] = 1.0
        if piv == 0:
            # zero column: the trailing block is already the Schur complement
            continue
        lcol = col[1:] / piv
        L[k + 1 :, k] = lcol
        G[k + 1 :] -= np.outer(lcol, G[k])
        H[:, k + 1 :] -= np.outer(H[:, k], row[1:] / piv)
        if pivoting == "gu" and k + 1 < m and g0 > 0:
            gmax = np.sqrt((np.abs(G[k + 1 :]) ** 2).sum(axis=1)).max()
            if gmax > growth * g0:
                Q, R = np.linalg.qr(G[k + 1 :])
                G[k + 1 :] = 0.0
                G[k + 1 :, : Q.shape[1]] = Q
                Hr = R @ H[:, k + 1 :]
                H[:, k + 1 :] = 0.0
                H[: Hr.shape[0], k + 1 :] = Hr
                reorth += 1

    pivots = np.abs(np.diag(U[:, :r])) if r else np.zeros(0)
    return StructuredLU(rperm, cperm, L, U, pivots, (m, n), reorth)


def estimate_rank(lu: StructuredLU, tol: float = RANK_TOL) -> RankReport:
    """Numerical rank: pivots with ``|u_kk| > tol * max |u_kk|``.

    ``gap_location`` is the position (in decreasing order) after which the
    largest drop of ``log|u_kk|`` occurs; it is diagnostic only.
    """
    piv = lu.pivots
    n = lu.shape[1]
    top = piv.max() if piv.size else 0.0
    threshold = tol * top
    rank = int(np.sum(piv > threshold)) if top > 0 else 0
    srt = np.sort(piv)[::-1]
    gap = None
    if srt.size > 1:
        with np.errstate(divide="ignore"):
            logs = np.log10(np.maximum(srt, np.finfo(float).tiny))
        gap = int(np.argmax(logs[:-1] - logs[1:])) + 1
    row_norms = np.linalg.norm(lu.U, axis=1)
    return RankReport(rank, n - rank, srt, gap, float(threshold), row_norms)


def _singular_guard(lu: StructuredLU):
    n = lu.shape[0]
    rep = estimate_rank(lu, tol=max(n, 1) * np.finfo(float).eps)
    if rep.numerical_rank < n:
        raise SingularMatrixError(rep.numerical_rank, n - rep.numerical_rank)


def solve(lu: StructuredLU, rhs: np.ndarray) -> np.ndarray:
    """Solve ``C x = rhs`` for a square nonsingular factorized ``C``."""
    m, n = lu.shape
    if m != n:
        raise ValueError("solve needs a square factorization; use basic_solve")
    _singular_guard(lu)
    y = np.asarray(rhs, dtype=complex)[lu.row_perm]
    z = scipy.linalg.solve_triangular(lu.L, y, lower=True, unit_diagonal=True)
    t = scipy.linalg.solve_triangular(lu.U, z, lower=False)
    x = np.empty_like(t)
    x[lu.col_perm] = t
    return x


def basic_solve(lu: StructuredLU, rhs: np.ndarray) -> np.ndarray:
    """A solution of the wide system ``C x = rhs`` (``m <= n``).

    The unknowns beyond the leading ``m`` pivot columns are set to zero; this
    is a basic solution, not the minimum-norm one.
    """
    m, n = lu.shape
    if m > n:
        raise ValueError("basic_solve needs m <= n")
    _singular_guard(lu)
    y = np.asarray(rhs, dtype=complex)[lu.row_perm]
    z = scipy.linalg.solve_triangular(lu.L[:, :m], y, lower=True, unit_diagonal=True)
    t = scipy.linalg.solve_triangular(lu.U[:, :m], z, lower=False)
    x = np.zeros(n, dtype=complex)
    x[lu.col_perm[:m]] = t
    return x


def null_basis(lu: StructuredLU, rank: int) -> np.ndarray:
    """Columns spanning the approximate kernel once the rank is fixed.

    The leading ``rank x rank`` block of ``U`` is back-solved against each of
    the trailing columns; the trailing coordinates are set to a unit vector.
    """
    n = lu.shape[1]
    if rank >= n:
        raise SingularMatrixError(rank, 0) from None
    W = np.zeros((n, n - rank), dtype=complex)
    W[rank:] = np.eye(n - rank)
    if rank > 0:
        W[:rank] = -scipy.linalg.solve_triangular(lu.U[:rank, :rank], lu.U[:rank, rank:], lower=False)
    out = np.empty_like(W)
    out[lu.col_perm] = W
    return out


def null_vector(cg: CauchyGenerators, rank: int, lu: StructuredLU | None = None) -> np.ndarray:
    """One approximate kernel vector of ``C`` given its numerical rank."""
    n = cg.shape[1]
    if rank >= n:
        raise ValueError(f"rank {rank} leaves no kernel in dimension {n}")
    if lu is None:
        lu = gko_lu(cg)
    return null_basis(lu, rank)[:, 0]


def solve_toeplitz_like(tg: ToeplitzGenerators, b: np.ndarray, pivoting: str = "gu") -> np.ndarray:
    """Solve ``A x = b`` for a square Toeplitz-like ``A`` given by generators."""
    cg = toeplitz_to_cauchy(tg)
    lu = gko_lu(cg, pivoting)
    w = solve(lu, vector_to_cauchy(b, "left"))
    return vector_from_cauchy(w, "right", tg.theta)
