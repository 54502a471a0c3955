"""Toeplitz-like displacement generators and the Fourier map to Cauchy-like form.

Conventions
-----------
``Z_n^theta`` is the down-shift with ``theta`` in the top-right corner and
``nabla(A) = Z_m^1 A - A Z_n^theta``. The unitary Fourier matrix is
``F[k, j] = exp(2j*pi*j*k/n) / sqrt(n)``, so that ``F Z_n^1 F^H`` is
``diag(exp(2j*pi*k/n))``. With ``omega = exp(1j*angle(theta)/n)`` and
``D = diag(omega**j)`` the matrix ``C = F_m A D^{-1} F_n^H`` satisfies
``D1 C - C D2 = (F_m G)(H D^{-1} F_n^H)`` where ``D1`` holds the m-th roots of
unity and ``D2 = omega * (n-th roots of unity)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bezout import MultiplicationMatrix, companion_apply
from .poly import Polynomial, monic

#: Generator compression threshold, relative to ``||G||_F ||H||_F``.
COMPRESS_TOL = 1e-12
#: Smallest admissible ``|d1_i - d2_j|``.
NODE_FLOOR = 1e-10


@dataclass(frozen=True, eq=False)
class ToeplitzGenerators:
    """``Z^1 A - A Z^theta = G @ H`` for an implicit ``nrows x ncols`` matrix ``A``."""

    G: np.ndarray
    H: np.ndarray
    theta: complex

    def __post_init__(self):
        if self.G.ndim != 2 or self.H.ndim != 2 or self.G.shape[1] != self.H.shape[0]:
            raise ValueError(f"incompatible generator shapes {self.G.shape} and {self.H.shape}")
        if not math.isclose(abs(self.theta), 1.0, rel_tol=0, abs_tol=1e-12):
            raise ValueError(f"|theta| must be 1, got {abs(self.theta)!r}")

    @property
    def nrows(self) -> int:
        return self.G.shape[0]

    @property
    def ncols(self) -> int:
        return self.H.shape[1]

    @property
    def alpha(self) -> int:
        return self.G.shape[1]

    def displaced(self) -> np.ndarray:
        return self.G @ self.H


@dataclass(frozen=True, eq=False)
class CauchyGenerators:
    """``diag(d1) C - C diag(d2) = G @ H``."""

    d1: np.ndarray
    d2: np.ndarray
    G: np.ndarray
    H: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.d1.size, self.d2.size

    @property
    def alpha(self) -> int:
        return self.G.shape[1]

    def node_gaps(self) -> np.ndarray:
        return np.abs(np.subtract.outer(self.d1, self.d2))

    def dense(self) -> np.ndarray:
        return (self.G @ self.H) / np.subtract.outer(self.d1, self.d2)


def shift_matrix(n: int, theta: complex = 1.0) -> np.ndarray:
    Z = np.zeros((n, n), dtype=complex)
    if n == 0:
        return Z
    Z[np.arange(1, n), np.arange(n - 1)] = 1.0
    Z[0, n - 1] += theta
    return Z


def displaced(A: np.ndarray, theta: complex = 1.0) -> np.ndarray:
    """Dense ``Z_m^1 A - A Z_n^theta``."""
    A = np.asarray(A, dtype=complex)
    ZA = np.roll(A, 1, axis=0)
    AZ = np.empty_like(A)
    AZ[:, :-1] = A[:, 1:]
    AZ[:, -1] = theta * A[:, 0]
    return ZA - AZ


def default_theta(m: int, n: int) -> complex:
    """Corner value maximizing ``min |d1_i - d2_j|`` for an ``m x n`` matrix.

    Reduced modulo ``2*pi/n`` the m-th roots of unity sit on a uniform grid
    of step ``2*pi*gcd(m, n)/(m*n)``; the best rotation is half a step, i.e.
    ``theta = exp(1j*pi*gcd(m, n)/m)``. The square case gives ``theta = -1``.
    """
    return complex(np.exp(1j * math.pi * math.gcd(m, n) / m))


def compress(G: np.ndarray, H: np.ndarray, tol: float = COMPRESS_TOL):
    """Orthogonal compression of ``G @ H`` to its numerical rank."""
    alpha = G.shape[1]
    if alpha == 0:
        return G, H
    scale = np.linalg.norm(G) * np.linalg.norm(H)
    if scale == 0.0:
        return G[:, :0], H[:0, :]
    Q1, R1 = np.linalg.qr(G)
    Q2, R2 = np.linalg.qr(H.conj().T)
    U, s, Vh = np.linalg.svd(R1 @ R2.conj().T)
    r = int(np.sum(s > tol * scale))
    Gc = Q1 @ (U[:, :r] * s[:r])
    Hc = Vh[:r, :] @ Q2.conj().T
    return Gc, Hc


def _shifted_columns(mm: MultiplicationMatrix, js) -> dict[int, np.ndarray]:
    """Columns ``x**j * p mod f`` for the polynomial ``p`` behind ``mm``, any ``j >= 0``.

    Indices past ``d - 1`` continue from the last Barnett column by repeated
    multiplication by ``x`` in ``O(d)`` each.
    """
    d = mm.d
    out = {}
    js = sorted(set(js))
    tail = None
    tail_j = None
    for j in js:
        if j < d:
            out[j] = mm.column(j)
            continue
        if tail is None:
            tail, tail_j = mm.column(d - 1), d - 1
        while tail_j < j:
            tail = companion_apply(mm.f, tail)
            tail_j += 1
        out[j] = tail
    return out


def mult_matrix_generators(mm: MultiplicationMatrix, theta: complex = -1.0, tol=COMPRESS_TOL):
    d = mm.d
    if d < 2:
        raise ValueError("displacement generators need deg f >= 2")
    fc = mm.f.coeffs
    first = mm.column(0)
    last = mm.column(d - 1)
    last_row = mm.row(d - 1)
    u = fc[:d].copy()
    u[0] += 1.0  # e_0 - c, c being the companion column -f_i
    a = theta * first - companion_apply(mm.f, last)
    e = np.zeros(d, dtype=complex)
    e[-1] = 1.0
    G = np.column_stack([u, -a])
    H = np.vstack([last_row, e])
    G, H = compress(G, H, tol)
    return ToeplitzGenerators(G, H, complex(theta))


def generators_of_mult_matrix(f: Polynomial, g: Polynomial, theta: complex = -1.0) -> ToeplitzGenerators:
    """Rank-2 generators of ``nabla(M_g)`` from one row and two columns of ``M_g``.

    ``Z^1 = Frob(f) + (e_0 - c) e_{d-1}^T`` with ``c`` the companion column,
    and ``Frob(f)`` commutes with ``M_g``. Hence
    ``nabla(M_g) = (e_0 - c) M_g[d-1, :] - (theta M_g[:, 0] - Frob M_g[:, d-1]) e_{d-1}^T``.
    """
    return mult_matrix_generators(MultiplicationMatrix(f, g), theta)


def jacobian_generators(f: Polynomial, g: np.ndarray, v: np.ndarray, theta: complex | None = None,
                        tol=COMPRESS_TOL) -> ToeplitzGenerators:
    """Generators for the Jacobian of ``(g, v_0..v_{k-1}) -> M_g v``.

    ``g`` holds ``m + 1`` coefficients and ``v`` the ``k + 1`` coefficients of
    the monic cofactor. The Jacobian is ``[K_v | K_g]`` where column ``j`` of
    ``K_v`` is ``x**j v mod f`` (``j = 0..m``) and ``K_g = M_g[:, :k]``.
    Shifting a column by ``Frob(f)`` yields its right neighbour except at the
    block seam and at the wrap-around, which adds two rank-one terms to the
    ``(e_0 - c) J[d-1, :]`` term: displacement rank 3.
    """
    f = monic(f)
    d = f.degree
    g = np.asarray(g, dtype=complex)
    v = np.asarray(v, dtype=complex)
    m = g.size - 1
    k = v.size - 1
    if k < 1 or k >= d:
        raise ValueError(f"cofactor degree {k} must lie in 1..{d - 1}")
    if m < 0:
        raise ValueError("g must have at least one coefficient")
    ncols = m + k + 1
    if theta is None:
        theta = default_theta(d, ncols)
    Mv = MultiplicationMatrix(f, Polynomial(v, trim=False))
    Mg = MultiplicationMatrix(f, Polynomial(g, trim=False))
    vcols = _shifted_columns(Mv, list(range(max(d, 0), m + 1)) + [m + 1])
    last_row = np.empty(ncols, dtype=complex)
    last_row[: min(m + 1, d)] = Mv.row(d - 1)[: min(m + 1, d)]
    for j in range(d, m + 1):
        last_row[j] = vcols[j][-1]
    last_row[m + 1 :] = Mg.row(d - 1)[:k]

    fc = f.coeffs
    u = fc[:d].copy()
    u[0] += 1.0
    v_mod = np.zeros(d, dtype=complex)
    v_mod[: k + 1] = v
    seam = vcols[m + 1] - Mg.column(0)
    wrap = Mg.column(k) - theta * v_mod
    G = np.column_stack([u, seam, wrap])
    H = np.zeros((3, ncols), dtype=complex)
    H[0] = last_row
    H[1, m] = 1.0
    H[2, ncols - 1] = 1.0
    G, H = compress(G, H, tol)
    return ToeplitzGenerators(G, H, complex(theta))


def generators_of_jacobian(f: Polynomial, g: Polynomial, v: Polynomial, theta: complex | None = None):
    """Polynomial-level wrapper of :func:`jacobian_generators`; ``v`` must be monic."""
    if v.degree < 1:
        raise ValueError("cofactor must have degree >= 1")
    if abs(v.leading - 1.0) > 1e-12:
        raise ValueError("cofactor must be monic")
    return jacobian_generators(f, g.coeffs, v.coeffs, theta)


# Fourier side


def fourier(x: np.ndarray, axis: int = 0) -> np.ndarray:
    """``F @ x`` along ``axis``."""
    n = x.shape[axis]
    return np.fft.ifft(x, axis=axis) * math.sqrt(n)


def fourier_adjoint(y: np.ndarray, axis: int = 0) -> np.ndarray:
    n = y.shape[axis]
    return np.fft.fft(y, axis=axis) / math.sqrt(n)


def roots_of_unity(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def _twist(n: int, theta: complex) -> np.ndarray:
    omega = np.exp(1j * np.angle(theta) / n)
    return omega ** np.arange(n)


def cauchy_nodes(m: int, n: int, theta: complex) -> tuple[np.ndarray, np.ndarray]:
    omega = np.exp(1j * np.angle(theta) / n)
    return roots_of_unity(m), omega * roots_of_unity(n)


def toeplitz_to_cauchy(tg: ToeplitzGenerators) -> CauchyGenerators:
    """Cauchy-like generators of ``F_m A D^{-1} F_n^H``; ``alpha`` is unchanged."""
    m, n = tg.nrows, tg.ncols
    d1, d2 = cauchy_nodes(m, n, tg.theta)
    Gc = fourier(tg.G, axis=0)
    Hc = fourier_adjoint(tg.H / _twist(n, tg.theta), axis=1)
    return CauchyGenerators(d1, d2, Gc, Hc)


def vector_to_cauchy(v: np.ndarray, side: str, theta: complex = -1.0) -> np.ndarray:
    """Change of coordinates pairing ``A v = b`` with ``C w = b_hat``.

    ``side="right"`` maps an unknown ``v`` to ``w = F D v``; ``side="left"``
    maps a right-hand side ``b`` to ``F b``.
    """
    v = np.asarray(v, dtype=complex)
    if side == "right":
        return fourier(v * _twist(v.shape[0], theta).reshape((-1,) + (1,) * (v.ndim - 1)))
    if side == "left":
        return fourier(v)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def vector_from_cauchy(w: np.ndarray, side: str, theta: complex = -1.0) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    if side == "right":
        return fourier_adjoint(w) / _twist(w.shape[0], theta).reshape((-1,) + (1,) * (w.ndim - 1))
    if side == "left":
        return fourier_adjoint(w)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def dense_cauchy_transform(A: np.ndarray, theta: complex) -> np.ndarray:
    """Dense ``F_m A D^{-1} F_n^H`` (test oracle for :func:`toeplitz_to_cauchy`)."""
    m, n = A.shape
    Fm = np.exp(2j * np.pi * np.outer(np.arange(m), np.arange(m)) / m) / math.sqrt(m)
    Fn = np.exp(2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n) / math.sqrt(n)
    return Fm @ (A / _twist(n, theta)) @ Fn.conj().T


def _self_check(n: int = 4) -> None:
    eye = np.eye(n, dtype=complex)
    F = fourier(eye)
    Fh = fourier_adjoint(eye)
    T = F @ shift_matrix(n, 1.0) @ Fh
    if not np.allclose(T, np.diag(roots_of_unity(n)), atol=1e-14):
        raise RuntimeError("Fourier convention drift: F Z F^H is not diag(exp(2j*pi*k/n))")


_self_check()
