"""Bézout matrices and Barnett's formula for multiplication matrices.

The multiplication matrix ``M_g`` of ``h -> g*h mod f`` on ``C[x]/(f)`` is
assembled as ``B_{g,f} B_{1,f}^{-1}`` without any Euclidean division. Single
rows and columns cost one matrix-vector product and one triangular Hankel
solve.

The product cancels heavily: ``B_{1,f}^{-1}`` grows like the largest root
modulus of ``f`` to the power ``deg f`` while ``M_g`` stays moderate, so in
double precision the relative error is about ``eps * |B_{g,f}| |B_{1,f}^{-1}| / |M_g|``
(1e-10 is common at degree 40). Both factors and their product are therefore
formed in extended precision (``WORK_DTYPE``) and rounded once at the end.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .poly import Polynomial, monic, poly_divmod

#: Working type of the Barnett assembly; x87 long double where numpy has it.
WORK_DTYPE = np.clongdouble if np.finfo(np.longdouble).eps < np.finfo(float).eps else np.complex128


def _coeffs(p: Polynomial, n: int, dtype=complex) -> np.ndarray:
    return p.padded(n + 1)[: n + 1].astype(dtype)


def _bezout(f: Polynomial, g: Polynomial, n: int, dtype) -> np.ndarray:
    a = _coeffs(f, n, dtype)
    b = _coeffs(g, n, dtype)
    c = np.outer(a, b) - np.outer(b, a)
    theta = np.zeros((n, n), dtype=dtype)
    theta[0, :] = -c[0, 1:]
    for i in range(1, n):
        theta[i, : n - 1] = theta[i - 1, 1:] - c[i, 1:n]
        theta[i, n - 1] = -c[i, n]
    return theta


def bezout_matrix(f: Polynomial, g: Polynomial) -> np.ndarray:
    """Symmetric Bézout matrix of ``(f(x)g(y) - f(y)g(x)) / (x - y)``.

    Entry ``(i, j)`` is the coefficient of ``x**i * y**j``; the size is
    ``max(deg f, deg g)``.

    Notes
    -----
    Matching coefficients of ``x**i y**(j+1)`` in
    ``(x - y) * Theta = sum_{k,l} (f_k g_l - f_l g_k) x**k y**l`` gives
    ``theta[i, j] = theta[i-1, j+1] - c[i, j+1]``, filled row by row in
    ``O(n**2)``.
    """
    if f.is_zero and g.is_zero:
        raise ValueError("bezout_matrix needs at least one nonzero polynomial")
    n = max(f.degree, g.degree)
    if n <= 0:
        return np.zeros((0, 0), dtype=complex)
    return _bezout(f, g, n, complex)


def hankel_bezout(f: Polynomial) -> np.ndarray:
    """``B_{1,f}``: entry ``(i, j)`` is ``-f[i+j+1]`` (zero once ``i+j >= deg f``)."""
    d = f.degree
    if d < 1:
        raise ValueError("hankel_bezout needs deg f >= 1")
    ext = np.zeros(2 * d + 1, dtype=complex)
    ext[: d + 1] = f.coeffs
    idx = np.add.outer(np.arange(d), np.arange(d)) + 1
    return -ext[idx]


class HankelTriangularSolver:
    """Solves ``B_{1,f} u = r`` in ``O(d**2)`` without forming an inverse.

    Reversing the rows of ``B_{1,f}`` gives a lower triangular Toeplitz matrix
    whose symbol is ``t(z) = -sum_i f[d-i] z**i``; its inverse is the
    Toeplitz matrix of the power series ``1/t(z)``, computed once.
    """

    def __init__(self, f: Polynomial):
        d = f.degree
        if d < 1:
            raise ValueError("Hankel solver needs deg f >= 1")
        self.d = d
        t = -f.coeffs[::-1][:d].astype(WORK_DTYPE)
        inv = np.zeros(d, dtype=WORK_DTYPE)
        inv[0] = 1.0 / t[0]
        for i in range(1, d):
            inv[i] = -np.dot(t[1 : i + 1], inv[i - 1 :: -1]) * inv[0]
        self._inv = inv

    def solve(self, r: np.ndarray) -> np.ndarray:
        """Solution in ``WORK_DTYPE``; round it with ``.astype(complex)`` when done."""
        r = np.asarray(r).astype(WORK_DTYPE)
        if r.ndim == 1:
            return np.convolve(self._inv, r[::-1])[: self.d]
        T = scipy.linalg.toeplitz(self._inv, np.zeros(self.d, dtype=WORK_DTYPE))
        return T @ r[::-1]


class MultiplicationMatrix:
    """Lazy access to ``M_g`` on ``C[x]/(f)`` through Barnett's formula.

    ``f`` is made monic (the quotient ring only depends on the ideal). When
    ``deg g > deg f`` the input is first reduced modulo ``f``, the single
    place where a division is used.
    """

    def __init__(self, f: Polynomial, g: Polynomial):
        if f.degree < 1:
            raise ValueError("the modulus must have degree >= 1")
        self.f = monic(f)
        self.f_scale = f.leading
        if g.degree > self.f.degree:
            g = poly_divmod(g, self.f)[1]
        self.g = g
        self.d = self.f.degree
        self._hankel = HankelTriangularSolver(self.f)
        if g.is_zero:
            self._bez = np.zeros((self.d, self.d), dtype=WORK_DTYPE)
        else:
            # B_{g,f} carries the positive sign of M_g
            self._bez = _bezout(g, self.f, self.d, WORK_DTYPE)

    def column(self, j: int) -> np.ndarray:
        if not 0 <= j < self.d:
            raise IndexError(f"column index {j} outside 0..{self.d - 1}")
        e = np.zeros(self.d, dtype=WORK_DTYPE)
        e[j] = 1.0
        return (self._bez @ self._hankel.solve(e)).astype(complex)

    def row(self, j: int) -> np.ndarray:
        if not 0 <= j < self.d:
            raise IndexError(f"row index {j} outside 0..{self.d - 1}")
        return self._hankel.solve(self._bez[:, j]).astype(complex)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if v.shape[0] != self.d:
            raise ValueError(f"vector length {v.shape[0]} != {self.d}")
        return (self._bez @ self._hankel.solve(v)).astype(complex)

    def dense(self) -> np.ndarray:
        # M_g^T = B_{1,f}^{-1} B_{g,f} since both factors are symmetric
        return self._hankel.solve(self._bez).T.astype(complex)


def barnett_mult_matrix(f: Polynomial, g: Polynomial) -> np.ndarray:
    """Dense ``d x d`` matrix of ``h -> g*h mod f``; column ``j`` is ``x**j g mod f``."""
    return MultiplicationMatrix(f, g).dense()


def mult_matrix_column(f: Polynomial, g: Polynomial, j: int) -> np.ndarray:
    return MultiplicationMatrix(f, g).column(j)


def mult_matrix_row(f: Polynomial, g: Polynomial, j: int) -> np.ndarray:
    return MultiplicationMatrix(f, g).row(j)


def frobenius(f: Polynomial) -> np.ndarray:
    """Companion matrix of multiplication by ``x``: subdiagonal ones, last column ``-f_i/f_d``."""
    d = f.degree
    if d < 1:
        raise ValueError("frobenius needs deg f >= 1")
    C = np.zeros((d, d), dtype=complex)
    C[np.arange(1, d), np.arange(d - 1)] = 1.0
    C[:, -1] = -f.coeffs[:d] / f.coeffs[d]
    return C


def companion_apply(f: Polynomial, w: np.ndarray) -> np.ndarray:
    """``frobenius(f) @ w`` in ``O(d)``: the coefficients of ``x*w(x) mod f``."""
    fc = f.coeffs
    top = w[-1] / fc[-1]
    out = np.empty_like(w)
    out[0] = 0.0
    out[1:] = w[:-1]
    out -= top * fc[:-1]
    return out
