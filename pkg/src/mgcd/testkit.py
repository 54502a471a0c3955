"""Brute-force oracles and planted instances.

Everything here deliberately takes the slow, obvious route (Euclidean
division, dense LAPACK factorizations, finite differences) so that the
structured code paths can be checked against something independent.
Random streams come from :func:`numpy.random.default_rng` (PCG64).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .displacement import ToeplitzGenerators, shift_matrix
from .poly import Polynomial, monic, poly_divmod


@dataclass(frozen=True, eq=False)
class PlantedInstance:
    """``f = cofactor * gcd`` and ``g_exact = w * gcd``; ``g_observed`` adds noise."""

    f: Polynomial
    g_exact: Polynomial
    gcd_degree: int
    g_observed: Polynomial
    eta: float
    seed: int
    gcd: Polynomial
    cofactor: Polynomial

    @property
    def n(self) -> int:
        return self.f.degree

    @property
    def m(self) -> int:
        return self.g_exact.degree

    def noise_norms(self) -> tuple[float, float]:
        """(2-norm, max-norm) of ``g_observed - g_exact``."""
        k = max(len(self.g_observed), len(self.g_exact))
        diff = self.g_observed.padded(k) - self.g_exact.padded(k)
        return float(np.linalg.norm(diff)), float(np.abs(diff).max(initial=0.0))


def random_monic(degree: int, rng: np.random.Generator) -> Polynomial:
    """Monic polynomial with lower coefficients uniform on [-1, 1]."""
    return Polynomial(np.r_[rng.uniform(-1.0, 1.0, degree), 1.0])


def _check_degrees(n, m, gcd_degree):
    if min(n, m, gcd_degree) < 0 or gcd_degree > min(n, m):
        raise ValueError(f"invalid degrees n={n}, m={m}, gcd_degree={gcd_degree}")


def _perturb(g: Polynomial, eta: float, rng) -> Polynomial:
    noise = rng.uniform(-eta, eta, len(g)) if eta > 0 else np.zeros(len(g))
    return Polynomial(g.coeffs + noise)


def plant_instance(n: int, m: int, gcd_degree: int, eta: float, seed: int) -> PlantedInstance:
    """Random monic ``f`` (degree n) and ``g`` (degree m) sharing a factor of degree ``gcd_degree``.

    All factors have coefficients uniform on [-1, 1]; the perturbation is
    uniform on [-eta, eta] in every coefficient of ``g``, leading one
    included, and ``g_observed`` is not renormalized.
    """
    _check_degrees(n, m, gcd_degree)
    rng = np.random.default_rng(seed)
    h = random_monic(gcd_degree, rng)
    c = random_monic(n - gcd_degree, rng)
    w = random_monic(m - gcd_degree, rng)
    g = w * h
    return PlantedInstance(c * h, g, gcd_degree, _perturb(g, eta, rng), eta, seed, h, c)


def separated_roots(count: int, rng, rmin=0.5, rmax=1.3, sep=0.25, max_tries=100_000) -> np.ndarray:
    """``count`` complex points in an annulus with pairwise distance >= ``sep``."""
    pts: list[complex] = []
    tries = 0
    while len(pts) < count:
        tries += 1
        if tries > max_tries:
            raise RuntimeError(f"could not place {count} points with separation {sep}")
        r = np.sqrt(rng.uniform(rmin**2, rmax**2))
        z = r * np.exp(2j * np.pi * rng.uniform())
        if all(abs(z - p) >= sep for p in pts):
            pts.append(complex(z))
    return np.array(pts)


def plant_separated_instance(n: int, m: int, gcd_degree: int, seed: int, eta: float = 0.0,
                             sep: float = 0.25) -> PlantedInstance:
    """Planted instance built from well-separated roots (squarefree ``f``)."""
    _check_degrees(n, m, gcd_degree)
    rng = np.random.default_rng(seed)
    z = separated_roots(n + m - gcd_degree, rng, sep=sep)
    h = Polynomial.from_roots(z[:gcd_degree])
    c = Polynomial.from_roots(z[gcd_degree:n])
    w = Polynomial.from_roots(z[n:])
    g = w * h
    return PlantedInstance(c * h, g, gcd_degree, _perturb(g, eta, rng), eta, seed, h, c)


def brute_force_mult_matrix(f: Polynomial, g: Polynomial) -> np.ndarray:
    """``M_g`` column by column: column ``j`` is ``x**j * g mod f`` by long division."""
    f = monic(f)
    d = f.degree
    cols = []
    for j in range(d):
        r = poly_divmod(Polynomial.monomial(j) * g, f)[1]
        cols.append(r.padded(d))
    return np.column_stack(cols) if cols else np.zeros((0, 0), dtype=complex)


def dense_gepp_solve(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("dense_gepp_solve needs a square matrix")
    lu, piv = scipy.linalg.lu_factor(A, check_finite=True)
    diag = np.abs(np.diag(lu))
    if diag.size and diag.min() <= A.shape[0] * np.finfo(float).eps * diag.max():
        raise np.linalg.LinAlgError("matrix is singular to working precision")
    return scipy.linalg.lu_solve((lu, piv), b)


def dense_least_squares(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Minimum-norm least-squares solution via a complete orthogonal factorization."""
    A = np.asarray(A, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if not np.any(A):
        return np.zeros(A.shape[1], dtype=complex)
    x, *_ = scipy.linalg.lstsq(A, b, lapack_driver="gelsy")
    return x


def euclid_gcd(f: Polynomial, g: Polynomial, tol: float = 1e-8) -> Polynomial:
    """Monic gcd via the Euclidean remainder sequence.

    A remainder is declared zero once its norm falls below ``tol`` times the
    norm of the (monic) dividend.
    """
    if f.is_zero and g.is_zero:
        return Polynomial()
    if g.is_zero:
        return monic(f)
    if f.is_zero:
        return monic(g)
    a, b = monic(f), monic(g)
    if a.degree < b.degree:
        a, b = b, a
    while True:
        if b.degree == 0:
            return Polynomial([1.0])
        r = poly_divmod(a, b)[1]
        if r.is_zero or np.linalg.norm(r.coeffs) <= tol * np.linalg.norm(a.coeffs):
            return monic(b)
        a, b = b, monic(r)


def residual_vector(f: Polynomial, g: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Coefficients of ``g*v mod f`` by long division."""
    f = monic(f)
    prod = np.convolve(np.asarray(g, dtype=complex), np.asarray(v, dtype=complex))
    r = poly_divmod(Polynomial(prod, trim=False), f, clean=False)[1] if prod.size else Polynomial()
    return r.padded(f.degree)[: f.degree]


def finite_difference_jacobian(f: Polynomial, g, v, step: float = 1e-6) -> np.ndarray:
    """Central differences of ``(g_0..g_m, v_0..v_{k-1}) -> g*v mod f``.

    ``g`` and ``v`` are coefficient vectors (or polynomials); the top entry of
    ``v`` is held fixed.
    """
    g = np.array(g.coeffs if isinstance(g, Polynomial) else g, dtype=complex)
    v = np.array(v.coeffs if isinstance(v, Polynomial) else v, dtype=complex)
    m, k = g.size - 1, v.size - 1
    cols = []
    for i in range(m + 1 + k):
        gp, gm, vp, vm = g.copy(), g.copy(), v.copy(), v.copy()
        if i <= m:
            gp[i] += step
            gm[i] -= step
        else:
            vp[i - m - 1] += step
            vm[i - m - 1] -= step
        cols.append((residual_vector(f, gp, vp) - residual_vector(f, gm, vm)) / (2 * step))
    return np.column_stack(cols)


def pivoted_rank(A: np.ndarray, tol: float = 1e-10) -> int:
    """Numerical rank from the diagonal of a column-pivoted QR."""
    A = np.asarray(A)
    if A.size == 0:
        return 0
    R = scipy.linalg.qr(A, mode="r", pivoting=True)[0]
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0:
        return 0
    return int(np.sum(diag > tol * diag[0]))


def random_toeplitz_like(n: int, alpha: int, seed: int, theta: complex = -1.0):
    """Dense ``A`` and its generators, ``A`` recovered by a Sylvester solve."""
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, alpha)) + 1j * rng.standard_normal((n, alpha))
    H = rng.standard_normal((alpha, n)) + 1j * rng.standard_normal((alpha, n))
    A = scipy.linalg.solve_sylvester(shift_matrix(n, 1.0), -shift_matrix(n, theta), G @ H)
    return A, ToeplitzGenerators(G, H, complex(theta))
