"""Approximate gcd of an exact ``f`` and a perturbable ``g``.

Pipeline: estimate the numerical rank ``k`` of ``M_g`` with a structured
pivoted LU, pull a monic degree-``k`` cofactor out of the approximate kernel,
then run Gauss-Newton on ``(g, v) -> M_g v`` and read the gcd off as ``f / v``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from . import testkit
from .bezout import MultiplicationMatrix, barnett_mult_matrix
from .displacement import (
    _shifted_columns,
    default_theta,
    jacobian_generators,
    mult_matrix_generators,
    toeplitz_to_cauchy,
    vector_from_cauchy,
    vector_to_cauchy,
)
from .gko import (
    RankReport,
    SingularMatrixError,
    basic_solve,
    estimate_rank,
    gko_lu,
    null_basis,
)
from .poly import Polynomial, distance, monic, poly_divmod

log = logging.getLogger(__name__)

#: Cofactor leading coefficients below this (relative) are considered lost.
LEADING_TOL = 1e-8
#: Jacobian pivots below this (relative) count as a rank collapse.
JACOBIAN_RANK_TOL = 1e-13
#: Steps without halving the best residual before the iteration gives up.
STALL_STEPS = 3
#: A stalled run counts as converged once the residual fell by this factor.
STALL_DROP = 1e-3
#: ... or once it sits within this factor of the residual's rounding noise.
FLOOR_FACTOR = 100.0


class AgcdError(RuntimeError):
    pass


class ConvergenceError(AgcdError):
    """Gauss-Newton diverged; ``best`` holds the best iterate seen."""

    def __init__(self, message: str, best: "AgcdResult"):
        super().__init__(message)
        self.best = best


class JacobianRankError(AgcdError):
    def __init__(self, rank: int, rows: int):
        self.rank = rank
        super().__init__(
            f"Jacobian lost rank ({rank} < {rows}); re-estimate the gcd degree with another rank_tol"
        )


@dataclass(frozen=True)
class AgcdConfig:
    rank_tol: float = 1e-8
    newton_tol: float = 1e-12
    max_iters: int = 50
    theta: complex | None = None
    use_structured_solver: bool = True
    dense_fallback: bool = True
    #: Known gcd degree; bypasses the pivot threshold when set.
    degree: int | None = None

    def __post_init__(self):
        if not (self.rank_tol > 0 and self.newton_tol > 0):
            raise ValueError("rank_tol and newton_tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.theta is not None and abs(abs(self.theta) - 1.0) > 1e-12:
            raise ValueError("theta must have unit modulus")
        if self.degree is not None and self.degree < 0:
            raise ValueError("degree must be nonnegative")


@dataclass
class AgcdResult:
    g_tilde: Polynomial
    v_tilde: Polynomial
    gcd: Polynomial
    residual: float
    distance: float
    iterations: int
    rank_report: RankReport | None
    diagnostics: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return self.gcd.degree


# functional and derivatives


def _pad(x: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=complex)
    out[: x.size] = x
    return out


def residual(f: Polynomial, g, v, structured: bool = True) -> np.ndarray:
    """Coefficient vector of ``g*v mod f`` (length ``deg f``)."""
    g = np.asarray(g.coeffs if isinstance(g, Polynomial) else g, dtype=complex)
    v = np.asarray(v.coeffs if isinstance(v, Polynomial) else v, dtype=complex)
    d = f.degree
    if v.size > d:
        raise ValueError(f"deg v = {v.size - 1} must be below deg f = {d}")
    if not structured:
        return testkit.residual_vector(f, g, v)
    mm = MultiplicationMatrix(f, Polynomial(g, trim=False))
    return mm.matvec(_pad(v, d))


def functional(f: Polynomial, g, v, structured: bool = True) -> float:
    """``||M_g v||_2**2``; ``structured=False`` uses long division instead of Barnett."""
    r = residual(f, g, v, structured)
    return float(np.vdot(r, r).real)


def dense_jacobian(f: Polynomial, g, v) -> np.ndarray:
    """``d x (m+k+1)`` Jacobian ``[x**j v mod f (j<=m) | M_g[:, :k]]``."""
    g = np.asarray(g.coeffs if isinstance(g, Polynomial) else g, dtype=complex)
    v = np.asarray(v.coeffs if isinstance(v, Polynomial) else v, dtype=complex)
    f = monic(f)
    d = f.degree
    m, k = g.size - 1, v.size - 1
    if k >= d:
        raise ValueError("cofactor degree must be below deg f")
    Mv = MultiplicationMatrix(f, Polynomial(v, trim=False))
    Kv = np.zeros((d, m + 1), dtype=complex)
    dense_v = Mv.dense()
    Kv[:, : min(m + 1, d)] = dense_v[:, : min(m + 1, d)]
    if m >= d:
        extra = _shifted_columns(Mv, range(d, m + 1))
        for j, col in extra.items():
            Kv[:, j] = col
    Mg = MultiplicationMatrix(f, Polynomial(g, trim=False))
    Kg = np.column_stack([Mg.column(i) for i in range(k)]) if k else np.zeros((d, 0))
    return np.hstack([Kv, Kg])


# kernel -> cofactor


def column_echelon(K: np.ndarray, tol: float = 1e-8) -> tuple[np.ndarray, list[int]]:
    """Column echelon form by eliminating from the last row upwards.

    Returns the reduced columns ordered by increasing leading row, and those
    leading rows. The first column is the minimal-degree polynomial of the
    span. Entries of an unpivoted row below ``tol * max|K|`` are cleared.
    """
    K = np.array(K, dtype=complex)
    rows, _ = K.shape
    scale = np.abs(K).max(initial=0.0)
    active = list(range(K.shape[1]))
    found: list[tuple[int, int]] = []
    for i in range(rows - 1, -1, -1):
        if not active:
            break
        vals = np.abs(K[i, active])
        j = int(np.argmax(vals))
        if vals[j] <= tol * scale:
            K[i, active] = 0.0
            continue
        c = active.pop(j)
        for other in active:
            K[:, other] -= (K[i, other] / K[i, c]) * K[:, c]
            K[i, other] = 0.0
        found.append((c, i))
    found.reverse()
    return K[:, [c for c, _ in found]], [i for _, i in found]


def cofactor_from_kernel(K: np.ndarray, k: int) -> tuple[np.ndarray, dict]:
    """Monic degree-``k`` vector ``[v_0..v_{k-1}, 1, 0..0]`` in the span of ``K``.

    Rows ``k+1..d-1`` are eliminated with forced pivots (largest remaining
    entry), which leaves one combination vanishing there. If its entry in row
    ``k`` is negligible, the last elimination is redone with the runner-up
    pivot, and the instance is flagged.
    """
    K = np.linalg.qr(np.asarray(K, dtype=complex))[0]
    d, ell = K.shape
    flags: dict = {}
    if ell != d - k:
        raise ValueError(f"kernel dimension {ell} does not match corank {d - k}")

    def reduce(choice_at_last: int = 0):
        W = K.copy()
        active = list(range(ell))
        for i in range(d - 1, k, -1):
            order = np.argsort(-np.abs(W[i, active]), kind="stable")
            pick = order[min(choice_at_last, len(order) - 1)] if i == k + 1 else order[0]
            c = active.pop(int(pick))
            if W[i, c] != 0:
                for other in active:
                    W[:, other] -= (W[i, other] / W[i, c]) * W[:, c]
                    W[i, other] = 0.0
        return W[:, active[0]]

    w = reduce()
    if abs(w[k]) < LEADING_TOL * np.linalg.norm(w) and ell > 1:
        flags["repivoted"] = True
        w = reduce(1)
    if abs(w[k]) < LEADING_TOL * np.linalg.norm(w):
        raise AgcdError(f"kernel holds no polynomial of degree {k}; re-estimate the rank")
    v = w[: k + 1] / w[k]
    v[k] = 1.0
    return v, flags


def _dense_rank(M: np.ndarray, tol: float, rank: int | None = None) -> tuple[RankReport, np.ndarray]:
    """Rank from the singular values; also returns an orthonormal kernel basis."""
    d = M.shape[1]
    _, s, Vh = np.linalg.svd(M)
    top = s[0] if s.size else 0.0
    thr = tol * top
    if rank is None:
        rank = int(np.sum(s > thr)) if top > 0 else 0
    gap = None
    if s.size > 1:
        logs = np.log10(np.maximum(s, np.finfo(float).tiny))
        gap = int(np.argmax(logs[:-1] - logs[1:])) + 1
    rep = RankReport(rank, d - rank, s.copy(), gap, float(thr), np.linalg.norm(M, axis=1))
    return rep, Vh[rank:].conj().T


def exact_gcd(f: Polynomial, g: Polynomial, tol: float = 1e-8) -> Polynomial:
    """Gcd from the kernel of ``M_g`` (dense path).

    The minimal-degree kernel polynomial ``s`` generates the annihilator of
    ``g`` in ``C[x]/(f)``; the gcd is ``f / s``. ``f`` is assumed squarefree.
    """
    f = monic(f)
    d = f.degree
    if d < 1:
        return Polynomial([1.0])
    M = barnett_mult_matrix(f, g)
    rep, K = _dense_rank(M, tol)
    if rep.numerical_rank == d:
        return Polynomial([1.0])
    if rep.numerical_rank == 0:
        return f
    E, lead = column_echelon(K, tol)
    s = Polynomial(E[: lead[0] + 1, 0])
    return monic(poly_divmod(f, s)[0])


# Gauss-Newton


def _structured_step(f, g, v, r, theta, real):
    d = f.degree
    tg = jacobian_generators(f, g, v, theta)
    lu = gko_lu(toeplitz_to_cauchy(tg), "gu")
    piv = lu.pivots
    if piv.size < d or piv.min() <= JACOBIAN_RANK_TOL * piv.max():
        raise JacobianRankError(int(np.sum(piv > JACOBIAN_RANK_TOL * piv.max())), d)
    w = basic_solve(lu, vector_to_cauchy(r, "left"))
    y = vector_from_cauchy(w, "right", tg.theta)
    return y.real.astype(complex) if real else y


def _dense_step(f, g, v, r, real):
    J = dense_jacobian(f, g, v)
    if real:
        J = J.real
        r = r.real
    s = np.linalg.svd(J, compute_uv=False)
    if s.size < J.shape[0] or s[-1] <= JACOBIAN_RANK_TOL * s[0]:
        raise JacobianRankError(int(np.sum(s > JACOBIAN_RANK_TOL * s[0])), J.shape[0])
    return testkit.dense_least_squares(J, r).astype(complex)


def _evaluation_noise(f, g, v) -> float:
    """Disagreement of the Barnett and long-division residuals: a rounding-floor estimate."""
    return float(np.linalg.norm(residual(f, g, v) - testkit.residual_vector(f, g, v)))


def gauss_newton_refine(f: Polynomial, g0: Polynomial, v0: Polynomial, cfg: AgcdConfig = AgcdConfig(),
                        rank_report: RankReport | None = None) -> AgcdResult:
    """Minimize ``||M_g v||**2`` over ``g`` and the free coefficients of monic ``v``.

    Each step solves ``J y = M_g v`` and subtracts ``y`` from
    ``z = [g_0..g_m, v_0..v_{k-1}]``; the leading 1 of ``v`` never moves.
    The structured step factors the Cauchy-like image of ``J`` and returns a
    basic (not minimum-norm) solution; the dense step is the minimum-norm
    least-squares solution. For real data the step is projected on the reals,
    which still solves the real linear system.

    Raises
    ------
    ConvergenceError
        The residual grew (or stalled) on three consecutive steps without
        first dropping by ``STALL_DROP`` or reaching ``FLOOR_FACTOR`` times
        the rounding noise of the residual. Stalling past either mark ends
        the iteration normally.
    JacobianRankError
        Both step solvers found a rank-deficient Jacobian.
    """
    f = monic(f)
    d = f.degree
    g = np.array(g0.coeffs, dtype=complex)
    v = np.array(v0.coeffs, dtype=complex)
    k = v.size - 1
    if k < 1 or k >= d:
        raise ValueError(f"cofactor degree must lie in 1..{d - 1}, got {k}")
    if abs(v[-1] - 1.0) > 1e-12:
        raise ValueError("initial cofactor must be monic")
    v[-1] = 1.0
    m = g.size - 1
    real = f.is_real() and g0.is_real() and v0.is_real(1e-10 * np.abs(v).max())
    if real:
        v = v.real.astype(complex)
    ncols = m + k + 1
    theta = cfg.theta if cfg.theta is not None else default_theta(d, ncols)
    diag = {"structured_steps": 0, "dense_steps": 0, "fallbacks": 0, "history": []}

    def norm_r(gv, vv):
        return np.linalg.norm(residual(f, gv, vv))

    r = residual(f, g, v)
    rn = np.linalg.norm(r)
    best = (rn, g.copy(), v.copy(), 0)
    diag["history"].append(float(rn) ** 2)
    increases = stalled = 0
    initial = rn
    it = 0
    eps = np.finfo(float).eps
    while rn > cfg.newton_tol * max(np.linalg.norm(g), np.finfo(float).tiny) and it < cfg.max_iters:
        y = None
        if cfg.use_structured_solver and d >= 2:
            try:
                y = _structured_step(f, g, v, r, theta, real)
                diag["structured_steps"] += 1
            except (JacobianRankError, SingularMatrixError) as exc:
                if not cfg.dense_fallback:
                    raise JacobianRankError(getattr(exc, "rank", -1), d) from exc
                diag["fallbacks"] += 1
                log.debug("structured step failed (%s); dense fallback", exc)
        if y is None:
            y = _dense_step(f, g, v, r, real)
            diag["dense_steps"] += 1
        g = g - y[: m + 1]
        v[:k] = v[:k] - y[m + 1 :]
        it += 1
        r = residual(f, g, v)
        new = np.linalg.norm(r)
        diag["history"].append(float(new) ** 2)
        increases = increases + 1 if new > rn else 0
        rn = new
        stalled = 0 if rn < 0.5 * best[0] else stalled + 1
        if rn < best[0]:
            best = (rn, g.copy(), v.copy(), it)
        if increases >= 3 or stalled >= STALL_STEPS:
            if best[0] <= max(STALL_DROP * initial, FLOOR_FACTOR * _evaluation_noise(f, best[1], best[2])):
                # noise floor of the residual evaluation reached
                diag["stop"] = "stagnation"
                break
            res = _finish(f, g0, best[1], best[2], best[3], rank_report, diag, real)
            raise ConvergenceError("Gauss-Newton residual grew on 3 consecutive steps", res)
        if "stop" not in diag and np.linalg.norm(y) <= 4 * eps * (np.linalg.norm(g) + np.linalg.norm(v)):
            break
    return _finish(f, g0, best[1], best[2], it, rank_report, diag, real)


def _finish(f, g0, g, v, iters, rank_report, diag, real) -> AgcdResult:
    diag = dict(diag)
    if real:
        diag["imag_dropped"] = float(max(np.abs(g.imag).max(initial=0.0), np.abs(v.imag).max(initial=0.0)))
        g = g.real
        v = v.real
    g_t = Polynomial(g)
    v_t = Polynomial(v, trim=False)
    gcd = monic(poly_divmod(f, v_t)[0])
    return AgcdResult(
        g_tilde=g_t,
        v_tilde=v_t,
        gcd=gcd,
        residual=functional(f, g_t, v_t, structured=False),
        distance=distance(g0, g_t),
        iterations=iters,
        rank_report=rank_report,
        diagnostics=diag,
    )


# pipeline


def rank_and_kernel(f: Polynomial, g: Polynomial, cfg: AgcdConfig = AgcdConfig()):
    """Numerical rank of ``M_g`` and a kernel basis in monomial coordinates.

    Structured route: rank-2 generators, Cauchy transform, GKO; dense route
    (or ``deg f < 2``): singular values of the Barnett matrix.
    """
    f = monic(f)
    d = f.degree
    if cfg.use_structured_solver and d >= 2:
        theta = cfg.theta if cfg.theta is not None else default_theta(d, d)
        tg = mult_matrix_generators(MultiplicationMatrix(f, g), theta)
        if tg.alpha == 0:
            rep = RankReport(0, d, np.zeros(d), None, 0.0, np.zeros(d))
            return rep, np.eye(d, dtype=complex)
        lu = gko_lu(toeplitz_to_cauchy(tg), "gu")
        rep = _override(estimate_rank(lu, cfg.rank_tol), cfg.degree, d)
        if rep.numerical_rank == d:
            return rep, np.zeros((d, 0), dtype=complex)
        W = null_basis(lu, rep.numerical_rank)
        return rep, vector_from_cauchy(W, "right", theta)
    M = barnett_mult_matrix(f, g)
    rep, K = _dense_rank(M, cfg.rank_tol, _rank_hint(cfg.degree, d))
    return _override(rep, cfg.degree, d), K


def _rank_hint(degree, d):
    return None if degree is None else d - min(degree, d)


def _override(rep: RankReport, degree: int | None, d: int) -> RankReport:
    if degree is None:
        return rep
    k = d - min(degree, d)
    return RankReport(k, d - k, rep.pivot_magnitudes, rep.gap_location, rep.threshold_used, rep.row_norms)


def agcd(f: Polynomial, g: Polynomial, cfg: AgcdConfig = AgcdConfig()) -> AgcdResult:
    """Perturb ``g`` as little as possible so that ``gcd(f, g~)`` has degree ``deg f - k``.

    ``k`` is the numerical rank of ``M_g`` at ``cfg.rank_tol``. Corank 0
    returns gcd 1 without refinement; rank 0 means ``g`` is (numerically) a
    multiple of ``f`` and returns gcd ``f``.
    """
    if f.degree < 1:
        raise ValueError("f must have degree >= 1")
    if g.is_zero:
        raise ValueError("g must be nonzero")
    f = monic(f)
    d = f.degree
    rep, K = rank_and_kernel(f, g, cfg)
    k = rep.numerical_rank
    real = f.is_real() and g.is_real()
    if k == d:
        return AgcdResult(g, f, Polynomial([1.0]), 0.0, 0.0, 0, rep, {"status": "coprime"})
    if k == 0:
        fc = f.padded(len(g))
        gc = g.padded(len(fc))
        c = np.vdot(fc, gc) / np.vdot(fc, fc) if g.degree >= d else 0.0
        g_t = f.scale(c)
        if real:
            g_t = Polynomial(g_t.coeffs.real)
        one = Polynomial([1.0])
        return AgcdResult(g_t, one, f, functional(f, g_t, one, structured=False), distance(g, g_t), 0,
                          rep, {"status": "full"})
    v0, flags = cofactor_from_kernel(K, k)
    if real:
        flags["imag_initial"] = float(np.abs(v0.imag).max())
        v0 = v0.real
    res = gauss_newton_refine(f, g, Polynomial(v0, trim=False), cfg, rep)
    res.diagnostics.update(flags)
    res.diagnostics["status"] = "refined"
    res.diagnostics["initial_residual"] = res.diagnostics["history"][0]
    return res


def agcd_multi(f: Polynomial, gs, cfg: AgcdConfig = AgcdConfig(), seed: int = 0) -> AgcdResult:
    """Approximate gcd of ``f`` with several inexact polynomials at once.

    A random combination ``sum c_i g_i`` with ``c_i`` uniform in the unit disc
    keeps every common root of the ``g_i`` and, almost surely, nothing else.
    """
    gs = list(gs)
    if not gs:
        raise ValueError("need at least one polynomial")
    rng = np.random.default_rng(seed)
    radius = np.sqrt(rng.uniform(size=len(gs)))
    coef = radius * np.exp(2j * np.pi * rng.uniform(size=len(gs)))
    n = max(len(p) for p in gs)
    g = Polynomial(sum(c * p.padded(n) for c, p in zip(coef, gs)))
    res = agcd(f, g, cfg)
    res.diagnostics["combination"] = coef
    return res
