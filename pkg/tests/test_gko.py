import time

import numpy as np
import pytest

from mgcd.agcd import column_echelon
from mgcd.bezout import barnett_mult_matrix
from mgcd.displacement import (
    CauchyGenerators,
    ToeplitzGenerators,
    generators_of_mult_matrix,
    toeplitz_to_cauchy,
    vector_from_cauchy,
)
from mgcd.gko import (
    NodeCollisionError,
    SingularMatrixError,
    basic_solve,
    estimate_rank,
    gko_lu,
    null_basis,
    null_vector,
    solve,
    solve_toeplitz_like,
)
from mgcd.poly import Polynomial
from mgcd.testkit import dense_gepp_solve, plant_instance, random_monic, random_toeplitz_like

P = lambda *c: Polynomial(c)  # noqa: E731
F2 = P(2, -3, 1)
G2 = P(-3, 2, 1)


def cauchy_of(f, g):
    return toeplitz_to_cauchy(generators_of_mult_matrix(f, g))


def random_cauchy(m, n, alpha, seed):
    rng = np.random.default_rng(seed)
    d1 = np.exp(2j * np.pi * np.arange(m) / m)
    d2 = np.exp(1j * np.pi / n) * np.exp(2j * np.pi * np.arange(n) / n)
    G = rng.standard_normal((m, alpha)) + 1j * rng.standard_normal((m, alpha))
    H = rng.standard_normal((alpha, n)) + 1j * rng.standard_normal((alpha, n))
    return CauchyGenerators(d1, d2, G, H)


def test_one_by_one():
    cg = CauchyGenerators(np.array([1.0]), np.array([-1.0]), np.array([[1.0]]), np.array([[1.0]]))
    lu = gko_lu(cg)
    assert np.allclose(lu.U, [[0.5]])
    assert np.allclose(lu.L, [[1.0]])


@pytest.mark.parametrize("pivoting", ["gu", "partial"])
@pytest.mark.parametrize("m, n", [(16, 16), (40, 40), (12, 20), (20, 12)])
def test_factorization_residual(pivoting, m, n):
    cg = random_cauchy(m, n, 2, m + n)
    lu = gko_lu(cg, pivoting)
    C = cg.dense()
    err = np.linalg.norm(lu.reconstruct() - C)
    assert err <= 1e3 * max(m, n) * np.finfo(float).eps * np.linalg.norm(C)
    assert np.abs(np.tril(lu.L, -1)).max() <= 1.0 + 1e-12
    if pivoting == "partial":
        assert np.array_equal(lu.col_perm, np.arange(n))


def test_partial_pivoting_picks_largest():
    cg = random_cauchy(10, 10, 2, 3)
    lu = gko_lu(cg, "partial")
    C = cg.dense()
    assert abs(lu.U[0, 0]) == pytest.approx(np.abs(C[:, 0]).max())


def test_unknown_pivoting():
    with pytest.raises(ValueError):
        gko_lu(random_cauchy(3, 3, 1, 0), "full")


def test_node_collision():
    cg = CauchyGenerators(np.array([1.0, 2.0]), np.array([2.0, 3.0]), np.ones((2, 1)), np.ones((1, 2)))
    with pytest.raises(NodeCollisionError) as err:
        gko_lu(cg)
    assert err.value.pair == (1, 0)


def test_example_rank_one():
    lu = gko_lu(cauchy_of(F2, G2))
    rep = estimate_rank(lu, 1e-8)
    assert (rep.numerical_rank, rep.corank) == (1, 1)
    assert rep.numerical_rank + rep.corank == 2


def test_example_null_vector():
    cg = cauchy_of(F2, G2)
    w = null_vector(cg, 1)
    v = vector_from_cauchy(w, "right", -1.0)
    v = v / v[1]
    assert np.allclose(v, [-2, 1])


def test_rank_examples():
    rng = np.random.default_rng(1)
    f = random_monic(7, rng)
    rep = estimate_rank(gko_lu(cauchy_of(f, P(1, 0.5))))
    assert rep.corank == 0
    f, g = random_monic(10, rng), random_monic(10, rng)
    rep = estimate_rank(gko_lu(cauchy_of(f, g)))
    assert rep.corank == 0
    f = Polynomial.from_roots([1, 2])
    g = Polynomial.from_roots([1, -3])
    assert estimate_rank(gko_lu(cauchy_of(f, g))).corank == 1


def test_rank_report_fields():
    inst = plant_instance(12, 10, 3, 0.0, 0)
    rep = estimate_rank(gko_lu(cauchy_of(inst.f, inst.g_exact)))
    assert rep.corank == 3
    assert np.all(np.diff(rep.pivot_magnitudes) <= 0)
    assert rep.gap_location == 9
    assert rep.threshold_used == pytest.approx(1e-8 * rep.pivot_magnitudes[0])
    assert rep.row_norms.shape == (12,)


def test_rank_on_exact_planted_instances():
    misses = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        d = int(rng.integers(4, 41))
        t = int(rng.integers(1, d // 2 + 1))
        inst = plant_instance(d, d - 1, t, 0.0, seed)
        misses += estimate_rank(gko_lu(cauchy_of(inst.f, inst.g_exact))).corank != t
    assert misses <= 5


def test_planted_null_vector():
    inst = plant_instance(12, 11, 3, 0.0, 4)
    cg = cauchy_of(inst.f, inst.g_exact)
    lu = gko_lu(cg)
    rep = estimate_rank(lu)
    assert rep.corank == 3
    C = cg.dense()
    w = null_vector(cg, rep.numerical_rank, lu)
    assert np.linalg.norm(C @ w) <= 1e-8 * np.linalg.norm(C) * np.linalg.norm(w)
    K = vector_from_cauchy(null_basis(lu, rep.numerical_rank), "right", -1.0)
    M = barnett_mult_matrix(inst.f, inst.g_exact)
    assert np.linalg.norm(M @ K) <= 1e-8 * np.linalg.norm(M) * np.linalg.norm(K)
    E, lead = column_echelon(K)
    s = Polynomial(E[: lead[0] + 1, 0])
    assert s.degree == 9


def test_null_vector_full_rank():
    cg = random_cauchy(5, 5, 2, 0)
    with pytest.raises(ValueError):
        null_vector(cg, 5)
    with pytest.raises(SingularMatrixError):
        null_basis(gko_lu(cg), 5)


def test_zero_matrix():
    nodes = random_cauchy(4, 4, 1, 0)
    cg = CauchyGenerators(nodes.d1, nodes.d2, np.zeros((4, 1)), np.zeros((1, 4)))
    lu = gko_lu(cg)
    assert estimate_rank(lu).numerical_rank == 0
    W = null_basis(lu, 0)
    assert np.allclose(W, np.eye(4))


@pytest.mark.parametrize("n", [8, 32, 64])
def test_solve_matches_gepp(n):
    for seed in range(3):
        A, tg = random_toeplitz_like(n, 2, seed)
        b = np.random.default_rng(seed).standard_normal(n) + 0j
        x = solve_toeplitz_like(tg, b)
        y = dense_gepp_solve(A, b)
        assert np.linalg.norm(x - y) <= 1e-9 * np.linalg.norm(y)
        assert np.linalg.norm(A @ x - b) <= 1e-9 * np.linalg.norm(b) * np.linalg.norm(A)


def test_solve_identity():
    # Z^1 I - I Z^theta = (1 - theta) e_0 e_{n-1}^T
    n, theta = 6, -1.0
    G = np.zeros((n, 1))
    G[0, 0] = 1 - theta
    H = np.zeros((1, n))
    H[0, -1] = 1.0
    b = np.arange(1.0, n + 1)
    assert np.allclose(solve_toeplitz_like(ToeplitzGenerators(G, H, theta), b), b)


def test_solve_singular():
    lu = gko_lu(cauchy_of(F2, G2))
    with pytest.raises(SingularMatrixError) as err:
        solve(lu, np.ones(2))
    assert err.value.corank == 1


def test_solve_shape_checks():
    lu = gko_lu(random_cauchy(3, 5, 2, 1))
    with pytest.raises(ValueError):
        solve(lu, np.ones(3))
    with pytest.raises(ValueError):
        basic_solve(gko_lu(random_cauchy(5, 3, 2, 1)), np.ones(5))


def test_basic_solve_wide():
    cg = random_cauchy(6, 10, 3, 2)
    lu = gko_lu(cg)
    b = np.arange(6.0) + 1j
    x = basic_solve(lu, b)
    assert np.allclose(cg.dense() @ x, b)
    assert np.count_nonzero(x) <= 6


def test_reorthogonalization_keeps_accuracy():
    cg = random_cauchy(30, 30, 2, 7)
    lu = gko_lu(cg, "gu", growth=1.0)
    assert lu.reorthogonalizations > 0
    C = cg.dense()
    assert np.linalg.norm(lu.reconstruct() - C) <= 1e-11 * np.linalg.norm(C)


def test_quadratic_time():
    rng = np.random.default_rng(11)
    times = {}
    for n in (128, 256, 512):
        cg = cauchy_of(random_monic(n, rng), random_monic(n - 3, rng))
        gko_lu(cg)
        runs = []
        for _ in range(3):
            t0 = time.perf_counter()
            gko_lu(cg)
            runs.append(time.perf_counter() - t0)
        times[n] = np.median(runs)
    assert times[512] / times[256] <= 5
