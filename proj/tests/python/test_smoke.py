import numpy as np
import pytest

import ebv


def test_solve_matches_numpy():
    a = ebv.generate_dense(50, seed=3)
    b = a @ np.ones(50)
    x, counters = ebv.solve(a, b, workers=3)
    np.testing.assert_allclose(x, np.linalg.solve(a, b), rtol=1e-12)
    assert sum(counters["factorize"]["madds"]) == sum((50 - r) ** 2 for r in range(1, 50))
    assert counters["factorize"]["barriers"] == 2 * 49


def test_parallel_factors_bitwise_equal_sequential():
    a = ebv.generate_sparse(40, 0.2, seed=1)
    seq = ebv.factorize_seq(a)
    for w in (1, 2, 5):
        par, _ = ebv.factorize_par(a, workers=w)
        assert par.tobytes() == seq.tobytes()


def test_packed_factors_reconstruct_input():
    a = ebv.generate_dense(12, seed=9)
    packed = ebv.factorize_seq(a)
    lower = np.tril(packed, -1) + np.eye(12)
    upper = np.triu(packed)
    np.testing.assert_allclose(lower @ upper, a, atol=1e-12)


def test_plan_helpers():
    assert ebv.plan_dump(4, 2).splitlines() == [
        "unit 0: L1[3] + L3[1] -> worker 0",
        "unit 1: U1[3] + U3[1] -> worker 1",
        "unit 2: L2[2] + U2[2] -> worker 0",
    ]
    assert ebv.plan_stats(9, 3)["per_worker_length"] == [27, 27, 18]


def test_matrix_market_and_normalization():
    a = ebv.load_matrix_market(
        "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 2.0\n2 2 4.0\n1 2 1.0\n"
    )
    np.testing.assert_array_equal(a, [[2.0, 1.0], [0.0, 4.0]])
    m, scales = ebv.normalize_unit_diagonal(np.array([[2.0, 1.0], [1.0, 4.0]]))
    np.testing.assert_array_equal(m, [[1.0, 0.5], [0.25, 1.0]])
    assert scales == [0.5, 0.25]
    assert ebv.residual_inf(np.eye(2), np.array([1.0, 3.0]), np.array([1.0, 3.0])) == 0.0


def test_errors_surface_as_python_exceptions():
    with pytest.raises(ebv.SingularPivotError):
        ebv.factorize_seq(np.array([[0.0, 1.0], [1.0, 1.0]]), threshold=0.0)
    with pytest.raises(ebv.ParseError):
        ebv.load_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n")
    with pytest.raises(ValueError):
        ebv.generate_sparse(4, 0.0)
