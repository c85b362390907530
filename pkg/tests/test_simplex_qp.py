import numpy as np
import pytest

from sparsemoo import solve_simplex_qp
from sparsemoo.simplex_qp import project_onto_simplex

from oracles import grid_theta_m2


def random_instance(rng, k, m, with_offsets=True):
    G = rng.normal(size=(k, m)) * rng.uniform(0.5, 3.0)
    b = rng.normal(size=m) if with_offsets else np.zeros(m)
    L = float(rng.uniform(0.2, 5.0))
    return G, b, L


class TestExamples:
    def test_symmetric_gradients_midpoint(self):
        sol = solve_simplex_qp(np.array([[1.0, 0.0], [0.0, 1.0]]), L=1.0)
        np.testing.assert_allclose(sol.lam, [0.5, 0.5], atol=1e-12)
        np.testing.assert_allclose(sol.d, [-0.5, -0.5], atol=1e-12)
        assert sol.theta == pytest.approx(-0.25, abs=1e-12)

    def test_single_objective(self):
        sol = solve_simplex_qp(np.array([[2.0], [0.0]]), L=1.0)
        np.testing.assert_allclose(sol.d, [-2.0, 0.0], atol=1e-12)
        assert sol.theta == pytest.approx(-2.0, abs=1e-12)

    def test_grid_derived_case(self):
        # frozen from the lambda-grid oracle (step 1e-4)
        G = np.array([[2.0, -1.0], [0.0, 1.0]])
        theta_grid, lam_grid = grid_theta_m2(G)
        sol = solve_simplex_qp(G, L=1.0)
        assert sol.theta == pytest.approx(-0.2, abs=1e-9)
        assert theta_grid == pytest.approx(-0.2, abs=1e-6)
        np.testing.assert_allclose(sol.lam, [0.4, 0.6], atol=1e-9)
        assert lam_grid == pytest.approx(0.4, abs=1e-4)
        np.testing.assert_allclose(sol.d, [-0.2, -0.6], atol=1e-9)


class TestSolutionInvariants:
    def test_lambda_and_direction_consistency(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            m = int(rng.integers(1, 6))
            k = int(rng.integers(1, 7))
            G, b, L = random_instance(rng, k, m)
            sol = solve_simplex_qp(G, b, L)
            assert np.all(sol.lam >= -1e-12)
            assert abs(sol.lam.sum() - 1.0) <= 1e-9
            np.testing.assert_allclose(sol.d, -(G @ sol.lam) / L, atol=1e-9)
            primal = np.max(G.T @ sol.d + b) + 0.5 * L * float(sol.d @ sol.d)
            assert sol.theta == pytest.approx(primal, abs=1e-8)

    def test_vertex_and_origin_bounds(self):
        # each simplex vertex is dual feasible, so it lower-bounds theta;
        # d = 0 is primal feasible, so max_j b_j upper-bounds it
        rng = np.random.default_rng(4)
        for _ in range(100):
            m = int(rng.integers(1, 5))
            G, b, L = random_instance(rng, 4, m)
            sol = solve_simplex_qp(G, b, L)
            cols = np.einsum("ij,ij->j", G, G)
            assert sol.theta >= np.max(b - cols / (2 * L)) - 1e-9
            assert sol.theta <= np.max(b) + 1e-10

    def test_zero_offsets_nonpositive(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            m = int(rng.integers(1, 5))
            G, _, L = random_instance(rng, 3, m, with_offsets=False)
            assert solve_simplex_qp(G, None, L).theta <= 1e-12

    def test_curvature_scaling(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            m = int(rng.integers(1, 5))
            G, _, L = random_instance(rng, 4, m, with_offsets=False)
            c = float(rng.uniform(0.5, 4.0))
            base = solve_simplex_qp(G, None, L)
            scaled = solve_simplex_qp(G, None, c * L)
            assert scaled.theta == pytest.approx(base.theta / c, abs=1e-8)
            np.testing.assert_allclose(scaled.d, base.d / c, atol=1e-8)

    def test_grid_agreement_m2(self):
        rng = np.random.default_rng(7)
        for _ in range(60):
            G, b, L = random_instance(rng, int(rng.integers(1, 6)), 2)
            sol = solve_simplex_qp(G, b, L)
            theta_grid, _ = grid_theta_m2(G, b, L)
            assert sol.theta == pytest.approx(theta_grid, abs=1e-6)

    def test_duality_gap_m3_m4(self):
        rng = np.random.default_rng(8)
        for _ in range(150):
            m = int(rng.integers(3, 5))
            G, b, L = random_instance(rng, int(rng.integers(1, 6)), m)
            sol = solve_simplex_qp(G, b, L)
            Gl = G @ sol.lam
            dual = -(float(Gl @ Gl) / (2 * L) - float(b @ sol.lam))
            assert abs(sol.theta - dual) <= 1e-9

    def test_projected_gradient_path(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            m = int(rng.integers(5, 8))
            G, b, L = random_instance(rng, 4, m)
            sol = solve_simplex_qp(G, b, L)
            Gl = G @ sol.lam
            dual = -(float(Gl @ Gl) / (2 * L) - float(b @ sol.lam))
            assert abs(sol.theta - dual) <= 1e-8


class TestEdgeCases:
    def test_degenerate_zero_matrix(self):
        sol = solve_simplex_qp(np.zeros((3, 4)), np.array([1.0, 3.0, 2.0, -1.0]), 2.0)
        np.testing.assert_array_equal(sol.d, np.zeros(3))
        np.testing.assert_allclose(sol.lam, np.full(4, 0.25))
        assert sol.theta == 3.0

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            solve_simplex_qp(np.array([[np.nan], [1.0]]))
        with pytest.raises(ValueError):
            solve_simplex_qp(np.ones((2, 1)), np.array([np.inf]))
        with pytest.raises(ValueError):
            solve_simplex_qp(np.ones((2, 1)), None, -1.0)

    def test_simplex_projection(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            v = rng.normal(size=int(rng.integers(1, 8))) * 3
            w = project_onto_simplex(v)
            assert np.all(w >= 0)
            assert w.sum() == pytest.approx(1.0, abs=1e-9)
            # projection optimality via a random feasible comparison point
            z = rng.dirichlet(np.ones(v.size))
            assert np.linalg.norm(v - w) <= np.linalg.norm(v - z) + 1e-9
