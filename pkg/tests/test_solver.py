import numpy as np
import pytest

from blaschke3d.bodies import (cube_herisson, grunbaum_herisson,
                               icosahedron_directions, icosahedron_herisson,
                               tetrahedron_mesh)
from blaschke3d.errors import StepSizeUnderflow
from blaschke3d.geometry import (SupportPolyhedron, intersect_halfspaces,
                                 validate_mesh, volume)
from blaschke3d.herisson import (blaschke_scale, herisson_of_mesh,
                                 random_herisson)
from blaschke3d.solver import (ContinuationConfig, area_jacobian,
                               continuation_solve, initial_polyhedron,
                               oracle_solve_small)

from helpers import centered, random_tangent_mesh, vertex_sets_match

AXES = np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0],
                 [0, -1, 0], [0, 0, 1], [0, 0, -1]], float)

FAST = ContinuationConfig(dt_initial=0.5)


def fd_jacobian(directions, offsets, eps=1e-6):
    from blaschke3d.geometry import _intersect_arrays
    k = len(offsets)
    jac = np.empty((k, k))
    for j in range(k):
        hp, hm = offsets.copy(), offsets.copy()
        hp[j] += eps
        hm[j] -= eps
        jac[:, j] = (_intersect_arrays(directions, hp).face_areas
                     - _intersect_arrays(directions, hm).face_areas) \
            / (2 * eps)
    return jac


class TestInitialPolyhedron:
    def test_cube_directions(self):
        sp, areas0 = initial_polyhedron(AXES)
        assert np.allclose(sp.support_numbers, 1.0)
        assert np.allclose(areas0, 4.0, rtol=1e-12)

    def test_icosahedron_symmetry(self):
        _, areas0 = initial_polyhedron(icosahedron_directions())
        assert np.ptp(areas0) <= 1e-12 * areas0.max()

    def test_starting_combinatorics_differ_from_target(self):
        h = grunbaum_herisson()
        sp, _ = initial_polyhedron(h.directions)
        start = intersect_halfspaces(sp)
        _, solved, _ = continuation_solve(h)
        assert start.face_count == solved.face_count == 10
        assert start.adjacency() != solved.adjacency()


class TestAreaJacobian:
    def test_cube_closed_form(self):
        mesh = intersect_halfspaces(SupportPolyhedron(AXES, np.ones(6)))
        jac = area_jacobian(mesh)
        assert np.allclose(np.diag(jac), 0.0, atol=1e-12)
        for i in range(6):
            for j in range(6):
                if i == j:
                    continue
                expect = 0.0 if np.allclose(AXES[i], -AXES[j]) else 2.0
                assert jac[i, j] == pytest.approx(expect, abs=1e-12)
        # uniform dilation moves each face area like d/de of 4(1+e)^2
        assert np.allclose(jac.sum(axis=1), 8.0, atol=1e-12)

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_finite_differences(self, seed):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(6, 14))
        mesh = random_tangent_mesh(k, seed, jitter=0.05)
        jac = area_jacobian(mesh)
        fd = fd_jacobian(mesh.face_normals, mesh.face_support_numbers())
        assert np.allclose(jac, fd, rtol=1e-5, atol=1e-7 * np.abs(jac).max())

    @pytest.mark.parametrize("seed", range(4))
    def test_kills_translation_kernel(self, seed):
        mesh = random_tangent_mesh(10, seed, jitter=0.05)
        jac = area_jacobian(mesh)
        jn = np.linalg.norm(jac)
        for v in np.eye(3):
            u = mesh.face_normals @ v
            assert np.linalg.norm(jac @ u) <= 1e-8 * jn * np.linalg.norm(u)

    def test_translated_solution_still_solves(self):
        mesh = random_tangent_mesh(9, 3, jitter=0.05)
        jac = area_jacobian(mesh)
        rhs = np.sin(np.arange(9))
        rhs -= jac @ np.linalg.lstsq(jac, jac @ np.zeros(9), rcond=None)[0]
        rhs = jac @ np.linalg.lstsq(jac, rhs, rcond=1e-10)[0]  # feasible rhs
        sol = np.linalg.lstsq(jac, rhs, rcond=1e-10)[0]
        shifted = sol + mesh.face_normals @ np.array([0.3, -0.1, 0.7])
        assert np.linalg.norm(jac @ shifted - rhs) <= \
            1e-8 * max(1.0, np.linalg.norm(rhs))


class TestContinuationSolve:
    def test_cube_is_a_fixed_point(self):
        sp, mesh, trace = continuation_solve(cube_herisson(4.0))
        assert trace.steps_taken == 0
        assert np.allclose(mesh.face_areas, 4.0, rtol=1e-12)
        assert volume(mesh) == pytest.approx(8.0, rel=1e-9)

    def test_icosahedron_reconstruction(self):
        from helpers import divergence_volume
        h = icosahedron_herisson(5.0)
        sp, mesh, trace = continuation_solve(h)
        assert mesh.face_count == 20
        assert np.abs(mesh.face_areas - 5.0).max() <= 1e-6 * 5.0
        assert trace.final_residual <= 1e-9
        assert volume(mesh) == pytest.approx(divergence_volume(mesh),
                                             rel=1e-9)
        validate_mesh(mesh)

    def test_grunbaum_combinatorial_change(self):
        h = grunbaum_herisson()
        sp, mesh, trace = continuation_solve(h)
        assert mesh.face_count == 10
        assert np.abs(mesh.face_areas - h.areas).max() <= 1e-6 * h.areas.max()
        assert trace.combinatorial_changes >= 1
        # the tilted triple forms a cap: its faces are pairwise adjacent,
        # unlike in the tangent starting body
        adj = mesh.adjacency()
        assert {(0, 1), (0, 2), (1, 2)} <= adj
        validate_mesh(mesh)

    def test_four_face_data_solves_to_tetrahedron(self):
        _, mesh, _ = continuation_solve(random_herisson(4, 19), FAST)
        assert mesh.face_count == 4
        assert len(mesh.vertices) == 4
        validate_mesh(mesh)

    def test_cube_areas_times_four_doubles_the_edge(self):
        _, small, _ = continuation_solve(cube_herisson(1.0))
        _, big, _ = continuation_solve(blaschke_scale(cube_herisson(1.0),
                                                      4.0))
        assert volume(big) == pytest.approx(8.0 * volume(small), rel=1e-9)
        assert big.scale == pytest.approx(2.0 * small.scale, rel=1e-9)

    def test_output_centered(self):
        _, mesh, _ = continuation_solve(random_herisson(8, 21), FAST)
        assert np.linalg.norm(mesh.centroid) <= 1e-9 * mesh.scale

    def test_round_trip_face_data(self):
        h = random_herisson(10, 31)
        _, mesh, _ = continuation_solve(h, FAST)
        back = herisson_of_mesh(mesh)
        assert back.k == h.k
        for d, f in zip(h.directions, h.areas):
            gap = np.linalg.norm(back.directions - d, axis=1)
            hit = int(np.argmin(gap))
            assert gap[hit] <= 1e-9
            assert back.areas[hit] == pytest.approx(f, rel=1e-6)

    def test_scaled_areas_scale_volume(self):
        h = random_herisson(9, 41)
        _, mesh1, _ = continuation_solve(h, FAST)
        _, mesh2, _ = continuation_solve(blaschke_scale(h, 2.0), FAST)
        assert volume(mesh2) == pytest.approx(2 ** 1.5 * volume(mesh1),
                                              rel=1e-6)

    def test_path_independence_of_result(self):
        # two different step policies land on the same translate class
        h = random_herisson(11, 51)
        _, fine, _ = continuation_solve(h, ContinuationConfig(dt_initial=0.01))
        _, coarse, _ = continuation_solve(h, ContinuationConfig(dt_initial=1.0))
        assert vertex_sets_match(centered(fine), centered(coarse),
                                 1e-6 * fine.diameter())

    def test_monotone_trace_residual(self):
        cfg = ContinuationConfig(dt_initial=0.25, newton_tol=1e-9)
        _, _, trace = continuation_solve(random_herisson(9, 61), cfg)
        assert trace.final_residual <= cfg.newton_tol
        assert len(trace.residual_history) == trace.steps_taken
        assert all(r <= cfg.newton_tol for r in trace.residual_history)

    def test_step_size_underflow(self):
        cfg = ContinuationConfig(dt_initial=1.0, dt_min=1.0,
                                 max_newton_iters=0)
        with pytest.raises(StepSizeUnderflow) as err:
            continuation_solve(random_herisson(8, 71), cfg)
        assert err.value.trace is not None


class TestOracle:
    def test_cube(self):
        mesh = oracle_solve_small(cube_herisson(4.0))
        assert volume(mesh) == pytest.approx(8.0, rel=1e-8)

    def test_rejects_large_instances(self):
        with pytest.raises(ValueError):
            oracle_solve_small(random_herisson(9, 1))

    def test_matches_continuation_on_random_input(self):
        h = random_herisson(5, 3)
        _, mesh, _ = continuation_solve(h, FAST)
        oracle = oracle_solve_small(h)
        assert volume(oracle) == pytest.approx(volume(mesh), rel=1e-6)

    def test_tetrahedron_round_trip(self):
        h = herisson_of_mesh(tetrahedron_mesh(1.3))
        mesh = oracle_solve_small(h)
        assert mesh.face_count == 4
        back = herisson_of_mesh(mesh)
        for d, f in zip(h.directions, h.areas):
            gap = np.linalg.norm(back.directions - d, axis=1)
            hit = int(np.argmin(gap))
            assert gap[hit] <= 1e-9
            assert back.areas[hit] == pytest.approx(f, rel=1e-7)
