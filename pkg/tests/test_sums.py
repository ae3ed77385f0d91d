import numpy as np
import pytest

from blaschke3d.bodies import (cube_herisson, cube_mesh,
                               dodecahedron_herisson, icosahedron_herisson,
                               rotated_tetrahedron_pair)
from blaschke3d.geometry import support_value, validate_mesh, volume
from blaschke3d.herisson import blaschke_add, herisson_of_mesh
from blaschke3d.solver import ContinuationConfig, continuation_solve
from blaschke3d.sums import blaschke_sum_bodies, minkowski_sum

from helpers import centered, random_tangent_mesh, vertex_sets_match

FAST = ContinuationConfig(dt_initial=0.5)


def sample_directions(n, seed=0):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1)[:, None]


class TestMinkowskiSum:
    def test_two_unit_cubes(self):
        s = minkowski_sum(cube_mesh(1.0), cube_mesh(1.0))
        assert s.face_count == 6
        assert volume(s) == pytest.approx(8.0, rel=1e-12)

    def test_rotated_tetrahedra_make_fourteen_faces(self):
        t1, t2 = rotated_tetrahedron_pair(1.0)
        s = minkowski_sum(t1, t2)
        assert s.face_count == 14
        validate_mesh(s)

    def test_single_point_translates(self):
        mesh = random_tangent_mesh(8, 1, jitter=0.05)
        t = np.array([[0.5, -1.0, 2.0]])
        s = minkowski_sum(mesh, t)
        assert vertex_sets_match(s, mesh.translate(t[0]), 1e-12 * mesh.scale)

    @pytest.mark.parametrize("seed", range(5))
    def test_support_additivity(self, seed):
        p = random_tangent_mesh(7, seed, jitter=0.05)
        q = random_tangent_mesh(9, seed + 100, jitter=0.05)
        s = minkowski_sum(p, q)
        for d in sample_directions(100, seed):
            expect = support_value(p, d) + support_value(q, d)
            assert support_value(s, d) == \
                pytest.approx(expect, abs=1e-9 * s.scale)

    def test_commutative(self):
        p = random_tangent_mesh(7, 2, jitter=0.05)
        q = random_tangent_mesh(8, 3, jitter=0.05)
        a, b = minkowski_sum(p, q), minkowski_sum(q, p)
        assert vertex_sets_match(centered(a), centered(b),
                                 1e-6 * a.diameter())

    @pytest.mark.parametrize("seed", [4, 5])
    def test_face_normals_come_from_operands_or_edge_pairs(self, seed):
        p = random_tangent_mesh(6, seed, jitter=0.05)
        q = random_tangent_mesh(7, seed + 50, jitter=0.05)
        s = minkowski_sum(p, q)
        candidates = [p.face_normals, q.face_normals]
        for mesh_a, mesh_b in ((p, q),):
            for (i, j) in mesh_a.edge_lengths:
                for (u, v) in mesh_b.edge_lengths:
                    ea = np.cross(mesh_a.face_normals[i],
                                  mesh_a.face_normals[j])
                    eb = np.cross(mesh_b.face_normals[u],
                                  mesh_b.face_normals[v])
                    cr = np.cross(ea, eb)
                    n = np.linalg.norm(cr)
                    if n > 1e-12:
                        candidates.append((cr / n)[None, :])
                        candidates.append((-cr / n)[None, :])
        pool = np.vstack(candidates)
        for n in s.face_normals:
            assert np.linalg.norm(pool - n, axis=1).min() <= 1e-7


class TestBlaschkeSumBodies:
    def test_cube_with_itself_scales_by_sqrt2(self):
        c = cube_mesh(1.0)
        s = blaschke_sum_bodies(c, c)
        assert s.face_count == 6
        assert np.allclose(herisson_of_mesh(s).areas, 2.0, rtol=1e-9)
        assert volume(s) == pytest.approx(2 ** 1.5, rel=1e-9)

    def test_dodecahedron_icosahedron_football(self):
        _, dod, _ = continuation_solve(dodecahedron_herisson())
        _, ico, _ = continuation_solve(icosahedron_herisson())
        s = blaschke_sum_bodies(dod, ico)
        assert s.face_count == 32
        pent = sum(1 for c in s.faces if len(c) == 5)
        hexa = sum(1 for c in s.faces if len(c) == 6)
        assert (pent, hexa) == (12, 20)
        validate_mesh(s)

    def test_cube_icosahedron_face_count(self):
        _, cube2, _ = continuation_solve(cube_herisson(2.0))
        _, ico, _ = continuation_solve(icosahedron_herisson())
        s = blaschke_sum_bodies(cube2, ico)
        assert s.face_count == 26
        validate_mesh(s)

    @pytest.mark.parametrize("seed", [0, 6])
    def test_face_data_adds_per_direction(self, seed):
        p = random_tangent_mesh(7, seed, jitter=0.05)
        q = random_tangent_mesh(8, seed + 500, jitter=0.05)
        s = blaschke_sum_bodies(p, q, FAST)
        expect = blaschke_add(herisson_of_mesh(p), herisson_of_mesh(q))
        got = herisson_of_mesh(s)
        assert got.k == expect.k
        for d, f in zip(expect.directions, expect.areas):
            gap = np.linalg.norm(got.directions - d, axis=1)
            hit = int(np.argmin(gap))
            assert gap[hit] <= 1e-9
            assert got.areas[hit] == pytest.approx(f, rel=1e-6)

    def test_commutative(self):
        p = random_tangent_mesh(6, 7, jitter=0.05)
        q = random_tangent_mesh(7, 8, jitter=0.05)
        a = blaschke_sum_bodies(p, q, FAST)
        b = blaschke_sum_bodies(q, p, FAST)
        assert vertex_sets_match(centered(a), centered(b),
                                 1e-6 * a.diameter())

    def test_blaschke_volume_never_beats_minkowski(self):
        t1, t2 = rotated_tetrahedron_pair(1.0)
        blas = blaschke_sum_bodies(t1, t2)
        assert blas.face_count == 8  # opposite normals stay separate faces
        assert volume(blas) <= volume(minkowski_sum(t1, t2))
