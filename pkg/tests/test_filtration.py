import io as stdio
import itertools

import numpy as np
import pytest

from pdkernel.errors import PdkernelError
from pdkernel.filtration import (FilteredComplex, build_cech, build_rips,
                                 miniball, _miniball_support)
from pdkernel.geometry import PointCloud

from conftest import random_cloud


def _simplex_dict(fc):
    return {s.vertices: s.value for s in fc.iter_simplices()}


def test_cech_equilateral_triangle():
    s = 1.3
    pts = PointCloud([[0, 0], [s, 0], [s / 2, s * np.sqrt(3) / 2]])
    vals = _simplex_dict(build_cech(pts, q_max=1))
    for e in [(0, 1), (0, 2), (1, 2)]:
        assert abs(vals[e] - s / 2) < 1e-12
    assert abs(vals[(0, 1, 2)] - s / np.sqrt(3)) < 1e-12


def test_cech_two_points():
    d = 0.8
    vals = _simplex_dict(build_cech(PointCloud([[0, 0], [d, 0]]), q_max=1))
    assert abs(vals[(0, 1)] - d / 2) < 1e-15


def test_cech_collinear_obtuse():
    vals = _simplex_dict(build_cech(PointCloud([[0, 0], [1, 0], [2, 0]]), q_max=1))
    assert abs(vals[(0, 1, 2)] - 1.0) < 1e-12  # half the longest edge


def test_rips_equilateral_triangle():
    s = 1.0
    pts = PointCloud([[0, 0], [s, 0], [s / 2, s * np.sqrt(3) / 2]])
    vals = _simplex_dict(build_rips(pts, q_max=1))
    for simplex in [(0, 1), (0, 2), (1, 2), (0, 1, 2)]:
        assert abs(vals[simplex] - s / 2) < 1e-12


def test_rips_single_point():
    fc = build_rips(PointCloud([[0.5, 0.5]]), q_max=1)
    simplices = list(fc.iter_simplices())
    assert len(simplices) == 1
    assert simplices[0].vertices == (0,) and simplices[0].value == 0.0


def test_rips_value_is_half_diameter(rng):
    pts = random_cloud(rng, 9, 3)
    fc = build_rips(PointCloud(pts), q_max=2)
    for s in fc.iter_simplices():
        if s.dim == 0:
            continue
        diam = max(np.linalg.norm(pts[a] - pts[b])
                   for a, b in itertools.combinations(s.vertices, 2))
        assert abs(s.value - diam / 2) < 1e-12


def test_filtration_monotone_under_faces(rng):
    for kind, build in (("cech", build_cech), ("rips", build_rips)):
        for trial in range(5):
            fc = build(PointCloud(random_cloud(rng, 8, 3)), q_max=2)
            vals = _simplex_dict(fc)
            for verts, v in vals.items():
                if len(verts) == 1:
                    continue
                for facet in itertools.combinations(verts, len(verts) - 1):
                    assert vals[facet] <= v + 1e-15, (kind, verts, facet)


def test_cech_value_is_certified_by_balls(rng):
    # balls of radius v around the vertices share the miniball center, and
    # radius v(1 - eps) does not cover
    for trial in range(5):
        pts = random_cloud(rng, 7, 3)
        fc = build_cech(PointCloud(pts), q_max=2)
        for s in fc.iter_simplices():
            if s.dim < 2:
                continue
            sub = pts[list(s.vertices)]
            center, radius = _miniball_support(sub)
            dists = np.linalg.norm(sub - center, axis=1)
            assert abs(radius - s.value) < 1e-9
            assert np.all(dists <= s.value * (1 + 1e-9))
            assert dists.max() > s.value * (1 - 1e-9)


def test_cech_faces_precede_cofaces_in_order():
    pts = PointCloud(random_cloud(np.random.default_rng(3), 7, 2))
    fc = build_cech(pts, q_max=2)
    seen = set()
    for s in fc.iter_simplices():
        for facet in itertools.combinations(s.vertices, len(s.vertices) - 1):
            if facet:
                assert facet in seen
        seen.add(s.vertices)


def test_cech_rejects_bad_args():
    pts = PointCloud([[0, 0], [1, 0]])
    with pytest.raises(PdkernelError):
        build_cech(pts, q_max=3)
    with pytest.raises(PdkernelError):
        build_cech(pts, q_max=1, r_max=-1.0)


def test_rmax_truncates():
    pts = PointCloud([[0, 0], [1, 0], [0, 1], [1, 1]])
    fc = build_cech(pts, q_max=1, r_max=0.5)
    vals = _simplex_dict(fc)
    assert all(v <= 0.5 for v in vals.values())
    assert (0, 3) not in vals  # diagonal edge value ~0.707


def test_dump_format():
    fc = build_cech(PointCloud([[0, 0], [1, 0]]), q_max=1)
    buf = stdio.StringIO()
    fc.dump(buf)
    lines = buf.getvalue().strip().split("\n")
    assert lines[0] == "0 0 0"
    assert lines[1] == "0 0 1"
    assert lines[2] == "0.5 1 0 1"


def test_miniball_small_cases():
    c, r = miniball(PointCloud([[1.0, 2.0]]))
    assert r == 0.0
    c, r = miniball(PointCloud([[0, 0], [2, 0]]))
    assert abs(r - 1.0) < 1e-12 and np.allclose(c, [1, 0])
    # equilateral triangle: circumradius
    s = 2.0
    c, r = miniball(PointCloud([[0, 0], [s, 0], [s / 2, s * np.sqrt(3) / 2]]))
    assert abs(r - s / np.sqrt(3)) < 1e-12
    # obtuse: half longest edge
    c, r = miniball(PointCloud([[0, 0], [1, 0.01], [2, 0]]))
    assert abs(r - 1.0) < 1e-4


def test_miniball_covers_and_is_minimal(rng):
    for n in (4, 9, 30):
        pts = random_cloud(rng, n, 3)
        center, radius = miniball(PointCloud(pts))
        dists = np.linalg.norm(pts - center, axis=1)
        assert np.all(dists <= radius * (1 + 1e-9))
        # minimality: some support subset of <= 4 points attains the radius
        on_boundary = np.sum(dists >= radius * (1 - 1e-9))
        assert on_boundary >= 2


def test_miniball_matches_support_enumeration(rng):
    for _ in range(30):
        pts = random_cloud(rng, 4, 3)
        c1, r1 = miniball(PointCloud(pts))
        c2, r2 = _miniball_support(pts)
        assert abs(r1 - r2) < 1e-9
