import numpy as np
import pytest

import pdkernel.persistence as P
from pdkernel.errors import EssentialClassAboveRmax, PdkernelError
from pdkernel.filtration import build_cech, build_rips
from pdkernel.geometry import PointCloud, circle_points
from pdkernel.persistence import (cech_diagram, compute_persistence, diagram,
                                  rips_diagram, total_persistence)

from conftest import betti_oracle, random_cloud


def test_cech_equilateral_h1():
    s = 1.0
    pts = PointCloud([[0, 0], [s, 0], [s / 2, s * np.sqrt(3) / 2]])
    d = cech_diagram(pts, q=1)
    assert np.allclose(d.pairs, [[s / 2, s / np.sqrt(3)]], atol=1e-14)


def test_circle_diagram_golden(rng):
    for r, n in [(1.0, 10), (2.0, 25), (0.2, 10), (0.7, 13)]:
        d = cech_diagram(circle_points(0, 0, r, n), q=1)
        assert len(d) == 1
        assert abs(d.pairs[0, 0] - r * np.sin(np.pi / n)) < 1e-9
        assert abs(d.pairs[0, 1] - r) < 1e-9


def test_rips_triangle_has_no_h1():
    pts = PointCloud([[0, 0], [1, 0], [0.5, np.sqrt(3) / 2]])
    assert len(rips_diagram(pts, q=1)) == 0


def test_cech_vs_rips_differ_on_triangle():
    pts = PointCloud([[0, 0], [1, 0], [0.5, np.sqrt(3) / 2]])
    assert len(cech_diagram(pts, q=1)) == 1
    assert len(rips_diagram(pts, q=1)) == 0


def test_h0_diagram_of_two_clusters():
    pts = PointCloud([[0, 0], [0.1, 0], [5, 0], [5.1, 0]])
    d = cech_diagram(pts, q=0, q_max=1)
    # three merge events: 0.05, 0.05 and the bridge at 2.45ish
    assert len(d) == 3
    assert np.allclose(sorted(d.deaths), [0.05, 0.05, 2.45], atol=1e-12)
    assert np.all(d.births == 0)


def test_octahedron_h2():
    pts = PointCloud([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]])
    d = cech_diagram(pts, q=2, q_max=2)
    assert np.allclose(d.pairs, [[np.sqrt(2.0 / 3.0), 1.0]], atol=1e-12)


def test_diagram_invariant_under_relabeling(rng):
    # permuting point labels changes every lexicographic tie-break but must
    # leave the diagram multiset untouched
    pts = random_cloud(rng, 12, 3)
    base0 = cech_diagram(PointCloud(pts), q=0, q_max=1).pairs
    base1 = cech_diagram(PointCloud(pts), q=1).pairs
    for _ in range(4):
        perm = rng.permutation(len(pts))
        d0 = cech_diagram(PointCloud(pts[perm]), q=0, q_max=1).pairs
        d1 = cech_diagram(PointCloud(pts[perm]), q=1).pairs
        assert np.allclose(d0, base0, atol=1e-12)
        assert np.allclose(d1, base1, atol=1e-12)


def test_betti_consistency_against_gf2_oracle(rng):
    for trial in range(6):
        pts = random_cloud(rng, 9, 2)
        fc = build_cech(PointCloud(pts), q_max=2)
        for q in (0, 1):
            d = compute_persistence(fc, q)
            crit = np.unique(np.concatenate([fc.values(k) for k in range(fc.max_dim + 1)]))
            probes = (crit[:-1] + crit[1:]) / 2.0
            for a in probes[:: max(1, len(probes) // 6)]:
                alive = int(np.sum((d.births <= a) & (d.deaths > a)))
                if q == 0:
                    alive += 1  # the removed essential component
                assert alive == betti_oracle(fc, q, a), (trial, q, a)


def test_rips_betti_consistency(rng):
    pts = random_cloud(rng, 8, 2)
    fc = build_rips(PointCloud(pts), q_max=1)
    d = compute_persistence(fc, 1)
    crit = np.unique(np.concatenate([fc.values(k) for k in range(fc.max_dim + 1)]))
    probes = (crit[:-1] + crit[1:]) / 2.0
    for a in probes[:: max(1, len(probes) // 5)]:
        alive = int(np.sum((d.births <= a) & (d.deaths > a)))
        assert alive == betti_oracle(fc, 1, a)


def test_zero_persistence_pairs_dropped():
    d = cech_diagram(PointCloud([[0, 0], [1, 0], [0.5, np.sqrt(3) / 2]]), q=1)
    assert np.all(d.births < d.deaths)
    # duplicate points create 0-persistence H0 pairs: dropped
    d0 = cech_diagram(PointCloud([[0, 0], [0, 0], [1, 0]]), q=0, q_max=1)
    assert np.all(d0.deaths > 0)
    assert len(d0) == 1


def test_essential_class_raises_above_rmax():
    circle = circle_points(0, 0, 1, 12)
    fc = build_cech(circle, q_max=1, r_max=0.9)  # loop dies at 1.0
    with pytest.raises(EssentialClassAboveRmax):
        compute_persistence(fc, 1)
    fc2 = build_cech(PointCloud([[0, 0], [5, 0]]), q_max=1, r_max=1.0)
    with pytest.raises(EssentialClassAboveRmax):
        compute_persistence(fc2, 0)


def test_q_out_of_range():
    fc = build_cech(PointCloud([[0, 0], [1, 0]]), q_max=1)
    with pytest.raises(PdkernelError):
        compute_persistence(fc, 2)


def test_transcript_indices_unique(rng):
    pts = random_cloud(rng, 8, 2)
    fc = build_cech(PointCloud(pts), q_max=1)
    for q in (0, 1):
        d, t = compute_persistence(fc, q, transcript=True)
        seen = [i for pair in t.pairing for i in pair] + list(t.essential)
        assert len(seen) == len(set(seen))
        assert len(t.pairing) >= len(d)
        order = list(fc.iter_simplices())
        for b, dd in t.pairing:
            assert order[b].dim == q and order[dd].dim == q + 1
            assert order[b].value <= order[dd].value


def test_prune_parity_small_and_circle(rng):
    save = P._PRUNE_THRESHOLD
    try:
        pts2 = circle_points(0, 0, 5, 40).points
        pts3 = np.column_stack([pts2, rng.uniform(0, 0.01, 40)])
        for pts in (random_cloud(rng, 25, 3), pts3):
            fc = build_cech(PointCloud(pts), q_max=1)
            P._PRUNE_THRESHOLD = 10 ** 18
            off = compute_persistence(fc, 1).pairs
            P._PRUNE_THRESHOLD = 1
            on = compute_persistence(fc, 1).pairs
            assert np.array_equal(off, on)
    finally:
        P._PRUNE_THRESHOLD = save


def test_total_persistence_examples():
    assert total_persistence(diagram(1, np.empty((0, 2))), p=2) == 0.0
    D = diagram(1, [[0, 1], [0, 2]])
    assert total_persistence(D, p=2) == 5.0
    assert total_persistence(D, p=1, t=1.5) == 2.0
    with pytest.raises(PdkernelError):
        total_persistence(D, p=0.5)


def test_total_persistence_norm_monotonicity(rng):
    # Pers_q(D)^(1/q) <= Pers_p(D)^(1/p) for 1 <= p <= q
    from conftest import random_diagram
    for _ in range(20):
        D = random_diagram(rng, int(rng.integers(1, 12)))
        for p, q in [(1, 2), (1.5, 3), (2, 5), (1, 7)]:
            lhs = total_persistence(D, q) ** (1 / q)
            rhs = total_persistence(D, p) ** (1 / p)
            assert lhs <= rhs + 1e-12


def test_diagram_validation():
    with pytest.raises(PdkernelError):
        diagram(1, [[1.0, 0.5]])
    with pytest.raises(PdkernelError):
        diagram(1, [[0.0, np.inf]])
    d = diagram(1, [[1, 3], [0, 2]])
    assert np.array_equal(d.pairs, [[0, 2], [1, 3]])  # sorted
