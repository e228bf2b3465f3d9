import numpy as np

from pdkernel.persistence import cech_diagram
from pdkernel.synth import synth_dataset, synth_sample


def test_fixed_seed_is_deterministic():
    a = synth_sample(42)
    b = synth_sample(42)
    assert np.array_equal(a.cloud.points, b.cloud.points)
    assert (a.z0, a.z1, a.label) == (b.z0, b.z1, b.label)


def test_label_is_xor():
    for seed in range(30):
        s = synth_sample(seed)
        assert s.label == (s.z0 ^ s.z1)
        assert s.cloud.dim == 3
        assert np.all(s.cloud.points[:, 2] >= 0) and np.all(s.cloud.points[:, 2] <= 0.01)


def test_s2_inclusion_rate():
    samples = [synth_sample(seed) for seed in range(1000)]
    frac = np.mean([s.z1 for s in samples])
    assert 0.45 <= frac <= 0.55


def test_z0_matches_recomputed_s1_diagram():
    # recompute the diagram of S1 alone (the cloud without the 10 S2 points)
    hits = 0
    for seed in range(25):
        s = synth_sample(seed)
        pts = s.cloud.points
        s1 = pts[:-10] if s.z1 else pts
        d1 = cech_diagram(s1, q=1)
        main = d1.pairs[int(np.argmax(d1.persistences()))]
        z0 = int(main[0] < 1.0 and main[1] > 4.0)
        assert z0 == s.z0
        hits += z0
    assert 0 < hits < 25  # both z0 values occur


def test_forcing_s2_only_adds_points():
    for seed in range(10):
        without = synth_sample(seed, _force_s2=False)
        with_s2 = synth_sample(seed, _force_s2=True)
        assert len(with_s2.cloud) - len(without.cloud) == 10
        assert np.array_equal(with_s2.cloud.points[: len(without.cloud)],
                              without.cloud.points)
        assert with_s2.z0 == without.z0


def test_minimum_points():
    for seed in range(50):
        assert len(synth_sample(seed).cloud) >= 3


def test_dataset_streams_are_independent():
    ds = synth_dataset(5, seed=7)
    ds2 = synth_dataset(5, seed=7)
    for a, b in zip(ds, ds2):
        assert np.array_equal(a.cloud.points, b.cloud.points)
    clouds = {tuple(s.cloud.points[0]) for s in ds}
    assert len(clouds) == 5  # samples differ across streams
