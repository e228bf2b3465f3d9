"""Synthetic two-circle XOR data.

Each sample is a large perturbed circle lifted into R^3 (S1), optionally with
a small fixed circle (S2) added.  Label bits: z0 says whether S1's dominant
loop is born before 1 and dies after 4 (computed from the Cech diagram of S1
alone), z1 says whether S2 is present; the class label is XOR(z0, z1).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import PointCloud, circle_points
from .persistence import PersistenceDiagram, cech_diagram

S2_PARAMS = (0.0, 0.0, 0.2, 10)  # (x, y, r, N) of the small circle


@dataclass
class SynthSample:
    cloud: PointCloud
    z0: int
    z1: int
    label: int  # XOR(z0, z1)
    s1_diagram: PersistenceDiagram = field(default=None, repr=False, compare=False)


def _lift(points2d, rng):
    z = rng.uniform(0.0, 0.01, size=len(points2d))
    return np.column_stack([points2d, z])


def synth_sample(seed, _force_s2=None) -> SynthSample:
    """Draw one sample.

    ``seed`` is an integer or a numpy SeedSequence; S1 parameters, the S2
    coin and S2's lift use independent spawned streams, so forcing the coin
    (tests) leaves everything else untouched.
    """
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    ss_s1, ss_coin, ss_s2 = ss.spawn(3)
    rng1 = np.random.Generator(np.random.Philox(ss_s1))

    W = rng1.normal()
    r1 = 1.0 + 8.0 * W * W
    x1 = y1 = 1.5 * r1
    lo = int(np.ceil(np.pi * r1 / 2.0))
    hi = int(np.ceil(4.0 * np.pi * r1))  # integers strictly inside (lo, 4*pi*r1)
    n_base = int(rng1.integers(lo + 1, hi))

    wx = rng1.normal(0.0, np.sqrt(2.0))
    wy = rng1.normal(0.0, np.sqrt(2.0))
    wr = rng1.normal(0.0, 1.0)
    while True:
        wn = rng1.normal(0.0, 1.0)
        n_pts = int(np.ceil(n_base + 2.0 * wn))
        if n_pts >= 3:
            break

    s1_flat = circle_points(x1 + wx * wx, y1 + wy * wy, r1 + wr * wr, n_pts)
    s1 = _lift(s1_flat.points, rng1)

    include_s2 = bool(np.random.Generator(np.random.Philox(ss_coin)).random() < 0.5)
    if _force_s2 is not None:
        include_s2 = bool(_force_s2)

    d1 = cech_diagram(PointCloud(s1), q=1)
    if len(d1):
        main = d1.pairs[int(np.argmax(d1.persistences()))]
        z0 = int(main[0] < 1.0 and main[1] > 4.0)
    else:
        z0 = 0

    if include_s2:
        s2_flat = circle_points(*S2_PARAMS)
        s2 = _lift(s2_flat.points, np.random.Generator(np.random.Philox(ss_s2)))
        cloud = PointCloud(np.vstack([s1, s2]))
    else:
        cloud = PointCloud(s1)

    z1 = int(include_s2)
    return SynthSample(cloud, z0, z1, z0 ^ z1, s1_diagram=d1)


def synth_dataset(n, seed):
    """n samples from independent streams spawned off one 64-bit seed."""
    root = np.random.SeedSequence(seed)
    return [synth_sample(child) for child in root.spawn(n)]
