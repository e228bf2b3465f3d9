"""File formats and run manifests.

All reals are serialized with 17 significant digits so outputs round-trip
bit-exactly; manifests carry the resolved parameters, seed and input hashes
needed to reproduce a run byte-for-byte (no timestamps).
"""
from __future__ import annotations

import hashlib
import json
import os

import numpy as np

from . import __version__
from .errors import PdkernelError
from .geometry import PointCloud
from .persistence import PersistenceDiagram, diagram


def fmt(x) -> str:
    return f"{float(x):.17g}"


def write_cloud(path, cloud: PointCloud):
    with open(path, "w") as fh:
        for row in cloud.points:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def read_cloud(path) -> PointCloud:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rows.append([float(tok) for tok in line.split(",")])
    if not rows:
        raise PdkernelError(f"{path}: empty point-cloud file")
    width = {len(r) for r in rows}
    if len(width) != 1 or width.pop() not in (1, 2, 3):
        raise PdkernelError(f"{path}: rows must all be x,y[,z]")
    return PointCloud(np.asarray(rows))


def write_diagrams(path, diagrams):
    """CSV lines q,birth,death sorted by (q, birth, death)."""
    if isinstance(diagrams, PersistenceDiagram):
        diagrams = [diagrams]
    rows = []
    for d in diagrams:
        for b, dd in d.pairs:
            rows.append((d.q, b, dd))
    rows.sort()
    with open(path, "w") as fh:
        for q, b, dd in rows:
            fh.write(f"{q},{fmt(b)},{fmt(dd)}\n")


def read_diagram(path, q=None) -> PersistenceDiagram:
    by_q = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            qs, b, d = line.split(",")
            by_q.setdefault(int(qs), []).append((float(b), float(d)))
    if not by_q:
        return diagram(q if q is not None else 0, np.empty((0, 2)))
    if q is None:
        if len(by_q) > 1:
            raise PdkernelError(
                f"{path} holds dimensions {sorted(by_q)}; pass --q to choose one")
        q = next(iter(by_q))
    return diagram(q, np.asarray(by_q.get(q, np.empty((0, 2)))))


def write_matrix(path, values):
    with open(path, "w") as fh:
        for row in np.atleast_2d(values):
            fh.write(",".join(fmt(v) for v in row) + "\n")


def read_matrix(path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(tok) for tok in line.split(",")])
    if not rows:
        raise PdkernelError(f"{path}: empty matrix file")
    return np.asarray(rows)


def write_landscape(path, landscape):
    """Per-level breakpoint rows k,t,value."""
    with open(path, "w") as fh:
        for k in range(landscape.levels.shape[0]):
            for t, v in zip(landscape.grid, landscape.levels[k]):
                fh.write(f"{k + 1},{fmt(t)},{fmt(v)}\n")


def write_dataset(outdir, samples):
    """One directory per sample plus labels.csv of id,z0,z1,label."""
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "labels.csv"), "w") as fh:
        fh.write("id,z0,z1,label\n")
        for i, s in enumerate(samples):
            name = f"sample_{i:05d}"
            os.makedirs(os.path.join(outdir, name), exist_ok=True)
            write_cloud(os.path.join(outdir, name, "cloud.csv"), s.cloud)
            fh.write(f"{name},{s.z0},{s.z1},{s.label}\n")


def read_dataset(outdir):
    """Clouds and label rows from a dataset directory."""
    labels_path = os.path.join(outdir, "labels.csv")
    clouds = []
    rows = []
    with open(labels_path) as fh:
        header = fh.readline().strip()
        if header != "id,z0,z1,label":
            raise PdkernelError(f"{labels_path}: unexpected header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            name, z0, z1, label = line.split(",")
            clouds.append(read_cloud(os.path.join(outdir, name, "cloud.csv")))
            rows.append({"id": name, "z0": int(z0), "z1": int(z1), "label": int(label)})
    return clouds, rows


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return fmt(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def write_manifest(out_path, command, params, inputs=(), seed=None):
    """JSON sidecar <out>.manifest.json describing the run."""
    manifest = {
        "tool": "pdkernel",
        "version": __version__,
        "command": command,
        "params": _jsonable(params),
        "inputs": {os.path.basename(p): sha256_file(p) for p in inputs},
    }
    if seed is not None:
        manifest["seed"] = int(seed)
    path = str(out_path) + ".manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
