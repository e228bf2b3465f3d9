"""Backend selection: compiled extension if available, NumPy fallback otherwise.

Set ``PDKERNEL_PURE_PYTHON=1`` to force the fallback.  ``backend_name()``
reports which one is active; both expose the same functions with identical
numerical behaviour.
"""
import os

from . import _pyref

if os.environ.get("PDKERNEL_PURE_PYTHON", "").strip() in ("1", "true", "yes"):
    _impl = _pyref
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pyref

cech_triangle_values = _impl.cech_triangle_values
reduce_z2 = _impl.reduce_z2
anti_transpose = _impl.anti_transpose
prune_redundant_triangles = _impl.prune_redundant_triangles
merge_edges = _impl.merge_edges
weighted_gaussian_cross = _impl.weighted_gaussian_cross
weighted_gaussian_gram = _impl.weighted_gaussian_gram
weighted_gaussian_cross_gram = _impl.weighted_gaussian_cross_gram
rff_features = _impl.rff_features


def backend_name():
    return _impl.BACKEND_NAME
