"""Kernel methods on persistence diagrams.

Pipeline: point clouds -> Cech/Rips filtrations -> persistence diagrams ->
diagram kernels (weighted Gaussian embeddings, scale-space, landscape,
image) with exact or random-Fourier-feature Gram matrices -> kernel machines
(change-point detection, KPCA, SVM).
"""

__version__ = "0.1.0"

from ._core import backend_name
from .errors import EssentialClassAboveRmax, NumericalError, PdkernelError
from .geometry import PointCloud, circle_points, hausdorff_distance
from .filtration import FilteredComplex, Simplex, build_cech, build_rips, miniball
from .persistence import (PersistenceDiagram, ReductionTranscript, cech_diagram,
                          compute_persistence, diagram, rips_diagram,
                          total_persistence)
from .metrics import bottleneck_distance, wasserstein_distance
from .vectorizers import (ArcWeight, Landscape, OneWeight, PersistenceImage,
                          PersLinearWeight, PssSignWeight, build_image,
                          build_landscape, eval_weight, landscape_inner)
from .kernels import (GramMatrix, KernelSpec, RffFeatures, cross_gram, gram,
                      kw_gaussian, kw_linear, median_C, median_sigma,
                      median_tau, mirror_diagram, pi_kernel, pssk,
                      pssk_median_t, pwgk_spec, rff_features, rkhs_distance)
from .learn import (KfdrCurve, KpcaEmbedding, SvmModel, cross_validate,
                    kfdr_curve, kpca, svm_predict, svm_train)
from .synth import SynthSample, synth_dataset, synth_sample

__all__ = [name for name in dir() if not name.startswith("_")]
