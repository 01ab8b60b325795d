"""Numerical verification toolkit for sectional-curvature range theorems.

Three layers, importable a la carte:

* model spaces (:mod:`curvb.spaces`, :mod:`curvb.bounds`): curvature
  tensors of eight ambient geometries, closed-form sectional curvature,
  theorem ranges, and a random-frame range estimator with local
  refinement;
* certification (:mod:`curvb.certify`): outward-rounded interval
  arithmetic and branch-and-bound enclosures for the quadric defect
  term h, including its certified global lower bound;
* immersions (:mod:`curvb.immersion`): finite-difference extrinsic
  geometry of chart immersions and the warping-Laplacian inequality
  check on warped-product fixtures.

Heavy kernels are compiled with numba when available; set
``CURVB_BACKEND=numpy`` before import to force the pure-numpy fallback
(see :mod:`curvb._backend`).
"""

from ._backend import USING_NUMBA
from .bounds import (
    ChenInterval,
    QuadricPlaneDecomposition,
    SectionalRange,
    chen_bounds,
    estimate_range,
    quadric_decompose,
    quadric_h,
    quadric_S,
    sectional,
    sectional_closed_form,
    theorem_range,
)
from .certify import (
    H_DOMAIN,
    CertifiedBound,
    Interval,
    bb_minimize,
    certify_h,
    interval_h,
    interval_h_gradient,
    surface_grid,
    surface_to_csv,
)
from .errors import (
    BadDimension,
    CurvbError,
    DegeneratePlane,
    DependentInput,
    DimensionMismatch,
    EvaluationFailure,
    NotAWarpedProductMetric,
    RankDeficient,
    SingularMetric,
    SpecFileError,
    UnsupportedDimension,
    UnsupportedKind,
)
from .exprs import compile_expression
from .geomcore import TwoFrame, gram_schmidt, random_two_frame
from .immersion import (
    FIXTURE_NAMES,
    ChartImmersion,
    ExtrinsicReport,
    FixtureBundle,
    WarpedProductSpec,
    ambient_conformal,
    ambient_euclidean,
    chart_curvature,
    chart_sectional,
    check_inequality,
    christoffel,
    induced_geometry,
    laplacian_base,
    load_immersion_file,
    make_fixture,
    mean_and_norms,
    shape_operator,
)
from .spaces import (
    AmbientModel,
    Kind,
    StructureOperators,
    build_structure,
    curvature,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "USING_NUMBA",
    # errors
    "CurvbError",
    "BadDimension",
    "DegeneratePlane",
    "DependentInput",
    "DimensionMismatch",
    "EvaluationFailure",
    "NotAWarpedProductMetric",
    "RankDeficient",
    "SingularMetric",
    "SpecFileError",
    "UnsupportedDimension",
    "UnsupportedKind",
    # frames
    "TwoFrame",
    "gram_schmidt",
    "random_two_frame",
    # model spaces
    "Kind",
    "AmbientModel",
    "StructureOperators",
    "build_structure",
    "curvature",
    "sectional",
    "sectional_closed_form",
    "theorem_range",
    "estimate_range",
    "SectionalRange",
    "chen_bounds",
    "ChenInterval",
    "quadric_decompose",
    "QuadricPlaneDecomposition",
    "quadric_S",
    "quadric_h",
    # certification
    "Interval",
    "CertifiedBound",
    "H_DOMAIN",
    "interval_h",
    "interval_h_gradient",
    "bb_minimize",
    "certify_h",
    "surface_grid",
    "surface_to_csv",
    # immersions
    "WarpedProductSpec",
    "ChartImmersion",
    "ExtrinsicReport",
    "FixtureBundle",
    "ambient_euclidean",
    "ambient_conformal",
    "christoffel",
    "chart_curvature",
    "chart_sectional",
    "induced_geometry",
    "mean_and_norms",
    "shape_operator",
    "laplacian_base",
    "check_inequality",
    "make_fixture",
    "load_immersion_file",
    "FIXTURE_NAMES",
    # expressions
    "compile_expression",
]
