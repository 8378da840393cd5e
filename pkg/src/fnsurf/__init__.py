"""Fenchel-Nielsen coordinates, geodesic lengths and length-spectrum bounds
on pants-decomposed hyperbolic surfaces.
"""

from .errors import (
    ConfigurationError,
    DegenerateInputError,
    DomainError,
    EllipticTraceError,
    FnsurfError,
    HypothesisViolationError,
    TruncationRangeError,
)
from .extfloat import ExtScalar, ext_cosh, ext_sinh
from .halfplane import (
    AngleData,
    BoundaryPoint,
    INFINITY,
    angle_from_endpoints,
    collar_half_width,
    cross_ratio,
    groetzsch_mu,
    k_constant,
    quad_modulus_h,
    trace_to_length,
    twist_endpoint_bound,
)
from .holonomy import Holonomy, Mat2, TwistVector, apply_twist, geodesic_length, wolpert_residual
from .metrics import (
    Bound,
    CalibrationGrid,
    ConstantsProfile,
    DEFAULT_PROFILE,
    calibrate_constants,
    choi_rafi_estimates,
    dls_estimate,
    dls_twist_lower,
    dls_twist_upper,
    dqc_lower_multitwist,
    dqc_lower_uniform,
    ls_membership,
)
from .constructions import (
    BasepointClass,
    SequenceSpec,
    bishop_length_match,
    classify_basepoint,
    connect_path,
    connect_path_report,
    cumulative_point,
    diverging_sequence,
    ratio_sum_bound,
    spacing_selector,
)
from .surface import (
    CurveClass,
    FNPoint,
    MarkedPair,
    PantsGraph,
    SurfaceFamily,
    TwistLaw,
    build_family,
    dual_curve,
    enumerate_curves,
    fn_difference,
    length_law,
    truncate,
    twisted_dual,
)

__version__ = "0.1.0"
