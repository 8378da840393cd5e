"""Scalar kernels of the upper half-plane.

Cross-ratios, trace/length conversion, collar widths, the ring-domain
modulus mu(r) computed through the arithmetic-geometric mean, the
half-plane quadrilateral modulus h(t), the endpoint displacement bound for
twist deformations, and the crossing-angle constant used by the
quasiconformal lower bound.

Everything here is a pure function; branch-switch thresholds live in
module constants and can be overridden per call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateInputError, DomainError, EllipticTraceError
from .extfloat import ExtScalar, ext_sinh

# Default branch switches.  Each is placed where the two branches agree to
# better than 1e-10 relative; see the branch-agreement tests.
TRACE_BRANCH = 1e8
LENGTH_BRANCH = 1e-8
MODULUS_BRANCH = 1e12

_LOG4 = math.log(4.0)


# ---------------------------------------------------------------------------
# boundary points and angles


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the extended real boundary: a finite real or infinity."""

    value: float

    def __post_init__(self):
        if math.isnan(self.value):
            raise DomainError("boundary point is NaN")
        if self.value == -math.inf:
            raise DomainError("the boundary circle has a single point at infinity; use INFINITY")

    @property
    def is_infinite(self) -> bool:
        return self.value == math.inf


INFINITY = BoundaryPoint(math.inf)


def _as_boundary(x) -> BoundaryPoint:
    if isinstance(x, BoundaryPoint):
        return x
    return BoundaryPoint(float(x))


@dataclass(frozen=True)
class AngleData:
    """A geodesic crossing angle in (0, pi) together with its sine."""

    theta: float
    sin_theta: float

    def __post_init__(self):
        if not 0.0 < self.theta < math.pi:
            raise DomainError(f"angle {self.theta} outside (0, pi)")
        if not 0.0 < self.sin_theta <= 1.0:
            raise DomainError(f"sin(theta) = {self.sin_theta} outside (0, 1]")


# ---------------------------------------------------------------------------
# cross ratio


def cross_ratio(a, b, c, d) -> float:
    """(a-c)(b-d) / ((a-d)(b-c)), with the limit value when one point is infinite."""
    pts = [_as_boundary(p) for p in (a, b, c, d)]
    for i in range(4):
        for j in range(i + 1, 4):
            if pts[i].value == pts[j].value:
                raise DegenerateInputError("cross ratio needs four pairwise distinct points")
    av, bv, cv, dv = (p.value for p in pts)
    if pts[0].is_infinite:
        return (bv - dv) / (bv - cv)
    if pts[1].is_infinite:
        return (av - cv) / (av - dv)
    if pts[2].is_infinite:
        return (bv - dv) / (av - dv)
    if pts[3].is_infinite:
        return (av - cv) / (bv - cv)
    return (av - cv) * (bv - dv) / ((av - dv) * (bv - cv))


# ---------------------------------------------------------------------------
# trace <-> translation length


def trace_to_length(tr, *, branch: float = TRACE_BRANCH) -> ExtScalar:
    """Translation length 2*arccosh(|tr|/2) of a hyperbolic isometry.

    |tr| = 2 gives 0 (parabolic).  Above ``branch`` the asymptotic
    2*log|tr| is used; the dropped correction is 2/tr**2.
    """
    t = abs(tr if isinstance(tr, ExtScalar) else ExtScalar.from_float(float(tr)))
    if t < 2.0:
        raise EllipticTraceError(f"|trace| = {t.to_float()} < 2 is elliptic")
    if t == 2.0:
        return ExtScalar()
    tf = t.to_float()
    if math.isfinite(tf) and tf <= branch:
        return ExtScalar.from_float(2.0 * math.acosh(tf / 2.0))
    return ExtScalar.from_float(2.0 * t.log())


def length_to_trace(length: ExtScalar) -> ExtScalar:
    """2*cosh(l/2); inverse of trace_to_length on positive lengths."""
    from .extfloat import ext_cosh

    return ext_cosh(length * 0.5) * 2.0


# ---------------------------------------------------------------------------
# collar width


def collar_half_width(l, *, branch: float = LENGTH_BRANCH) -> ExtScalar:
    """Embedded collar half-width arcsinh(1/sinh(l/2)) of a geodesic of length l.

    Strictly decreasing in l.  Below ``branch`` the expansion
    log(4/l) + O(l**2) is used, which also covers lengths far below
    double range.
    """
    lv = l if isinstance(l, ExtScalar) else ExtScalar.from_float(float(l))
    if lv.sign() <= 0:
        raise DomainError("collar width needs a positive length")
    lf = lv.to_float()
    if lf < branch:
        return ExtScalar.from_float(_LOG4 - lv.log())
    return ExtScalar.from_float(math.asinh(1.0 / math.sinh(lf / 2.0)))


# ---------------------------------------------------------------------------
# ring-domain modulus via AGM


def _agm(a: float, b: float) -> float:
    while abs(a - b) > 1e-16 * a:
        a, b = (a + b) / 2.0, math.sqrt(a * b)
    return (a + b) / 2.0


def groetzsch_mu(r: float) -> float:
    """Modulus mu(r) of the unit disk slit along [0, r].

    Computed as (pi/2) * agm(1, r') / agm(1, r) with r' = sqrt(1 - r**2),
    which is (pi/2) K(r')/K(r) by the AGM representation of the complete
    elliptic integral.  Strictly decreasing; mu(r) mu(r') = pi**2/4.
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"mu needs r in (0, 1), got {r}")
    rc = math.sqrt((1.0 - r) * (1.0 + r))
    return (math.pi / 2.0) * _agm(1.0, rc) / _agm(1.0, r)


def quad_modulus_h(t, *, branch: float = MODULUS_BRANCH) -> float:
    """Modulus of the half-plane quadrilateral with vertices (inf, -1, 0, t).

    Equals (2/pi) * mu(1/sqrt(1+t)).  Strictly increasing, h(1) = 1, and
    h(t) -> infinity like log(16 t)/pi.  Accepts ExtScalar arguments far
    outside double range on both ends.
    """
    tv = t if isinstance(t, ExtScalar) else ExtScalar.from_float(float(t))
    if tv.sign() <= 0:
        raise DomainError("quadrilateral modulus needs t > 0")
    tf = tv.to_float()
    if tf > branch or math.isinf(tf):
        # log(16 (1+t)) / pi, with log1p handled through the ExtScalar log
        return (4.0 * _LOG4 / 2.0 + _log1p_ext(tv)) / math.pi
    if tf < 1.0:
        # complementary form: h = pi / (2 mu(r')) with r' = sqrt(t/(1+t)),
        # well conditioned as t -> 0
        rc = math.sqrt(tf / (1.0 + tf))
        return math.pi / (2.0 * groetzsch_mu(rc))
    return (2.0 / math.pi) * groetzsch_mu(1.0 / math.sqrt(1.0 + tf))


def _log1p_ext(t: ExtScalar) -> float:
    tf = t.to_float()
    if math.isfinite(tf) and tf < 1e15:
        return math.log1p(tf)
    return t.log()


# ---------------------------------------------------------------------------
# twist endpoint bound and crossing angles


def _check_crossing_endpoints(x1: float, x2: float, tol: float = 1e-9):
    if not (x1 < 0.0 < x2):
        raise DomainError(f"need x1 < 0 < x2, got ({x1}, {x2})")
    if abs(x1 * x2 + 1.0) > tol * max(1.0, abs(x1 * x2)):
        raise DomainError(f"need x1*x2 = -1 (geodesic through i), got {x1 * x2}")


def twist_endpoint_bound(x1: float, x2: float, t: float) -> float:
    """Left-displacement bound for the negative endpoint under a left twist of size t.

    For a geodesic with feet x1 < 0 < x2 meeting the twisting axis at i, the
    image of x1 lies strictly left of m - sqrt(e**(2t) + m**2), m = (x1+x2)/2,
    once t > 0.  At t = 0 the bound degenerates to x1 itself.
    """
    _check_crossing_endpoints(x1, x2)
    if t < 0.0:
        raise DomainError("endpoint bound is stated for t >= 0")
    m = (x1 + x2) / 2.0
    return m - math.sqrt(math.exp(2.0 * t) + m * m)


def angle_from_endpoints(x1: float, x2: float) -> AngleData:
    """Crossing angle of the geodesic (x1, x2) with the imaginary axis at i.

    sin(theta) = 2/(|x1| + |x2|); the side of the angle is fixed by
    cos^2(theta/2) = |x1| / (|x1| + |x2|).
    """
    _check_crossing_endpoints(x1, x2)
    span = x2 - x1
    sin_theta = 2.0 / span
    cos_theta = -(x1 + x2) / span
    theta = math.atan2(sin_theta, cos_theta)
    return AngleData(theta=theta, sin_theta=sin_theta)


def k_constant(rho: float) -> float:
    """Crossing-angle constant in (0, 1] feeding the modulus lower bound.

    With s = sqrt(1 - rho**2):

        K = (1 - s) / ((1 + s) * (sqrt(1 + q**2) + q)),  q = s/(1 - s).

    Increasing in rho; the perpendicular case rho = 1 gives K = 1.
    """
    if not 0.0 < rho <= 1.0:
        raise DomainError(f"rho must lie in (0, 1], got {rho}")
    if rho == 1.0:
        return 1.0
    s = math.sqrt((1.0 - rho) * (1.0 + rho))
    q = s / (1.0 - s)
    return (1.0 - s) / ((1.0 + s) * (math.hypot(1.0, q) + q))


def uniform_angle_constant(rho: float) -> float:
    """The displayed uniform-angle constant (1-s)**2/(1+s), s = sqrt(1-rho**2).

    Kept alongside k_constant so grids can compare the two; it exceeds
    k_constant at equal rho, so the sound uniform bound uses k_constant of
    the angle floor instead.
    """
    if not 0.0 < rho <= 1.0:
        raise DomainError(f"rho must lie in (0, 1], got {rho}")
    s = math.sqrt((1.0 - rho) * (1.0 + rho))
    return (1.0 - s) ** 2 / (1.0 + s)


def denominator_angle_argument(rho: float) -> float:
    """(1 + s)/(1 - s) with s = sqrt(1 - rho**2); argument of h in the denominator."""
    if not 0.0 < rho <= 1.0:
        raise DomainError(f"rho must lie in (0, 1], got {rho}")
    if rho == 1.0:
        return 1.0
    s = math.sqrt((1.0 - rho) * (1.0 + rho))
    return (1.0 + s) / (1.0 - s)


def collar_length_floor(l, crossings: int) -> ExtScalar:
    """Exact collar floor 2 * i * w(l) for the length of a curve crossing i times."""
    if crossings < 1:
        raise DomainError("collar floor needs at least one crossing")
    return collar_half_width(l) * (2.0 * crossings)


def sinh_of_half(l: ExtScalar) -> ExtScalar:
    """sinh(l/2) in extended scale (helper shared with the holonomy kernels)."""
    return ext_sinh(l * 0.5)
