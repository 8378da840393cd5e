"""Distance functionals and bounds between marked FN points.

Lower bounds on the length-spectrum distance come from the enumerated
curve family (a certified sup over a sub-family, monotone in truncation
and twist depth); upper bounds from the exact collar inequality; the twist
lower bound from the calibrated defect constant; the quasiconformal lower
bound from the quadrilateral modulus of the crossing picture.

Every estimator returns a Bound carrying its kind, the producing rule and
the constants profile it was evaluated under, so grids can assert the
ordering lower <= measured <= upper point by point.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace

from .errors import (
    ConfigurationError,
    DegenerateInputError,
    DomainError,
    HypothesisViolationError,
)
from .extfloat import ExtScalar
from .halfplane import (
    collar_half_width,
    denominator_angle_argument,
    k_constant,
    quad_modulus_h,
    uniform_angle_constant,
)
from .holonomy import Holonomy, TwistVector
from .surface import CurveClass, FNPoint, MarkedPair, SurfaceFamily, TwistLaw, curves_of_truncation

# ---------------------------------------------------------------------------
# constants profile


@dataclass(frozen=True)
class ConstantsProfile:
    """Thresholds and calibrated constants shared by the estimators.

    eps1 < eps0 < 1 with eps0 = 2 eps1 by default, both below the
    two-dimensional Margulis threshold.  c_residual and twist_defect are
    set by calibration and stay None until then.
    """

    m_upper: float = 1.0
    eps0: float = 0.2
    eps1: float = 0.1
    rho_floor: float = 0.8
    c_residual: float | None = None
    twist_defect: float | None = None
    n_membership: float = 1.05
    n_cap: float = 1e6
    trace_branch: float = 1e8
    length_branch: float = 1e-8
    modulus_branch: float = 1e12
    calibration: tuple[tuple[str, float | str], ...] | None = None

    def __post_init__(self):
        if not 0.0 < self.eps1 < self.eps0 < 1.0:
            raise ConfigurationError("need 0 < eps1 < eps0 < 1")
        if self.m_upper <= 0 or self.n_membership <= 0:
            raise ConfigurationError("profile constants must be positive")

    def payload(self) -> dict:
        out = {
            "m_upper": self.m_upper,
            "eps0": self.eps0,
            "eps1": self.eps1,
            "rho_floor": self.rho_floor,
            "c_residual": self.c_residual,
            "twist_defect": self.twist_defect,
            "n_membership": self.n_membership,
            "n_cap": self.n_cap,
            "trace_branch": self.trace_branch,
            "length_branch": self.length_branch,
            "modulus_branch": self.modulus_branch,
            "calibration": dict(self.calibration) if self.calibration else None,
        }
        return out

    def digest(self) -> str:
        blob = json.dumps(self.payload(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


DEFAULT_PROFILE = ConstantsProfile()


# ---------------------------------------------------------------------------
# bounds


@dataclass(frozen=True)
class Bound:
    """A numeric estimate tagged with its direction and producing rule."""

    value: float
    kind: str  # "lower" | "upper" | "exact"
    source: str
    constants: ConstantsProfile | None = None
    witness: CurveClass | None = None
    extra: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        if self.kind not in ("lower", "upper", "exact"):
            raise ConfigurationError(f"bound kind {self.kind!r}")
        if self.value < 0.0:
            raise ConfigurationError("bound values are distances, must be >= 0")

    def get(self, key: str) -> float:
        return dict(self.extra)[key]


# ---------------------------------------------------------------------------
# the length-spectrum estimator


def dls_estimate(
    pair: MarkedPair,
    twist_depth: int,
    depth: int,
    curves: list[CurveClass] | None = None,
    profile: ConstantsProfile = DEFAULT_PROFILE,
) -> Bound:
    """Certified lower bound for the length-spectrum distance.

    Half the largest |log length ratio| over the enumerated family of the
    depth-``depth`` truncation.  The family of a truncation embeds into any
    deeper one, so the value is nondecreasing in both depths.  The witness
    curve attaining the sup is attached to the bound.
    """
    family = curves if curves is not None else curves_of_truncation(pair.graph, depth, twist_depth)
    if not family:
        raise DegenerateInputError("empty curve family")
    hx = Holonomy(pair.graph, pair.base)
    hy = Holonomy(pair.graph, pair.target)
    best = 0.0
    witness: CurveClass | None = None
    for c in family:
        ratio = abs(hx.length(c).log() - hy.length(c).log())
        if ratio > best:
            best = ratio
            witness = c
    return Bound(
        value=0.5 * best,
        kind="lower",
        source="curve-family-sup",
        constants=profile,
        witness=witness,
    )


def dls_twist_upper(
    x: FNPoint,
    cid: str,
    t: float,
    profile: ConstantsProfile = DEFAULT_PROFILE,
    *,
    graph=None,
) -> Bound:
    """Upper bound |t| / (4 w(l)) for the distance moved by a twist of size t.

    Every curve crossing the twisted one i times is at least 2 i w(l) long
    by the collar inequality, which the sup of i |t| / l(gamma) turns into
    |t| / (4 w).  The exact collar width replaces the usual existential
    constant.
    """
    if cid not in x.curve_lengths:
        raise DomainError(f"cannot twist along {cid}: boundary leg or unknown")
    w = collar_half_width(x.curve_lengths[cid], branch=profile.length_branch)
    return Bound(
        value=abs(t) / (4.0 * w.to_float()),
        kind="upper",
        source="collar-twist-upper",
        constants=profile,
    )


def dls_twist_lower(
    x: FNPoint,
    cid: str,
    t: float,
    profile: ConstantsProfile,
) -> Bound:
    """Calibrated lower bound for the distance moved by a twist of size t.

    (1/2) log ((2|log l| + |t| - D) / (2|log l| + D)) clamped at zero,
    with D the calibrated defect.  Requires l <= eps1 and a calibrated
    profile; hypothesis violations raise, never silently degrade.
    """
    if cid not in x.curve_lengths:
        raise DomainError(f"cannot twist along {cid}: boundary leg or unknown")
    if profile.twist_defect is None:
        raise HypothesisViolationError("profile has no calibrated twist defect; run calibrate_constants")
    lf = x.curve_lengths[cid].to_float()
    if not lf <= profile.eps1:
        raise HypothesisViolationError(
            f"twist lower bound needs l <= eps1 = {profile.eps1}, got {lf}"
        )
    big_l = abs(x.curve_lengths[cid].log())
    d = profile.twist_defect
    num = 2.0 * big_l + abs(t) - d
    den = 2.0 * big_l + d
    value = 0.0 if num <= den else 0.5 * math.log(num / den)
    return Bound(value=max(0.0, value), kind="lower", source="defect-twist-lower", constants=profile)


# ---------------------------------------------------------------------------
# quasiconformal lower bound


def _modulus_ratio_log(k_i: float, t_i: float, rho_i: float, profile: ConstantsProfile) -> float:
    num = quad_modulus_h(ExtScalar.exp(abs(t_i)) * k_i, branch=profile.modulus_branch)
    den = quad_modulus_h(denominator_angle_argument(rho_i), branch=profile.modulus_branch)
    return math.log(num / den)


def dqc_lower_multitwist(
    x: FNPoint,
    t: TwistVector,
    angles: dict[str, float],
    profile: ConstantsProfile = DEFAULT_PROFILE,
) -> Bound:
    """Lower bound for the quasiconformal distance of a multi-twist.

    (1/2) log sup_i h(K_i e**|t_i|) / h((1+s_i)/(1-s_i)) over the twisted
    curves, with K_i the crossing-angle constant of the measured sine floor
    rho_i.  Strictly increasing in each |t_i| and unbounded as the sup
    twist grows.  The dilatation-level bound exp(2 value) rides along in
    ``extra``.
    """
    entries = t.as_dict() if isinstance(t, TwistVector) else dict(t)
    if not entries:
        raise DegenerateInputError("empty twist vector")
    best = None
    for cid, ti in entries.items():
        rho = angles[cid]
        if not 0.0 < rho <= 1.0:
            raise DomainError(f"rho for {cid} must be in (0, 1], got {rho}")
        val = _modulus_ratio_log(k_constant(rho), ti, rho, profile)
        if best is None or val > best:
            best = val
    value = max(0.0, 0.5 * best)
    return Bound(
        value=value,
        kind="lower",
        source="modulus-twist-lower",
        constants=profile,
        extra=(("dilatation", math.exp(2.0 * value)),),
    )


def dqc_lower_uniform(
    t: TwistVector,
    rho_floor: float,
    profile: ConstantsProfile = DEFAULT_PROFILE,
) -> Bound:
    """Uniform-angle variant: every rho_i replaced by the family floor.

    Uses the angle constant K(rho_floor); since K is increasing and the
    denominator argument decreasing in rho, this never exceeds the
    per-curve bound evaluated at rho_i >= rho_floor.
    """
    entries = t.as_dict() if isinstance(t, TwistVector) else dict(t)
    if not entries:
        raise DegenerateInputError("empty twist vector")
    sup_t = max(abs(v) for v in entries.values())
    val = _modulus_ratio_log(k_constant(rho_floor), sup_t, rho_floor, profile)
    value = max(0.0, 0.5 * val)
    return Bound(
        value=value,
        kind="lower",
        source="modulus-twist-lower-uniform",
        constants=profile,
        extra=(("dilatation", math.exp(2.0 * value)),),
    )


def displayed_uniform_exceedances(rhos: list[float]) -> list[float]:
    """Angles where the displayed closed-form uniform constant beats K(rho).

    The squared-numerator constant (1-s)**2/(1+s) is not dominated by the
    per-angle constant; any rho listed here witnesses that, which is why
    the sound uniform bound above routes through k_constant instead.
    """
    return [r for r in rhos if uniform_angle_constant(r) > k_constant(r)]


# ---------------------------------------------------------------------------
# annulus / outside / twist decomposition


@dataclass(frozen=True)
class AnnulusEstimates:
    """Modeled pieces of a crossing curve's length near a short curve.

    annulus: [2 log(eps0/l) + l |tw|] * i(gamma, alpha)
    outside: symmetric-configuration remainder standing in for the part
             of the geodesic outside the annulus
    twist:   the twisting number recovered from the exact length by
             inverting the annulus model
    residual: |exact - annulus - outside|
    """

    annulus: float
    outside: float
    twist: float
    residual: float
    exact: float


def choi_rafi_estimates(
    graph,
    x: FNPoint,
    cid: str,
    gamma: CurveClass,
    profile: ConstantsProfile = DEFAULT_PROFILE,
) -> AnnulusEstimates:
    """Annulus-plus-outside model of a dual length around a short curve.

    Requires l(C) <= eps1 and gamma crossing C.  The residual against the
    exact geodesic length is the quantity the residual constant is
    calibrated over: after calibration it stays below c_residual * i.
    """
    lf = x.curve_lengths[cid].to_float()
    if not lf <= profile.eps1:
        raise HypothesisViolationError(f"annulus model needs l <= eps1, got {lf}")
    crossings = gamma.intersection_number(cid)
    if crossings == 0:
        raise HypothesisViolationError("gamma must cross the short curve")
    h = Holonomy(graph, x)
    exact = h.length(gamma).to_float()
    offset = h.twist_offset(cid, gamma.k)
    tw = offset / lf
    annulus = crossings * (2.0 * math.log(profile.eps0 / lf) + lf * abs(tw))
    outside = h.dual_length_at_offset(cid, 0.0).to_float() - crossings * 2.0 * math.log(
        profile.eps0 / lf
    )
    residual = abs(exact - annulus - outside)
    # invert the model for the measured twisting number
    tw_measured = (exact - outside - crossings * 2.0 * math.log(profile.eps0 / lf)) / (
        crossings * lf
    )
    return AnnulusEstimates(
        annulus=annulus, outside=outside, twist=tw_measured, residual=residual, exact=exact
    )


# ---------------------------------------------------------------------------
# membership


@dataclass(frozen=True)
class MembershipVerdict:
    status: str  # "inside" | "outside" | "undetermined-at-depth"
    witness: str | None = None
    max_ratio: float = 0.0
    certificate: tuple[tuple[int, float], ...] | None = None


def ls_membership(
    pair: MarkedPair,
    n_const: float,
    *,
    twist_law: TwistLaw | None = None,
    length_law=None,
    profile: ConstantsProfile = DEFAULT_PROFILE,
) -> MembershipVerdict:
    """FN-coordinate membership test for the length-spectrum space.

    inside: every curve of the truncation satisfies |log l_X/l_R| < N and
    |tau_X - tau_R| < N max(|log l_R|, 1).  outside additionally demands a
    growth certificate from the family law (the ratio unbounded along a
    geometric index ladder); without a law the verdict stays undetermined.
    """
    if n_const <= 0:
        raise DomainError("membership constant must be positive")
    worst = 0.0
    witness = None
    for cid in pair.graph.curve_ids:
        log_ratio = abs(
            pair.target.curve_lengths[cid].log() - pair.base.curve_lengths[cid].log()
        )
        tau_diff = abs(pair.target.curve_twists[cid] - pair.base.curve_twists[cid])
        denom = max(abs(pair.base.curve_lengths[cid].log()), 1.0)
        ratio = max(log_ratio, tau_diff / denom)
        if ratio > worst:
            worst = ratio
            witness = cid
    if worst < n_const:
        return MembershipVerdict(status="inside", witness=witness, max_ratio=worst)
    if twist_law is None or length_law is None:
        return MembershipVerdict(status="undetermined-at-depth", witness=witness, max_ratio=worst)
    ladder = _growth_certificate(twist_law, length_law, profile.n_cap)
    if ladder is None:
        return MembershipVerdict(status="undetermined-at-depth", witness=witness, max_ratio=worst)
    return MembershipVerdict(
        status="outside", witness=witness, max_ratio=worst, certificate=ladder
    )


def _growth_certificate(twist_law: TwistLaw, length_law, cap: float):
    """Ratios along indices 2**j; certified unbounded when they grow past the cap."""
    ladder = []
    prev = 0.0
    n = 2
    for _ in range(24):
        denom = max(abs(length_law.log_value(n)), 1.0)
        try:
            ratio = abs(twist_law.value(n, length_law)) / denom
        except OverflowError:
            ratio = math.inf
        ladder.append((n, ratio))
        if ratio > cap and ratio > prev:
            return tuple(ladder)
        prev = ratio
        n *= 2
    return None


# ---------------------------------------------------------------------------
# calibration


@dataclass(frozen=True)
class CalibrationGrid:
    """Deterministic grid of (law index, twist) points used for calibration."""

    indices: tuple[int, ...]
    twists: tuple[float, ...]

    def __post_init__(self):
        if len(self.indices) * len(self.twists) < 20:
            raise ConfigurationError("calibration grid too small: need >= 20 points")

    def digest(self, family: SurfaceFamily) -> str:
        blob = json.dumps(
            {
                "indices": list(self.indices),
                "twists": list(self.twists),
                "family": family.describe(),
            },
            sort_keys=True,
            separators=(",", ":"),
        )
        return hashlib.sha256(blob.encode()).hexdigest()


def calibrate_constants(
    family: SurfaceFamily,
    grid: CalibrationGrid,
    base_profile: ConstantsProfile = DEFAULT_PROFILE,
) -> ConstantsProfile:
    """Fit the residual constant and the twist defect on the family grid.

    c_residual is the largest annulus-model residual per crossing, and the
    defect the smallest value making the twist lower bound sound at every
    grid point, each with a 5% margin.  Same grid, same profile: the grid
    digest is recorded so consumers can detect drift.
    """
    from .surface import build_family, twisted_dual
    from .holonomy import apply_twist

    depth = max(grid.indices) + 1
    graph, base = build_family(family, depth)
    d_raw = 0.0
    c_raw = 0.0
    rho_min = 1.0
    used = 0
    for idx in grid.indices:
        cid = graph.law_curves[idx - 1]
        lf = base.curve_lengths[cid].to_float()
        if lf > base_profile.eps1:
            continue
        used += 1
        beta = twisted_dual(graph, cid, 0)
        h0 = Holonomy(graph, base)
        l0 = h0.length(beta).to_float()
        rho_min = min(rho_min, h0.min_crossing_sine(cid))
        big_l = abs(base.curve_lengths[cid].log())
        for t in grid.twists:
            xt = apply_twist(graph, base, {cid: t})
            ht = Holonomy(graph, xt)
            measured = 0.5 * abs(ht.length(beta).log() - math.log(l0))
            # smallest D with (1/2) log((2L + t - D)/(2L + D)) <= measured
            g = math.exp(2.0 * measured)
            d_pt = (2.0 * big_l + abs(t) - g * 2.0 * big_l) / (1.0 + g)
            d_raw = max(d_raw, d_pt)
            est = choi_rafi_estimates(graph, xt, cid, beta, base_profile)
            c_raw = max(c_raw, est.residual / beta.crossings)
    if used == 0:
        raise HypothesisViolationError("no grid index satisfies l <= eps1")
    meta = (
        ("grid_digest", grid.digest(family)),
        ("d_raw", d_raw),
        ("c_raw", c_raw),
        ("points", float(used * len(grid.twists))),
    )
    return replace(
        base_profile,
        twist_defect=1.05 * d_raw,
        c_residual=1.05 * c_raw,
        rho_floor=min(base_profile.rho_floor, 0.999 * rho_min),
        calibration=meta,
    )
