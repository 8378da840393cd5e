"""Explicit deformation sequences and the coordinate-level path construction.

Three families of multi-twist targets drive everything:

* single diverging twists of size log|log l_n| along ever-shorter curves
  (quasiconformal distance grows, length-spectrum distance shrinks),
* cumulative twists with the same magnitudes on all indices at once,
  reported with a decreasing tail bound,
* twists of size N |log l_n| on all indices, the points that stay a
  definite length-spectrum distance away from every bounded-twist point;
  scaling N = 1/k sends them back towards the base.

The path construction interpolates twists linearly after matching lengths,
staying inside the membership region with a Lipschitz bound driven by the
exact collar constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError, DomainError, HypothesisViolationError
from .extfloat import ExtScalar
from .halfplane import collar_half_width
from .holonomy import Holonomy, TwistVector, apply_twist
from .metrics import (
    DEFAULT_PROFILE,
    Bound,
    ConstantsProfile,
    MembershipVerdict,
    dls_estimate,
    dls_twist_upper,
    dqc_lower_multitwist,
    ls_membership,
)
from .surface import FNPoint, LengthLaw, MarkedPair, PantsGraph, SurfaceFamily


# ---------------------------------------------------------------------------
# basepoint classification


@dataclass(frozen=True)
class BasepointClass:
    upper_bounded: bool
    short_interior_curves: bool
    lower_bounded: bool
    shiga: bool


def classify_basepoint(
    family: SurfaceFamily, depth: int, profile: ConstantsProfile = DEFAULT_PROFILE
) -> BasepointClass:
    """Certify boundedness properties from the family law, not the truncation.

    upper-bounded: sup of the law stays below the configured cap;
    short interior curves: the law tends to zero; the weak Shiga property
    asks for upper-boundedness plus a positive floor on interior lengths.
    """
    law = family.law
    sup = max(law.sup_value(), family.spine_length if family.kind == "torus-chain" else 0.0)
    upper = sup <= profile.m_upper
    short = law.tends_to_zero()
    lower = law.inf_value() > 0.0
    return BasepointClass(
        upper_bounded=upper,
        short_interior_curves=short,
        lower_bounded=lower,
        shiga=upper and not short and law.inf_value() > 0.0,
    )


# ---------------------------------------------------------------------------
# sequence specifications


@dataclass(frozen=True)
class SequenceSpec:
    """Which deformation sequence to generate.

    kind "prop-inv": single twist log|log l_n| on curve n.
    kind "boundary-point": those magnitudes on a spaced subsequence of all
    indices at once (the spacing selector enforces unit gaps in
    x = log|log l|, which is what makes the integral tail bound valid).
    kind "nondense": N |log l_n| on all indices.  kind "zk": nondense with
    N = 1/k.
    """

    kind: str
    n_const: float = 1.0
    k: int = 1

    def __post_init__(self):
        if self.kind not in ("prop-inv", "boundary-point", "nondense", "zk"):
            raise ConfigurationError(f"unknown sequence kind {self.kind!r}")
        if self.n_const <= 0:
            raise ConfigurationError("N must be positive")
        if self.k < 1:
            raise ConfigurationError("k must be >= 1")


def spacing_selector(law: LengthLaw, count: int, max_index: int = 10**6) -> list[int]:
    """Indices n_1 < n_2 < ... with log|log l_{n_j}| >= j and unit gaps.

    Exists whenever the law tends to zero; refuses with a diagnosis when
    the x-values plateau before reaching the requested count.
    """
    out: list[int] = []
    target = 1.0
    n = 1
    while len(out) < count:
        if n > max_index:
            raise ConfigurationError(
                f"spacing selector exhausted indices <= {max_index} after {len(out)} picks; "
                "the law's log|log l| values grow too slowly"
            )
        big_l = abs(law.log_value(n))
        if big_l > 1.0 and math.log(big_l) >= target:
            out.append(n)
            target = math.log(big_l) + 1.0
        n += 1
    return out


# ---------------------------------------------------------------------------
# diverging single twists


@dataclass(frozen=True)
class DivergingTwist:
    point: FNPoint
    magnitude: float
    dls_upper: Bound
    dqc_lower: Bound


def diverging_sequence(
    family: SurfaceFamily,
    graph: PantsGraph,
    x: FNPoint,
    n: int,
    profile: ConstantsProfile = DEFAULT_PROFILE,
) -> DivergingTwist:
    """n-th member of the divergence sequence: twist log|log l_n| along curve n.

    Reports the collar upper bound for the length-spectrum displacement and
    the modulus lower bound for the quasiconformal displacement at the
    measured crossing angle.
    """
    if not family.law.tends_to_zero():
        raise HypothesisViolationError("divergence sequence needs short interior curves")
    if n < 1 or n > len(graph.law_curves):
        raise DomainError(f"index {n} outside the truncation's law curves")
    cid = graph.law_curves[n - 1]
    big_l = abs(x.curve_lengths[cid].log())
    if big_l <= 1.0:
        raise HypothesisViolationError(f"|log l| <= 1 at index {n}; twist magnitude undefined")
    t_n = math.log(big_l)
    point = apply_twist(graph, x, {cid: t_n})
    rho = Holonomy(graph, x).min_crossing_sine(cid)
    upper = dls_twist_upper(x, cid, t_n, profile)
    lower = dqc_lower_multitwist(x, TwistVector.of({cid: t_n}), {cid: rho}, profile)
    return DivergingTwist(point=point, magnitude=t_n, dls_upper=upper, dqc_lower=lower)


# ---------------------------------------------------------------------------
# cumulative multi-twists


@dataclass(frozen=True)
class CumulativePoint:
    point: FNPoint
    indices: tuple[int, ...]
    magnitudes: tuple[float, ...]
    tail_bound: float | None = None
    integral_bound: float | None = None
    dls_upper: float | None = None


def cumulative_point(
    family: SurfaceFamily,
    graph: PantsGraph,
    x: FNPoint,
    spec: SequenceSpec,
    depth: int,
    profile: ConstantsProfile = DEFAULT_PROFILE,
    tail_horizon: int = 60,
) -> CumulativePoint:
    """Multi-twist member of the spec's sequence, with its reported bound.

    boundary-point: magnitudes log|log l| on the spaced subsequence up to
    ``depth`` picks, plus the decreasing tail sum and its integral
    dominator.  nondense / zk: magnitudes N |log l_n| on every law index
    up to depth, plus the collar upper bound sup_n N |log l_n| / (4 w(l_n)).
    """
    if spec.kind == "prop-inv":
        raise ConfigurationError("prop-inv generates single twists; use diverging_sequence")
    law = family.law
    if spec.kind == "boundary-point":
        picks = spacing_selector(law, depth + tail_horizon)
        usable = [n for n in picks if n <= len(graph.law_curves)]
        head = usable[:depth]
        if len(head) < depth:
            raise ConfigurationError(
                f"truncation supports only {len(usable)} spaced indices, need {depth}"
            )
        xs = [math.log(abs(law.log_value(n))) for n in picks]
        mags = tuple(xs[: len(head)])
        twists = {graph.law_curves[n - 1]: m for n, m in zip(head, mags)}
        tail = sum(v * math.exp(-v) for v in xs[depth:])
        a = xs[0] - 1.0
        integral = (a + 1.0) * math.exp(-a)
        return CumulativePoint(
            point=apply_twist(graph, x, twists),
            indices=tuple(head),
            magnitudes=mags,
            tail_bound=tail,
            integral_bound=integral,
        )
    n_const = spec.n_const if spec.kind == "nondense" else 1.0 / spec.k
    indices = []
    mags = []
    twists = {}
    sup_bound = 0.0
    for n in range(1, min(depth, len(graph.law_curves)) + 1):
        cid = graph.law_curves[n - 1]
        big_l = abs(x.curve_lengths[cid].log())
        t_n = n_const * big_l
        indices.append(n)
        mags.append(t_n)
        twists[cid] = t_n
        w = collar_half_width(x.curve_lengths[cid], branch=profile.length_branch).to_float()
        sup_bound = max(sup_bound, t_n / (4.0 * w))
    return CumulativePoint(
        point=apply_twist(graph, x, twists),
        indices=tuple(indices),
        magnitudes=tuple(mags),
        dls_upper=sup_bound,
    )


def ratio_sum_bound(xs: list[float], ys: list[float]) -> tuple[float, float]:
    """(sum x / sum y, sum of x/y); the first never exceeds the second.

    Every term of sum x also appears in the expansion of
    (sum x/y)(sum y), for positive entries.  Used by the tail reporter and
    checked as a standalone lemma.
    """
    if len(xs) != len(ys) or not xs:
        raise DomainError("need matching nonempty tuples")
    if any(v <= 0 for v in xs) or any(v <= 0 for v in ys):
        raise DomainError("lemma holds for positive entries")
    return sum(xs) / sum(ys), sum(a / b for a, b in zip(xs, ys))


# ---------------------------------------------------------------------------
# length matching and the twist path


def bishop_length_match(
    pair: MarkedPair,
    *,
    big_k: float | None = None,
    twist_depth: int = 2,
    depth: int | None = None,
    profile: ConstantsProfile = DEFAULT_PROFILE,
) -> tuple[FNPoint, float]:
    """Bounded-twist point with the target's lengths: (Y, K).

    Y copies the target's lengths and keeps the base twists, which lies
    inside the permitted window |tau_Y - tau_R| <= 2 e**K l_R trivially.
    K defaults to half the measured family estimate, matching the
    hypothesis that the distance is below 2K.
    """
    if big_k is None:
        depth = depth if depth is not None else pair.graph.max_level()
        est = dls_estimate(pair, twist_depth, depth, profile=profile)
        big_k = est.value / 2.0
    y = FNPoint(
        dict(pair.target.curve_lengths),
        dict(pair.base.curve_twists),
        dict(pair.target.leg_lengths),
    )
    window = 2.0 * math.exp(big_k) * profile.m_upper
    for cid in pair.graph.curve_ids:
        if abs(y.curve_twists[cid] - pair.base.curve_twists[cid]) > window:
            raise HypothesisViolationError("matched point escaped the twist window")
    return y, big_k


def connect_path(
    pair: MarkedPair,
    t: float,
    *,
    matched: FNPoint | None = None,
    profile: ConstantsProfile = DEFAULT_PROFILE,
) -> FNPoint:
    """Point at parameter t of the twist path from the matched point to the target.

    Lengths stay at the target's; twists interpolate linearly.  t = 0 gives
    the length-matched point, t = 1 the target itself.
    """
    if not 0.0 <= t <= 1.0:
        raise DomainError("path parameter must lie in [0, 1]")
    y0 = matched if matched is not None else bishop_length_match(pair, profile=profile)[0]
    twists = {
        cid: (1.0 - t) * y0.curve_twists[cid] + t * pair.target.curve_twists[cid]
        for cid in pair.graph.curve_ids
    }
    return FNPoint(dict(pair.target.curve_lengths), twists, dict(pair.target.leg_lengths))


@dataclass(frozen=True)
class PathReport:
    samples: tuple[float, ...]
    inside: bool
    lipschitz_bound_rate: float
    worst_pair: tuple[float, float]
    worst_ratio: float


def connect_path_report(
    pair: MarkedPair,
    *,
    samples: tuple[float, ...] = tuple(i / 10.0 for i in range(11)),
    n_const: float | None = None,
    twist_depth: int = 2,
    depth: int | None = None,
    profile: ConstantsProfile = DEFAULT_PROFILE,
) -> PathReport:
    """Sampled verification of the twist path.

    Refuses when the endpoint pair is outside membership.  Every sample
    must pass membership at the working constant, and every sample pair
    (s, t) must satisfy the displayed Lipschitz bound

        d_ls(Y_s, Y_t) <= (N + 2 e**K M) |s - t| / 4,

    the 4 coming from the exact collar constant.
    """
    depth = depth if depth is not None else pair.graph.max_level()
    verdict = ls_membership(pair, profile.n_cap)
    if verdict.status == "outside":
        raise HypothesisViolationError(f"pair is outside membership; witness {verdict.witness}")
    n_meas = verdict.max_ratio if n_const is None else n_const
    y0, big_k = bishop_length_match(pair, twist_depth=twist_depth, depth=depth, profile=profile)
    n_check = max(1.0, n_meas) * profile.n_membership
    rate = (max(1.0, n_meas) + 2.0 * math.exp(big_k) * profile.m_upper) / 4.0
    points = {s: connect_path(pair, s, matched=y0, profile=profile) for s in samples}
    inside = True
    for s in samples:
        v = ls_membership(MarkedPair(pair.graph, pair.base, points[s]), n_check)
        if v.status != "inside":
            inside = False
    worst = (0.0, 0.0)
    worst_ratio = 0.0
    for i, s in enumerate(samples):
        for t in samples[i:]:
            est = dls_estimate(
                MarkedPair(pair.graph, points[s], points[t]), twist_depth, depth, profile=profile
            )
            gap = rate * abs(s - t)
            if est.value > 0.0:
                ratio = est.value / gap if gap > 0 else math.inf
                if ratio > worst_ratio:
                    worst_ratio = ratio
                    worst = (s, t)
    return PathReport(
        samples=tuple(samples),
        inside=inside,
        lipschitz_bound_rate=rate,
        worst_pair=worst,
        worst_ratio=worst_ratio,
    )
