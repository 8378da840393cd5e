"""Named verification suites behind ``fnsurf verify`` and the acceptance tests.

Each check returns its measured numbers so reports stay useful when a
check fails.  Fixtures are deterministic (seeded RNG, fixed grids); a
suite run with the same profile produces byte-identical report items.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .constructions import (
    SequenceSpec,
    classify_basepoint,
    connect_path,
    connect_path_report,
    cumulative_point,
    diverging_sequence,
    ratio_sum_bound,
    spacing_selector,
)
from .errors import FnsurfError
from .extfloat import ExtScalar
from .halfplane import (
    collar_half_width,
    groetzsch_mu,
    quad_modulus_h,
    trace_to_length,
)
from .holonomy import Holonomy, TwistVector, apply_twist, wolpert_residual
from .metrics import (
    DEFAULT_PROFILE,
    CalibrationGrid,
    ConstantsProfile,
    calibrate_constants,
    dls_estimate,
    dls_twist_lower,
    dls_twist_upper,
    dqc_lower_multitwist,
    dqc_lower_uniform,
    ls_membership,
)
from .surface import (
    CURVE,
    LEG,
    ConstantLaw,
    ExpDoubleLaw,
    ExpLinearLaw,
    FNPoint,
    LinearLaw,
    MarkedPair,
    Pants,
    PantsGraph,
    Slot,
    SurfaceFamily,
    TableLaw,
    TwistLaw,
    build_family,
    curves_of_truncation,
    dual_curve,
    enumerate_curves,
    perturbed_point,
    truncate,
    twisted_dual,
)

SUITES = (
    "special-functions",
    "holonomy",
    "bounds-ordering",
    "counterexample-trends",
    "membership",
    "path",
    "all",
)


@dataclass
class Check:
    name: str
    passed: bool
    measured: dict[str, float] = field(default_factory=dict)

    def item(self) -> dict:
        return {"name": self.name, "passed": self.passed, "measured": self.measured}


# ---------------------------------------------------------------------------
# shared fixtures


def one_holed_torus(l: float, tau: float, boundary: float) -> tuple[PantsGraph, FNPoint]:
    g = PantsGraph(
        pants=(Pants("H", (Slot(CURVE, "h"), Slot(CURVE, "h"), Slot(LEG, "L")), 1),),
        curve_ids=("h",),
        leg_ids=("L",),
        law_curves=("h",),
        kind="custom",
    )
    x = FNPoint(
        {"h": ExtScalar.from_float(l)}, {"h": tau}, {"L": ExtScalar.from_float(boundary)}
    )
    return g, x


def four_holed_sphere(
    l: float, tau: float, b1: float, b2: float, b3: float, b4: float
) -> tuple[PantsGraph, FNPoint]:
    g = PantsGraph(
        pants=(
            Pants("A", (Slot(LEG, "b1"), Slot(CURVE, "C"), Slot(LEG, "b2")), 1),
            Pants("B", (Slot(CURVE, "C"), Slot(LEG, "b3"), Slot(LEG, "b4")), 1),
        ),
        curve_ids=("C",),
        leg_ids=("b1", "b2", "b3", "b4"),
        law_curves=("C",),
        kind="custom",
    )
    x = FNPoint(
        {"C": ExtScalar.from_float(l)},
        {"C": tau},
        {k: ExtScalar.from_float(v) for k, v in [("b1", b1), ("b2", b2), ("b3", b3), ("b4", b4)]},
    )
    return g, x


def middle_curve_flute(l_mid: float) -> tuple[PantsGraph, FNPoint, str]:
    """Depth-4 flute whose second interior curve carries the grid length."""
    table = (
        ExtScalar.from_float(0.5),
        ExtScalar.from_float(l_mid),
        ExtScalar.from_float(0.5),
        ExtScalar.from_float(0.5),
    )
    fam = SurfaceFamily(kind="custom-table", law=TableLaw(table=table))
    g, x = build_family(fam, 4)
    return g, x, "C2"


GRID_LENGTH_EXPONENTS = tuple(range(-2, -21, -2))  # l = e**-2 .. e**-20
GRID_TWISTS = (0.1, 0.5, 1.0, 5.0, 20.0, 60.0, 120.0, 200.0)


def bounds_grid_points():
    for expo in GRID_LENGTH_EXPONENTS:
        yield expo, math.exp(expo)


def calibration_grid() -> tuple[SurfaceFamily, CalibrationGrid]:
    family = SurfaceFamily(kind="flute", law=ExpLinearLaw(rate=2.0))
    # indices 2..10 give lengths e**-4 .. e**-20 on the law curves
    return family, CalibrationGrid(indices=tuple(range(2, 11)), twists=GRID_TWISTS)


def calibrated_profile(base: ConstantsProfile = DEFAULT_PROFILE) -> ConstantsProfile:
    family, grid = calibration_grid()
    return calibrate_constants(family, grid, base)


# ---------------------------------------------------------------------------
# suite: special functions


def suite_special_functions(profile: ConstantsProfile) -> list[Check]:
    checks: list[Check] = []

    v = groetzsch_mu(1.0 / math.sqrt(2.0))
    checks.append(
        Check(
            "mu at the self-complementary point equals pi/2 (1e-12)",
            abs(v - math.pi / 2.0) < 1e-12,
            {"mu": v},
        )
    )

    worst = 0.0
    for i in range(50):
        r = math.exp(-9.0 + 8.8 * i / 49.0)  # log grid in (1e-4, ~0.8)
        rc = math.sqrt(1.0 - r * r)
        worst = max(worst, abs(groetzsch_mu(r) * groetzsch_mu(rc) - math.pi**2 / 4.0))
    checks.append(Check("mu(r) mu(r') = pi^2/4 on a 50-point grid (1e-12)", worst < 1e-12, {"worst": worst}))

    worst_landen = 0.0
    for i in range(50):
        r = 0.05 + 0.9 * i / 49.0
        lhs = groetzsch_mu(2.0 * math.sqrt(r) / (1.0 + r))
        worst_landen = max(worst_landen, abs(lhs - groetzsch_mu(r) / 2.0))
    checks.append(Check("descending Landen step halves mu (1e-12)", worst_landen < 1e-12, {"worst": worst_landen}))

    h1 = quad_modulus_h(1.0)
    checks.append(Check("h(1) = 1 (1e-10)", abs(h1 - 1.0) < 1e-10, {"h1": h1}))

    prev = None
    monotone = True
    for i in range(100):
        t = math.exp(-8.0 * math.log(10.0) + i * (16.0 * math.log(10.0)) / 99.0)
        val = quad_modulus_h(t)
        if prev is not None and val <= prev:
            monotone = False
        prev = val
    checks.append(Check("h strictly increasing across [1e-8, 1e8]", monotone, {}))

    # branch agreement at the modulus switch
    t0 = profile.modulus_branch
    direct = (2.0 / math.pi) * groetzsch_mu(1.0 / math.sqrt(1.0 + t0))
    asym = quad_modulus_h(t0 * 1.0000001)
    rel = abs(direct - asym) / direct
    checks.append(Check("h branch agreement at the switch (1e-9)", rel < 1e-9, {"rel": rel}))

    wl = collar_half_width(ExtScalar.from_float(2.0 * math.asinh(1.0))).to_float()
    checks.append(
        Check(
            "collar width at sinh(l/2)=1 equals arcsinh(1)",
            abs(wl - math.asinh(1.0)) < 1e-12,
            {"w": wl},
        )
    )
    worst_c = 0.0
    for expo in range(-10, -5):
        l = ExtScalar.exp(float(10.0**expo) and expo * math.log(10.0))
        exact = math.asinh(1.0 / math.sinh(l.to_float() / 2.0))
        asymp = math.log(4.0) - l.log()
        worst_c = max(worst_c, abs(exact - asymp))
    checks.append(Check("collar branch agreement on [1e-10, 1e-6] (1e-9)", worst_c < 1e-9, {"worst": worst_c}))

    t22 = trace_to_length(ExtScalar.from_float(2.0)).to_float()
    t2c = trace_to_length(ExtScalar.from_float(2.0 * math.cosh(1.0))).to_float()
    checks.append(
        Check(
            "trace 2 is parabolic, trace 2cosh(1) has length 2",
            t22 == 0.0 and abs(t2c - 2.0) < 1e-12,
            {"parabolic": t22, "l": t2c},
        )
    )
    big = trace_to_length(ExtScalar.from_float(1e40)).to_float()
    expected = 2.0 * math.acosh(0.5e40)
    checks.append(
        Check(
            "huge-trace asymptotic matches arccosh (1e-12 rel)",
            abs(big - expected) / expected < 1e-12,
            {"l": big},
        )
    )
    return checks


# ---------------------------------------------------------------------------
# suite: holonomy


def suite_holonomy(profile: ConstantsProfile) -> list[Check]:
    checks: list[Check] = []
    rng = random.Random(20240811)

    # boundary and pants-curve traces reproduce 2 cosh(l/2)
    fam = SurfaceFamily(kind="flute", law=ExpLinearLaw(rate=1.0))
    g, x = build_family(fam, 6)
    h = Holonomy(g, x)
    worst = 0.0
    for p in g.pants:
        for s, slot in enumerate(p.slots):
            want = 2.0 if slot.kind == "cusp" else 2.0 * math.cosh(x.length(slot.ref).to_float() / 2.0)
            got = h.slot_trace(p.name, s).to_float()
            worst = max(worst, abs(got - want) / want)
    checks.append(Check("hole traces match 2cosh(l/2), cusps exactly 2 (1e-9 rel)", worst < 1e-9, {"worst": worst}))

    # full-twist relabeling invariance on 100 random one-holed tori
    worst_rel = 0.0
    for _ in range(100):
        l = math.exp(rng.uniform(math.log(0.05), math.log(2.0)))
        tau = rng.uniform(-3.0, 3.0)
        bdry = rng.uniform(0.2, 2.0)
        k = rng.choice([-2, -1, 0, 1, 2])
        g1, x1 = one_holed_torus(l, tau, bdry)
        g2, x2 = one_holed_torus(l, tau + l, bdry)
        la = Holonomy(g1, x1).length(twisted_dual(g1, "h", k)).to_float()
        lb = Holonomy(g2, x2).length(twisted_dual(g2, "h", k - 1)).to_float()
        worst_rel = max(worst_rel, abs(la - lb) / la)
    checks.append(Check("full-twist relabeling on 100 random points (1e-9 rel)", worst_rel < 1e-9, {"worst": worst_rel}))

    # Wolpert residual on random one-holed tori and four-holed spheres
    worst_w = 0.0
    for _ in range(100):
        l = math.exp(rng.uniform(math.log(0.2), math.log(1.8)))
        tau = rng.uniform(-1.5, 1.5)
        g1, x1 = one_holed_torus(l, tau, rng.uniform(0.3, 1.6))
        worst_w = max(worst_w, wolpert_residual(g1, x1, "h"))
    for _ in range(100):
        l = math.exp(rng.uniform(math.log(0.2), math.log(1.2)))
        tau = rng.uniform(-1.5, 1.5)
        g1, x1 = four_holed_sphere(
            l, tau, rng.uniform(0.4, 1.4), rng.uniform(0.4, 1.4), rng.uniform(0.4, 1.4), rng.uniform(0.4, 1.4)
        )
        worst_w = max(worst_w, wolpert_residual(g1, x1, "C"))
    checks.append(Check("twist-derivative residual <= 1e-5 at step 1e-4 (200 random)", worst_w <= 1e-5, {"worst": worst_w}))

    # hexagon closure on random real-cuffed pants
    worst_h = 0.0
    for _ in range(50):
        g1, x1 = four_holed_sphere(
            rng.uniform(0.1, 1.5), 0.0, rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.5)
        )
        hh = Holonomy(g1, x1)
        worst_h = max(worst_h, hh.hexagon_closure_defect("A"), hh.hexagon_closure_defect("B"))
    checks.append(Check("hexagon seam circuit closes (1e-10)", worst_h < 1e-10, {"worst": worst_h}))
    return checks


# ---------------------------------------------------------------------------
# suite: bounds ordering (twist inequality + lower/upper sandwich)


def suite_bounds_ordering(profile: ConstantsProfile) -> list[Check]:
    checks: list[Check] = []
    if profile.twist_defect is None:
        profile = calibrated_profile(profile)

    # twist-length inequality over all enumerated curves
    worst_gap = -math.inf
    violations = 0
    for expo, l_mid in bounds_grid_points():
        g, x, cid = middle_curve_flute(l_mid)
        h0 = Holonomy(g, x)
        family = enumerate_curves(g, 2)
        base_lengths = {c.label(): h0.length(c).to_float() for c in family}
        for t in GRID_TWISTS:
            ht = Holonomy(g, apply_twist(g, x, {cid: t}))
            for c in family:
                moved = abs(ht.length(c).to_float() - base_lengths[c.label()])
                allowed = c.intersection_number(cid) * t
                gap = moved - allowed
                worst_gap = max(worst_gap, gap)
                if gap > 1e-9:
                    violations += 1
    checks.append(
        Check(
            "length change bounded by i(alpha,gamma)|t| on the grid (1e-9)",
            violations == 0,
            {"worst_gap": worst_gap},
        )
    )

    # sandwich: lower <= measured <= upper
    sandwich_viol = 0
    worst_lo = 0.0
    worst_hi = 0.0
    for expo, l_mid in bounds_grid_points():
        g, x, cid = middle_curve_flute(l_mid)
        beta = dual_curve(g, cid)
        h0 = Holonomy(g, x)
        l0 = h0.length(beta).log()
        for t in GRID_TWISTS:
            ht = Holonomy(g, apply_twist(g, x, {cid: t}))
            measured = 0.5 * abs(ht.length(beta).log() - l0)
            upper = dls_twist_upper(x, cid, t, profile).value
            if measured > upper + 1e-12:
                sandwich_viol += 1
            worst_hi = max(worst_hi, measured - upper)
            if l_mid <= profile.eps1:
                lower = dls_twist_lower(x, cid, t, profile).value
                if lower > measured + 1e-12:
                    sandwich_viol += 1
                worst_lo = max(worst_lo, lower - measured)
    checks.append(
        Check(
            "twist lower bound <= measured ratio <= collar upper bound",
            sandwich_viol == 0,
            {"worst_lower_excess": worst_lo, "worst_upper_excess": worst_hi},
        )
    )

    # collar floor on dual lengths
    floor_viol = 0
    for expo, l_mid in bounds_grid_points():
        g, x, cid = middle_curve_flute(l_mid)
        beta = dual_curve(g, cid)
        floor = 2.0 * beta.crossings * collar_half_width(x.curve_lengths[cid]).to_float()
        got = Holonomy(g, x).length(beta).to_float()
        if got < floor:
            floor_viol += 1
    checks.append(Check("dual lengths respect the collar floor", floor_viol == 0, {}))

    # uniform modulus bound never exceeds the per-curve bound
    worst_uni = 0.0
    for rho_i in (0.85, 0.9, 0.95, 1.0):
        for t in (1.0, 5.0, 20.0):
            tv = TwistVector.of({"h": t})
            per = dqc_lower_multitwist(
                one_holed_torus(0.5, 0.0, 1.0)[1], tv, {"h": rho_i}, profile
            ).value
            uni = dqc_lower_uniform(tv, 0.85, profile).value
            worst_uni = max(worst_uni, uni - per)
    checks.append(Check("uniform-angle modulus bound is the weaker one", worst_uni <= 1e-12, {"worst": worst_uni}))
    return checks


# ---------------------------------------------------------------------------
# suite: counterexample trends


def suite_counterexample_trends(profile: ConstantsProfile) -> list[Check]:
    checks: list[Check] = []
    rng = random.Random(987654)

    # exhaustion monotonicity on random marked pairs
    fam = SurfaceFamily(kind="flute", law=ExpLinearLaw(rate=1.0))
    g, x = build_family(fam, 30)
    violations = 0
    for _ in range(20):
        y = perturbed_point(x, rng)
        pair = MarkedPair(g, x, y)
        prev_by_k: dict[int, float] = {}
        for n in range(2, 31, 4):
            prev_k = -1.0
            for k in range(0, 6):
                val = dls_estimate(pair, k, n).value
                if val < prev_k - 0.0:
                    violations += 1
                prev_k = val
                if k in prev_by_k and val < prev_by_k[k]:
                    violations += 1
                prev_by_k[k] = val
    checks.append(Check("family estimate nondecreasing in depth and twist depth", violations == 0, {}))

    # diverging single twists: upper column decreasing below 0.02 by n = 50
    fam2 = SurfaceFamily(kind="flute", law=ExpLinearLaw(rate=1.0))
    g2, x2 = build_family(fam2, 51)
    uppers = []
    for n in range(3, 51):
        rep = diverging_sequence(fam2, g2, x2, n, profile)
        uppers.append(rep.dls_upper.value)
    decreasing = all(b < a for a, b in zip(uppers, uppers[1:]))
    checks.append(
        Check(
            "single-twist upper column decreases below 0.02 by n = 50",
            decreasing and uppers[-1] < 0.02,
            {"first": uppers[0], "last": uppers[-1]},
        )
    )

    # modulus lower bound column: strictly increasing, dilatation above 2 by t = 20
    g3, x3 = build_family(fam2, 11)
    cid = g3.law_curves[9]
    rho = Holonomy(g3, x3).min_crossing_sine(cid)
    col = []
    dil = []
    for t in range(1, 21):
        b = dqc_lower_multitwist(x3, TwistVector.of({cid: float(t)}), {cid: rho}, profile)
        col.append(b.value)
        dil.append(b.get("dilatation"))
    increasing = all(b > a for a, b in zip(col, col[1:]))
    checks.append(
        Check(
            "modulus lower bound increases; dilatation bound above 2 by t = 20",
            increasing and dil[-1] > 2.0,
            {"value_at_20": col[-1], "dilatation_at_20": dil[-1], "rho": rho},
        )
    )

    # non-dense points and their scaled versions
    ok7 = True
    measured = {}
    point_n1 = cumulative_point(fam2, g2, x2, SequenceSpec(kind="nondense", n_const=1.0), 20, profile)
    bound_n1 = point_n1.dls_upper
    ok7 &= bound_n1 <= 1.0 / 4.0
    measured["nondense_bound"] = bound_n1
    zk_bounds = {}
    for k in (1, 2, 4, 8):
        zk = cumulative_point(fam2, g2, x2, SequenceSpec(kind="zk", k=k), 20, profile)
        zk_bounds[k] = zk.dls_upper
        ok7 &= zk.dls_upper <= 1.0 / (4.0 * k) + 1e-12
    for k in (1, 2, 4):
        ratio = zk_bounds[2 * k] / zk_bounds[k]
        ok7 &= abs(ratio - 0.5) < 0.05
        measured[f"halving_{k}"] = ratio
    verdict = ls_membership(MarkedPair(g2, x2, point_n1.point), 1.05)
    ok7 &= verdict.status == "inside"
    checks.append(Check("non-dense bounds N/4, halving in k, membership inside", bool(ok7), measured))

    # tail domination on the fast flute
    fam3 = SurfaceFamily(kind="flute", law=ExpDoubleLaw(base=2.0))
    g4, x4 = build_family(fam3, 41)
    tails = {}
    for depth in (5, 10):
        cp = cumulative_point(fam3, g4, x4, SequenceSpec(kind="boundary-point"), depth, profile)
        tails[depth] = (cp.tail_bound, cp.integral_bound)
    ok10 = tails[10][0] < tails[5][0] and all(t[0] <= t[1] for t in tails.values())
    rng2 = random.Random(13)
    lemma_ok = True
    for _ in range(1000):
        n = rng2.randint(1, 12)
        xs = [rng2.uniform(1e-6, 10.0) for _ in range(n)]
        ys = [rng2.uniform(1e-6, 10.0) for _ in range(n)]
        lhs, rhs = ratio_sum_bound(xs, ys)
        if lhs > rhs * (1.0 + 1e-12):
            lemma_ok = False
    checks.append(
        Check(
            "tail sums decrease, integral dominates, ratio-sum lemma exact",
            ok10 and lemma_ok,
            {"tail5": tails[5][0], "tail10": tails[10][0], "integral5": tails[5][1]},
        )
    )
    return checks


# ---------------------------------------------------------------------------
# suite: membership


def suite_membership(profile: ConstantsProfile) -> list[Check]:
    checks: list[Check] = []
    fam = SurfaceFamily(kind="flute", law=ExpLinearLaw(rate=1.0))
    results = {}
    ok = True
    for depth in (20, 40):
        g, x = build_family(fam, depth + 1)
        from .surface import apply_twist_law

        inside_pt = apply_twist_law(g, x, TwistLaw(growth="linear", scale=1.0), fam.law)
        v_in = ls_membership(MarkedPair(g, x, inside_pt), 1.05)
        outside_pt = apply_twist_law(g, x, TwistLaw(growth="exp", scale=1.0), fam.law)
        v_out = ls_membership(
            MarkedPair(g, x, outside_pt),
            1.05,
            twist_law=TwistLaw(growth="exp", scale=1.0),
            length_law=fam.law,
            profile=profile,
        )
        results[f"inside_{depth}"] = v_in.status
        results[f"outside_{depth}"] = v_out.status
        ok &= v_in.status == "inside" and v_out.status == "outside"
        ok &= v_out.certificate is not None
    ok &= results["inside_20"] == results["inside_40"]
    ok &= results["outside_20"] == results["outside_40"]
    checks.append(
        Check(
            "linear twists inside at N=1.05; exponential outside with certificate; stable 20 vs 40",
            bool(ok),
            {},
        )
    )

    cls = classify_basepoint(SurfaceFamily(kind="flute", law=ExpLinearLaw(rate=1.0)), 10, profile)
    cls_const = classify_basepoint(SurfaceFamily(kind="flute", law=ConstantLaw(0.8)), 10, profile)
    cls_lin = classify_basepoint(SurfaceFamily(kind="flute", law=LinearLaw(rate=1.0)), 10, profile)
    ok_cls = (
        cls.upper_bounded
        and cls.short_interior_curves
        and not cls.shiga
        and cls_const.shiga
        and not cls_lin.upper_bounded
    )
    checks.append(Check("basepoint classification from the laws", ok_cls, {}))
    return checks


# ---------------------------------------------------------------------------
# suite: path


def suite_path(profile: ConstantsProfile) -> list[Check]:
    checks: list[Check] = []
    fam = SurfaceFamily(kind="flute", law=ExpLinearLaw(rate=1.0))
    g, x = build_family(fam, 15)
    target = cumulative_point(fam, g, x, SequenceSpec(kind="nondense", n_const=1.0), 14, profile)
    pair = MarkedPair(g, x, target.point)
    report = connect_path_report(pair, profile=profile)
    samples_ok = True
    y0 = connect_path(pair, 0.0, profile=profile)
    y1 = connect_path(pair, 1.0, profile=profile)
    for cid in g.curve_ids:
        if y1.curve_twists[cid] != target.point.curve_twists[cid]:
            samples_ok = False
        if y0.curve_twists[cid] != x.curve_twists[cid]:
            samples_ok = False
    checks.append(
        Check(
            "path endpoints exact; 66 sample pairs inside membership and Lipschitz",
            samples_ok and report.inside and report.worst_ratio <= 1.0,
            {"worst_ratio": report.worst_ratio, "rate": report.lipschitz_bound_rate},
        )
    )
    return checks


# ---------------------------------------------------------------------------
# dispatch


_SUITE_FUNCS = {
    "special-functions": suite_special_functions,
    "holonomy": suite_holonomy,
    "bounds-ordering": suite_bounds_ordering,
    "counterexample-trends": suite_counterexample_trends,
    "membership": suite_membership,
    "path": suite_path,
}


def run_suite(name: str, profile: ConstantsProfile = DEFAULT_PROFILE) -> list[Check]:
    if name == "all":
        out: list[Check] = []
        for key in SUITES[:-1]:
            out.extend(run_suite(key, profile))
        return out
    try:
        func = _SUITE_FUNCS[name]
    except KeyError:
        raise FnsurfError(f"unknown suite {name!r}") from None
    return func(profile)
