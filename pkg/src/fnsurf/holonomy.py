"""Holonomy of finite truncations and exact geodesic lengths.

Matrices are assembled per pair of pants from right-angled hexagon data and
composed along the curve being measured, so every evaluation is local to
the pants the curve actually meets.  All entries live in extended scale;
decomposition-curve lengths down to exp(-2**40) stay exact.

Conventions, fixed once and enforced by tests:

* In the frame of a cuff, the cuff runs along the imaginary axis, the pants
  develops into Re z > 0, the foot of the seam towards the *next* cuff
  (cyclic slot order) sits at i, the foot towards the previous cuff at
  e**a * i, where a is the half-length of the cuff.
* Crossing a glued curve with twist tau composes with T(tau + l/2) R, where
  T translates along the axis and R is the half-turn z -> -1/z.  The l/2
  offset makes the square one-holed torus (tau = 0) meet its dual at a
  right angle.
* Positive twist is the left earthquake: it drives the negative endpoint of
  any crossing geodesic further left (checked against the endpoint bound).

A full twist tau -> tau + l relabels the twisted duals k -> k - 1 and
leaves the length spectrum of the enumerated family unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InternalGeometryError
from .extfloat import ONE, TWO, ZERO, ExtScalar, ext_cosh, ext_sinh
from .halfplane import AngleData, trace_to_length
from .surface import CURVE, CurveClass, FNPoint, PantsGraph


# ---------------------------------------------------------------------------
# 2x2 matrices over ExtScalar


@dataclass(frozen=True)
class Mat2:
    a: ExtScalar
    b: ExtScalar
    c: ExtScalar
    d: ExtScalar

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def trace(self) -> ExtScalar:
        return self.a + self.d

    def det(self) -> ExtScalar:
        return self.a * self.d - self.b * self.c

    def inverse_sl2(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def neg(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)


R_HALF_TURN = Mat2(ZERO, ONE, -ONE, ZERO)
IDENTITY = Mat2(ONE, ZERO, ZERO, ONE)


def mat_translation(x: float) -> Mat2:
    """T(x): z -> e**x z, translation by x along the imaginary axis."""
    e = ExtScalar.exp(x / 2.0)
    return Mat2(e, ZERO, ZERO, ONE / e)


def mat_perp_translation(ch2: ExtScalar, sh2: ExtScalar) -> Mat2:
    """J(u) given cosh(u/2), sinh(u/2): translation along the unit semicircle."""
    return Mat2(ch2, sh2, sh2, ch2)


# ---------------------------------------------------------------------------
# twist vectors


@dataclass(frozen=True)
class TwistVector:
    """Finitely supported twist magnitudes per interior curve, length units."""

    entries: tuple[tuple[str, float], ...]

    @classmethod
    def of(cls, mapping: dict[str, float]) -> "TwistVector":
        return cls(tuple(sorted(mapping.items())))

    def as_dict(self) -> dict[str, float]:
        return dict(self.entries)

    @property
    def sup_norm(self) -> float:
        return max((abs(t) for _, t in self.entries), default=0.0)


def apply_twist(graph: PantsGraph, x: FNPoint, t: TwistVector | dict[str, float]) -> FNPoint:
    """Add twist magnitudes; lengths of decomposition curves are unchanged."""
    values = t.as_dict() if isinstance(t, TwistVector) else dict(t)
    y = x.copy()
    for cid, dt in values.items():
        if cid not in graph.curve_ids:
            raise DomainError(f"cannot twist along {cid}: not an interior curve")
        y.curve_twists[cid] = y.curve_twists[cid] + dt
    return y


# ---------------------------------------------------------------------------
# the engine


@dataclass
class _SlotData:
    a: ExtScalar  # half-length; zero for cusps
    cosh_a: ExtScalar
    sinh_a: ExtScalar
    is_cusp: bool


class Holonomy:
    """Holonomy evaluation for one (graph, FN point) pair.

    Immutable once built; evaluations are pure and independent, so curve
    families may be mapped over in any order (reports reduce in the
    deterministic enumeration order regardless).
    """

    def __init__(self, graph: PantsGraph, point: FNPoint):
        self.graph = graph
        self.point = point
        self._slots: dict[tuple[str, int], _SlotData] = {}
        for p in graph.pants:
            for s, slot in enumerate(p.slots):
                if slot.kind == CURVE or slot.kind == "leg":
                    l = point.length(slot.ref)
                    if l.sign() <= 0:
                        raise DomainError(f"degenerate zero length on {slot.ref}")
                    a = l * 0.5
                    self._slots[(p.name, s)] = _SlotData(a, ext_cosh(a), ext_sinh(a), False)
                else:
                    self._slots[(p.name, s)] = _SlotData(ZERO, ONE, ZERO, True)

    # -- scalar kernels -------------------------------------------------

    def _loop_matrix(self, pants: str, r: int, w: int) -> Mat2:
        """Holonomy of the loop around cuff w, written in the frame of cuff r.

        Cusp-safe: with P = (cosh a_r cosh a_w + cosh a_t)/sinh a_r and
        Q = sinh a_w sinh u_rw the matrix is
        [[cosh a_w - P, Q], [-Q, cosh a_w + P]]; taking a_w -> 0 gives the
        parabolic loop with trace exactly 2.
        """
        t = 3 - r - w
        dr = self._slots[(pants, r)]
        dw = self._slots[(pants, w)]
        dt = self._slots[(pants, t)]
        if dr.is_cusp:
            raise InternalGeometryError("frame cuff must have positive length")
        p_val = (dr.cosh_a * dw.cosh_a + dt.cosh_a) / dr.sinh_a
        q_val = (
            (ext_cosh(dr.a - dw.a) + dt.cosh_a) * (ext_cosh(dr.a + dw.a) + dt.cosh_a)
        ).sqrt() / dr.sinh_a
        return Mat2(dw.cosh_a - p_val, q_val, -q_val, dw.cosh_a + p_val)

    def _transit_next(self, pants: str, r: int) -> Mat2:
        """Frame change from cuff r to cuff next(r): J(u) T(a_next) R.

        Needs both cuffs non-degenerate; duals only ever transit between
        the two sides of a glued curve, which has positive length.
        """
        s = (r + 1) % 3
        t = 3 - r - s
        dr = self._slots[(pants, r)]
        ds = self._slots[(pants, s)]
        dt = self._slots[(pants, t)]
        if dr.is_cusp or ds.is_cusp:
            raise InternalGeometryError("transit through a cusp")
        denom = dr.sinh_a * ds.sinh_a * 2.0
        ch2 = ((ext_cosh(dr.a + ds.a) + dt.cosh_a) / denom).sqrt()
        sh2 = ((ext_cosh(dr.a - ds.a) + dt.cosh_a) / denom).sqrt()
        j = mat_perp_translation(ch2, sh2)
        t_half = mat_translation(ds.a.to_float())
        return j @ t_half @ R_HALF_TURN

    # -- curve words -----------------------------------------------------

    def _ends(self, cid: str):
        (pa, ra), (pb, rb) = self.graph.curve_ends(cid)
        return pa, ra, pb, rb

    def is_handle(self, cid: str) -> bool:
        pa, _, pb, _ = self._ends(cid)
        return pa == pb

    def twist_offset(self, cid: str, k: int = 0) -> float:
        """Effective twist argument of the dual trace formula, length units.

        Zero at the symmetric configuration, advancing by l per unit k; the
        separating case carries the l/2 crossing offset.
        """
        lf = self.point.curve_lengths[cid].to_float()
        tau = self.point.curve_twists[cid]
        if self.is_handle(cid):
            return tau + k * lf
        return tau + 0.5 * lf + k * lf

    def _crossing_matrix(self, cid: str, h_arg: float) -> Mat2:
        """T(h_arg + l/2) R: the gluing factor at a crossing of the curve."""
        lf = self.point.curve_lengths[cid].to_float()
        return mat_translation(h_arg + 0.5 * lf) @ R_HALF_TURN

    def _dual_matrix_raw(self, cid: str, h: float) -> Mat2:
        """Dual word with twist-plus-k argument h (handle) / h per crossing."""
        pa, ra, pb, rb = self._ends(cid)
        if pa == pb:
            r, s = (ra, rb) if (ra + 1) % 3 == rb else (rb, ra)
            return self._transit_next(pa, r) @ self._crossing_matrix(cid, h)
        cross = self._crossing_matrix(cid, h)
        xw = self._loop_matrix(pa, ra, (ra + 1) % 3)
        xv = self._loop_matrix(pb, rb, (rb + 1) % 3)
        return xw @ cross @ xv @ cross

    def dual_matrix(self, cid: str, k: int = 0, *, swapped: bool = False) -> Mat2:
        """Holonomy word of the k-fold twisted dual, in the anchor cuff frame.

        The twist enters through every crossing factor, so these are the
        genuine Dehn-twist images of the base dual.  ``swapped`` cycles a
        separating word to its second crossing.
        """
        if not self.graph.is_interior(cid):
            raise DomainError(f"{cid} is not an interior curve")
        lf = self.point.curve_lengths[cid].to_float()
        h = self.point.curve_twists[cid] + k * lf
        if not swapped:
            return self._dual_matrix_raw(cid, h)
        pa, ra, pb, rb = self._ends(cid)
        if pa == pb:
            return self._dual_matrix_raw(cid, h)
        cross = self._crossing_matrix(cid, h)
        xw = self._loop_matrix(pa, ra, (ra + 1) % 3)
        xv = self._loop_matrix(pb, rb, (rb + 1) % 3)
        return xv @ cross @ xw @ cross

    # -- public evaluation -------------------------------------------------

    def trace(self, c: CurveClass) -> ExtScalar:
        if c.kind == "pants":
            a = self.point.curve_lengths[c.curve_id] * 0.5
            return ext_cosh(a) * 2.0
        return self.dual_matrix(c.curve_id, c.k).trace()

    def length(self, c: CurveClass) -> ExtScalar:
        """Geodesic length of the class; pants classes return the coordinate."""
        if c.kind == "pants":
            return self.point.curve_lengths[c.curve_id]
        return trace_to_length(abs(self.trace(c)))

    def dual_length_at_offset(self, cid: str, offset: float) -> ExtScalar:
        """Dual length with the effective twist argument forced to ``offset``.

        offset = twist_offset(cid, k) reproduces the k-twisted dual;
        offset = 0 evaluates the symmetric configuration.
        """
        lf = self.point.curve_lengths[cid].to_float()
        h = offset if self.is_handle(cid) else offset - 0.5 * lf
        return trace_to_length(abs(self._dual_matrix_raw(cid, h).trace()))

    def slot_trace(self, pants: str, slot: int) -> ExtScalar:
        """|trace| of the hole at (pants, slot): 2 cosh(l/2), exactly 2 for cusps."""
        d = self._slots[(pants, slot)]
        return d.cosh_a * 2.0

    # -- crossings ---------------------------------------------------------

    def _axis_endpoints(self, m: Mat2) -> tuple[ExtScalar, ExtScalar]:
        """Fixed points of a hyperbolic word whose axis crosses the frame axis.

        Returned normalized so that x1 * x2 = -1 with x1 < 0 < x2.
        """
        tr = m.trace()
        ta = abs(tr)
        if ta <= 2.0:
            raise InternalGeometryError("axis of a non-hyperbolic word")
        disc = ((ta - TWO) * (ta + TWO)).sqrt()
        s_diff = m.a - m.d
        if m.c.is_zero():
            raise InternalGeometryError("axis through infinity in the cuff frame")
        if s_diff.sign() >= 0:
            xa = (s_diff + disc) / (m.c * 2.0)
        else:
            xa = (s_diff - disc) / (m.c * 2.0)
        prod = -(m.b / m.c)
        if prod.sign() >= 0:
            raise InternalGeometryError("dual axis fails to cross its curve")
        xb = prod / xa
        scale = abs(prod).sqrt()
        x1, x2 = xa / scale, xb / scale
        if x1 > x2:
            x1, x2 = x2, x1
        return x1, x2

    def crossing_data(self, cid: str, k: int = 0) -> list[tuple[AngleData, float]]:
        """(angle, signed cosine) at each crossing of the k-twisted dual with its curve."""
        words = [self.dual_matrix(cid, k)]
        if not self.is_handle(cid):
            words.append(self.dual_matrix(cid, k, swapped=True))
        out = []
        for m in words:
            x1, x2 = self._axis_endpoints(m)
            span = x2 - x1
            sin_t = float(TWO / span)
            cos_t = float(-(x1 + x2) / span)
            theta = math.atan2(sin_t, cos_t)
            out.append((AngleData(theta=theta, sin_theta=sin_t), cos_t))
        return out

    def intersection_data(self, cid: str, k: int = 0) -> list[AngleData]:
        """Crossing angle(s) between the decomposition curve and its (twisted) dual."""
        return [angle for angle, _ in self.crossing_data(cid, k)]

    def min_crossing_sine(self, cid: str, k: int = 0) -> float:
        return min(a.sin_theta for a in self.intersection_data(cid, k))

    def dual_axis_endpoints(self, cid: str, k: int = 0) -> tuple[float, float]:
        """Normalized axis feet (x1, x2) of the twisted dual, as floats."""
        x1, x2 = self._axis_endpoints(self.dual_matrix(cid, k))
        return x1.to_float(), x2.to_float()

    # -- internal consistency ----------------------------------------------

    def hexagon_closure_defect(self, pants: str) -> float:
        """Deviation of the seam circuit from +-identity (needs 3 real cuffs).

        The three transits walk the boundary of one right-angled hexagon;
        the product must be a half-turn-free identity up to sign.
        """
        prod = self._transit_next(pants, 0) @ self._transit_next(pants, 1) @ self._transit_next(pants, 2)
        sign = 1.0 if prod.a.sign() >= 0 else -1.0
        defect = 0.0
        for got, want in (
            (prod.a, sign),
            (prod.b, 0.0),
            (prod.c, 0.0),
            (prod.d, sign),
        ):
            defect = max(defect, abs(got.to_float() - want))
        return defect


# ---------------------------------------------------------------------------
# derivative check


def wolpert_residual(
    graph: PantsGraph,
    point: FNPoint,
    cid: str,
    k: int = 0,
    step: float = 1e-4,
) -> float:
    """|d l(beta)/dt - sum of crossing cosines| at the base point.

    The twist derivative of a crossing curve's length equals the sum of
    signed cosines at its crossings; checking it validates the matrix
    assembly and the angle extraction jointly.
    """
    from .surface import twisted_dual

    c = twisted_dual(graph, cid, k)
    plus = Holonomy(graph, apply_twist(graph, point, {cid: step})).length(c).to_float()
    minus = Holonomy(graph, apply_twist(graph, point, {cid: -step})).length(c).to_float()
    deriv = (plus - minus) / (2.0 * step)
    cos_sum = sum(cos for _, cos in Holonomy(graph, point).crossing_data(cid, k))
    return abs(deriv - cos_sum)


def geodesic_length(h: Holonomy, c: CurveClass) -> ExtScalar:
    """Module-level alias used by the estimators."""
    return h.length(c)
