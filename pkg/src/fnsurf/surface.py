"""Combinatorial pants decompositions and Fenchel-Nielsen points.

A PantsGraph is the combinatorics only: pants nodes with three slots each,
interior-curve edges between slots, boundary-geodesic legs and cusps.  An
FNPoint carries the metric data on top of a graph: a positive length for
every interior curve and leg (in extended scale) and a twist, in length
units, for every interior curve.

The two concrete infinite families used throughout are the flute (a chain
of pants, spare holes cusped, with a prescribed decreasing length law) and
the torus chain (a spine of pants with a one-holed torus hanging from each
spine node, the handle curves carrying the length law).  Finite-depth
truncations of either are honest subsurfaces with geodesic boundary, so
curve families of a depth-n truncation embed into depth n+1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import (
    ConfigurationError,
    DegenerateInputError,
    DomainError,
    TruncationRangeError,
)
from .extfloat import ExtScalar

CUSP = "cusp"
CURVE = "curve"
LEG = "leg"


@dataclass(frozen=True)
class Slot:
    kind: str  # CURVE | LEG | CUSP
    ref: str | None = None  # curve or leg id

    def __post_init__(self):
        if self.kind not in (CURVE, LEG, CUSP):
            raise ConfigurationError(f"unknown slot kind {self.kind!r}")
        if (self.ref is None) != (self.kind == CUSP):
            raise ConfigurationError("curve/leg slots need a ref, cusps must not have one")


@dataclass(frozen=True)
class Pants:
    name: str
    slots: tuple[Slot, Slot, Slot]
    level: int = 1


@dataclass(frozen=True)
class PantsGraph:
    """Pants nodes plus interior-curve edges; immutable after construction."""

    pants: tuple[Pants, ...]
    curve_ids: tuple[str, ...]  # interior curves, in canonical order
    leg_ids: tuple[str, ...]
    law_curves: tuple[str, ...] = ()  # curves governed by a family length law
    kind: str = "custom"

    def __post_init__(self):
        self._validate()

    # lookup helpers ----------------------------------------------------

    def pants_by_name(self, name: str) -> Pants:
        for p in self.pants:
            if p.name == name:
                return p
        raise KeyError(name)

    def curve_ends(self, cid: str) -> tuple[tuple[str, int], tuple[str, int]]:
        """The two (pants, slot) attachments of an interior curve, in graph order."""
        ends = []
        for p in self.pants:
            for s, slot in enumerate(p.slots):
                if slot.kind == CURVE and slot.ref == cid:
                    ends.append((p.name, s))
        if len(ends) != 2:
            raise ConfigurationError(f"curve {cid} has {len(ends)} attachments")
        return ends[0], ends[1]

    def leg_end(self, lid: str) -> tuple[str, int]:
        for p in self.pants:
            for s, slot in enumerate(p.slots):
                if slot.kind == LEG and slot.ref == lid:
                    return (p.name, s)
        raise KeyError(lid)

    def is_interior(self, cid: str) -> bool:
        return cid in self.curve_ids

    def max_level(self) -> int:
        return max(p.level for p in self.pants)

    # validation ---------------------------------------------------------

    def _validate(self):
        seen_curves: dict[str, int] = {}
        seen_legs: dict[str, int] = {}
        for p in self.pants:
            for slot in p.slots:
                if slot.kind == CURVE:
                    seen_curves[slot.ref] = seen_curves.get(slot.ref, 0) + 1
                elif slot.kind == LEG:
                    seen_legs[slot.ref] = seen_legs.get(slot.ref, 0) + 1
        for cid in self.curve_ids:
            if seen_curves.get(cid, 0) != 2:
                raise ConfigurationError(f"interior curve {cid} must fill exactly 2 slots")
        for lid in self.leg_ids:
            if seen_legs.get(lid, 0) != 1:
                raise ConfigurationError(f"leg {lid} must fill exactly 1 slot")
        if set(seen_curves) != set(self.curve_ids) or set(seen_legs) != set(self.leg_ids):
            raise ConfigurationError("slot references and id lists disagree")
        self._check_connected()

    def _check_connected(self):
        if not self.pants:
            raise ConfigurationError("empty graph")
        adj: dict[str, set[str]] = {p.name: set() for p in self.pants}
        for cid in self.curve_ids:
            (pa, _), (pb, _) = self.curve_ends(cid)
            adj[pa].add(pb)
            adj[pb].add(pa)
        todo = [self.pants[0].name]
        seen = set(todo)
        while todo:
            for nb in adj[todo.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    todo.append(nb)
        if len(seen) != len(self.pants):
            raise ConfigurationError("pants graph is not connected")


@dataclass
class FNPoint:
    """Fenchel-Nielsen coordinates on a fixed PantsGraph.

    Twist parameters are lengths; a full twist by l(C) is a Dehn twist.
    Boundary legs carry a length only.
    """

    curve_lengths: dict[str, ExtScalar]
    curve_twists: dict[str, float]
    leg_lengths: dict[str, ExtScalar] = field(default_factory=dict)

    def __post_init__(self):
        for cid, l in {**self.curve_lengths, **self.leg_lengths}.items():
            if l.sign() <= 0:
                raise DomainError(f"length of {cid} must be positive")

    def length(self, cid: str) -> ExtScalar:
        if cid in self.curve_lengths:
            return self.curve_lengths[cid]
        return self.leg_lengths[cid]

    def twist(self, cid: str) -> float:
        return self.curve_twists[cid]

    def copy(self) -> "FNPoint":
        return FNPoint(
            dict(self.curve_lengths), dict(self.curve_twists), dict(self.leg_lengths)
        )


# ---------------------------------------------------------------------------
# curve classes


@dataclass(frozen=True)
class CurveClass:
    """An enumerable simple closed curve.

    Either the decomposition curve itself (kind "pants") or the image of its
    dual under k full twists along it (kind "dual").  Duals cross their own
    curve once (handle) or twice (separating) and no other decomposition
    curve.
    """

    kind: str  # "pants" | "dual"
    curve_id: str
    k: int = 0
    crossings: int = 0  # i(curve, C_{curve_id}); 0 for pants classes

    def __post_init__(self):
        if self.kind not in ("pants", "dual"):
            raise ConfigurationError(f"unknown curve kind {self.kind!r}")
        if self.kind == "pants" and (self.k != 0 or self.crossings != 0):
            raise ConfigurationError("pants classes carry no twist index or crossings")
        if self.kind == "dual" and self.crossings not in (1, 2):
            raise ConfigurationError("dual classes cross their curve once or twice")

    def intersection_number(self, cid: str) -> int:
        if self.kind == "dual" and cid == self.curve_id:
            return self.crossings
        return 0

    def label(self) -> str:
        if self.kind == "pants":
            return self.curve_id
        return f"T^{self.k}(beta[{self.curve_id}])"


def dual_curve(g: PantsGraph, cid: str) -> CurveClass:
    """The dual of an interior curve: crossings 1 on a handle, 2 otherwise."""
    if not g.is_interior(cid):
        raise DomainError(f"{cid} is not an interior curve")
    (pa, _), (pb, _) = g.curve_ends(cid)
    crossings = 1 if pa == pb else 2
    return CurveClass(kind="dual", curve_id=cid, k=0, crossings=crossings)


def twisted_dual(g: PantsGraph, cid: str, k: int) -> CurveClass:
    base = dual_curve(g, cid)
    return replace(base, k=k)


def enumerate_curves(g: PantsGraph, twist_depth: int) -> list[CurveClass]:
    """All pants curves plus twisted duals up to |k| <= twist_depth.

    Order is deterministic: curves in graph order, each followed by its
    duals with k = -K ... K.
    """
    if twist_depth < 0:
        raise DomainError("twist depth must be >= 0")
    out: list[CurveClass] = []
    for cid in g.curve_ids:
        out.append(CurveClass(kind="pants", curve_id=cid))
        base = dual_curve(g, cid)
        for k in range(-twist_depth, twist_depth + 1):
            out.append(replace(base, k=k))
    return out


# ---------------------------------------------------------------------------
# length and twist laws


class LengthLaw:
    """Base class: a positive length per index, with self-description.

    The self-description (supremum, limit behaviour) is what lets the
    classifier certify properties of the infinite family from the law
    rather than from a finite truncation.
    """

    name = "abstract"

    def value(self, n: int) -> ExtScalar:
        raise NotImplementedError

    def log_value(self, n: int) -> float:
        return self.value(n).log()

    def sup_value(self) -> float:
        raise NotImplementedError

    def inf_value(self) -> float:
        raise NotImplementedError

    def tends_to_zero(self) -> bool:
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ExpLinearLaw(LengthLaw):
    """l_n = exp(-rate * n)."""

    rate: float = 1.0
    name = "exp-linear"

    def __post_init__(self):
        if self.rate <= 0:
            raise ConfigurationError("exp-linear law needs rate > 0")

    def value(self, n: int) -> ExtScalar:
        return ExtScalar.exp(-self.rate * n)

    def log_value(self, n: int) -> float:
        return -self.rate * n

    def sup_value(self) -> float:
        return math.exp(-self.rate)

    def inf_value(self) -> float:
        return 0.0

    def tends_to_zero(self) -> bool:
        return True

    def describe(self) -> dict:
        return {"law": self.name, "rate": self.rate}


@dataclass(frozen=True)
class ExpDoubleLaw(LengthLaw):
    """l_n = exp(-base**n); the fast flute."""

    base: float = 2.0
    name = "exp-double"

    def __post_init__(self):
        if self.base <= 1:
            raise ConfigurationError("exp-double law needs base > 1")

    def value(self, n: int) -> ExtScalar:
        return ExtScalar.exp(-(self.base**n))

    def log_value(self, n: int) -> float:
        return -(self.base**n)

    def sup_value(self) -> float:
        return math.exp(-self.base)

    def inf_value(self) -> float:
        return 0.0

    def tends_to_zero(self) -> bool:
        return True

    def describe(self) -> dict:
        return {"law": self.name, "base": self.base}


@dataclass(frozen=True)
class ConstantLaw(LengthLaw):
    value_const: float = 1.0
    name = "constant"

    def __post_init__(self):
        if self.value_const <= 0:
            raise ConfigurationError("constant law needs a positive value")

    def value(self, n: int) -> ExtScalar:
        return ExtScalar.from_float(self.value_const)

    def sup_value(self) -> float:
        return self.value_const

    def inf_value(self) -> float:
        return self.value_const

    def tends_to_zero(self) -> bool:
        return False

    def describe(self) -> dict:
        return {"law": self.name, "value": self.value_const}


@dataclass(frozen=True)
class LinearLaw(LengthLaw):
    """l_n = rate * n; unbounded, for the not-upper-bounded examples."""

    rate: float = 1.0
    name = "linear"

    def __post_init__(self):
        if self.rate <= 0:
            raise ConfigurationError("linear law needs rate > 0")

    def value(self, n: int) -> ExtScalar:
        return ExtScalar.from_float(self.rate * n)

    def sup_value(self) -> float:
        return math.inf

    def inf_value(self) -> float:
        return self.rate

    def tends_to_zero(self) -> bool:
        return False

    def describe(self) -> dict:
        return {"law": self.name, "rate": self.rate}


@dataclass(frozen=True)
class TableLaw(LengthLaw):
    """Explicit per-index lengths, for bit-exact fixtures."""

    table: tuple[ExtScalar, ...] = ()
    name = "table"

    def value(self, n: int) -> ExtScalar:
        if not 1 <= n <= len(self.table):
            raise ConfigurationError(f"table law has no index {n}")
        return self.table[n - 1]

    def sup_value(self) -> float:
        return max(v.to_float() for v in self.table)

    def inf_value(self) -> float:
        return min(v.to_float() for v in self.table)

    def tends_to_zero(self) -> bool:
        return False

    def describe(self) -> dict:
        return {"law": self.name, "size": len(self.table)}


def length_law(name: str, param: float | None = None, table=None) -> LengthLaw:
    if name == "exp-linear":
        return ExpLinearLaw(rate=param if param is not None else 1.0)
    if name == "exp-double":
        return ExpDoubleLaw(base=param if param is not None else 2.0)
    if name == "constant":
        return ConstantLaw(value_const=param if param is not None else 1.0)
    if name == "linear":
        return LinearLaw(rate=param if param is not None else 1.0)
    if name == "table":
        return TableLaw(table=tuple(table or ()))
    raise ConfigurationError(f"unknown length law {name!r}")


@dataclass(frozen=True)
class TwistLaw:
    """Twist offsets per index: tau_n = scale * growth(n).

    growth "zero" | "linear" (n) | "exp" (e**n) | "log-length" (|log l_n|).
    The log-length growth is what the non-dense constructions use.
    """

    growth: str = "zero"
    scale: float = 1.0

    def __post_init__(self):
        if self.growth not in ("zero", "linear", "exp", "log-length"):
            raise ConfigurationError(f"unknown twist growth {self.growth!r}")

    def value(self, n: int, length_law: LengthLaw | None = None) -> float:
        if self.growth == "zero":
            return 0.0
        if self.growth == "linear":
            return self.scale * n
        if self.growth == "exp":
            return self.scale * math.exp(n)
        if length_law is None:
            raise ConfigurationError("log-length twist law needs the length law")
        return self.scale * abs(length_law.log_value(n))

    def describe(self) -> dict:
        return {"growth": self.growth, "scale": self.scale}


@dataclass(frozen=True)
class SurfaceFamily:
    """A named infinite family: construction kind plus its laws.

    Base twists must satisfy |tau(C_n)| < l(C_n); the default zero law
    trivially does.
    """

    kind: str  # "flute" | "torus-chain" | "custom-table"
    law: LengthLaw = ExpLinearLaw()
    base_twists: TwistLaw = TwistLaw()
    spine_length: float = 1.0
    table_twists: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("flute", "torus-chain", "custom-table"):
            raise ConfigurationError(f"unknown family kind {self.kind!r}")

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "length_law": self.law.describe(),
            "base_twists": self.base_twists.describe(),
        }


# ---------------------------------------------------------------------------
# builders


def build_family(spec: SurfaceFamily, depth: int) -> tuple[PantsGraph, FNPoint]:
    """Instantiate a finite truncation of the family at the given depth."""
    if depth < 1:
        raise DomainError("depth must be >= 1")
    if spec.kind == "flute":
        return _build_flute(spec, depth)
    if spec.kind == "torus-chain":
        return _build_torus_chain(spec, depth)
    return _build_custom_table(spec, depth)


def _base_twist(spec: SurfaceFamily, n: int, length: ExtScalar) -> float:
    t = spec.base_twists.value(n, spec.law)
    if abs(t) >= length.to_float() and length.to_float() > 0:
        raise ConfigurationError(f"base twist {t} must satisfy |tau| < l at index {n}")
    return t


def _build_flute(spec: SurfaceFamily, depth: int) -> tuple[PantsGraph, FNPoint]:
    """Chain of pants P_1..P_depth; interior curves C_1..C_{depth-1}.

    P_1 closes off with two cusps; P_depth carries the truncation boundary
    leg C_depth (length taken from the same law) and one cusp.
    """
    pants = []
    cids = []
    lengths: dict[str, ExtScalar] = {}
    twists: dict[str, float] = {}
    for j in range(1, depth + 1):
        left = Slot(CUSP) if j == 1 else Slot(CURVE, f"C{j - 1}")
        if j < depth:
            mid = Slot(CURVE, f"C{j}")
        else:
            mid = Slot(LEG, f"C{depth}")
        pants.append(Pants(name=f"P{j}", slots=(left, mid, Slot(CUSP)), level=j))
        if j < depth:
            cid = f"C{j}"
            cids.append(cid)
            lengths[cid] = spec.law.value(j)
            twists[cid] = _base_twist(spec, j, lengths[cid])
    graph = PantsGraph(
        pants=tuple(pants),
        curve_ids=tuple(cids),
        leg_ids=(f"C{depth}",),
        law_curves=tuple(cids),
        kind="flute",
    )
    point = FNPoint(lengths, twists, {f"C{depth}": spec.law.value(depth)})
    return graph, point


def _build_torus_chain(spec: SurfaceFamily, depth: int) -> tuple[PantsGraph, FNPoint]:
    """Spine S_1..S_depth with a one-holed torus H_j hanging from each node.

    Handle curves h_j (both ends on H_j, so duals cross once) carry the
    length law; spine curves D_j and connectors c_j have the fixed spine
    length with zero twist.
    """
    pants = []
    cids = []
    lengths: dict[str, ExtScalar] = {}
    twists: dict[str, float] = {}
    spine = ExtScalar.from_float(spec.spine_length)
    for j in range(1, depth + 1):
        left = Slot(LEG, "D0") if j == 1 else Slot(CURVE, f"D{j - 1}")
        right = Slot(LEG, f"D{depth}") if j == depth else Slot(CURVE, f"D{j}")
        pants.append(Pants(name=f"S{j}", slots=(left, right, Slot(CURVE, f"c{j}")), level=j))
        pants.append(
            Pants(
                name=f"H{j}",
                slots=(Slot(CURVE, f"h{j}"), Slot(CURVE, f"h{j}"), Slot(CURVE, f"c{j}")),
                level=j,
            )
        )
        cids.append(f"h{j}")
        lengths[f"h{j}"] = spec.law.value(j)
        twists[f"h{j}"] = _base_twist(spec, j, lengths[f"h{j}"])
        cids.append(f"c{j}")
        lengths[f"c{j}"] = spine
        twists[f"c{j}"] = 0.0
        if j < depth:
            cids.append(f"D{j}")
            lengths[f"D{j}"] = spine
            twists[f"D{j}"] = 0.0
    graph = PantsGraph(
        pants=tuple(pants),
        curve_ids=tuple(cids),
        leg_ids=("D0", f"D{depth}"),
        law_curves=tuple(f"h{j}" for j in range(1, depth + 1)),
        kind="torus-chain",
    )
    point = FNPoint(lengths, twists, {"D0": spine, f"D{depth}": spine})
    return graph, point


def _build_custom_table(spec: SurfaceFamily, depth: int) -> tuple[PantsGraph, FNPoint]:
    """Flute-shaped chain with explicit per-index (length, twist) coordinates."""
    if not isinstance(spec.law, TableLaw):
        raise ConfigurationError("custom-table family needs a table law")
    if len(spec.law.table) < depth:
        raise ConfigurationError("table shorter than requested depth")
    graph, point = _build_flute(
        SurfaceFamily(kind="flute", law=spec.law, base_twists=TwistLaw()), depth
    )
    graph = PantsGraph(
        pants=graph.pants,
        curve_ids=graph.curve_ids,
        leg_ids=graph.leg_ids,
        law_curves=graph.law_curves,
        kind="custom-table",
    )
    if spec.table_twists:
        for j, cid in enumerate(graph.curve_ids, start=1):
            if j <= len(spec.table_twists):
                point.curve_twists[cid] = spec.table_twists[j - 1]
    return graph, point


# ---------------------------------------------------------------------------
# truncation


def truncate(g: PantsGraph, x: FNPoint, n: int) -> tuple[PantsGraph, FNPoint]:
    """Keep pants of level <= n; cut curves become boundary legs.

    Lengths on surviving curves are untouched (restricting to a geodesic
    subsurface keeps the metric); cut curves keep their length and drop the
    twist.  Truncations nest: level-n pants are a subset of level-(n+1).
    """
    top = g.max_level()
    if not 1 <= n <= top:
        raise TruncationRangeError(f"depth {n} outside 1..{top}")
    keep = {p.name for p in g.pants if p.level <= n}
    new_pants = []
    new_curves = []
    new_legs = []
    leg_lengths: dict[str, ExtScalar] = {}
    cut: set[str] = set()
    for cid in g.curve_ids:
        (pa, _), (pb, _) = g.curve_ends(cid)
        inside = (pa in keep) + (pb in keep)
        if inside == 2:
            new_curves.append(cid)
        elif inside == 1:
            cut.add(cid)
    for p in g.pants:
        if p.name not in keep:
            continue
        slots = []
        for slot in p.slots:
            if slot.kind == CURVE and slot.ref in cut:
                slots.append(Slot(LEG, slot.ref))
            else:
                slots.append(slot)
        new_pants.append(Pants(name=p.name, slots=tuple(slots), level=p.level))
    for lid in g.leg_ids:
        pname, _ = g.leg_end(lid)
        if pname in keep:
            new_legs.append(lid)
            leg_lengths[lid] = x.leg_lengths[lid]
    for cid in sorted(cut):
        new_legs.append(cid)
        leg_lengths[cid] = x.curve_lengths[cid]
    graph = PantsGraph(
        pants=tuple(new_pants),
        curve_ids=tuple(new_curves),
        leg_ids=tuple(new_legs),
        law_curves=tuple(c for c in g.law_curves if c in set(new_curves)),
        kind=g.kind,
    )
    point = FNPoint(
        {c: x.curve_lengths[c] for c in new_curves},
        {c: x.curve_twists[c] for c in new_curves},
        leg_lengths,
    )
    return graph, point


# ---------------------------------------------------------------------------
# marked pairs


@dataclass
class MarkedPair:
    """Two FN points on the identical graph: a base marking R and a target X."""

    graph: PantsGraph
    base: FNPoint
    target: FNPoint

    def __post_init__(self):
        for cid in self.graph.curve_ids:
            if cid not in self.base.curve_lengths or cid not in self.target.curve_lengths:
                raise ConfigurationError(f"both points must cover curve {cid}")


def fn_difference(pair: MarkedPair) -> tuple[list[tuple[float, float]], float]:
    """Per-curve (log l_X/l_R, tau_X - tau_R) components and their sup norm."""
    comps: list[tuple[float, float]] = []
    sup = 0.0
    for cid in pair.graph.curve_ids:
        dlog = pair.target.curve_lengths[cid].log() - pair.base.curve_lengths[cid].log()
        dtau = pair.target.curve_twists[cid] - pair.base.curve_twists[cid]
        comps.append((dlog, dtau))
        sup = max(sup, abs(dlog), abs(dtau))
    return comps, sup


def perturbed_point(
    x: FNPoint, rng, *, max_dlog: float = 0.2, max_dtau: float = 0.5
) -> FNPoint:
    """Random bounded FN perturbation; used by grids and tests."""
    y = x.copy()
    for cid in x.curve_lengths:
        factor = math.exp(rng.uniform(-max_dlog, max_dlog))
        y.curve_lengths[cid] = x.curve_lengths[cid] * factor
        y.curve_twists[cid] = x.curve_twists[cid] + rng.uniform(-max_dtau, max_dtau)
    return y


def apply_twist_law(
    graph: PantsGraph, base: FNPoint, law: TwistLaw, length_law: LengthLaw | None = None
) -> FNPoint:
    """Offset the base twists on the law curves by the given growth law."""
    y = base.copy()
    for j, cid in enumerate(graph.law_curves, start=1):
        y.curve_twists[cid] = base.curve_twists[cid] + law.value(j, length_law)
    return y


def curves_of_truncation(g: PantsGraph, n: int, twist_depth: int) -> list[CurveClass]:
    """Curve classes supported on the level <= n subsurface.

    The sub-list embeds into the family of any deeper truncation, which is
    what makes the exhaustion estimates monotone.
    """
    top = g.max_level()
    if not 1 <= n <= top:
        raise TruncationRangeError(f"depth {n} outside 1..{top}")
    keep = {p.name for p in g.pants if p.level <= n}
    out = []
    for c in enumerate_curves(g, twist_depth):
        (pa, _), (pb, _) = g.curve_ends(c.curve_id)
        if pa in keep and pb in keep:
            out.append(c)
    if not out:
        raise DegenerateInputError(f"no interior curves at depth {n}")
    return out
