"""On-disk formats: surface files, constants profiles, verification reports.

Lengths are serialized as (mantissa, base-2 exponent) pairs so values at
the exp(-2**40) scale round-trip bit-exactly; a JSON float would not hold
them.  All writers emit canonical JSON (sorted keys, fixed separators,
trailing newline) so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .errors import ConfigurationError
from .extfloat import ExtScalar
from .metrics import ConstantsProfile
from .surface import CURVE, CUSP, LEG, FNPoint, Pants, PantsGraph, Slot

SURFACE_SCHEMA = "fns-1"
PROFILE_SCHEMA = "fns-profile-1"
REPORT_SCHEMA = "fns-report-1"


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _length_json(v: ExtScalar) -> dict:
    return {"mantissa": v.m, "exp2": v.e}


def _length_from(obj) -> ExtScalar:
    return ExtScalar(float(obj["mantissa"]), int(obj["exp2"]))


# ---------------------------------------------------------------------------
# surfaces


def surface_to_json(graph: PantsGraph, point: FNPoint, family: str | None = None) -> dict:
    curves = []
    for cid in graph.curve_ids:
        curves.append(
            {
                "id": cid,
                "length": _length_json(point.curve_lengths[cid]),
                "twist": point.curve_twists[cid],
                "boundary": False,
            }
        )
    for lid in graph.leg_ids:
        curves.append(
            {
                "id": lid,
                "length": _length_json(point.leg_lengths[lid]),
                "boundary": True,
            }
        )
    pants = []
    for p in graph.pants:
        slots = []
        for slot in p.slots:
            if slot.kind == CUSP:
                slots.append({"kind": CUSP})
            else:
                slots.append({"kind": slot.kind, "ref": slot.ref})
        pants.append({"name": p.name, "level": p.level, "slots": slots})
    return {
        "version": SURFACE_SCHEMA,
        "family": family or graph.kind,
        "depth": graph.max_level(),
        "pants": pants,
        "curves": curves,
        "law_curves": list(graph.law_curves),
    }


def surface_from_json(obj: dict) -> tuple[PantsGraph, FNPoint]:
    if obj.get("version") != SURFACE_SCHEMA:
        raise ConfigurationError(f"unsupported surface schema {obj.get('version')!r}")
    pants = []
    for p in obj["pants"]:
        slots = []
        for s in p["slots"]:
            if s["kind"] == CUSP:
                slots.append(Slot(CUSP))
            else:
                slots.append(Slot(s["kind"], s["ref"]))
        pants.append(Pants(name=p["name"], slots=tuple(slots), level=int(p["level"])))
    curve_lengths: dict[str, ExtScalar] = {}
    curve_twists: dict[str, float] = {}
    leg_lengths: dict[str, ExtScalar] = {}
    curve_ids = []
    leg_ids = []
    for c in obj["curves"]:
        if c["boundary"]:
            leg_ids.append(c["id"])
            leg_lengths[c["id"]] = _length_from(c["length"])
        else:
            curve_ids.append(c["id"])
            curve_lengths[c["id"]] = _length_from(c["length"])
            curve_twists[c["id"]] = float(c["twist"])
    graph = PantsGraph(
        pants=tuple(pants),
        curve_ids=tuple(curve_ids),
        leg_ids=tuple(leg_ids),
        law_curves=tuple(obj.get("law_curves", ())),
        kind=obj.get("family", "custom"),
    )
    return graph, FNPoint(curve_lengths, curve_twists, leg_lengths)


def save_surface(path: str | Path, graph: PantsGraph, point: FNPoint, family: str | None = None):
    Path(path).write_text(_canonical(surface_to_json(graph, point, family)))


def load_surface(path: str | Path) -> tuple[PantsGraph, FNPoint]:
    return surface_from_json(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# profiles


def profile_to_json(profile: ConstantsProfile) -> dict:
    return {
        "version": PROFILE_SCHEMA,
        "profile": profile.payload(),
        "hash": profile.digest(),
    }


def profile_from_json(obj: dict) -> ConstantsProfile:
    if obj.get("version") != PROFILE_SCHEMA:
        raise ConfigurationError(f"unsupported profile schema {obj.get('version')!r}")
    payload = dict(obj["profile"])
    calibration = payload.pop("calibration", None)
    profile = ConstantsProfile(
        **{k: v for k, v in payload.items()},
        calibration=tuple(sorted(calibration.items())) if calibration else None,
    )
    if obj.get("hash") != profile.digest():
        raise ConfigurationError("profile hash mismatch: file corrupted or edited")
    return profile


def save_profile(path: str | Path, profile: ConstantsProfile):
    Path(path).write_text(_canonical(profile_to_json(profile)))


def load_profile(path: str | Path) -> ConstantsProfile:
    return profile_from_json(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# reports


def report_to_json(
    command: str,
    profile: ConstantsProfile,
    items: list[dict],
    wall_time_ms: float | None = None,
) -> dict:
    out = {
        "version": REPORT_SCHEMA,
        "command": command,
        "profile_hash": profile.digest(),
        "items": items,
        "passed": all(i["passed"] for i in items),
    }
    if wall_time_ms is not None:
        # excluded by default: reports must be byte-identical across runs
        out["wall_time_ms"] = wall_time_ms
    return out


def save_report(path: str | Path, report: dict):
    Path(path).write_text(_canonical(report))


def grid_hash(obj) -> str:
    return hashlib.sha256(
        json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()
