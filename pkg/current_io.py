#!/usr/bin/env python3
"""
Current I/O for currentlab
JSON formats for currents, submeasures, periodic currents and dual complexes
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Tuple

from current_core import DiscreteCurrent
from cyclic_boundary import BoundaryPoint, Chord, parse_angle
from dual_space import DualComplex, vertices
from errors import InputFileError, ValidationError
from holonomy import LowerSubmeasure
from periodic_model import PeriodicCircle, PeriodicCurrent

logger = logging.getLogger(__name__)


def rational(value: Any, what: str = "value") -> Fraction:
    """Parse a "p/q" string or an integer; floats are rejected"""
    if isinstance(value, bool) or isinstance(value, float):
        raise ValidationError(f"{what} must be an exact rational string, got {value!r}")
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValidationError(f"Malformed {what} {value!r}: {str(e)}")


def load_json(path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, UnicodeDecodeError) as e:
        raise InputFileError(f"Cannot read {path}: {str(e)}", path=str(path))
    except json.JSONDecodeError as e:
        raise InputFileError(f"Invalid JSON in {path}: {str(e)}", path=str(path))
    if not isinstance(data, dict):
        raise ValidationError(f"Top level of {path} must be a JSON object")
    return data


def write_json(path, data: Mapping[str, Any]) -> None:
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _require(data: Mapping[str, Any], key: str, kind):
    if key not in data:
        raise ValidationError(f"Missing field {key!r}")
    if not isinstance(data[key], kind):
        raise ValidationError(f"Field {key!r} has the wrong type")
    return data[key]


def parse_current(data: Mapping[str, Any]) -> DiscreteCurrent:
    """{"points": {name: "p/q"}, "chords": [{"src", "dst", "weight"}]}"""
    points_raw = _require(data, "points", dict)
    chords_raw = _require(data, "chords", list)
    points: Dict[str, BoundaryPoint] = {}
    owners: Dict[BoundaryPoint, str] = {}
    for name, text in points_raw.items():
        p = parse_angle(text)
        if p in owners:
            raise ValidationError(f"Points {owners[p]!r} and {name!r} share the angle {p}")
        points[name] = p
        owners[p] = name
    weights: List[Tuple[Chord, Fraction]] = []
    for entry in chords_raw:
        if not isinstance(entry, dict):
            raise ValidationError("Every chord must be a JSON object")
        ends = []
        for key in ("src", "dst"):
            name = _require(entry, key, str)
            if name not in points:
                raise ValidationError(f"Chord refers to unknown point {name!r}")
            ends.append(points[name])
        weights.append((Chord(*ends), rational(entry.get("weight", "1"), "weight")))
    mu = DiscreteCurrent(weights, labels=owners)
    logger.info(f"Parsed current with {len(mu)} chords on {len(points)} points")
    return mu


def serialize_current(mu: DiscreteCurrent) -> Dict[str, Any]:
    names: Dict[BoundaryPoint, str] = {}
    for i, p in enumerate(mu.endpoints()):
        names[p] = mu.labels.get(p, f"p{i}")
    return {
        "points": {names[p]: str(p.angle) for p in sorted(names)},
        "chords": [
            {"src": names[c.src], "dst": names[c.dst], "weight": str(w)} for c, w in mu.items()
        ],
    }


def read_current(path) -> DiscreteCurrent:
    return parse_current(load_json(path))


def _chord_by_name(mu: DiscreteCurrent, key: str) -> Chord:
    lookup = {mu.chord_name(c): c for c in mu}
    if key not in lookup:
        raise ValidationError(f"Unknown chord {key!r}")
    return lookup[key]


def parse_submeasures(data: Mapping[str, Any], mu: DiscreteCurrent) -> List[Tuple[str, LowerSubmeasure, Fraction]]:
    """{"submeasures": [{"name", "values": {"src->dst": "p/q"}, "offset"}]}"""
    entries = _require(data, "submeasures", list)
    parsed = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ValidationError("Every submeasure must be a JSON object")
        name = entry.get("name", f"nu{i}")
        values = {
            _chord_by_name(mu, key): rational(v, f"value of {key}")
            for key, v in _require(entry, "values", dict).items()
        }
        parsed.append((name, LowerSubmeasure(mu, values), rational(entry.get("offset", "0"), "offset")))
    return parsed


def serialize_submeasure(nu: LowerSubmeasure, name: str = "nu", offset: Fraction = Fraction(0)) -> Dict[str, Any]:
    mu = nu.parent
    return {
        "name": name,
        "values": {mu.chord_name(c): str(v) for c, v in nu.values.items() if v},
        "offset": str(offset),
    }


def parse_periodic(data: Mapping[str, Any]) -> PeriodicCurrent:
    """{"sides": {"N": [...], "S": [...]}, "chords": [{"src": [side, slot, k], "dst": [...], "weight"}]}"""
    sides = _require(data, "sides", dict)
    circle = PeriodicCircle(
        tuple(rational(v, "phase") for v in sides.get("N", [])),
        tuple(rational(v, "phase") for v in sides.get("S", [])),
    )
    reps: Dict[Chord, Fraction] = {}
    for entry in _require(data, "chords", list):
        ends = []
        for key in ("src", "dst"):
            raw = _require(entry, key, list)
            if len(raw) != 3 or not isinstance(raw[1], int) or not isinstance(raw[2], int):
                raise ValidationError(f"Periodic endpoint {raw!r} must be [side, slot, power]")
            ends.append(circle.point(raw[0], raw[1], raw[2]))
        c = Chord(*ends)
        if c in reps:
            raise ValidationError(f"Duplicate periodic chord {c}")
        reps[c] = rational(entry.get("weight", "1"), "weight")
    return PeriodicCurrent(reps, circle)


def complex_to_json(complex_: DualComplex) -> Dict[str, Any]:
    """Faces with L/F/U chord names and dimensions, plus exact vertex coordinates"""
    mu = complex_.mu
    maximal = set(complex_.maximal)
    faces = []
    for f in complex_.faces:
        entry = f.describe(mu)
        entry["dim"] = f.dimension
        entry["maximal"] = f in maximal
        faces.append(entry)
    return {
        "mass": str(complex_.T),
        "dimension": complex_.dimension,
        "faces": faces,
        "vertices": [
            {mu.chord_name(c): str(v) for c, v in nu.values.items() if v}
            for nu in vertices(complex_).values()
        ],
    }
