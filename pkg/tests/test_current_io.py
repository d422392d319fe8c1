from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from conftest import FIXTURES
from current_core import is_lamination, total_mass
from current_io import (
    complex_to_json,
    load_json,
    parse_current,
    parse_periodic,
    parse_submeasures,
    rational,
    read_current,
    serialize_current,
    serialize_submeasure,
    write_json,
)
from cyclic_boundary import chord
from dual_space import enumerate_complex, metric_d
from errors import InputFileError, NotLowerSubmeasureError, ValidationError
from holonomy import holonomy_context
from periodic_model import translation_length

F = Fraction


def test_rational_parsing() -> None:
    assert rational("1/3") == F(1, 3)
    assert rational(2) == 2
    assert rational(" -5/10 ") == F(-1, 2)
    for bad in (0.5, True, "x/2", "1/0"):
        with pytest.raises(ValidationError):
            rational(bad)


def test_read_leaf() -> None:
    mu = read_current(FIXTURES / "leaf.json")
    assert len(mu) == 2
    assert total_mass(mu) == 2
    assert is_lamination(mu)
    assert mu.chord_name(chord(0, F(1, 2))) == "a->b"


def test_serialized_current_reads_back(tmp_path: Path) -> None:
    mu = read_current(FIXTURES / "nested.json")
    path = tmp_path / "copy.json"
    write_json(path, serialize_current(mu))
    again = read_current(path)
    assert again == mu
    assert again.labels == mu.labels


@pytest.mark.parametrize(
    "name",
    [
        "bad_angle.json",
        "float_weight.json",
        "negative_weight.json",
        "unknown_point.json",
        "duplicate_angle.json",
        "degenerate_chord.json",
        "not_object.json",
    ],
)
def test_malformed_currents(name: str) -> None:
    with pytest.raises(ValidationError):
        read_current(FIXTURES / name)


def test_unreadable_files(tmp_path: Path) -> None:
    with pytest.raises(InputFileError):
        load_json(FIXTURES / "not_json.json")
    with pytest.raises(InputFileError) as err:
        load_json(tmp_path / "missing.json")
    assert err.value.details["path"].endswith("missing.json")


def test_missing_fields() -> None:
    with pytest.raises(ValidationError):
        parse_current({"points": {}})
    with pytest.raises(ValidationError):
        parse_current({"points": [], "chords": []})
    with pytest.raises(ValidationError):
        parse_current({"points": {"a": "0"}, "chords": ["a->a"]})


def test_submeasures() -> None:
    mu = read_current(FIXTURES / "leaf.json")
    points = parse_submeasures(load_json(FIXTURES / "submeasures_leaf.json"), mu)
    assert [name for name, _, _ in points] == ["left", "right", "middle"]
    (_, left, _), (_, right, offset), (_, middle, _) = points
    assert offset == F(1, 2)
    assert metric_d(left, right) == 1
    assert metric_d(left, middle) == F(1, 2)
    assert serialize_submeasure(middle, "middle")["values"] == {"a->b": "1/2", "b->a": "1/2"}


def test_bad_submeasures() -> None:
    mu = read_current(FIXTURES / "leaf.json")
    with pytest.raises(NotLowerSubmeasureError):
        parse_submeasures(load_json(FIXTURES / "submeasures_bad.json"), mu)
    with pytest.raises(ValidationError):
        parse_submeasures(load_json(FIXTURES / "submeasures_unknown_chord.json"), mu)


def test_periodic_files() -> None:
    single = parse_periodic(load_json(FIXTURES / "periodic_single.json"))
    assert translation_length(single, 3) == 6
    mixed = parse_periodic(load_json(FIXTURES / "periodic_mixed.json"))
    assert len(mixed) == 4
    assert translation_length(mixed, 2) == 8
    for name in ("periodic_same_orbit.json", "periodic_bad_slot.json"):
        with pytest.raises(ValidationError):
            parse_periodic(load_json(FIXTURES / name))


def test_complex_export() -> None:
    mu = read_current(FIXTURES / "leaf.json")
    data = complex_to_json(enumerate_complex(holonomy_context(mu)))
    assert data["mass"] == "1"
    assert data["dimension"] == 1
    assert len(data["faces"]) == 3
    edge = [f for f in data["faces"] if f["dim"] == 1][0]
    assert edge["F"] == ["a->b", "b->a"] and edge["maximal"]
    assert sorted(data["vertices"], key=lambda v: sorted(v)) == [{"a->b": "1"}, {"b->a": "1"}]
