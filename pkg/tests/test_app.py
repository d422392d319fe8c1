from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Tuple

import pytest

import app
from conftest import FIXTURES


def _run(capsys, *argv: str) -> Tuple[int, Dict[str, Any]]:
    code = app.main(list(argv))
    lines = capsys.readouterr().out.strip().splitlines()
    return code, json.loads(lines[-1])


def fx(name: str) -> str:
    return str(FIXTURES / name)


def test_check(capsys) -> None:
    code, report = _run(capsys, "check", fx("lamination.json"))
    assert code == 0
    assert report == {"ok": True, "chords": 4, "mass": "4", "symmetric": True, "lamination": True}


@pytest.mark.parametrize("name", ["bad_angle.json", "negative_weight.json", "degenerate_chord.json"])
def test_check_rejects_malformed_currents(capsys, name: str) -> None:
    code, report = _run(capsys, "check", fx(name))
    assert code == 2
    assert report["ok"] is False
    assert report["error"] == "ValidationError"


def test_unreadable_input(capsys) -> None:
    code, report = _run(capsys, "check", fx("not_json.json"))
    assert code == 2
    assert report["error"] == "InputFileError"


def test_rank_leaf_is_vacuous(capsys) -> None:
    code, report = _run(capsys, "rank", fx("leaf.json"), "--n", "2")
    assert code == 0
    assert report["verdict"] == "certified"
    assert report["vacuous"] is True
    assert report["interleaved"] is None


def test_rank_crossing_pair_is_violated(capsys) -> None:
    code, report = _run(capsys, "rank", fx("crossing.json"), "--n", "2", "--mass", "1")
    assert code == 3
    assert report["ok"] is False
    assert report["verdict"] == "violated"
    assert sorted(report["interleaved"]) == ["a->c", "b->d"]
    assert len(report["witness"]["rows"]) == 3
    assert len(report["witness"]["permutations"]) >= 2


def test_rank_needs_mass_for_asymmetric_currents(capsys) -> None:
    code, report = _run(capsys, "rank", fx("asymmetric.json"), "--n", "2")
    assert code == 2
    assert "--mass" in report["message"]


def test_mass_out_of_range(capsys) -> None:
    code, report = _run(capsys, "rank", fx("leaf.json"), "--n", "2", "--mass", "5")
    assert code == 2
    assert report["error"] == "MassRangeError"


def test_dual_leaf_with_pictures(capsys, tmp_path: Path) -> None:
    svg, png = tmp_path / "leaf.svg", tmp_path / "leaf.png"
    code, report = _run(capsys, "dual", fx("leaf.json"), "--svg", str(svg), "--png", str(png))
    assert code == 0
    assert report["dimension"] == 1
    assert len(report["faces"]) == 3
    assert report["tree"] is True
    assert report["symmetric_faces"] == 3
    assert report["symmetric_dimension"] == 1
    assert svg.read_text(encoding="utf-8").startswith("<svg")
    assert png.stat().st_size > 0


def test_dual_budget(capsys) -> None:
    code, report = _run(capsys, "dual", fx("big.json"), "--mass", "1", "--budget", "24")
    assert code == 4
    assert report["error"] == "ComplexityBudgetError"


def test_metric(capsys) -> None:
    code, report = _run(capsys, "metric", fx("leaf.json"), fx("submeasures_leaf.json"))
    assert code == 0
    pairs = {(p["a"], p["b"]): p for p in report["pairs"]}
    first = pairs[("left", "right")]
    assert first["d"] == "1"
    assert first["relative_ab"] == "3/2"
    assert first["relative_ba"] == "-1/2"
    assert pairs[("left", "middle")]["d"] == "1/2"


@pytest.mark.parametrize(
    "name, error",
    [
        ("submeasures_bad.json", "NotLowerSubmeasureError"),
        ("submeasures_mismatch.json", "ContractError"),
        ("submeasures_unknown_chord.json", "ValidationError"),
    ],
)
def test_metric_errors(capsys, name: str, error: str) -> None:
    code, report = _run(capsys, "metric", fx("leaf.json"), fx(name))
    assert code == 2
    assert report["error"] == error


def test_triple_ratio(capsys) -> None:
    code, report = _run(capsys, "triple-ratio", fx("leaf.json"), "--points", "1/8", "1/4", "3/4")
    assert code == 0
    assert report["triple_ratio"] == "0"
    assert report["mass"] == "1"


def test_triple_ratio_at_an_endpoint(capsys) -> None:
    code, report = _run(capsys, "triple-ratio", fx("leaf.json"), "--points", "a", "1/4", "3/4")
    assert code == 2
    assert report["error"] == "GenericPositionError"


def test_cross_ratio(capsys) -> None:
    code, report = _run(capsys, "cross-ratio", fx("asymmetric.json"), "--mass", "0",
                        "--points", "15/16", "1/16", "7/16", "9/16")
    assert code == 0
    assert report["cross_ratio"] == "1"
    code, report = _run(capsys, "cross-ratio", fx("leaf.json"), "--points", "1/8", "1/4", "1/8", "3/4")
    assert code == 2
    assert report["error"] == "DiagonalError"


def test_translation_length(capsys) -> None:
    code, report = _run(capsys, "translation-length", fx("periodic_single.json"), "--m", "3")
    assert code == 0
    assert report["translation_length"] == "6"
    code, report = _run(capsys, "translation-length", fx("periodic_mixed.json"), "--m", "2")
    assert report["translation_length"] == "8"
    code, report = _run(capsys, "translation-length", fx("periodic_same_orbit.json"))
    assert code == 2


def test_period_check(capsys) -> None:
    code, report = _run(capsys, "period-check", fx("periodic_single.json"))
    assert code == 0
    assert report["lhs"] == report["rhs"]
    assert report["ray_shifted"] == report["ray_base"]


@pytest.mark.parametrize(
    "argv",
    [
        ["sl2", "verify-abc", "--trials", "6", "--seed", "3"],
        ["sl2", "hilbert", "--trials", "5"],
        ["sl2", "veronese", "--n", "3", "--trials", "3"],
    ],
)
def test_sl2_checks(capsys, argv: List[str]) -> None:
    code, report = _run(capsys, *argv)
    assert code == 0
    assert report["ok"] is True


def test_finsler_distance(capsys) -> None:
    code, report = _run(capsys, "finsler", "dist", "0", "0", "1", "0")
    assert code == 0
    assert report["distance"] == pytest.approx(2.0)
    assert report["reverse"] == pytest.approx(1.0)


def test_finsler_cross_ratio(capsys) -> None:
    code, report = _run(capsys, "finsler", "crossratio", "--config", fx("finsler_corridor.json"))
    assert code == 0
    assert report["pairing"] == pytest.approx(2 * math.sqrt(3) * 1.5)
    assert report["cross_distance"] == pytest.approx(report["pairing"], rel=1e-6)
    code, report = _run(capsys, "finsler", "crossratio", "--config", fx("finsler_rays.json"))
    assert report["pairing"] == pytest.approx(4 * math.sqrt(3))
    code, report = _run(capsys, "finsler", "crossratio", "--config", fx("finsler_degenerate.json"))
    assert code == 2
    assert report["error"] == "DegenerateConfigurationError"


def test_finsler_geodesics(capsys) -> None:
    code, report = _run(capsys, "finsler", "geodesic", "--polyline", fx("polyline_geodesic.json"))
    assert code == 0
    assert report["geodesic"] is True
    assert report["length"] == pytest.approx(report["distance"])
    _, report = _run(capsys, "finsler", "geodesic", "--polyline", fx("polyline_broken.json"))
    assert report["geodesic"] is False
    code, report = _run(capsys, "finsler", "geodesic", "--polyline", fx("polyline_bad.json"))
    assert code == 2
    assert report["error"] == "ValidationError"


def test_render(capsys, tmp_path: Path) -> None:
    svg = tmp_path / "nested.svg"
    code, report = _run(capsys, "render", fx("nested.json"), "--svg", str(svg), "--complex")
    assert code == 0
    assert report["svg"] == str(svg)
    assert svg.read_text(encoding="utf-8").count("<line") >= 2


def test_report_to_file(capsys, tmp_path: Path) -> None:
    out = tmp_path / "report.json"
    code = app.main(["--out", str(out), "check", fx("leaf.json")])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text(encoding="utf-8"))["lamination"] is True


def test_finsler_pictures(capsys, tmp_path: Path) -> None:
    strip = tmp_path / "corridor.svg"
    code, report = _run(capsys, "finsler", "crossratio", "--config", fx("finsler_corridor.json"), "--svg", str(strip))
    assert code == 0
    drawn = strip.read_text(encoding="utf-8")
    assert drawn.count("<rect") == 2
    assert drawn.count("<polyline") == 4
    path = tmp_path / "geodesic.svg"
    code, _ = _run(capsys, "finsler", "geodesic", "--polyline", fx("polyline_geodesic.json"), "--svg", str(path))
    assert code == 0
    assert path.read_text(encoding="utf-8").count("<polyline") == 1
