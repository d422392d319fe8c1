from __future__ import annotations

from pathlib import Path

import pytest
from PIL import Image

from conftest import FIXTURES
from current_io import read_current
from dual_space import enumerate_complex
from errors import ValidationError
from finsler_plane import Polyline, corridor, descending_trajectory, ray_path
from holonomy import holonomy_context
from svg_render import PANEL, render_finsler_svg, render_png, render_svg


def _complex(name: str):
    mu = read_current(FIXTURES / name)
    return mu, enumerate_complex(holonomy_context(mu))


def test_svg_is_deterministic(tmp_path: Path) -> None:
    mu, complex_ = _complex("lamination.json")
    first = render_svg(mu, complex_, tmp_path / "a.svg", seed=3)
    second = render_svg(mu, complex_, tmp_path / "b.svg", seed=3)
    assert first == second
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()
    assert first.startswith("<svg")
    assert f'width="{2 * PANEL}"' in first


def test_chord_diagram_alone() -> None:
    mu, _ = _complex("crossing_leaves.json")
    svg = render_svg(mu)
    assert svg.count("<line") == len(mu)
    assert f'width="{PANEL}"' in svg


def test_single_vertex_complex_renders() -> None:
    mu, complex_ = _complex("empty.json")
    svg = render_svg(mu, complex_)
    assert svg.count("<circle") == 2


def test_png_preview(tmp_path: Path) -> None:
    mu, complex_ = _complex("leaf.json")
    path = tmp_path / "leaf.png"
    render_png(mu, complex_, path)
    with Image.open(path) as image:
        assert image.size == (2 * PANEL, PANEL)


def test_finsler_picture(tmp_path: Path) -> None:
    paths = [descending_trajectory(0, 1, -2, 2), Polyline([0, 1, 1 + 1j])]
    svg = render_finsler_svg(paths, tmp_path / "plane.svg")
    assert svg.count("<polyline") == 2
    assert "<polygon" in svg
    assert (tmp_path / "plane.svg").exists()


def test_finsler_corridor_picture() -> None:
    rays = [ray_path(f, 2.0) for f in corridor(1.5)]
    svg = render_finsler_svg(rays, corridors=[1.5])
    assert svg.count("<polyline") == 4
    assert svg.count("<line ") == 2
    assert 'height="60.000"' in svg
    assert svg.index("<rect x=") < svg.index("<polygon")
    assert render_finsler_svg(rays, corridors=[1.5]) == svg
    with pytest.raises(ValidationError):
        render_finsler_svg(corridors=[0])
