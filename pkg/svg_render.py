#!/usr/bin/env python3
"""
SVG Render for currentlab
Chord diagrams, dual complex skeletons and Finsler pictures as deterministic SVG, with a PNG preview
"""

import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

import networkx as nx
from PIL import Image, ImageDraw

import config
from current_core import DiscreteCurrent
from cyclic_boundary import BoundaryPoint
from dual_space import DualComplex, skeleton
from errors import ValidationError
from finsler_plane import Polyline, unit_triangle

logger = logging.getLogger(__name__)

PANEL = 320
RADIUS = 130
MARGIN = 30
CHORD_COLOR = "#1f4e79"
EDGE_COLOR = "#8c2d19"
CORRIDOR_COLOR = "#f5e6c8"


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _circle_xy(p: BoundaryPoint, cx: float, cy: float, r: float = RADIUS) -> Tuple[float, float]:
    theta = 2 * math.pi * float(p.angle)
    return cx + r * math.cos(theta), cy - r * math.sin(theta)


def _chord_elements(mu: DiscreteCurrent, cx: float, cy: float) -> List[str]:
    parts = [
        f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{RADIUS}" fill="none" stroke="#333333" stroke-width="1.5"/>'
    ]
    for c, w in mu.items():
        x1, y1 = _circle_xy(c.src, cx, cy)
        x2, y2 = _circle_xy(c.dst, cx, cy)
        parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{CHORD_COLOR}" stroke-width="1.2" marker-end="url(#arrow)"/>'
        )
        parts.append(
            f'<text x="{_fmt((x1 + x2) / 2)}" y="{_fmt((y1 + y2) / 2)}" font-size="10">{w}</text>'
        )
    for p in mu.endpoints():
        x, y = _circle_xy(p, cx, cy, RADIUS + 12)
        parts.append(f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="9">{mu.label(p)}</text>')
    return parts


def _layout(complex_: DualComplex, seed: int) -> Tuple[nx.Graph, Dict]:
    graph = skeleton(complex_)
    if graph.number_of_nodes() == 1:
        return graph, {next(iter(graph.nodes)): (0.0, 0.0)}
    pos = nx.spring_layout(graph, seed=seed, weight=None)
    return graph, {node: (float(x), float(y)) for node, (x, y) in pos.items()}


def _skeleton_elements(complex_: DualComplex, ox: float, oy: float, seed: int) -> List[str]:
    graph, pos = _layout(complex_, seed)
    scale = RADIUS

    def place(node):
        x, y = pos[node]
        return ox + x * scale, oy - y * scale

    parts = []
    for a, b, data in sorted(graph.edges(data=True), key=lambda e: (str(e[2]["weight"]), str(e[0]), str(e[1]))):
        (x1, y1), (x2, y2) = place(a), place(b)
        parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{EDGE_COLOR}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{_fmt((x1 + x2) / 2)}" y="{_fmt((y1 + y2) / 2 - 4)}" font-size="10">{data["weight"]}</text>'
        )
    for node in graph.nodes:
        x, y = place(node)
        parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3.5" fill="{EDGE_COLOR}"/>')
    return parts


def _document(width: int, height: int, body: Iterable[str]) -> str:
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" '
        'orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="#1f4e79"/></marker></defs>',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    return "\n".join(head + list(body) + ["</svg>"]) + "\n"


def render_svg(mu: DiscreteCurrent, complex_: Optional[DualComplex] = None, path=None,
               seed: Optional[int] = None) -> str:
    """Chord diagram, and the complex's 1-skeleton beside it when given; same input and seed give the same bytes"""
    seed = config.SVG_SEED if seed is None else seed
    panels = 2 if complex_ is not None else 1
    body = _chord_elements(mu, PANEL / 2, PANEL / 2)
    if complex_ is not None:
        body += _skeleton_elements(complex_, PANEL * 1.5, PANEL / 2, seed)
    svg = _document(PANEL * panels, PANEL, body)
    if path is not None:
        Path(path).write_text(svg, encoding="utf-8")
        logger.info(f"Wrote SVG to {path}")
    return svg


def render_png(mu: DiscreteCurrent, complex_: Optional[DualComplex], path, seed: Optional[int] = None) -> None:
    """Raster preview of the same picture"""
    seed = config.SVG_SEED if seed is None else seed
    panels = 2 if complex_ is not None else 1
    image = Image.new("RGB", (PANEL * panels, PANEL), "white")
    draw = ImageDraw.Draw(image)
    cx = cy = PANEL / 2
    draw.ellipse((cx - RADIUS, cy - RADIUS, cx + RADIUS, cy + RADIUS), outline="#333333", width=2)
    for c, w in mu.items():
        draw.line([_circle_xy(c.src, cx, cy), _circle_xy(c.dst, cx, cy)], fill=CHORD_COLOR, width=2)
    if complex_ is not None:
        graph, pos = _layout(complex_, seed)
        ox = PANEL * 1.5

        def place(node):
            x, y = pos[node]
            return ox + x * RADIUS, cy - y * RADIUS

        for a, b in graph.edges:
            draw.line([place(a), place(b)], fill=EDGE_COLOR, width=3)
        for node in graph.nodes:
            x, y = place(node)
            draw.ellipse((x - 4, y - 4, x + 4, y + 4), fill=EDGE_COLOR)
    image.save(path, format="PNG")
    logger.info(f"Wrote PNG preview to {path}")


def render_finsler_svg(polylines: Iterable[Polyline] = (), path=None, scale: float = 40.0,
                       corridors: Iterable[float] = ()) -> str:
    """Unit triangle of the norm with the given paths and corridors, origin at the center.

    A corridor of width L is the strip between the horizontal trajectories
    through 0 and iL.
    """
    size = PANEL
    ox = oy = size / 2

    def place(z: complex) -> Tuple[float, float]:
        return ox + scale * z.real, oy - scale * z.imag

    body = []
    for width in corridors:
        if width <= 0:
            raise ValidationError(f"Corridor width must be positive, got {width}")
        _, top = place(complex(0, width))
        body.append(f'<rect x="0" y="{_fmt(top)}" width="{size}" height="{_fmt(oy - top)}" '
                    f'fill="{CORRIDOR_COLOR}" fill-opacity="0.5"/>')
        for y in (top, oy):
            body.append(f'<line x1="0" y1="{_fmt(y)}" x2="{size}" y2="{_fmt(y)}" '
                        f'stroke="{CHORD_COLOR}" stroke-width="1" stroke-dasharray="4 2"/>')
    corners = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (place(v) for v in unit_triangle()))
    body.append(f'<polygon points="{corners}" fill="#e8eef5" stroke="#333333" stroke-width="1"/>')
    for line in polylines:
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (place(p) for p in line.points))
        body.append(f'<polyline points="{pts}" fill="none" stroke="{EDGE_COLOR}" stroke-width="1.5"/>')
    svg = _document(size, size, body)
    if path is not None:
        Path(path).write_text(svg, encoding="utf-8")
        logger.info(f"Wrote Finsler picture to {path}")
    return svg
