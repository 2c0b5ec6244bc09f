"""SVG region constraints: parsing, serialization and geometry.

Supported elements: rect, circle, ellipse, polygon and path (absolute M/L/Z
only). Coordinates live in the full-resolution target image pixel space;
clients convert view coordinates before calling in. Boundary points count
as inside for containment tests.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Union

Point = tuple[float, float]

_NUMBER_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")
_PATH_TOKEN_RE = re.compile(r"([A-Za-z])|" + _NUMBER_RE.pattern)


class SvgError(ValueError):
    """Raised for SVG snippets outside the supported subset."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


class NonPositiveScaleError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Rect:
    x: float
    y: float
    w: float
    h: float

    def __post_init__(self) -> None:
        if self.w < 0 or self.h < 0:
            raise ValueError("rect extents must be non-negative")


@dataclass(frozen=True, slots=True)
class Circle:
    cx: float
    cy: float
    r: float

    def __post_init__(self) -> None:
        if self.r <= 0:
            raise ValueError("circle radius must be positive")


@dataclass(frozen=True, slots=True)
class Ellipse:
    cx: float
    cy: float
    rx: float
    ry: float

    def __post_init__(self) -> None:
        if self.rx <= 0 or self.ry <= 0:
            raise ValueError("ellipse radii must be positive")


@dataclass(frozen=True, slots=True)
class Polygon:
    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        if len(self.points) < 3:
            raise ValueError("polygon needs at least 3 points")


@dataclass(frozen=True, slots=True)
class Subpath:
    points: tuple[Point, ...]
    closed: bool = False

    def __post_init__(self) -> None:
        if len(self.points) < 2:
            raise ValueError("subpath needs at least 2 points")


@dataclass(frozen=True, slots=True)
class Path:
    subpaths: tuple[Subpath, ...]

    def __post_init__(self) -> None:
        if not self.subpaths:
            raise ValueError("path needs at least one subpath")


SvgShape = Union[Rect, Circle, Ellipse, Polygon, Path]


# --- parsing ---


def _parse_element(svg_source: str) -> ET.Element:
    try:
        return ET.fromstring(svg_source)
    except ET.ParseError as exc:
        raise SvgError("MalformedAttribute", f"not well-formed XML: {exc}")


def _local_name(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _attr_number(elem: ET.Element, name: str, default: float | None = None) -> float:
    raw = elem.get(name)
    if raw is None:
        if default is not None:
            return default
        raise SvgError("MalformedAttribute", f"missing attribute {name!r}")
    try:
        return float(raw)
    except ValueError:
        raise SvgError("MalformedAttribute", f"{name}={raw!r} is not a number")


def _parse_points(text: str) -> tuple[Point, ...]:
    numbers = [float(m.group(0)) for m in _NUMBER_RE.finditer(text)]
    if len(numbers) % 2 != 0:
        raise SvgError("MalformedAttribute", "odd number of polygon coordinates")
    return tuple(zip(numbers[0::2], numbers[1::2]))


def _parse_path_data(d: str) -> tuple[Subpath, ...]:
    tokens = [m.group(0) for m in _PATH_TOKEN_RE.finditer(d)]
    subpaths: list[Subpath] = []
    points: list[Point] = []
    closed = False
    i = 0

    def flush() -> None:
        nonlocal points, closed
        if len(points) == 1:
            raise SvgError("MalformedAttribute", "single-point subpath")
        if points:
            subpaths.append(Subpath(tuple(points), closed))
        points = []
        closed = False

    def read_pair() -> Point:
        nonlocal i
        if i + 1 >= len(tokens):
            raise SvgError("MalformedAttribute", "path data ends mid-coordinate")
        try:
            pair = (float(tokens[i]), float(tokens[i + 1]))
        except ValueError:
            raise SvgError("MalformedAttribute", f"expected coordinates at {tokens[i]!r}")
        i += 2
        return pair

    command = ""
    while i < len(tokens):
        tok = tokens[i]
        if tok.isalpha():
            if tok not in ("M", "L", "Z"):
                raise SvgError("UnsupportedPathCommand", f"command {tok!r}")
            command = tok
            i += 1
            if command == "M":
                flush()
                points.append(read_pair())
                command = "L"  # subsequent pairs are implicit line-tos
            elif command == "Z":
                closed = True
                flush()
        else:
            if command != "L" or not points:
                raise SvgError("MalformedAttribute", f"unexpected number {tok!r}")
            points.append(read_pair())

    flush()
    if not subpaths:
        raise SvgError("MalformedAttribute", "empty path data")
    return tuple(subpaths)


def parse_svg_constraint(svg_source: str) -> SvgShape:
    """Parse a single-element SVG snippet into a typed shape."""
    elem = _parse_element(svg_source)
    name = _local_name(elem.tag)
    if name == "rect":
        w = _attr_number(elem, "width")
        h = _attr_number(elem, "height")
        if w <= 0 or h <= 0:
            raise SvgError("MalformedAttribute", "rect extents must be positive")
        return Rect(_attr_number(elem, "x", 0.0), _attr_number(elem, "y", 0.0), w, h)
    if name == "circle":
        r = _attr_number(elem, "r")
        if r <= 0:
            raise SvgError("MalformedAttribute", "circle radius must be positive")
        return Circle(_attr_number(elem, "cx", 0.0), _attr_number(elem, "cy", 0.0), r)
    if name == "ellipse":
        rx = _attr_number(elem, "rx")
        ry = _attr_number(elem, "ry")
        if rx <= 0 or ry <= 0:
            raise SvgError("MalformedAttribute", "ellipse radii must be positive")
        return Ellipse(_attr_number(elem, "cx", 0.0), _attr_number(elem, "cy", 0.0), rx, ry)
    if name == "polygon":
        points = _parse_points(elem.get("points", ""))
        if len(points) < 3:
            raise SvgError("MalformedAttribute", "polygon needs at least 3 points")
        return Polygon(points)
    if name == "path":
        d = elem.get("d")
        if d is None:
            raise SvgError("MalformedAttribute", "path is missing 'd'")
        return Path(_parse_path_data(d))
    raise SvgError("UnsupportedElement", f"<{name}>")


def _fmt(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return repr(value)


def shape_to_svg(shape: SvgShape) -> str:
    """Inverse of parse_svg_constraint."""
    if isinstance(shape, Rect):
        return (
            f'<rect x="{_fmt(shape.x)}" y="{_fmt(shape.y)}" '
            f'width="{_fmt(shape.w)}" height="{_fmt(shape.h)}"/>'
        )
    if isinstance(shape, Circle):
        return f'<circle cx="{_fmt(shape.cx)}" cy="{_fmt(shape.cy)}" r="{_fmt(shape.r)}"/>'
    if isinstance(shape, Ellipse):
        return (
            f'<ellipse cx="{_fmt(shape.cx)}" cy="{_fmt(shape.cy)}" '
            f'rx="{_fmt(shape.rx)}" ry="{_fmt(shape.ry)}"/>'
        )
    if isinstance(shape, Polygon):
        points = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in shape.points)
        return f'<polygon points="{points}"/>'
    if isinstance(shape, Path):
        parts = []
        for sp in shape.subpaths:
            coords = " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in sp.points)
            parts.append(f"M {coords}" + (" Z" if sp.closed else ""))
        return f'<path d="{" ".join(parts)}"/>'
    raise TypeError(f"not a shape: {shape!r}")


# --- geometry ---


def _point_bounds(points: tuple[Point, ...]) -> Rect:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return Rect(min(xs), min(ys), max(xs) - min(xs), max(ys) - min(ys))


def bounding_box(shape: SvgShape) -> Rect:
    """Smallest axis-aligned rectangle containing the shape."""
    if isinstance(shape, Rect):
        return shape
    if isinstance(shape, Circle):
        return Rect(shape.cx - shape.r, shape.cy - shape.r, 2 * shape.r, 2 * shape.r)
    if isinstance(shape, Ellipse):
        return Rect(shape.cx - shape.rx, shape.cy - shape.ry, 2 * shape.rx, 2 * shape.ry)
    if isinstance(shape, Polygon):
        return _point_bounds(shape.points)
    if isinstance(shape, Path):
        return _point_bounds(tuple(p for sp in shape.subpaths for p in sp.points))
    raise TypeError(f"not a shape: {shape!r}")


def _on_segment(p: Point, a: Point, b: Point, eps: float = 1e-9) -> bool:
    (px, py), (ax, ay), (bx, by) = p, a, b
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    if abs(cross) > eps * max(1.0, abs(bx - ax) + abs(by - ay)):
        return False
    return (
        min(ax, bx) - eps <= px <= max(ax, bx) + eps
        and min(ay, by) - eps <= py <= max(ay, by) + eps
    )


def _ring_edges(points: tuple[Point, ...]) -> list[tuple[Point, Point]]:
    return [(points[i], points[(i + 1) % len(points)]) for i in range(len(points))]


def _even_odd(point: Point, rings: list[tuple[Point, ...]]) -> bool:
    px, py = point
    inside = False
    for ring in rings:
        for (ax, ay), (bx, by) in _ring_edges(ring):
            if (ay > py) != (by > py):
                x_cross = (bx - ax) * (py - ay) / (by - ay) + ax
                if px < x_cross:
                    inside = not inside
    return inside


def contains_point(shape: SvgShape, point: Point) -> bool:
    """Even-odd containment; boundary points count as inside."""
    px, py = point
    if isinstance(shape, Rect):
        return shape.x <= px <= shape.x + shape.w and shape.y <= py <= shape.y + shape.h
    if isinstance(shape, Circle):
        return (px - shape.cx) ** 2 + (py - shape.cy) ** 2 <= shape.r**2
    if isinstance(shape, Ellipse):
        dx = (px - shape.cx) / shape.rx
        dy = (py - shape.cy) / shape.ry
        return dx * dx + dy * dy <= 1.0
    if isinstance(shape, Polygon):
        rings = [shape.points]
    elif isinstance(shape, Path):
        # Fill semantics: open subpaths are closed implicitly.
        rings = [sp.points for sp in shape.subpaths]
    else:
        raise TypeError(f"not a shape: {shape!r}")
    for ring in rings:
        if any(_on_segment(point, a, b) for a, b in _ring_edges(ring)):
            return True
    return _even_odd(point, rings)


def transform_shape(
    shape: SvgShape, scale: tuple[float, float], translate: tuple[float, float]
) -> SvgShape:
    """Scale about the origin, then translate."""
    sx, sy = scale
    dx, dy = translate
    if sx <= 0 or sy <= 0:
        raise NonPositiveScaleError(f"scale factors must be positive: {scale!r}")

    def tp(p: Point) -> Point:
        return (p[0] * sx + dx, p[1] * sy + dy)

    if isinstance(shape, Rect):
        return Rect(shape.x * sx + dx, shape.y * sy + dy, shape.w * sx, shape.h * sy)
    if isinstance(shape, Circle):
        cx, cy = shape.cx * sx + dx, shape.cy * sy + dy
        if sx == sy:
            return Circle(cx, cy, shape.r * sx)
        return Ellipse(cx, cy, shape.r * sx, shape.r * sy)
    if isinstance(shape, Ellipse):
        return Ellipse(
            shape.cx * sx + dx, shape.cy * sy + dy, shape.rx * sx, shape.ry * sy
        )
    if isinstance(shape, Polygon):
        return Polygon(tuple(tp(p) for p in shape.points))
    if isinstance(shape, Path):
        return Path(
            tuple(
                Subpath(tuple(tp(p) for p in sp.points), sp.closed)
                for sp in shape.subpaths
            )
        )
    raise TypeError(f"not a shape: {shape!r}")
