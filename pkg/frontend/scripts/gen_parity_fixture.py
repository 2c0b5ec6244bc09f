#!/usr/bin/env python3
"""Regenerate tests/fixtures/transform_parity.json from the server-side
geometry, so the client's viewTransform can be checked against it.

Run from the frontend/ directory:  python3 scripts/gen_parity_fixture.py
"""

from __future__ import annotations

import json
from pathlib import Path
from random import Random

from openanno import shapes

OUT = Path(__file__).parent.parent / "tests" / "fixtures" / "transform_parity.json"
CASES = 100


def shape_to_json(shape: shapes.SvgShape) -> dict:
    if isinstance(shape, shapes.Rect):
        return {"kind": "rect", "x": shape.x, "y": shape.y, "w": shape.w, "h": shape.h}
    if isinstance(shape, shapes.Circle):
        return {"kind": "circle", "cx": shape.cx, "cy": shape.cy, "r": shape.r}
    if isinstance(shape, shapes.Ellipse):
        return {
            "kind": "ellipse",
            "cx": shape.cx,
            "cy": shape.cy,
            "rx": shape.rx,
            "ry": shape.ry,
        }
    if isinstance(shape, shapes.Polygon):
        return {"kind": "polygon", "points": [list(p) for p in shape.points]}
    assert isinstance(shape, shapes.Path)
    return {
        "kind": "path",
        "subpaths": [
            {"points": [list(p) for p in sp.points], "closed": sp.closed}
            for sp in shape.subpaths
        ],
    }


def random_shape(rng: Random) -> shapes.SvgShape:
    kind = rng.randrange(5)
    if kind == 0:
        return shapes.Rect(rng.uniform(0, 400), rng.uniform(0, 400), rng.uniform(1, 200), rng.uniform(1, 200))
    if kind == 1:
        return shapes.Circle(rng.uniform(0, 400), rng.uniform(0, 400), rng.uniform(1, 80))
    if kind == 2:
        return shapes.Ellipse(rng.uniform(0, 400), rng.uniform(0, 400), rng.uniform(1, 80), rng.uniform(1, 80))
    if kind == 3:
        return shapes.Polygon(
            tuple(
                (rng.uniform(0, 500), rng.uniform(0, 500))
                for _ in range(rng.randint(3, 8))
            )
        )
    return shapes.Path(
        tuple(
            shapes.Subpath(
                tuple((rng.uniform(0, 500), rng.uniform(0, 500)) for _ in range(rng.randint(2, 5))),
                closed=rng.random() < 0.5,
            )
            for _ in range(rng.randint(1, 3))
        )
    )


def main() -> None:
    rng = Random(1010)
    cases = []
    for _ in range(CASES):
        shape = random_shape(rng)
        zoom = rng.uniform(0.1, 8.0)
        pan = [rng.uniform(-300, 300), rng.uniform(-300, 300)]
        expected = shapes.transform_shape(shape, (zoom, zoom), tuple(pan))
        cases.append(
            {
                "shape": shape_to_json(shape),
                "zoom": zoom,
                "pan": pan,
                "expected": shape_to_json(expected),
            }
        )
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(cases, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {CASES} cases to {OUT}")


if __name__ == "__main__":
    main()
