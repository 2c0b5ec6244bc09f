import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';
import { describe, expect, it } from 'vitest';

import type { Shape } from '../src/shapes.js';
import { boundingBox, shapeToSvg, viewTransform } from '../src/shapes.js';

interface ParityCase {
  shape: Shape;
  zoom: number;
  pan: [number, number];
  expected: Shape;
}

const fixturePath = join(dirname(fileURLToPath(import.meta.url)), 'fixtures/transform_parity.json');
const parityCases: ParityCase[] = JSON.parse(readFileSync(fixturePath, 'utf-8'));

function flatten(shape: Shape): number[] {
  switch (shape.kind) {
    case 'rect':
      return [shape.x, shape.y, shape.w, shape.h];
    case 'circle':
      return [shape.cx, shape.cy, shape.r];
    case 'ellipse':
      return [shape.cx, shape.cy, shape.rx, shape.ry];
    case 'polygon':
      return shape.points.flat();
    case 'path':
      return shape.subpaths.flatMap((sp) => [...sp.points.flat(), sp.closed ? 1 : 0]);
  }
}

describe('viewTransform', () => {
  it('is the identity at zoom 1, pan (0,0)', () => {
    const shape: Shape = { kind: 'rect', x: 10, y: 10, w: 10, h: 10 };
    expect(viewTransform(shape, 1, [0, 0])).toEqual(shape);
  });

  it('scales a rect about the origin then translates', () => {
    const shape: Shape = { kind: 'rect', x: 10, y: 10, w: 10, h: 10 };
    expect(viewTransform(shape, 2, [0, 0])).toEqual({ kind: 'rect', x: 20, y: 20, w: 20, h: 20 });
    expect(viewTransform(shape, 2, [5, -5])).toEqual({ kind: 'rect', x: 25, y: 15, w: 20, h: 20 });
  });

  it('rejects non-positive zoom', () => {
    expect(() => viewTransform({ kind: 'circle', cx: 0, cy: 0, r: 1 }, 0, [0, 0])).toThrow();
  });

  it(`matches the server transform on ${parityCases.length} fixture cases`, () => {
    expect(parityCases.length).toBeGreaterThanOrEqual(100);
    for (const parity of parityCases) {
      const got = viewTransform(parity.shape, parity.zoom, parity.pan);
      expect(got.kind).toBe(parity.expected.kind);
      const gotNums = flatten(got);
      const wantNums = flatten(parity.expected);
      expect(gotNums.length).toBe(wantNums.length);
      for (let i = 0; i < gotNums.length; i++) {
        expect(Math.abs(gotNums[i]! - wantNums[i]!)).toBeLessThan(1e-6);
      }
    }
  });
});

describe('boundingBox', () => {
  it('is analytic for circles', () => {
    expect(boundingBox({ kind: 'circle', cx: 5, cy: 5, r: 2 })).toEqual({
      kind: 'rect',
      x: 3,
      y: 3,
      w: 4,
      h: 4,
    });
  });

  it('is the vertex min/max for polygons', () => {
    const polygon: Shape = {
      kind: 'polygon',
      points: [
        [0, 0],
        [10, 0],
        [0, 10],
      ],
    };
    expect(boundingBox(polygon)).toEqual({ kind: 'rect', x: 0, y: 0, w: 10, h: 10 });
  });
});

describe('shapeToSvg', () => {
  it('emits rect markup the service can parse', () => {
    expect(shapeToSvg({ kind: 'rect', x: 1, y: 2, w: 3, h: 4 })).toBe(
      '<rect x="1" y="2" width="3" height="4"/>',
    );
  });

  it('emits polygon point lists', () => {
    const svg = shapeToSvg({
      kind: 'polygon',
      points: [
        [0, 0],
        [10, 0],
        [5, 8.5],
      ],
    });
    expect(svg).toBe('<polygon points="0,0 10,0 5,8.5"/>');
  });
});
