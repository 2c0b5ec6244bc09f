/**
 * Client-side mirror of the server's region shapes.
 *
 * Coordinates live in full-resolution image pixel space; viewTransform maps
 * them into screen space (scale about the origin, then translate), matching
 * the server's transform semantics exactly so overlays stay glued to the
 * image under pan/zoom.
 */

export type Point = [number, number];

export interface RectShape {
  kind: 'rect';
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface CircleShape {
  kind: 'circle';
  cx: number;
  cy: number;
  r: number;
}

export interface EllipseShape {
  kind: 'ellipse';
  cx: number;
  cy: number;
  rx: number;
  ry: number;
}

export interface PolygonShape {
  kind: 'polygon';
  points: Point[];
}

export interface PathSubpath {
  points: Point[];
  closed: boolean;
}

export interface PathShape {
  kind: 'path';
  subpaths: PathSubpath[];
}

export type Shape = RectShape | CircleShape | EllipseShape | PolygonShape | PathShape;

export function viewTransform(shape: Shape, zoom: number, pan: Point): Shape {
  if (zoom <= 0) {
    throw new Error(`zoom must be positive, got ${zoom}`);
  }
  const [dx, dy] = pan;
  const tp = ([x, y]: Point): Point => [x * zoom + dx, y * zoom + dy];
  switch (shape.kind) {
    case 'rect':
      return {
        kind: 'rect',
        x: shape.x * zoom + dx,
        y: shape.y * zoom + dy,
        w: shape.w * zoom,
        h: shape.h * zoom,
      };
    case 'circle':
      return {
        kind: 'circle',
        cx: shape.cx * zoom + dx,
        cy: shape.cy * zoom + dy,
        r: shape.r * zoom,
      };
    case 'ellipse':
      return {
        kind: 'ellipse',
        cx: shape.cx * zoom + dx,
        cy: shape.cy * zoom + dy,
        rx: shape.rx * zoom,
        ry: shape.ry * zoom,
      };
    case 'polygon':
      return { kind: 'polygon', points: shape.points.map(tp) };
    case 'path':
      return {
        kind: 'path',
        subpaths: shape.subpaths.map((sp) => ({
          points: sp.points.map(tp),
          closed: sp.closed,
        })),
      };
  }
}

export function boundingBox(shape: Shape): RectShape {
  switch (shape.kind) {
    case 'rect':
      return shape;
    case 'circle':
      return {
        kind: 'rect',
        x: shape.cx - shape.r,
        y: shape.cy - shape.r,
        w: 2 * shape.r,
        h: 2 * shape.r,
      };
    case 'ellipse':
      return {
        kind: 'rect',
        x: shape.cx - shape.rx,
        y: shape.cy - shape.ry,
        w: 2 * shape.rx,
        h: 2 * shape.ry,
      };
    case 'polygon':
      return pointBounds(shape.points);
    case 'path':
      return pointBounds(shape.subpaths.flatMap((sp) => sp.points));
  }
}

function pointBounds(points: Point[]): RectShape {
  const xs = points.map((p) => p[0]);
  const ys = points.map((p) => p[1]);
  const minX = Math.min(...xs);
  const minY = Math.min(...ys);
  return {
    kind: 'rect',
    x: minX,
    y: minY,
    w: Math.max(...xs) - minX,
    h: Math.max(...ys) - minY,
  };
}

/** JS number formatting already matches the server: no decimal point on integral values. */
function fmt(value: number): string {
  return String(value);
}

/** Serialize a drawable shape to a single-element SVG constraint snippet. */
export function shapeToSvg(shape: Shape): string {
  switch (shape.kind) {
    case 'rect':
      return `<rect x="${fmt(shape.x)}" y="${fmt(shape.y)}" width="${fmt(shape.w)}" height="${fmt(shape.h)}"/>`;
    case 'circle':
      return `<circle cx="${fmt(shape.cx)}" cy="${fmt(shape.cy)}" r="${fmt(shape.r)}"/>`;
    case 'ellipse':
      return `<ellipse cx="${fmt(shape.cx)}" cy="${fmt(shape.cy)}" rx="${fmt(shape.rx)}" ry="${fmt(shape.ry)}"/>`;
    case 'polygon': {
      const points = shape.points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(' ');
      return `<polygon points="${points}"/>`;
    }
    case 'path': {
      const parts = shape.subpaths.map((sp) => {
        const coords = sp.points.map(([x, y]) => `${fmt(x)} ${fmt(y)}`).join(' L ');
        return `M ${coords}${sp.closed ? ' Z' : ''}`;
      });
      return `<path d="${parts.join(' ')}"/>`;
    }
  }
}

/** Parse the SVG constraint snippets the service serves back. */
export function parseSvgShape(svg: string): Shape | null {
  const doc = new DOMParser().parseFromString(svg, 'image/svg+xml');
  const el = doc.documentElement;
  const num = (name: string, fallback = 0): number => {
    const raw = el.getAttribute(name);
    return raw === null ? fallback : parseFloat(raw);
  };
  switch (el.localName) {
    case 'rect':
      return { kind: 'rect', x: num('x'), y: num('y'), w: num('width'), h: num('height') };
    case 'circle':
      return { kind: 'circle', cx: num('cx'), cy: num('cy'), r: num('r') };
    case 'ellipse':
      return { kind: 'ellipse', cx: num('cx'), cy: num('cy'), rx: num('rx'), ry: num('ry') };
    case 'polygon': {
      const nums = (el.getAttribute('points') ?? '')
        .split(/[\s,]+/)
        .filter((t) => t.length > 0)
        .map(parseFloat);
      const points: Point[] = [];
      for (let i = 0; i + 1 < nums.length; i += 2) {
        points.push([nums[i]!, nums[i + 1]!]);
      }
      return points.length >= 3 ? { kind: 'polygon', points } : null;
    }
    default:
      return null;
  }
}
