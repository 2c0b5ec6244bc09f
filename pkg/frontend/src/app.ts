/**
 * Image annotation client.
 *
 * Loads an image, overlays the regions of existing annotations, lets the
 * user draw a rectangle or polygon, write an inline text body or reference
 * an external one, attach tag URIs, reply to an annotation, and POST the
 * result to the service this page is served from.
 */

import type { AnnotationJson } from './api.js';
import { fetchAnnotation, postAnnotation, searchByTarget } from './api.js';
import { composeAnnotationRequest } from './compose.js';
import type { Point, Shape } from './shapes.js';
import { parseSvgShape, viewTransform } from './shapes.js';

type Tool = 'pan' | 'rect' | 'polygon';

interface ViewState {
  zoom: number;
  pan: Point;
}

const SVG_NS = 'http://www.w3.org/2000/svg';

const baseUrl = window.location.origin;

const state = {
  imageUri: '',
  view: { zoom: 1, pan: [0, 0] as Point } as ViewState,
  tool: 'rect' as Tool,
  draftShape: undefined as Shape | undefined,
  polygonPoints: [] as Point[],
  annotations: [] as AnnotationJson[],
  replyTo: undefined as string | undefined,
  selected: undefined as string | undefined,
};

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

const image = el<HTMLImageElement>('image');
const overlay = document.getElementById('overlay') as unknown as SVGSVGElement;
const annotationList = el<HTMLUListElement>('annotation-list');
const statusLine = el<HTMLParagraphElement>('status');

function setStatus(text: string, isError = false): void {
  statusLine.textContent = text;
  statusLine.classList.toggle('error', isError);
}

// --- view transform ---

function applyView(): void {
  const { zoom, pan } = state.view;
  image.style.transform = `translate(${pan[0]}px, ${pan[1]}px) scale(${zoom})`;
  renderOverlay();
}

function screenToImage([sx, sy]: Point): Point {
  const { zoom, pan } = state.view;
  return [(sx - pan[0]) / zoom, (sy - pan[1]) / zoom];
}

function zoomBy(factor: number, center?: Point): void {
  const next = Math.min(16, Math.max(0.0625, state.view.zoom * factor));
  const applied = next / state.view.zoom;
  const [cx, cy] = center ?? [overlay.clientWidth / 2, overlay.clientHeight / 2];
  // keep the point under the cursor fixed while zooming
  state.view.pan = [
    cx - (cx - state.view.pan[0]) * applied,
    cy - (cy - state.view.pan[1]) * applied,
  ];
  state.view.zoom = next;
  applyView();
}

// --- overlay rendering ---

function shapeElement(shape: Shape): SVGElement {
  switch (shape.kind) {
    case 'rect': {
      const node = document.createElementNS(SVG_NS, 'rect');
      node.setAttribute('x', String(shape.x));
      node.setAttribute('y', String(shape.y));
      node.setAttribute('width', String(shape.w));
      node.setAttribute('height', String(shape.h));
      return node;
    }
    case 'circle': {
      const node = document.createElementNS(SVG_NS, 'circle');
      node.setAttribute('cx', String(shape.cx));
      node.setAttribute('cy', String(shape.cy));
      node.setAttribute('r', String(shape.r));
      return node;
    }
    case 'ellipse': {
      const node = document.createElementNS(SVG_NS, 'ellipse');
      node.setAttribute('cx', String(shape.cx));
      node.setAttribute('cy', String(shape.cy));
      node.setAttribute('rx', String(shape.rx));
      node.setAttribute('ry', String(shape.ry));
      return node;
    }
    case 'polygon': {
      const node = document.createElementNS(SVG_NS, 'polygon');
      node.setAttribute('points', shape.points.map(([x, y]) => `${x},${y}`).join(' '));
      return node;
    }
    case 'path': {
      const node = document.createElementNS(SVG_NS, 'path');
      const d = shape.subpaths
        .map(
          (sp) =>
            `M ${sp.points.map(([x, y]) => `${x} ${y}`).join(' L ')}${sp.closed ? ' Z' : ''}`,
        )
        .join(' ');
      node.setAttribute('d', d);
      return node;
    }
  }
}

function annotationShapes(annotation: AnnotationJson): Shape[] {
  const shapes: Shape[] = [];
  for (const target of annotation.targets) {
    if (
      target.kind === 'constrained' &&
      target.constrains === state.imageUri &&
      target.constraint?.kind === 'svg' &&
      target.constraint.svg
    ) {
      const shape = parseSvgShape(target.constraint.svg);
      if (shape) shapes.push(shape);
    }
  }
  return shapes;
}

function renderOverlay(): void {
  overlay.replaceChildren();
  const { zoom, pan } = state.view;
  for (const annotation of state.annotations) {
    for (const shape of annotationShapes(annotation)) {
      const node = shapeElement(viewTransform(shape, zoom, pan));
      node.classList.add('region');
      if (annotation.uri === state.selected) node.classList.add('selected');
      node.addEventListener('click', (event) => {
        event.stopPropagation();
        selectAnnotation(annotation.uri);
      });
      overlay.appendChild(node);
    }
  }
  if (state.draftShape) {
    const node = shapeElement(viewTransform(state.draftShape, zoom, pan));
    node.classList.add('draft');
    overlay.appendChild(node);
  }
  if (state.polygonPoints.length > 0) {
    const preview: Shape = { kind: 'path', subpaths: [{ points: state.polygonPoints, closed: false }] };
    const node = shapeElement(viewTransform(preview, zoom, pan));
    node.classList.add('draft');
    overlay.appendChild(node);
  }
}

// --- annotation list (threads) ---

function bodySummary(a: AnnotationJson): string {
  if (a.body.kind === 'inline') return a.body.chars ?? '';
  return a.body.uri ?? '';
}

function selectAnnotation(uri: string): void {
  state.selected = uri;
  renderList();
  renderOverlay();
}

function renderList(): void {
  annotationList.replaceChildren();
  const byUri = new Map(state.annotations.map((a) => [a.uri, a]));
  const replies = new Map<string, AnnotationJson[]>();
  const roots: AnnotationJson[] = [];
  for (const a of state.annotations) {
    const parents = a.targets
      .map((t) => t.uri)
      .filter((uri): uri is string => uri !== undefined && byUri.has(uri));
    if (parents.length === 0) {
      roots.push(a);
    } else {
      for (const parent of parents) {
        const list = replies.get(parent) ?? [];
        list.push(a);
        replies.set(parent, list);
      }
    }
  }

  const rendered = new Set<string>();
  const renderNode = (a: AnnotationJson, depth: number): void => {
    if (rendered.has(a.uri)) return;
    rendered.add(a.uri);
    const item = document.createElement('li');
    item.style.marginLeft = `${depth * 1.5}rem`;
    if (a.uri === state.selected) item.classList.add('selected');

    const text = document.createElement('span');
    text.textContent = bodySummary(a) || '(external body)';
    item.appendChild(text);

    const meta = document.createElement('small');
    const bits = [a.creator, a.created, a.temporalClass !== 'Timeless' ? a.temporalClass : null]
      .filter((b): b is string => !!b)
      .join(' · ');
    if (bits) meta.textContent = ` — ${bits}`;
    item.appendChild(meta);

    for (const tag of a.tags) {
      const chip = document.createElement('a');
      chip.className = 'tag';
      chip.href = tag.resource;
      chip.textContent = tag.labels[0]?.text ?? tag.resource;
      item.appendChild(chip);
    }

    const replyBtn = document.createElement('button');
    replyBtn.type = 'button';
    replyBtn.textContent = 'reply';
    replyBtn.addEventListener('click', () => {
      state.replyTo = a.uri;
      el<HTMLSpanElement>('reply-target').textContent = bodySummary(a).slice(0, 40) || a.uri;
      el<HTMLDivElement>('reply-banner').hidden = false;
    });
    item.appendChild(replyBtn);

    item.addEventListener('click', () => selectAnnotation(a.uri));
    annotationList.appendChild(item);
    for (const child of replies.get(a.uri) ?? []) renderNode(child, depth + 1);
  };
  for (const root of roots) renderNode(root, 0);
  // anything untouched (reply chains whose parent is not loaded)
  for (const a of state.annotations) renderNode(a, 0);
}

async function refreshAnnotations(): Promise<void> {
  if (!state.imageUri) return;
  try {
    const uris = await searchByTarget(baseUrl, state.imageUri);
    const loaded = await Promise.all(uris.map((uri) => fetchAnnotation(uri)));
    // pull in replies targeting the loaded annotations
    const extra = new Set<string>();
    for (const a of loaded) {
      for (const uri of await searchByTarget(baseUrl, a.uri)) {
        if (!uris.includes(uri)) extra.add(uri);
      }
    }
    const replies = await Promise.all([...extra].map((uri) => fetchAnnotation(uri)));
    state.annotations = [...loaded, ...replies];
    setStatus(`${state.annotations.length} annotation(s)`);
  } catch (err) {
    setStatus(`failed to load annotations: ${String(err)}`, true);
    state.annotations = [];
  }
  renderList();
  renderOverlay();
}

// --- drawing ---

function overlayPoint(event: MouseEvent): Point {
  const rect = overlay.getBoundingClientRect();
  return [event.clientX - rect.left, event.clientY - rect.top];
}

let dragStart: Point | undefined;
let panStart: Point | undefined;

overlay.addEventListener('mousedown', (event) => {
  const point = overlayPoint(event);
  if (state.tool === 'pan') {
    panStart = [point[0] - state.view.pan[0], point[1] - state.view.pan[1]];
  } else if (state.tool === 'rect') {
    dragStart = screenToImage(point);
  }
});

overlay.addEventListener('mousemove', (event) => {
  const point = overlayPoint(event);
  if (state.tool === 'pan' && panStart) {
    state.view.pan = [point[0] - panStart[0], point[1] - panStart[1]];
    applyView();
  } else if (state.tool === 'rect' && dragStart) {
    const [x0, y0] = dragStart;
    const [x1, y1] = screenToImage(point);
    state.draftShape = {
      kind: 'rect',
      x: Math.min(x0, x1),
      y: Math.min(y0, y1),
      w: Math.abs(x1 - x0),
      h: Math.abs(y1 - y0),
    };
    renderOverlay();
  }
});

overlay.addEventListener('mouseup', () => {
  dragStart = undefined;
  panStart = undefined;
});

overlay.addEventListener('click', (event) => {
  if (state.tool !== 'polygon') return;
  state.polygonPoints.push(screenToImage(overlayPoint(event)));
  renderOverlay();
});

overlay.addEventListener('dblclick', (event) => {
  if (state.tool !== 'polygon') return;
  event.preventDefault();
  if (state.polygonPoints.length >= 3) {
    state.draftShape = { kind: 'polygon', points: [...state.polygonPoints] };
  }
  state.polygonPoints = [];
  renderOverlay();
});

overlay.addEventListener('wheel', (event) => {
  event.preventDefault();
  zoomBy(event.deltaY < 0 ? 1.2 : 1 / 1.2, overlayPoint(event));
});

// --- form wiring ---

function currentTool(): Tool {
  const checked = document.querySelector<HTMLInputElement>('input[name=tool]:checked');
  return (checked?.value as Tool) ?? 'rect';
}

document.querySelectorAll<HTMLInputElement>('input[name=tool]').forEach((radio) => {
  radio.addEventListener('change', () => {
    state.tool = currentTool();
    state.polygonPoints = [];
    renderOverlay();
  });
});

el<HTMLButtonElement>('zoom-in').addEventListener('click', () => zoomBy(1.25));
el<HTMLButtonElement>('zoom-out').addEventListener('click', () => zoomBy(1 / 1.25));
el<HTMLButtonElement>('zoom-reset').addEventListener('click', () => {
  state.view = { zoom: 1, pan: [0, 0] };
  applyView();
});

el<HTMLButtonElement>('clear-shape').addEventListener('click', () => {
  state.draftShape = undefined;
  state.polygonPoints = [];
  renderOverlay();
});

el<HTMLButtonElement>('cancel-reply').addEventListener('click', () => {
  state.replyTo = undefined;
  el<HTMLDivElement>('reply-banner').hidden = true;
});

el<HTMLButtonElement>('load-image').addEventListener('click', () => {
  state.imageUri = el<HTMLInputElement>('image-uri').value.trim();
  image.src = state.imageUri;
  state.view = { zoom: 1, pan: [0, 0] };
  state.draftShape = undefined;
  state.polygonPoints = [];
  applyView();
  void refreshAnnotations();
});

el<HTMLFormElement>('annotation-form').addEventListener('submit', (event) => {
  event.preventDefault();
  void submitDraft();
});

async function submitDraft(): Promise<void> {
  const bodyText = el<HTMLTextAreaElement>('body-text').value.trim();
  const bodyUri = el<HTMLInputElement>('body-uri').value.trim();
  const tagUris = el<HTMLInputElement>('tag-uris')
    .value.split(',')
    .map((t) => t.trim())
    .filter((t) => t.length > 0);
  try {
    const turtle = composeAnnotationRequest({
      targetImage: state.imageUri,
      shape: state.draftShape,
      bodyText: bodyText || undefined,
      bodyUri: bodyUri || undefined,
      replyTo: state.replyTo,
      tagUris,
    });
    const location = await postAnnotation(baseUrl, turtle);
    setStatus(`created ${location}`);
    el<HTMLTextAreaElement>('body-text').value = '';
    el<HTMLInputElement>('body-uri').value = '';
    el<HTMLInputElement>('tag-uris').value = '';
    state.draftShape = undefined;
    state.replyTo = undefined;
    el<HTMLDivElement>('reply-banner').hidden = true;
    await refreshAnnotations();
  } catch (err) {
    setStatus(String(err), true);
  }
}

setStatus('enter an image URI to begin');
