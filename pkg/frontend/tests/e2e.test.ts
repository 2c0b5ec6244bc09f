/**
 * End-to-end: spawn the annotation service, compose a draft the way the UI
 * does, POST it, and check the served JSON projection reproduces the drawn
 * region.
 */

import { type ChildProcess, spawn } from 'node:child_process';
import { mkdtempSync, rmSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { fetchAnnotation, postAnnotation, searchByTarget } from '../src/api.js';
import { composeAnnotationRequest } from '../src/compose.js';
import type { Shape } from '../src/shapes.js';
import { boundingBox } from '../src/shapes.js';

const IMAGE = 'http://example.org/img/e2e';

let service: ChildProcess;
let dataDir: string;
let base: string;

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), 'openanno-e2e-'));
  service = spawn('python3', [
    '-m',
    'openanno.cli',
    'serve',
    '--listen',
    '127.0.0.1:0',
    '--data-dir',
    dataDir,
  ]);
  base = await new Promise<string>((resolve, reject) => {
    let log = '';
    const onData = (chunk: unknown): void => {
      log += String(chunk);
      const found = log.match(/listening on (http:\/\/[0-9.]+:\d+)/);
      if (found) resolve(found[1]!);
    };
    service.stderr?.on('data', onData);
    service.stdout?.on('data', onData);
    service.on('error', reject);
    service.on('exit', (code) => reject(new Error(`service exited early (${code}): ${log}`)));
    setTimeout(() => reject(new Error(`service did not start: ${log}`)), 15000);
  });
}, 20000);

afterAll(() => {
  service?.kill();
  if (dataDir) rmSync(dataDir, { recursive: true, force: true });
});

describe('draw → POST → fetch', () => {
  it('reproduces a drawn rectangle within 0.5 px', async () => {
    const drawn: Shape = { kind: 'rect', x: 12.5, y: 20.25, w: 60.5, h: 42 };
    const turtle = composeAnnotationRequest({
      targetImage: IMAGE,
      shape: drawn,
      bodyText: 'a remark about this region',
      tagUris: [],
    });
    const location = await postAnnotation(base, turtle);
    expect(location).toMatch(/^http:\/\/127\.0\.0\.1:\d+\/annotations\//);

    const annotation = await fetchAnnotation(location);
    expect(annotation.uri).toBe(location);
    expect(annotation.body.kind).toBe('inline');
    expect(annotation.body.chars).toBe('a remark about this region');

    const target = annotation.targets.find((t) => t.kind === 'constrained');
    expect(target).toBeDefined();
    expect(target!.constrains).toBe(IMAGE);
    const bbox = target!.constraint!.bbox!;
    const want = boundingBox(drawn);
    expect(Math.abs(bbox[0] - want.x)).toBeLessThanOrEqual(0.5);
    expect(Math.abs(bbox[1] - want.y)).toBeLessThanOrEqual(0.5);
    expect(Math.abs(bbox[2] - want.w)).toBeLessThanOrEqual(0.5);
    expect(Math.abs(bbox[3] - want.h)).toBeLessThanOrEqual(0.5);
  });

  it('reproduces a drawn polygon within 0.5 px', async () => {
    const drawn: Shape = {
      kind: 'polygon',
      points: [
        [10.1, 10.9],
        [210.4, 16.2],
        [150.7, 180.3],
        [12.2, 122.8],
      ],
    };
    const turtle = composeAnnotationRequest({
      targetImage: IMAGE,
      shape: drawn,
      bodyText: 'polygon region',
      tagUris: [],
    });
    const annotation = await fetchAnnotation(await postAnnotation(base, turtle));
    const target = annotation.targets.find((t) => t.kind === 'constrained');
    const bbox = target!.constraint!.bbox!;
    const want = boundingBox(drawn);
    for (const [got, expected] of [
      [bbox[0], want.x],
      [bbox[1], want.y],
      [bbox[2], want.w],
      [bbox[3], want.h],
    ] as const) {
      expect(Math.abs(got - expected)).toBeLessThanOrEqual(0.5);
    }
  });

  it('threads replies through target search', async () => {
    const rootTurtle = composeAnnotationRequest({
      targetImage: IMAGE,
      bodyText: 'root remark',
      tagUris: [],
    });
    const rootUri = await postAnnotation(base, rootTurtle);

    const replyTurtle = composeAnnotationRequest({
      targetImage: IMAGE,
      bodyText: 'a reply',
      replyTo: rootUri,
      tagUris: [],
    });
    const replyUri = await postAnnotation(base, replyTurtle);

    const children = await searchByTarget(base, rootUri);
    expect(children).toContain(replyUri);

    const reply = await fetchAnnotation(replyUri);
    const targetUris = reply.targets.map((t) => t.uri ?? t.constrains);
    expect(targetUris).toContain(rootUri);
    expect(targetUris).toContain(IMAGE);
  });

  it('carries semantic tags through the round trip', async () => {
    const turtle = composeAnnotationRequest({
      targetImage: IMAGE,
      bodyText: 'tagged note',
      tagUris: ['http://sws.geonames.org/2761369/'],
    });
    const annotation = await fetchAnnotation(await postAnnotation(base, turtle));
    expect(annotation.tags.map((t) => t.resource)).toContain(
      'http://sws.geonames.org/2761369/',
    );
  });
});
