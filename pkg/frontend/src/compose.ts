/**
 * Turn a draft into the Turtle document the service ingests.
 *
 * All node ids are freshly minted URNs; the server rewrites them to HTTP
 * URIs it controls and records the equivalence, so the client never needs
 * to know the server's URI layout.
 */

import type { Shape } from './shapes.js';
import { shapeToSvg } from './shapes.js';

export interface DraftAnnotation {
  targetImage: string;
  shape?: Shape;
  bodyText?: string;
  bodyUri?: string;
  replyTo?: string;
  tagUris: string[];
}

export class IncompleteDraftError extends Error {
  readonly missing: string[];

  constructor(missing: string[]) {
    super(`draft is incomplete: ${missing.join(', ')}`);
    this.name = 'IncompleteDraftError';
    this.missing = missing;
  }
}

export function mintUrn(): string {
  return `urn:uuid:${crypto.randomUUID()}`;
}

function escapeLiteral(text: string): string {
  return text
    .replace(/\\/g, '\\\\')
    .replace(/"/g, '\\"')
    .replace(/\n/g, '\\n')
    .replace(/\r/g, '\\r')
    .replace(/\t/g, '\\t');
}

function checkDraft(draft: DraftAnnotation): void {
  const missing: string[] = [];
  if (!draft.targetImage) {
    missing.push('targetImage');
  }
  const hasText = draft.bodyText !== undefined && draft.bodyText !== '';
  const hasUri = draft.bodyUri !== undefined && draft.bodyUri !== '';
  if (!hasText && !hasUri) {
    missing.push('bodyText or bodyUri');
  }
  if (hasText && hasUri) {
    missing.push('exactly one of bodyText/bodyUri');
  }
  if (missing.length > 0) {
    throw new IncompleteDraftError(missing);
  }
}

export function composeAnnotationRequest(draft: DraftAnnotation): string {
  checkDraft(draft);
  const annotation = mintUrn();
  const lines: string[] = [
    '@prefix oac: <http://www.openannotation.org/ns/> .',
    '@prefix cnt: <http://www.w3.org/2008/content#> .',
    '@prefix dcterms: <http://purl.org/dc/terms/> .',
    '',
  ];

  const targets: string[] = [];
  const blocks: string[] = [];

  if (draft.shape !== undefined) {
    const constraintTarget = mintUrn();
    const constraint = mintUrn();
    targets.push(`<${constraintTarget}>`);
    blocks.push(
      [
        `<${constraintTarget}> a oac:ConstraintTarget ;`,
        `    oac:constrains <${draft.targetImage}> ;`,
        `    oac:constrainedBy <${constraint}> .`,
        '',
        `<${constraint}> a oac:SvgConstraint, cnt:ContentAsText ;`,
        `    cnt:chars "${escapeLiteral(shapeToSvg(draft.shape))}" .`,
      ].join('\n'),
    );
  } else {
    targets.push(`<${draft.targetImage}>`);
    blocks.push(`<${draft.targetImage}> a oac:Target .`);
  }

  if (draft.replyTo) {
    targets.push(`<${draft.replyTo}>`);
    blocks.push(`<${draft.replyTo}> a oac:Target .`);
  }

  let body: string;
  const bodyLines: string[] = [];
  if (draft.bodyUri) {
    body = draft.bodyUri;
    bodyLines.push(`<${body}> a oac:Body .`);
  } else {
    body = mintUrn();
    bodyLines.push(
      `<${body}> a oac:Body, cnt:ContentAsText ;`,
      `    cnt:chars "${escapeLiteral(draft.bodyText ?? '')}" ;`,
      '    cnt:characterEncoding "utf-8" .',
    );
  }
  for (const tag of draft.tagUris) {
    bodyLines.push(`<${body}> dcterms:references <${tag}> .`);
  }

  lines.push(
    `<${annotation}> a oac:Annotation ;`,
    `    oac:hasBody <${body}> ;`,
    `    oac:hasTarget ${targets.join(', ')} .`,
    '',
    bodyLines.join('\n'),
    '',
    blocks.join('\n\n'),
    '',
  );
  return lines.join('\n');
}
