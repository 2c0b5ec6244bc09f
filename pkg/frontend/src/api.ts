/**
 * Thin wrappers over the service's documented endpoints: Turtle in for
 * creation, JSON projection out for display.
 */

export interface TimeConstraintJson {
  id: string;
  when: string;
}

export interface BodyJson {
  kind: 'inline' | 'external';
  id?: string;
  uri?: string;
  chars?: string;
  encoding?: string;
  timeConstraint: TimeConstraintJson | null;
}

export interface ConstraintJson {
  kind: 'svg' | 'time' | 'generic';
  id: string;
  svg?: string;
  bbox?: [number, number, number, number];
  when?: string;
  type?: string;
}

export interface TargetJson {
  kind: 'direct' | 'constrained';
  uri?: string;
  id?: string;
  constrains?: string;
  constraint?: ConstraintJson;
  timeConstraint: TimeConstraintJson | null;
}

export interface AnnotationJson {
  uri: string;
  body: BodyJson;
  targets: TargetJson[];
  creator: string | null;
  created: string | null;
  when: string | null;
  temporalClass: 'Timeless' | 'Uniform' | 'Varied';
  tags: { resource: string; labels: { text: string; lang: string | null }[] }[];
}

async function ensureOk(resp: Response): Promise<Response> {
  if (!resp.ok) {
    const text = await resp.text();
    throw new Error(`${resp.status} ${resp.statusText}: ${text.slice(0, 300)}`);
  }
  return resp;
}

/** POST a Turtle document; resolves to the new annotation's URI. */
export async function postAnnotation(baseUrl: string, turtle: string): Promise<string> {
  const resp = await ensureOk(
    await fetch(`${baseUrl}/annotations`, {
      method: 'POST',
      headers: { 'Content-Type': 'text/turtle' },
      body: turtle,
    }),
  );
  const location = resp.headers.get('Location');
  if (!location) {
    throw new Error('service did not return a Location header');
  }
  return location;
}

export async function fetchAnnotation(annotationUri: string): Promise<AnnotationJson> {
  const resp = await ensureOk(await fetch(`${annotationUri}.json`));
  return (await resp.json()) as AnnotationJson;
}

export async function searchByTarget(baseUrl: string, target: string): Promise<string[]> {
  const resp = await ensureOk(
    await fetch(`${baseUrl}/search?target=${encodeURIComponent(target)}`),
  );
  return (await resp.json()) as string[];
}
