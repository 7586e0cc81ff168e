/** Fetch wrappers for the loopback service. Relative URLs by default so the
 * page talks only to the origin that served it; tests may point elsewhere. */

import type { CatalogDoc, ModelErrors, ReportDoc } from './types.js';

let apiBase = '';

export function setApiBase(base: string): void {
  apiBase = base.replace(/\/$/, '');
}

export class ServiceUnreachableError extends Error {}

export class ModelRejectedError extends Error {
  constructor(public readonly fields: Record<string, string[]>) {
    super('the service rejected the model');
  }
}

export async function fetchCatalog(): Promise<CatalogDoc> {
  let response: Response;
  try {
    response = await fetch(`${apiBase}/api/catalog`);
  } catch {
    throw new ServiceUnreachableError('could not reach the local service');
  }
  if (!response.ok) {
    throw new ServiceUnreachableError(`catalog request failed (${response.status})`);
  }
  return (await response.json()) as CatalogDoc;
}

export interface ModelRequest {
  devices: string[];
  risk_factors: string[];
  connections: Array<[string, string]>;
  display_name?: string;
}

let inflight: AbortController | null = null;

/** POST the model; a newer call aborts any still-running older one. */
export async function postModel(request: ModelRequest): Promise<ReportDoc> {
  if (inflight) inflight.abort();
  const controller = new AbortController();
  inflight = controller;
  let response: Response;
  try {
    response = await fetch(`${apiBase}/api/model`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(request),
      signal: controller.signal,
    });
  } catch (err) {
    if (controller.signal.aborted) throw err;
    throw new ServiceUnreachableError('could not reach the local service');
  } finally {
    if (inflight === controller) inflight = null;
  }
  if (response.status === 422) {
    const doc = (await response.json()) as ModelErrors;
    throw new ModelRejectedError(doc.errors);
  }
  if (!response.ok) {
    throw new ServiceUnreachableError(`model request failed (${response.status})`);
  }
  return (await response.json()) as ReportDoc;
}
