// Thin client over the service API; the fetch function is injectable so
// tests can run without a server.

import type { ApiErrorBody, HealthInfo, JobResult, VisualizerJson } from './types.js';

export class ApiError extends Error {
  constructor(public status: number, public body: ApiErrorBody) {
    super(body.message);
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  let body: ApiErrorBody = { code: 'internal', message: `HTTP ${resp.status}` };
  try {
    const parsed = await resp.json();
    if (parsed && typeof parsed.code === 'string' && typeof parsed.message === 'string') {
      body = parsed;
    }
  } catch {
    // non-JSON error body; keep the fallback
  }
  return new ApiError(resp.status, body);
}

export class Client {
  constructor(
    private baseUrl = '',
    private fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!resp.ok) {
      throw await parseError(resp);
    }
    return resp;
  }

  async health(): Promise<HealthInfo> {
    return (await this.request('/api/health')).json();
  }

  async visualizers(): Promise<VisualizerJson[]> {
    return (await this.request('/api/visualizers')).json();
  }

  async createSession(): Promise<string> {
    const resp = await this.request('/api/sessions', { method: 'POST' });
    return (await resp.json()).session_id;
  }

  async uploadImage(sessionId: string, data: Blob, name: string): Promise<string> {
    const form = new FormData();
    form.append('image', data, name);
    const resp = await this.request(`/api/sessions/${sessionId}/images`, {
      method: 'POST',
      body: form,
    });
    return (await resp.json()).image_id;
  }

  async runJob(
    sessionId: string,
    visualizer: string,
    settings: Record<string, number | string>,
    imageIds: string[],
  ): Promise<JobResult> {
    const resp = await this.request(`/api/sessions/${sessionId}/jobs`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ visualizer, settings, image_ids: imageIds }),
    });
    return resp.json();
  }

  artifactUrl(sessionId: string, pngId: string): string {
    return `${this.baseUrl}/api/sessions/${sessionId}/artifacts/${pngId}`;
  }
}
