/**
 * Typed client for the pipeline HTTP service.
 *
 * Every number displayed in the UI comes straight out of these response
 * bodies; the client never recomputes a metric.  Endpoints that answer
 * 202 are polled through their job status URL until done.
 */

export interface SessionInfo {
  id: string;
  n: number;
  dim: number;
}

export interface SkeletonNode {
  id: number;
  members: number[];
  centroid: number;
  interval: number;
}

export interface SkeletonBody {
  hash: string;
  nodes: SkeletonNode[];
  edges: [number, number, number][];
  landmarks: number[];
  cycle_rank: number;
}

export interface QualityBody {
  rv: number;
  wd0: number;
  wd1: number;
  pb1_before: number;
  pb1_after: number;
  subsample_size: number;
  thresholds: Record<string, number>;
  flags: string[];
  conventions: Record<string, string>;
}

export interface EmbedBody {
  hash: string;
  coords: number[][];
  method: string;
  landmarks: number[] | null;
  quality: QualityBody;
}

export interface CutSummary {
  cut: { edge: [number, number]; t: number; radius: number | string };
  valid: boolean;
  pb1: number | null;
  wd1: number | null;
  rv: number | null;
  removed_count: number;
}

export interface TearBody extends CutSummary {
  hash: string;
  coords: number[][];
}

export interface RankBody {
  hash: string;
  results: CutSummary[];
}

export interface DirectionScore {
  rank: number;
  vector: number[];
  score: number | number[];
}

export interface DiagramJson {
  dim: number;
  pairs: [number, number | null][];
  scale_cap: number | null;
}

export interface BettiSummary {
  dim: number;
  count: number;
  threshold: number;
  gap_width: number;
  ambiguous: boolean;
}

export interface DiagramBody {
  hash: string;
  dim0: DiagramJson;
  dim1: DiagramJson;
  betti1: BettiSummary;
}

export class ServiceError extends Error {
  constructor(public status: number, public detail: string) {
    super(`${status}: ${detail}`);
  }
}

const POLL_INTERVAL_MS = 500;

export class Client {
  constructor(
    private base: string = '',
    private fetchFn: typeof fetch = fetch.bind(globalThis),
    private pollInterval = POLL_INTERVAL_MS,
  ) {}

  private async raw(method: string, path: string, body?: unknown): Promise<Response> {
    return this.fetchFn(this.base + path, {
      method,
      headers: body === undefined ? {} : { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  }

  /** Resolve a response, following 202 job redirects until the job ends. */
  private async settle<T>(response: Response): Promise<T> {
    if (response.status === 202) {
      const { status_url } = await response.json();
      return this.pollJob<T>(status_url);
    }
    const payload = await response.json();
    if (!response.ok) {
      throw new ServiceError(response.status, payload.detail ?? 'request failed');
    }
    return payload as T;
  }

  async pollJob<T>(statusUrl: string): Promise<T> {
    for (;;) {
      const response = await this.raw('GET', statusUrl);
      const state = await response.json();
      if (!response.ok) {
        throw new ServiceError(response.status, state.detail ?? 'job lookup failed');
      }
      if (state.status === 'done') return state.result as T;
      if (state.status === 'error') {
        throw new ServiceError(500, state.error ?? 'job failed');
      }
      await new Promise((resolve) => setTimeout(resolve, this.pollInterval));
    }
  }

  async get<T>(path: string): Promise<T> {
    return this.settle<T>(await this.raw('GET', path));
  }

  async post<T>(path: string, body: unknown): Promise<T> {
    return this.settle<T>(await this.raw('POST', path, body));
  }

  createSession(spec: { shape?: string; n?: number; seed?: number; csv?: string }) {
    return this.post<SessionInfo>('/sessions', spec);
  }

  sessionInfo(sid: string) {
    return this.get<SessionInfo>(`/sessions/${sid}`);
  }

  sessionPoints(sid: string) {
    return this.get<{ points: number[][] }>(`/sessions/${sid}/points`);
  }

  skeleton(sid: string, params: Record<string, unknown>) {
    return this.post<SkeletonBody>(`/sessions/${sid}/skeleton`, params);
  }

  embed(sid: string, params: Record<string, unknown>) {
    return this.post<EmbedBody>(`/sessions/${sid}/embed`, params);
  }

  tear(sid: string, params: Record<string, unknown>) {
    return this.post<TearBody>(`/sessions/${sid}/tear`, params);
  }

  tearRank(sid: string, k = 8) {
    return this.get<RankBody>(`/sessions/${sid}/tear/rank?k=${k}`);
  }

  projectSearch(sid: string, m = 100) {
    return this.get<{ hash: string; directions: DirectionScore[] }>(
      `/sessions/${sid}/project/search?m=${m}`,
    );
  }

  project(sid: string, direction: number[]) {
    return this.post<{ hash: string; coords: number[][]; direction: number[] }>(
      `/sessions/${sid}/project`, { direction },
    );
  }

  persistence(sid: string, target = 'input') {
    return this.get<DiagramBody>(
      `/sessions/${sid}/persistence?target=${encodeURIComponent(target)}`,
    );
  }
}
