/** Thin typed client for the experiment service. */

import type {
  ApiErrorBody,
  ColorName,
  ConstraintResponse,
  GameValuesResponse,
  RecordsResponse,
  RoundResponse,
  SessionInfo,
  SettingName,
  StatsResponse,
} from './types';

export class ApiRequestError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: unknown;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.status = status;
    this.code = body.code;
    this.detail = body.detail;
  }
}

export interface RoundRequest {
  alice_setting?: SettingName;
  bob_setting?: SettingName;
  policy?: 'random';
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}/api/v1${path}`, {
      method,
      headers: body === undefined ? undefined : { 'content-type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let parsed: ApiErrorBody;
      try {
        parsed = (await response.json()) as ApiErrorBody;
      } catch {
        parsed = { code: 'http_error', message: `HTTP ${response.status}` };
      }
      throw new ApiRequestError(response.status, parsed);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request('GET', '/health');
  }

  createSession(seed?: string | number, variant?: string): Promise<SessionInfo> {
    const body: Record<string, unknown> = {};
    if (seed !== undefined) body.seed = seed;
    if (variant !== undefined) body.variant = variant;
    return this.request('POST', '/sessions', body);
  }

  playRound(sessionId: string, round: RoundRequest): Promise<RoundResponse> {
    return this.request('POST', `/sessions/${sessionId}/rounds`, round);
  }

  records(sessionId: string): Promise<RecordsResponse> {
    return this.request('GET', `/sessions/${sessionId}/records`);
  }

  stats(sessionId: string): Promise<StatsResponse> {
    return this.request('GET', `/sessions/${sessionId}/stats`);
  }

  checkColoring(colors: ColorName[], variant?: string): Promise<ConstraintResponse> {
    const body: Record<string, unknown> = { colors };
    if (variant !== undefined) body.variant = variant;
    return this.request('POST', '/coloring/check', body);
  }

  gameValues(): Promise<GameValuesResponse> {
    return this.request('GET', '/game/values');
  }
}
