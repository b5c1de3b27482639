import { describe, expect, it, vi } from 'vitest';

import { ApiClient, ApiRequestError } from '../src/api';

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  });
}

function mockFetch(responder: () => Response) {
  return vi.fn(async (_url: string, _init?: RequestInit) => responder());
}

describe('ApiClient', () => {
  it('posts session bodies to the right URL', async () => {
    const fetchFn = mockFetch(() => jsonResponse(201, { id: 'x', seed: '7', variant: 'standard' }));
    const client = new ApiClient('http://host:1', fetchFn);
    const session = await client.createSession(7, 'standard');
    expect(session.seed).toBe('7');
    expect(fetchFn).toHaveBeenCalledWith('http://host:1/api/v1/sessions', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ seed: 7, variant: 'standard' }),
    });
  });

  it('omits absent optional fields', async () => {
    const fetchFn = mockFetch(() => jsonResponse(201, { id: 'x', seed: '1', variant: 'standard' }));
    await new ApiClient('http://host:1', fetchFn).createSession();
    const [, init] = fetchFn.mock.calls[0]!;
    expect(init?.body).toBe('{}');
  });

  it('builds round requests against the session path', async () => {
    const fetchFn = mockFetch(() => jsonResponse(200, { round: 0 }));
    await new ApiClient('http://h', fetchFn).playRound('abc', {
      alice_setting: 'R1',
      bob_setting: 'C2',
    });
    const [url, init] = fetchFn.mock.calls[0]!;
    expect(url).toBe('http://h/api/v1/sessions/abc/rounds');
    expect(JSON.parse(String(init?.body))).toEqual({ alice_setting: 'R1', bob_setting: 'C2' });
  });

  it('surfaces structured errors with code and detail', async () => {
    const fetchFn = mockFetch(() =>
      jsonResponse(400, { code: 'invalid_setting', message: 'unknown alice setting name', detail: 'R9' }),
    );
    const client = new ApiClient('http://h', fetchFn);
    const error = await client.playRound('abc', { alice_setting: 'R9' as never }).catch((e) => e);
    expect(error).toBeInstanceOf(ApiRequestError);
    expect(error.status).toBe(400);
    expect(error.code).toBe('invalid_setting');
    expect(error.detail).toBe('R9');
  });

  it('copes with non-JSON error bodies', async () => {
    const fetchFn = mockFetch(() => new Response('boom', { status: 502 }));
    const error = await new ApiClient('http://h', fetchFn).health().catch((e) => e);
    expect(error.code).toBe('http_error');
    expect(error.status).toBe(502);
  });

  it('sends coloring checks with nine colors', async () => {
    const fetchFn = mockFetch(() =>
      jsonResponse(200, { constraints: {}, satisfied_count: 5 }),
    );
    await new ApiClient('http://h', fetchFn).checkColoring(Array(9).fill('green'));
    const [url, init] = fetchFn.mock.calls[0]!;
    expect(url).toBe('http://h/api/v1/coloring/check');
    expect(JSON.parse(String(init?.body)).colors).toHaveLength(9);
  });
});
