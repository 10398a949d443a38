/**
 * Typed client for the annotation service JSON API.
 *
 * The payload shapes mirror the server exactly; the UI never reinterprets
 * or reorders anything it gets from here.
 */

import type { CategoryId } from './categories.js';

export type StratumId = 'only_a' | 'only_b' | 'both';

export const STRATA: readonly { id: StratumId; label: string }[] = [
  { id: 'only_a', label: 'Only length aligner' },
  { id: 'only_b', label: 'Only embedding aligner' },
  { id: 'both', label: 'Both aligners' },
] as const;

export interface Progress {
  judged: number;
  total: number;
}

export interface PairPayload {
  pair_id: string;
  stratum: StratumId;
  english: string;
  foreign: string;
  progress: Progress;
}

export interface ExhaustedPayload {
  exhausted: true;
  stratum: StratumId;
  progress: Progress;
}

export type NextPairResponse = PairPayload | ExhaustedPayload;

export function isExhausted(r: NextPairResponse): r is ExhaustedPayload {
  return (r as ExhaustedPayload).exhausted === true;
}

export interface StratumTallyPayload {
  stratum: StratumId;
  counts: Record<CategoryId, number>;
  total: number;
  judged: number;
  sample_size: number;
  completion: number;
}

export interface TallyResponse {
  session_id: string;
  strata: Record<StratumId, StratumTallyPayload>;
}

export interface JudgmentEvent {
  seq: number;
  pair_id: string;
  category: CategoryId;
  english: string;
  foreign: string;
  stratum: StratumId;
}

export interface ApiClient {
  nextPair(sessionId: string, stratum: StratumId): Promise<NextPairResponse>;
  judge(sessionId: string, pairId: string, category: CategoryId): Promise<TallyResponse>;
  tally(sessionId: string): Promise<TallyResponse>;
  judgments(sessionId: string): Promise<JudgmentEvent[]>;
}

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status?: number,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function requestJson<T>(input: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(input, init);
  } catch (err) {
    throw new ApiError(`network error: ${String(err)}`);
  }
  if (!response.ok) {
    throw new ApiError(`server returned ${response.status}`, response.status);
  }
  return (await response.json()) as T;
}

/** Production client talking to the service that serves this bundle. */
export class HttpApiClient implements ApiClient {
  constructor(private readonly base: string = '') {}

  nextPair(sessionId: string, stratum: StratumId): Promise<NextPairResponse> {
    const url = `${this.base}/session/${encodeURIComponent(sessionId)}/next?stratum=${stratum}`;
    return requestJson<NextPairResponse>(url);
  }

  judge(sessionId: string, pairId: string, category: CategoryId): Promise<TallyResponse> {
    const url = `${this.base}/session/${encodeURIComponent(sessionId)}/judgment`;
    return requestJson<TallyResponse>(url, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ pair_id: pairId, category }),
    });
  }

  tally(sessionId: string): Promise<TallyResponse> {
    return requestJson<TallyResponse>(`${this.base}/session/${encodeURIComponent(sessionId)}/tally`);
  }

  async judgments(sessionId: string): Promise<JudgmentEvent[]> {
    const payload = await requestJson<{ judgments: JudgmentEvent[] }>(
      `${this.base}/session/${encodeURIComponent(sessionId)}/judgments`,
    );
    return payload.judgments;
  }
}
