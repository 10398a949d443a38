/**
 * Annotation session state machine, framework-free for testability.
 *
 * All persistent state lives on the server; the controller holds only the
 * current pair, the latest server tally (the single source of truth for
 * everything the tally table shows) and the judgment history used by undo.
 * A failed server call parks the attempted action behind a retry banner;
 * nothing is lost locally.
 */

import type {
  ApiClient,
  JudgmentEvent,
  NextPairResponse,
  PairPayload,
  StratumId,
  TallyResponse,
} from './api.js';
import { isExhausted } from './api.js';
import { isCategoryId, type CategoryId } from './categories.js';

/** What the annotator is looking at: a pair, a finished stratum, or nothing yet. */
export type CurrentView =
  | { kind: 'pair'; pair: PairPayload; revisit: boolean }
  | { kind: 'exhausted'; stratum: StratumId }
  | { kind: 'loading' };

export interface ControllerState {
  stratum: StratumId;
  current: CurrentView;
  tally: TallyResponse | null;
  canUndo: boolean;
  error: string | null;
}

type Listener = (state: ControllerState) => void;

export class AnnotationController {
  private stratum: StratumId = 'both';
  private current: CurrentView = { kind: 'loading' };
  private tally: TallyResponse | null = null;
  private history: JudgmentEvent[] = [];
  private error: string | null = null;
  private retryAction: (() => Promise<void>) | null = null;
  private listeners: Listener[] = [];

  constructor(
    private readonly api: ApiClient,
    readonly sessionId: string,
  ) {}

  onChange(listener: Listener): void {
    this.listeners.push(listener);
  }

  state(): ControllerState {
    return {
      stratum: this.stratum,
      current: this.current,
      tally: this.tally,
      canUndo: this.history.length > 0,
      error: this.error,
    };
  }

  private emit(): void {
    const snapshot = this.state();
    for (const listener of this.listeners) {
      listener(snapshot);
    }
  }

  private async guarded(action: () => Promise<void>): Promise<void> {
    try {
      await action();
      this.error = null;
      this.retryAction = null;
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
      this.retryAction = action;
    }
    this.emit();
  }

  /** Rebuild history from the server log, then show the first pair. */
  async start(stratum: StratumId = 'both'): Promise<void> {
    this.stratum = stratum;
    await this.guarded(async () => {
      this.history = await this.api.judgments(this.sessionId);
      this.tally = await this.api.tally(this.sessionId);
      await this.loadNext();
    });
  }

  async selectStratum(stratum: StratumId): Promise<void> {
    this.stratum = stratum;
    await this.guarded(() => this.loadNext());
  }

  private async loadNext(): Promise<void> {
    const response: NextPairResponse = await this.api.nextPair(this.sessionId, this.stratum);
    if (isExhausted(response)) {
      this.current = { kind: 'exhausted', stratum: this.stratum };
    } else {
      this.current = { kind: 'pair', pair: response, revisit: false };
    }
  }

  /**
   * Label the pair on screen. Values outside the seven-category enum are
   * rejected locally and never reach the server.
   */
  async judge(category: string): Promise<void> {
    if (!isCategoryId(category)) {
      this.error = `unknown category: ${category}`;
      this.emit();
      return;
    }
    const view = this.current;
    if (view.kind !== 'pair') {
      return;
    }
    const pair = view.pair;
    await this.guarded(async () => {
      const valid: CategoryId = category;
      this.tally = await this.api.judge(this.sessionId, pair.pair_id, valid);
      this.history.push({
        seq: this.history.length,
        pair_id: pair.pair_id,
        category: valid,
        english: pair.english,
        foreign: pair.foreign,
        stratum: pair.stratum,
      });
      await this.loadNext();
    });
  }

  /** Re-open the most recently judged pair; a new judgment overwrites it. */
  async undo(): Promise<void> {
    const last = this.history.pop();
    if (last === undefined) {
      return;
    }
    this.stratum = last.stratum;
    const progress = this.progressFor(last.stratum);
    this.current = {
      kind: 'pair',
      pair: {
        pair_id: last.pair_id,
        stratum: last.stratum,
        english: last.english,
        foreign: last.foreign,
        progress,
      },
      revisit: true,
    };
    this.error = null;
    this.emit();
  }

  async retry(): Promise<void> {
    const action = this.retryAction;
    if (action) {
      await this.guarded(action);
    }
  }

  private progressFor(stratum: StratumId): { judged: number; total: number } {
    const entry = this.tally?.strata[stratum];
    return entry ? { judged: entry.judged, total: entry.sample_size } : { judged: 0, total: 0 };
  }
}
