/**
 * DOM rendering for the annotation screen.
 *
 * One pair at a time: both sentences side by side (the foreign pane gets
 * an explicit text direction so Urdu renders right-to-left), the seven
 * category buttons with keyboard hints and hover glosses, stratum tabs,
 * an undo button and a live tally table fed only by server responses.
 */

import { STRATA, type StratumId } from './api.js';
import { CATEGORIES, categoryForKey } from './categories.js';
import type { AnnotationController, ControllerState } from './controller.js';

const RTL_RANGES: ReadonlyArray<[number, number]> = [
  [0x0590, 0x05ff], // Hebrew
  [0x0600, 0x06ff], // Arabic (Urdu)
  [0x0750, 0x077f],
  [0x08a0, 0x08ff],
  [0xfb50, 0xfdff],
  [0xfe70, 0xfeff],
];

/** First-strong-character heuristic, enough for monolingual panes. */
export function textDirection(text: string): 'rtl' | 'ltr' {
  for (const ch of text) {
    const cp = ch.codePointAt(0)!;
    for (const [lo, hi] of RTL_RANGES) {
      if (cp >= lo && cp <= hi) {
        return 'rtl';
      }
    }
    if (/\p{Letter}/u.test(ch)) {
      return 'ltr';
    }
  }
  return 'ltr';
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export class AnnotationView {
  constructor(
    private readonly root: HTMLElement,
    private readonly controller: AnnotationController,
  ) {
    controller.onChange((state) => this.render(state));
  }

  /** Number keys 1-7 judge, "u" undoes. */
  attachKeyboard(target: EventTarget = document): void {
    target.addEventListener('keydown', (event) => {
      const key = (event as KeyboardEvent).key;
      const category = categoryForKey(key);
      if (category) {
        void this.controller.judge(category.id);
      } else if (key === 'u') {
        void this.controller.undo();
      }
    });
  }

  render(state: ControllerState): void {
    this.root.textContent = '';

    if (state.error !== null) {
      const banner = el('div', { class: 'error-banner', role: 'alert' });
      banner.appendChild(el('span', {}, `Server error: ${state.error} — nothing was lost.`));
      const retry = el('button', { class: 'retry' }, 'Retry');
      retry.addEventListener('click', () => void this.controller.retry());
      banner.appendChild(retry);
      this.root.appendChild(banner);
    }

    this.root.appendChild(this.renderStratumTabs(state));

    if (state.current.kind === 'pair') {
      this.root.appendChild(this.renderPair(state));
    } else if (state.current.kind === 'exhausted') {
      const done = el('div', { class: 'completion' });
      done.appendChild(el('h2', {}, 'Stratum complete'));
      done.appendChild(
        el('p', {}, 'Every pair in this stratum has been judged. Pick another stratum or review the tally below.'),
      );
      this.root.appendChild(done);
    } else {
      this.root.appendChild(el('p', { class: 'loading' }, 'Loading…'));
    }

    this.root.appendChild(this.renderTally(state));
  }

  private renderStratumTabs(state: ControllerState): HTMLElement {
    const nav = el('nav', { class: 'strata' });
    for (const stratum of STRATA) {
      const judged = state.tally?.strata[stratum.id];
      const suffix = judged ? ` (${judged.judged}/${judged.sample_size})` : '';
      const button = el(
        'button',
        {
          class: stratum.id === state.stratum ? 'stratum active' : 'stratum',
          'data-stratum': stratum.id,
        },
        stratum.label + suffix,
      );
      button.addEventListener('click', () => void this.controller.selectStratum(stratum.id));
      nav.appendChild(button);
    }
    return nav;
  }

  private renderPair(state: ControllerState): HTMLElement {
    if (state.current.kind !== 'pair') {
      throw new Error('renderPair called without a pair');
    }
    const { pair, revisit } = state.current;
    const section = el('section', { class: 'pair', 'data-pair-id': pair.pair_id });

    const progress = el(
      'p',
      { class: 'progress' },
      `${pair.progress.judged} of ${pair.progress.total} judged in this stratum` +
        (revisit ? ' — re-judging the previous pair' : ''),
    );
    section.appendChild(progress);

    const panes = el('div', { class: 'panes' });
    const english = el('blockquote', { class: 'english', dir: 'ltr', lang: 'en' }, pair.english);
    const foreign = el(
      'blockquote',
      { class: 'foreign', dir: textDirection(pair.foreign) },
      pair.foreign,
    );
    panes.appendChild(english);
    panes.appendChild(foreign);
    section.appendChild(panes);

    const buttons = el('div', { class: 'categories' });
    for (const category of CATEGORIES) {
      const button = el(
        'button',
        { class: 'category', 'data-category': category.id, title: category.gloss },
        `${category.key}. ${category.label}`,
      );
      button.addEventListener('click', () => void this.controller.judge(category.id));
      buttons.appendChild(button);
    }
    section.appendChild(buttons);

    const undo = el('button', { class: 'undo' }, 'Undo last judgment (u)');
    if (!state.canUndo) {
      undo.setAttribute('disabled', 'disabled');
    }
    undo.addEventListener('click', () => void this.controller.undo());
    section.appendChild(undo);

    return section;
  }

  private renderTally(state: ControllerState): HTMLElement {
    const table = el('table', { class: 'tally' });
    const head = el('tr');
    head.appendChild(el('th', {}, 'Category'));
    for (const stratum of STRATA) {
      head.appendChild(el('th', {}, stratum.label));
    }
    table.appendChild(head);
    for (const category of CATEGORIES) {
      const row = el('tr', { 'data-category': category.id });
      row.appendChild(el('td', {}, category.label));
      for (const stratum of STRATA) {
        const count = state.tally?.strata[stratum.id]?.counts[category.id] ?? 0;
        row.appendChild(el('td', { 'data-stratum': stratum.id }, String(count)));
      }
      table.appendChild(row);
    }
    return table;
  }
}
