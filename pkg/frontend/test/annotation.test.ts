/**
 * Scripted annotation sessions against a faithful in-memory server double.
 *
 * The 20-pair script (including one undo/overwrite) is mirrored by the
 * backend acceptance suite, which replays the same steps over HTTP against
 * the real service; here it drives the real controller + DOM view.
 */

import { beforeEach, describe, expect, it } from 'vitest';

import type { StratumId } from '../src/api.js';
import { CATEGORIES, type CategoryId } from '../src/categories.js';
import { AnnotationController } from '../src/controller.js';
import { AnnotationView, textDirection } from '../src/view.js';
import { FakeAnnotationServer } from './fakeServer.js';

function samples(count: number, stratum: string): Array<[string, string]> {
  return Array.from({ length: count }, (_, i) => [
    `${stratum} english sentence ${i}`,
    `${stratum} विदेशी वाक्य ${i}`,
  ]);
}

function makeApp(server: FakeAnnotationServer) {
  const root = document.createElement('div');
  document.body.appendChild(root);
  const controller = new AnnotationController(server, 'test-session');
  const view = new AnnotationView(root, controller);
  view.attachKeyboard(document);
  return { root, controller, view };
}

function click(root: HTMLElement, selector: string): void {
  const node = root.querySelector<HTMLElement>(selector);
  expect(node, `missing element ${selector}`).toBeTruthy();
  node!.click();
}

async function settle(): Promise<void> {
  // let queued promise chains from event handlers finish
  for (let i = 0; i < 8; i++) {
    await Promise.resolve();
  }
}

/** The scripted session: stratum, then category per pair in order. */
const SCRIPT: Array<{ stratum: StratumId; categories: CategoryId[] }> = [
  {
    stratum: 'both',
    categories: [
      'valid_translation',
      'valid_translation',
      'incorrect_alignment', // later undone and overwritten with free_translation
      'valid_translation',
      'wrong_tokenisation',
      'valid_translation',
      'translation_error',
      'valid_translation',
    ],
  },
  {
    stratum: 'only_a',
    categories: [
      'valid_translation',
      'incorrect_alignment',
      'valid_translation',
      'translation_error',
      'mt_translation',
      'valid_translation',
    ],
  },
  {
    stratum: 'only_b',
    categories: [
      'wrong_language',
      'valid_translation',
      'free_translation',
      'incorrect_alignment',
      'wrong_tokenisation',
      'valid_translation',
    ],
  },
];

/** Final labels after the undo of both-0002 to free_translation. */
function expectedFinalLabels(): Map<string, CategoryId> {
  const labels = new Map<string, CategoryId>();
  for (const part of SCRIPT) {
    part.categories.forEach((category, i) => {
      labels.set(`${part.stratum}-${String(i).padStart(4, '0')}`, category);
    });
  }
  labels.set('both-0002', 'free_translation');
  return labels;
}

describe('scripted annotation session', () => {
  let server: FakeAnnotationServer;

  beforeEach(() => {
    document.body.innerHTML = '';
    server = new FakeAnnotationServer({
      both: samples(8, 'both'),
      only_a: samples(6, 'only_a'),
      only_b: samples(6, 'only_b'),
    });
  });

  it('judges 20 pairs with one undo/overwrite; server tally matches the script', async () => {
    const { root, controller } = makeApp(server);
    await controller.start('both');

    for (const part of SCRIPT) {
      await controller.selectStratum(part.stratum);
      for (let i = 0; i < part.categories.length; i++) {
        const pairId = `${part.stratum}-${String(i).padStart(4, '0')}`;
        expect(root.querySelector('.pair')!.getAttribute('data-pair-id')).toBe(pairId);
        click(root, `button[data-category="${part.categories[i]}"]`);
        await settle();

        if (part.stratum === 'both' && i === 2) {
          click(root, 'button.undo');
          await settle();
          // the judged pair is back on screen; overwrite it
          expect(root.querySelector('.pair')!.getAttribute('data-pair-id')).toBe('both-0002');
          click(root, 'button[data-category="free_translation"]');
          await settle();
          expect(root.querySelector('.pair')!.getAttribute('data-pair-id')).toBe('both-0003');
        }
      }
      // stratum finished: completion screen with the tally table
      expect(root.querySelector('.completion')).toBeTruthy();
      expect(root.querySelector('table.tally')).toBeTruthy();
    }

    expect(server.labels()).toEqual(expectedFinalLabels());

    // and the rendered tally equals the server tally, cell by cell
    const serverTally = await server.tally();
    for (const category of CATEGORIES) {
      const row = root.querySelector(`tr[data-category="${category.id}"]`)!;
      for (const stratum of ['only_a', 'only_b', 'both'] as StratumId[]) {
        const cell = row.querySelector(`td[data-stratum="${stratum}"]`)!;
        expect(Number(cell.textContent)).toBe(serverTally.strata[stratum].counts[category.id]);
      }
    }
  });

  it('supports keyboard shortcuts 1-7', async () => {
    const { root, controller } = makeApp(server);
    await controller.start('both');
    document.dispatchEvent(new KeyboardEvent('keydown', { key: '4' }));
    await settle();
    const tally = await server.tally();
    expect(tally.strata.both.counts.wrong_tokenisation).toBe(1);
    expect(root.querySelector('.pair')!.getAttribute('data-pair-id')).toBe('both-0001');
  });

  it('never submits a category outside the seven-value enum', async () => {
    const { controller } = makeApp(server);
    await controller.start('both');
    const before = server.judgeCalls;
    await controller.judge('spam_category');
    expect(server.judgeCalls).toBe(before);
    expect(controller.state().error).toContain('unknown category');
  });

  it('disables undo with no history and rebuilds history after reload', async () => {
    const { root, controller } = makeApp(server);
    await controller.start('both');
    expect(root.querySelector('button.undo')!.hasAttribute('disabled')).toBe(true);

    click(root, 'button[data-category="valid_translation"]');
    await settle();
    expect(root.querySelector('button.undo')!.hasAttribute('disabled')).toBe(false);

    // "reload": a fresh controller over the same server rebuilds undo history
    document.body.innerHTML = '';
    const fresh = makeApp(server);
    await fresh.controller.start('both');
    expect(fresh.controller.state().canUndo).toBe(true);
    await fresh.controller.undo();
    const view = fresh.controller.state().current;
    expect(view.kind).toBe('pair');
    if (view.kind === 'pair') {
      expect(view.pair.pair_id).toBe('both-0000');
    }
  });

  it('renders Urdu text right-to-left', async () => {
    document.body.innerHTML = '';
    const urduServer = new FakeAnnotationServer({
      both: [['The committee met today.', 'کمیٹی کا اجلاس آج ہوا۔']],
    });
    const { root, controller } = makeApp(urduServer);
    await controller.start('both');
    expect(root.querySelector('.foreign')!.getAttribute('dir')).toBe('rtl');
    expect(root.querySelector('.english')!.getAttribute('dir')).toBe('ltr');
  });

  it('shows a retry banner on server error and loses nothing', async () => {
    const { root, controller } = makeApp(server);
    await controller.start('both');

    server.failNext = 1;
    click(root, 'button[data-category="valid_translation"]');
    await settle();
    expect(root.querySelector('.error-banner')).toBeTruthy();
    expect((await server.tally()).strata.both.judged).toBe(0);

    click(root, 'button.retry');
    await settle();
    expect(root.querySelector('.error-banner')).toBeNull();
    const tally = await server.tally();
    expect(tally.strata.both.judged).toBe(1);
    expect(tally.strata.both.counts.valid_translation).toBe(1);
  });

  it('replaying the published intersection distribution yields 79%/94%', async () => {
    document.body.innerHTML = '';
    const big = new FakeAnnotationServer({ both: samples(100, 'both') });
    const { controller } = makeApp(big);
    await controller.start('both');
    const distribution: Array<[CategoryId, number]> = [
      ['valid_translation', 79],
      ['incorrect_alignment', 3],
      ['wrong_tokenisation', 3],
      ['translation_error', 10],
      ['free_translation', 5],
    ];
    for (const [category, count] of distribution) {
      for (let i = 0; i < count; i++) {
        await controller.judge(category);
      }
    }
    const tally = (await big.tally()).strata.both;
    expect(tally.judged).toBe(100);
    const conservative = tally.counts.valid_translation / tally.total;
    const liberal =
      (tally.total - tally.counts.incorrect_alignment - tally.counts.wrong_tokenisation) /
      tally.total;
    expect(conservative).toBeCloseTo(0.79, 10);
    expect(liberal).toBeCloseTo(0.94, 10);
  });
});

describe('text direction heuristic', () => {
  it('classifies by first strong character', () => {
    expect(textDirection('کمیٹی کا اجلاس')).toBe('rtl');
    expect(textDirection('Hello there')).toBe('ltr');
    expect(textDirection('नमस्ते')).toBe('ltr');
    expect(textDirection('"قانون"')).toBe('rtl');
  });
});
