/**
 * The seven-way validation scheme for judged sentence pairs.
 *
 * The ids mirror the server enum exactly; the UI can only ever submit one
 * of these values. Glosses are one-line paraphrases shown on hover and are
 * bundled here so translators can localize them.
 */

export type CategoryId =
  | 'valid_translation'
  | 'wrong_language'
  | 'incorrect_alignment'
  | 'wrong_tokenisation'
  | 'mt_translation'
  | 'translation_error'
  | 'free_translation';

export interface Category {
  id: CategoryId;
  label: string;
  /** Keyboard shortcut, '1'..'7'. */
  key: string;
  /** One-line paraphrased gloss (not official guideline text). */
  gloss: string;
}

export const CATEGORIES: readonly Category[] = [
  {
    id: 'valid_translation',
    label: 'Valid translation',
    key: '1',
    gloss: 'The two sentences are faithful translations of each other.',
  },
  {
    id: 'wrong_language',
    label: 'Wrong language',
    key: '2',
    gloss: 'One side is not in the language it should be.',
  },
  {
    id: 'incorrect_alignment',
    label: 'Incorrect alignment',
    key: '3',
    gloss: 'The sentences are not translations of each other at all.',
  },
  {
    id: 'wrong_tokenisation',
    label: 'Wrong tokenisation',
    key: '4',
    gloss: 'A sentence was split badly, so one side is missing or has extra content.',
  },
  {
    id: 'mt_translation',
    label: 'MT translation',
    key: '5',
    gloss: 'The pair looks machine translated.',
  },
  {
    id: 'translation_error',
    label: 'Translation error',
    key: '6',
    gloss: 'A human translation with a clear mistake.',
  },
  {
    id: 'free_translation',
    label: 'Free translation',
    key: '7',
    gloss: 'A loose paraphrase rather than a direct translation.',
  },
] as const;

export const CATEGORY_IDS: ReadonlySet<string> = new Set(CATEGORIES.map((c) => c.id));

export function categoryForKey(key: string): Category | undefined {
  return CATEGORIES.find((c) => c.key === key);
}

export function isCategoryId(value: string): value is CategoryId {
  return CATEGORY_IDS.has(value);
}
