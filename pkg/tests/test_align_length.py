"""Length-aligner tests, checked against exhaustive enumeration."""

import math
import random

import pytest

from oracles import oracle_best_alignment

from bitextforge.align_length import (
    AlignmentError,
    LengthModel,
    LexicalScorer,
    align_length,
    link_cost,
    tokenize,
)
from bitextforge.corpus import AlignMethod, BilingualDictionary
from bitextforge.dp import DEFAULT_SHAPES

MODEL = LengthModel()


def random_sentence(rng: random.Random, min_len=1, max_len=120) -> str:
    return "x" * rng.randint(min_len, max_len)


def oracle_for(src, tgt, model=MODEL, lex=None):
    cache = {}

    def cost_of_link(src_idx, tgt_idx):
        key = (src_idx, tgt_idx)
        if key not in cache:
            cache[key] = link_cost(
                [src[i] for i in src_idx], [tgt[j] for j in tgt_idx], model, lex
            )
        return cache[key]

    return oracle_best_alignment(len(src), len(tgt), DEFAULT_SHAPES, cost_of_link)


class TestLinkCost:
    def test_exact_ratio_zero_cost(self):
        assert link_cost(["x" * 100], ["y" * 100], LengthModel(1.0, 6.8)) == 0.0

    def test_lexical_score_one_third(self):
        d = BilingualDictionary({"dog": "कुत्ता"})
        lex = LexicalScorer(d)
        assert lex.score(["the dog barked"], ["कुत्ता भौंका और भागा"]) == pytest.approx(1 / 3)

    def test_deletion_cost_is_skip_penalty(self):
        assert link_cost(["anything"], [], MODEL, skip_penalty=3.0) == 3.0
        assert link_cost([], ["a", "b"], MODEL, skip_penalty=3.0) == 6.0

    def test_both_empty_is_error(self):
        with pytest.raises(AlignmentError):
            link_cost([], [], MODEL)

    def test_dictionary_lowers_cost(self):
        d = BilingualDictionary({"dog": "कुत्ता"})
        with_dict = link_cost(["the dog"], ["कुत्ता yes"], MODEL, LexicalScorer(d))
        without = link_cost(["the dog"], ["कुत्ता yes"], MODEL, None)
        assert with_dict < without

    def test_dictionary_monotonicity(self):
        # Adding an entry that matches never increases a 1-1 link's cost.
        rng = random.Random(7)
        for _ in range(50):
            src = [" ".join(f"w{rng.randint(0, 20)}" for _ in range(rng.randint(1, 8)))]
            tgt = [" ".join(f"f{rng.randint(0, 20)}" for _ in range(rng.randint(1, 8)))]
            base_entries = {f"w{i}": f"f{i}" for i in range(rng.randint(0, 5))}
            before = link_cost(src, tgt, MODEL, LexicalScorer(BilingualDictionary(base_entries)))
            src_tok = tokenize(src[0])
            tgt_tok = tokenize(tgt[0])
            extra = dict(base_entries)
            extra[rng.choice(src_tok)] = rng.choice(tgt_tok)
            after = link_cost(src, tgt, MODEL, LexicalScorer(BilingualDictionary(extra)))
            assert after <= before


class TestTokenize:
    def test_case_folded_and_punct_split(self):
        assert tokenize("The dog, barked!") == ["the", "dog", "barked"]

    def test_indic_text(self):
        assert tokenize("कुत्ता भौंका।") == ["कुत्ता", "भौंका"]


class TestAlignLength:
    def test_identical_lists_give_diagonal(self):
        sents = ["alpha beta", "gamma delta epsilon", "zeta", "eta theta", "iota"]
        links = align_length(sents, sents)
        assert [(l.src, l.tgt) for l in links] == [((i,), (i,)) for i in range(5)]
        assert all(l.method is AlignMethod.LENGTH_DICT for l in links)

    def test_empty_input_is_error(self):
        with pytest.raises(AlignmentError):
            align_length([], ["a"])
        with pytest.raises(AlignmentError):
            align_length(["a"], [])

    def test_forced_two_to_one_merge(self):
        # Target sentence 2 is the concatenation of source sentences 2+3.
        src = ["a" * 50, "b" * 40, "c" * 45]
        tgt = ["a" * 50, "d" * 85]
        links = align_length(src, tgt)
        expected_cost, expected = oracle_for(src, tgt)
        assert [(l.src, l.tgt) for l in links] == expected
        assert ((1, 2), (1,)) in [(l.src, l.tgt) for l in links]

    def test_coverage_and_monotonicity(self):
        rng = random.Random(11)
        for _ in range(30):
            src = [random_sentence(rng) for _ in range(rng.randint(1, 8))]
            tgt = [random_sentence(rng) for _ in range(rng.randint(1, 8))]
            links = align_length(src, tgt)
            src_covered = [i for l in links for i in l.src]
            tgt_covered = [j for l in links for j in l.tgt]
            assert src_covered == list(range(len(src)))
            assert tgt_covered == list(range(len(tgt)))

    def test_score_is_negated_cost(self):
        src = ["a" * 30, "b" * 50]
        tgt = ["a" * 32, "b" * 55]
        links = align_length(src, tgt)
        for link in links:
            blocks = ([src[i] for i in link.src], [tgt[j] for j in link.tgt])
            assert link.score == -link_cost(blocks[0], blocks[1], MODEL)


class TestAgainstOracle:
    def test_small_instances_match_exhaustive_minimum(self):
        rng = random.Random(2024)
        for _ in range(60):
            n, m = rng.randint(1, 6), rng.randint(1, 6)
            src = [random_sentence(rng) for _ in range(n)]
            tgt = [random_sentence(rng) for _ in range(m)]
            oracle_cost, oracle_links = oracle_for(src, tgt)
            links = align_length(src, tgt)
            dp_cost = 0.0
            for l in reversed(links):
                dp_cost = -l.score + dp_cost
            assert dp_cost == oracle_cost
            assert [(l.src, l.tgt) for l in links] == oracle_links

    def test_oracle_match_with_dictionary(self):
        rng = random.Random(99)
        vocab = [f"w{i}" for i in range(12)]
        fvocab = [f"f{i}" for i in range(12)]
        d = BilingualDictionary(dict(zip(vocab, fvocab)))
        lex = LexicalScorer(d)
        for _ in range(25):
            n, m = rng.randint(1, 5), rng.randint(1, 5)
            src = [" ".join(rng.choices(vocab, k=rng.randint(1, 6))) for _ in range(n)]
            tgt = [" ".join(rng.choices(fvocab, k=rng.randint(1, 6))) for _ in range(m)]
            oracle_cost, oracle_links = oracle_for(src, tgt, lex=lex)
            links = align_length(src, tgt, MODEL, lex)
            assert [(l.src, l.tgt) for l in links] == oracle_links

    def test_tie_break_prefers_one_to_one(self):
        # Identical halves: merging 2-2 ties with two 1-1 links at zero cost.
        src = ["q" * 10, "q" * 10]
        tgt = ["q" * 10, "q" * 10]
        links = align_length(src, tgt)
        assert [(l.src, l.tgt) for l in links] == [((0,), (0,)), ((1,), (1,))]
