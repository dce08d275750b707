"""Vocabulary-tier scoring and threshold tuning."""

import random

import pytest

from mcqgeval.corpus import Difficulty
from mcqgeval.errors import DuplicateWord, MalformedRecord, MissingDifficultyLabels
from mcqgeval.vocab import (
    ComplexityThresholds,
    builtin_lexicon_path,
    classify_by_threshold,
    load_lexicon,
    tune_thresholds,
    vocab_field_scores,
    vocab_score,
)

from conftest import simple_example, write_jsonl


LEX = {"easyword": 0.0, "midword": 0.5, "hardword": 1.0, "plainword": 0.0}


class TestLoadLexicon:
    def test_valid_file(self, tmp_path):
        rows = [{"word": "Apple", "tier": "beginner"},
                {"word": "banana", "tier": "expert"}]
        lex = load_lexicon(write_jsonl(tmp_path / "lex.jsonl", rows))
        assert lex == {"apple": 0.0, "banana": 1.0}

    def test_unknown_tier(self, tmp_path):
        rows = [{"word": "apple", "tier": "guru"}]
        with pytest.raises(MalformedRecord):
            load_lexicon(write_jsonl(tmp_path / "lex.jsonl", rows))

    def test_duplicate_word_after_lowercasing(self, tmp_path):
        rows = [{"word": "apple", "tier": "beginner"},
                {"word": "APPLE", "tier": "expert"}]
        with pytest.raises(DuplicateWord):
            load_lexicon(write_jsonl(tmp_path / "lex.jsonl", rows))

    def test_builtin_lexicon(self):
        lex = load_lexicon(builtin_lexicon_path())
        assert set(lex.values()) == {0.0, 0.5, 1.0}


def example_from_words(tokens, context="offlexicon filler", options=("oo", "pp", "qq", "rr")):
    return simple_example(question=" ".join(tokens), context=context, options=options)


class TestVocabScore:
    def test_all_beginner(self):
        ex = example_from_words(["easyword", "easyword", "plainword"])
        assert vocab_score(ex, LEX) == 0.0

    def test_half_beginner_half_expert(self):
        ex = example_from_words(["easyword", "hardword"])
        assert vocab_score(ex, LEX) == 0.5

    def test_one_of_each_tier(self):
        ex = example_from_words(["easyword", "midword", "hardword"])
        assert vocab_score(ex, LEX) == pytest.approx((0.0 + 0.5 + 1.0) / 3)

    def test_out_of_lexicon_tokens_excluded(self):
        ex = example_from_words(["hardword", "xyzzy", "qwerty"])
        assert vocab_score(ex, LEX) == 1.0

    def test_neutral_when_nothing_matches(self):
        ex = example_from_words(["xyzzy"])
        assert vocab_score(ex, LEX) == 0.5

    def test_empty_lexicon_rejected(self):
        with pytest.raises(ValueError):
            vocab_score(example_from_words(["easyword"]), {})

    def test_token_order_invariance(self):
        tokens = ["easyword", "midword", "hardword", "plainword"]
        forward = vocab_score(example_from_words(tokens), LEX)
        backward = vocab_score(example_from_words(list(reversed(tokens))), LEX)
        assert forward == backward

    def test_duplicating_every_token_keeps_the_score(self):
        tokens = ["easyword", "midword", "hardword"]
        base = vocab_score(example_from_words(tokens), LEX)
        for k in (2, 5):
            ex = simple_example(question=" ".join(tokens * k),
                                context="offlexicon filler " * k,
                                options=("oo", "pp", "qq", "rr"))
            assert vocab_score(ex, LEX) == pytest.approx(base, abs=1e-12)

    def test_per_field_scores(self):
        ex = simple_example(question="hardword", context="easyword",
                            options=("midword", "xx", "yy", "zz"))
        fields = vocab_field_scores(ex, LEX)
        assert fields == {"question": 1.0, "context": 0.0, "options": 0.5}
        # joint averaging pools the three in-lexicon tokens
        assert vocab_score(ex, LEX) == pytest.approx(0.5)


class TestClassifyByThreshold:
    TH = ComplexityThresholds(t1=0.3, t2=0.6)

    def test_low_score_is_easy(self):
        assert classify_by_threshold(0.0, self.TH) is Difficulty.EASY

    def test_boundary_goes_to_upper_class(self):
        assert classify_by_threshold(0.3, self.TH) is Difficulty.MEDIUM
        assert classify_by_threshold(0.6, self.TH) is Difficulty.HARD

    def test_top_score_is_hard(self):
        assert classify_by_threshold(1.0, self.TH) is Difficulty.HARD

    def test_monotone_in_score(self):
        order = [Difficulty.EASY, Difficulty.MEDIUM, Difficulty.HARD]
        rng = random.Random(3)
        for _ in range(200):
            t1 = rng.random()
            t2 = t1 + (1 - t1) * rng.random()
            th = ComplexityThresholds(t1=t1, t2=t2)
            scores = sorted(rng.random() for _ in range(10))
            ranks = [order.index(classify_by_threshold(s, th)) for s in scores]
            assert ranks == sorted(ranks)

    def test_invalid_thresholds(self):
        with pytest.raises(ValueError):
            ComplexityThresholds(t1=0.7, t2=0.3)
        with pytest.raises(ValueError):
            ComplexityThresholds(t1=-0.1, t2=0.5)


def labeled(tokens, difficulty, i):
    ex = example_from_words(tokens)
    return type(ex)(example_id=f"e{i}", context_id=f"c{i}", context=ex.context,
                    question=ex.question, options=ex.options, correct_index=0,
                    split=ex.split, difficulty_label=difficulty)


class TestTuneThresholds:
    def test_perfectly_separable(self):
        dev = (
            [labeled(["easyword"], Difficulty.EASY, i) for i in range(5)]
            + [labeled(["midword"], Difficulty.MEDIUM, 10 + i) for i in range(5)]
            + [labeled(["hardword", "midword"], Difficulty.HARD, 20 + i) for i in range(5)]
        )
        th, acc = tune_thresholds(dev, LEX)
        assert acc == 1.0
        assert th.t1 <= 0.5 < th.t2 <= 0.75

    def test_constant_scores_hit_majority_accuracy(self):
        # Every example scores 0.5, so the tuner can only pick one class for
        # everything; the best it can do is the majority proportion.
        dev = ([labeled(["midword"], Difficulty.MEDIUM, i) for i in range(6)]
               + [labeled(["midword"], Difficulty.EASY, 10 + i) for i in range(3)]
               + [labeled(["midword"], Difficulty.HARD, 20 + i) for i in range(1)])
        th, acc = tune_thresholds(dev, LEX)
        assert acc == pytest.approx(0.6)

    def test_tie_breaks_to_smallest_thresholds(self):
        # A single hard example at score 1.0: every (t1, t2) classifies it
        # hard, so the tuner must return the smallest grid point (0, 0).
        dev = [labeled(["hardword"], Difficulty.HARD, 0)]
        th, acc = tune_thresholds(dev, LEX)
        assert acc == 1.0
        assert (th.t1, th.t2) == (0.0, 0.0)

    def test_never_below_majority(self):
        # Scores strictly below 1.0 keep all three classes reachable, so the
        # majority predictor stays inside the search space. (A score of
        # exactly 1.0 is always classified hard because thresholds cannot
        # exceed 1; that boundary is documented in classify_by_threshold.)
        rng = random.Random(17)
        tiers = [Difficulty.EASY, Difficulty.MEDIUM, Difficulty.HARD]
        for _ in range(10):
            dev = []
            for i in range(rng.randint(3, 30)):
                n_hard = rng.randint(0, 4)
                n_easy = rng.randint(1, 4)  # >= 1 keeps the score < 1.0
                tokens = ["hardword"] * n_hard + ["easyword"] * n_easy
                dev.append(labeled(tokens, rng.choice(tiers), i))
            labels = [ex.difficulty_label for ex in dev]
            majority_acc = max(labels.count(t) for t in tiers) / len(labels)
            _, acc = tune_thresholds(dev, LEX, grid_step=0.05)
            assert acc >= majority_acc

    def test_missing_labels(self):
        dev = [example_from_words(["easyword"])]
        with pytest.raises(MissingDifficultyLabels):
            tune_thresholds(dev, LEX)

    def test_empty_dev(self):
        with pytest.raises(MissingDifficultyLabels):
            tune_thresholds([], LEX)

    def test_grid_step_validation(self):
        dev = [labeled(["easyword"], Difficulty.EASY, 0)]
        with pytest.raises(ValueError):
            tune_thresholds(dev, LEX, grid_step=0.5)
        with pytest.raises(ValueError):
            tune_thresholds(dev, LEX, grid_step=0.0)
