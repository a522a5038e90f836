import io
import math

import numpy as np
import pytest

from phonosim.embedding import EmbeddingMatrix, TrainConfig, train
from phonosim.evaluation import (EvalReport, EvaluationError, JudgmentSet,
                                 load_bundled_judgment_sets,
                                 load_bundled_pun_pairs, load_judgment_set,
                                 load_pun_pairs, make_embedding_scorer,
                                 make_similarity_scorer, pearson,
                                 penalty_sweep, pun_eval, random_baseline,
                                 vitz_eval, write_histogram_tsv,
                                 write_pairs_tsv, write_sweep_tsv, PunPairSet)
from phonosim.similarity import SimilarityConfig, word_similarity

from oracles import oracle_pearson

CFG = SimilarityConfig()


def fixed_embedding(rows: dict[str, list[float]]) -> EmbeddingMatrix:
    words = tuple(rows)
    return EmbeddingMatrix(words, np.array([rows[w] for w in words],
                                           dtype=np.float64), "e" * 64)


class TestPearson:
    def test_perfect_positive(self):
        assert pearson([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1.0)

    def test_perfect_negative(self):
        assert pearson([1, 2, 3], [5, 3, 1]) == pytest.approx(-1.0)

    def test_known_value(self):
        # hand derivation: centered dot 15, norms sqrt(2)*sqrt(114)
        want = 15 / math.sqrt(228)
        assert pearson([1, 2, 3], [2, 4, 7]) == pytest.approx(want,
                                                              abs=1e-15)
        assert pearson([1, 2, 3], [2, 4, 7]) == pytest.approx(
            0.9933992677987828, abs=1e-15)

    def test_reference_value(self):
        # 18 / sqrt(336), quoted downstream as 0.98198
        assert pearson([1, 2, 3], [2, 4, 8]) == pytest.approx(0.98198,
                                                              abs=1e-4)

    def test_matches_closed_form_oracle(self):
        rng = np.random.default_rng(451)
        xs = rng.uniform(-5, 5, size=50)
        ys = 0.3 * xs + rng.normal(0, 1, size=50)
        assert pearson(xs, ys) == pytest.approx(
            oracle_pearson(xs.tolist(), ys.tolist()), abs=1e-12)

    def test_constant_scores_rejected(self):
        with pytest.raises(EvaluationError, match="constant"):
            pearson([1.0, 1.0, 1.0], [1, 2, 3])

    def test_length_mismatch_rejected(self):
        with pytest.raises(EvaluationError, match="length"):
            pearson([1, 2, 3], [1, 2])

    def test_too_few_points_rejected(self):
        with pytest.raises(EvaluationError, match="2 points"):
            pearson([1.0], [2.0])


class TestJudgmentSetLoading:
    TEXT = ("# human ratings\n"
            "\n"
            "plant\n"
            "plants\t3.40\n"
            "plan\t2.00\n"
            "tree\t0.00\n")

    def test_parse_and_scale(self):
        js = load_judgment_set(io.StringIO(self.TEXT))
        assert js.standard_word == "plant"
        assert js.comparisons == (("plants", 0.85), ("plan", 0.5),
                                  ("tree", 0.0))

    def test_score_above_four_rejected(self):
        bad = "plant\nplans\t4.5\n"
        with pytest.raises(EvaluationError, match="outside 0-4"):
            load_judgment_set(io.StringIO(bad))

    def test_non_numeric_score_rejected(self):
        bad = "plant\nplans\tlots\n"
        with pytest.raises(EvaluationError, match="bad score"):
            load_judgment_set(io.StringIO(bad))

    def test_missing_tab_rejected(self):
        bad = "plant\nplans 3.0\n"
        with pytest.raises(EvaluationError, match="TAB"):
            load_judgment_set(io.StringIO(bad))

    def test_empty_file_rejected(self):
        with pytest.raises(EvaluationError, match="no standard word"):
            load_judgment_set(io.StringIO("# only comments\n"))

    def test_no_comparisons_rejected(self):
        with pytest.raises(EvaluationError, match="no comparisons"):
            load_judgment_set(io.StringIO("plant\n"))

    def test_direct_construction_validates_range(self):
        with pytest.raises(EvaluationError, match="outside"):
            JudgmentSet("plant", (("plans", 1.2),))


class TestBundledJudgmentSets:
    def test_four_sets_with_known_standards(self):
        sets = load_bundled_judgment_sets()
        assert sorted(js.standard_word for js in sets) == [
            "plant", "relation", "sit", "wonder"]

    def test_all_words_resolve_in_lexicon(self, en_lexicon):
        for js in load_bundled_judgment_sets():
            assert en_lexicon.primary(js.standard_word) is not None
            for word, score in js.comparisons:
                assert en_lexicon.primary(word) is not None, word
                assert 0.0 <= score <= 1.0

    def test_set_sizes(self):
        sizes = {js.standard_word: len(js.comparisons)
                 for js in load_bundled_judgment_sets()}
        assert sizes == {"plant": 19, "relation": 19, "sit": 19,
                         "wonder": 18}


class TestVitzEval:
    def test_human_scores_correlate_perfectly_with_themselves(self):
        sets = load_bundled_judgment_sets()
        table = {(js.standard_word, w): s
                 for js in sets for w, s in js.comparisons}
        r = vitz_eval(sets, lambda a, b: table[(a, b)])
        assert set(r) == {js.standard_word for js in sets}
        for value in r.values():
            assert value == pytest.approx(1.0, abs=1e-12)

    def test_affine_rescaling_leaves_r_unchanged(self):
        sets = load_bundled_judgment_sets()
        table = {(js.standard_word, w): s
                 for js in sets for w, s in js.comparisons}
        r = vitz_eval(sets, lambda a, b: 3.0 * table[(a, b)] + 0.25)
        for value in r.values():
            assert value == pytest.approx(1.0, abs=1e-12)

    def test_alignment_scorer_beats_chance_on_all_sets(self, en_lexicon):
        r = vitz_eval(load_bundled_judgment_sets(),
                      make_similarity_scorer(en_lexicon, CFG))
        assert all(value > 0.6 for value in r.values())

    def test_constant_scorer_rejected(self):
        sets = load_bundled_judgment_sets()
        with pytest.raises(EvaluationError, match="constant"):
            vitz_eval(sets, lambda a, b: 0.5)

    def test_missing_word_named_in_error(self, sub_lexicon):
        lex = sub_lexicon(["plant", "plants"])
        js = JudgmentSet("plant", (("plants", 0.9), ("lawn", 0.1)))
        with pytest.raises(EvaluationError, match="lawn"):
            vitz_eval([js], make_similarity_scorer(lex, CFG))


class TestPenaltySweep:
    def test_single_penalty_single_row(self, en_lexicon):
        rows = penalty_sweep(load_bundled_judgment_sets(), [2.5],
                             en_lexicon)
        assert len(rows) == 1
        assert rows[0][0] == 2.5

    def test_row_equals_mean_of_vitz_eval(self, en_lexicon):
        sets = load_bundled_judgment_sets()
        rows = penalty_sweep(sets, [1.5], en_lexicon)
        r = vitz_eval(sets, make_similarity_scorer(
            en_lexicon, SimilarityConfig(penalty=1.5)))
        assert rows[0][1] == pytest.approx(sum(r.values()) / len(r),
                                           abs=1e-15)

    def test_mean_r_continuous_in_penalty(self, en_lexicon):
        sets = load_bundled_judgment_sets()
        a = penalty_sweep(sets, [2.5], en_lexicon)[0][1]
        b = penalty_sweep(sets, [2.5 + 1e-9], en_lexicon)[0][1]
        assert abs(a - b) < 1e-6

    def test_empty_penalty_list_rejected(self, en_lexicon):
        with pytest.raises(EvaluationError, match="no penalty"):
            penalty_sweep(load_bundled_judgment_sets(), [], en_lexicon)

    def test_base_config_respected(self, en_lexicon):
        sets = load_bundled_judgment_sets()
        weighted = penalty_sweep(sets, [2.5], en_lexicon)[0][1]
        flat = penalty_sweep(sets, [2.5], en_lexicon,
                             SimilarityConfig(vowel_weighted=False))[0][1]
        assert weighted != flat


class TestPunPairLoading:
    def test_parse_and_dedup(self):
        text = ("# pairs\n"
                "pear\tpair\n"
                "PAIR\tPEAR\n"
                "flour\tflower\n")
        ps = load_pun_pairs(io.StringIO(text))
        assert ps.pairs == (("pear", "pair"), ("flour", "flower"))

    def test_malformed_row_rejected(self):
        with pytest.raises(EvaluationError, match="word1<TAB>word2"):
            load_pun_pairs(io.StringIO("pear pair\n"))

    def test_bundled_pairs(self):
        ps = load_bundled_pun_pairs()
        assert len(ps.pairs) == 778
        seen = set()
        for a, b in ps.pairs:
            assert a != b
            assert a == a.lower() and b == b.lower()
            key = (a, b) if a <= b else (b, a)
            assert key not in seen
            seen.add(key)


class TestPunEval:
    def test_shared_vector_scores_cosine_one(self):
        emb = fixed_embedding({"pear": [1.0, 0.0], "pair": [1.0, 0.0],
                               "desk": [0.0, 1.0]})
        report = pun_eval(PunPairSet((("pear", "pair"),)), emb)
        assert report.n == 1
        assert report.skipped == 0
        assert report.scored_pairs[0][2] == pytest.approx(1.0)
        assert report.mean == pytest.approx(1.0)

    def test_missing_words_skipped_and_counted(self):
        emb = fixed_embedding({"pear": [1.0, 0.0], "pair": [0.5, 0.5]})
        pairs = PunPairSet((("pear", "pair"), ("flour", "flower")))
        report = pun_eval(pairs, emb)
        assert report.n == 1
        assert report.skipped == 1

    def test_scored_pairs_sorted_descending(self):
        emb = fixed_embedding({"a": [1.0, 0.0], "b": [1.0, 0.1],
                               "c": [0.0, 1.0], "d": [1.0, 0.0]})
        pairs = PunPairSet((("a", "c"), ("a", "b"), ("a", "d")))
        scores = [c for _, _, c in pun_eval(pairs, emb).scored_pairs]
        assert scores == sorted(scores, reverse=True)

    def test_histogram_mass_equals_scored_count(self):
        rng = np.random.default_rng(21)
        words = [f"w{i}" for i in range(40)]
        emb = fixed_embedding(
            {w: rng.standard_normal(4).tolist() for w in words})
        pairs = PunPairSet(tuple((words[i], words[i + 1])
                                 for i in range(0, 40, 2)))
        report = pun_eval(pairs, emb)
        assert report.histogram.sum() == report.n == 20
        assert len(report.histogram) == 40
        assert report.bin_edges[0] == -1.0 and report.bin_edges[-1] == 1.0

    def test_raw_similarity_cross_report(self, en_lexicon, en_inventory):
        emb = fixed_embedding({"mutter": [1.0, 0.0], "mother": [0.8, 0.6],
                               "plant": [0.0, 1.0], "plans": [0.6, 0.8]})
        pairs = PunPairSet((("mutter", "mother"), ("plant", "plans")))
        report = pun_eval(pairs, emb, en_lexicon, CFG)
        raw = [word_similarity(en_lexicon.primary(a), en_lexicon.primary(b),
                               CFG, en_inventory) for a, b in pairs.pairs]
        assert report.extras["raw_similarity_mean"] == pytest.approx(
            np.mean(raw), abs=1e-12)
        assert report.extras["raw_similarity_variance"] == pytest.approx(
            np.var(raw), abs=1e-12)

    def test_summary_mentions_counts(self):
        emb = fixed_embedding({"pear": [1.0], "pair": [1.0]})
        text = pun_eval(PunPairSet((("pear", "pair"),)), emb).summary()
        assert "pairs scored = 1" in text
        assert "skipped = 0" in text


class TestRandomBaseline:
    def make(self, k, seed=33):
        rng = np.random.default_rng(seed)
        return fixed_embedding(
            {f"w{i}": rng.standard_normal(6).tolist() for i in range(k)})

    def test_seeded_rerun_identical(self, en_lexicon):
        emb = self.make(100)
        a = random_baseline(en_lexicon, emb, n=500, seed=9)
        b = random_baseline(en_lexicon, emb, n=500, seed=9)
        assert a.mean == b.mean
        assert np.array_equal(a.histogram, b.histogram)

    def test_different_seeds_differ(self, en_lexicon):
        emb = self.make(100)
        a = random_baseline(en_lexicon, emb, n=500, seed=9)
        b = random_baseline(en_lexicon, emb, n=500, seed=10)
        assert a.mean != b.mean

    def test_counts(self, en_lexicon):
        report = random_baseline(en_lexicon, self.make(50), n=200, seed=1)
        assert report.n == 200
        assert report.skipped == 0
        assert report.histogram.sum() == 200

    def test_invalid_n_rejected(self, en_lexicon):
        with pytest.raises(EvaluationError, match=">= 1"):
            random_baseline(en_lexicon, self.make(10), n=0, seed=1)

    def test_single_word_rejected(self, en_lexicon):
        with pytest.raises(EvaluationError, match="at least 2"):
            random_baseline(en_lexicon, self.make(1), n=5, seed=1)


class TestEmbeddingPreservesCorrelations:
    def test_judgment_r_survives_factorization(self, en_lexicon,
                                               sub_lexicon):
        # train only on the judgment vocabulary so the factorization has
        # capacity to spare, then compare per-set r before and after
        sets = load_bundled_judgment_sets()
        vocab = {js.standard_word for js in sets}
        for js in sets:
            vocab.update(w for w, _ in js.comparisons)
        lex = sub_lexicon(vocab)
        raw_r = vitz_eval(sets, make_similarity_scorer(lex, CFG))
        emb = train(lex, CFG, TrainConfig(dim=50, epochs=20_000,
                                          batch_size=128,
                                          learning_rate=0.02))
        emb_r = vitz_eval(sets, make_embedding_scorer(emb))
        drift = max(abs(emb_r[s] - raw_r[s]) for s in raw_r)
        assert drift <= 0.1


class TestWriters:
    def test_histogram_tsv_layout(self):
        emb = fixed_embedding({"pear": [1.0], "pair": [1.0]})
        report = pun_eval(PunPairSet((("pear", "pair"),)), emb)
        buf = io.StringIO()
        write_histogram_tsv(report, buf)
        lines = buf.getvalue().splitlines()
        assert len(lines) == 40
        assert lines[0].startswith("-1.0000\t")
        assert lines[-1].split("\t")[1] == "1.0000"
        assert sum(int(line.split("\t")[2]) for line in lines) == 1

    def test_histogram_tsv_requires_histogram(self):
        with pytest.raises(EvaluationError, match="no histogram"):
            write_histogram_tsv(EvalReport(kind="x", config="y"),
                                io.StringIO())

    def test_pairs_tsv_layout(self):
        emb = fixed_embedding({"a": [1.0, 0.0], "b": [0.6, 0.8]})
        report = pun_eval(PunPairSet((("a", "b"),)), emb)
        buf = io.StringIO()
        write_pairs_tsv(report, buf)
        assert buf.getvalue() == "a\tb\t0.6000\n"

    def test_pairs_tsv_requires_scores(self, en_lexicon):
        emb = fixed_embedding({"a": [1.0], "b": [0.5]})
        report = random_baseline(en_lexicon, emb, n=3, seed=2)
        with pytest.raises(EvaluationError, match="no per-pair"):
            write_pairs_tsv(report, io.StringIO())

    def test_sweep_tsv_layout(self):
        buf = io.StringIO()
        write_sweep_tsv([(1.0, 0.5), (2.5, 0.828478)], buf)
        assert buf.getvalue() == "1.0000\t0.500000\n2.5000\t0.828478\n"
