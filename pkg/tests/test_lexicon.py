import io

import pytest

from phonosim.lexicon import (LexiconError, parse_cmu, parse_plain,
                              serialize_plain)

CMU_SAMPLE = """\
;;; comment header
CAT  K AE1 T
CAT(1)  K AE2 T
DOG  D AO1 G
O'HARA  OW0 HH EH1 R AH0
"""


class TestParseCmu:
    def test_basic_entries(self, en_inventory):
        lex = parse_cmu(io.StringIO(CMU_SAMPLE), en_inventory)
        assert lex.lookup("cat") == [("K", "AE", "T"), ("K", "AE", "T")]
        assert lex.primary("dog") == ("D", "AO", "G")
        assert lex.entry_count == 4
        assert lex.distinct_word_count == 3

    def test_stress_digits_stripped(self, en_inventory):
        lex = parse_cmu(io.StringIO("HELLO  HH AH0 L OW1\n"), en_inventory)
        assert lex.primary("hello") == ("HH", "AH", "L", "OW")

    def test_headwords_lowercased(self, en_inventory):
        lex = parse_cmu(io.StringIO("CAT  K AE1 T\n"), en_inventory)
        assert "cat" in lex
        assert lex.word_list == ("cat",)

    def test_variant_suffix_folds_in_order(self, en_inventory):
        text = "A  AH0\nA(1)  EY1\n"
        lex = parse_cmu(io.StringIO(text), en_inventory)
        assert lex.lookup("a") == [("AH",), ("EY",)]

    def test_lookup_case_insensitive(self, en_inventory):
        lex = parse_cmu(io.StringIO(CMU_SAMPLE), en_inventory)
        assert lex.lookup("CaT") == lex.lookup("cat")

    def test_lookup_absent_and_empty(self, en_inventory):
        lex = parse_cmu(io.StringIO(CMU_SAMPLE), en_inventory)
        assert lex.lookup("zzzzqq") == []
        assert lex.lookup("") == []
        assert lex.primary("zzzzqq") is None

    def test_unknown_phoneme_collected(self, en_inventory):
        bad = "GOOD  G UH1 D\n" * 100 + "BAD  QQ9\n"
        with pytest.raises(LexiconError, match="unknown phoneme 'QQ9'"):
            # 1 bad line of 101 exceeds the 0.1% budget
            parse_cmu(io.StringIO(bad), en_inventory)

    def test_bad_line_fraction_tolerated_below_limit(self, en_inventory):
        good = "GOOD  G UH1 D\n" * 2000
        lex = parse_cmu(io.StringIO(good + "BAD QQ9\n" * 2), en_inventory)
        assert len(lex.skipped) == 2
        assert lex.entry_count == 2000

    def test_word_filter_drops_odd_headwords(self, en_inventory):
        text = "CAT  K AE1 T\n)PAREN  P EH1 R AH0 N\n"
        keep = parse_cmu(io.StringIO(text), en_inventory)
        drop = parse_cmu(io.StringIO(text), en_inventory, word_filter=True)
        assert ")paren" in keep
        assert ")paren" not in drop
        assert "cat" in drop


class TestParsePlain:
    def test_basic_line(self, toy_inventory):
        lex = parse_plain(io.StringIO("kam\tp a n\n"), toy_inventory)
        assert lex.primary("kam") == ("p", "a", "n")

    def test_comments_ignored(self, toy_inventory):
        lex = parse_plain(io.StringIO("# x\nkam\tp a\n"), toy_inventory)
        assert len(lex) == 1

    def test_duplicate_words_append(self, toy_inventory):
        text = "kam\tp a\nkam\tb a\n"
        lex = parse_plain(io.StringIO(text), toy_inventory)
        assert lex.lookup("kam") == [("p", "a"), ("b", "a")]

    def test_unknown_phoneme_fatal_when_over_budget(self, toy_inventory):
        with pytest.raises(LexiconError, match="unknown phoneme 'zz'"):
            parse_plain(io.StringIO("kam\tp zz\n"), toy_inventory)

    def test_round_trip(self, toy_inventory):
        text = "kam\tp a n\nkam\tb a\nnaa\tn a\n"
        lex = parse_plain(io.StringIO(text), toy_inventory)
        out = io.StringIO()
        serialize_plain(lex, out)
        again = parse_plain(io.StringIO(out.getvalue()), toy_inventory)
        assert again.entries == lex.entries
        assert again.word_list == lex.word_list


class TestBundledCmu:
    def test_scale(self, en_lexicon):
        assert en_lexicon.entry_count >= 130_000
        assert en_lexicon.distinct_word_count > 120_000
        assert len(en_lexicon.skipped) == 0

    def test_known_pronunciation(self, en_lexicon):
        assert en_lexicon.primary("sinking") == ("S", "IH", "NG", "K",
                                                 "IH", "NG")

    def test_word_list_order_is_row_order(self, en_lexicon):
        # first-appearance order, stable across loads
        assert en_lexicon.word_list[0] == en_lexicon.word_list[0].lower()
        assert len(en_lexicon.word_list) == en_lexicon.distinct_word_count

    def test_hindi_bundle_loads(self, en_inventory):
        from phonosim.lexicon import load_bundled_lexicon
        from phonosim.inventory import load_bundled_inventory
        hi_inv = load_bundled_inventory("hi")
        hi_lex = load_bundled_lexicon("hi", hi_inv)
        assert len(hi_lex) >= 50
        assert hi_lex.primary("kam") is not None
