import random

import pytest

from rewritekit.words import (
    Alphabet,
    Overlap,
    WordSyntaxError,
    alphabet,
    find_occurrences,
    overlaps,
    parse_word,
    print_word,
)

AB = alphabet("ab")
ABX = alphabet("abx")


def naive_occurrences(haystack, needle):
    return [i for i in range(len(haystack) - len(needle) + 1)
            if haystack[i:i + len(needle)] == needle]


class TestAlphabet:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Alphabet(())

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            Alphabet(("a", "a"))

    def test_rejects_multichar(self):
        with pytest.raises(ValueError):
            Alphabet(("ab",))

    def test_validate_word(self):
        assert AB.validate_word("abba") == "abba"
        with pytest.raises(WordSyntaxError):
            AB.validate_word("abc")

    def test_extend(self):
        assert AB.extend("x").letters == ("a", "b", "x")
        with pytest.raises(ValueError):
            AB.extend("a")


class TestParseWord:
    def test_literal(self):
        assert parse_word("abab", AB) == "abab"

    def test_exponents(self):
        assert parse_word("x^2b^2", ABX) == "xxbb"
        assert parse_word("a^2b^2ab^2", AB) == "aabbabb"

    def test_empty(self):
        assert parse_word("", AB) == ""

    def test_unknown_letter(self):
        with pytest.raises(WordSyntaxError):
            parse_word("abc", AB)

    def test_malformed_exponent(self):
        with pytest.raises(WordSyntaxError):
            parse_word("a^", AB)
        with pytest.raises(WordSyntaxError):
            parse_word("a^b", AB)

    def test_zero_exponent_rejected(self):
        with pytest.raises(WordSyntaxError):
            parse_word("a^0b", AB)

    def test_round_trip_random(self):
        rng = random.Random(7)
        for _ in range(500):
            w = "".join(rng.choice("abx") for _ in range(rng.randint(0, 12)))
            assert parse_word(print_word(w), ABX) == w

    def test_print_examples(self):
        assert print_word("xxb") == "x^2b"
        assert print_word("aabbabb") == "a^2b^2ab^2"
        assert print_word("") == ""


class TestFindOccurrences:
    def test_simple(self):
        assert find_occurrences("abab", "ab") == [0, 2]

    def test_overlapping(self):
        assert find_occurrences("aaa", "aa") == [0, 1]

    def test_factor_across_blocks(self):
        assert find_occurrences("xxbxxbx", "xxbx") == [0, 3]

    def test_empty_needle_rejected(self):
        with pytest.raises(ValueError):
            find_occurrences("ab", "")

    def test_matches_naive_scan(self):
        rng = random.Random(11)
        for _ in range(500):
            hay = "".join(rng.choice("ab") for _ in range(rng.randint(0, 15)))
            needle = "".join(rng.choice("ab") for _ in range(rng.randint(1, 4)))
            assert find_occurrences(hay, needle) == naive_occurrences(hay, needle)


class TestOverlaps:
    def test_self_overlap(self):
        assert overlaps("abab", "abab") == [Overlap("suffix_prefix", 2)]

    def test_no_self_overlap(self):
        assert overlaps("ababb", "ababb") == []

    def test_no_shared_boundary(self):
        assert overlaps("ab", "b") == []
        assert overlaps("ab", "aa") == []

    def test_one_letter_staircase(self):
        # suffix "b" of ab equals prefix "b" of ba: the word aba reduces two ways
        assert overlaps("ab", "ba") == [Overlap("suffix_prefix", 1)]

    def test_interior_containment(self):
        assert Overlap("containment", 1) in overlaps("aba", "b")

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            overlaps("", "a")

    def test_exhaustive_scan_agreement(self):
        rng = random.Random(13)
        for _ in range(300):
            u = "".join(rng.choice("ab") for _ in range(rng.randint(1, 8)))
            v = "".join(rng.choice("ab") for _ in range(rng.randint(1, 8)))
            expected = [Overlap("suffix_prefix", t)
                        for t in range(1, min(len(u), len(v)))
                        if u[len(u) - t:] == v[:t]]
            if len(v) < len(u):
                expected += [Overlap("containment", p)
                             for p in naive_occurrences(u, v)
                             if 0 < p and p + len(v) < len(u)]
            assert overlaps(u, v) == expected

    def test_relator_self_overlap_matches_classification(self):
        # a^A b^B a^C b^D overlaps itself iff B >= D and C >= A
        from rewritekit import Case, classify

        for a in range(1, 5):
            for b in range(1, 5):
                for g in range(1, 5):
                    for d in range(1, 5):
                        tag, params = classify(a, b, g, d)
                        has_overlap = bool(overlaps(params.relator, params.relator))
                        assert has_overlap == (tag.variant != Case.NO_OVERLAP)
