import random

import pytest

from slpkit.errors import AlphabetMismatch, PatternLongerThanText
from slpkit.matching import (
    CostFn,
    MatchResult,
    brute_force_gpm,
    emit_costs,
    gpm_compressed,
    gpm_decompressed,
    parse_costs,
    substring_hd,
    wildcard_match,
)
from slpkit.slp import Alphabet, decompress, from_literal, repeat

from helpers import random_slp

BIN = Alphabet.binary()
HAM = CostFn.hamming(BIN)


def bits(s):
    return [int(c) for c in s]


def wc(s):
    # 0, 1, * over the wildcard-extended binary alphabet
    return [{"0": 0, "1": 1, "*": 2}[c] for c in s]


WILD = Alphabet.from_glyphs(["0", "1", "*"])


class TestDecompressed:
    def test_basic(self):
        r = gpm_decompressed(bits("0101"), bits("11"), HAM)
        assert r.min_cost == 1 and r.best_offset == 0

    def test_identity(self):
        t = bits("011010")
        assert gpm_decompressed(t, t, HAM) == MatchResult(0, 0)

    def test_wildcard_row(self):
        cost = CostFn.wildcard_hamming(BIN)
        r = gpm_decompressed(bits("0110"), [2], cost)
        assert r.min_cost == 0 and r.best_offset == 0

    def test_pattern_longer_than_text(self):
        with pytest.raises(PatternLongerThanText):
            gpm_decompressed(bits("01"), bits("011"), HAM)

    def test_matches_brute_force(self):
        rng = random.Random(0)
        for _ in range(150):
            n = rng.randrange(1, 60)
            m = rng.randrange(1, n + 1)
            t = [rng.randrange(2) for _ in range(n)]
            p = [rng.randrange(2) for _ in range(m)]
            assert gpm_decompressed(t, p, HAM) == brute_force_gpm(t, p, HAM)

    def test_fft_route_agrees(self, monkeypatch):
        import slpkit.matching as m

        rng = random.Random(1)
        t = [rng.randrange(2) for _ in range(500)]
        p = [rng.randrange(2) for _ in range(40)]
        expected = gpm_decompressed(t, p, HAM)
        monkeypatch.setattr(m, "_DIRECT_CONV_CELLS", 1)
        assert gpm_decompressed(t, p, HAM) == expected


class TestCompressed:
    def test_literal_text(self):
        r = gpm_compressed(from_literal(bits("0101"), BIN), bits("11"), HAM)
        assert r.min_cost == 1 and r.best_offset == 0

    def test_repeat_text(self):
        slp = repeat(from_literal(bits("01"), BIN), 8)
        r = gpm_compressed(slp, bits("11"), HAM)
        assert r == gpm_decompressed(decompress(slp), bits("11"), HAM)
        assert r.min_cost == 1

    def test_all_wildcards(self):
        cost = CostFn.wildcard_hamming(BIN)
        slp = repeat(from_literal(bits("01"), BIN), 6)
        r = gpm_compressed(slp, [2, 2, 2], cost)
        assert r.min_cost == 0 and r.best_offset == 0

    def test_agrees_with_decompressed_on_random(self):
        rng = random.Random(2)
        for _ in range(300):
            slp = random_slp(rng, BIN, rng.randrange(2, 30), 3000)
            text = decompress(slp)
            m = rng.randrange(1, len(text) + 1)
            p = [rng.randrange(2) for _ in range(m)]
            assert gpm_compressed(slp, p, HAM) == gpm_decompressed(text, p, HAM)

    def test_monotone_under_constant_shift(self):
        rng = random.Random(3)
        for _ in range(40):
            slp = random_slp(rng, BIN, 15, 500)
            m = rng.randrange(1, slp.length + 1)
            p = [rng.randrange(2) for _ in range(m)]
            base = gpm_compressed(slp, p, HAM)
            shift = rng.randrange(1, 4)
            shifted = CostFn(
                BIN, BIN, tuple(tuple(c + shift for c in row) for row in HAM.table)
            )
            r = gpm_compressed(slp, p, shifted)
            assert r.min_cost == base.min_cost + m * shift
            assert r.best_offset == base.best_offset

    def test_memo_isolation(self):
        slp = repeat(from_literal(bits("0110"), BIN), 4)
        p = bits("110")
        assert gpm_compressed(slp, p, HAM) == gpm_compressed(slp, p, HAM)


class TestWildcardMatch:
    def test_positive(self):
        t = from_literal(bits("0101"), BIN)
        p = from_literal(wc("1*1"), WILD)
        assert wildcard_match(t, p) is True

    def test_all_stars(self):
        t = from_literal(bits("000"), BIN)
        p = from_literal(wc("**"), WILD)
        assert wildcard_match(t, p) is True

    def test_negative(self):
        t = from_literal(bits("000"), BIN)
        p = from_literal(wc("11"), WILD)
        assert wildcard_match(t, p) is False

    def test_against_direct_scanner(self):
        rng = random.Random(4)
        for _ in range(200):
            slp = random_slp(rng, BIN, 12, 400)
            text = decompress(slp)
            m = rng.randrange(1, min(8, len(text)) + 1)
            pat = [rng.choice([0, 1, 2]) for _ in range(m)]
            naive = any(
                all(p == 2 or p == t for p, t in zip(pat, text[o:]))
                for o in range(len(text) - m + 1)
            )
            assert wildcard_match(slp, from_literal(pat, WILD)) == naive


class TestSubstringHd:
    def test_basic(self):
        assert substring_hd(from_literal(bits("0101"), BIN), from_literal(bits("0011"), BIN)) == 2

    def test_substring(self):
        assert substring_hd(from_literal(bits("0110"), BIN), from_literal(bits("11"), BIN)) == 0

    def test_all_mismatch(self):
        assert substring_hd(from_literal(bits("1111"), BIN), from_literal(bits("00"), BIN)) == 2

    def test_alphabet_mismatch(self):
        with pytest.raises(AlphabetMismatch):
            substring_hd(from_literal(bits("01"), BIN), from_literal([0], Alphabet(3)))


def test_cost_file_roundtrip():
    cost = CostFn.wildcard_hamming(BIN)
    again = parse_costs(emit_costs(cost))
    assert again.table == cost.table and again.wildcard == cost.wildcard
    assert emit_costs(again) == emit_costs(cost)
