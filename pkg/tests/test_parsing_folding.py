import random

import pytest

from slpkit.errors import TooLarge, UndeclaredSymbol
from slpkit.parsing_folding import (
    Cfg,
    PairedAlphabet,
    cfg_recognize,
    cyk_recognize,
    emit_cfg,
    emit_pairing,
    expand_weighted,
    fold_exhaustive,
    parse_cfg,
    parse_pairing,
    rna_fold,
    wrna_fold,
)
from slpkit.slp import Alphabet

AB = Alphabet.from_glyphs(["a", "b"])


def anbn_grammar():
    # S -> a S b | epsilon
    return Cfg.from_dict(AB, "S", {"S": [(0, "S", 1), ()]})


def seq(glyph_string, alphabet):
    return [alphabet.symbol_of(c) for c in glyph_string]


class TestCfg:
    def test_balanced_pairs(self):
        assert cfg_recognize(seq("aabb", AB), anbn_grammar())

    def test_unbalanced_rejected(self):
        assert not cfg_recognize(seq("abab", AB), anbn_grammar())

    def test_empty_string(self):
        assert cfg_recognize([], anbn_grammar())

    def test_undeclared_symbol(self):
        with pytest.raises(UndeclaredSymbol):
            cfg_recognize([5], anbn_grammar())

    def test_long_bodies_and_epsilon(self):
        # S -> A A A; A -> a | epsilon
        g = Cfg.from_dict(AB, "S", {"S": [("A", "A", "A")], "A": [(0,), ()]})
        assert cfg_recognize([], g)
        assert cfg_recognize(seq("a", AB), g)
        assert cfg_recognize(seq("aaa", AB), g)
        assert not cfg_recognize(seq("aaaa", AB), g)
        assert not cfg_recognize(seq("b", AB), g)

    def _random_cfg(self, rng):
        nts = ["S", "A", "B"][: rng.randrange(1, 4)]
        rules = {}
        for nt in nts:
            bodies = []
            for _ in range(rng.randrange(1, 4)):
                body = []
                for _ in range(rng.randrange(0, 4)):
                    if rng.random() < 0.5:
                        body.append(rng.randrange(2))
                    else:
                        body.append(rng.choice(nts))
                bodies.append(tuple(body))
            rules[nt] = bodies
        return Cfg.from_dict(AB, "S", rules)

    def test_earley_matches_cyk_on_random(self):
        rng = random.Random(0)
        done = 0
        while done < 220:
            g = self._random_cfg(rng)
            length = rng.randrange(0, 14) if done % 4 else rng.randrange(20, 61)
            text = [rng.randrange(2) for _ in range(length)]
            assert cfg_recognize(text, g) == cyk_recognize(text, g), (g, text)
            done += 1

    def test_grammar_file_roundtrip(self):
        g = anbn_grammar()
        text = emit_cfg(g)
        again = parse_cfg(text)
        assert emit_cfg(again) == text
        assert cfg_recognize(seq("ab", AB), again)


def simple_pairing():
    # a <-> A, b <-> B
    alpha = Alphabet.from_glyphs(["a", "A", "b", "B"])
    return PairedAlphabet.unweighted(alpha, (1, 0, 3, 2))


PA = simple_pairing()


def pa_seq(s):
    return [PA.alphabet.symbol_of(c) for c in s]


class TestRnaFold:
    def test_single_pair(self):
        assert rna_fold(pa_seq("aA"), PA) == 1

    def test_nested(self):
        assert rna_fold(pa_seq("aaAA"), PA) == 2

    def test_crossing_blocked(self):
        assert rna_fold(pa_seq("abAB"), PA) == 1

    def test_disjoint(self):
        assert rna_fold(pa_seq("aAbB"), PA) == 2

    def test_matches_exhaustive(self):
        rng = random.Random(1)
        for trial in range(120):
            n = 14 if trial < 3 else rng.randrange(0, 15)
            text = [rng.randrange(4) for _ in range(n)]
            assert rna_fold(text, PA) == fold_exhaustive(text, PA)

    def test_reverse_symmetry(self):
        rng = random.Random(2)
        for _ in range(60):
            text = [rng.randrange(4) for _ in range(rng.randrange(0, 40))]
            flipped = [PA.partner[s] for s in reversed(text)]
            assert rna_fold(text, PA) == rna_fold(flipped, PA)

    def test_cap(self):
        with pytest.raises(TooLarge):
            rna_fold([0] * 10, PA, max_len=5)


class TestWeighted:
    def weighted_pairing(self, w):
        alpha = Alphabet.from_glyphs(["a", "A", "b", "B"])
        return PairedAlphabet(alpha, (1, 0, 3, 2), w)

    def test_weight_one_equals_unweighted(self):
        rng = random.Random(3)
        for _ in range(40):
            text = [rng.randrange(4) for _ in range(rng.randrange(0, 25))]
            assert wrna_fold(text, PA) == rna_fold(text, PA)

    def test_weight_three(self):
        p = self.weighted_pairing((3, 3, 3, 3))
        assert wrna_fold(pa_seq("aA"), p) == 3
        assert expand_weighted(pa_seq("aA"), p) == [0, 0, 0, 1, 1, 1]
        assert rna_fold(expand_weighted(pa_seq("aA"), p), p) == 3

    def test_expansion_route_agrees(self):
        rng = random.Random(4)
        for trial in range(210):
            w_a = rng.randrange(1, 5)
            w_b = rng.randrange(1, 5)
            p = self.weighted_pairing((w_a, w_a, w_b, w_b))
            # mostly short strings, a couple pushing the expansion near 2000
            n = rng.randrange(0, 60) if trial > 1 else 1900 // max(w_a, w_b)
            text = [rng.randrange(4) for _ in range(n)]
            assert len(expand_weighted(text, p)) <= 2000
            direct = wrna_fold(text, p, via_expansion=True)  # raises on mismatch
            assert direct == rna_fold(expand_weighted(text, p), p)

    def test_weighted_matches_exhaustive(self):
        rng = random.Random(5)
        for _ in range(80):
            w = rng.randrange(1, 4)
            p = self.weighted_pairing((w, w, 1, 1))
            text = [rng.randrange(4) for _ in range(rng.randrange(0, 11))]
            assert wrna_fold(text, p) == fold_exhaustive(text, p, weighted=True)


def test_pairing_file_roundtrip():
    alpha = Alphabet.from_glyphs(["a", "A", "b", "B"])
    p = PairedAlphabet(alpha, (1, 0, 3, 2), (2, 2, 1, 1))
    text = emit_pairing(p)
    again = parse_pairing(text)
    assert again == p
    assert emit_pairing(again) == text
