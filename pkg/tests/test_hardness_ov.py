import itertools
import random

from slpkit.automata import accept_decompressed, dfa_accept
from slpkit.hardness.ovgen import (
    CODE_PATTERN,
    CODE_TEXT,
    code_distance,
    gen_dfa_from_ov,
    gen_wildcard_pm_from_kov,
    pm_to_substring_hd,
    tuplify,
    tuplify_reference,
)
from slpkit.hardness.sources import KovInstance, OvInstance, solve_source
from slpkit.matching import substring_hd, wildcard_match
from slpkit.slp import Alphabet, decompress, from_literal, stats

from helpers import vector_multisets

BIN = Alphabet.binary()


def lit(s):
    return from_literal([int(c) for c in s], BIN)


class TestTuplify:
    def test_definition_example(self):
        inst = KovInstance(((1, 1), (0, 1)), 2, 1)
        out = tuplify(inst, (1, 1), lit("0"), lit("1"))
        assert decompress(out) == [1, 0, 1, 1]

    def test_all_zero_marker(self):
        inst = KovInstance(((1, 1), (0, 1)), 2, 2)
        out = tuplify(inst, (0, 0), lit("0"), lit("1"))
        assert decompress(out) == [0] * (2 * 2 ** 2)

    def test_matches_reference_on_small_instances(self):
        rng = random.Random(0)
        for _ in range(80):
            d = rng.randrange(1, 4)
            count = rng.randrange(1, 4)
            k = rng.randrange(1, 3)
            vecs = tuple(
                tuple(rng.randrange(2) for _ in range(d)) for _ in range(count)
            )
            b = tuple(rng.randrange(2) for _ in range(d))
            z = [rng.randrange(2) for _ in range(rng.randrange(1, 3))]
            o = [rng.randrange(2) for _ in range(len(z))]
            inst = KovInstance(vecs, d, k)
            got = decompress(tuplify(inst, b, from_literal(z, BIN), from_literal(o, BIN)))
            assert got == tuplify_reference(inst, b, z, o)

    def test_offset_characterization(self):
        # a shared offset whose stripes are all zero pieces exists iff some
        # tuple completes b orthogonally
        for d in (1, 2, 3):
            for vecs in vector_multisets(d, 3):
                for k in (1, 2):
                    inst = KovInstance(vecs, d, k)
                    for b in itertools.product((0, 1), repeat=d):
                        text = decompress(tuplify(inst, b, lit("0"), lit("1")))
                        block = len(vecs) ** k
                        stripe_hit = any(
                            all(text[off + coord * block] == 0 for coord in range(d))
                            for off in range(block)
                        )
                        want = any(
                            all(
                                min((b[i],) + tuple(v[i] for v in combo)) == 0
                                for i in range(d)
                            )
                            for combo in itertools.product(vecs, repeat=k)
                        )
                        assert stripe_hit == want

    def test_size_linear_in_d_times_a(self):
        frozen_c1 = 12
        sizes = {}
        for a_count in (2, 4, 8):
            vecs = tuple(
                tuple((i >> j) & 1 for j in range(3)) for i in range(a_count)
            )
            inst = KovInstance(vecs, 3, 2)
            out = tuplify(inst, (1, 1, 1), lit("01"), lit("10"))
            sizes[a_count] = out.size
            assert out.size <= frozen_c1 * (3 * a_count + 2 + 2)
        # growth is linear in A: doubling A at most slightly more than doubles size
        assert sizes[8] <= 2.5 * sizes[4] <= 2.5 * 2.5 * sizes[2]


class TestDfaFromOv:
    def test_examples(self):
        cases = [
            (OvInstance(((1, 0),), ((0, 1),), 2), True),
            (OvInstance(((1,),), ((1,),), 1), False),
            (OvInstance(((0,),), ((0,),), 1), True),
        ]
        for inst, want in cases:
            g = gen_dfa_from_ov(inst)
            assert g.expected.accept == want
            assert dfa_accept(g.payload["text"], g.payload["automaton"]) == want

    def test_random_sweep(self):
        rng = random.Random(1)
        for _ in range(150):
            d = rng.randrange(1, 4)
            a = tuple(
                tuple(rng.randrange(2) for _ in range(d))
                for _ in range(rng.randrange(1, 4))
            )
            b = tuple(
                tuple(rng.randrange(2) for _ in range(d))
                for _ in range(rng.randrange(1, 4))
            )
            inst = OvInstance(a, b, d)
            g = gen_dfa_from_ov(inst)
            want = solve_source(inst)
            assert g.expected.accept == want
            assert dfa_accept(g.payload["text"], g.payload["automaton"]) == want
            assert (
                accept_decompressed(decompress(g.payload["text"]), g.payload["automaton"])
                == want
            )

    def test_size_bounds(self):
        for scale in (2, 4, 8):
            d = 3
            a = tuple((1,) * d for _ in range(scale))
            b = tuple((1,) * d for _ in range(scale))
            g = gen_dfa_from_ov(OvInstance(a, b, d))
            st = stats(g.payload["text"])
            assert st["N"] == scale * ((d + 1) * scale + 1)
            assert st["n"] <= 4 * d * scale + 2 * scale.bit_length() + 8
            assert g.payload["automaton"].num_states <= scale * (d + 2) + scale + 3


class TestWildcardFromKov:
    def test_examples(self):
        g = gen_wildcard_pm_from_kov(KovInstance(((1, 0), (0, 1)), 2, 2), 1, 1)
        assert g.expected.accept is True
        assert wildcard_match(g.payload["text"], g.payload["pattern"]) is True
        g = gen_wildcard_pm_from_kov(KovInstance(((1, 1),), 2, 2), 1, 1)
        assert wildcard_match(g.payload["text"], g.payload["pattern"]) is False
        g = gen_wildcard_pm_from_kov(KovInstance(((0, 0), (1, 1)), 2, 3), 1, 2)
        assert g.expected.accept is True
        assert wildcard_match(g.payload["text"], g.payload["pattern"]) is True

    def test_split_invariance(self):
        # both ways of splitting k must give the same answer
        for vecs in vector_multisets(2, 2):
            inst = KovInstance(vecs, 2, 3)
            want = solve_source(inst)
            for k1 in (1, 2):
                g = gen_wildcard_pm_from_kov(inst, k1, 3 - k1)
                assert wildcard_match(g.payload["text"], g.payload["pattern"]) == want


class TestSubstringHdReduction:
    def test_gadget_distance_table(self):
        # wildcard vs anything: 1; equal bits: 1; clashing bits: 3
        assert code_distance(2, 0) == 1 and code_distance(2, 1) == 1
        assert code_distance(0, 0) == 1 and code_distance(1, 1) == 1
        assert code_distance(0, 1) == 3 and code_distance(1, 0) == 3

    def test_codes_carry_guard(self):
        for code in list(CODE_TEXT.values()) + list(CODE_PATTERN.values()):
            assert code[3:] == (2, 3, 4)

    def test_matching_instance_hits_threshold(self):
        text = lit("0101")
        pattern = from_literal([1, 2, 1], Alphabet.from_glyphs(["0", "1", "*"]))
        inst = pm_to_substring_hd(text, pattern)
        value = substring_hd(inst.payload["text"], inst.payload["pattern"])
        assert value == inst.expected.threshold == 3
        assert inst.expected.accept is True and inst.expected.holds_for(value)

    def test_non_matching_instance_stays_above(self):
        text = lit("000")
        pattern = from_literal([1, 1], Alphabet.from_glyphs(["0", "1", "*"]))
        inst = pm_to_substring_hd(text, pattern)
        value = substring_hd(inst.payload["text"], inst.payload["pattern"])
        assert value > inst.expected.threshold
        assert inst.expected.accept is False and inst.expected.holds_for(value)
