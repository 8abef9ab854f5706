import random

import pytest

from slpkit.automata import accept_decompressed, nfa_accept
from slpkit.errors import NoHalfClique, WeightBoundViolated
from slpkit.hardness.cliquegen import (
    adjacency_rule,
    gen_cfg_from_clique,
    gen_nfa_from_clique,
    gen_rna_from_clique,
    gen_subsequence_from_clique,
    membership_rule,
    rna_guard,
    rna_pairing,
    rna_symbol,
    tuple_at,
)
from slpkit.hardness.sources import Graph, solve_source
from slpkit.parsing_folding import cfg_recognize, wrna_fold
from slpkit.seqcmp import subsequence_decompressed, subsequence_recursive
from slpkit.slp import RuleBuilder, decompress

from helpers import all_graphs


def complete(v):
    return Graph(v, frozenset((i, j) for i in range(v) for j in range(i + 1, v)))


C5 = Graph(5, frozenset([(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]))


class TestIndicatorRules:
    def test_membership_positions(self):
        from slpkit.slp import Alphabet

        for subset in [{0, 1}, {2}, set()]:
            for k in (1, 2, 3):
                rb = RuleBuilder(Alphabet.binary())
                one, zero = rb.terminal(1), rb.terminal(0)
                rule = membership_rule(rb, 3, k, subset, one, zero, {})
                text = decompress(rb.build(rule))
                for idx in range(3 ** k):
                    tup = tuple_at(3, k, idx)
                    assert text[idx] == int(subset <= set(tup)), (subset, k, idx)

    def test_adjacency_positions(self):
        from slpkit.slp import Alphabet

        g = Graph(4, frozenset([(0, 1), (1, 2), (0, 3)]))
        for v in range(4):
            for k in (1, 2):
                rb = RuleBuilder(Alphabet.binary())
                one, zero = rb.terminal(1), rb.terminal(0)
                rule = adjacency_rule(rb, g, k, v, one, zero, {})
                text = decompress(rb.build(rule))
                for idx in range(4 ** k):
                    tup = tuple_at(4, k, idx)
                    want = int(all(g.has_edge(u, v) for u in tup))
                    assert text[idx] == want


class TestNfaFromClique:
    def test_examples(self):
        k4 = complete(4)
        inst = gen_nfa_from_clique(k4, 1, 1)
        assert inst.expected.accept is True
        assert nfa_accept(inst.payload["text"], inst.payload["automaton"]) is True

        missing = Graph(4, frozenset([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]))
        inst = gen_nfa_from_clique(missing, 1, 1)
        assert nfa_accept(inst.payload["text"], inst.payload["automaton"]) is False

        p4 = Graph(4, frozenset([(0, 1), (1, 2), (2, 3)]))
        inst = gen_nfa_from_clique(p4, 1, 1)
        assert nfa_accept(inst.payload["text"], inst.payload["automaton"]) is False

    def test_sweep_all_small_graphs(self):
        for g in all_graphs(4):
            inst = gen_nfa_from_clique(g, 1, 1)
            want = solve_source(g, 4)
            assert inst.expected.accept == want
            got = nfa_accept(inst.payload["text"], inst.payload["automaton"])
            assert got == want, sorted(g.edges)
            assert (
                accept_decompressed(decompress(inst.payload["text"]), inst.payload["automaton"])
                == want
            )

    def test_larger_parts(self):
        g = complete(6)
        inst = gen_nfa_from_clique(g, 1, 2)  # k = 5
        assert nfa_accept(inst.payload["text"], inst.payload["automaton"]) is True
        g = C5
        inst = gen_nfa_from_clique(g, 1, 2)
        assert nfa_accept(inst.payload["text"], inst.payload["automaton"]) is False

    def test_size_growth(self):
        qs = {}
        for v in (3, 4, 6):
            inst = gen_nfa_from_clique(complete(v), 1, 1)
            qs[v] = inst.payload["automaton"].num_states
            width = max(1, (v - 1).bit_length())
            assert qs[v] <= 8 * v * v * width + 2 * v + 2


class TestCfgFromClique:
    def test_triangle_member(self):
        inst = gen_cfg_from_clique(complete(3), 1)
        assert cfg_recognize(decompress(inst.payload["text"]), inst.payload["grammar"])

    def test_triangle_free_non_member(self):
        inst = gen_cfg_from_clique(C5, 1)
        assert not cfg_recognize(decompress(inst.payload["text"]), inst.payload["grammar"])

    def test_sweep_all_small_graphs(self):
        for g in all_graphs(4):
            inst = gen_cfg_from_clique(g, 1)
            want = solve_source(g, 3)
            assert inst.expected.accept == want
            got = cfg_recognize(decompress(inst.payload["text"]), inst.payload["grammar"])
            assert got == want, sorted(g.edges)

    def test_grammar_size_logarithmic(self):
        sizes = {}
        for v in (3, 6, 12):
            inst = gen_cfg_from_clique(complete(v), 1)
            sizes[v] = inst.payload["grammar"].size
        assert sizes[12] <= sizes[3] + 40  # grows like log V, not V

    def test_text_slp_size_cubic(self):
        for v in (3, 5, 7):
            inst = gen_cfg_from_clique(complete(v), 2)
            assert inst.payload["text"].size <= 40 * v ** 3 + 200


class TestRnaGuard:
    def test_single_cell_pair(self):
        pairing = rna_pairing(1 * 2)
        grid = [[[rna_symbol(0, False, 1), rna_symbol(0, True, 1)]]]
        text, rho = rna_guard(grid, pairing)
        assert rho == (8 * 1 + 12) * 1 * 1 * 2
        assert wrna_fold(text, pairing) == rho + 1

    def test_empty_grid_cells(self):
        pairing = rna_pairing(2 * 2)
        grid = [[[], []], [[], []]]
        text, rho = rna_guard(grid, pairing)
        assert rho == 224
        assert wrna_fold(text, pairing) == rho

    def test_budget_enforced(self):
        pairing = rna_pairing(1 * 1)
        grid = [[[rna_symbol(0, False, 1)] * 2]]
        with pytest.raises(WeightBoundViolated):
            rna_guard(grid, pairing)

    def test_column_choice_identity(self):
        rng = random.Random(0)
        for _ in range(60):
            a_count = rng.randrange(1, 3)
            b_count = rng.randrange(1, 3)
            w = 2
            pairing = rna_pairing(a_count * w)
            grid = [
                [
                    [rna_symbol(rng.randrange(3), False, 1)]
                    if rng.random() < 0.7
                    else []
                    for _ in range(b_count)
                ]
                for _ in range(a_count)
            ]
            flank1 = [rna_symbol(rng.randrange(3), True, 1) for _ in range(rng.randrange(4))]
            flank2 = [rna_symbol(rng.randrange(3), True, 1) for _ in range(rng.randrange(4))]
            text, rho = rna_guard(grid, pairing)
            lhs = wrna_fold(flank1 + text + flank2, pairing)
            rhs = rho + max(
                wrna_fold(
                    flank1 + [s for a in range(a_count) for s in grid[a][b]] + flank2,
                    pairing,
                )
                for b in range(b_count)
            )
            assert lhs == rhs


class TestRnaFromClique:
    def test_sweep_all_tiny_graphs(self):
        for g in all_graphs(3):
            inst = gen_rna_from_clique(g, 1)
            text = decompress(inst.payload["text"])
            value = wrna_fold(text, inst.payload["pairing"], max_len=100000)
            assert inst.expected.holds_for(value), sorted(g.edges)

    def test_threshold_formula(self):
        inst = gen_rna_from_clique(complete(3), 1)
        rho = int(inst.provenance["rho"])
        assert inst.expected.threshold == 3 * rho + 6 * 3 + 3 * 0
        assert inst.expected.direction == "ge"

    def test_alphabet_is_48(self):
        inst = gen_rna_from_clique(complete(3), 1)
        assert inst.payload["pairing"].alphabet.size == 48


class TestSubsequenceFromClique:
    def test_examples(self):
        inst = gen_subsequence_from_clique(complete(4), 4)
        assert inst.expected.accept is True
        assert subsequence_recursive(inst.payload["pattern"], inst.payload["text"])

        missing = Graph(4, frozenset([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]))
        inst = gen_subsequence_from_clique(missing, 4)
        assert inst.expected.accept is False
        assert not subsequence_recursive(inst.payload["pattern"], inst.payload["text"])

        inst = gen_subsequence_from_clique(complete(5), 4)
        assert subsequence_recursive(inst.payload["pattern"], inst.payload["text"])

    def test_no_half_clique(self):
        with pytest.raises(NoHalfClique):
            gen_subsequence_from_clique(Graph(3), 4)

    def test_sweep_small_graphs(self):
        for g in all_graphs(4):
            try:
                inst = gen_subsequence_from_clique(g, 4)
            except NoHalfClique:
                assert not solve_source(g, 4)
                continue
            want = solve_source(g, 4)
            assert inst.expected.accept == want
            got = subsequence_decompressed(
                decompress(inst.payload["pattern"]), decompress(inst.payload["text"])
            )
            assert got == want, sorted(g.edges)

    def test_size_growth(self):
        # text length O(V^(k+1)), compressed size O(V^(k/2+1)) for k = 4
        for v in (4, 6, 8):
            inst = gen_subsequence_from_clique(complete(v), 4)
            assert inst.payload["text"].length <= 30 * v ** 5
            assert inst.payload["text"].size <= 60 * v ** 3
            assert inst.payload["pattern"].length <= 30 * v ** 4
            assert inst.payload["pattern"].size <= 60 * v ** 2


class TestPaddingKnobs:
    def test_padding_preserves_answers(self):
        from slpkit.automata import dfa_accept
        from slpkit.hardness.ovgen import gen_dfa_from_ov, gen_wildcard_pm_from_kov
        from slpkit.hardness.sources import KovInstance, OvInstance
        from slpkit.matching import wildcard_match

        ov = OvInstance(((1, 0), (1, 1)), ((0, 1),), 2)
        plain = gen_dfa_from_ov(ov)
        padded = gen_dfa_from_ov(ov, pad_text_length=37, pad_slp_size=11, pad_states=5)
        assert padded.payload["text"].length == plain.payload["text"].length + 37
        assert padded.payload["text"].size >= plain.payload["text"].size + 11
        assert padded.payload["automaton"].num_states >= plain.payload["automaton"].num_states + 5
        assert dfa_accept(padded.payload["text"], padded.payload["automaton"]) == plain.expected.accept

        for vecs in [((1, 0), (0, 1)), ((1, 1),)]:
            kov = KovInstance(vecs, 2, 2)
            plain = gen_wildcard_pm_from_kov(kov, 1, 1)
            padded = gen_wildcard_pm_from_kov(kov, 1, 1, pad_text_length=23, pad_slp_size=4)
            assert (
                wildcard_match(padded.payload["text"], padded.payload["pattern"])
                == plain.expected.accept
            )

        for g in (complete(4), Graph(4, frozenset([(0, 1), (1, 2), (2, 3)]))):
            plain = gen_nfa_from_clique(g, 1, 1)
            padded = gen_nfa_from_clique(g, 1, 1, pad_text_length=19, pad_states=3, pad_slp_size=2)
            assert (
                nfa_accept(padded.payload["text"], padded.payload["automaton"])
                == plain.expected.accept
            )

        for g in (complete(3), C5):
            plain = gen_cfg_from_clique(g, 1)
            padded = gen_cfg_from_clique(g, 1, pad_text_length=15, pad_slp_size=3)
            got = cfg_recognize(decompress(padded.payload["text"]), padded.payload["grammar"])
            assert got == plain.expected.accept

        for g in (complete(4), complete(5)):
            plain = gen_subsequence_from_clique(g, 4)
            padded = gen_subsequence_from_clique(g, 4, pad_text_length=29, pad_slp_size=2)
            got = subsequence_recursive(padded.payload["pattern"], padded.payload["text"])
            assert got == plain.expected.accept


class TestBundleRoundTrips:
    def test_real_instances_roundtrip(self, tmp_path):
        from slpkit.hardness.instances import read_bundle, write_bundle
        from slpkit.hardness.ksumgen import gen_disjointness_from_ksum
        from slpkit.hardness.ovgen import gen_dfa_from_ov
        from slpkit.hardness.sources import KsumInstance, OvInstance

        g3 = complete(3)
        instances = [
            gen_dfa_from_ov(OvInstance(((1, 0),), ((0, 1),), 2)),
            gen_nfa_from_clique(g3, 1, 1),
            gen_cfg_from_clique(g3, 1),
            gen_rna_from_clique(g3, 1),
            gen_subsequence_from_clique(complete(4), 4),
            gen_disjointness_from_ksum(KsumInstance((1, 2), 4, 3, 2), 1),
        ]
        for i, inst in enumerate(instances):
            d1 = tmp_path / f"a{i}"
            d2 = tmp_path / f"b{i}"
            write_bundle(inst, d1)
            again = read_bundle(d1)
            assert again.expected == inst.expected
            assert set(again.payload) == set(inst.payload)
            write_bundle(again, d2)
            for f1 in sorted(d1.iterdir()):
                assert f1.read_text() == (d2 / f1.name).read_text()
