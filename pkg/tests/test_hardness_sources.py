import pytest

from slpkit.errors import TooLarge
from slpkit.hardness.instances import Expected, GeneratedInstance, read_bundle, write_bundle
from slpkit.hardness.sources import (
    Graph,
    KovInstance,
    KsumInstance,
    OvInstance,
    emit_source,
    parse_source,
    solve_source,
)
from slpkit.slp import Alphabet, from_literal


class TestSolveSource:
    def test_ov_orthogonal_pair(self):
        assert solve_source(OvInstance(((1, 0),), ((0, 1),), 2)) is True

    def test_ov_negative(self):
        assert solve_source(OvInstance(((1,),), ((1,),), 1)) is False

    def test_zero_vector_orthogonal_to_everything(self):
        assert solve_source(OvInstance(((0,),), ((0,),), 1)) is True

    def test_triangle(self):
        g = Graph(3, frozenset([(0, 1), (1, 2), (0, 2)]))
        assert solve_source(g, 3) is True
        assert solve_source(g, 4) is False

    def test_ksum_with_repetition(self):
        inst = KsumInstance((1, 2), 4, 3, 2)
        assert solve_source(inst) is True  # 1 + 1 + 2
        assert solve_source(KsumInstance((1, 2), 100, 3, 2)) is False

    def test_kov(self):
        assert solve_source(KovInstance(((1, 0), (0, 1)), 2, 2)) is True
        assert solve_source(KovInstance(((1, 1),), 2, 2)) is False

    def test_graph_needs_k(self):
        with pytest.raises(ValueError):
            solve_source(Graph(2))

    def test_caps(self):
        with pytest.raises(TooLarge):
            solve_source(Graph(13), 3)


class TestSourceIo:
    @pytest.mark.parametrize(
        "inst",
        [
            OvInstance(((1, 0), (1, 1)), ((0, 1),), 2),
            KovInstance(((1, 0), (0, 1), (1, 1)), 2, 3),
            Graph(4, frozenset([(0, 1), (2, 3)])),
            KsumInstance((0, 2, 4), 6, 3, 4),
        ],
    )
    def test_roundtrip(self, inst):
        text = emit_source(inst)
        assert parse_source(text) == inst
        assert emit_source(parse_source(text)) == text

    def test_compact_bit_rows(self):
        inst = parse_source("kov 3 2\n101\n010\n")
        assert inst.vectors == ((1, 0, 1), (0, 1, 0))


class TestBundles:
    def test_roundtrip(self, tmp_path):
        inst = GeneratedInstance(
            payload={"text": from_literal([0, 1, 1], Alphabet.binary())},
            expected=Expected(accept=True, threshold=7, direction="ge"),
            provenance={"kind": "demo", "alpha": "3"},
        )
        write_bundle(inst, tmp_path / "b")
        again = read_bundle(tmp_path / "b")
        assert again.payload["text"] == inst.payload["text"]
        assert again.expected == inst.expected
        assert again.provenance == {"kind": "demo", "alpha": "3"}
        assert again.certified

    def test_bit_exact_rewrite(self, tmp_path):
        inst = GeneratedInstance(
            payload={"pattern": from_literal([1, 0], Alphabet.binary())},
            expected=Expected(accept=False),
            provenance={"kind": "demo"},
            certified=False,
        )
        write_bundle(inst, tmp_path / "one")
        again = read_bundle(tmp_path / "one")
        assert not again.certified
        write_bundle(again, tmp_path / "two")
        for name in ("payload.pattern.slp", "expected.txt", "provenance.txt"):
            assert (tmp_path / "one" / name).read_text() == (tmp_path / "two" / name).read_text()

    def test_expected_decide(self):
        exp = Expected(accept=True, threshold=10, direction="ge")
        assert exp.decide(11) and exp.holds_for(11)
        assert not exp.decide(9)
        assert not exp.holds_for(9)
