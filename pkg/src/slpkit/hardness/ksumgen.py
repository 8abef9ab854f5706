"""Disjointness gadgets and the k-SUM sourced disjointness generator.

The two symbol substitutions turn disjointness of bit-strings into a
subsequence test and a Hamming-distance threshold; the k-SUM generator builds
two unit-impulse trains whose shared 1-position encodes a (2k+1)-term sum.
"""

from __future__ import annotations

from ..errors import NonBinaryAlphabet, UnequalLength
from ..slp import Alphabet, RuleBuilder, Slp, substitute
from .instances import Expected, GeneratedInstance
from .sources import KsumInstance, solve_source, source_digest

BIN = Alphabet.binary()

# pattern/text symbol codes; "10" can absorb one extra symbol, "0" cannot
SUBSEQ_PATTERN = {0: (0,), 1: (1, 0)}
SUBSEQ_TEXT = {0: (1, 0), 1: (0,)}

# per-position codes at Hamming distance 1 except for the 1/1 clash at 3
HAMMING_PATTERN = {0: (0, 1, 1), 1: (0, 0, 0)}
HAMMING_TEXT = {0: (0, 0, 1), 1: (1, 1, 1)}


def _check_pair(slp_pattern: Slp, slp_text: Slp):
    if slp_pattern.length != slp_text.length:
        raise UnequalLength(
            f"lengths differ: {slp_pattern.length} vs {slp_text.length}"
        )
    for s in (slp_pattern, slp_text):
        if s.alphabet.size != 2:
            raise NonBinaryAlphabet("disjointness gadgets need bit-strings")


def disj_to_subsequence(slp_pattern: Slp, slp_text: Slp):
    """Substituted pair: pattern embeds in text iff the bit-strings are disjoint."""
    _check_pair(slp_pattern, slp_text)
    return (
        substitute(slp_pattern, SUBSEQ_PATTERN, BIN),
        substitute(slp_text, SUBSEQ_TEXT, BIN),
    )


def disj_to_hamming(slp_pattern: Slp, slp_text: Slp):
    """Substituted pair plus threshold: distance exceeds it iff the strings intersect."""
    _check_pair(slp_pattern, slp_text)
    return (
        substitute(slp_pattern, HAMMING_PATTERN, BIN),
        substitute(slp_text, HAMMING_TEXT, BIN),
        slp_pattern.length,
    )


def _impulse_train(rb: RuleBuilder, offsets, block: int, levels: int, base_rule: int,
                   base_len: int):
    """Nested the-same-shape-at-every-scale construction.

    Level i >= 1 concatenates, for every offset o, the previous level shifted
    right by o inside a block of size block * r**(i-1), zero-padded; the last
    copy is left unpadded so the caller can pad once at the end.
    """
    zero = rb.terminal(0)
    cur, cur_len = base_rule, base_len
    r = len(offsets)
    for level in range(1, levels + 1):
        span = block * r ** (level - 1)
        parts = []
        for w, off in enumerate(offsets):
            piece = []
            if off:
                piece.append(rb.power(zero, off))
            piece.append(cur)
            if w < r - 1:
                pad = span - off - cur_len
                if pad:
                    piece.append(rb.power(zero, pad))
            parts.append(rb.chain(piece))
        cur = rb.chain(parts)
        cur_len = (r - 1) * span + offsets[-1] + cur_len
    return cur, cur_len


def gen_disjointness_from_ksum(inst: KsumInstance, k: int) -> GeneratedInstance:
    """Bit-string pair sharing a 1-position iff 2k+1 values sum to the target.

    Values are rescaled so the two derived sets B (k-fold sums, pattern side)
    and C (k+1-fold sums, text side) are integral; the pattern puts one 1 per
    k-tuple of B at the tuple-sum offset, the text marks every value of C
    shifted by each k-tuple of C.
    """
    if inst.arity != 2 * k + 1:
        raise ValueError(f"instance arity {inst.arity} does not equal 2k+1 = {2 * k + 1}")
    scale = k * (k + 1)
    values = [v * scale for v in inst.values]
    target = inst.target * scale
    bound = max(inst.bound, 1) * scale
    b_set = sorted(target // k + bound - v for v in values)
    c_set = sorted(bound * k // (k + 1) + v for v in values)
    r = len(values)
    block = max(2 * bound, 10 * k * max(b_set + c_set) + 1)

    prb = RuleBuilder(BIN)
    zero, one = prb.terminal(0), prb.terminal(1)
    core, core_len = _impulse_train(prb, b_set, block, k, one, 1)
    pad = block * r ** k - core_len
    if pad:
        core = prb.concat(core, prb.power(zero, pad))
    pattern = prb.build(prb.power(core, r ** k))

    trb = RuleBuilder(BIN)
    t_zero, t_one = trb.terminal(0), trb.terminal(1)
    # one block holding a 1 at position c+1 for every c in the derived set
    runs = []
    prev = 0
    for c in c_set:
        gap = c - prev
        if gap:
            runs.append(trb.power(t_zero, gap))
        runs.append(t_one)
        prev = c + 1
    marks = trb.chain(runs)
    marks_len = c_set[-1] + 1
    reps = r ** k
    if reps > 1:
        padded = trb.chain([marks, trb.power(t_zero, block - marks_len)])
        base = trb.chain([trb.power(padded, reps - 1), marks])
    else:
        base = marks
    base_len = (reps - 1) * block + marks_len
    core_t, core_t_len = _impulse_train(trb, c_set, block * reps, k, base, base_len)
    pad_t = block * r ** (2 * k) - core_t_len
    if pad_t:
        core_t = trb.concat(core_t, trb.power(t_zero, pad_t))
    text = trb.build(core_t)

    answer_sum = solve_source(inst)
    return GeneratedInstance(
        payload={"pattern": pattern, "text": text},
        expected=Expected(accept=not answer_sum),  # disjoint iff no sum
        provenance={
            "source": source_digest(inst),
            "kind": "disjointness-ksum",
            "k": k,
            "block": block,
            "length": block * r ** (2 * k),
        },
    )
