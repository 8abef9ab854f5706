"""Subsequence, Hamming distance and disjointness on compressed inputs.

The subsequence and Hamming routines work on height-balanced copies of their
inputs (balanced once per Slp and cached) and recurse on rule pairs with a
shift argument, memoized, so repetitive texts never get decompressed.  The LCS
oracle is the bit-parallel row DP, used by the LCS instance generator and its
tests.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from .errors import (
    AlphabetMismatch,
    NonBinaryAlphabet,
    TooLarge,
    UnequalLength,
)
from .slp import DEFAULT_DECOMPRESS_CAP, Slp, TERMINAL, balanced, decompress, symbol_masks


def _raise_limit(*slps):
    need = 1000 + 4 * sum(s.depth for s in slps)
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


# -- subsequence ---------------------------------------------------------------


def subsequence_avl(slp_text: Slp, pattern) -> bool:
    """Greedy leftmost matching of a decompressed pattern inside the text.

    Precomputes which symbols occur under every rule, then finds each next
    occurrence by one descent of the balanced rule DAG.
    """
    pattern = list(pattern)
    if any(not 0 <= p < slp_text.alphabet.size for p in pattern):
        raise AlphabetMismatch("pattern symbol outside the text alphabet")
    if not pattern:
        return True
    text = balanced(slp_text)
    _raise_limit(text)
    rules, lens = text.rules, text.lens
    masks = symbol_masks(text)

    def find(rule: int, start: int, bit: int) -> int:
        """Smallest offset >= start of the wanted symbol under ``rule``, or -1."""
        if start >= lens[rule] or not masks[rule] & bit:
            return -1
        a, b = rules[rule]
        if b == TERMINAL:
            return 0
        if start < lens[a]:
            pos = find(a, start, bit)
            if pos >= 0:
                return pos
        pos = find(b, start - lens[a], bit)
        if pos >= 0:
            return lens[a] + pos
        return -1

    cursor = 0
    root = text.start
    for p in pattern:
        pos = find(root, cursor, 1 << p)
        if pos < 0:
            return False
        cursor = pos + 1
    return True


def subsequence_recursive(slp_pattern: Slp, slp_text: Slp) -> bool:
    """Subsequence test with both sides compressed.

    The recursion carries one integer of progress: d >= 0 means the first d
    pattern symbols are already matched, d < 0 means the first |d| text symbols
    are already consumed.  A call returns the absolute matched pattern prefix
    (>= 0) on failure, or minus the absolute consumed text prefix on success.
    """
    pat = balanced(slp_pattern)
    txt = balanced(slp_text)
    _raise_limit(pat, txt)
    prules, plens = pat.rules, pat.lens
    trules, tlens = txt.rules, txt.lens
    memo: dict = {}

    def rec(ip: int, it: int, d: int) -> int:
        lt = tlens[it]
        if d < 0 and -d >= lt:
            return 0  # no text left, nothing newly matched
        key = (ip, it, d)
        cached = memo.get(key)
        if cached is not None:
            return cached
        lp = plens[ip]
        pa, pb = prules[ip]
        ta, tb = trules[it]
        if pb == TERMINAL and tb == TERMINAL:
            res = -1 if pa == ta else 0
        elif lp >= lt and pb != TERMINAL:
            lpl = plens[pa]
            if d >= lpl:
                r = rec(pb, it, d - lpl)
                res = lpl + r if r >= 0 else r
            else:
                r1 = rec(pa, it, d)
                if r1 >= 0:
                    res = r1
                else:
                    r2 = rec(pb, it, r1)
                    res = lpl + r2 if r2 >= 0 else r2
        else:
            ltl = tlens[ta]
            if d < 0 and -d >= ltl:
                r = rec(ip, tb, -(-d - ltl))
                res = r if r >= 0 else -(ltl - r)
            else:
                r1 = rec(ip, ta, d)
                if r1 < 0:
                    res = r1
                else:
                    r2 = rec(ip, tb, r1)
                    res = r2 if r2 >= 0 else -(ltl - r2)
        memo[key] = res
        return res

    if pat.length > txt.length:
        return False
    return rec(pat.start, txt.start, 0) < 0


def subsequence_decompressed(pattern, text) -> bool:
    """Greedy scan oracle."""
    it = iter(text)
    return all(any(t == p for t in it) for p in pattern)


# -- Hamming distance ----------------------------------------------------------


def hamming_recursive(slp_pattern: Slp, slp_text: Slp) -> int:
    """Hamming distance of two equal-length compressed strings.

    Splits the longer side, shifting the alignment offset, and memoizes on
    (pattern rule, text rule, shift); shifts with no aligned symbols return 0
    immediately.
    """
    if slp_pattern.length != slp_text.length:
        raise UnequalLength(
            f"lengths differ: {slp_pattern.length} vs {slp_text.length}"
        )
    pat = balanced(slp_pattern)
    txt = balanced(slp_text)
    _raise_limit(pat, txt)
    prules, plens = pat.rules, pat.lens
    trules, tlens = txt.rules, txt.lens
    memo: dict = {}

    def rec(ip: int, it: int, d: int) -> int:
        # pattern position r aligns with text position r + d (1-based)
        lp, lt = plens[ip], tlens[it]
        if d >= lt or -d >= lp:
            return 0
        key = (ip, it, d)
        cached = memo.get(key)
        if cached is not None:
            return cached
        pa, pb = prules[ip]
        ta, tb = trules[it]
        if pb == TERMINAL and tb == TERMINAL:
            res = int(pa != ta)  # d == 0 is forced by the overlap check
        elif lp >= lt and pb != TERMINAL:
            res = rec(pa, it, d) + rec(pb, it, d + plens[pa])
        else:
            res = rec(ip, ta, d) + rec(ip, tb, d - tlens[ta])
        memo[key] = res
        return res

    return rec(pat.start, txt.start, 0)


def hamming_decompressed(xs, ys) -> int:
    if len(xs) != len(ys):
        raise UnequalLength(f"lengths differ: {len(xs)} vs {len(ys)}")
    return sum(a != b for a, b in zip(xs, ys))


# -- disjointness ----------------------------------------------------------------


def disjointness(
    slp_pattern: Slp,
    slp_text: Slp,
    decompress_cap: int = DEFAULT_DECOMPRESS_CAP,
) -> bool:
    """Whether two equal-length compressed bit-strings share no position with 1.

    Answered through the Hamming-distance symbol gadget (the canonical route,
    its count gives the strongest signal), cross-checked through the
    subsequence symbol gadget and, when the strings fit in memory, a direct
    AND-scan; disagreement raises, since it can only mean a bug.
    """
    from .hardness.ksumgen import disj_to_hamming, disj_to_subsequence

    if slp_pattern.length != slp_text.length:
        raise UnequalLength(
            f"lengths differ: {slp_pattern.length} vs {slp_text.length}"
        )
    for s in (slp_pattern, slp_text):
        if s.alphabet.size != 2:
            raise NonBinaryAlphabet("disjointness is defined on bit-strings")
    n = slp_pattern.length

    hp, ht, threshold = disj_to_hamming(slp_pattern, slp_text)
    dist = hamming_recursive(hp, ht)
    disjoint = dist <= threshold

    sp, st = disj_to_subsequence(slp_pattern, slp_text)
    via_subsequence = subsequence_recursive(sp, st)
    if via_subsequence != disjoint:
        raise AssertionError(
            f"disjointness routes disagree: hamming says {disjoint}, "
            f"subsequence says {via_subsequence}"
        )
    if n <= decompress_cap:
        p = decompress(slp_pattern, decompress_cap)
        t = decompress(slp_text, decompress_cap)
        via_scan = not any(a == 1 and b == 1 for a, b in zip(p, t))
        if via_scan != disjoint:
            raise AssertionError(
                f"disjointness routes disagree: hamming says {disjoint}, "
                f"scan says {via_scan}"
            )
    return disjoint


# -- LCS oracle -------------------------------------------------------------------

DEFAULT_LCS_CELL_CAP = 4_000_000_000


@dataclass(frozen=True)
class LcsReport:
    lcs: int
    delta: int


def lcs_dp(xs, ys, cell_cap: int = DEFAULT_LCS_CELL_CAP) -> LcsReport:
    """Exact LCS length and distance |X|+|Y|-2L via the bit-parallel row DP."""
    xs = list(xs)
    ys = list(ys)
    if len(xs) * len(ys) > cell_cap:
        raise TooLarge(f"{len(xs)} x {len(ys)} exceeds the cell cap {cell_cap}")
    if not xs or not ys:
        return LcsReport(0, len(xs) + len(ys))
    width = len(xs)
    mask = (1 << width) - 1
    occurs: dict = {}
    for i, sym in enumerate(xs):
        occurs[sym] = occurs.get(sym, 0) | (1 << i)
    # complement of the horizontal-difference vector, all-ones to start
    pd = mask
    for sym in ys:
        t = occurs.get(sym, 0) & pd
        pd = ((pd + t) | (pd - t)) & mask
    lcs = width - pd.bit_count()
    return LcsReport(lcs, len(xs) + len(ys) - 2 * lcs)


def lcs_quadratic(xs, ys) -> int:
    """Classic table DP, kept as an independent check of the bit-parallel route."""
    xs, ys = list(xs), list(ys)
    prev = [0] * (len(ys) + 1)
    for a in xs:
        cur = [0]
        for j, b in enumerate(ys, start=1):
            cur.append(max(prev[j], cur[-1], prev[j - 1] + (a == b)))
        prev = cur
    return prev[-1]
