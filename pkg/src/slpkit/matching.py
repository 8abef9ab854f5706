"""Generalized pattern matching on compressed texts.

The cost of placing a decompressed pattern at an offset of the text is the sum
of a per-symbol-pair cost table over the aligned positions; the result is the
cheapest offset.  Two routes are provided: an exact convolution scan over the
decompressed text, and a recursion over the text's rules that never decompresses
the text.  Wildcard matching and substring Hamming distance are the two
specializations used by the instance generators.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np

from .errors import (
    AlphabetMismatch,
    PatternLongerThanText,
    TooLarge,
)
from .slp import Alphabet, Slp, decompress

# Patterns must fit in memory even when the text does not.
DEFAULT_PATTERN_CAP = 1 << 26

# Below this many cell operations the decompressed route uses exact integer
# correlation; above it, a validated floating-point FFT.
_DIRECT_CONV_CELLS = 1 << 27


@dataclass(frozen=True)
class CostFn:
    """Alphabet-pair cost table; the optional wildcard row must be all zero."""

    pattern_alphabet: Alphabet
    text_alphabet: Alphabet
    table: tuple[tuple[int, ...], ...]
    wildcard: int | None = None

    def __post_init__(self):
        if len(self.table) != self.pattern_alphabet.size:
            raise ValueError("cost table must have one row per pattern symbol")
        for row in self.table:
            if len(row) != self.text_alphabet.size:
                raise ValueError("cost table rows must cover the text alphabet")
            if any(c < 0 for c in row):
                raise ValueError("costs must be nonnegative")
        if self.wildcard is not None and any(self.table[self.wildcard]):
            raise ValueError("the wildcard row must be all zero")

    @property
    def max_cost(self) -> int:
        return max(max(row) for row in self.table)

    @staticmethod
    def hamming(alphabet: Alphabet) -> "CostFn":
        table = tuple(
            tuple(int(p != t) for t in range(alphabet.size)) for p in range(alphabet.size)
        )
        return CostFn(alphabet, alphabet, table)

    @staticmethod
    def wildcard_hamming(text_alphabet: Alphabet) -> "CostFn":
        """Pattern alphabet = text alphabet plus a trailing '*' that costs 0."""
        pat = text_alphabet.extended(["*"])
        table = tuple(
            tuple(0 if p == text_alphabet.size else int(p != t) for t in range(text_alphabet.size))
            for p in range(pat.size)
        )
        return CostFn(pat, text_alphabet, table, wildcard=text_alphabet.size)


@dataclass(frozen=True)
class MatchResult:
    min_cost: int
    best_offset: int


def _check_sizes(n_text: int, m_pat: int):
    if m_pat < 1:
        raise ValueError("pattern must be nonempty")
    if m_pat > n_text:
        raise PatternLongerThanText(f"pattern length {m_pat} exceeds text length {n_text}")


def gpm_decompressed(text, pattern, cost: CostFn) -> MatchResult:
    """Exact minimum alignment cost over all offsets of a decompressed text.

    Sums are exact: integer correlation up to a size threshold, above it a
    floating FFT that is only trusted when the worst-case sum fits well below
    2**53 and whose output is validated to be near-integral.
    """
    text = list(text)
    pattern = list(pattern)
    n, m = len(text), len(pattern)
    _check_sizes(n, m)
    worst = m * cost.max_cost
    if worst >= 1 << 62:
        raise TooLarge("worst-case alignment cost does not fit in 63 bits")
    totals = np.zeros(n - m + 1, dtype=np.int64)
    use_fft = n * m > _DIRECT_CONV_CELLS
    if use_fft and (n * cost.max_cost) >= (1 << 52):
        raise TooLarge("instance too large for exact convolution")
    pat_arr = np.asarray(pattern)
    for sym in sorted(set(pattern)):
        mask = pat_arr == sym
        row = cost.table[sym]
        costs = np.fromiter((row[t] for t in text), dtype=np.int64, count=n)
        if not use_fft:
            totals += np.correlate(costs, mask.astype(np.int64), mode="valid")
        else:
            size = 1
            while size < n + m:
                size <<= 1
            fa = np.fft.rfft(costs, size)
            fb = np.fft.rfft(mask[::-1].astype(np.float64), size)
            conv = np.fft.irfft(fa * fb, size)[m - 1 : n]
            rounded = np.rint(conv)
            if np.max(np.abs(conv - rounded)) > 0.25:
                raise TooLarge("convolution lost precision; instance too large")
            totals += rounded.astype(np.int64)
    best = int(np.argmin(totals))  # argmin returns the first minimum: smallest offset
    return MatchResult(int(totals[best]), best)


def gpm_compressed(
    slp_text: Slp,
    pattern,
    cost: CostFn,
    pattern_cap: int = DEFAULT_PATTERN_CAP,
) -> MatchResult:
    """Minimum alignment cost computed on the text's rules, never decompressing.

    For every rule the best placement is either inside one child or crosses the
    boundary; boundary placements are scored with a fixed-offset cost recursion
    that is memoized per (rule, offset).
    """
    pattern = list(pattern)
    n_text = slp_text.length
    m = len(pattern)
    if m > pattern_cap:
        raise TooLarge(f"pattern length {m} exceeds cap {pattern_cap}")
    _check_sizes(n_text, m)
    if m * cost.max_cost >= 1 << 62:
        raise TooLarge("worst-case alignment cost does not fit in 63 bits")

    limit = 4 * slp_text.depth + 1000
    if sys.getrecursionlimit() < limit:
        sys.setrecursionlimit(limit)

    rules = slp_text.rules
    lens = slp_text.lens
    table = cost.table
    # cost of pattern position j against each text symbol, for O(1) lookups
    pat_rows = [table[p] for p in pattern]

    fix_memo: dict[tuple[int, int], int] = {}

    def fix(i: int, d: int) -> int:
        """Total cost of the pattern shifted by d against rule i, aligned part only."""
        # pattern position j (1-based) sits on text position j + d
        li = lens[i]
        if d >= li or d + m <= 0:
            return 0
        key = (i, d)
        cached = fix_memo.get(key)
        if cached is not None:
            return cached
        a, b = rules[i]
        if b == -1:
            # single text symbol at position 1; aligned with pattern position 1 - d
            j = -d  # 0-based pattern index
            val = pat_rows[j][a] if 0 <= j < m else 0
        else:
            val = fix(a, d) + fix(b, d - lens[a])
        fix_memo[key] = val
        return val

    match_memo: dict[int, tuple[int, int]] = {}

    def best(i: int) -> tuple[int, int]:
        """(min cost, smallest offset) for placements fully inside rule i."""
        cached = match_memo.get(i)
        if cached is not None:
            return cached
        a, b = rules[i]
        if b == -1:
            # single-symbol rule; only reachable when the pattern has length 1
            result = (pat_rows[0][a], 0)
            match_memo[i] = result
            return result
        la = lens[a]
        result = None
        if lens[a] >= m:
            result = best(a)
        if lens[b] >= m:
            rc, ro = best(b)
            cand = (rc, ro + la)
            if result is None or cand < result:
                result = cand
        for d in range(-m + 1, 0):
            # pattern starts at offset la + d, crossing the child boundary
            off = la + d
            if off < 0 or off + m > lens[i]:
                continue
            c = fix(b, d) + fix(a, la + d)
            cand = (c, off)
            if result is None or cand < result:
                result = cand
        match_memo[i] = result
        return result

    # rules shorter than the pattern can never be asked for a placement;
    # the boundary offsets of the start rule cover everything else
    c, off = best(slp_text.start)
    if __debug__:
        per_rule: dict[int, int] = {}
        for (i, _d) in fix_memo:
            per_rule[i] = per_rule.get(i, 0) + 1
        assert all(v < 2 * m for v in per_rule.values()), "boundary-offset bound violated"
    return MatchResult(c, off)


def wildcard_match(
    slp_text: Slp,
    slp_pattern: Slp,
    wildcard: int | None = None,
    pattern_cap: int = DEFAULT_PATTERN_CAP,
) -> bool:
    """Whether the pattern (with wildcards) matches some substring of the text.

    The pattern alphabet is the text alphabet plus one wildcard symbol; by
    default the wildcard is the pattern alphabet's '*' glyph, else its last
    symbol.
    """
    pa = slp_pattern.alphabet
    if wildcard is None:
        if pa.glyphs is not None and "*" in pa.glyphs:
            wildcard = pa.glyphs.index("*")
        else:
            wildcard = pa.size - 1
    ta = slp_text.alphabet
    if slp_pattern.length > slp_text.length:
        raise PatternLongerThanText(
            f"pattern length {slp_pattern.length} exceeds text length {slp_text.length}"
        )
    pattern = decompress(slp_pattern, max_len=pattern_cap)
    table = tuple(
        tuple(0 if p == wildcard else int(p != t) for t in range(ta.size))
        for p in range(pa.size)
    )
    cost = CostFn(pa, ta, table, wildcard=wildcard)
    return gpm_compressed(slp_text, pattern, cost, pattern_cap=pattern_cap).min_cost == 0


def substring_hd(slp_text: Slp, slp_pattern: Slp, pattern_cap: int = DEFAULT_PATTERN_CAP) -> int:
    """Minimum Hamming distance between the pattern and any text substring."""
    if slp_text.alphabet != slp_pattern.alphabet:
        raise AlphabetMismatch("substring Hamming distance needs a shared alphabet")
    if slp_pattern.length > slp_text.length:
        raise PatternLongerThanText(
            f"pattern length {slp_pattern.length} exceeds text length {slp_text.length}"
        )
    pattern = decompress(slp_pattern, max_len=pattern_cap)
    return gpm_compressed(slp_text, pattern, CostFn.hamming(slp_text.alphabet),
                          pattern_cap=pattern_cap).min_cost


def brute_force_gpm(text, pattern, cost: CostFn) -> MatchResult:
    """Reference scan over all offsets; quadratic, for tests and tiny inputs."""
    text = list(text)
    pattern = list(pattern)
    _check_sizes(len(text), len(pattern))
    best = None
    for off in range(len(text) - len(pattern) + 1):
        c = sum(cost.table[p][t] for p, t in zip(pattern, text[off:]))
        if best is None or c < best[0]:
            best = (c, off)
    return MatchResult(*best)


# -- cost-table text format ---------------------------------------------------
#
#   costs <sigma_pattern> <sigma_text>
#   <sigma_text integers>      (one line per pattern symbol)
#   wildcard <index>           (optional)


def emit_costs(cost: CostFn) -> str:
    lines = [f"costs {cost.pattern_alphabet.size} {cost.text_alphabet.size}"]
    for row in cost.table:
        lines.append(" ".join(str(c) for c in row))
    if cost.wildcard is not None:
        lines.append(f"wildcard {cost.wildcard}")
    return "\n".join(lines) + "\n"


def parse_costs(text: str) -> CostFn:
    from .errors import ParseError

    rows = []
    sp = stt = None
    wildcard = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "costs":
            if len(parts) != 3:
                raise ParseError("expected 'costs <sigmaP> <sigmaT>'", lineno)
            sp, stt = int(parts[1]), int(parts[2])
        elif parts[0] == "wildcard":
            wildcard = int(parts[1])
        else:
            if sp is None:
                raise ParseError("cost rows before 'costs' header", lineno)
            try:
                row = tuple(int(p) for p in parts)
            except ValueError:
                raise ParseError(f"bad cost row {line!r}", lineno) from None
            if len(row) != stt:
                raise ParseError(f"expected {stt} costs, got {len(row)}", lineno)
            rows.append(row)
    if sp is None or len(rows) != sp:
        raise ParseError("cost table incomplete", None)
    return CostFn(Alphabet(sp), Alphabet(stt), tuple(rows), wildcard=wildcard)
