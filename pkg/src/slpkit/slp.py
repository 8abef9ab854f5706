"""Straight-line programs: representation, combinators, balancing, navigation, io.

An SLP is an ordered list of rules.  Rule ``i`` is either a terminal holding one
alphabet symbol or the concatenation of two earlier rules, and the last rule is
the start symbol.  Every rule derives a nonempty string; per-rule decompressed
lengths and depths are computed at construction time and all lengths are checked
against a 63-bit limit (overflow is a hard error, never silent wraparound).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    AlphabetMismatch,
    EmptyString,
    ForwardReference,
    IndexOutOfRange,
    LengthOverflow,
    ParseError,
    SymbolOutOfRange,
    TooLarge,
)

MAX_LEN = (1 << 63) - 1

# A rule is a pair of ints: (symbol, TERMINAL) or (left_index, right_index).
TERMINAL = -1

# Default cap for full decompression (symbols).
DEFAULT_DECOMPRESS_CAP = 1 << 26


@dataclass(frozen=True)
class Alphabet:
    """A dense integer alphabet 0..size-1 with an optional display-glyph map."""

    size: int
    glyphs: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("alphabet size must be >= 1")
        if self.glyphs is not None:
            if len(self.glyphs) != self.size:
                raise ValueError("glyph map must cover the whole alphabet")
            if len(set(self.glyphs)) != self.size:
                raise ValueError("glyph map must be injective")
            for g in self.glyphs:
                if not g or any(c.isspace() for c in g) or '"' in g:
                    raise ValueError(f"bad glyph {g!r}")

    @staticmethod
    def binary() -> "Alphabet":
        return Alphabet(2, ("0", "1"))

    @staticmethod
    def from_glyphs(glyphs) -> "Alphabet":
        glyphs = tuple(glyphs)
        return Alphabet(len(glyphs), glyphs)

    def glyph(self, symbol: int) -> str:
        if self.glyphs is not None:
            return self.glyphs[symbol]
        return str(symbol)

    def symbol_of(self, glyph: str) -> int:
        if self.glyphs is not None:
            try:
                return self.glyphs.index(glyph)
            except ValueError:
                raise SymbolOutOfRange(f"unknown glyph {glyph!r}") from None
        try:
            sym = int(glyph)
        except ValueError:
            raise SymbolOutOfRange(f"unknown glyph {glyph!r}") from None
        if not 0 <= sym < self.size:
            raise SymbolOutOfRange(f"glyph {glyph!r} out of range")
        return sym

    def extended(self, new_glyphs) -> "Alphabet":
        """A copy with extra symbols appended after the existing ones."""
        new_glyphs = tuple(new_glyphs)
        glyphs = tuple(self.glyph(i) for i in range(self.size)) + new_glyphs
        return Alphabet(self.size + len(new_glyphs), glyphs)


class Slp:
    """An immutable straight-line program over a fixed alphabet."""

    __slots__ = ("alphabet", "rules", "lens", "depths", "_balanced")

    def __init__(self, alphabet: Alphabet, rules):
        rules = list(rules)
        if not rules:
            raise EmptyString("an SLP needs at least one rule")
        lens = []
        depths = []
        for i, (a, b) in enumerate(rules):
            if b == TERMINAL:
                if not 0 <= a < alphabet.size:
                    raise SymbolOutOfRange(f"rule {i}: symbol {a} not below {alphabet.size}")
                lens.append(1)
                depths.append(0)
            else:
                if not (0 <= a < i and 0 <= b < i):
                    raise ValueError(f"rule {i}: children ({a}, {b}) must be earlier rules")
                n = lens[a] + lens[b]
                if n > MAX_LEN:
                    raise LengthOverflow(f"rule {i}: length {n} exceeds {MAX_LEN}")
                lens.append(n)
                depths.append(1 + max(depths[a], depths[b]))
        self.alphabet = alphabet
        self.rules = rules
        self.lens = lens
        self.depths = depths
        self._balanced = None

    # -- basic accessors ---------------------------------------------------

    @property
    def start(self) -> int:
        return len(self.rules) - 1

    @property
    def size(self) -> int:
        """Number of rules (n)."""
        return len(self.rules)

    @property
    def length(self) -> int:
        """Decompressed length (N)."""
        return self.lens[-1]

    @property
    def depth(self) -> int:
        return self.depths[-1]

    def is_terminal(self, i: int) -> bool:
        return self.rules[i][1] == TERMINAL

    def __eq__(self, other):
        return (
            isinstance(other, Slp)
            and self.alphabet == other.alphabet
            and self.rules == other.rules
        )

    def __repr__(self):
        return f"Slp(n={self.size}, N={self.length}, depth={self.depth})"


def stats(slp: Slp) -> dict:
    """Decompressed length, rule count and depth, computed without decompression."""
    return {"N": slp.length, "n": slp.size, "depth": slp.depth}


# -- construction ----------------------------------------------------------


class RuleBuilder:
    """Accumulates rules for one SLP; used by combinators and generators."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self.rules: list[tuple[int, int]] = []
        self.lens: list[int] = []
        self._terminal_cache: dict[int, int] = {}
        self._repeat_cache: dict[tuple[int, int], int] = {}

    def terminal(self, symbol: int) -> int:
        idx = self._terminal_cache.get(symbol)
        if idx is not None:
            return idx
        if not 0 <= symbol < self.alphabet.size:
            raise SymbolOutOfRange(f"symbol {symbol} not below {self.alphabet.size}")
        self.rules.append((symbol, TERMINAL))
        self.lens.append(1)
        idx = len(self.rules) - 1
        self._terminal_cache[symbol] = idx
        return idx

    def concat(self, left: int, right: int) -> int:
        n = self.lens[left] + self.lens[right]
        if n > MAX_LEN:
            raise LengthOverflow(f"length {n} exceeds {MAX_LEN}")
        self.rules.append((left, right))
        self.lens.append(n)
        return len(self.rules) - 1

    def chain(self, parts) -> int:
        """Left-to-right binary concatenation of one or more rule indices."""
        parts = list(parts)
        if not parts:
            raise EmptyString("cannot concatenate zero pieces")
        acc = parts[0]
        for p in parts[1:]:
            acc = self.concat(acc, p)
        return acc

    def literal(self, text) -> int:
        """A balanced concatenation deriving the given symbol sequence."""
        text = list(text)
        if not text:
            raise EmptyString("literal must be nonempty")
        level = [self.terminal(s) for s in text]
        while len(level) > 1:
            nxt = []
            for i in range(0, len(level) - 1, 2):
                nxt.append(self.concat(level[i], level[i + 1]))
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        return level[0]

    def power(self, base: int, k: int) -> int:
        """A rule deriving eval(base) repeated k times, via binary decomposition."""
        if k < 1:
            raise ValueError("repetition count must be >= 1")
        if self.lens[base] * k > MAX_LEN:
            raise LengthOverflow(f"length {self.lens[base] * k} exceeds {MAX_LEN}")
        key = (base, k)
        cached = self._repeat_cache.get(key)
        if cached is not None:
            return cached
        acc = None
        sq = base
        while True:
            if k & 1:
                acc = sq if acc is None else self.concat(sq, acc)
            k >>= 1
            if not k:
                break
            sq = self.concat(sq, sq)
        self._repeat_cache[key] = acc
        return acc

    def import_slp(self, slp: Slp) -> int:
        """Copy another SLP's rules in, returning the index of its start rule."""
        if slp.alphabet != self.alphabet:
            raise AlphabetMismatch("cannot import rules over a different alphabet")
        remap = {}
        for i, (a, b) in enumerate(slp.rules):
            if b == TERMINAL:
                remap[i] = self.terminal(a)
            else:
                self.rules.append((remap[a], remap[b]))
                self.lens.append(slp.lens[i])
                remap[i] = len(self.rules) - 1
        return remap[slp.start]

    def import_compatible(self, slp: Slp) -> int:
        """Like import_slp, but allows any SLP whose symbols fit this alphabet.

        Symbol indices are kept as-is, so this is meant for alphabets that
        extend the source's (new symbols appended after the existing ones).
        """
        if slp.alphabet.size > self.alphabet.size:
            raise AlphabetMismatch("source alphabet is larger than the builder's")
        remap = {}
        for i, (a, b) in enumerate(slp.rules):
            if b == TERMINAL:
                remap[i] = self.terminal(a)
            else:
                self.rules.append((remap[a], remap[b]))
                self.lens.append(slp.lens[i])
                remap[i] = len(self.rules) - 1
        return remap[slp.start]

    def build(self, start: int) -> Slp:
        """Finish the SLP with the given start rule (moved to the last position)."""
        if start != len(self.rules) - 1:
            self.rules.append(self.rules[start])
            self.lens.append(self.lens[start])
        return Slp(self.alphabet, self.rules)


def from_literal(text, alphabet: Alphabet) -> Slp:
    """An SLP whose eval equals the given nonempty symbol sequence."""
    b = RuleBuilder(alphabet)
    return b.build(b.literal(text))


def concat(a: Slp, b: Slp) -> Slp:
    """An SLP for eval(a) followed by eval(b)."""
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch("concat requires a shared alphabet")
    rb = RuleBuilder(a.alphabet)
    ia = rb.import_slp(a)
    ib = rb.import_slp(b)
    return rb.build(rb.concat(ia, ib))


def repeat(body: Slp, k: int) -> Slp:
    """An SLP for eval(body) repeated k >= 1 times."""
    rb = RuleBuilder(body.alphabet)
    root = rb.import_slp(body)
    return rb.build(rb.power(root, k))


def substitute(slp: Slp, mapping: dict, alphabet: Alphabet) -> Slp:
    """Replace every terminal symbol by a short string over a new alphabet.

    ``mapping`` sends each symbol of ``slp.alphabet`` to a nonempty symbol
    sequence over ``alphabet``; concat rules are preserved, so the output grows
    by O(1) rules per distinct terminal.
    """
    rb = RuleBuilder(alphabet)
    remap = {}
    for i, (a, b) in enumerate(slp.rules):
        if b == TERMINAL:
            remap[i] = rb.literal(mapping[a])
        else:
            remap[i] = rb.concat(remap[a], remap[b])
    return rb.build(remap[slp.start])


# -- evaluation and navigation ----------------------------------------------

_EVAL_CHUNK = 512


def decompress(slp: Slp, max_len: int = DEFAULT_DECOMPRESS_CAP) -> list[int]:
    """The symbol sequence the SLP generates.

    Refuses texts longer than ``max_len`` so a compressed input cannot blow up
    memory by accident.
    """
    if slp.length > max_len:
        raise TooLarge(f"decompressed length {slp.length} exceeds cap {max_len}")
    rules, lens = slp.rules, slp.lens
    # Expand small rules once, then stitch chunks along the parse tree.
    cache: list[list[int] | None] = [None] * len(rules)
    for i, (a, b) in enumerate(rules):
        if lens[i] <= _EVAL_CHUNK:
            if b == TERMINAL:
                cache[i] = [a]
            else:
                cache[i] = cache[a] + cache[b]  # type: ignore[operator]
    out: list[int] = []
    stack = [slp.start]
    while stack:
        i = stack.pop()
        chunk = cache[i]
        if chunk is not None:
            out.extend(chunk)
        else:
            a, b = rules[i]
            stack.append(b)
            stack.append(a)
    return out


def eval_rule(slp: Slp, rule: int, max_len: int = DEFAULT_DECOMPRESS_CAP) -> list[int]:
    """Decompress a single rule of the SLP."""
    if slp.lens[rule] > max_len:
        raise TooLarge(f"decompressed length {slp.lens[rule]} exceeds cap {max_len}")
    rules = slp.rules
    out: list[int] = []
    stack = [rule]
    while stack:
        i = stack.pop()
        a, b = rules[i]
        if b == TERMINAL:
            out.append(a)
        else:
            stack.append(b)
            stack.append(a)
    return out


def char_at(slp: Slp, i: int) -> int:
    """The i-th symbol of eval(slp), 1-based; runs in time proportional to depth."""
    if not 1 <= i <= slp.length:
        raise IndexOutOfRange(f"position {i} not in 1..{slp.length}")
    rules, lens = slp.rules, slp.lens
    node = slp.start
    i -= 1  # 0-based descent
    while True:
        a, b = rules[node]
        if b == TERMINAL:
            return a
        if i < lens[a]:
            node = a
        else:
            i -= lens[a]
            node = b


def symbol_masks(slp: Slp) -> list[int]:
    """Per-rule bitmask of which alphabet symbols occur in the rule's eval."""
    masks = []
    for a, b in slp.rules:
        if b == TERMINAL:
            masks.append(1 << a)
        else:
            masks.append(masks[a] | masks[b])
    return masks


# -- balancing ---------------------------------------------------------------


class _AvlBuilder:
    """Rebuilds an SLP so every concat rule is height-balanced.

    Uses the classic join-with-rotations scheme for height-balanced trees; a
    join of pieces with depth difference D creates O(D) fresh rules.
    """

    def __init__(self, alphabet: Alphabet):
        self.rb = RuleBuilder(alphabet)
        self.depth: list[int] = []

    def _sync(self):
        while len(self.depth) < len(self.rb.rules):
            a, b = self.rb.rules[len(self.depth)]
            if b == TERMINAL:
                self.depth.append(0)
            else:
                self.depth.append(1 + max(self.depth[a], self.depth[b]))

    def terminal(self, symbol: int) -> int:
        i = self.rb.terminal(symbol)
        self._sync()
        return i

    def node(self, a: int, b: int) -> int:
        i = self.rb.concat(a, b)
        self._sync()
        return i

    def join(self, a: int, b: int) -> int:
        d = self.depth
        if abs(d[a] - d[b]) <= 1:
            return self.node(a, b)
        if d[a] > d[b]:
            return self._join_right(a, b)
        return self._join_left(a, b)

    def _join_right(self, a: int, b: int) -> int:
        # depth[a] >= depth[b] + 2, so rule a is a concat; descend its right spine.
        d = self.depth
        l, c = self.rb.rules[a]
        if d[c] <= d[b] + 1:
            if max(d[c], d[b]) + 1 <= d[l] + 1:
                return self.node(l, self.node(c, b))
            # double rotation around the new (c, b) node
            cl, cr = self.rb.rules[c]
            return self.node(self.node(l, cl), self.node(cr, b))
        t = self._join_right(c, b)
        if d[t] <= d[l] + 1:
            return self.node(l, t)
        tl, tr = self.rb.rules[t]
        return self.node(self.node(l, tl), tr)

    def _join_left(self, a: int, b: int) -> int:
        d = self.depth
        c, r = self.rb.rules[b]
        if d[c] <= d[a] + 1:
            if max(d[a], d[c]) + 1 <= d[r] + 1:
                return self.node(self.node(a, c), r)
            cl, cr = self.rb.rules[c]
            return self.node(self.node(a, cl), self.node(cr, r))
        t = self._join_left(a, c)
        if d[t] <= d[r] + 1:
            return self.node(t, r)
        tl, tr = self.rb.rules[t]
        return self.node(tl, self.node(tr, r))


def balance(slp: Slp) -> Slp:
    """An equivalent SLP in which every concat rule is height-balanced.

    eval is unchanged; the output depth is O(log N) and the size grows by at
    most an O(log N) factor.
    """
    ab = _AvlBuilder(slp.alphabet)
    remap = {}
    for i, (a, b) in enumerate(slp.rules):
        if b == TERMINAL:
            remap[i] = ab.terminal(a)
        else:
            remap[i] = ab.join(remap[a], remap[b])
    out = ab.rb.build(remap[slp.start])
    out._balanced = out
    return out


def balanced(slp: Slp) -> Slp:
    """Cached balance(); repeated queries on the same Slp do not rebalance."""
    if slp._balanced is None:
        slp._balanced = balance(slp)
    return slp._balanced


def is_avl(slp: Slp) -> bool:
    """Whether every concat rule's children differ in depth by at most one."""
    d = slp.depths
    return all(
        b == TERMINAL or abs(d[a] - d[b]) <= 1 for a, b in slp.rules
    )


# -- text format -------------------------------------------------------------
#
# One rule per line, 1-based indices, strictly increasing:
#     Sk = "g"        terminal with glyph g
#     Sk = Si Sj      concatenation of two earlier rules
# The last rule is the start symbol; '#'-lines are comments.  emit() writes an
# alphabet comment first so parse() can reconstruct glyph maps.


def emit_slp(slp: Slp) -> str:
    a = slp.alphabet
    lines = ["# alphabet " + " ".join(a.glyph(i) for i in range(a.size))]
    for i, (x, y) in enumerate(slp.rules):
        if y == TERMINAL:
            lines.append(f'S{i + 1} = "{a.glyph(x)}"')
        else:
            lines.append(f"S{i + 1} = S{x + 1} S{y + 1}")
    return "\n".join(lines) + "\n"


def parse_slp(text: str, alphabet: Alphabet | None = None) -> Slp:
    rules: list[tuple[int, int]] = []
    glyph_order: list[str] = []
    pending: list[tuple[int, str | tuple[int, int]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if alphabet is None and body.startswith("alphabet "):
                glyphs = body.split()[1:]
                if glyphs:
                    alphabet = Alphabet.from_glyphs(glyphs)
            continue
        left, _, right = line.partition("=")
        name = left.strip()
        if not name.startswith("S"):
            raise ParseError(f"expected rule name, got {name!r}", lineno)
        try:
            k = int(name[1:])
        except ValueError:
            raise ParseError(f"bad rule name {name!r}", lineno) from None
        if k != len(pending) + 1:
            raise ParseError(f"rule indices must be 1-based and increasing, got {k}", lineno)
        body = right.strip()
        if not body:
            raise ParseError("missing rule body", lineno)
        if body.startswith('"'):
            if not (body.endswith('"') and len(body) >= 3):
                raise ParseError(f"bad terminal body {body!r}", lineno)
            glyph = body[1:-1]
            if '"' in glyph or any(c.isspace() for c in glyph):
                raise ParseError(f"bad glyph {glyph!r}", lineno)
            if glyph not in glyph_order:
                glyph_order.append(glyph)
            pending.append((lineno, glyph))
        else:
            parts = body.split()
            if len(parts) != 2 or not all(p.startswith("S") for p in parts):
                raise ParseError(f"bad concat body {body!r}", lineno)
            try:
                l, r = (int(p[1:]) for p in parts)
            except ValueError:
                raise ParseError(f"bad concat body {body!r}", lineno) from None
            if l >= k or r >= k:
                raise ForwardReference(
                    f"rule S{k} refers to S{max(l, r)} which is not defined yet", lineno
                )
            if l < 1 or r < 1:
                raise ParseError(f"rule indices are 1-based, got {body!r}", lineno)
            pending.append((lineno, (l - 1, r - 1)))
    if not pending:
        raise ParseError("no rules in file", None)
    if alphabet is None:
        alphabet = Alphabet.from_glyphs(glyph_order)
    for lineno, item in pending:
        if isinstance(item, str):
            try:
                rules.append((alphabet.symbol_of(item), TERMINAL))
            except SymbolOutOfRange as e:
                raise ParseError(str(e), lineno) from None
        else:
            rules.append(item)
    return Slp(alphabet, rules)
