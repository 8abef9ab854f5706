"""Decompress-and-solve baselines: CFG recognition and (weighted) RNA folding.

The recognizer is an Earley parser with the precomputed-nullable completion
fix, so grammars with epsilon productions and long bodies are fed verbatim.  A
CNF+CYK recognizer is kept only as a test oracle.  RNA folding is the classic
cubic interval DP over non-crossing matchings; the weighted variant runs the
same DP with per-symbol weights and can cross-check itself against folding the
symbol-repeated expansion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParseError, TooLarge, UndeclaredSymbol
from .slp import Alphabet


# -- context-free grammars ----------------------------------------------------


@dataclass(frozen=True)
class Cfg:
    """Productions map nonterminal names to bodies; body items are either
    terminal symbol indices (int) or nonterminal names (str)."""

    alphabet: Alphabet
    start: str
    productions: tuple  # tuple of (name, body-tuple) pairs, insertion-ordered

    def __post_init__(self):
        lhs = {name for name, _ in self.productions}
        if self.start not in lhs:
            raise ValueError(f"start symbol {self.start!r} has no production")
        for name, body in self.productions:
            for item in body:
                if isinstance(item, str):
                    if item not in lhs:
                        raise ValueError(f"undeclared nonterminal {item!r} in {name}")
                elif not 0 <= item < self.alphabet.size:
                    raise ValueError(f"terminal {item} out of range in {name}")

    @staticmethod
    def from_dict(alphabet, start, rules: dict) -> "Cfg":
        prods = tuple(
            (name, tuple(tuple(body) for body in bodies)) for name, bodies in rules.items()
        )
        flat = tuple((name, body) for name, bodies in prods for body in bodies)
        return Cfg(alphabet, start, flat)

    @property
    def size(self) -> int:
        return sum(len(body) for _, body in self.productions)

    @property
    def nonterminals(self):
        seen = []
        for name, _ in self.productions:
            if name not in seen:
                seen.append(name)
        return seen


def _nullable_set(productions) -> set:
    nullable = set()
    changed = True
    while changed:
        changed = False
        for name, body in productions:
            if name in nullable:
                continue
            if all(isinstance(s, str) and s in nullable for s in body):
                nullable.add(name)
                changed = True
    return nullable


def cfg_recognize(text, cfg: Cfg) -> bool:
    """Earley recognition of a decompressed text; epsilon productions welcome."""
    text = list(text)
    for sym in text:
        if not 0 <= sym < cfg.alphabet.size:
            raise UndeclaredSymbol(f"text symbol {sym} not in the grammar's alphabet")

    # intern nonterminal names and group rule ids by head
    names = cfg.nonterminals
    nt_id = {name: i for i, name in enumerate(names)}
    rules = []  # (head_id, body) with body items int >= 0 terminal, ('n', id) for nts
    by_head: list[list[int]] = [[] for _ in names]
    for name, body in cfg.productions:
        encoded = tuple(("n", nt_id[s]) if isinstance(s, str) else s for s in body)
        by_head[nt_id[name]].append(len(rules))
        rules.append((nt_id[name], encoded))
    nullable_names = _nullable_set(cfg.productions)
    nullable = {nt_id[name] for name in nullable_names}

    n = len(text)
    start_id = nt_id[cfg.start]
    # chart[k]: set of items (rule, dot, origin); wait[k]: nonterminal -> waiting items
    chart: list[set] = [set() for _ in range(n + 1)]
    wait: list[dict] = [{} for _ in range(n + 1)]

    def push(k, item, worklist):
        if item not in chart[k]:
            chart[k].add(item)
            worklist.append(item)

    worklist = []
    for r in by_head[start_id]:
        push(0, (r, 0, 0), worklist)

    for k in range(n + 1):
        if k > 0:
            worklist = list(chart[k])
        scan_sym = text[k] if k < n else None
        idx = 0
        while idx < len(worklist):
            rule, dot, origin = worklist[idx]
            idx += 1
            head, body = rules[rule]
            if dot == len(body):
                # completion: advance everyone at `origin` waiting for `head`
                for waiting in wait[origin].get(head, ()):  # origin <= k
                    push(k, (waiting[0], waiting[1] + 1, waiting[2]), worklist)
                continue
            nxt = body[dot]
            if isinstance(nxt, tuple):
                b = nxt[1]
                wait[k].setdefault(b, []).append((rule, dot, origin))
                for r in by_head[b]:
                    push(k, (r, 0, k), worklist)
                if b in nullable:
                    push(k, (rule, dot + 1, origin), worklist)
            elif nxt == scan_sym:
                push(k + 1, (rule, dot + 1, origin), [])
    return any(
        rules[r][0] == start_id and dot == len(rules[r][1]) and origin == 0
        for (r, dot, origin) in chart[n]
    )


def cnf_convert(cfg: Cfg):
    """Chomsky-ish normal form for the CYK oracle.

    Returns (binary_rules, terminal_rules, start, accepts_empty) where
    binary_rules maps (B, C) -> set of heads and terminal_rules maps a -> heads.
    """
    nullable = _nullable_set(cfg.productions)
    counter = [0]

    def fresh():
        counter[0] += 1
        return f"_X{counter[0]}"

    # lift terminals and expand nullable omissions
    prods: list[tuple[str, tuple]] = []
    term_nt: dict[int, str] = {}

    def lift(sym):
        if sym not in term_nt:
            term_nt[sym] = fresh()
        return term_nt[sym]

    for name, body in cfg.productions:
        options = [[]]
        for item in body:
            if isinstance(item, str) and item in nullable:
                options = [o + [item] for o in options] + [list(o) for o in options]
            else:
                options = [o + [item] for o in options]
        for opt in options:
            prods.append((name, tuple(opt)))
    accepts_empty = cfg.start in nullable

    # binarize, lifting terminals inside long bodies
    binary: dict[tuple, set] = {}
    terminal: dict[int, set] = {}
    unit: list[tuple[str, str]] = []
    todo = [
        (name, body) for name, body in prods if body
    ]
    out: list[tuple[str, tuple]] = []
    for name, body in todo:
        if len(body) == 1:
            if isinstance(body[0], str):
                unit.append((name, body[0]))
            else:
                terminal.setdefault(body[0], set()).add(name)
            continue
        syms = [lift(s) if isinstance(s, int) else s for s in body]
        for s in body:
            if isinstance(s, int):
                terminal.setdefault(s, set()).add(lift(s))
        while len(syms) > 2:
            nn = fresh()
            out.append((nn, (syms[0], syms[1])))
            syms = [nn] + syms[2:]
        out.append((name, tuple(syms)))
    for name, (b, c) in out:
        binary.setdefault((b, c), set()).add(name)

    # unit closure: head derives unit-target's productions
    changed = True
    while changed:
        changed = False
        for head, target in unit:
            for key, heads in list(binary.items()):
                if target in heads and head not in heads:
                    heads.add(head)
                    changed = True
            for key, heads in list(terminal.items()):
                if target in heads and head not in heads:
                    heads.add(head)
                    changed = True
            # unit-to-unit handled by iterating to fixpoint
            for h2, t2 in unit:
                if h2 == target:
                    if (head, t2) not in unit:
                        unit.append((head, t2))
                        changed = True
    return binary, terminal, cfg.start, accepts_empty


def cyk_recognize(text, cfg: Cfg) -> bool:
    """CYK on the CNF conversion; test oracle for the Earley recognizer."""
    text = list(text)
    binary, terminal, start, accepts_empty = cnf_convert(cfg)
    n = len(text)
    if n == 0:
        return accepts_empty
    table = [[set() for _ in range(n)] for _ in range(n)]
    for i, sym in enumerate(text):
        table[i][i] = set(terminal.get(sym, ()))
    for span in range(2, n + 1):
        for i in range(0, n - span + 1):
            j = i + span - 1
            cell = table[i][j]
            for k in range(i, j):
                left, right = table[i][k], table[k + 1][j]
                if not left or not right:
                    continue
                for (b, c), heads in binary.items():
                    if b in left and c in right:
                        cell |= heads
    return start in table[0][n - 1]


# -- grammar text format -------------------------------------------------------
#
#   start <NT>
#   <NT> -> sym sym ...      (empty right side = epsilon)
#
# Tokens that never appear on a left-hand side are terminals.


def emit_cfg(cfg: Cfg) -> str:
    a = cfg.alphabet
    lines = []
    if a.glyphs is not None:
        lines.append("# alphabet " + " ".join(a.glyphs))
    lines.append(f"start {cfg.start}")
    for name, body in cfg.productions:
        rhs = " ".join(a.glyph(s) if isinstance(s, int) else s for s in body)
        lines.append(f"{name} -> {rhs}".rstrip())
    return "\n".join(lines) + "\n"


def parse_cfg(text: str) -> Cfg:
    start = None
    raw_rules: list[tuple[str, list[str]]] = []
    glyphs = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            body = line[1:].strip() if line.startswith("#") else ""
            if body.startswith("alphabet "):
                glyphs = body.split()[1:]
            continue
        if line.startswith("start "):
            start = line.split()[1]
            continue
        lhs, arrow, rhs = line.partition("->")
        if not arrow:
            raise ParseError(f"expected '<NT> -> ...', got {line!r}", lineno)
        raw_rules.append((lhs.strip(), rhs.split()))
    if start is None or not raw_rules:
        raise ParseError("grammar needs a start line and at least one production", None)
    lhs_names = {name for name, _ in raw_rules}
    term_glyphs = glyphs
    if term_glyphs is None:
        seen = sorted({t for _, body in raw_rules for t in body if t not in lhs_names})
        term_glyphs = seen or ["0"]
    alphabet = Alphabet.from_glyphs(term_glyphs)
    productions = tuple(
        (
            name,
            tuple(t if t in lhs_names else alphabet.symbol_of(t) for t in body),
        )
        for name, body in raw_rules
    )
    return Cfg(alphabet, start, productions)


# -- RNA folding ---------------------------------------------------------------

DEFAULT_FOLD_CAP = 20000


@dataclass(frozen=True)
class PairedAlphabet:
    """An alphabet with an involutive partner map and symmetric weights."""

    alphabet: Alphabet
    partner: tuple
    weight: tuple

    def __post_init__(self):
        size = self.alphabet.size
        if len(self.partner) != size or len(self.weight) != size:
            raise ValueError("partner and weight must cover the alphabet")
        for s in range(size):
            if self.partner[self.partner[s]] != s:
                raise ValueError("partner map must be an involution")
            if self.weight[s] != self.weight[self.partner[s]]:
                raise ValueError("weights must agree on partners")
            if self.weight[s] < 1:
                raise ValueError("weights must be positive")

    @staticmethod
    def unweighted(alphabet: Alphabet, partner) -> "PairedAlphabet":
        return PairedAlphabet(alphabet, tuple(partner), (1,) * alphabet.size)


def _check_text(text, pairing: PairedAlphabet):
    for sym in text:
        if not 0 <= sym < pairing.alphabet.size:
            raise UndeclaredSymbol(f"symbol {sym} not in the pairing alphabet")


def _fold_dp(text, pairing: PairedAlphabet, weights) -> int:
    """Interval DP for the heaviest non-crossing matching; shared endpoints cross."""
    n = len(text)
    if n < 2:
        return 0
    partner = pairing.partner
    # C[i+1][j+1] = best value on text[i..j]; zero whenever j < i
    C = np.zeros((n + 2, n + 2), dtype=np.int64)
    positions = [[] for _ in range(pairing.alphabet.size)]
    for j in range(n):
        col = C[1 : j + 1, j].copy()  # best on text[i..j-1] for i = 0..j-1
        col = np.append(col, 0)  # i = j: empty prefix
        want = partner[text[j]]
        for k in positions[want]:
            gain = int(C[k + 2, j]) + weights[text[k]]
            np.maximum(col[: k + 1], C[1 : k + 2, k] + gain, out=col[: k + 1])
        C[1 : j + 2, j + 1] = col
        positions[text[j]].append(j)
    return int(C[1, n])


def rna_fold(text, pairing: PairedAlphabet, max_len: int = DEFAULT_FOLD_CAP) -> int:
    """Maximum number of non-crossing complementary pairs in the text."""
    text = list(text)
    _check_text(text, pairing)
    if len(text) > max_len:
        raise TooLarge(f"text length {len(text)} exceeds folding cap {max_len}")
    return _fold_dp(text, pairing, (1,) * pairing.alphabet.size)


def expand_weighted(text, pairing: PairedAlphabet) -> list:
    """Each symbol repeated by its weight; folding this equals the weighted fold."""
    out = []
    for sym in text:
        out.extend([sym] * pairing.weight[sym])
    return out


def wrna_fold(
    text,
    pairing: PairedAlphabet,
    max_len: int = DEFAULT_FOLD_CAP,
    via_expansion: bool = False,
) -> int:
    """Maximum total weight of a non-crossing complementary matching.

    The primary route is a weighted interval DP on the text itself.  With
    ``via_expansion`` the symbol-repeated expansion is folded unweighted as
    well and the two routes are required to agree (the expansion is cubic in
    the expanded length, so keep it for small inputs).
    """
    text = list(text)
    _check_text(text, pairing)
    if len(text) > max_len:
        raise TooLarge(f"text length {len(text)} exceeds folding cap {max_len}")
    direct = _fold_dp(text, pairing, pairing.weight)
    if via_expansion:
        expanded = expand_weighted(text, pairing)
        if len(expanded) > max_len:
            raise TooLarge(
                f"expanded length {len(expanded)} exceeds folding cap {max_len}"
            )
        via = _fold_dp(expanded, pairing, (1,) * pairing.alphabet.size)
        if via != direct:
            raise AssertionError(
                f"weighted fold {direct} disagrees with expansion fold {via}"
            )
    return direct


def fold_exhaustive(text, pairing: PairedAlphabet, weighted: bool = False) -> int:
    """Backtracking enumeration of every non-crossing matching; tiny inputs only."""
    text = list(text)
    partner = pairing.partner
    weights = pairing.weight if weighted else (1,) * pairing.alphabet.size

    def rec(idxs):
        if len(idxs) < 2:
            return 0
        first, rest = idxs[0], idxs[1:]
        best = rec(rest)
        for pos, j in enumerate(rest):
            if text[j] == partner[text[first]]:
                cand = (
                    weights[text[first]]
                    + rec(rest[:pos])
                    + rec(rest[pos + 1 :])
                )
                if cand > best:
                    best = cand
        return best

    return rec(tuple(range(len(text))))


# -- pairing text format ---------------------------------------------------------
#
#   pairs
#   <glyph> <glyph>
#   weights
#   <glyph> <int>       (absent symbols default to weight 1)


def emit_pairing(p: PairedAlphabet) -> str:
    a = p.alphabet
    lines = []
    if a.glyphs is not None:
        lines.append("# alphabet " + " ".join(a.glyphs))
    lines.append("pairs")
    for s in range(a.size):
        if s <= p.partner[s]:
            lines.append(f"{a.glyph(s)} {a.glyph(p.partner[s])}")
    lines.append("weights")
    for s in range(a.size):
        lines.append(f"{a.glyph(s)} {p.weight[s]}")
    return "\n".join(lines) + "\n"


def parse_pairing(text: str) -> PairedAlphabet:
    glyphs: list[str] = []
    pair_lines: list[tuple[str, str]] = []
    weight_lines: list[tuple[str, int]] = []
    section = None
    declared = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            body = line[1:].strip() if line.startswith("#") else ""
            if body.startswith("alphabet "):
                declared = body.split()[1:]
            continue
        if line == "pairs":
            section = "pairs"
            continue
        if line == "weights":
            section = "weights"
            continue
        parts = line.split()
        if section == "pairs":
            if len(parts) != 2:
                raise ParseError(f"bad pair line {line!r}", lineno)
            pair_lines.append((parts[0], parts[1]))
            for g in parts:
                if g not in glyphs:
                    glyphs.append(g)
        elif section == "weights":
            if len(parts) != 2:
                raise ParseError(f"bad weight line {line!r}", lineno)
            weight_lines.append((parts[0], int(parts[1])))
        else:
            raise ParseError("line outside pairs/weights sections", lineno)
    if declared is not None:
        glyphs = declared
    if not glyphs:
        raise ParseError("pairing file declares no symbols", None)
    alphabet = Alphabet.from_glyphs(glyphs)
    partner = list(range(alphabet.size))
    for g1, g2 in pair_lines:
        s1, s2 = alphabet.symbol_of(g1), alphabet.symbol_of(g2)
        partner[s1], partner[s2] = s2, s1
    weight = [1] * alphabet.size
    for g, w in weight_lines:
        weight[alphabet.symbol_of(g)] = w
    return PairedAlphabet(alphabet, tuple(partner), tuple(weight))
