"""Generators sourced from clique search in small graphs.

All three text families enumerate every k-tuple of vertices in lexicographic
order rather than just the cliques: whole runs of tuples sharing a vertex that
fails a membership or adjacency test collapse to a single repetition rule, so
the texts stay compressible while position arithmetic picks tuples out.
"""

from __future__ import annotations

from ..automata import Nfa
from ..errors import NoHalfClique
from ..parsing_folding import Cfg, PairedAlphabet
from ..slp import Alphabet, RuleBuilder
from .instances import Expected, GeneratedInstance
from .sources import Graph, solve_source, source_digest


# -- per-tuple indicator rule families -------------------------------------------


def membership_rule(rb: RuleBuilder, v_count: int, k: int, subset, leaf_in: int,
                    leaf_out: int, memo: dict) -> int:
    """Rule deriving, per k-tuple in lex order, leaf_in iff subset is inside it."""
    subset = frozenset(subset)
    if len(subset) > k:
        return rb.power(leaf_out, v_count ** k) if k else leaf_out
    if k == 0:
        return leaf_in
    if not subset:
        return rb.power(leaf_in, v_count ** k)
    key = (subset, k, leaf_in, leaf_out)
    cached = memo.get(key)
    if cached is not None:
        return cached
    parts = [
        membership_rule(rb, v_count, k - 1, subset - {v}, leaf_in, leaf_out, memo)
        for v in range(v_count)
    ]
    idx = rb.chain(parts)
    memo[key] = idx
    return idx


def adjacency_rule(rb: RuleBuilder, graph: Graph, k: int, v: int, leaf_in: int,
                   leaf_out: int, memo: dict) -> int:
    """Rule deriving, per k-tuple, leaf_in iff v is adjacent to every entry."""
    if k == 0:
        return leaf_in
    key = (v, k, leaf_in, leaf_out)
    cached = memo.get(key)
    if cached is not None:
        return cached
    vc = graph.num_vertices
    parts = [
        adjacency_rule(rb, graph, k - 1, v, leaf_in, leaf_out, memo)
        if graph.has_edge(u, v)
        else (rb.power(leaf_out, vc ** (k - 1)) if k > 1 else leaf_out)
        for u in range(vc)
    ]
    idx = rb.chain(parts)
    memo[key] = idx
    return idx


def tuple_at(v_count: int, k: int, index: int) -> tuple:
    """The index-th k-tuple of vertices in lexicographic order (0-based)."""
    out = []
    for _ in range(k):
        index, r = divmod(index, v_count)
        out.append(r)
    return tuple(reversed(out))


def is_tuple_clique(graph: Graph, tup) -> bool:
    """Distinct, pairwise adjacent entries."""
    return all(
        tup[i] != tup[j] and graph.has_edge(tup[i], tup[j])
        for i in range(len(tup))
        for j in range(i + 1, len(tup))
    )


# -- NFA acceptance ----------------------------------------------------------------

NFA_ALPHABET = Alphabet.from_glyphs(["0", "1", "#", "$"])
NFA_ALPHABET_PADDED = NFA_ALPHABET.extended(["!"])
_HASH = 2
_DOLLAR = 3
_NFA_GARBAGE = 4


def _vertex_bits(v: int, width: int) -> list:
    return [(v >> (width - 1 - i)) & 1 for i in range(width)]


def gen_nfa_from_clique(
    graph: Graph,
    kappa: int,
    kappa2: int,
    pad_text_length: int = 0,
    pad_slp_size: int = 0,
    pad_states: int = 0,
) -> GeneratedInstance:
    """Compressed text plus NFA accepting iff the graph has a (3*kappa+kappa2)-clique.

    The text lists, per kappa2-clique, many repetitions of that clique's vertex
    encodings; the NFA carries four columns of clique gadgets plus entry/exit
    ladders whose marker counting forces the first and fourth column to pick
    the same clique.  Padding appends a garbage symbol every state ignores,
    redundant rules, or isolated states.
    """
    from .ovgen import pad_rules

    if kappa < 1 or kappa2 < 1:
        raise ValueError("both clique part sizes must be >= 1")
    k = 3 * kappa + kappa2
    v_count = graph.num_vertices
    width = max(1, (v_count - 1).bit_length())
    small = graph.cliques(kappa)
    m = len(small)
    text_cliques = graph.cliques(kappa2)
    alphabet = NFA_ALPHABET_PADDED if pad_text_length else NFA_ALPHABET

    rb = RuleBuilder(alphabet)
    parts = [rb.literal([_DOLLAR])]
    for cl in text_cliques:
        run = [_HASH]
        for _ in range(kappa):
            for u in cl:
                run.extend(_vertex_bits(u, width))
        parts.append(rb.power(rb.literal(run), m + 4))
        parts.append(rb.literal([_DOLLAR]))
    if pad_text_length:
        parts.append(rb.power(rb.terminal(_NFA_GARBAGE), pad_text_length))
    text = pad_rules(rb.build(rb.chain(parts)), pad_slp_size)

    # -- automaton ---------------------------------------------------------
    counter = [0]

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    s = fresh()
    s_ladder = [fresh() for _ in range(m)]
    t_ladder = [fresh() for _ in range(m)]
    t = fresh()
    triples = []
    for sym in range(4):
        triples.append((s, sym, s))
        triples.append((t, sym, t))
    if m:
        triples.append((s, _DOLLAR, s_ladder[0]))
    gadget_start = {}
    gadget_end = {}
    for i, cl in enumerate(small):
        for col in range(4):
            bounds = [fresh() for _ in range(kappa * kappa2 + 1)]
            gadget_start[(i, col)] = bounds[0]
            gadget_end[(i, col)] = bounds[-1]
            for slot in range(kappa * kappa2):
                u = cl[slot // kappa2]
                src, dst = bounds[slot], bounds[slot + 1]
                for w in graph.neighbors(u):
                    path = [src] + [fresh() for _ in range(width - 1)] + [dst]
                    for step, bit in enumerate(_vertex_bits(w, width)):
                        triples.append((path[step], bit, path[step + 1]))
    for i in range(m):
        triples.append((s_ladder[i], 0, s_ladder[i]))
        triples.append((s_ladder[i], 1, s_ladder[i]))
        triples.append((s_ladder[i], _HASH, gadget_start[(i, 0)]))
        if i + 1 < m:
            triples.append((s_ladder[i], _HASH, s_ladder[i + 1]))
        triples.append((t_ladder[i], 0, t_ladder[i]))
        triples.append((t_ladder[i], 1, t_ladder[i]))
        if i + 1 < m:
            triples.append((t_ladder[i], _HASH, t_ladder[i + 1]))
        else:
            # the group's closing marker; only a walk that used all in-group
            # markers (forcing equal first and fourth clique choices) gets here
            triples.append((t_ladder[i], _DOLLAR, t))
        triples.append((gadget_end[(i, 3)], _HASH, t_ladder[i]))
    for col in range(3):
        for i, ci in enumerate(small):
            for j, cj in enumerate(small):
                union = set(ci) | set(cj)
                if len(union) == 2 * kappa and all(
                    graph.has_edge(u, v)
                    for u in ci
                    for v in cj
                ):
                    triples.append(
                        (gadget_end[(i, col)], _HASH, gadget_start[(j, col + 1)])
                    )
    if pad_text_length:
        for z in range(counter[0]):
            triples.append((z, _NFA_GARBAGE, z))
    num_states = counter[0] + max(0, pad_states)
    nfa = Nfa.from_transitions(num_states, alphabet, s, [t], triples)

    answer = solve_source(graph, k)
    return GeneratedInstance(
        payload={"text": text, "automaton": nfa},
        expected=Expected(accept=answer),
        provenance={
            "source": source_digest(graph),
            "kind": "nfa-clique",
            "kappa": kappa,
            "kappa2": kappa2,
            "k": k,
            "states": num_states,
        },
    )


# -- CFG recognition ----------------------------------------------------------------

CFG_ALPHABET = Alphabet.from_glyphs(["0", "1", "#", "$", "x", "y", "z"])
_C_HASH, _C_DOLLAR, _C_X, _C_Y, _C_Z = 2, 3, 4, 5, 6


def _clique_text_parts(rb: RuleBuilder, graph: Graph, k: int, memo: dict):
    """The three reusable text segments: clique test and the two pair tests."""
    vc = graph.num_vertices
    block = vc ** k
    one, zero = rb.terminal(1), rb.terminal(0)
    dollar = rb.power(rb.terminal(_C_DOLLAR), block)
    hash_run = rb.power(rb.terminal(_C_HASH), block)

    middle = [
        membership_rule(rb, vc, k, set(e), one, zero, memo)
        for e in graph.non_edges
    ]
    clique_seg = rb.chain([dollar] + middle + [dollar])

    member_seg = rb.chain(
        [hash_run]
        + [membership_rule(rb, vc, k, {v}, one, zero, memo) for v in range(vc)]
        + [hash_run]
    )
    adj_seg = rb.chain(
        [hash_run]
        + [
            adjacency_rule(rb, graph, k, v, one, zero, memo)
            for v in reversed(range(vc))
        ]
        + [hash_run]
    )
    return clique_seg, member_seg, adj_seg


def gen_cfg_from_clique(
    graph: Graph,
    k: int,
    pad_text_length: int = 0,
    pad_slp_size: int = 0,
) -> GeneratedInstance:
    """Compressed text plus O(log N)-size grammar; membership iff a 3k-clique exists.

    Three offset choices (made by partially consuming the x/y/z runs) pick three
    k-tuples; grammar recursion reads one position per tuple block to check that
    each tuple avoids every non-edge and that the tuples are fully adjacent to
    each other.  Padding appends garbage symbols to the text along with a rule
    that strips them.
    """
    from .ovgen import pad_rules

    if k < 1:
        raise ValueError("tuple arity must be >= 1")
    vc = graph.num_vertices
    block = vc ** k
    alphabet = CFG_ALPHABET.extended(["~"]) if pad_text_length else CFG_ALPHABET

    rb = RuleBuilder(alphabet)
    memo: dict = {}
    clique_seg, member_seg, adj_seg = _clique_text_parts(rb, graph, k, memo)
    x_run = rb.power(rb.terminal(_C_X), block)
    y_run = rb.power(rb.terminal(_C_Y), block)
    z_run = rb.power(rb.terminal(_C_Z), block)
    segments = [
        x_run,
        clique_seg,
        member_seg,
        member_seg,
        adj_seg,
        y_run,
        clique_seg,
        member_seg,
        adj_seg,
        adj_seg,
        clique_seg,
        z_run,
    ]
    if pad_text_length:
        segments.append(rb.power(rb.terminal(CFG_ALPHABET.size), pad_text_length))
    text = pad_rules(rb.build(rb.chain(segments)), pad_slp_size)

    # grammar: "J" jumps over block-1 core symbols to keep offsets aligned
    rules: dict = {}
    jump_body: list = []
    if block > 1:
        levels = (block - 1).bit_length() - 1
        rules["J0"] = [(sym,) for sym in range(CFG_ALPHABET.size)]
        for d in range(1, levels + 1):
            rules[f"J{d}"] = [(f"J{d - 1}", f"J{d - 1}")]
        jump_body = [f"J{d}" for d in range(levels + 1) if (block - 1) >> d & 1]
    rules["J"] = [tuple(jump_body)]
    rules["C"] = [(_C_DOLLAR, "J", "Ct")]
    rules["Ct"] = [(0, "J", "Ct"), (_C_DOLLAR,)]
    rules["PIn"] = [(_C_HASH, "J", "P", "J", _C_HASH)]
    rules["P"] = [
        (1, "J", "P", "J", 1),
        (0, "J", "P", "J", 1),
        (0, "J", "P", "J", 0),
        (_C_HASH, "POut", _C_HASH),
    ]
    rules["QIn"] = [(_C_HASH, "J", "Q", "J", _C_HASH)]
    rules["Q"] = [
        (1, "J", "Q", "J", 1),
        (0, "J", "Q", "J", 1),
        (0, "J", "Q", "J", 0),
        (_C_HASH, "QOut", _C_HASH),
    ]
    rules["S"] = [
        (_C_X, "S"),
        ("S", _C_Z),
        ("J", "C", "J", "PIn", "J", "C", "J"),
    ]
    if pad_text_length:
        rules["S"].insert(0, ("S", CFG_ALPHABET.size))
    rules["POut"] = [("J", "QIn", "J", _C_Y, "J", "C", "J", "QIn", "J")]
    rules["QOut"] = [(_C_HASH, "QOut"), ()]
    grammar = Cfg.from_dict(alphabet, "S", rules)

    answer = solve_source(graph, 3 * k)
    provenance = {
        "source": source_digest(graph),
        "kind": "cfg-clique",
        "k": k,
        "clique_size": 3 * k,
        "grammar_size": grammar.size,
    }
    if k >= 2:
        # tuples with repeated vertices pass the per-tuple test, so for k >= 2
        # the text can be recognized even when the largest clique is smaller
        # than 3k; only k = 1 instances decide the stated clique size exactly
        provenance["duplicate_tuple_caveat"] = "true"
    return GeneratedInstance(
        payload={"text": text, "grammar": grammar},
        expected=Expected(accept=answer),
        provenance=provenance,
    )


# -- RNA folding ----------------------------------------------------------------------

# 48 symbols: bases 0..7, barred or not, at one of three copy levels
RNA_BASES = 8


def rna_symbol(base: int, barred: bool, level: int) -> int:
    return level * 16 + (8 if barred else 0) + base


def rna_alphabet() -> Alphabet:
    glyphs = []
    for level in range(3):
        for barred in (False, True):
            for base in range(RNA_BASES):
                glyphs.append(f"{base}{'~' if barred else ''}{'.' * level}")
    return Alphabet.from_glyphs(glyphs)


RNA_ALPHABET = rna_alphabet()


def rna_pairing(guard_unit: int) -> PairedAlphabet:
    """Partner flips the bar; guard bases 5 and 7 weigh 4x the unit, base 6 8x."""
    partner = []
    weight = []
    for idx in range(48):
        level, rem = divmod(idx, 16)
        barred, base = divmod(rem, 8)
        partner.append(level * 16 + (0 if barred else 8) + base)
        if base in (5, 7):
            weight.append(4 * guard_unit)
        elif base == 6:
            weight.append(8 * guard_unit)
        else:
            weight.append(1)
    return PairedAlphabet(RNA_ALPHABET, tuple(partner), tuple(weight))


def rna_guard(grid, pairing: PairedAlphabet, level: int = 0):
    """Wrap an A x B grid of strings so a folding must commit to one column.

    Returns (text, rho).  Grid entries are symbol lists over ``pairing``; their
    total weight per entry must stay within the budget implied by the guard
    weights (the guard bases at ``level`` must weigh 4AW and 8AW for some W).
    The column-forcing guarantee additionally assumes that no two grid symbols
    pair with each other; entries are meant to find their partners in the
    flanking strings.
    """
    from ..errors import WeightBoundViolated

    a_count = len(grid)
    b_count = len(grid[0]) if grid else 0
    if a_count < 1 or b_count < 1 or any(len(row) != b_count for row in grid):
        raise ValueError("grid must be a nonempty rectangle")
    g5 = rna_symbol(5, False, level)
    g5b = rna_symbol(5, True, level)
    g6 = rna_symbol(6, False, level)
    g6b = rna_symbol(6, True, level)
    g7 = rna_symbol(7, False, level)
    g7b = rna_symbol(7, True, level)
    if pairing.weight[g6] != 2 * pairing.weight[g5]:
        raise ValueError("guard weights must be in ratio 1:2")
    w_budget = pairing.weight[g5] // (4 * a_count)
    if pairing.weight[g5] != 4 * a_count * w_budget or w_budget < 1:
        raise WeightBoundViolated(
            f"guard weight {pairing.weight[g5]} is not 4*A*W for A={a_count}"
        )
    for row in grid:
        for entry in row:
            total = sum(pairing.weight[s] for s in entry)
            if total > w_budget:
                raise WeightBoundViolated(
                    f"grid entry weight {total} exceeds the budget {w_budget}"
                )
    text = [g5] * b_count + [g6, g5b] * b_count
    for row in grid:
        for entry in row:
            text.append(g6b)
            text.extend(entry)
        text.extend([g6] * b_count)
    text += [g6b] * b_count + [g7, g6] * b_count + [g7b] * b_count
    rho = (8 * a_count + 12) * a_count * b_count * w_budget
    return text, rho


def gen_rna_from_clique(graph: Graph, k: int) -> GeneratedInstance:
    """Weighted folding instance whose optimum reaches the threshold iff a
    3k-clique exists.

    Three guarded grids each commit the folding to one k-tuple; per tuple, the
    clique rows can absorb one flank symbol per non-edge avoided and the pair
    rows link tuples that are fully adjacent.
    """
    if k < 1:
        raise ValueError("tuple arity must be >= 1")
    vc = graph.num_vertices
    non_edges = graph.non_edges
    ne = len(non_edges)
    b_count = vc ** k
    a_count = ne + 2 * vc
    w_budget = 3
    pairing = rna_pairing(a_count * w_budget)
    rho = (8 * a_count + 12) * a_count * b_count * w_budget

    rb = RuleBuilder(RNA_ALPHABET)
    memo: dict = {}

    lit_cache: dict = {}

    def lit(*syms):
        idx = lit_cache.get(syms)
        if idx is None:
            idx = rb.literal(list(syms))
            lit_cache[syms] = idx
        return idx

    def guard_slp(rows, level):
        g5 = rna_symbol(5, False, level)
        g5b = rna_symbol(5, True, level)
        g6 = rna_symbol(6, False, level)
        g6b = rna_symbol(6, True, level)
        g7 = rna_symbol(7, False, level)
        g7b = rna_symbol(7, True, level)
        parts = [rb.power(rb.terminal(g5), b_count)]
        parts.append(rb.power(lit(g6, g5b), b_count))
        six_run = rb.power(rb.terminal(g6), b_count)
        for row in rows:
            parts.append(row)
            parts.append(six_run)
        parts.append(rb.power(rb.terminal(g6b), b_count))
        parts.append(rb.power(lit(g7, g6), b_count))
        parts.append(rb.power(rb.terminal(g7b), b_count))
        return rb.chain(parts)

    def member_rows(level, payload_level):
        g6b = rna_symbol(6, True, level)
        two = rna_symbol(2, False, payload_level)
        three = rna_symbol(3, False, payload_level)
        four = rna_symbol(4, False, payload_level)
        leaf_in = lit(g6b, two, four)
        leaf_out = lit(g6b, two, three, four)
        return [
            membership_rule(rb, vc, k, {v}, leaf_in, leaf_out, memo)
            for v in range(vc)
        ]

    def partner_rows(level, payload_level):
        # reversed vertex order and reversed pieces, so the arcs against the
        # forward membership rows nest instead of crossing
        g6b = rna_symbol(6, True, level)
        leaf_in = lit(g6b, rna_symbol(4, True, payload_level), rna_symbol(2, True, payload_level))
        leaf_out = lit(g6b, rna_symbol(4, True, payload_level), rna_symbol(3, True, payload_level))
        return [
            adjacency_rule(rb, graph, k, v, leaf_in, leaf_out, memo)
            for v in reversed(range(vc))
        ]

    def clique_rows(level, payload_level):
        g6b = rna_symbol(6, True, level)
        leaf_in = lit(g6b, rna_symbol(0, True, payload_level))
        leaf_out = lit(g6b, rna_symbol(1, True, payload_level))
        return [
            membership_rule(rb, vc, k, set(e), leaf_in, leaf_out, memo)
            for e in non_edges
        ]

    # grid 1: clique rows, membership rows, membership rows for the next level
    rows1 = clique_rows(0, 0) + member_rows(0, 0) + member_rows(0, 1)
    # grid 2: clique rows', adjacency rows', membership rows''
    rows2 = clique_rows(1, 1) + partner_rows(1, 1) + member_rows(1, 2)
    # grid 3: clique rows'', adjacency rows'', adjacency rows (unprimed payload)
    rows3 = clique_rows(2, 2) + partner_rows(2, 2) + partner_rows(2, 0)

    parts = []
    for level, rows in ((0, rows1), (1, rows2), (2, rows3)):
        if ne:
            parts.append(rb.power(rb.terminal(rna_symbol(1, False, level)), ne))
        parts.append(guard_slp(rows, level))
    text = rb.build(rb.chain(parts))

    threshold = 3 * rho + 6 * vc + 3 * ne
    answer = solve_source(graph, 3 * k)
    provenance = {
        "source": source_digest(graph),
        "kind": "rna-clique",
        "k": k,
        "clique_size": 3 * k,
        "rho": rho,
        "rows": a_count,
        "columns": b_count,
        "weight_budget": w_budget,
    }
    if k >= 2:
        # same caveat as the grammar generator: repeated-vertex tuples can
        # reach the threshold without a full 3k-clique; k = 1 is exact
        provenance["duplicate_tuple_caveat"] = "true"
    return GeneratedInstance(
        payload={"text": text, "pairing": pairing},
        expected=Expected(accept=answer, threshold=threshold, direction="ge"),
        provenance=provenance,
    )


# -- subsequence ------------------------------------------------------------------------


def gen_subsequence_from_clique(
    graph: Graph,
    k: int,
    pad_text_length: int = 0,
    pad_slp_size: int = 0,
) -> GeneratedInstance:
    """Compressed pattern/text pair; the pattern embeds iff a k-clique exists.

    The pattern repeats each half-clique's vertex list; the text answers with
    neighborhood lists, plus enough universal filler blocks that exactly one
    pattern gadget must be matched against a real neighborhood gadget.
    Padding prefixes both sides with a fresh symbol that must match one-to-one.
    """
    from .ovgen import pad_rules

    if k < 4 or k % 2:
        raise ValueError("clique size must be an even integer >= 4")
    half = k // 2
    vc = graph.num_vertices
    halves = graph.cliques(half)
    q = len(halves)
    if q == 0:
        raise NoHalfClique(f"graph has no {half}-clique")
    glyphs = [str(v) for v in range(vc)] + ["#", "$"]
    if pad_text_length:
        glyphs.append("~")
    alphabet = Alphabet.from_glyphs(glyphs)
    hash_sym, dollar = vc, vc + 1

    def gadget(cl):
        return (list(cl) + [hash_sym]) * half

    def neighborhoods(cl):
        out = []
        for u in cl:
            out.extend(graph.neighbors(u))
            out.append(hash_sym)
        return out

    filler = (list(range(vc)) + [hash_sym]) * half

    prb = RuleBuilder(alphabet)
    pattern_core: list = []
    for cl in halves:
        pattern_core.extend(gadget(cl))
        pattern_core.append(dollar)
    p_root = prb.power(prb.literal(pattern_core), q)
    if pad_text_length:
        p_root = prb.concat(prb.power(prb.terminal(vc + 2), pad_text_length), p_root)
    pattern = pad_rules(prb.build(p_root), pad_slp_size)

    trb = RuleBuilder(alphabet)
    parts = []
    if pad_text_length:
        parts.append(trb.power(trb.terminal(vc + 2), pad_text_length))
    for j, cl in enumerate(halves):
        unit = neighborhoods(cl) + [dollar] + filler + [dollar]
        reps = q if j < q - 1 else q - 1
        if reps:
            parts.append(trb.power(trb.literal(unit), reps))
    parts.append(trb.literal(neighborhoods(halves[-1]) + [dollar]))
    text = pad_rules(trb.build(trb.chain(parts)), pad_slp_size)

    answer = solve_source(graph, k)
    return GeneratedInstance(
        payload={"pattern": pattern, "text": text},
        expected=Expected(accept=answer),
        provenance={
            "source": source_digest(graph),
            "kind": "subsequence-clique",
            "k": k,
            "half_cliques": q,
        },
    )
