"""Generators sourced from orthogonal-vector instances.

The workhorse is the tuplified text: per coordinate, one block per k-tuple of
vectors, holding a "zero" or "one" piece depending on whether the product of
the fixed vector and the tuple is zero there.  Whole runs of tuples sharing a
zero factor collapse to one repetition rule, which is what keeps these texts
compressible.
"""

from __future__ import annotations

from ..automata import Dfa
from ..errors import UnequalLength
from ..matching import wildcard_match
from ..slp import Alphabet, RuleBuilder, Slp, substitute
from .instances import Expected, GeneratedInstance
from .sources import KovInstance, OvInstance, solve_source, source_digest

BIN = Alphabet.binary()
WILD = Alphabet.from_glyphs(["0", "1", "*"])


def pad_rules(slp: Slp, extra: int) -> Slp:
    """Inflate the rule count without changing eval (redundant unused rules)."""
    if extra <= 0:
        return slp
    rules = slp.rules[:-1] + [slp.rules[0]] * extra + [slp.rules[-1]]
    # the start rule's children predate the padding, so indices still hold
    return Slp(slp.alphabet, rules)


def tuplify_rules(rb: RuleBuilder, vectors, k: int, b, zero: int, one: int) -> int:
    """Emit rules deriving the tuplified text into an existing builder.

    ``zero``/``one`` are rule indices for the two equal-length pieces; the
    result enumerates coordinates outermost, then all k-tuples of ``vectors``
    lexicographically, writing the piece for b[coord] * product(tuple[coord]).
    """
    a_count = len(vectors)
    d = len(b)
    zero_pow = {0: zero}
    for j in range(1, k + 1):
        zero_pow[j] = rb.power(zero, a_count ** j)
    blocks = []
    for coord in range(d):
        if b[coord] == 0:
            blocks.append(zero_pow[k])
            continue
        nxt = one  # the j = k+1 chain: all factors so far were one
        for j in range(k, 0, -1):
            parts = [
                zero_pow[k - j] if vec[coord] == 0 else nxt for vec in vectors
            ]
            nxt = rb.chain(parts)
        blocks.append(nxt)
    return rb.chain(blocks)


def tuplify(inst: KovInstance, b, piece_zero: Slp, piece_one: Slp) -> Slp:
    """Tuplified text as its own SLP; pieces must have equal length."""
    if piece_zero.length != piece_one.length:
        raise UnequalLength("the zero and one pieces must have equal length")
    if len(b) != inst.d:
        raise ValueError(f"vector b must have dimension {inst.d}")
    rb = RuleBuilder(piece_zero.alphabet)
    zero = rb.import_slp(piece_zero)
    one = rb.import_slp(piece_one)
    return rb.build(tuplify_rules(rb, inst.vectors, inst.k, b, zero, one))


def tuplify_reference(inst: KovInstance, b, piece_zero, piece_one) -> list:
    """Decompressed definition of the tuplified text, for cross-checks."""
    import itertools

    out: list = []
    for coord in range(inst.d):
        for combo in itertools.product(inst.vectors, repeat=inst.k):
            bit = b[coord]
            for vec in combo:
                bit &= vec[coord]
            out.extend(piece_one if bit else piece_zero)
    return out


# -- DFA acceptance -----------------------------------------------------------

OV_ALPHABET = Alphabet.from_glyphs(["0", "1", "#", "!"])
OV_ALPHABET_PADDED = OV_ALPHABET.extended(["~"])
_HASH = 2
_BANG = 3
_GARBAGE = 4


def gen_dfa_from_ov(
    inst: OvInstance,
    pad_text_length: int = 0,
    pad_slp_size: int = 0,
    pad_states: int = 0,
) -> GeneratedInstance:
    """Compressed text plus DFA that accepts iff the instance has an orthogonal pair.

    The text repeats the full roster of first-set vectors once per second-set
    vector; group and vector markers steer a chain of vector-checking gadgets.
    The pad knobs inflate the text (with a garbage symbol every state ignores),
    the SLP and the state count without touching the answer.
    """
    a_vecs, b_vecs, d = inst.a_vectors, inst.b_vectors, inst.d
    b_count = len(b_vecs)
    alphabet = OV_ALPHABET_PADDED if pad_text_length else OV_ALPHABET

    group = [_BANG]
    for vec in a_vecs:
        group.append(_HASH)
        group.extend(vec)
    rb = RuleBuilder(alphabet)
    root = rb.power(rb.literal(group), b_count)
    if pad_text_length:
        root = rb.concat(root, rb.power(rb.terminal(_GARBAGE), pad_text_length))
    text = pad_rules(rb.build(root), pad_slp_size)

    # states: 0..B are the group states; then per j a chain of d+1 vector states
    # plus one per-group sink; missing transitions fall into a global fail state
    ids = {}

    def gid(j):
        return j

    nxt = b_count + 1
    for j in range(1, b_count + 1):
        for pos in range(d + 1):
            ids[("v", j, pos)] = nxt
            nxt += 1
        ids[("sink", j)] = nxt
        nxt += 1
    transitions = {}
    accepting = set()
    transitions[(gid(0), _BANG)] = gid(1)
    for j in range(1, b_count + 1):
        b_vec = b_vecs[j - 1]
        start = ids[("v", j, 0)]
        sink = ids[("sink", j)]
        done = ids[("v", j, d)]
        transitions[(gid(j), _HASH)] = start
        for pos in range(d):
            here = ids[("v", j, pos)]
            transitions[(here, 0)] = ids[("v", j, pos + 1)]
            transitions[(here, 1)] = ids[("v", j, pos + 1)] if b_vec[pos] == 0 else sink
        accepting.add(done)
        for sym in range(4):
            transitions[(done, sym)] = done
        transitions[(sink, 0)] = sink
        transitions[(sink, 1)] = sink
        transitions[(sink, _HASH)] = start
        if j < b_count:
            transitions[(sink, _BANG)] = gid(j + 1)
    if pad_text_length:
        # the garbage symbol parks every state where it is
        for z in range(nxt):
            transitions[(z, _GARBAGE)] = z
    for _ in range(pad_states):
        for sym in range(alphabet.size):
            transitions[(nxt, sym)] = nxt
        nxt += 1
    dfa = Dfa.from_partial(nxt, alphabet, 0, accepting, transitions)

    answer = solve_source(inst)
    return GeneratedInstance(
        payload={"text": text, "automaton": dfa},
        expected=Expected(accept=answer),
        provenance={
            "source": source_digest(inst),
            "kind": "dfa-ov",
            "d": d,
            "a_count": len(a_vecs),
            "b_count": b_count,
        },
    )


# -- wildcard pattern matching ---------------------------------------------------


def gen_wildcard_pm_from_kov(
    inst: KovInstance,
    k1: int,
    k2: int,
    pad_text_length: int = 0,
    pad_slp_size: int = 0,
) -> GeneratedInstance:
    """Compressed text/pattern pair matching iff the source has an orthogonal tuple.

    Per k2-tuple of vectors, the text holds a one-run shield followed by the
    tuplified text of the pointwise minimum; the pattern picks one position per
    coordinate at a common tuple offset.  Padding prefixes the text with ones
    and the pattern with wildcards, preserving the answer.
    """
    import itertools

    if k1 < 1 or k2 < 1 or k1 + k2 != inst.k:
        raise ValueError("need k1, k2 >= 1 with k1 + k2 = k")
    vectors, d = inst.vectors, inst.d
    a_count = len(vectors)
    block = a_count ** k1

    rb = RuleBuilder(BIN)
    zero, one = rb.terminal(0), rb.terminal(1)
    shield = rb.power(one, block)
    parts = []
    if pad_text_length:
        parts.append(rb.power(one, pad_text_length))
    for combo in itertools.product(vectors, repeat=k2):
        pointwise_min = tuple(min(vec[i] for vec in combo) for i in range(d))
        parts.append(shield)
        parts.append(tuplify_rules(rb, vectors, k1, pointwise_min, zero, one))
    text = pad_rules(rb.build(rb.chain(parts)), pad_slp_size)

    pb = RuleBuilder(WILD)
    p_zero = pb.terminal(0)
    head = p_zero
    if d > 1:
        if block > 1:
            stars = pb.power(pb.terminal(2), block - 1)
            unit = pb.concat(stars, p_zero)
        else:
            unit = p_zero
        head = pb.concat(head, pb.power(unit, d - 1))
    if pad_text_length:
        head = pb.concat(pb.power(pb.terminal(2), pad_text_length), head)
    pattern = pad_rules(pb.build(head), pad_slp_size)

    answer = solve_source(inst)
    return GeneratedInstance(
        payload={"text": text, "pattern": pattern},
        expected=Expected(accept=answer),
        provenance={
            "source": source_digest(inst),
            "kind": "wildcard-pm-kov",
            "d": d,
            "a_count": a_count,
            "k1": k1,
            "k2": k2,
        },
    )


# -- reduction to substring Hamming distance ---------------------------------------

FIVE = Alphabet.from_glyphs(["0", "1", "2", "3", "4"])

# per-symbol codes; the trailing 2 3 4 guard forces alignment to code boundaries
CODE_TEXT = {0: (1, 0, 0, 2, 3, 4), 1: (0, 1, 0, 2, 3, 4)}
CODE_PATTERN = {0: (1, 0, 1, 2, 3, 4), 1: (0, 1, 1, 2, 3, 4), 2: (0, 0, 0, 2, 3, 4)}


def code_distance(pattern_sym: int, text_sym: int) -> int:
    """Hamming distance between the two six-symbol codes."""
    return sum(
        a != b for a, b in zip(CODE_PATTERN[pattern_sym], CODE_TEXT[text_sym])
    )


def pm_to_substring_hd(slp_text: Slp, slp_pattern: Slp) -> GeneratedInstance:
    """Rewrite a wildcard-matching instance as a substring-Hamming instance.

    Each text/pattern symbol becomes a six-symbol code; aligned codes are at
    distance 1 when they match (or the pattern holds a wildcard) and 3 when
    they clash, so the minimum distance equals the pattern length exactly when
    the wildcard pattern matches.
    """
    if slp_text.alphabet.size != 2:
        raise ValueError("text must be binary")
    if slp_pattern.alphabet.size != 3:
        raise ValueError("pattern must be over 0/1/*")
    new_text = substitute(slp_text, CODE_TEXT, FIVE)
    new_pattern = substitute(slp_pattern, CODE_PATTERN, FIVE)
    m = slp_pattern.length
    answer = wildcard_match(slp_text, slp_pattern)
    return GeneratedInstance(
        payload={"text": new_text, "pattern": new_pattern},
        expected=Expected(accept=answer, threshold=m, direction="le"),
        provenance={
            "kind": "pm-to-substring-hd",
            "pattern_length": m,
        },
    )
