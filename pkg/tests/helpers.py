"""Shared test utilities: random instance generation and small oracles."""

import itertools
import random

from slpkit.slp import Alphabet, Slp, RuleBuilder, TERMINAL


def random_slp(rng: random.Random, alphabet: Alphabet, n_rules: int, max_len: int) -> Slp:
    """A random SLP with about n_rules rules whose eval stays below max_len.

    Child choices are biased toward recent rules so lengths grow quickly;
    lengths then spread over the whole range up to max_len.
    """
    rb = RuleBuilder(alphabet)
    live = [rb.terminal(rng.randrange(alphabet.size))]

    def pick():
        if rng.random() < 0.65:
            back = min(len(live) - 1, int(rng.expovariate(0.7)))
            return live[-1 - back]
        return rng.choice(live)

    for _ in range(n_rules):
        if rng.random() < 0.15:
            live.append(rb.terminal(rng.randrange(alphabet.size)))
            continue
        a, b = pick(), pick()
        if rb.lens[a] + rb.lens[b] > max_len:
            a, b = rng.choice(live[:4]), rng.choice(live[:4])
            if rb.lens[a] + rb.lens[b] > max_len:
                continue
        live.append(rb.concat(a, b))
    root = max(live, key=lambda i: rb.lens[i])
    return rb.build(root)


def random_slp_of_length(rng, alphabet, target_len, n_rules=40):
    """Random SLP whose decompressed length is close to (and at most) target_len."""
    return random_slp(rng, alphabet, n_rules, target_len)


def random_text(rng: random.Random, alphabet: Alphabet, length: int) -> list:
    return [rng.randrange(alphabet.size) for _ in range(length)]


def greedy_subsequence(pattern, text) -> bool:
    it = iter(text)
    return all(any(t == p for t in it) for p in pattern)


def mutate_symbols(rng: random.Random, slp: Slp, flip_prob=0.4) -> Slp:
    """Same rule structure (hence same length), terminal symbols re-rolled."""
    rules = []
    for a, b in slp.rules:
        if b == TERMINAL and rng.random() < flip_prob:
            rules.append((rng.randrange(slp.alphabet.size), b))
        else:
            rules.append((a, b))
    return Slp(slp.alphabet, rules)


def equal_length_pair(rng: random.Random, alphabet: Alphabet, n_rules: int, max_len: int):
    """Two random SLPs of equal decompressed length."""
    a = random_slp(rng, alphabet, n_rules, max_len)
    if rng.random() < 0.6:
        return a, mutate_symbols(rng, a)
    # different shape: random piece plus a literal tail of the right length
    from slpkit.slp import concat, from_literal

    b = random_slp(rng, alphabet, max(2, n_rules // 2), a.length)
    missing = a.length - b.length
    if missing:
        tail = from_literal([rng.randrange(alphabet.size) for _ in range(missing)], alphabet)
        b = concat(b, tail)
    return a, b


def random_dfa(rng: random.Random, q: int, sigma=2):
    from slpkit.automata import Dfa

    delta = tuple(tuple(rng.randrange(q) for _ in range(sigma)) for _ in range(q))
    accepting = frozenset(z for z in range(q) if rng.random() < 0.4)
    return Dfa(q, Alphabet(sigma), rng.randrange(q), accepting, delta)


def random_nfa(rng: random.Random, q: int, sigma=2):
    from slpkit.automata import Nfa

    triples = [
        (z, a, t)
        for z in range(q)
        for a in range(sigma)
        for t in range(q)
        if rng.random() < 0.3
    ]
    accepting = [z for z in range(q) if rng.random() < 0.3]
    return Nfa.from_transitions(q, Alphabet(sigma), rng.randrange(q), accepting, triples)


def all_graphs(max_vertices: int):
    """Every graph with 1..max_vertices vertices, as Graph objects."""
    from slpkit.hardness.sources import Graph

    out = []
    for v in range(1, max_vertices + 1):
        pairs = list(itertools.combinations(range(v), 2))
        for bits in range(1 << len(pairs)):
            out.append(Graph(v, frozenset(p for i, p in enumerate(pairs) if bits >> i & 1)))
    return out


def vector_multisets(d: int, max_count: int):
    """All multisets of 1..max_count bit-vectors of dimension d."""
    space = list(itertools.product((0, 1), repeat=d))
    out = []
    for count in range(1, max_count + 1):
        out.extend(itertools.combinations_with_replacement(space, count))
    return out


def determinize(nfa):
    """Subset construction, for cross-checking NFA acceptance against a DFA."""
    from slpkit.automata import Dfa

    sigma = nfa.alphabet.size
    start = frozenset([nfa.start])
    states = {start: 0}
    worklist = [start]
    delta_rows = []
    while worklist:
        cur = worklist.pop()
        row = [None] * sigma
        for a in range(sigma):
            mask = 0
            for z in cur:
                mask |= nfa.matrices[a][z]
            nxt = frozenset(i for i in range(nfa.num_states) if (mask >> i) & 1)
            if nxt not in states:
                states[nxt] = len(states)
                worklist.append(nxt)
                delta_rows.append(None)
            row[a] = nxt
        while len(delta_rows) < len(states):
            delta_rows.append(None)
        delta_rows[states[cur]] = row
    delta = [[states[t] for t in row] for row in delta_rows]
    accepting = frozenset(
        idx for s, idx in states.items() if any(z in nfa.accepting for z in s)
    )
    return Dfa(len(states), nfa.alphabet, 0, accepting, delta)
