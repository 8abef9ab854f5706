"""DFA and NFA acceptance on compressed texts.

For a DFA, every rule of the text's SLP gets the state-transition function of
the string it derives; concatenation is function composition, so acceptance
costs one O(q) composition per rule.  For an NFA the same idea runs on boolean
reachability matrices with machine-word packed rows.  Decompressed scans are
kept as oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AlphabetMismatch, ParseError
from .slp import Alphabet, Slp, TERMINAL


@dataclass(frozen=True)
class Dfa:
    """Complete deterministic automaton; delta is total."""

    num_states: int
    alphabet: Alphabet
    start: int
    accepting: frozenset
    delta: tuple  # delta[state][symbol] -> state

    def __post_init__(self):
        if len(self.delta) != self.num_states:
            raise ValueError("delta must have one row per state")
        for row in self.delta:
            if len(row) != self.alphabet.size:
                raise ValueError("delta rows must cover the alphabet")
            if any(not 0 <= t < self.num_states for t in row):
                raise ValueError("transition target out of range")

    @staticmethod
    def from_partial(num_states, alphabet, start, accepting, transitions) -> "Dfa":
        """Build a complete DFA, adding one absorbing fail state if needed.

        ``transitions`` maps (state, symbol) -> state; at most one target each.
        The reported state count includes the added fail state.
        """
        missing = any(
            (z, a) not in transitions
            for z in range(num_states)
            for a in range(alphabet.size)
        )
        q = num_states + (1 if missing else 0)
        fail = num_states if missing else None
        delta = []
        for z in range(q):
            row = []
            for a in range(alphabet.size):
                if z == fail:
                    row.append(fail)
                else:
                    row.append(transitions.get((z, a), fail))
            delta.append(tuple(row))
        return Dfa(q, alphabet, start, frozenset(accepting), tuple(delta))


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic automaton with per-symbol bitmask transition rows."""

    num_states: int
    alphabet: Alphabet
    start: int
    accepting: frozenset
    matrices: tuple  # matrices[symbol][state] -> bitmask of successor states

    def __post_init__(self):
        if len(self.matrices) != self.alphabet.size:
            raise ValueError("need one transition matrix per symbol")
        for m in self.matrices:
            if len(m) != self.num_states:
                raise ValueError("matrix must have one row per state")

    @staticmethod
    def from_transitions(num_states, alphabet, start, accepting, transitions) -> "Nfa":
        """``transitions`` is an iterable of (state, symbol, state) triples."""
        mats = [[0] * num_states for _ in range(alphabet.size)]
        for z, a, t in transitions:
            mats[a][z] |= 1 << t
        return Nfa(
            num_states,
            alphabet,
            start,
            frozenset(accepting),
            tuple(tuple(m) for m in mats),
        )


def _check_alphabet(slp: Slp, auto_alphabet: Alphabet):
    if slp.alphabet.size > auto_alphabet.size:
        raise AlphabetMismatch(
            f"text alphabet ({slp.alphabet.size}) not contained in automaton's "
            f"({auto_alphabet.size})"
        )


def transition_function(slp: Slp, dfa: Dfa) -> tuple:
    """Per-rule composed transition function of the whole derived string."""
    _check_alphabet(slp, dfa.alphabet)
    delta = dfa.delta
    states = range(dfa.num_states)
    funcs: list[tuple] = []
    for a, b in slp.rules:
        if b == TERMINAL:
            funcs.append(tuple(delta[z][a] for z in states))
        else:
            f, g = funcs[a], funcs[b]
            funcs.append(tuple(g[f[z]] for z in states))
    return funcs[-1]


def dfa_accept(slp: Slp, dfa: Dfa) -> bool:
    """Whether the DFA accepts the derived text; never decompresses."""
    return transition_function(slp, dfa)[dfa.start] in dfa.accepting


def bool_matmul(a, b, q: int):
    """Boolean product of two q x q matrices given as bitmask rows."""
    out = []
    for row in a:
        acc = 0
        m = row
        while m:
            low = m & -m
            acc |= b[low.bit_length() - 1]
            m ^= low
        out.append(acc)
    return tuple(out)


def transition_matrix(slp: Slp, nfa: Nfa) -> tuple:
    """Reachability matrix of the whole derived string, one product per rule."""
    _check_alphabet(slp, nfa.alphabet)
    q = nfa.num_states
    mats: list[tuple] = []
    for a, b in slp.rules:
        if b == TERMINAL:
            mats.append(nfa.matrices[a])
        else:
            mats.append(bool_matmul(mats[a], mats[b], q))
    return mats[-1]


def nfa_accept(slp: Slp, nfa: Nfa) -> bool:
    """Whether the NFA accepts the derived text; never decompresses."""
    reach = transition_matrix(slp, nfa)[nfa.start]
    accept_mask = 0
    for z in nfa.accepting:
        accept_mask |= 1 << z
    return bool(reach & accept_mask)


def accept_decompressed(text, automaton) -> bool:
    """Ground-truth scan of a decompressed text (DFA walk / NFA subset run)."""
    if isinstance(automaton, Dfa):
        z = automaton.start
        delta = automaton.delta
        for sym in text:
            z = delta[z][sym]
        return z in automaton.accepting
    if isinstance(automaton, Nfa):
        frontier = 1 << automaton.start
        mats = automaton.matrices
        for sym in text:
            rows = mats[sym]
            nxt = 0
            m = frontier
            while m:
                low = m & -m
                nxt |= rows[low.bit_length() - 1]
                m ^= low
            frontier = nxt
            if not frontier:
                return False
        return any((frontier >> z) & 1 for z in automaton.accepting)
    raise TypeError(f"not an automaton: {automaton!r}")


# -- text format ---------------------------------------------------------------
#
#   dfa|nfa <q> <sigma> <start>
#   accept <state...>            (may list zero states)
#   <state> <symbol> <state>     (one line per transition)


def emit_automaton(auto) -> str:
    header = []
    if auto.alphabet.glyphs is not None:
        header.append("# alphabet " + " ".join(auto.alphabet.glyphs))
    if isinstance(auto, Dfa):
        lines = header + [f"dfa {auto.num_states} {auto.alphabet.size} {auto.start}"]
        lines.append("accept " + " ".join(str(z) for z in sorted(auto.accepting)))
        for z in range(auto.num_states):
            for a in range(auto.alphabet.size):
                lines.append(f"{z} {a} {auto.delta[z][a]}")
    elif isinstance(auto, Nfa):
        lines = header + [f"nfa {auto.num_states} {auto.alphabet.size} {auto.start}"]
        lines.append("accept " + " ".join(str(z) for z in sorted(auto.accepting)))
        for a in range(auto.alphabet.size):
            for z in range(auto.num_states):
                m = auto.matrices[a][z]
                while m:
                    low = m & -m
                    lines.append(f"{z} {a} {low.bit_length() - 1}")
                    m ^= low
    else:
        raise TypeError(f"not an automaton: {auto!r}")
    return "\n".join(lines) + "\n"


def parse_automaton(text: str):
    kind = None
    q = sigma = start = None
    accepting: list[int] = []
    triples: list[tuple[int, int, int]] = []
    seen_accept = False
    glyphs = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            body = line[1:].strip() if line.startswith("#") else ""
            if body.startswith("alphabet "):
                glyphs = body.split()[1:]
            continue
        parts = line.split()
        if parts[0] in ("dfa", "nfa"):
            if len(parts) != 4:
                raise ParseError("expected '<dfa|nfa> q sigma start'", lineno)
            kind = parts[0]
            q, sigma, start = (int(p) for p in parts[1:])
        elif parts[0] == "accept":
            accepting = [int(p) for p in parts[1:]]
            seen_accept = True
        else:
            if kind is None:
                raise ParseError("transition before header", lineno)
            if len(parts) != 3:
                raise ParseError(f"bad transition {line!r}", lineno)
            z, a, t = (int(p) for p in parts)
            if not (0 <= z < q and 0 <= a < sigma and 0 <= t < q):
                raise ParseError(f"transition {line!r} out of range", lineno)
            triples.append((z, a, t))
    if kind is None or not seen_accept:
        raise ParseError("missing header or accept line", None)
    if glyphs is not None and len(glyphs) == sigma:
        alphabet = Alphabet.from_glyphs(glyphs)
    else:
        alphabet = Alphabet(sigma)
    if kind == "dfa":
        transitions = {}
        for z, a, t in triples:
            if (z, a) in transitions and transitions[(z, a)] != t:
                raise ParseError(f"duplicate DFA transition from ({z}, {a})", None)
            transitions[(z, a)] = t
        return Dfa.from_partial(q, alphabet, start, accepting, transitions)
    return Nfa.from_transitions(q, alphabet, start, accepting, triples)
