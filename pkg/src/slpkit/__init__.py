"""Analysis toolkit for grammar-compressed strings.

Algorithms that work directly on straight-line programs (pattern matching,
automata acceptance, subsequence / Hamming / disjointness), decompress-and-solve
oracles (CFG recognition, RNA folding, LCS), and generators that turn small
combinatorial problems (orthogonal vectors, cliques, k-SUM) into certified
compressed-string instances.
"""

from .slp import Alphabet, Slp, from_literal, concat, repeat, balance, char_at, decompress, stats

__all__ = [
    "Alphabet",
    "Slp",
    "from_literal",
    "concat",
    "repeat",
    "balance",
    "char_at",
    "decompress",
    "stats",
]
