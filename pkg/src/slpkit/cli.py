"""Command-line front end: generate instances, run solvers, verify reductions
end to end, and benchmark compressed algorithms against decompress-and-solve.

Exit codes: 0 = success / all instances agree, 1 = a verified instance
disagrees (a real bug signal), 2 = usage, format or precondition failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import automata, matching, parsing_folding, seqcmp, slp
from .errors import SlpkitError, TooLarge
from .hardness import instances as inst_mod
from .hardness import sources
from .hardness.cliquegen import (
    gen_cfg_from_clique,
    gen_nfa_from_clique,
    gen_rna_from_clique,
    gen_subsequence_from_clique,
)
from .hardness.ksumgen import gen_disjointness_from_ksum
from .hardness.lcsgen import gen_lcs_from_kov, verify_lcs_claims
from .hardness.ovgen import gen_dfa_from_ov, gen_wildcard_pm_from_kov, pm_to_substring_hd

DEFAULT_SEED = 20240

# -- solver registry -----------------------------------------------------------


def _fmt_result(value) -> str:
    if isinstance(value, bool):
        return "accept" if value else "reject"
    return str(value)


def _load(path: str):
    text = Path(path).read_text()
    suffix = Path(path).suffix
    if suffix == ".slp":
        return slp.parse_slp(text)
    if suffix == ".aut":
        return automata.parse_automaton(text)
    if suffix == ".cfg":
        return parsing_folding.parse_cfg(text)
    if suffix == ".pairing":
        return parsing_folding.parse_pairing(text)
    if suffix == ".costs":
        return matching.parse_costs(text)
    return sources.parse_source(text)


ALGORITHMS = {
    "dfa-accept": (2, lambda t, a, cap: automata.dfa_accept(t, a)),
    "nfa-accept": (2, lambda t, a, cap: automata.nfa_accept(t, a)),
    "accept-scan": (2, lambda t, a, cap: automata.accept_decompressed(slp.decompress(t, cap), a)),
    "gpm": (3, lambda t, p, c, cap: matching.gpm_compressed(t, slp.decompress(p, cap), c).min_cost),
    "gpm-scan": (
        3,
        lambda t, p, c, cap: matching.gpm_decompressed(
            slp.decompress(t, cap), slp.decompress(p, cap), c
        ).min_cost,
    ),
    "wildcard-match": (2, lambda t, p, cap: matching.wildcard_match(t, p)),
    "substring-hd": (2, lambda t, p, cap: matching.substring_hd(t, p)),
    "cfg-recognize": (
        2,
        lambda t, g, cap: parsing_folding.cfg_recognize(slp.decompress(t, cap), g),
    ),
    "rna-fold": (
        2,
        lambda t, p, cap: parsing_folding.rna_fold(slp.decompress(t, cap), p, max_len=cap),
    ),
    "wrna-fold": (
        2,
        lambda t, p, cap: parsing_folding.wrna_fold(slp.decompress(t, cap), p, max_len=cap),
    ),
    "subsequence": (2, lambda t, p, cap: seqcmp.subsequence_avl(t, slp.decompress(p, cap))),
    "subsequence-rec": (2, lambda p, t, cap: seqcmp.subsequence_recursive(p, t)),
    "hamming": (2, lambda p, t, cap: seqcmp.hamming_recursive(p, t)),
    "disjointness": (2, lambda p, t, cap: seqcmp.disjointness(p, t, decompress_cap=cap)),
    "lcs": (
        2,
        lambda x, y, cap: seqcmp.lcs_dp(slp.decompress(x, cap), slp.decompress(y, cap)).lcs,
    ),
    "lcs-delta": (
        2,
        lambda x, y, cap: seqcmp.lcs_dp(slp.decompress(x, cap), slp.decompress(y, cap)).delta,
    ),
}

# -- reduction registry -----------------------------------------------------------


def _solve_generated(kind: str, inst, cap: int):
    p = inst.payload
    if kind == "dfa-ov":
        return automata.dfa_accept(p["text"], p["automaton"])
    if kind == "wildcard-pm-kov":
        return matching.wildcard_match(p["text"], p["pattern"])
    if kind == "substring-hd-kov":
        return matching.substring_hd(p["text"], p["pattern"])
    if kind == "nfa-clique":
        return automata.nfa_accept(p["text"], p["automaton"])
    if kind == "cfg-clique":
        return parsing_folding.cfg_recognize(slp.decompress(p["text"], cap), p["grammar"])
    if kind == "rna-clique":
        return parsing_folding.wrna_fold(
            slp.decompress(p["text"], cap), p["pairing"], max_len=cap
        )
    if kind == "subsequence-clique":
        return seqcmp.subsequence_recursive(p["pattern"], p["text"])
    if kind == "disjointness-ksum":
        return seqcmp.disjointness(p["pattern"], p["text"], decompress_cap=cap)
    raise SlpkitError(f"no solver for generated kind {kind!r}")


def _oracle_generated(kind: str, inst, cap: int):
    """Decompress-and-solve cross-check for a generated instance."""
    p = inst.payload
    if kind in ("dfa-ov", "nfa-clique"):
        return automata.accept_decompressed(slp.decompress(p["text"], cap), p["automaton"])
    if kind == "wildcard-pm-kov":
        cost = matching.CostFn.wildcard_hamming(p["text"].alphabet)
        return (
            matching.gpm_decompressed(
                slp.decompress(p["text"], cap), slp.decompress(p["pattern"], cap), cost
            ).min_cost
            == 0
        )
    if kind == "substring-hd-kov":
        cost = matching.CostFn.hamming(p["text"].alphabet)
        return matching.gpm_decompressed(
            slp.decompress(p["text"], cap), slp.decompress(p["pattern"], cap), cost
        ).min_cost
    if kind == "cfg-clique":
        return parsing_folding.cfg_recognize(slp.decompress(p["text"], cap), p["grammar"])
    if kind == "rna-clique":
        return parsing_folding.wrna_fold(slp.decompress(p["text"], cap), p["pairing"], max_len=cap)
    if kind == "subsequence-clique":
        return seqcmp.subsequence_decompressed(
            slp.decompress(p["pattern"], cap), slp.decompress(p["text"], cap)
        )
    if kind == "disjointness-ksum":
        pat = slp.decompress(p["pattern"], cap)
        txt = slp.decompress(p["text"], cap)
        return not any(a == 1 and b == 1 for a, b in zip(pat, txt))
    return None


def _make_reductions():
    def dfa_ov(src, args):
        return gen_dfa_from_ov(src)

    def wc_pm(src, args):
        return gen_wildcard_pm_from_kov(src, args.k1, max(1, src.k - args.k1))

    def sub_hd(src, args):
        base = gen_wildcard_pm_from_kov(src, args.k1, max(1, src.k - args.k1))
        inst = pm_to_substring_hd(base.payload["text"], base.payload["pattern"])
        inst.provenance.update(
            {"source": base.provenance["source"], "kind": "substring-hd-kov"}
        )
        inst.expected = inst_mod.Expected(
            accept=base.expected.accept,
            threshold=inst.expected.threshold,
            direction=inst.expected.direction,
        )
        return inst

    def nfa(src, args):
        return gen_nfa_from_clique(src, args.kappa, args.kappa2)

    def cfg(src, args):
        return gen_cfg_from_clique(src, args.k)

    def rna(src, args):
        return gen_rna_from_clique(src, args.k)

    def subseq(src, args):
        return gen_subsequence_from_clique(src, args.k if args.k >= 4 else 4)

    def disj(src, args):
        return gen_disjointness_from_ksum(src, (src.arity - 1) // 2)

    def lcs(src, args):
        return gen_lcs_from_kov(src, args.k1, max(1, (src.k - args.k1) // 2))

    return {
        "dfa-ov": dfa_ov,
        "wildcard-pm-kov": wc_pm,
        "substring-hd-kov": sub_hd,
        "nfa-clique": nfa,
        "cfg-clique": cfg,
        "rna-clique": rna,
        "subsequence-clique": subseq,
        "disjointness-ksum": disj,
        "lcs-kov": lcs,
    }


REDUCTIONS = _make_reductions()


# -- subcommands ----------------------------------------------------------------


def cmd_solve(args) -> int:
    spec = ALGORITHMS.get(args.algorithm)
    if spec is None:
        print(f"unknown algorithm {args.algorithm!r}", file=sys.stderr)
        return 2
    arity, fn = spec
    if len(args.files) != arity:
        print(f"{args.algorithm} needs {arity} input files", file=sys.stderr)
        return 2
    try:
        inputs = [_load(f) for f in args.files]
        t0 = time.perf_counter()
        value = fn(*inputs, args.max_decompress)
        elapsed = time.perf_counter() - t0
    except SlpkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(_fmt_result(value))
    if args.stats:
        stats = {"algorithm": args.algorithm, "time": round(elapsed, 6)}
        for f, obj in zip(args.files, inputs):
            if isinstance(obj, slp.Slp):
                stats.setdefault("n", obj.size)
                stats.setdefault("N", obj.length)
        print(json.dumps(stats), file=sys.stderr)
    return 0


def cmd_gen(args) -> int:
    gen = REDUCTIONS.get(args.reduction)
    if gen is None:
        print(f"unknown reduction {args.reduction!r}", file=sys.stderr)
        return 2
    try:
        src = sources.parse_source(Path(args.source).read_text())
        inst = gen(src, args)
    except (SlpkitError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    # instances whose payload cannot be decompressed for target-side checking
    # are only emitted when explicitly requested; their expected answers are
    # still exact (certified from the source), but carry the uncertified mark
    longest = max(
        (v.length for v in inst.payload.values() if isinstance(v, slp.Slp)), default=0
    )
    if longest > args.max_decompress:
        if not args.uncertified:
            print(
                f"error: payload length {longest} exceeds --max-decompress "
                f"{args.max_decompress}; pass --uncertified to emit anyway",
                file=sys.stderr,
            )
            return 2
        inst.certified = False
    inst_mod.write_bundle(inst, args.out)
    print(f"wrote {args.out}")
    return 0


def _verify_one(name: str, gen, src, args):
    t0 = time.perf_counter()
    inst = gen(src, args)
    t_gen = time.perf_counter() - t0
    kind = inst.provenance.get("kind", name)
    expected = inst.expected

    if name == "lcs-kov":
        t0 = time.perf_counter()
        agree = verify_lcs_claims(src, args.k1, max(1, (src.k - args.k1) // 2))
        t_solve = time.perf_counter() - t0
        target = expected.accept if agree else not expected.accept
        t_oracle = 0.0
    else:
        t0 = time.perf_counter()
        value = _solve_generated(kind, inst, args.max_decompress)
        t_solve = time.perf_counter() - t0
        target = expected.decide(value)
        t_oracle = 0.0
        try:
            t0 = time.perf_counter()
            oracle_value = _oracle_generated(kind, inst, args.max_decompress)
            t_oracle = time.perf_counter() - t0
            if oracle_value is not None and expected.decide(oracle_value) != target:
                return None, inst, t_gen, t_solve, t_oracle  # internal disagreement
        except TooLarge:
            pass
        agree = target == expected.accept

    sizes = {}
    for key, value in inst.payload.items():
        if isinstance(value, slp.Slp):
            if key in ("text", "left"):
                sizes["n"], sizes["N"] = value.size, value.length
            else:
                sizes["m"], sizes["M"] = value.size, value.length
        elif isinstance(value, (automata.Dfa, automata.Nfa)):
            sizes["q"] = value.num_states
        elif isinstance(value, parsing_folding.Cfg):
            sizes["grammar"] = value.size
    return (agree, target, t_gen, t_solve, t_oracle, sizes), inst, t_gen, t_solve, t_oracle


def cmd_verify(args) -> int:
    gen = REDUCTIONS.get(args.reduction)
    if gen is None:
        print(f"unknown reduction {args.reduction!r}", file=sys.stderr)
        return 2
    time_cols = ",t_generate,t_solve,t_oracle" if args.timings else ""
    print(f"id,reduction,source_answer,target_answer,agree{time_cols},n,N,m,M,q,grammar")
    all_agree = True

    def run_one(path):
        src = sources.parse_source(Path(path).read_text())
        return _verify_one(args.reduction, gen, src, args)

    if args.jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(run_one, p) for p in args.sources]
            outcomes = []
            for path, fut in zip(args.sources, futures):
                try:
                    outcomes.append(fut.result())
                except (SlpkitError, ValueError, OSError) as e:
                    print(f"error on {path}: {e}", file=sys.stderr)
                    return 2
    else:
        outcomes = []
        for path in args.sources:
            try:
                outcomes.append(run_one(path))
            except (SlpkitError, ValueError, OSError) as e:
                print(f"error on {path}: {e}", file=sys.stderr)
                return 2

    # report ordering follows instance id regardless of scheduling
    for idx, (result, inst, t_gen, t_solve, t_oracle) in enumerate(outcomes):
        if result is None:
            blanks = ",,," if args.timings else ""
            print(f"{idx},{args.reduction},?,?,routes-disagree{blanks},,,,,,")
            all_agree = False
            continue
        agree, target, t_gen, t_solve, t_oracle, sizes = result
        all_agree &= agree
        row = [
            str(idx),
            args.reduction,
            "accept" if inst.expected.accept else "reject",
            "accept" if target else "reject",
            "yes" if agree else "NO",
        ]
        if args.timings:
            row += [f"{t_gen:.4f}", f"{t_solve:.4f}", f"{t_oracle:.4f}"]
        row += [
            str(sizes.get("n", "")),
            str(sizes.get("N", "")),
            str(sizes.get("m", "")),
            str(sizes.get("M", "")),
            str(sizes.get("q", "")),
            str(sizes.get("grammar", "")),
        ]
        print(",".join(row))
    return 0 if all_agree else 1


# -- benchmarking --------------------------------------------------------------


def _bench_case(generator: str, scale: int, rng: random.Random):
    """Build (payload dict, compressed fn, decompressed fn) for a suite row."""
    bin_a = slp.Alphabet.binary()
    if generator == "dfa-repeat":
        text = slp.repeat(slp.from_literal([0, 1], bin_a), 1 << scale)
        # "last symbol is 1", padded with unreachable states up to q = 8
        rows = [(0, 1), (0, 1)] + [(q, q) for q in range(2, 8)]
        dfa = automata.Dfa(8, bin_a, 0, frozenset([1]), tuple(rows))
        return (
            text,
            lambda: automata.dfa_accept(text, dfa),
            lambda t: automata.accept_decompressed(t, dfa),
        )
    if generator == "gpm-repeat":
        block = [rng.randrange(2) for _ in range(64)]
        text = slp.repeat(slp.from_literal(block, bin_a), 1 << scale)
        pattern = [rng.randrange(2) for _ in range(500)]
        cost = matching.CostFn.hamming(bin_a)
        return (
            text,
            lambda: matching.gpm_compressed(text, pattern, cost).min_cost,
            lambda t: matching.gpm_decompressed(t, pattern, cost).min_cost,
        )
    if generator == "hamming-repeat":
        a = slp.repeat(slp.from_literal([0, 1], bin_a), 1 << (scale - 1))
        b = slp.repeat(slp.from_literal([0, 1, 1, 0], bin_a), 1 << (scale - 2))
        return (
            a,
            lambda: seqcmp.hamming_recursive(a, b),
            lambda t: seqcmp.hamming_decompressed(t, slp.decompress(b, 1 << 62)),
        )
    if generator == "subseq-repeat":
        text = slp.repeat(slp.from_literal([1, 0], bin_a), 1 << scale)
        pattern = [1, 1, 0, 1]
        return (
            text,
            lambda: seqcmp.subsequence_avl(text, pattern),
            lambda t: seqcmp.subsequence_decompressed(pattern, t),
        )
    raise SlpkitError(f"unknown bench generator {generator!r}")


def _median_time(fn, runs=3):
    times = []
    value = None
    for _ in range(runs):
        t0 = time.perf_counter()
        value = fn()
        times.append(time.perf_counter() - t0)
    times.sort()
    return times[len(times) // 2], value


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    try:
        rows = []
        for lineno, raw in enumerate(Path(args.suite).read_text().splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                print(f"suite line {lineno}: expected '<case> <generator> <scale>'",
                      file=sys.stderr)
                return 2
            rows.append((parts[0], parts[1], int(parts[2])))
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print("case,n,N,t_compressed,t_decompress_solve")
    for case, generator, scale in rows:
        try:
            text, run_compressed, run_decompressed = _bench_case(generator, scale, rng)
        except SlpkitError as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
        t_comp, value_comp = _median_time(run_compressed)
        if text.length <= args.max_decompress:
            decomp = slp.decompress(text, args.max_decompress)
            t_dec, value_dec = _median_time(lambda: run_decompressed(decomp))
            if value_dec != value_comp:
                print(f"answer mismatch in case {case}", file=sys.stderr)
                return 1
            dec_field = f"{t_dec:.4f}"
        else:
            dec_field = "infeasible"
        print(f"{case},{text.size},{text.length},{t_comp:.4f},{dec_field}")
    return 0


def cmd_fmt(args) -> int:
    try:
        obj = _load(args.file)
    except (SlpkitError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if isinstance(obj, slp.Slp):
        sys.stdout.write(slp.emit_slp(obj))
    elif isinstance(obj, (automata.Dfa, automata.Nfa)):
        sys.stdout.write(automata.emit_automaton(obj))
    elif isinstance(obj, parsing_folding.Cfg):
        sys.stdout.write(parsing_folding.emit_cfg(obj))
    elif isinstance(obj, parsing_folding.PairedAlphabet):
        sys.stdout.write(parsing_folding.emit_pairing(obj))
    elif isinstance(obj, matching.CostFn):
        sys.stdout.write(matching.emit_costs(obj))
    else:
        sys.stdout.write(sources.emit_source(obj))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slpkit", description="Analysis toolkit for grammar-compressed strings."
    )
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--max-decompress", type=int, default=slp.DEFAULT_DECOMPRESS_CAP)
    parser.add_argument("--uncertified", action="store_true",
                        help="allow sources too large for brute-force certification")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one algorithm on input files")
    p.add_argument("algorithm", help="one of: " + " ".join(sorted(ALGORITHMS)))
    p.add_argument("files", nargs="*")
    p.add_argument("--stats", action="store_true")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("gen", help="generate an instance bundle from a source file")
    p.add_argument("--reduction", required=True, help="one of: " + " ".join(sorted(REDUCTIONS)))
    p.add_argument("source")
    p.add_argument("-o", "--out", required=True)
    _add_reduction_params(p)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("verify", help="generate, solve and cross-check instances")
    p.add_argument("--reduction", required=True)
    p.add_argument("sources", nargs="+")
    p.add_argument("--timings", action="store_true",
                   help="include wall-clock columns (breaks byte-for-byte determinism)")
    _add_reduction_params(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bench", help="time compressed vs decompress-and-solve")
    p.add_argument("suite")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("fmt", help="parse and pretty-print any toolkit file")
    p.add_argument("file")
    p.set_defaults(fn=cmd_fmt)
    return parser


def _add_reduction_params(p):
    p.add_argument("--k", type=int, default=1, help="tuple arity / clique parameter")
    p.add_argument("--k1", type=int, default=1)
    p.add_argument("--kappa", type=int, default=1)
    p.add_argument("--kappa2", type=int, default=1)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    random.seed(args.seed)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
