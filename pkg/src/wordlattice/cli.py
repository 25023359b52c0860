"""Command-line surface.

Every command prints line-delimited `key = value` output (or one JSON
document with --json): the command echo, a parameter echo, the payload, and
the elapsed time last. Payloads are deterministic for identical inputs;
harness commands take an explicit trial-seed flag.

Exit status: 0 success (including "none" answers), 1 rejected validation
verdict, 2 usage or domain errors, 3 resource/budget errors, 4 input parse
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import automata, formats, lattice, prng, shifts, words
from .errors import BudgetExceededError, ParseError

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_PARSE = 4

CONFIG_ENV_VAR = "WORDLATTICE_CONFIG"


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


class Result:
    """Ordered command/params/payload triple with two output renderings."""

    def __init__(self, command: str):
        self.command = command
        self.params: list = []
        self.payload: list = []

    def param(self, key, value):
        self.params.append((key, value))
        return self

    def add(self, key, value):
        self.payload.append((key, value))
        return self

    def emit(self, as_json: bool, elapsed: float, out=None):
        out = out or sys.stdout
        if as_json:
            doc = {
                "command": self.command,
                "params": {k: v for k, v in self.params},
                "payload": {k: v for k, v in self.payload},
                "elapsed_s": elapsed,
            }
            print(json.dumps(doc, default=_fmt), file=out)
            return
        print(f"command = {self.command}", file=out)
        for k, v in self.params:
            print(f"param.{k} = {_fmt(v)}", file=out)
        for k, v in self.payload:
            print(f"{k} = {_fmt(v)}", file=out)
        print(f"elapsed_s = {_fmt(elapsed)}", file=out)


def _word_from_text(text: str) -> words.Word:
    if not text:
        raise ValueError("word must be nonempty")
    alphabet = words.Alphabet(tuple(sorted(set(text))))
    return alphabet.word(text)


def _digit_alphabet(k: int) -> words.Alphabet:
    if k <= 10:
        return words.Alphabet(tuple(str(d) for d in range(k)))
    return words.Alphabet(tuple(range(k)))


# ------------------------------------------------------------------ commands

def cmd_lyndon(args, res: Result) -> int:
    if args.action == "count":
        res.param("n", args.n).param("k", args.k)
        res.add("count", words.count_lyndon(args.n, args.k))
    elif args.action == "list":
        res.param("n", args.n).param("k", args.k)
        out = words.lyndon_words_dividing(args.n, _digit_alphabet(args.k),
                                          budget=args.budget)
        res.add("count", len(out))
        res.add("words", " ".join(w.text() for w in out))
    else:  # factorize
        w = _word_from_text(args.word)
        res.param("word", args.word)
        factorization = words.duval_factorize(w)
        res.add("factors", " ".join(f.text() for f in factorization.factors))
        res.add("factor_count", len(factorization.factors))
    return EXIT_OK


def cmd_debruijn(args, res: Result) -> int:
    res.param("n", args.n).param("k", args.k)
    alphabet = _digit_alphabet(args.k)
    seq = words.de_bruijn_sequence(args.n, alphabet, budget=args.budget)
    res.add("length", len(seq))
    res.add("sequence", seq.text())
    factors = words.cyclic_factors(seq, args.n)
    exactly_once = (len(factors) == args.k ** args.n
                    and len(set(factors)) == args.k ** args.n)
    res.add("each_n_word_exactly_once", exactly_once)
    return EXIT_OK


def cmd_entropy(args, res: Result) -> int:
    sft = formats.parse_sft(Path(args.file).read_text())
    res.param("file", args.file)
    res.param("method", args.method)
    if args.method == "finite-slope":
        res.param("n_max", args.n_max)
        est = shifts.entropy_finite_slope(sft, args.n_max)
    else:
        est = shifts.entropy_transfer_matrix(sft)
    res.add("value_bits_per_symbol", est.value)
    res.add("method", est.method)
    res.add("n_used", est.n_used)
    res.add("error_bound", est.error_bound if est.error_bound is not None else "none")
    res.add("empty_language", est.empty_language)
    if args.figures:
        from .report import render_entropy_figure
        outdir = Path(args.figures)
        outdir.mkdir(parents=True, exist_ok=True)
        fig = render_entropy_figure(sft, max(args.n_max, 2),
                                    outdir / f"entropy_{Path(args.file).stem}.png")
        res.add("figure", str(fig))
    return EXIT_OK


def cmd_sync(args, res: Result) -> int:
    dfa = formats.parse_dfa(Path(args.file).read_text())
    res.param("file", args.file)
    n = dfa.state_count
    res.add("states", n)
    word = automata.shortest_sync_word(dfa)
    bound = (n - 1) ** 2
    res.add("cerny_bound", bound)
    if word is None:
        res.add("synchronizing", False)
        res.add("reset_word", "none")
    else:
        res.add("synchronizing", True)
        res.add("reset_word", word.text() if len(word) else "(empty)")
        res.add("reset_length", len(word))
        res.add("tight", len(word) == bound)
    return EXIT_OK


def cmd_distance(args, res: Result) -> int:
    alphabet = words.Alphabet(tuple(sorted(set(args.u) | set(args.v))))
    res.param("u", args.u).param("v", args.v)
    res.add("edit_distance",
            automata.edit_distance(alphabet.word(args.u), alphabet.word(args.v)))
    return EXIT_OK


def cmd_code(args, res: Result) -> int:
    code = formats.parse_code(Path(args.file).read_text())
    res.param("file", args.file)
    res.add("codewords", len(code.codewords))
    res.add("length", len(code.codewords[0]))
    d = automata.min_distance(code)
    detect, correct = automata.error_capability(d)
    res.add("min_distance", d)
    res.add("detect", detect)
    res.add("correct", correct)
    return EXIT_OK


def _system_from_args(args) -> lattice.LatticeSymbolicSystem:
    kwargs = {}
    config_path = args.config or os.environ.get(CONFIG_ENV_VAR)
    if config_path:
        cfg = formats.parse_config(Path(config_path).read_text())
        kwargs.update(formats.system_kwargs_from_config(cfg))
    if args.N is not None:
        kwargs["N"] = args.N
    if args.q is not None:
        kwargs["q"] = args.q
    if args.window_k is not None:
        kwargs["window_k"] = args.window_k
    if args.profile is not None:
        kwargs["profile"] = args.profile
    kwargs.setdefault("profile", "mixing")
    if kwargs["profile"] == "mixing":
        kwargs.pop("scale", None)
        kwargs.pop("lambda1", None)
    return lattice.default_system(**kwargs)


def _echo_system(res: Result, sys_: lattice.LatticeSymbolicSystem, profile_hint: str):
    res.param("N", sys_.params.N)
    res.param("q", sys_.params.q)
    res.param("window_k", sys_.window_k)
    res.param("profile", profile_hint)
    res.param("entropy_bits", sys_.entropy.value)


def cmd_prg(args, res: Result) -> int:
    sys_ = _system_from_args(args)
    state = prng.PrgState.from_seed(args.seed, sys_, r=args.r)
    bits = state.next_bits(args.nbits)
    _echo_system(res, sys_, args.profile or "mixing")
    res.param("r", args.r)
    res.param("seed", args.seed)
    res.param("nbits", args.nbits)
    if args.raw:
        # header on stderr, bytes on stdout: pipeable into external suites
        res.emit(args.json, 0.0, out=sys.stderr)
        sys.stdout.buffer.write(prng.bits_to_bytes(bits))
        sys.stdout.buffer.flush()
        return EXIT_OK
    text = prng.bits_to_text(bits)
    for i in range(0, len(text), 64):
        res.add(f"bits[{i}]", text[i:i + 64])
    return EXIT_OK


def cmd_prf(args, res: Result) -> int:
    sys_ = _system_from_args(args)
    key = prng.PrfKey(bytes.fromhex(args.key.removeprefix("0x")), sys_)
    x_bits = prng.hex_to_bits(args.input)
    out = prng.prf_eval(key, x_bits, args.m)
    _echo_system(res, sys_, args.profile or "mixing")
    res.param("key", args.key)
    res.param("input", args.input)
    res.param("m", args.m)
    res.add("steps", key.steps_for(x_bits))
    res.add("bits", prng.bits_to_text(out))
    return EXIT_OK


def cmd_validate(args, res: Result) -> int:
    verdict = lattice.validate_parameters(args.N, args.q, args.alpha, args.bits,
                                          C=args.C)
    res.param("N", args.N).param("q", args.q)
    res.param("alpha", args.alpha).param("bits", args.bits).param("C", args.C)
    res.add("accepted", verdict.accepted)
    for check in verdict.conditions:
        res.add(f"condition.{check.name}",
                ("pass" if check.passed else "FAIL") + f" ({check.detail})")
    res.add("proposition_bits", verdict.proposition_bits)
    res.add("theorem_bits", verdict.theorem_bits)
    if verdict.delta is not None:
        res.add("delta", verdict.delta)
    return EXIT_OK if verdict.accepted else EXIT_REJECTED


def cmd_test(args, res: Result) -> int:
    if args.generator == "prg":
        sys_ = _system_from_args(args)
        gen = prng.prg_generator(sys_, args.bits)
        _echo_system(res, sys_, args.profile or "mixing")
    elif args.generator == "random":
        gen = prng.reference_random_generator(args.bits)
    elif args.generator == "constant":
        gen = prng.constant_generator(args.bits)
    elif args.generator == "alternating":
        gen = prng.alternating_generator(args.bits)
    else:  # counter
        gen = prng.counter_generator(args.bits)
    res.param("generator", args.generator)
    res.param("trials", args.trials)
    res.param("bits_per_trial", args.bits)
    res.param("alpha_sig", args.alpha)
    res.param("trial_seed", args.seed)
    report = prng.distinguisher_harness(gen, trials=args.trials,
                                        bits_per_trial=args.bits,
                                        alpha_sig=args.alpha, seed=args.seed)
    for agg in report.aggregates:
        res.add(f"{agg.name}.pass_fraction", agg.pass_fraction)
        res.add(f"{agg.name}.band", f"[{agg.band_low:.6f}, {agg.band_high:.6f}]")
        res.add(f"{agg.name}.in_band", agg.in_band)
    res.add("all_in_band", report.all_in_band)
    if args.figures:
        from .report import render_harness_figure
        outdir = Path(args.figures)
        outdir.mkdir(parents=True, exist_ok=True)
        fig = render_harness_figure(report, outdir / f"harness_{args.generator}.png")
        res.add("figure", str(fig))
    return EXIT_OK


# -------------------------------------------------------------------- parser

def _add_system_flags(p: argparse.ArgumentParser):
    p.add_argument("-N", type=int, default=None, help="ring dimension")
    p.add_argument("-q", type=int, default=None, help="prime modulus")
    p.add_argument("-k", "--window-k", dest="window_k", type=int, default=None,
                   help="window radius")
    p.add_argument("--profile", choices=("mixing", "unit"), default=None,
                   help="embedding table (default mixing)")
    p.add_argument("--config", default=None,
                   help=f"key-value config file (or ${CONFIG_ENV_VAR})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wordlattice",
        description="Words, shifts, synchronizing automata, and ring-embedded "
                    "pseudorandomness.",
    )
    parser.add_argument("--json", action="store_true",
                        help="emit one JSON document instead of key=value lines")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lyndon", help="count, list, or factorize Lyndon words")
    psub = p.add_subparsers(dest="action", required=True)
    pc = psub.add_parser("count")
    pc.add_argument("-n", type=int, required=True)
    pc.add_argument("-k", type=int, required=True)
    pl = psub.add_parser("list")
    pl.add_argument("-n", type=int, required=True)
    pl.add_argument("-k", type=int, required=True)
    pl.add_argument("--budget", type=int, default=words.DEFAULT_ENUM_BUDGET)
    pf = psub.add_parser("factorize")
    pf.add_argument("word")
    p.set_defaults(handler=cmd_lyndon)

    p = sub.add_parser("debruijn", help="necklace-concatenation de Bruijn sequence")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--budget", type=int, default=words.DEFAULT_ENUM_BUDGET)
    p.set_defaults(handler=cmd_debruijn)

    p = sub.add_parser("entropy", help="entropy of a shift of finite type")
    p.add_argument("file", help="SFT description file")
    p.add_argument("--method", choices=("transfer-matrix", "finite-slope"),
                   default="transfer-matrix")
    p.add_argument("--n-max", dest="n_max", type=int, default=16)
    p.add_argument("--figures", default=None, help="directory for rendered figures")
    p.set_defaults(handler=cmd_entropy)

    p = sub.add_parser("sync", help="shortest synchronizing word of a DFA")
    p.add_argument("file", help="DFA description file")
    p.set_defaults(handler=cmd_sync)

    p = sub.add_parser("distance", help="edit distance between two words")
    p.add_argument("u")
    p.add_argument("v")
    p.set_defaults(handler=cmd_distance)

    p = sub.add_parser("code", help="minimum distance and error capability")
    p.add_argument("file", help="codeword list file")
    p.set_defaults(handler=cmd_code)

    p = sub.add_parser("prg", help="deterministic bit stream from a hex seed")
    p.add_argument("--seed", required=True, help="hex seed (>= 16 bits)")
    p.add_argument("--nbits", type=int, required=True)
    p.add_argument("--r", type=int, default=1, help="shift steps per refill")
    p.add_argument("--raw", action="store_true",
                   help="raw bytes on stdout, header on stderr")
    _add_system_flags(p)
    p.set_defaults(handler=cmd_prg)

    p = sub.add_parser("prf", help="keyed function: m bits for an input block")
    p.add_argument("--key", required=True, help="hex key")
    p.add_argument("--input", required=True, help="hex input block")
    p.add_argument("-m", type=int, required=True)
    _add_system_flags(p)
    p.set_defaults(handler=cmd_prf)

    p = sub.add_parser("validate", help="accept/reject security parameters")
    p.add_argument("-N", type=int, required=True)
    p.add_argument("-q", type=int, required=True)
    p.add_argument("-a", "--alpha", dest="alpha", type=float, required=True)
    p.add_argument("-b", "--bits", dest="bits", type=int, required=True)
    p.add_argument("-C", type=float, default=lattice.DEFAULT_DEFICIENCY_C)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("test", help="statistical distinguisher harness")
    p.add_argument("--generator", required=True,
                   choices=("prg", "random", "constant", "alternating", "counter"))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--bits", type=int, default=2**15, help="bits per trial")
    p.add_argument("--alpha", type=float, default=prng.DEFAULT_ALPHA_SIG)
    p.add_argument("--seed", type=int, default=0, help="trial master seed")
    p.add_argument("--figures", default=None, help="directory for rendered figures")
    _add_system_flags(p)
    p.set_defaults(handler=cmd_test)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    name = args.command + (f".{args.action}" if getattr(args, "action", None) else "")
    res = Result(name)
    start = time.perf_counter()
    try:
        rc = args.handler(args, res)
    except BudgetExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    elapsed = time.perf_counter() - start
    if not (getattr(args, "raw", False) and rc == EXIT_OK):
        res.emit(args.json, elapsed)
    return rc


if __name__ == "__main__":
    sys.exit(main())
