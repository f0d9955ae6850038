"""``renacount`` command line.

Tables go out as CSV (with a leading ``#`` provenance line), nested reports
as JSON.  Nothing here reads the clock, so equal flags give equal bytes.

Exit codes: 0 ok, 1 usage, 2 check failure, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys
from importlib import metadata

import mpmath as mp

from . import asymptotics as asy
from .expr import AlphabetError, ExprSyntaxError, format_expr, parse
from .glushkov import build_glushkov, count_functions, position_sets
from .kernels import STAT_COLUMNS, stats_for
from .oracle import BudgetExceeded, oracle_record, run_oracle_suite
from .sampler import ImpossibleSize, SamplerSpec, sample_batch
from .series import coeff_table, coeffs_B

EXIT_OK, EXIT_USAGE, EXIT_CHECK, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def series_budget(k: int) -> int:
    """Largest n-max accepted by ``count`` (coefficient size grows like n log(1/eta_k))."""
    if k <= 5:
        return 4000
    return int(4000 * math.log(1 + math.sqrt(48)) / math.log(1 + math.sqrt(8 + 8 * k)))


def _versions() -> dict:
    out = {"python": platform.python_version()}
    for dist in ("artifact", "numpy", "numba", "mpmath", "gmpy2"):
        try:
            out[dist] = metadata.version(dist)
        except metadata.PackageNotFoundError:
            out[dist] = None
    return out


def _provenance(args) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    return {"flags": flags, "versions": _versions()}


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, doc: dict) -> None:
    doc = {**doc, "provenance": _provenance(args)}
    _emit(args, json.dumps(doc, indent=2, sort_keys=False) + "\n")


def _emit_csv(args, header: list[str], rows) -> None:
    buf = io.StringIO()
    buf.write("# " + json.dumps(_provenance(args), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    _emit(args, buf.getvalue())


def _need(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _fmt(x, digits: int = 15) -> str:
    return mp.nstr(x, digits)


# ---------------------------------------------------------------------------

def cmd_count(args) -> int:
    k, n_max = args.k, args.n_max
    _need(k >= 1, "--k must be >= 1")
    _need(n_max >= 1, "--n-max must be >= 1")
    if n_max > series_budget(k):
        raise BudgetExceeded(f"--n-max {n_max} exceeds the series budget {series_budget(k)} for k={k}")
    if args.cls == "re":
        B = coeffs_B(k, n_max)
        rows = [[n, B[n]] for n in range(n_max + 1)]
        header = ["n", "B"]
    else:
        t = coeff_table(k, n_max, include_B=False)
        names = ["R", "R_eps", "L", "F", "S", "E", "Estar", "T"]
        rows = [[n] + [t[s][n] for s in names] for n in range(n_max + 1)]
        header = ["n"] + names
    if args.format == "json":
        _emit_json(args, {"k": k, "class": args.cls, "columns": header, "rows": [[str(v) for v in r] for r in rows]})
    else:
        _emit_csv(args, header, rows)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    _need(args.k >= 1 and args.n >= 1, "--k and --n must be >= 1")
    pred = "all" if args.cls == "re" else "rena"
    rec = oracle_record(args.k, args.n, pred, cap=args.cap, workers=args.threads)
    _emit_json(args, rec)
    return EXIT_OK


def cmd_sample(args) -> int:
    _need(args.count >= 0, "--count must be >= 0")
    spec = SamplerSpec(args.k, args.n, "RE" if args.cls == "re" else "REna", args.seed)
    exprs = list(sample_batch(spec, args.count, args.threads))
    if args.stats_only:
        st = stats_for(exprs)
        _emit_csv(args, ["i"] + list(STAT_COLUMNS), [[i] + [int(v) for v in row] for i, row in enumerate(st)])
    else:
        _emit(args, "".join(format_expr(e) + "\n" for e in exprs))
    return EXIT_OK


def cmd_glushkov(args) -> int:
    e = parse(args.expr, args.k)
    nfa = build_glushkov(e)
    ps = position_sets(e)
    cf = count_functions(e)
    doc = {
        "expr": format_expr(e),
        "automaton": nfa.to_json_dict(),
        "first": sorted(ps.first),
        "last": sorted(ps.last),
        "follow": sorted(ps.follow),
        "nullable": ps.nullable,
        "counts": {"f": cf.f, "s": cf.s, "e": cf.e, "e_star": cf.e_star, "t": cf.t},
        "consistent": (cf.f, cf.s, cf.e, cf.e_star) == (len(ps.first), len(ps.last), len(ps.follow), len(ps.follow_star))
        and nfa.n_transitions == cf.t,
    }
    if args.word is not None:
        word = [ord(ch) - 96 for ch in args.word]
        doc["word"] = args.word
        doc["accepts"] = nfa.accepts(word)
    _emit_json(args, doc)
    return EXIT_OK if doc["consistent"] else EXIT_CHECK


def _theory_row(k: int) -> list[str]:
    return asy.singularity_report(k).csv_row()


def cmd_theory(args) -> int:
    ks = args.k_list
    _need(all(k >= 1 for k in ks), "every k must be >= 1")
    with asy.precision(args.precision_digits):
        rows = [_theory_row(k) for k in ks]
    _emit_csv(args, asy.CSV_COLUMNS, rows)
    return EXIT_OK


def _mean_se(xs: list[float]) -> tuple[float, float]:
    m = len(xs)
    mean = sum(xs) / m
    if m < 2:
        return mean, float("nan")
    var = sum((x - mean) ** 2 for x in xs) / (m - 1)
    return mean, math.sqrt(var / m)


def cmd_compare(args) -> int:
    k, n = args.k, args.n
    _need(k >= 1 and n >= 1, "--k and --n must be >= 1")
    _need(args.samples >= 0, "--samples must be >= 0")
    with asy.precision(args.precision_digits):
        doc = {
            "k": k,
            "n": n,
            "theory": {"letters_ratio": _fmt(asy.letters_ratio(k)), "lambda": _fmt(asy.lambda_k(k))},
        }
    if n <= series_budget(k):
        t = coeff_table(k, n, include_B=False)
        R = mp.mpf(t["R"][n])
        doc["exact_series"] = {
            "letters_per_size": _fmt(mp.mpf(t["L"][n]) / (n * R)),
            "transitions_per_size": _fmt(mp.mpf(t["T"][n]) / (n * R)),
        }
    if args.samples > 0:
        exprs = sample_batch(SamplerSpec(k, n, "REna", args.seed), args.samples, args.threads)
        st = stats_for(list(exprs))
        col = {c: i for i, c in enumerate(STAT_COLUMNS)}
        lm, ls = _mean_se([v / n for v in st[:, col["letters"]].tolist()])
        tm, ts = _mean_se([v / n for v in st[:, col["transitions"]].tolist()])
        doc["empirical"] = {
            "samples": args.samples,
            "seed": args.seed,
            "letters_per_size": {"mean": lm, "stderr": ls},
            "transitions_per_size": {"mean": tm, "stderr": ts},
        }
    _emit_json(args, doc)
    return EXIT_OK


def cmd_oracle(args) -> int:
    _need(args.k >= 1 and args.n_max >= 1, "--k and --n-max must be >= 1")
    rep = run_oracle_suite(args.k, args.n_max, cap=args.cap, workers=args.threads)
    d = rep.as_dict()
    _emit_json(args, d)
    if not rep.ok:
        print(rep.first_divergence.describe(), file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _k_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("global")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--precision-digits", type=int, default=None, help="mpmath digits (default 50, 100 above k=1000)")
    g.add_argument("--threads", type=int, default=1)
    g.add_argument("--output", "-o", default=None, help="write here instead of stdout")

    p = _Parser(prog="renacount", description="Counting, sampling and automata for regular expressions "
                                                "without absorbing patterns.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("count", parents=[common], help="exact series coefficients")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--class", dest="cls", choices=("re", "rena"), default="rena")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("enumerate", parents=[common], help="brute-force aggregates at one size")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--class", dest="cls", choices=("re", "rena"), default="rena")
    s.add_argument("--cap", type=int, default=10**7)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("sample", parents=[common], help="uniform random expressions")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--class", dest="cls", choices=("re", "rena"), default="rena")
    s.add_argument("--stats-only", action="store_true", help="emit size/letters/automaton statistics only")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("glushkov", parents=[common], help="position automaton of one expression")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--expr", required=True)
    s.add_argument("--word", default=None, help="letters a..z to run through the automaton")
    s.set_defaults(func=cmd_glushkov)

    s = sub.add_parser("theory", parents=[common], help="singularity table as CSV")
    s.add_argument("--k-list", type=_k_list, default=[2, 3, 5, 10, 50, 100, 1000, 10000])
    s.set_defaults(func=cmd_theory)

    s = sub.add_parser("compare", parents=[common], help="theory vs exact series vs samples")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--samples", type=int, default=0)
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("oracle", parents=[common], help="enumeration vs series equality suite")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--cap", type=int, default=10**7)
    s.set_defaults(func=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ExprSyntaxError, AlphabetError, ImpossibleSize, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
