"""``jrg`` command line.

Subcommands: sample, pairstats, moments, regime, gof, sweep, replay.
Commands that draw random numbers need ``--seed`` or an explicit
``--entropy``.  Files written with ``--out`` are accompanied by
``<out>.manifest.json``; ``jrg replay`` re-runs a manifest.
"""

import argparse
import csv
import io
import json
import math
import sys
import time

from . import __version__
from . import rng as _rng
from . import tolerances
from .edgelist import format_edge_list, read_edge_list
from .errors import JRGError
from .experiments import SWEEP_COLUMNS, Law, run_gof, sweep
from .graph import sample_gnp
from .limits import classify, parse_family
from .moments import moment_report
from .montecarlo import Mode, TrialConfig
from .pairs import graph_summary, iter_pair_stats, pair_stats


class UsageError(JRGError):
    code = "E_USAGE"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt_num(x):
    """17 significant digits so reruns compare byte for byte."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return x
    return float(format(x, ".17g"))


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return None
        return fmt_num(obj)
    return obj


def dump_json(doc):
    return json.dumps(_clean(doc), indent=2, sort_keys=False) + "\n"


def _csv_cell(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return v


def _emit(text, out):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_manifest(out, command, params, seed, argv, started, outputs):
    manifest = {
        "command": command,
        "params": params,
        "seed": seed,
        "version": __version__,
        "argv": argv,
        "outputs": outputs,
        "duration_s": time.perf_counter() - started,
    }
    with open(out + ".manifest.json", "w", newline="\n") as fh:
        fh.write(dump_json(manifest))


def _resolve_seed(args):
    if args.seed is not None:
        return args.seed
    if args.entropy:
        return _rng.fresh_seed()
    raise UsageError("--seed is required (pass --entropy to draw one from the OS)")


def _add_seed(sp):
    sp.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    sp.add_argument("--entropy", action="store_true", help="draw the seed from OS entropy")


def _add_common(sp, formats=("json",)):
    sp.add_argument("--out", help="output path (default: stdout)")
    sp.add_argument("--format", choices=formats, default=formats[0])
    sp.add_argument("--threads", type=int, default=1, help="worker cap; never changes results")


def cmd_sample(args):
    seed = _resolve_seed(args)
    g = sample_gnp(args.n, args.p, seed, trial=args.trial, method=args.method)
    header = {"p": args.p, "seed": seed, "trial": args.trial, "method": args.method}
    return format_edge_list(g, header), {"n": args.n, "p": args.p, "trial": args.trial, "method": args.method}, seed


def cmd_pairstats(args):
    if args.graph:
        g = read_edge_list(args.graph)
        seed = None
    else:
        if args.n is None:
            raise UsageError("pairstats needs --graph FILE or --n with --seed")
        seed = _resolve_seed(args)
        g = sample_gnp(args.n, args.p, seed)
    params = {"graph": args.graph, "n": g.n, "p": args.p, "pair": args.pair}
    if args.pair:
        st = pair_stats(g, args.pair[0], args.pair[1], args.p)
        doc = {"i": args.pair[0], "j": args.pair[1], "s": st.s, "t": st.t, "j_value": st.j}
        return dump_json(doc), params, seed
    if args.format == "csv":
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["i", "j", "s", "t", "jaccard"])
        for (i, j), st in iter_pair_stats(g, args.p):
            w.writerow([i, j, st.s, st.t, _csv_cell(st.j)])
        return out.getvalue(), params, seed
    summary = graph_summary(g, args.p)
    doc = {
        "n": summary.n,
        "p": summary.p,
        "j_avg": summary.j_avg,
        "p1": summary.p1,
        "p2": summary.p2,
        "paths2": summary.paths2,
        "r_sum": summary.r_sum,
        "decomposition": summary.decomposition(),
        "residual": summary.residual(),
    }
    return dump_json(doc), params, seed


def cmd_moments(args):
    rep = moment_report(args.n, args.p)
    doc = {
        "n": rep.n,
        "p": rep.p,
        "mean": rep.mean,
        "var_exact": rep.var_exact,
        "var_asymptotic": rep.var_asymptotic,
        "relative_gap": rep.relative_gap,
        "degenerate": rep.degenerate,
    }
    if args.format == "csv":
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(list(doc))
        w.writerow([_csv_cell(v) for v in doc.values()])
        return out.getvalue(), {"n": args.n, "p": args.p}, None
    return dump_json(doc), {"n": args.n, "p": args.p}, None


def cmd_regime(args):
    fam = parse_family(args.family)
    reg = classify(fam)
    doc = {"family": fam.spec(), "n_min": fam.n_min, **reg.to_dict()}
    return dump_json(doc), {"family": args.family}, None


def cmd_gof(args):
    seed = _resolve_seed(args)
    cfg = TrialConfig(args.n, args.p, args.trials, seed, args.mode, cap=args.cap)
    res = run_gof(cfg, Law(args.law), lam=args.lam, c=args.c, threads=args.threads)
    sample_text = res.sample.to_json() if args.format == "json" else res.sample.to_csv()
    report = dump_json({"config": cfg.to_dict(), "law": args.law, **res.report.to_dict()})
    params = {
        "mode": args.mode,
        "n": args.n,
        "p": args.p,
        "trials": args.trials,
        "law": args.law,
        "lam": args.lam,
        "c": args.c,
        "cap": args.cap,
    }
    return (sample_text, report), params, seed


def cmd_sweep(args):
    seed = _resolve_seed(args)
    n_list = [int(x) for x in args.n_list.split(",") if x.strip()]
    if not n_list:
        raise UsageError("--n-list must name at least one n")
    fam = parse_family(args.family)
    rows = sweep(fam, n_list, args.trials, seed, mode=args.mode, threads=args.threads)
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for row in rows:
        w.writerow([_csv_cell(row[k]) for k in SWEEP_COLUMNS])
    params = {"family": args.family, "n_list": n_list, "trials": args.trials, "mode": args.mode}
    return out.getvalue(), params, seed


def build_parser():
    parser = _Parser(prog="jrg", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("sample", help="sample G(n, p) and write an edge list")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--trial", type=int, default=0)
    sp.add_argument("--method", choices=("auto", "bernoulli", "geometric"), default="auto")
    _add_seed(sp)
    _add_common(sp, ("edges",))

    sp = sub.add_parser("pairstats", help="pair statistics and the average-index summary")
    sp.add_argument("--graph", help="edge-list file")
    sp.add_argument("--n", type=int)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--pair", type=int, nargs=2, metavar=("I", "J"))
    _add_seed(sp)
    _add_common(sp, ("json", "csv"))

    sp = sub.add_parser("moments", help="exact and asymptotic moments of a pair index")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    _add_common(sp, ("json", "csv"))

    sp = sub.add_parser("regime", help="classify a probability family")
    sp.add_argument("family", help="const:<p> | pow:<c>:<gamma> | dense:<c>:<gamma>")
    _add_common(sp)

    sp = sub.add_parser("gof", help="Monte Carlo goodness of fit against a limit law")
    sp.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.PAIR_CONDITIONAL.value)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--law", choices=[law.value for law in Law], default=Law.NORMAL.value)
    sp.add_argument("--lam", type=float, help="Poisson mean (default n p^2)")
    sp.add_argument("--c", type=float, help="dense constant (default n (1 - p))")
    sp.add_argument("--cap", type=int, default=4096, help="largest n allowed in average mode")
    _add_seed(sp)
    _add_common(sp, ("csv", "json"))

    sp = sub.add_parser("sweep", help="goodness-of-fit table along a family")
    sp.add_argument("family")
    sp.add_argument("--n-list", required=True, help="comma-separated graph sizes")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.PAIR_CONDITIONAL.value)
    _add_seed(sp)
    _add_common(sp, ("csv",))

    sp = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    sp.add_argument("manifest")
    sp.add_argument("--out", help="write to this path instead of the recorded one")
    return parser


COMMANDS = {
    "sample": cmd_sample,
    "pairstats": cmd_pairstats,
    "moments": cmd_moments,
    "regime": cmd_regime,
    "gof": cmd_gof,
    "sweep": cmd_sweep,
}


def _replay_argv(args):
    with open(args.manifest) as fh:
        manifest = json.load(fh)
    argv = list(manifest["argv"])
    if "--entropy" in argv:
        argv.remove("--entropy")
    if "--seed" not in argv and manifest.get("seed") is not None:
        argv += ["--seed", str(manifest["seed"])]
    if args.out:
        if "--out" in argv:
            argv[argv.index("--out") + 1] = args.out
        else:
            argv += ["--out", args.out]
    return argv


def run(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "replay":
        return run(_replay_argv(args))
    tolerances.load()  # fail early on a broken JRG_TOLERANCE_TABLE
    started = time.perf_counter()
    text, params, seed = COMMANDS[args.command](args)
    if isinstance(text, tuple):
        sample_text, report = text
        if args.out:
            _emit(sample_text, args.out)
            _emit(report, args.out + ".report.json")
        sys.stdout.write(report)
        outputs = [args.out, args.out + ".report.json"] if args.out else []
    else:
        _emit(text, args.out)
        outputs = [args.out] if args.out else []
    if args.out:
        if seed is not None and "--seed" not in argv:
            argv = [*argv, "--seed", str(seed)]
        _write_manifest(args.out, args.command, params, seed, list(argv), started, outputs)
    return 0


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        return run(argv)
    except JRGError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"E_CONFIG: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"E_IO: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
