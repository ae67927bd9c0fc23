"""Command-line entry point: ``tempalign <subcommand> ...``.

Exit status is 0 on success, 1 on usage errors and 2 on data errors.
Data goes to ``--out`` (or stdout); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .align import Alignment, align, format_alignment, score
from .census import enumerate_occurrences, format_occurrences
from .evaluation import ScoredPair, dis, gain_lower_better, node_correctness, pr_roc
from .experiments import (ExperimentConfig, permutation_auroc, read_curve, read_tsv, run_self_alignment,
                          run_synthetic, sha256_file, write_tsv)
from .features import DEFAULT_VARIANCE_KEEP, format_similarity, node_similarities, similarities_from_matrix
from .gots import K_SETS, extract_gots, format_features, parse_features, resolve_k_set
from .models import MODELS, PROFILES, ModelSpec, generate
from .network import NetworkFormatError, format_network, load_alignment, load_network
from .noise import DEFAULT_LEVELS, SCHEMES, NoiseSpec, noise_ladder, randomize
from .orbits import MODES, build_catalog, dump_catalog

log = logging.getLogger("tempalign")

USAGE_ERROR = 1
DATA_ERROR = 2
# keys that never appear in the config echo: they must not change data outputs
_NOT_ECHOED = {"threads", "quiet", "out_dir", "out", "func", "command", "catalog_command", "experiment_command"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _default_threads() -> int:
    env = os.environ.get("TEMPALIGN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"TEMPALIGN_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _echo(args, command: str) -> list[str]:
    items = [f"{k}={v}" for k, v in sorted(vars(args).items()) if k not in _NOT_ECHOED]
    return [f"tempalign {__version__} {command}", " ".join(items)]


def _emit(args, text: str) -> None:
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)


def _with_header(args, command: str, text: str) -> str:
    return "".join(f"# {h}\n" for h in _echo(args, command)) + text


# ------------------------------------------------------------------ commands

def cmd_generate(args):
    spec = ModelSpec(args.model, n_start=args.n_start, n_end=args.n_end, T=args.snapshots, density=args.density,
                     beta=args.beta, epsilon=args.epsilon, k_seed=args.k_seed, p_cut=args.p_cut, p=args.p, q=args.q,
                     rng_seed=args.seed, directed=args.directed)
    _emit(args, format_network(generate(spec), _echo(args, "generate")))


def cmd_randomize(args):
    net = load_network(args.input)
    if args.ladder:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        ladder = noise_ladder(net, args.scheme, DEFAULT_LEVELS, args.instances, args.seed, args.gamma,
                              args.swap_timestamps)
        rows = []
        for c in ladder:
            name = f"level{c.level:.2f}_inst{c.instance}.net"
            path = out_dir / name
            path.write_text(format_network(c.network, _echo(args, "randomize") + [f"p={c.level} seed={c.seed}"]))
            rows.append([f"{c.level:.2f}", c.instance, c.seed, name, sha256_file(path)])
        write_tsv(out_dir / "manifest.tsv", ["level", "instance", "seed", "path", "sha256"], rows,
                  _echo(args, "randomize"))
        log.info("wrote %d noisy copies to %s", len(rows), out_dir)
        return
    if args.p is None:
        raise UsageError("randomize needs --p unless --ladder is given")
    spec = NoiseSpec(args.scheme, args.p, args.gamma, args.seed, args.swap_timestamps)
    _emit(args, format_network(randomize(net, spec), _echo(args, "randomize")))


def cmd_census(args):
    net = load_network(args.input)
    catalog = build_catalog(args.k, args.mode)
    times = [args.snapshot] if args.snapshot is not None else range(1, net.T + 1)
    occs = []
    for t in times:
        occs += enumerate_occurrences(net.snapshot_at(t), catalog)
    _emit(args, _with_header(args, "census", format_occurrences(occs)))


def _tensor(args, path):
    mode, ks = resolve_k_set(args.k_set, args.include_k2)
    net = load_network(path)
    return net, extract_gots(net, ks, mode, strict_consecutive=args.strict_consecutive, threads=args.threads)


def cmd_extract(args):
    _, tensor = _tensor(args, args.input)
    _emit(args, format_features(tensor, header=_echo(args, "extract")))


def _similarity(args, g_path, h_path):
    if getattr(args, "features", "got") == "file":
        if not (args.g_features and args.h_features):
            raise UsageError("--features file needs --g-features and --h-features")
        fg = parse_features(Path(args.g_features).read_text())
        fh = parse_features(Path(args.h_features).read_text())
        if fg.shape[1] != fh.shape[1]:
            raise ValueError("feature files have different widths")
        joined = np.vstack([fg, fh])
        joined = joined[:, np.any(joined != 0, axis=0)]
        g, h = load_network(g_path), load_network(h_path)
        if fg.shape[0] != g.n_nodes or fh.shape[0] != h.n_nodes:
            raise ValueError("feature rows do not match the network node counts")
        return g, h, similarities_from_matrix(joined, fg.shape[0], args.variance_keep)
    g, tg = _tensor(args, g_path)
    h, th = _tensor(args, h_path)
    return g, h, node_similarities(tg, th, variance_keep=args.variance_keep, log1p=args.log1p)


def cmd_similarity(args):
    _, _, sim = _similarity(args, args.g, args.h)
    _emit(args, format_similarity(sim, _echo(args, "similarity")))


def cmd_align(args):
    g, h, sim = _similarity(args, args.g, args.h)
    f = align(g, h, sim, args.alpha, seed=args.seed)
    obj = score(f, g, h, sim, args.alpha)
    header = _echo(args, "align")
    if args.truth:
        truth = Alignment.from_dict(load_alignment(args.truth), g.n_nodes)
        header.append(f"node_correctness={node_correctness(f, truth):.12g}")
    _emit(args, format_alignment(f, obj, header))


def cmd_evaluate(args):
    rows = read_tsv(args.manifest)
    if not rows:
        raise ValueError(f"{args.manifest}: no records")
    missing = {"g_label", "h_label", args.score_column} - set(rows[0])
    if missing:
        raise ValueError(f"{args.manifest}: missing columns {sorted(missing)}")
    groups: dict[str, list[ScoredPair]] = {}
    for r in rows:
        key = r.get("alpha", "")
        groups.setdefault(key, []).append(ScoredPair(r["g_label"], r["h_label"], float(r[args.score_column])))
    lines = [f"# {h}" for h in _echo(args, "evaluate")] + ["alpha\taupr\tauroc\tn_pairs"]
    for key in sorted(groups, key=lambda x: float(x) if x else -1.0):
        aupr, auroc = pr_roc(groups[key], args.k_step)
        lines.append(f"{key or 'NA'}\t{aupr!r}\t{auroc!r}\t{len(groups[key])}")
    _emit(args, "\n".join(lines) + "\n")


def cmd_curve(args):
    levels, produced, ideal = read_curve(args.curve, args.alpha)
    if not levels:
        raise ValueError(f"{args.curve}: no curve rows")
    d = dis(produced, ideal)
    cols, vals = ["n_levels", "dis"], [str(len(levels)), repr(d)]
    base = None
    if args.baseline:
        _, bp, bi = read_curve(args.baseline, args.alpha)
        base = dis(bp, bi)
    elif args.baseline_dis is not None:
        base = args.baseline_dis
    if base is not None:
        cols += ["baseline_dis", "gain_percent"]
        vals += [repr(base), repr(gain_lower_better(d, base))]
    lines = [f"# {h}" for h in _echo(args, "curve")] + ["\t".join(cols), "\t".join(vals)]
    _emit(args, "\n".join(lines) + "\n")


def cmd_catalog_dump(args):
    _emit(args, dump_catalog(build_catalog(args.k, args.mode)))


def _experiment_config(args, family: str) -> ExperimentConfig:
    return ExperimentConfig(
        family=family, out_dir=Path(args.out_dir), k_set=args.k_set, include_k2=args.include_k2,
        alphas=tuple(args.alpha), base_seed=args.seed, profile=args.profile, density=args.density,
        variance_keep=args.variance_keep, log1p=args.log1p, strict_consecutive=args.strict_consecutive,
        threads=args.threads,
    )


def cmd_experiment_synthetic(args):
    cfg = replace(_experiment_config(args, "synthetic"), instances=args.instances, models=tuple(args.models))
    result = run_synthetic(cfg)
    for alpha, (aupr, auroc) in result.areas.items():
        log.info("alpha=%s AUPR=%.4f AUROC=%.4f", alpha, aupr, auroc)
    if args.permutations:
        alpha = cfg.alphas[0]
        shuffled = permutation_auroc(result.records, alpha, args.permutations, cfg.base_seed)
        write_tsv(cfg.out_dir / "permutation.tsv", ["alpha", "shuffle", "auroc"],
                  [[repr(alpha), i, repr(x)] for i, x in enumerate(shuffled)], cfg.echo())
        log.info("shuffled AUROC 95th percentile: %.4f", float(np.percentile(shuffled, 95)))


def cmd_experiment_self_align(args):
    cfg = replace(_experiment_config(args, "self-alignment"),
                  input_path=Path(args.input) if args.input else None, model=args.model, directed=args.directed,
                  scheme=args.scheme, gamma=args.gamma, instances_per_level=args.instances)
    result = run_self_alignment(cfg)
    for alpha, d in result.dis.items():
        log.info("alpha=%s dis=%.4f", alpha, d)


# -------------------------------------------------------------------- parser

def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # attached to the root and every subcommand so flags work in either position
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="base RNG seed (default 0)")
    p.add_argument("--threads", type=int, default=d(None),
                   help="worker processes (default: $TEMPALIGN_THREADS or all cores)")
    p.add_argument("--out-dir", default=d("out"), help="directory for multi-file outputs (default ./out)")
    p.add_argument("--quiet", action="store_true", default=d(False), help="only print warnings and errors")
    return p


def _feature_flags(p):
    p.add_argument("--k-set", choices=sorted(K_SETS), default="u34")
    p.add_argument("--include-k2", action="store_true", help="also count 2-node transitions")
    p.add_argument("--strict-consecutive", action="store_true",
                   help="only pair occurrences in adjacent snapshots")
    p.add_argument("--variance-keep", type=float, default=DEFAULT_VARIANCE_KEEP)
    p.add_argument("--log1p", action="store_true", help="log(1+x) transform counts before PCA")


def _out(p):
    p.add_argument("--out", "-o", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    parser = _Parser(prog="tempalign", description=__doc__.splitlines()[0], parents=[_global_flags(False)])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=func)
        return p

    p = add("generate", cmd_generate, "simulate a synthetic temporal network")
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--n-start", type=int, default=PROFILES["desk"]["n_start"])
    p.add_argument("--n-end", type=int, default=PROFILES["desk"]["n_end"])
    p.add_argument("--snapshots", type=int, default=PROFILES["desk"]["T"])
    p.add_argument("--density", type=float, default=0.01)
    p.add_argument("--beta", type=float, default=0.2, help="SmallWorld rewiring probability")
    p.add_argument("--epsilon", type=float, default=5e-2, help="GeoGD squared-distance threshold")
    p.add_argument("--k-seed", type=int, default=5, help="GeoGD seed nodes")
    p.add_argument("--p-cut", type=float, default=0.2, help="GeoGD cut-off probability")
    p.add_argument("--p", type=float, default=0.3, help="ScaleFreeGD child-father link probability")
    p.add_argument("--q", type=float, default=0.7, help="ScaleFreeGD edge inheritance probability")
    p.add_argument("--directed", action="store_true")
    _out(p)

    p = add("randomize", cmd_randomize, "build a noisy copy (or a full noise ladder) of a network")
    p.add_argument("input")
    p.add_argument("--scheme", choices=SCHEMES, default="undirected")
    p.add_argument("--p", type=float, help="fraction of events to randomize")
    p.add_argument("--gamma", type=float, default=0.5, help="direction reversal probability (directed scheme)")
    p.add_argument("--swap-timestamps", action="store_true")
    p.add_argument("--ladder", action="store_true", help="write every level and instance into --out-dir")
    p.add_argument("--instances", type=int, default=5, help="instances per ladder level")
    _out(p)

    p = add("census", cmd_census, "list induced connected subgraph occurrences")
    p.add_argument("input")
    p.add_argument("--k", type=int, choices=(2, 3, 4), default=3)
    p.add_argument("--mode", choices=MODES, default="undirected")
    p.add_argument("--snapshot", type=int, help="single snapshot (default: all)")
    _out(p)

    p = add("extract", cmd_extract, "per-node flattened GoT features")
    p.add_argument("input")
    _feature_flags(p)
    _out(p)

    p = add("similarity", cmd_similarity, "node similarity matrix between two networks")
    p.add_argument("g")
    p.add_argument("h")
    _feature_flags(p)
    _out(p)

    p = add("align", cmd_align, "align network G into network H")
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("--alpha", type=float, default=0.0, help="edge-conservation weight in [0, 1]")
    p.add_argument("--features", choices=("got", "file"), default="got")
    p.add_argument("--g-features", help="feature TSV for G (with --features file)")
    p.add_argument("--h-features", help="feature TSV for H (with --features file)")
    p.add_argument("--truth", help="ground-truth alignment file; reports node correctness")
    _feature_flags(p)
    _out(p)

    p = add("evaluate", cmd_evaluate, "AUPR/AUROC from a TSV of scored network pairs")
    p.add_argument("manifest", help="TSV with g_label, h_label and a score column (grouped by alpha if present)")
    p.add_argument("--score-column", default="score")
    p.add_argument("--k-step", type=float, default=0.01)
    _out(p)

    p = add("curve", cmd_curve, "distance between produced and ideal noise curves")
    p.add_argument("curve", help="TSV with level, produced and ideal columns")
    p.add_argument("--alpha", type=float, help="select rows with this alpha")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--baseline", help="baseline curve TSV; reports the relative gain")
    g.add_argument("--baseline-dis", type=float, help="baseline dis value; reports the relative gain")
    _out(p)

    p = add("catalog", None, "inspect graphlet/orbit catalogs")
    csub = p.add_subparsers(dest="catalog_command", metavar="ACTION", parser_class=_Parser)
    csub.required = True
    c = csub.add_parser("dump", help="print graphlets and orbit partitions", parents=[common])
    c.set_defaults(func=cmd_catalog_dump)
    c.add_argument("--k", type=int, choices=(2, 3, 4), default=3)
    c.add_argument("--mode", choices=MODES, default="undirected")
    _out(c)

    p = add("experiment", None, "run an end-to-end experiment")
    esub = p.add_subparsers(dest="experiment_command", metavar="FAMILY", parser_class=_Parser)
    esub.required = True
    for name, func in (("synthetic", cmd_experiment_synthetic), ("self-align", cmd_experiment_self_align)):
        e = esub.add_parser(name, parents=[common])
        e.set_defaults(func=func)
        e.add_argument("--profile", choices=sorted(PROFILES), default="desk")
        e.add_argument("--alpha", type=float, nargs="+", default=[0.0, 0.5])
        e.add_argument("--density", type=float, default=0.01)
        _feature_flags(e)
    e = esub.choices["synthetic"]
    e.add_argument("--models", nargs="+", choices=MODELS, default=list(MODELS))
    e.add_argument("--instances", type=int, help="instances per model (default: 3 desk, 10 paper)")
    e.add_argument("--permutations", type=int, default=0, help="label shuffles for a permutation baseline")
    e = esub.choices["self-align"]
    e.add_argument("--input", help="network file (default: generate one from --model)")
    e.add_argument("--model", choices=MODELS, default="Random")
    e.add_argument("--directed", action="store_true")
    e.add_argument("--scheme", choices=SCHEMES, default="undirected")
    e.add_argument("--gamma", type=float, default=0.5)
    e.add_argument("--instances", type=int, default=5, help="instances per noise level")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        if args.threads is None:
            args.threads = _default_threads()
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        args.func(args)
    except UsageError as exc:
        print(f"tempalign: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except NetworkFormatError as exc:
        print(f"tempalign: {exc}", file=sys.stderr)
        return DATA_ERROR
    except (ValueError, KeyError, IndexError, OSError) as exc:
        print(f"tempalign: error: {exc}", file=sys.stderr)
        return DATA_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
