"""End-to-end experiments: model separability and noisy self-alignment.

Data outputs (``records.tsv``, ``curves.tsv``, ``summary.tsv``, manifests)
are deterministic given the config; wall-clock timings go to a separate
``timings.tsv`` so reruns stay byte-identical.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .align import Alignment, align, ideal_score, score
from .evaluation import ScoredPair, dis, node_correctness, pr_roc
from .features import DEFAULT_VARIANCE_KEEP, node_similarities
from .gots import extract_gots, resolve_k_set
from .models import MODELS, PROFILES, LabeledNetwork, ModelSpec, generate, generate_suite
from .network import TemporalNetwork, format_network, load_network
from .noise import DEFAULT_LEVELS, noise_ladder

log = logging.getLogger(__name__)

DEFAULT_INSTANCES = {"desk": 3, "paper": 10}


@dataclass
class ExperimentConfig:
    family: str = "synthetic"
    out_dir: Path = Path("out")
    k_set: str = "u34"
    include_k2: bool = False
    alphas: tuple[float, ...] = (0.0, 0.5)
    base_seed: int = 0
    profile: str = "desk"
    instances: int | None = None
    models: tuple[str, ...] = MODELS
    density: float = 0.01
    # self-alignment
    input_path: Path | None = None
    model: str = "Random"
    directed: bool = False
    scheme: str = "undirected"
    gamma: float = 0.5
    levels: tuple[float, ...] = DEFAULT_LEVELS
    instances_per_level: int = 5
    # feature options
    variance_keep: float = DEFAULT_VARIANCE_KEEP
    log1p: bool = False
    strict_consecutive: bool = False
    threads: int = 1

    def __post_init__(self):
        self.out_dir = Path(self.out_dir)
        if any(not 0 <= a <= 1 for a in self.alphas):
            raise ValueError("alpha values must be in [0, 1]")
        if self.profile not in PROFILES:
            raise ValueError(f"unknown profile {self.profile!r}")
        if self.input_path is not None and not Path(self.input_path).exists():
            raise FileNotFoundError(self.input_path)

    @property
    def n_instances(self) -> int:
        return self.instances or DEFAULT_INSTANCES[self.profile]

    def echo(self) -> list[str]:
        items = asdict(self)
        items.pop("threads")
        items.pop("out_dir")
        return [f"{k}={v}" for k, v in items.items()]


def _fmt(x: float) -> str:
    return repr(float(x))


def sha256_file(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_tsv(path: Path, header: list[str], rows: list[list], comments=()) -> None:
    lines = [f"# {c}" for c in comments]
    lines.append("\t".join(header))
    lines += ["\t".join(str(x) for x in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def read_tsv(path: Path) -> list[dict[str, str]]:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln and not ln.startswith("#")]
    if not lines:
        return []
    header = lines[0].split("\t")
    return [dict(zip(header, ln.split("\t"))) for ln in lines[1:]]


def _features(cfg: ExperimentConfig, net: TemporalNetwork):
    mode, ks = resolve_k_set(cfg.k_set, cfg.include_k2)
    return extract_gots(net, ks, mode, strict_consecutive=cfg.strict_consecutive)


def _pool_map(fn, jobs, threads: int):
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    return [fn(j) for j in jobs]


# ---------------------------------------------------------------- synthetic

def _extract_job(args):
    cfg, net = args
    t0 = time.perf_counter()
    tensor = _features(cfg, net)
    return tensor, time.perf_counter() - t0


def _pair_job(args):
    cfg, alpha, g, h, fg, fh = args
    t0 = time.perf_counter()
    sim = node_similarities(fg, fh, variance_keep=cfg.variance_keep, log1p=cfg.log1p)
    t1 = time.perf_counter()
    f = align(g, h, sim, alpha, seed=cfg.base_seed)
    obj = score(f, g, h, sim, alpha)
    return obj, t1 - t0, time.perf_counter() - t1


@dataclass
class SyntheticResult:
    records: list[dict]
    areas: dict[float, tuple[float, float]]
    timings: list[list] = field(default_factory=list)


RECORD_FIELDS = ["g", "h", "g_label", "h_label", "alpha", "s_n", "s_e", "total", "g_sha256", "h_sha256"]


def _write_suite(cfg: ExperimentConfig, suite: list[LabeledNetwork]) -> dict[str, str]:
    net_dir = cfg.out_dir / "networks"
    net_dir.mkdir(parents=True, exist_ok=True)
    hashes = {}
    rows = []
    for item in suite:
        path = net_dir / f"{item.name}.net"
        text = format_network(item.network, [f"model={item.label} seed={item.seed}"])
        if not path.exists() or path.read_text() != text:
            path.write_text(text)
        hashes[item.name] = sha256_file(path)
        rows.append([item.name, item.label, item.seed, f"networks/{item.name}.net", hashes[item.name]])
    write_tsv(cfg.out_dir / "networks.tsv", ["name", "label", "seed", "path", "sha256"], rows, cfg.echo())
    return hashes


def run_synthetic(cfg: ExperimentConfig) -> SyntheticResult:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    overrides = dict(PROFILES[cfg.profile], density=cfg.density)
    suite = generate_suite(cfg.models, cfg.n_instances, cfg.base_seed, **overrides)
    hashes = _write_suite(cfg, suite)

    records_path = cfg.out_dir / "records.tsv"
    done = {}
    if records_path.exists():
        for r in read_tsv(records_path):
            if r.get("g_sha256") == hashes.get(r["g"]) and r.get("h_sha256") == hashes.get(r["h"]):
                done[r["g"], r["h"], float(r["alpha"])] = r

    pairs = []
    for i, j in itertools.combinations(range(len(suite)), 2):
        a, b = suite[i], suite[j]
        if a.network.n_nodes > b.network.n_nodes:
            a, b = b, a
        pairs.append((a, b))
    todo = [(a, b, alpha) for a, b in pairs for alpha in cfg.alphas if (a.name, b.name, alpha) not in done]
    log.info("synthetic: %d networks, %d alignments pending (%d reused)", len(suite), len(todo), len(done))

    timings = []
    if todo:
        needed = sorted({x.name for a, b, _ in todo for x in (a, b)})
        by_name = {x.name: x for x in suite}
        extracted = _pool_map(_extract_job, [(cfg, by_name[n].network) for n in needed], cfg.threads)
        tensors = {n: t for n, (t, _) in zip(needed, extracted)}
        timings += [["extract", n, "", _fmt(dt)] for n, (_, dt) in zip(needed, extracted)]
        jobs = [(cfg, alpha, a.network, b.network, tensors[a.name], tensors[b.name]) for a, b, alpha in todo]
        results = _pool_map(_pair_job, jobs, cfg.threads)
        for (a, b, alpha), (obj, t_sim, t_align) in zip(todo, results):
            done[a.name, b.name, alpha] = {
                "g": a.name, "h": b.name, "g_label": a.label, "h_label": b.label, "alpha": _fmt(alpha),
                "s_n": _fmt(obj.s_n), "s_e": _fmt(obj.s_e), "total": _fmt(obj.total),
                "g_sha256": hashes[a.name], "h_sha256": hashes[b.name],
            }
            timings.append(["similarity", f"{a.name}|{b.name}", _fmt(alpha), _fmt(t_sim)])
            timings.append(["align", f"{a.name}|{b.name}", _fmt(alpha), _fmt(t_align)])

    records = [done[a.name, b.name, alpha] for alpha in cfg.alphas for a, b in pairs]
    write_tsv(records_path, RECORD_FIELDS, [[r[k] for k in RECORD_FIELDS] for r in records], cfg.echo())

    areas = {}
    for alpha in cfg.alphas:
        scored = [ScoredPair(r["g_label"], r["h_label"], float(r["total"]))
                  for r in records if float(r["alpha"]) == alpha]
        areas[alpha] = pr_roc(scored)
    write_tsv(cfg.out_dir / "summary.tsv", ["alpha", "aupr", "auroc", "n_pairs"],
              [[_fmt(a), _fmt(p), _fmt(r), len(pairs)] for a, (p, r) in areas.items()], cfg.echo())
    if timings:
        write_tsv(cfg.out_dir / "timings.tsv", ["phase", "item", "alpha", "seconds"], timings)
    return SyntheticResult(records, areas, timings)


def permutation_auroc(records: list[dict], alpha: float, n_shuffles: int = 100, seed: int = 0) -> list[float]:
    """AUROC of the same scores under shuffled network labels."""
    rows = [r for r in records if float(r["alpha"]) == alpha]
    names = sorted({r["g"] for r in rows} | {r["h"] for r in rows})
    labels = {}
    for r in rows:
        labels[r["g"]] = r["g_label"]
        labels[r["h"]] = r["h_label"]
    base = [labels[n] for n in names]
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n_shuffles):
        perm = dict(zip(names, rng.permutation(base)))
        pairs = [ScoredPair(perm[r["g"]], perm[r["h"]], float(r["total"])) for r in rows]
        out.append(pr_roc(pairs)[1])
    return out


# ------------------------------------------------------------ self-alignment

@dataclass
class SelfAlignResult:
    records: list[dict]
    curves: dict[float, list[dict]]
    dis: dict[float, float]


SELF_FIELDS = ["level", "instance", "seed", "alpha", "s_n", "s_e", "total",
               "ideal_s_n", "ideal_s_e", "ideal_total", "node_correctness"]


def _self_job(args):
    cfg, original, f_orig, noisy = args
    f_noisy = _features(cfg, noisy)
    sim = node_similarities(f_orig, f_noisy, variance_keep=cfg.variance_keep, log1p=cfg.log1p)
    truth = Alignment.identity(original.n_nodes)
    out = []
    for alpha in cfg.alphas:
        f = align(original, noisy, sim, alpha, seed=cfg.base_seed)
        out.append((alpha, score(f, original, noisy, sim, alpha), ideal_score(original, noisy, truth, sim, alpha),
                    node_correctness(f, truth)))
    return out


def self_alignment_input(cfg: ExperimentConfig) -> TemporalNetwork:
    if cfg.input_path is not None:
        return load_network(cfg.input_path, None)
    spec = ModelSpec(cfg.model, rng_seed=cfg.base_seed, directed=cfg.directed, density=cfg.density,
                     **PROFILES[cfg.profile])
    return generate(spec)


def run_self_alignment(cfg: ExperimentConfig, network: TemporalNetwork | None = None) -> SelfAlignResult:
    net = network if network is not None else self_alignment_input(cfg)
    if cfg.scheme in ("directed", "pure_directed") and not net.directed:
        raise ValueError(f"scheme {cfg.scheme!r} needs a directed network")
    if cfg.scheme == "undirected" and net.directed:
        raise ValueError("scheme 'undirected' needs an undirected network")
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    (cfg.out_dir / "original.net").write_text(format_network(net))
    ladder = noise_ladder(net, cfg.scheme, cfg.levels, cfg.instances_per_level, cfg.base_seed, cfg.gamma)
    ladder_dir = cfg.out_dir / "ladder"
    ladder_dir.mkdir(exist_ok=True)
    manifest = []
    for c in ladder:
        path = ladder_dir / f"level{c.level:.2f}_inst{c.instance}.net"
        path.write_text(format_network(c.network, [f"scheme={cfg.scheme} p={c.level} seed={c.seed}"]))
        manifest.append([_fmt(c.level), c.instance, c.seed, f"ladder/{path.name}", sha256_file(path)])
    write_tsv(cfg.out_dir / "manifest.tsv", ["level", "instance", "seed", "path", "sha256"], manifest, cfg.echo())

    f_orig = _features(cfg, net)
    results = _pool_map(_self_job, [(cfg, net, f_orig, c.network) for c in ladder], cfg.threads)

    records = []
    for c, per_alpha in zip(ladder, results):
        for alpha, obj, ideal, nc in per_alpha:
            records.append({
                "level": _fmt(c.level), "instance": c.instance, "seed": c.seed, "alpha": _fmt(alpha),
                "s_n": _fmt(obj.s_n), "s_e": _fmt(obj.s_e), "total": _fmt(obj.total),
                "ideal_s_n": _fmt(ideal.s_n), "ideal_s_e": _fmt(ideal.s_e), "ideal_total": _fmt(ideal.total),
                "node_correctness": _fmt(nc),
            })
    records.sort(key=lambda r: (float(r["alpha"]), float(r["level"]), r["instance"]))
    write_tsv(cfg.out_dir / "records.tsv", SELF_FIELDS, [[r[k] for k in SELF_FIELDS] for r in records], cfg.echo())

    curves: dict[float, list[dict]] = {}
    for alpha in cfg.alphas:
        rows = []
        for level in cfg.levels:
            sel = [r for r in records if float(r["alpha"]) == alpha and float(r["level"]) == level]
            rows.append({
                "level": level,
                "produced": float(np.mean([float(r["total"]) for r in sel])),
                "ideal": float(np.mean([float(r["ideal_total"]) for r in sel])),
                "node_correctness": float(np.mean([float(r["node_correctness"]) for r in sel])),
            })
        curves[alpha] = rows
    write_tsv(cfg.out_dir / "curves.tsv", ["alpha", "level", "produced", "ideal", "node_correctness"],
              [[_fmt(a), _fmt(r["level"]), _fmt(r["produced"]), _fmt(r["ideal"]), _fmt(r["node_correctness"])]
               for a, rows in curves.items() for r in rows], cfg.echo())
    distances = {a: dis([r["produced"] for r in rows], [r["ideal"] for r in rows]) for a, rows in curves.items()}
    write_tsv(cfg.out_dir / "summary.tsv", ["alpha", "dis", "node_correctness_level0"],
              [[_fmt(a), _fmt(distances[a]), _fmt(curves[a][0]["node_correctness"])] for a in cfg.alphas],
              cfg.echo())
    return SelfAlignResult(records, curves, distances)


def read_curve(path: Path, alpha: float | None = None) -> tuple[list[float], list[float], list[float]]:
    """Levels, produced and ideal scores from a ``curves.tsv``-style file."""
    rows = read_tsv(path)
    if alpha is not None and rows and "alpha" in rows[0]:
        rows = [r for r in rows if float(r["alpha"]) == alpha]
    rows.sort(key=lambda r: float(r["level"]))
    return ([float(r["level"]) for r in rows], [float(r["produced"]) for r in rows],
            [float(r["ideal"]) for r in rows])
