from pathlib import Path

import pytest

from tempalign.align import Alignment, align
from tempalign.evaluation import node_correctness
from tempalign.experiments import (ExperimentConfig, read_curve, read_tsv, run_self_alignment, run_synthetic,
                                   sha256_file)
from tempalign.features import node_similarities
from tempalign.gots import extract_gots
from tempalign.models import MODELS, ModelSpec, generate
from tempalign.network import load_network

SMALL = dict(models=MODELS, instances=2, alphas=(0.0, 0.5))


def _files(root: Path) -> dict[str, bytes]:
    return {str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*"))
            if p.is_file() and p.name != "timings.tsv"}


@pytest.fixture(scope="module")
def synthetic(tmp_path_factory):
    out = tmp_path_factory.mktemp("syn")
    return out, run_synthetic(ExperimentConfig(out_dir=out, **SMALL))


def test_pair_count(synthetic):
    _, result = synthetic
    assert len(result.records) == 45 * 2
    assert len({(r["g"], r["h"]) for r in result.records}) == 45
    assert set(result.areas) == {0.0, 0.5}
    for aupr, auroc in result.areas.values():
        assert 0 <= aupr <= 1 and 0 <= auroc <= 1


def test_records_are_valid(synthetic):
    out, result = synthetic
    for r in read_tsv(out / "records.tsv"):
        for key in ("s_n", "s_e", "total"):
            assert 0 <= float(r[key]) <= 1
    timings = read_tsv(out / "timings.tsv")
    assert timings and all(float(t["seconds"]) >= 0 for t in timings)


def test_manifest_completeness(synthetic):
    out, _ = synthetic
    manifest = {r["name"]: r for r in read_tsv(out / "networks.tsv")}
    for r in read_tsv(out / "records.tsv"):
        for side in ("g", "h"):
            entry = manifest[r[side]]
            path = out / entry["path"]
            assert path.exists()
            assert sha256_file(path) == entry["sha256"] == r[f"{side}_sha256"]


def test_rerun_is_identical(synthetic, tmp_path):
    out, _ = synthetic
    run_synthetic(ExperimentConfig(out_dir=tmp_path, **SMALL))
    assert _files(tmp_path) == _files(out)


def test_resume_skips_completed_records(synthetic, tmp_path):
    out, _ = synthetic
    run_synthetic(ExperimentConfig(out_dir=tmp_path, **SMALL))
    records = tmp_path / "records.tsv"
    lines = records.read_text().splitlines()
    header_end = next(i for i, ln in enumerate(lines) if not ln.startswith("#")) + 1
    records.write_text("\n".join(lines[:header_end + 30]) + "\n")
    result = run_synthetic(ExperimentConfig(out_dir=tmp_path, **SMALL))
    aligned = [t for t in result.timings if t[0] == "align"]
    assert len(aligned) == 90 - 30
    assert _files(tmp_path) == _files(out)


def test_config_validation(tmp_path):
    with pytest.raises(ValueError):
        ExperimentConfig(out_dir=tmp_path, alphas=(1.5,))
    with pytest.raises(FileNotFoundError):
        ExperimentConfig(out_dir=tmp_path, input_path=tmp_path / "missing.net")
    with pytest.raises(ValueError):
        ExperimentConfig(out_dir=tmp_path, profile="huge")


@pytest.fixture(scope="module")
def self_align(tmp_path_factory):
    out = tmp_path_factory.mktemp("self")
    cfg = ExperimentConfig(family="self-alignment", out_dir=out, model="Random", alphas=(0.0,),
                           instances_per_level=2)
    return out, run_self_alignment(cfg)


def test_self_alignment_curves(self_align):
    out, result = self_align
    rows = result.curves[0.0]
    assert len(rows) == 11
    assert rows[0]["node_correctness"] == 1.0
    assert rows[0]["produced"] == rows[0]["ideal"] == 1.0
    levels, produced, ideal = read_curve(out / "curves.tsv", 0.0)
    assert levels == [r["level"] for r in rows]
    assert produced == [r["produced"] for r in rows]
    assert result.dis[0.0] >= 0
    manifest = read_tsv(out / "manifest.tsv")
    assert len(manifest) == 22
    assert all(sha256_file(out / m["path"]) == m["sha256"] for m in manifest)


def test_self_alignment_level_zero_matches_plain_self_alignment(self_align):
    out, result = self_align
    net = load_network(out / "original.net")
    t = extract_gots(net, (3, 4))
    f = align(net, net, node_similarities(t, t), 0.0)
    assert result.curves[0.0][0]["node_correctness"] == node_correctness(f, Alignment.identity(net.n_nodes))


def test_scheme_must_match_directedness(tmp_path):
    net = generate(ModelSpec("Random", n_start=10, n_end=20, T=3, rng_seed=1))
    cfg = ExperimentConfig(family="self-alignment", out_dir=tmp_path, scheme="pure_directed")
    with pytest.raises(ValueError, match="directed network"):
        run_self_alignment(cfg, net)
    directed = generate(ModelSpec("Random", n_start=10, n_end=20, T=3, rng_seed=1, directed=True))
    with pytest.raises(ValueError):
        run_self_alignment(ExperimentConfig(family="self-alignment", out_dir=tmp_path), directed)
