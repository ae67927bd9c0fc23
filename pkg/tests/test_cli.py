import pytest

from tempalign.cli import main
from tempalign.experiments import read_tsv
from tempalign.models import ModelSpec, generate
from tempalign.network import format_network, load_network


@pytest.fixture(scope="module")
def nets(tmp_path_factory):
    d = tmp_path_factory.mktemp("nets")
    g = generate(ModelSpec("Random", n_start=15, n_end=30, T=4, density=0.08, rng_seed=1))
    h = generate(ModelSpec("SmallWorld", n_start=20, n_end=40, T=4, density=0.08, rng_seed=2))
    (d / "g.net").write_text(format_network(g))
    (d / "h.net").write_text(format_network(h))
    return d


def run(*argv):
    return main([str(a) for a in argv])


def test_align_to_stdout(nets, capsys):
    assert run("align", nets / "g.net", nets / "h.net", "--alpha", 0.5) == 0
    out = capsys.readouterr().out
    assert out.startswith("# tempalign 0.1.0 align\n")
    body = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert len(body) == 30
    assert "alpha=0.5" in out and "s_n=" in out


def test_align_with_truth_reports_node_correctness(nets, tmp_path, capsys):
    truth = tmp_path / "truth.txt"
    truth.write_text("".join(f"{i}\t{i}\n" for i in range(30)))
    assert run("align", nets / "g.net", nets / "g.net", "--truth", truth) == 0
    assert "node_correctness=1" in capsys.readouterr().out


def test_usage_errors_exit_1(nets, capsys):
    with pytest.raises(SystemExit) as exc:
        run("frobnicate")
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        run("align", nets / "g.net", nets / "h.net", "--no-such-flag")
    assert exc.value.code == 1
    assert run("randomize", nets / "g.net") == 1
    assert "--p" in capsys.readouterr().err


def test_malformed_input_exits_2_with_line(tmp_path, capsys):
    bad = tmp_path / "bad.net"
    bad.write_text("#temporal-net nodes=3 snapshots=2 directed=0\n0 1 1 x\n")
    assert run("extract", bad) == 2
    err = capsys.readouterr().err
    assert "bad.net" in err and "line 2" in err


def test_missing_file_exits_2(tmp_path):
    assert run("census", tmp_path / "nope.net") == 2


def test_align_larger_g_is_a_data_error(nets):
    assert run("align", nets / "h.net", nets / "g.net") == 2


def test_generate_and_randomize_roundtrip(tmp_path):
    net = tmp_path / "er.net"
    assert run("generate", "--model", "Random", "--n-start", 10, "--n-end", 20, "--snapshots", 3,
               "--density", 0.1, "-o", net) == 0
    noisy = tmp_path / "noisy.net"
    assert run("randomize", net, "--p", 0.5, "--seed", 3, "-o", noisy) == 0
    a, b = load_network(net), load_network(noisy)
    assert len(a.events) == len(b.events) and a != b


def test_randomize_ladder_manifest(nets, tmp_path):
    assert run("randomize", nets / "g.net", "--ladder", "--instances", 2, "--out-dir", tmp_path) == 0
    manifest = read_tsv(tmp_path / "manifest.tsv")
    assert len(manifest) == 22
    assert all((tmp_path / m["path"]).exists() for m in manifest)


def test_census_and_catalog(nets, capsys):
    assert run("catalog", "dump", "--k", 4) == 0
    dump = capsys.readouterr().out
    assert dump
    assert run("census", nets / "g.net", "--k", 3, "--snapshot", 1) == 0
    assert capsys.readouterr().out.startswith("# tempalign 0.1.0 census")


def test_similarity_values_in_range(nets, capsys):
    assert run("similarity", nets / "g.net", nets / "h.net") == 0
    rows = [ln.split("\t") for ln in capsys.readouterr().out.splitlines() if not ln.startswith("#")]
    values = [float(x) for r in rows for x in r if x]
    assert values and all(0 <= v <= 1 for v in values)


def test_align_from_feature_files(nets, tmp_path, capsys):
    for name in ("g", "h"):
        assert run("extract", nets / f"{name}.net", "-o", tmp_path / f"{name}.tsv") == 0
    assert run("align", nets / "g.net", nets / "h.net", "--features", "file",
               "--g-features", tmp_path / "g.tsv", "--h-features", tmp_path / "h.tsv") == 0
    from_files = capsys.readouterr().out
    assert run("align", nets / "g.net", nets / "h.net") == 0
    direct = capsys.readouterr().out

    def body(text):
        return [ln for ln in text.splitlines() if not ln.startswith("#")]
    assert body(from_files) == body(direct)
    assert run("align", nets / "g.net", nets / "h.net", "--features", "file") == 1


def test_evaluate_on_records(tmp_path, capsys):
    records = tmp_path / "records.tsv"
    records.write_text("g_label\th_label\talpha\ttotal\n"
                       "A\tA\t0.0\t0.9\nA\tB\t0.0\t0.6\nB\tB\t0.0\t0.4\nA\tB\t0.0\t0.1\n")
    assert run("evaluate", records, "--score-column", "total") == 0
    lines = [ln for ln in capsys.readouterr().out.splitlines() if not ln.startswith("#")]
    assert lines[0] == "alpha\taupr\tauroc\tn_pairs"
    alpha, aupr, auroc, n = lines[1].split("\t")
    assert alpha == "0.0" and n == "4"
    assert float(aupr) == pytest.approx(5 / 6) and float(auroc) == pytest.approx(0.75)
    assert run("evaluate", records) == 2  # no "score" column


def test_curve_gain(tmp_path, capsys):
    curve = tmp_path / "curves.tsv"
    curve.write_text("alpha\tlevel\tproduced\tideal\n0.0\t0.0\t0.8\t1.0\n0.0\t0.02\t0.5\t0.5\n")
    assert run("curve", curve, "--alpha", 0.0, "--baseline-dis", 0.3) == 0
    lines = [ln for ln in capsys.readouterr().out.splitlines() if not ln.startswith("#")]
    row = dict(zip(lines[0].split("\t"), lines[1].split("\t")))
    assert float(row["dis"]) == pytest.approx(0.2)
    assert float(row["gain_percent"]) == pytest.approx(50.0)
    with pytest.raises(SystemExit):
        run("curve", curve, "--baseline", curve, "--baseline-dis", 0.3)


def test_threads_env_fallback(nets, monkeypatch, capsys):
    monkeypatch.setenv("TEMPALIGN_THREADS", "2")
    assert run("extract", nets / "g.net") == 0
    with_env = capsys.readouterr().out
    monkeypatch.setenv("TEMPALIGN_THREADS", "many")
    assert run("extract", nets / "g.net") == 1
    capsys.readouterr()
    monkeypatch.delenv("TEMPALIGN_THREADS")
    assert run("extract", nets / "g.net", "--threads", 1) == 0
    assert capsys.readouterr().out == with_env
    assert run("extract", nets / "g.net", "--threads", 0) == 1


def test_global_flags_in_either_position(nets, capsys):
    assert run("--seed", 5, "align", nets / "g.net", nets / "h.net") == 0
    before = capsys.readouterr().out
    assert run("align", nets / "g.net", nets / "h.net", "--seed", 5) == 0
    assert capsys.readouterr().out == before
    assert "seed=5" in before
