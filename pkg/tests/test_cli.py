import csv
import json
import os

import pytest

from salstim import cli, gazeval as gz


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """One small gen -> simulate -> eval -> report run shared by the tests."""
    root = tmp_path_factory.mktemp("pipeline")
    ds = root / "ds"
    fix = root / "fix.csv"
    ev = root / "ev"
    rep = root / "rep"
    assert cli.main(["gen", "--out", str(ds), "--seed", "5", "--family", "6,12"]) == 0
    assert cli.main([
        "simulate", "--manifest", str(ds / "manifest.csv"), "--out", str(fix),
        "--participants", "3", "--seed", "2", "--aoi-bias", "0.7",
    ]) == 0
    assert cli.main([
        "eval", "--manifest", str(ds / "manifest.csv"), "--fixations", str(fix),
        "--out", str(ev),
    ]) == 0
    assert cli.main([
        "report", "--manifest", str(ds / "manifest.csv"), "--results", str(ev),
        "--out", str(rep),
    ]) == 0
    return {"root": root, "ds": ds, "fix": fix, "ev": ev, "rep": rep}


def test_gen_outputs(pipeline):
    ds = pipeline["ds"]
    manifest = cli.read_manifest(ds / "manifest.csv")
    assert len(manifest) == 35  # family 6: 28, family 12: 7
    for row in manifest:
        assert (ds / row["image"]).exists()
        assert (ds / row["mask"]).exists()
        assert (ds / "layouts" / (os.path.basename(row["image"])[:-4] + ".json")).exists()
    families = {row["family"] for row in manifest}
    assert families == {6, 12}
    absent = [r for r in manifest if r["subtype"].endswith("-absent")]
    assert len(absent) == 14
    assert all(r["target_x_deg"] == "" for r in absent)


def test_manifest_difficulty_split(pipeline):
    manifest = cli.read_manifest(pipeline["ds"] / "manifest.csv")
    for row in manifest:
        assert row["difficulty"] == ("easy" if row["fc"] > 0.5 else "hard")


def test_verify_ok_and_detects_missing_file(pipeline, tmp_path):
    ds = pipeline["ds"]
    assert cli.main(["verify", "--manifest", str(ds / "manifest.csv")]) == 0
    import shutil

    broken = tmp_path / "broken"
    shutil.copytree(ds, broken)
    manifest = cli.read_manifest(broken / "manifest.csv")
    os.remove(broken / manifest[0]["image"])
    assert cli.main(["verify", "--manifest", str(broken / "manifest.csv")]) == 1


def test_simulate_output_loadable(pipeline):
    records = gz.load_fixations(pipeline["fix"])
    assert len(records) == 3 * 35 * 12
    stimuli = {r.stimulus for r in records}
    assert len(stimuli) == 35


def test_eval_outputs(pipeline):
    ev = pipeline["ev"]
    with open(ev / "results.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 3 * 35
    assert set(rows[0]) == set(cli.RESULT_COLUMNS)
    absent_rows = [r for r in rows if "_feature-absent_" in r["stimulus"]]
    assert absent_rows and all("target-absent" in r["flags"] for r in absent_rows)
    summary = json.loads((ev / "summary.json").read_text())
    assert summary["global"]["rt_si"]["rho"] < 0  # biased observers find targets fast
    assert "12" in summary["per_family"]
    assert summary["per_family"]["12"]["n"] == 21
    for family in ("6", "12"):
        assert summary["per_family"][family]["si_median"] > 0
    assert (ev / "temporal.csv").exists()


def test_eval_rejects_unknown_stimuli(pipeline, tmp_path, capsys):
    ds = pipeline["ds"]
    path = tmp_path / "fix.csv"
    header = ",".join(gz.FIXATION_COLUMNS)
    path.write_text(
        f"{header}\n"
        "p1,no-such-stimulus,1,100,100,0,200\n"
        "p1,12_base_07,1,640,540,0,200\n"
    )
    out = tmp_path / "ev"
    assert cli.main(["eval", "--manifest", str(ds / "manifest.csv"),
                     "--fixations", str(path), "--out", str(out)]) == 0
    rejects = (out / "rejects.txt").read_text().splitlines()
    assert rejects == ["no-such-stimulus"]
    with open(out / "results.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1


def test_eval_empty_fixations(pipeline, tmp_path):
    ds = pipeline["ds"]
    path = tmp_path / "fix.csv"
    path.write_text(",".join(gz.FIXATION_COLUMNS) + "\n")
    out = tmp_path / "ev"
    assert cli.main(["eval", "--manifest", str(ds / "manifest.csv"),
                     "--fixations", str(path), "--out", str(out)]) == 0
    with open(out / "results.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert rows == []


def test_report_outputs(pipeline):
    rep = pipeline["rep"]
    for name in ("report.txt", "per_contrast.csv", "correlations.csv", "temporal.csv"):
        assert (rep / name).exists()
    figures = sorted(os.listdir(rep / "figures"))
    assert "temporal_evolution.png" in figures
    assert any("visual_search" in f for f in figures)
    with open(rep / "per_contrast.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert {r["family"] for r in rows} == {"6", "12"}
    # family 12 has 7 contrast rows
    assert len([r for r in rows if r["family"] == "12"]) == 7


def test_eval_parallel_jobs_match_serial(pipeline, tmp_path):
    out = tmp_path / "ev2"
    assert cli.main([
        "eval", "--manifest", str(pipeline["ds"] / "manifest.csv"),
        "--fixations", str(pipeline["fix"]), "--out", str(out), "--jobs", "2",
    ]) == 0
    serial = (pipeline["ev"] / "results.csv").read_bytes()
    assert (out / "results.csv").read_bytes() == serial


def test_report_on_empty_results(pipeline, tmp_path):
    ev = tmp_path / "ev"
    ev.mkdir()
    (ev / "results.csv").write_text(",".join(cli.RESULT_COLUMNS) + "\n")
    out = tmp_path / "rep"
    assert cli.main(["report", "--manifest", str(pipeline["ds"] / "manifest.csv"),
                     "--results", str(ev), "--out", str(out)]) == 0
    content = (out / "per_contrast.csv").read_text().splitlines()
    assert len(content) == 1  # header only


def test_config_file_defaults_and_flag_priority(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nseed=9\nfamilies=12\nout=" + str(tmp_path / "cfg_out") + "\n")
    assert cli.main(["gen", "--config", str(cfg)]) == 0
    manifest = cli.read_manifest(tmp_path / "cfg_out" / "manifest.csv")
    assert len(manifest) == 7
    flag_out = tmp_path / "flag_out"
    assert cli.main(["gen", "--config", str(cfg), "--out", str(flag_out), "--family", "4"]) == 0
    manifest = cli.read_manifest(flag_out / "manifest.csv")
    assert {row["family"] for row in manifest} == {4}


def test_parse_config_rejects_garbage(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("this is not a pair\n")
    with pytest.raises(ValueError, match="key=value"):
        cli.parse_config(str(cfg))


def test_gen_same_seed_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    cli.main(["gen", "--out", str(a), "--seed", "3", "--family", "12"])
    cli.main(["gen", "--out", str(b), "--seed", "3", "--family", "12"])
    files_a = sorted(
        os.path.join(r, f) for r, _, fs in os.walk(a) for f in fs
    )
    for path_a in files_a:
        path_b = path_a.replace(str(a), str(b), 1)
        with open(path_a, "rb") as fa, open(path_b, "rb") as fb:
            assert fa.read() == fb.read(), path_a
