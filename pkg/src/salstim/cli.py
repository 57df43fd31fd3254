"""Batch pipeline: generate the stimulus dataset, simulate observers,
evaluate fixation data and render reports.

Subcommands: gen | simulate | eval | report | verify.  Options can come
from a key=value config file (--config); explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent import futures
from statistics import mean, median

import numpy as np

from . import __version__, gazeval, raster, report, scenegen, simobserver, stats

MANIFEST_COLUMNS = (
    "stimulus_id", "family", "subtype", "contrast_index", "ct_label", "ct_value",
    "fc", "task", "difficulty", "seed", "image", "mask",
    "target_x_deg", "target_y_deg", "notes",
)
RESULT_COLUMNS = (
    "stimulus", "participant", "si", "rt_loc_ms", "rt_id_ms", "rt_return_ms", "dc_deg", "flags"
)

METHOD_NOTES = {
    "saliency_index": "per-pixel means inside/outside the mask (mask-area robust)",
    "rt_outlier_rule": "single pass per family: drop RT > mean + 2*sample stdev",
    "temporal_si": "per-stimulus maps from pooled k-th fixations, averaged across stimuli",
    "initial_proximity_rule": "free-viewing samples flagged when the first fixation is "
                              "closer than 5 deg to the AOI center",
}


def _atomic_write_bytes(path: str, data: bytes) -> None:
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _atomic_write_text(path: str, text: str) -> None:
    _atomic_write_bytes(path, text.encode())


def _png_bytes(save_fn) -> bytes:
    buf = io.BytesIO()
    save_fn(buf)
    return buf.getvalue()


def parse_config(path: str) -> dict:
    """key=value lines; blank lines and # comments ignored."""
    config = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            config[key.strip()] = value.strip()
    return config


def _expand_families(text: str) -> list[int]:
    """'1,3-5,12' -> [1, 3, 4, 5, 12]"""
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return sorted(set(out))


def _fmt_float(value: float) -> str:
    return f"{value:.10g}"


def _difficulty(fc: float) -> str:
    return "easy" if fc > 0.5 else "hard"


def _manifest_row(spec: scenegen.StimulusSpec, layout, image_rel: str, mask_rel: str) -> dict:
    if layout.target is not None:
        tx, ty = layout.target.center
    elif not layout.aoi.is_empty:
        tx, ty = layout.aoi.centroid()
    else:
        tx = ty = None
    return {
        "stimulus_id": spec.stimulus_id,
        "family": str(spec.family),
        "subtype": spec.subtype,
        "contrast_index": str(spec.contrast_index),
        "ct_label": layout.ct_label,
        "ct_value": _fmt_float(layout.ct_value),
        "fc": _fmt_float(layout.fc_value),
        "task": layout.task,
        "difficulty": _difficulty(layout.fc_value),
        "seed": str(spec.seed),
        "image": image_rel,
        "mask": mask_rel,
        "target_x_deg": "" if tx is None else _fmt_float(tx),
        "target_y_deg": "" if ty is None else _fmt_float(ty),
        "notes": "|".join(layout.notes),
    }


def _gen_one(task: tuple) -> dict:
    family, subtype, contrast_index, seed, out_dir = task
    spec = scenegen.StimulusSpec(family, subtype, contrast_index, seed)
    layout = scenegen.generate(spec)
    image = raster.render(layout)
    mask = raster.render_mask(layout)
    stem = f"{family:02d}_{subtype}_{contrast_index:02d}_{seed}"
    image_rel = os.path.join("images", f"{stem}.png")
    mask_rel = os.path.join("masks", f"{stem}_mask.png")
    _atomic_write_bytes(
        os.path.join(out_dir, image_rel),
        _png_bytes(lambda buf: raster.save_image_png(image, buf)),
    )
    _atomic_write_bytes(
        os.path.join(out_dir, mask_rel),
        _png_bytes(lambda buf: raster.save_mask_png(mask, buf)),
    )
    _atomic_write_text(
        os.path.join(out_dir, "layouts", f"{stem}.json"), layout.to_json() + "\n"
    )
    return _manifest_row(spec, layout, image_rel, mask_rel)


def write_manifest(rows: list[dict], path: str) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=MANIFEST_COLUMNS)
    writer.writeheader()
    for row in sorted(rows, key=lambda r: r["stimulus_id"]):
        writer.writerow(row)
    _atomic_write_text(path, buf.getvalue())


def read_manifest(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        row["family"] = int(row["family"])
        row["contrast_index"] = int(row["contrast_index"])
        row["ct_value"] = float(row["ct_value"])
        row["fc"] = float(row["fc"])
        row["seed"] = int(row["seed"])
    return rows


def cmd_gen(ns) -> int:
    t0 = time.time()
    families = _expand_families(ns.family) if ns.family else None
    specs = scenegen.enumerate_specs(ns.seed, families)
    out_dir = ns.out
    for sub in ("images", "masks", "layouts"):
        os.makedirs(os.path.join(out_dir, sub), exist_ok=True)
    tasks = [(s.family, s.subtype, s.contrast_index, s.seed, out_dir) for s in specs]
    if ns.jobs > 1:
        with futures.ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            rows = list(pool.map(_gen_one, tasks))
    else:
        rows = [_gen_one(t) for t in tasks]
    write_manifest(rows, os.path.join(out_dir, "manifest.csv"))
    per_family: dict[int, int] = {}
    for s in specs:
        per_family[s.family] = per_family.get(s.family, 0) + 1
    counts = ", ".join(f"{f}:{n}" for f, n in sorted(per_family.items()))
    print(f"gen: {len(rows)} stimuli ({counts}) in {time.time() - t0:.1f}s -> {out_dir}")
    return 0


def _spec_from_manifest(row: dict) -> scenegen.StimulusSpec:
    return scenegen.StimulusSpec(row["family"], row["subtype"], row["contrast_index"], row["seed"])


def cmd_simulate(ns) -> int:
    manifest = read_manifest(ns.manifest)
    layouts = {row["stimulus_id"]: scenegen.generate(_spec_from_manifest(row)) for row in manifest}
    records = []
    for p in range(ns.participants):
        pid = f"p{p + 1:02d}"
        for i, row in enumerate(manifest):
            layout = layouts[row["stimulus_id"]]
            bias = 0.0 if layout.aoi.is_empty else ns.aoi_bias
            seed = int(np.random.SeedSequence([ns.seed, p, i]).generate_state(1, dtype=np.uint64)[0])
            params = simobserver.ObserverParams(
                n_fixations=ns.n_fixations,
                aoi_bias=bias,
                center_sigma=ns.center_sigma,
                fd_median=ns.fd_median,
                fd_dispersion=ns.fd_dispersion,
                seed=seed,
            )
            for f in simobserver.simulate(layout, params):
                records.append(
                    gazeval.FixationRecord(pid, row["stimulus_id"], f.index, f.x, f.y, f.onset, f.duration)
                )
    os.makedirs(os.path.dirname(os.path.abspath(ns.out)), exist_ok=True)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(gazeval.FIXATION_COLUMNS)
    for r in records:
        writer.writerow([r.participant, r.stimulus, r.index,
                         f"{r.x:.2f}", f"{r.y:.2f}", f"{r.onset:.1f}", f"{r.duration:.1f}"])
    _atomic_write_text(ns.out, buf.getvalue())
    print(f"simulate: {ns.participants} participants x {len(manifest)} stimuli "
          f"-> {len(records)} fixations -> {ns.out}")
    return 0


def _eval_stimulus(task: tuple) -> list[dict]:
    """All scanpaths of one stimulus against its mask (one worker unit)."""
    mrow, participants, manifest_dir, dwell_ms = task
    mask = raster.load_mask_png(os.path.join(manifest_dir, mrow["mask"]))
    rows = []
    for participant, path in participants:
        res = gazeval.evaluate_scanpath(path, mask, mrow["family"], dwell_ms=dwell_ms)
        rows.append(
            {
                "stimulus": mrow["stimulus_id"],
                "participant": participant,
                "family": mrow["family"],
                "subtype": mrow["subtype"],
                "contrast_index": mrow["contrast_index"],
                "ct": mrow["ct_value"],
                "ct_label": mrow["ct_label"],
                "fc": mrow["fc"],
                "task": mrow["task"],
                "si": None if res.si is None or not math.isfinite(res.si) else res.si,
                "rt_loc": res.rt_localization,
                "rt_id": res.rt_identification,
                "rt_ret": res.rt_return,
                "dc": res.dc_mean if math.isfinite(res.dc_mean) else None,
                "flags": list(res.flags),
            }
        )
    return rows


def _evaluate_rows(manifest_by_id: dict, scanpaths: dict, manifest_dir: str,
                   dwell_ms: float, jobs: int = 1):
    """Per-scanpath evaluation rows, one stimulus mask in memory at a time."""
    by_stimulus: dict[str, list] = {}
    for (participant, stimulus), path in scanpaths.items():
        by_stimulus.setdefault(stimulus, []).append((participant, path))
    tasks = [
        (manifest_by_id[stimulus], sorted(by_stimulus[stimulus]), manifest_dir, dwell_ms)
        for stimulus in sorted(by_stimulus)
    ]
    if jobs > 1:
        with futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_eval_stimulus, tasks))
    else:
        chunks = [_eval_stimulus(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def _flag_rt_outliers(rows) -> None:
    """Mark per-family localization/identification outliers (single pass)."""
    for family in {r["family"] for r in rows}:
        fam = [r for r in rows if r["family"] == family]
        for key, flag in (("rt_loc", "rt-loc-outlier"), ("rt_id", "rt-id-outlier")):
            values = [r[key] for r in fam if r[key] is not None]
            threshold = gazeval.rt_outlier_threshold(values)
            if threshold is None:
                continue
            for r in fam:
                if r[key] is not None and r[key] > threshold:
                    r["flags"].append(flag)


def _usable_rt(rows, key="rt_loc"):
    skip = {"rt_loc": "rt-loc-outlier", "rt_id": "rt-id-outlier"}[key]
    return [
        r for r in rows
        if r[key] is not None
        and skip not in r["flags"]
        and "excluded-initial-proximity" not in r["flags"]
    ]


def _try_spearman(x, y):
    try:
        res = stats.spearman(x, y)
        return {"rho": res.rho, "p": res.p, "n": res.n}
    except ValueError:
        return {"rho": None, "p": None, "n": len(x)}


def _summarize(rows, temporal_rows) -> dict:
    si_rows = [r for r in rows if r["si"] is not None]
    rt_rows = _usable_rt(rows)
    both = [r for r in rt_rows if r["si"] is not None]
    dc_rows = [r for r in rows if r["dc"] is not None]
    summary = {
        "metadata": dict(METHOD_NOTES, tool=f"salstim {__version__}"),
        "n_scanpaths": len(rows),
        "global": {
            "rt_si": _try_spearman([r["rt_loc"] for r in both], [r["si"] for r in both]),
            "ct_rt": _try_spearman([r["ct"] for r in rt_rows], [r["rt_loc"] for r in rt_rows]),
            "ct_si": _try_spearman([r["ct"] for r in si_rows], [r["si"] for r in si_rows]),
            "fc_rt": _try_spearman([r["fc"] for r in rt_rows], [r["rt_loc"] for r in rt_rows]),
            "fc_si": _try_spearman([r["fc"] for r in si_rows], [r["si"] for r in si_rows]),
            "fc_dc": _try_spearman([r["fc"] for r in dc_rows], [r["dc"] for r in dc_rows]),
        },
        "per_family": {},
        "conditions": {},
    }
    for entry in report.correlation_rows(rows):
        family = entry.pop("family")
        fam_rows = [r for r in rows if r["family"] == family]
        fam_rt = _usable_rt(fam_rows)
        fam_id = _usable_rt(fam_rows, "rt_id")
        entry.update(
            {
                "n": len(fam_rows),
                "rt_loc_median": median([r["rt_loc"] for r in fam_rt]) if fam_rt else None,
                "rt_id_median": median([r["rt_id"] for r in fam_id]) if fam_id else None,
                "si_median": median([r["si"] for r in fam_rows if r["si"] is not None])
                if any(r["si"] is not None for r in fam_rows) else None,
                "dc_mean": mean([r["dc"] for r in fam_rows if r["dc"] is not None])
                if any(r["dc"] is not None for r in fam_rows) else None,
            }
        )
        summary["per_family"][str(family)] = entry
    for row in report.contrast_table(rows):
        fam = summary["conditions"].setdefault(str(row["family"]), {})
        sub = fam.setdefault(row["subtype"], {})
        sub[str(row["contrast_index"])] = {
            k: row[k] for k in ("ct", "fc", "n", "rt_loc_median", "rt_id_median", "si_median", "dc_mean")
        }
    summary["temporal"] = temporal_rows
    return summary


def _write_results_csv(rows, path) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(RESULT_COLUMNS)
    for r in sorted(rows, key=lambda r: (r["stimulus"], r["participant"])):
        writer.writerow(
            [
                r["stimulus"],
                r["participant"],
                "" if r["si"] is None else f"{r['si']:.8g}",
                "" if r["rt_loc"] is None else f"{r['rt_loc']:.1f}",
                "" if r["rt_id"] is None else f"{r['rt_id']:.1f}",
                "" if r["rt_ret"] is None else f"{r['rt_ret']:.1f}",
                "" if r["dc"] is None else f"{r['dc']:.4f}",
                ";".join(r["flags"]),
            ]
        )
    _atomic_write_text(path, buf.getvalue())


def _write_temporal_csv(rows, path) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["index", "n_fixations", "si_mean", "fd_mean", "sa_mean", "dc_mean"])
    for r in rows:
        writer.writerow(
            [
                r["index"],
                r["n_fixations"],
                "" if r["si_mean"] is None else f"{r['si_mean']:.8g}",
                f"{r['fd_mean']:.4f}",
                "" if r["sa_mean"] is None else f"{r['sa_mean']:.4f}",
                f"{r['dc_mean']:.4f}",
            ]
        )
    _atomic_write_text(path, buf.getvalue())


def cmd_eval(ns) -> int:
    manifest = read_manifest(ns.manifest)
    manifest_dir = os.path.dirname(os.path.abspath(ns.manifest))
    manifest_by_id = {row["stimulus_id"]: row for row in manifest}
    records = gazeval.load_fixations(ns.fixations)
    os.makedirs(ns.out, exist_ok=True)
    known = [r for r in records if r.stimulus in manifest_by_id]
    unknown = sorted({r.stimulus for r in records} - set(manifest_by_id))
    if unknown:
        _atomic_write_text(
            os.path.join(ns.out, "rejects.txt"),
            "\n".join(unknown) + "\n",
        )
        print(f"eval: warning: {len(unknown)} unknown stimulus ids listed in rejects.txt",
              file=sys.stderr)
    if not known:
        print("eval: warning: no usable fixation records", file=sys.stderr)
    scanpaths = gazeval.group_scanpaths(known)
    rows = _evaluate_rows(manifest_by_id, scanpaths, manifest_dir, ns.dwell_ms, ns.jobs)
    _flag_rt_outliers(rows)

    def mask_provider(stimulus_id):
        row = manifest_by_id.get(stimulus_id)
        if row is None:
            return None
        return raster.load_mask_png(os.path.join(manifest_dir, row["mask"]))

    temporal_rows = gazeval.temporal_series(
        scanpaths, mask_provider, pool_global=ns.pool_global_temporal
    )
    _write_results_csv(rows, os.path.join(ns.out, "results.csv"))
    _write_temporal_csv(temporal_rows, os.path.join(ns.out, "temporal.csv"))
    summary = _summarize(rows, temporal_rows)
    _atomic_write_text(
        os.path.join(ns.out, "summary.json"),
        json.dumps(summary, indent=1, sort_keys=True, allow_nan=False) + "\n",
    )
    print(f"eval: {len(rows)} scanpaths over {len({r['stimulus'] for r in rows})} stimuli -> {ns.out}")
    return 0


def _read_results(path: str) -> list[dict]:
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                {
                    "stimulus": rec["stimulus"],
                    "participant": rec["participant"],
                    "si": float(rec["si"]) if rec["si"] else None,
                    "rt_loc": float(rec["rt_loc_ms"]) if rec["rt_loc_ms"] else None,
                    "rt_id": float(rec["rt_id_ms"]) if rec["rt_id_ms"] else None,
                    "rt_ret": float(rec["rt_return_ms"]) if rec["rt_return_ms"] else None,
                    "dc": float(rec["dc_deg"]) if rec["dc_deg"] else None,
                    "flags": rec["flags"].split(";") if rec["flags"] else [],
                }
            )
    return rows


def _read_temporal(path: str) -> list[dict]:
    rows = []
    if not os.path.exists(path):
        return rows
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                {
                    "index": int(rec["index"]),
                    "n_fixations": int(rec["n_fixations"]),
                    "si_mean": float(rec["si_mean"]) if rec["si_mean"] else None,
                    "fd_mean": float(rec["fd_mean"]),
                    "sa_mean": float(rec["sa_mean"]) if rec["sa_mean"] else None,
                    "dc_mean": float(rec["dc_mean"]),
                }
            )
    return rows


def cmd_report(ns) -> int:
    manifest = read_manifest(ns.manifest)
    manifest_by_id = {row["stimulus_id"]: row for row in manifest}
    rows = _read_results(os.path.join(ns.results, "results.csv"))
    joined = []
    for r in rows:
        mrow = manifest_by_id.get(r["stimulus"])
        if mrow is None:
            continue
        joined.append(
            dict(
                r,
                family=mrow["family"],
                subtype=mrow["subtype"],
                contrast_index=mrow["contrast_index"],
                ct=mrow["ct_value"],
                ct_label=mrow["ct_label"],
                fc=mrow["fc"],
                task=mrow["task"],
            )
        )
    temporal = _read_temporal(os.path.join(ns.results, "temporal.csv"))
    os.makedirs(ns.out, exist_ok=True)
    table = report.contrast_table(joined)
    ct_labels = {m["family"]: m["ct_label"] for m in manifest}
    for row in table:
        row["ct_label"] = ct_labels.get(row["family"], "contrast")
    corr = report.correlation_rows(joined)
    report.write_contrast_csv(table, os.path.join(ns.out, "per_contrast.csv"))
    report.write_correlation_csv(corr, os.path.join(ns.out, "correlations.csv"))
    _write_temporal_csv(temporal, os.path.join(ns.out, "temporal.csv"))
    report.write_text_report(table, corr, temporal, os.path.join(ns.out, "report.txt"))
    figures = report.render_figures(table, temporal, os.path.join(ns.out, "figures"), ct_labels)
    print(f"report: {len(table)} condition rows, {len(figures)} figures -> {ns.out}")
    return 0


def cmd_verify(ns) -> int:
    manifest = read_manifest(ns.manifest)
    manifest_dir = os.path.dirname(os.path.abspath(ns.manifest))
    failures = []
    ids = [row["stimulus_id"] for row in manifest]
    if len(ids) != len(set(ids)):
        failures.append("duplicate stimulus ids")
    expected: dict[int, int] = {}
    for family in sorted({row["family"] for row in manifest}):
        expected[family] = len(scenegen.FAMILY_SUBTYPES[family]) * scenegen.contrast_levels(family)
    actual: dict[int, int] = {}
    for row in manifest:
        actual[row["family"]] = actual.get(row["family"], 0) + 1
    for family, n in expected.items():
        if actual.get(family) != n:
            failures.append(f"family {family}: {actual.get(family)} stimuli, expected {n}")
    from PIL import Image

    for row in manifest:
        for key in ("image", "mask"):
            path = os.path.join(manifest_dir, row[key])
            if not os.path.exists(path):
                failures.append(f"missing file {row[key]}")
                continue
            with Image.open(path) as img:
                if img.size != (raster.CANVAS_W, raster.CANVAS_H):
                    failures.append(f"{row[key]}: size {img.size}")
        mask = raster.load_mask_png(os.path.join(manifest_dir, row["mask"]))
        empty = not mask.any()
        if empty != row["subtype"].endswith("-absent"):
            failures.append(f"{row['stimulus_id']}: mask emptiness does not match subtype")
    if failures:
        for f in failures:
            print(f"verify: FAIL {f}")
        return 1
    print(f"verify: OK ({len(manifest)} stimuli, families "
          f"{','.join(str(f) for f in sorted(expected))})")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value config file; flags win")


def _config_default(ns, config, attr, cast, fallback, config_key=None):
    current = getattr(ns, attr, None)
    if current is not None:
        return current
    config_key = config_key or attr
    if config_key in config:
        return cast(config[config_key])
    return fallback


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="salstim", description=__doc__)
    parser.add_argument("--version", action="version", version=f"salstim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate stimulus images, masks and the manifest")
    _add_common(p_gen)
    p_gen.add_argument("--out", help="output directory")
    p_gen.add_argument("--seed", type=int, help="master seed (default 12345)")
    p_gen.add_argument("--family", help="family selection, e.g. 12 or 1,3-5")
    p_gen.add_argument("--jobs", type=int, help="parallel workers (default 1)")
    p_gen.set_defaults(func=cmd_gen)

    p_sim = sub.add_parser("simulate", help="emit synthetic fixation data over a manifest")
    _add_common(p_sim)
    p_sim.add_argument("--manifest", required=True)
    p_sim.add_argument("--out", help="output fixation CSV path")
    p_sim.add_argument("--seed", type=int, help="observer master seed (default 1)")
    p_sim.add_argument("--participants", type=int)
    p_sim.add_argument("--aoi-bias", dest="aoi_bias", type=float)
    p_sim.add_argument("--n-fixations", dest="n_fixations", type=int)
    p_sim.add_argument("--center-sigma", dest="center_sigma", type=float)
    p_sim.add_argument("--fd-median", dest="fd_median", type=float)
    p_sim.add_argument("--fd-dispersion", dest="fd_dispersion", type=float)
    p_sim.set_defaults(func=cmd_simulate)

    p_eval = sub.add_parser("eval", help="score fixation data against a manifest")
    _add_common(p_eval)
    p_eval.add_argument("--manifest", required=True)
    p_eval.add_argument("--fixations", required=True)
    p_eval.add_argument("--out", help="output directory")
    p_eval.add_argument("--jobs", type=int, help="parallel workers (default 1)")
    p_eval.add_argument("--dwell-ms", dest="dwell_ms", type=float)
    p_eval.add_argument("--pool-global-temporal", action="store_true", default=None,
                        help="score one pooled per-index map instead of per-stimulus maps")
    p_eval.set_defaults(func=cmd_eval)

    p_rep = sub.add_parser("report", help="tables, plot CSVs and figures from eval output")
    _add_common(p_rep)
    p_rep.add_argument("--manifest", required=True)
    p_rep.add_argument("--results", required=True, help="eval output directory")
    p_rep.add_argument("--out", help="report output directory")
    p_rep.set_defaults(func=cmd_report)

    p_ver = sub.add_parser("verify", help="check manifest/filesystem consistency")
    _add_common(p_ver)
    p_ver.add_argument("--manifest", required=True)
    p_ver.set_defaults(func=cmd_verify)

    ns = parser.parse_args(argv)
    config = parse_config(ns.config) if getattr(ns, "config", None) else {}
    if ns.command == "gen":
        ns.out = _config_default(ns, config, "out", str, "dataset")
        ns.seed = _config_default(ns, config, "seed", int, 12345)
        ns.family = _config_default(ns, config, "families", str, None) if ns.family is None else ns.family
        ns.jobs = _config_default(ns, config, "jobs", int, 1)
    elif ns.command == "simulate":
        ns.out = _config_default(ns, config, "out", str, "fixations.csv", "fixations_out")
        ns.seed = _config_default(ns, config, "seed", int, 1, "sim_seed")
        ns.participants = _config_default(ns, config, "participants", int, 5)
        ns.aoi_bias = _config_default(ns, config, "aoi_bias", float, 0.6)
        ns.n_fixations = _config_default(ns, config, "n_fixations", int, 12)
        ns.center_sigma = _config_default(ns, config, "center_sigma", float, 8.0)
        ns.fd_median = _config_default(ns, config, "fd_median", float, 200.0)
        ns.fd_dispersion = _config_default(ns, config, "fd_dispersion", float, 0.6)
    elif ns.command == "eval":
        ns.out = _config_default(ns, config, "out", str, "evaluation", "eval_out")
        ns.jobs = _config_default(ns, config, "jobs", int, 1)
        ns.dwell_ms = _config_default(ns, config, "dwell_ms", float, 1000.0)
        ns.pool_global_temporal = bool(
            _config_default(ns, config, "pool_global_temporal", int, 0)
        )
    elif ns.command == "report":
        ns.out = _config_default(ns, config, "out", str, "report", "report_out")
    return ns.func(ns)


if __name__ == "__main__":
    sys.exit(main())
