"""Report rendering: human-readable tables, plot-ready CSVs and figures."""

from __future__ import annotations

import csv
import os
from statistics import mean, median

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from . import stats

FAMILY_NAMES = {
    1: "Corner Angle",
    2: "Segmentation by Angle",
    3: "Segmentation by Spacing",
    4: "Contour Integration",
    5: "Perceptual Grouping",
    6: "Feature/Conjunctive Search",
    7: "Search Asymmetries",
    8: "Noise/Roughness",
    9: "Color Contrast",
    10: "Brightness Contrast",
    11: "Size Contrast",
    12: "Orientation Contrast",
    13: "Distractor Heterogeneity",
    14: "Distractor Linearity",
    15: "Distractor Categorization",
}

PNG_METADATA = {"Software": "salstim"}


def _fmt(value, digits=4) -> str:
    if value is None:
        return ""
    return f"{value:.{digits}g}"


def contrast_table(rows):
    """Per (family, subtype, contrast) medians from evaluation rows.

    Rows flagged for initial AOI proximity are excluded from the RT columns.
    """
    groups: dict[tuple[int, str, int], list[dict]] = {}
    for r in rows:
        groups.setdefault((r["family"], r["subtype"], r["contrast_index"]), []).append(r)
    table = []
    for (family, subtype, contrast), members in sorted(groups.items()):
        rts = [
            m["rt_loc"]
            for m in members
            if m["rt_loc"] is not None
            and "excluded-initial-proximity" not in m["flags"]
            and "rt-loc-outlier" not in m["flags"]
        ]
        rt_ids = [
            m["rt_id"] for m in members
            if m["rt_id"] is not None and "rt-id-outlier" not in m["flags"]
        ]
        sis = [m["si"] for m in members if m["si"] is not None]
        dcs = [m["dc"] for m in members if m["dc"] is not None]
        table.append(
            {
                "family": family,
                "subtype": subtype,
                "contrast_index": contrast,
                "ct": members[0]["ct"],
                "fc": members[0]["fc"],
                "n": len(members),
                "rt_loc_median": median(rts) if rts else None,
                "rt_id_median": median(rt_ids) if rt_ids else None,
                "si_median": median(sis) if sis else None,
                "dc_mean": mean(dcs) if dcs else None,
            }
        )
    return table


def correlation_rows(rows):
    """Table of per-family rank correlations: contrast against localization
    time and saliency, plus contrast fraction against center distance."""
    out = []
    for family in sorted({r["family"] for r in rows}):
        fam_rows = [r for r in rows if r["family"] == family]
        entry = {"family": family, "name": FAMILY_NAMES[family], "ct_label": fam_rows[0]["ct_label"]}
        rt_pairs = [
            (r["ct"], r["rt_loc"])
            for r in fam_rows
            if r["rt_loc"] is not None
            and "excluded-initial-proximity" not in r["flags"]
            and "rt-loc-outlier" not in r["flags"]
        ]
        si_pairs = [(r["ct"], r["si"]) for r in fam_rows if r["si"] is not None]
        dc_pairs = [(r["fc"], r["dc"]) for r in fam_rows if r["dc"] is not None]
        for label, pairs in (("ct_rt", rt_pairs), ("ct_si", si_pairs), ("fc_dc", dc_pairs)):
            try:
                res = stats.spearman([p[0] for p in pairs], [p[1] for p in pairs])
                entry[f"rho_{label}"] = res.rho
                entry[f"p_{label}"] = res.p
                entry[f"n_{label}"] = res.n
            except ValueError:
                entry[f"rho_{label}"] = None
                entry[f"p_{label}"] = None
                entry[f"n_{label}"] = len(pairs)
        out.append(entry)
    return out


def write_contrast_csv(table, path) -> None:
    cols = ["family", "subtype", "contrast_index", "ct", "fc", "n",
            "rt_loc_median", "rt_id_median", "si_median", "dc_mean"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(cols)
        for row in table:
            writer.writerow([_fmt(row[c], 6) if isinstance(row[c], float) else row[c] for c in cols])


def write_correlation_csv(corr, path) -> None:
    cols = ["family", "name", "ct_label",
            "rho_ct_rt", "p_ct_rt", "n_ct_rt",
            "rho_ct_si", "p_ct_si", "n_ct_si",
            "rho_fc_dc", "p_fc_dc", "n_fc_dc"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(cols)
        for row in corr:
            writer.writerow([_fmt(row.get(c), 6) if isinstance(row.get(c), float) else row.get(c, "") for c in cols])


def write_text_report(table, corr, temporal, path) -> None:
    lines = []
    lines.append("Per-contrast medians (localization RT ms, identification RT ms, SI, DC deg)")
    lines.append(f"{'family':>6} {'subtype':>20} {'x':>2} {'CT':>9} {'n':>4} "
                 f"{'RTloc':>8} {'RTid':>8} {'SI':>9} {'DC':>7}")
    for row in table:
        lines.append(
            f"{row['family']:>6} {row['subtype']:>20} {row['contrast_index']:>2} "
            f"{_fmt(row['ct'], 4):>9} {row['n']:>4} {_fmt(row['rt_loc_median'], 5):>8} "
            f"{_fmt(row['rt_id_median'], 5):>8} {_fmt(row['si_median'], 4):>9} "
            f"{_fmt(row['dc_mean'], 4):>7}"
        )
    lines.append("")
    lines.append("Per-family rank correlations")
    lines.append(f"{'family':>6} {'feature':>26} {'contrast':>26} {'rho(CT,RT)':>11} "
                 f"{'rho(CT,SI)':>11} {'rho(FC,DC)':>11}")
    for row in corr:
        lines.append(
            f"{row['family']:>6} {row['name']:>26} {row['ct_label']:>26} "
            f"{_fmt(row['rho_ct_rt'], 3):>11} {_fmt(row['rho_ct_si'], 3):>11} "
            f"{_fmt(row['rho_fc_dc'], 3):>11}"
        )
    lines.append("")
    lines.append("Temporal evolution by fixation index")
    lines.append(f"{'k':>3} {'n':>6} {'SI':>10} {'FD_ms':>8} {'SA_deg':>8} {'DC_deg':>8}")
    for row in temporal:
        lines.append(
            f"{row['index']:>3} {row['n_fixations']:>6} {_fmt(row['si_mean'], 4):>10} "
            f"{_fmt(row['fd_mean'], 5):>8} {_fmt(row['sa_mean'], 4):>8} {_fmt(row['dc_mean'], 4):>8}"
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _family_panels(table, families, measure, ylabel, path):
    fig, axes = plt.subplots(1, len(families), figsize=(3.0 * len(families), 3.0), squeeze=False)
    for ax, family in zip(axes[0], families):
        fam = [r for r in table if r["family"] == family]
        for subtype in sorted({r["subtype"] for r in fam}):
            pts = [(r["ct"], r[measure]) for r in fam if r["subtype"] == subtype and r[measure] is not None]
            pts.sort()
            if pts:
                ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=subtype)
        ax.set_title(f"({family}) {FAMILY_NAMES[family]}", fontsize=8)
        ax.set_xlabel(fam[0]["ct_label"] if fam else "contrast", fontsize=7)
        ax.tick_params(labelsize=7)
        if len({r["subtype"] for r in fam}) > 1:
            ax.legend(fontsize=6)
    axes[0][0].set_ylabel(ylabel, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata=PNG_METADATA)
    plt.close(fig)


def render_figures(table, temporal, out_dir, ct_labels) -> list[str]:
    """Figures along the delimited output: RT and SI against contrast for the
    free-viewing and search families, plus the temporal evolution panels."""
    for row in table:
        row.setdefault("ct_label", ct_labels.get(row["family"], "contrast"))
    os.makedirs(out_dir, exist_ok=True)
    written = []
    fv = [f for f in range(1, 6) if any(r["family"] == f for r in table)]
    vs = [f for f in range(6, 16) if any(r["family"] == f for r in table)]
    for families, tag in ((fv, "free_viewing"), (vs, "visual_search")):
        if not families:
            continue
        for measure, ylabel in (("rt_loc_median", "median RT (ms)"), ("si_median", "median SI")):
            path = os.path.join(out_dir, f"{measure.split('_')[0]}_vs_contrast_{tag}.png")
            _family_panels(table, families, measure, ylabel, path)
            written.append(path)
    if temporal:
        fig, axes = plt.subplots(1, 4, figsize=(12, 3))
        ks = [row["index"] for row in temporal]
        for ax, key, label in zip(
            axes,
            ("fd_mean", "sa_mean", "si_mean", "dc_mean"),
            ("fixation duration (ms)", "saccade amplitude (deg)", "saliency index", "distance from center (deg)"),
        ):
            pts = [(k, row[key]) for k, row in zip(ks, temporal) if row[key] is not None]
            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o")
            ax.set_xlabel("fixation index", fontsize=8)
            ax.set_title(label, fontsize=8)
            ax.tick_params(labelsize=7)
        fig.tight_layout()
        path = os.path.join(out_dir, "temporal_evolution.png")
        fig.savefig(path, dpi=110, metadata=PNG_METADATA)
        plt.close(fig)
        written.append(path)
    return written
