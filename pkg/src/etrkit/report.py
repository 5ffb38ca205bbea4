"""Evaluation report rendering: a human-readable table, a delimited
machine-readable file, and matplotlib figures saved next to it."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation import EvalReport


def render_text_table(reports: list[EvalReport]) -> str:
    """One row per variant, P/R/F1 columns grouped by class."""
    if not reports:
        return "(no reports)\n"
    classes = reports[0].classes
    header = ["variant"]
    for cls_name in classes:
        header += [f"{cls_name}:P", f"{cls_name}:R", f"{cls_name}:F1"]
    header.append("micro_F1")
    rows = [header]
    for rep in reports:
        row = [rep.variant]
        for cls_name in classes:
            p, r, f1 = rep.per_class[cls_name]
            row += [f"{p:6.2f}", f"{r:6.2f}", f"{f1:6.2f}"]
        row.append(f"{rep.micro_f1:6.2f}")
        rows.append(row)
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = []
    for r in rows:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(r, widths)))
    return "\n".join(lines) + "\n"


def write_tsv(reports: list[EvalReport], path: str | Path) -> None:
    """Delimited output: variant, class, P, R, F1 (plus micro rows)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("variant\tclass\tprecision\trecall\tf1\n")
        for rep in reports:
            for cls_name in rep.classes:
                p, r, f1 = rep.per_class[cls_name]
                fh.write(f"{rep.variant}\t{cls_name}\t{p:.4f}\t{r:.4f}\t{f1:.4f}\n")
            fh.write(f"{rep.variant}\tmicro\t\t\t{rep.micro_f1:.4f}\n")


def write_figures(reports: list[EvalReport], out_dir: str | Path) -> list[Path]:
    """Render per-class F1 and micro-F1 comparison charts to PNG files."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    if not reports:
        return paths
    classes = reports[0].classes
    variants = [rep.variant for rep in reports]

    fig, ax = plt.subplots(figsize=(1.8 * max(4, len(classes) * len(variants) / 3), 4))
    width = 0.8 / len(variants)
    for vi, rep in enumerate(reports):
        xs = [ci + vi * width for ci in range(len(classes))]
        ys = [rep.per_class[c][2] for c in classes]
        ax.bar(xs, ys, width=width, label=rep.variant)
    ax.set_xticks([ci + 0.4 - width / 2 for ci in range(len(classes))])
    ax.set_xticklabels(classes)
    ax.set_ylabel("F1 (%)")
    ax.set_ylim(0, 105)
    ax.set_title("Per-class F1 by model variant")
    ax.legend(fontsize=8)
    fig.tight_layout()
    per_class_path = out_dir / "f1_by_class.png"
    fig.savefig(per_class_path, dpi=120)
    plt.close(fig)
    paths.append(per_class_path)

    fig, ax = plt.subplots(figsize=(max(4, len(variants)), 4))
    ax.bar(range(len(variants)), [rep.micro_f1 for rep in reports], color="#4878b0")
    ax.set_xticks(range(len(variants)))
    ax.set_xticklabels(variants, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("micro-averaged F1 (%)")
    ax.set_ylim(0, 105)
    ax.set_title("Micro-F1 by model variant")
    fig.tight_layout()
    micro_path = out_dir / "micro_f1.png"
    fig.savefig(micro_path, dpi=120)
    plt.close(fig)
    paths.append(micro_path)
    return paths


def write_report(reports: list[EvalReport], out_dir: str | Path) -> dict[str, object]:
    """Write the TSV and figures into *out_dir*; returns produced paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tsv_path = out_dir / "report.tsv"
    write_tsv(reports, tsv_path)
    figures = write_figures(reports, out_dir)
    return {"tsv": tsv_path, "figures": figures}
