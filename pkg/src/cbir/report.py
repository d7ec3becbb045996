"""Evaluation report writing: canonical JSON document, per-query TSV table,
and a rendered precision-vs-recall figure."""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .errors import IoError
from .evaluation import EvalReport

REPORT_FORMAT_VERSION = 1

REPORT_JSON = "report.json"
REPORT_TABLE = "pr_per_query.tsv"
REPORT_FIGURE = "pr_curve.png"


def report_to_dict(report: EvalReport, config_echo: dict | None = None) -> dict:
    doc = {
        "format_version": REPORT_FORMAT_VERSION,
        "mode": report.mode,
        "ks": list(report.ks),
        "mean_candidates_ratio": float(report.mean_candidates_ratio),
        "macro": [
            {"k": p.k, "precision": float(p.precision), "recall": float(p.recall)}
            for p in report.macro
        ],
        "per_query": [
            {
                "query_id": q.query_id,
                "candidates_examined": q.candidates_examined,
                "candidates_ratio": float(q.candidates_ratio),
                "points": [
                    {"k": p.k, "precision": float(p.precision), "recall": float(p.recall)}
                    for p in q.points
                ],
            }
            for q in report.per_query
        ],
    }
    if config_echo is not None:
        doc["config_echo"] = config_echo
    return doc


def report_to_json(report: EvalReport, config_echo: dict | None = None) -> str:
    return json.dumps(report_to_dict(report, config_echo), sort_keys=True, indent=2) + "\n"


def report_table(report: EvalReport) -> str:
    """Delimited (k, precision, recall) rows per query, for external plotting."""
    lines = ["query_id\tk\tprecision\trecall"]
    for q in report.per_query:
        for p in q.points:
            lines.append(f"{q.query_id}\t{p.k}\t{p.precision:.6f}\t{p.recall:.6f}")
    return "\n".join(lines) + "\n"


def render_pr_figure(report: EvalReport, path: Path) -> None:
    """Precision-vs-recall plot: per-query traces in light gray, macro in front."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for q in report.per_query:
        ax.plot(
            [p.recall for p in q.points],
            [p.precision for p in q.points],
            color="0.8",
            linewidth=0.6,
            zorder=1,
        )
    macro_r = [p.recall for p in report.macro]
    macro_p = [p.precision for p in report.macro]
    ax.plot(macro_r, macro_p, "o-", color="tab:red", linewidth=1.8, zorder=2, label="macro")
    for point in report.macro:
        ax.annotate(
            f"k={point.k}",
            (point.recall, point.precision),
            textcoords="offset points",
            xytext=(5, 4),
            fontsize=8,
        )
    ax.set_xlabel("recall")
    ax.set_ylabel("precision")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="lower left")
    ax.set_title(f"precision vs recall ({report.mode} mode, {len(report.per_query)} queries)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_eval_report(
    report: EvalReport,
    out_dir: str | Path,
    config_echo: dict | None = None,
) -> list[Path]:
    """Write report.json, the per-query TSV, and the PR-curve figure.

    Returns the written paths.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        json_path = out / REPORT_JSON
        json_path.write_text(report_to_json(report, config_echo), encoding="utf-8")
        table_path = out / REPORT_TABLE
        table_path.write_text(report_table(report), encoding="utf-8")
        figure_path = out / REPORT_FIGURE
        render_pr_figure(report, figure_path)
    except OSError as exc:
        raise IoError(f"cannot write evaluation report to {out}: {exc}") from exc
    return [json_path, table_path, figure_path]
