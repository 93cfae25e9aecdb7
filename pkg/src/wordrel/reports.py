"""Report writers: JSON run report, flat CSVs and a console table.

Nothing time-dependent is written, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import os
from typing import Sequence

from .evaluation import EXCLUSION_POLICY, EvaluationResult, SweepPoint

RESULT_COLUMNS = ("category", "kind", "accuracy", "mean_cosine", "pair_count", "oov_dropped")
SWEEP_COLUMNS = ("n", "kind", "mean_accuracy", "mean_cosine", "seed_count")


def _write(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _csv_text(columns, rows, comments: dict) -> str:
    buf = io.StringIO()
    for key, value in comments.items():
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buf.getvalue()


def _provenance(meta: dict) -> dict:
    return {"config": json.dumps(meta.get("config", {}), sort_keys=True),
            **{k: v for k, v in meta.items() if k != "config"}}


def result_rows(result: EvaluationResult) -> list[tuple]:
    rows = []
    for rep in result.reports:
        for kind in result.kinds:
            m = rep.metrics[kind]
            rows.append((rep.category, kind, repr(m.accuracy), repr(m.mean_cosine), rep.pair_count, rep.oov_dropped))
    return rows


def write_results_csv(result: EvaluationResult, path: str | os.PathLike, meta: dict) -> None:
    """``category,kind,accuracy,mean_cosine,pair_count,oov_dropped``; provenance as ``#`` comment lines."""
    _write(path, _csv_text(RESULT_COLUMNS, result_rows(result), _provenance(meta)))


def write_sweep_csv(points: Sequence[SweepPoint], path: str | os.PathLike, meta: dict) -> None:
    rows = [
        (p.n, kind, repr(acc), repr(cos), p.seed_count)
        for p in points
        for kind, (acc, cos) in p.metrics.items()
    ]
    _write(path, _csv_text(SWEEP_COLUMNS, rows, _provenance(meta)))


def report_document(result: EvaluationResult, meta: dict) -> dict:
    return {
        "meta": {**meta, "exclusion_policy": EXCLUSION_POLICY},
        "categories": [
            {
                "category": rep.category,
                "pair_count": rep.pair_count,
                "oov_dropped": rep.oov_dropped,
                "linear_min_singular_value": rep.min_singular_value,
                "kinds": {
                    k: {"accuracy": m.accuracy, "mean_cosine": m.mean_cosine, "correct": m.correct}
                    for k, m in rep.metrics.items()
                },
            }
            for rep in result.reports
        ],
        "average": {k: {"accuracy": a, "mean_cosine": c} for k, (a, c) in result.averages.items()},
    }


def write_report_json(result: EvaluationResult, path: str | os.PathLike, meta: dict) -> None:
    _write(path, json.dumps(report_document(result, meta), indent=2, sort_keys=True) + "\n")


def format_table(result: EvaluationResult) -> str:
    """Accuracy and mean-cosine columns per kind, one row per category plus the average."""
    kinds = result.kinds
    width = max(len("Avg"), *(len(r.category) for r in result.reports))
    head = " ".join(f"{k[:11]:>11}" for k in kinds)
    lines = [
        f"{'':{width}}  {'accuracy':^{12 * len(kinds) - 1}}  {'avg cosine with solution':^{12 * len(kinds) - 1}}",
        f"{'category':{width}}  {head}  {head}",
    ]

    def row(name, accs, coss):
        return f"{name:{width}}  " + " ".join(f"{a:11.3f}" for a in accs) + "  " + " ".join(
            f"{c:11.3f}" for c in coss
        )

    for rep in result.reports:
        lines.append(row(rep.category, [rep.metrics[k].accuracy for k in kinds],
                         [rep.metrics[k].mean_cosine for k in kinds]))
    lines.append("-" * len(lines[1]))
    lines.append(row("Avg", [result.averages[k][0] for k in kinds], [result.averages[k][1] for k in kinds]))
    return "\n".join(lines)
