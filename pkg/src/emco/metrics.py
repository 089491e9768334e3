"""Confusion-count statistics, F-beta scores, and banded macro averaging."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Iterable, Mapping, Sequence

VERY_LOW_BAND_THRESHOLD = 0.015  # training relative frequency below this

METRIC_NAMES = ("recall", "tnr", "precision", "ba", "f1", "f2")

CSV_COLUMNS = (
    "dataset", "category", "method", "gamma", "sampling_ratio", "repetition",
    "tp", "fp", "tn", "fn", "recall", "tnr", "precision", "ba", "f1", "f2",
)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @staticmethod
    def from_predictions(
        y_true: Sequence[int], y_pred: Sequence[int]
    ) -> "ConfusionCounts":
        if len(y_true) != len(y_pred):
            raise ValueError("length mismatch")
        tp = fp = tn = fn = 0
        for truth, pred in zip(y_true, y_pred):
            if truth == 1:
                if pred == 1:
                    tp += 1
                else:
                    fn += 1
            else:
                if pred == 1:
                    fp += 1
                else:
                    tn += 1
        return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def fbeta(precision: float, recall: float, beta: float) -> float:
    """F-beta score; returns 0 when the denominator vanishes."""
    denom = beta * beta * precision + recall
    if denom == 0.0:
        return 0.0
    return (1 + beta * beta) * precision * recall / denom


def compute_metrics(counts: ConfusionCounts) -> dict[str, float]:
    """Recall, tnr, precision, balanced accuracy, F1, and F2.

    Precision is defined as zero when there are no positive predictions.
    Requires at least one actual positive and one actual negative.
    """
    if counts.tp + counts.fn < 1:
        raise ValueError("no positive observations: recall undefined")
    if counts.tn + counts.fp < 1:
        raise ValueError("no negative observations: tnr undefined")
    recall = counts.tp / (counts.tp + counts.fn)
    tnr = counts.tn / (counts.tn + counts.fp)
    if counts.tp + counts.fp == 0:
        precision = 0.0
    else:
        precision = counts.tp / (counts.tp + counts.fp)
    return {
        "recall": recall,
        "tnr": tnr,
        "precision": precision,
        "ba": (recall + tnr) / 2.0,
        "f1": fbeta(precision, recall, 1.0),
        "f2": fbeta(precision, recall, 2.0),
    }


def band_of(frequency: float) -> str:
    return "very_low" if frequency < VERY_LOW_BAND_THRESHOLD else "low"


def macro_average(
    rows: Sequence[Mapping], frequencies: Mapping[str, float]
) -> dict[str, dict[str, float]]:
    """Banded macro averages over per-run metric rows.

    Rows are grouped by category and averaged over repetitions first, then
    categories are averaged unweighted within each frequency band.
    ``frequencies`` maps category name to its training relative frequency.
    """
    if not rows:
        raise ValueError("no rows to aggregate")
    per_category: dict[str, list[Mapping]] = {}
    for row in rows:
        per_category.setdefault(row["category"], []).append(row)

    band_values: dict[str, dict[str, list[float]]] = {}
    band_counts: dict[str, int] = {}
    for category, cat_rows in per_category.items():
        band = band_of(frequencies[category])
        dest = band_values.setdefault(band, {m: [] for m in METRIC_NAMES})
        band_counts[band] = band_counts.get(band, 0) + 1
        for metric in METRIC_NAMES:
            dest[metric].append(
                sum(r[metric] for r in cat_rows) / len(cat_rows)
            )

    out = {}
    for band, values in band_values.items():
        out[band] = {
            m: sum(vals) / len(vals) for m, vals in values.items()
        }
        out[band]["n_categories"] = band_counts[band]
    return out


def write_rows_csv(path: str | Path, rows: Iterable[Mapping]) -> None:
    """Per-run result CSV with the fixed column layout."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in CSV_COLUMNS})


def write_aggregate_json(path: str | Path, aggregate: Mapping) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(aggregate, handle, indent=2, sort_keys=True)
        handle.write("\n")
