"""Experiment orchestration: the methods x ratios x categories x repetitions
matrix, deterministic seed derivation, and result aggregation.

Every unit of work derives its own random generator from a stable hash of
(master seed, category, method, gamma, ratio, repetition), so results do not
depend on execution order or the worker-pool size.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import baselines, chain, classifier, corpus, metrics, vectorize

log = logging.getLogger(__name__)

KNOWN_METHODS = ("none", "ros", "smote", "adasyn", "mco", "emco")


@dataclass(frozen=True)
class ExperimentConfig:
    corpus_path: str
    output_dir: str = "results"
    dataset: str = "corpus"
    methods: tuple[str, ...] = ("none", "ros", "smote", "adasyn", "mco", "emco")
    gammas: tuple[float, ...] = (1.0,)
    sampling_ratios: tuple[float, ...] = (0.1, 0.2)
    repetitions: int = 5
    k_neighbors: int = 5
    c: float = 1.0
    tol: float = 1e-3
    max_iters: int = 1000
    master_seed: int = 0
    workers: int = 1
    stopwords_path: str | None = None

    def __post_init__(self):
        for method in self.methods:
            if method not in KNOWN_METHODS:
                raise ValueError(f"unknown method {method!r}")
        for ratio in self.sampling_ratios:
            if not 0.0 < ratio < 1.0:
                raise ValueError(f"sampling ratio must be in (0, 1): {ratio}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if "emco" in self.methods and not self.gammas:
            raise ValueError("emco requires a nonempty gamma list")

    @staticmethod
    def from_json(path: str | Path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as handle:
            obj = json.load(handle)
        for key in ("methods", "gammas", "sampling_ratios"):
            if key in obj:
                obj[key] = tuple(obj[key])
        return ExperimentConfig(**obj)


def derive_seed(master_seed: int, *parts) -> int:
    """Stable 64-bit seed from the master seed and any identifying parts."""
    text = "|".join([str(master_seed), *[str(p) for p in parts]])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def synthetic_count(n_train: int, m_minority: int, ratio: float) -> int:
    """Smallest s >= 0 with (m + s) / (n + s) >= ratio."""
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must be in (0, 1), got {ratio}")
    if m_minority > n_train:
        raise ValueError("minority count exceeds training count")
    s = max(0, math.ceil((ratio * n_train - m_minority) / (1.0 - ratio)))
    # guard against float rounding at the boundary
    while s > 0 and (m_minority + s - 1) / (n_train + s - 1) >= ratio:
        s -= 1
    while (m_minority + s) / (n_train + s) < ratio:
        s += 1
    return s


def method_label(method: str, gamma: float | None) -> str:
    if method == "emco":
        return f"emco(gamma={gamma:g})"
    return method


@dataclass
class _Prepared:
    """Shared immutable state for one experiment run."""

    docs: list[corpus.Document]
    tfidf: vectorize.TfidfModel
    train_docs: list[corpus.Document]
    train_vectors: list[vectorize.SparseVector]
    test_docs: list[corpus.Document]
    test_vectors: list[vectorize.SparseVector]


def prepare(config: ExperimentConfig) -> _Prepared:
    raw = corpus.load_corpus_jsonl(config.corpus_path)
    stopwords = (
        corpus.load_stopwords(config.stopwords_path)
        if config.stopwords_path
        else corpus.default_stopwords()
    )
    docs = corpus.preprocess(raw, stopwords=stopwords)
    train_docs = corpus.training_documents(docs)
    test_docs = corpus.test_documents(docs)
    if not train_docs:
        raise ValueError("corpus has no training documents after preprocessing")
    tfidf = vectorize.fit_tfidf(train_docs)
    return _Prepared(
        docs=docs,
        tfidf=tfidf,
        train_docs=train_docs,
        train_vectors=[vectorize.transform(d, tfidf) for d in train_docs],
        test_docs=test_docs,
        test_vectors=[vectorize.transform(d, tfidf) for d in test_docs],
    )


def _evaluate(
    prepared: _Prepared,
    task: corpus.OvrTask,
    train_x: list[vectorize.SparseVector],
    train_y: list[int],
    config: ExperimentConfig,
    clf_seed: int,
) -> metrics.ConfusionCounts:
    model = classifier.train(
        train_x,
        train_y,
        c=config.c,
        tol=config.tol,
        max_iters=config.max_iters,
        n_features=prepared.tfidf.n_features,
        seed=clf_seed,
    )
    y_true = [task.test_label(d) for d in prepared.test_docs]
    y_pred = [classifier.predict(model, v)[0] for v in prepared.test_vectors]
    return metrics.ConfusionCounts.from_predictions(y_true, y_pred)


def _run_one(
    prepared: _Prepared,
    task: corpus.OvrTask,
    method: str,
    gamma: float | None,
    ratio: float,
    rep: int,
    config: ExperimentConfig,
    chain_model: chain.TransitionModel | None,
) -> dict:
    minority_idx = {d.id for d in task.train_minority}
    train_y = [1 if d.id in minority_idx else -1 for d in prepared.train_docs]
    train_x = list(prepared.train_vectors)
    minority_vectors = [
        v for d, v in zip(prepared.train_docs, prepared.train_vectors)
        if d.id in minority_idx
    ]
    majority_vectors = [
        v for d, v in zip(prepared.train_docs, prepared.train_vectors)
        if d.id not in minority_idx
    ]

    s = synthetic_count(len(prepared.train_docs), len(task.train_minority), ratio)
    seed_ratio = ratio if method != "none" else "na"
    rng = np.random.default_rng(
        derive_seed(config.master_seed, task.category, method, gamma, seed_ratio, rep)
    )
    clf_seed = derive_seed(
        config.master_seed, task.category, method, gamma, seed_ratio, rep, "clf"
    )
    n_features = prepared.tfidf.n_features

    effective = method
    if method in ("smote", "adasyn") and len(minority_vectors) < 2:
        effective = "ros"  # too few minority points to interpolate

    if method == "none":
        pass
    elif effective == "ros":
        train_x += baselines.ros(minority_vectors, s, rng)
        train_y += [1] * s
    elif effective == "smote":
        train_x += baselines.smote(
            minority_vectors, s, config.k_neighbors, rng, n_features
        )
        train_y += [1] * s
    elif effective == "adasyn":
        train_x += baselines.adasyn(
            minority_vectors, majority_vectors, s, config.k_neighbors, rng, n_features
        )
        train_y += [1] * s
    elif method in ("mco", "emco"):
        synthetic = chain.oversample(chain_model, s, rng)
        train_x += [
            vectorize.transform_tokens(tokens, prepared.tfidf)
            for tokens in synthetic
        ]
        train_y += [1] * s
    else:  # pragma: no cover
        raise ValueError(f"unknown method {method!r}")

    counts = _evaluate(prepared, task, train_x, train_y, config, clf_seed)
    row = {
        "dataset": config.dataset,
        "category": task.category,
        "method": method,
        "gamma": "" if gamma is None else f"{gamma:g}",
        "sampling_ratio": f"{ratio:g}",
        "repetition": rep,
        "tp": counts.tp,
        "fp": counts.fp,
        "tn": counts.tn,
        "fn": counts.fn,
    }
    row.update(
        {k: round(v, 10) for k, v in metrics.compute_metrics(counts).items()}
    )
    return row


def _execute(
    config: ExperimentConfig, prepared: _Prepared | None = None
) -> tuple[list[dict], dict[float, dict[str, float]], list[dict]]:
    """Run the whole matrix; returns (rows, frequencies per ratio, skipped)."""
    if prepared is None:
        prepared = prepare(config)

    jobs = []
    skipped = []
    frequencies: dict[float, dict[str, float]] = {}
    chain_cache: dict[tuple[str, float], chain.TransitionModel] = {}
    none_cache: dict[tuple[str, int], dict] = {}

    for ratio in config.sampling_ratios:
        tasks = corpus.build_ovr_tasks(prepared.docs, ratio)
        frequencies[ratio] = {
            t.category: t.minority_train_frequency for t in tasks
        }
        for task in tasks:
            if not task.evaluable:
                log.warning(
                    "skipping task %s at ratio %g: test split lacks a class",
                    task.category, ratio,
                )
                skipped.append(
                    {"category": task.category, "ratio": ratio,
                     "reason": "test split lacks a class"}
                )
                continue
            for method in config.methods:
                gammas: tuple[float | None, ...]
                if method == "emco":
                    gammas = config.gammas
                elif method == "mco":
                    gammas = (0.0,)
                else:
                    gammas = (None,)
                for gamma in gammas:
                    if method in ("mco", "emco"):
                        key = (task.category, float(gamma))
                        if key not in chain_cache:
                            chain_cache[key] = chain.estimate(
                                [d.tokens for d in task.train_minority],
                                [d.tokens for d in task.train_majority],
                                float(gamma),
                            )
                    for rep in range(config.repetitions):
                        jobs.append((ratio, task, method, gamma, rep))

    def run_job(job):
        ratio, task, method, gamma, rep = job
        if method == "none":
            # ratio does not affect an unsampled run; reuse per (category, rep)
            cache_key = (task.category, rep)
            if cache_key not in none_cache:
                none_cache[cache_key] = _run_one(
                    prepared, task, method, gamma, ratio, rep, config, None
                )
            row = dict(none_cache[cache_key])
            row["sampling_ratio"] = f"{ratio:g}"
            return row
        model = (
            chain_cache[(task.category, float(gamma))]
            if method in ("mco", "emco")
            else None
        )
        return _run_one(prepared, task, method, gamma, ratio, rep, config, model)

    # precompute the "none" cache serially so threads never race on it
    for job in jobs:
        if job[2] == "none":
            run_job(job)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(run_job, jobs))
    else:
        rows = [run_job(job) for job in jobs]

    rows.sort(
        key=lambda r: (
            r["sampling_ratio"], r["category"], r["method"], r["gamma"],
            r["repetition"],
        )
    )
    return rows, frequencies, skipped


def aggregate_rows(
    rows: Sequence[Mapping], frequencies: dict[float, dict[str, float]]
) -> dict[str, dict]:
    """Macro averages keyed by 'method|ratio|band'."""
    groups: dict[tuple[str, str], list[Mapping]] = {}
    for row in rows:
        label = method_label(
            row["method"], float(row["gamma"]) if row["gamma"] != "" else None
        )
        groups.setdefault((label, row["sampling_ratio"]), []).append(row)

    out = {}
    for (label, ratio_str), group_rows in sorted(groups.items()):
        freqs = frequencies[float(ratio_str)]
        banded = metrics.macro_average(group_rows, freqs)
        for band, values in banded.items():
            out[f"{label}|{ratio_str}|{band}"] = values
    return out


def run(config: ExperimentConfig) -> dict:
    """Run the experiment matrix and write results to the output directory."""
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    prepared = prepare(config)
    rows, frequencies, skipped = _execute(config, prepared)
    aggregate = aggregate_rows(rows, frequencies)

    metrics.write_rows_csv(out_dir / "results.csv", rows)
    metrics.write_aggregate_json(out_dir / "aggregate.json", aggregate)
    manifest = {
        "config": asdict(config),
        "skipped_tasks": skipped,
        "task_frequencies": {
            f"{ratio:g}": freqs for ratio, freqs in frequencies.items()
        },
        "n_rows": len(rows),
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return {"rows": rows, "aggregate": aggregate, "manifest": manifest}


def gamma_sweep(config: ExperimentConfig, gammas: Sequence[float]) -> list[dict]:
    """Macro recall/tnr/precision per gamma value, for the emco method only."""
    if "emco" not in config.methods:
        raise ValueError("gamma_sweep requires emco among the configured methods")
    prepared = prepare(config)
    sweep_rows = []
    for gamma in gammas:
        sweep_config = ExperimentConfig(
            **{**asdict(config), "methods": ("emco",), "gammas": (float(gamma),)}
        )
        rows, frequencies, _ = _execute(sweep_config, prepared)
        for ratio in config.sampling_ratios:
            ratio_rows = [
                r for r in rows if r["sampling_ratio"] == f"{ratio:g}"
            ]
            if not ratio_rows:
                continue
            banded = metrics.macro_average(ratio_rows, frequencies[ratio])
            for band, values in sorted(banded.items()):
                sweep_rows.append(
                    {
                        "gamma": gamma,
                        "sampling_ratio": f"{ratio:g}",
                        "band": band,
                        "recall": values["recall"],
                        "tnr": values["tnr"],
                        "precision": values["precision"],
                        "n_categories": values["n_categories"],
                    }
                )
    return sweep_rows
