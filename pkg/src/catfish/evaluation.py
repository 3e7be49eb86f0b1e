"""Cross-validation and metrics for the gender and age models.

Folds are planned up front (`FoldPlan`), feature specs are refitted
inside every training fold so nothing leaks from held-out profiles, and
reports carry both per-fold metrics and the pooled metrics computed over
the concatenated held-out predictions.
"""

from __future__ import annotations

import csv
import random
import warnings
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import ADULT_AGE_FLOOR, AGE_CAP, Corpus, Gender, Profile
from .errors import DataError, DegenerateInputError
from .model import (
    ClassifierModel,
    RegressorModel,
    TrainConfig,
    decision_values,
    train_classifier,
    train_regressor,
)
from .netfeat import (
    ALL_GROUPS,
    GENDER_MIX_CAVEAT,
    GROUP_NETWORK,
    FeatureSpec,
    assemble_matrix,
    fit_feature_spec,
)
from .textfeat import LexiconSet

TASK_GENDER = "gender"
TASK_AGE = "age"


@dataclass(frozen=True)
class FoldPlan:
    """Disjoint index folds covering range(n)."""

    k: int
    seed: int
    stratified: bool
    folds: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for fold in self.folds:
            if not fold:
                raise DataError("every fold must be nonempty")
            seen.update(fold)
        n = sum(len(f) for f in self.folds)
        if len(self.folds) != self.k or seen != set(range(n)):
            raise DataError("folds must partition the sample indices")

    @property
    def n(self) -> int:
        return sum(len(f) for f in self.folds)


def _check_k(k: int, n: int) -> None:
    if k < 2:
        raise DataError(f"k must be at least 2, got {k}")
    if k > n:
        raise DataError(f"k={k} exceeds the {n} available samples")


def kfold(n: int, k: int, seed: int = 0) -> FoldPlan:
    """Shuffled round-robin folds; sizes differ by at most one."""
    _check_k(k, n)
    order = list(range(n))
    random.Random(seed).shuffle(order)
    folds: list[list[int]] = [[] for _ in range(k)]
    for position, idx in enumerate(order):
        folds[position % k].append(idx)
    return FoldPlan(k=k, seed=seed, stratified=False,
                    folds=tuple(tuple(sorted(f)) for f in folds))


def stratified_kfold(labels: Sequence[str], k: int, seed: int = 0) -> FoldPlan:
    """Round-robin within each class, rotating the starting fold between
    classes so that total fold sizes also differ by at most one."""
    n = len(labels)
    _check_k(k, n)
    counts = Counter(labels)
    if min(counts.values()) < k:
        smallest = min(counts, key=lambda c: (counts[c], c))
        warnings.warn(f"class {smallest!r} has only {counts[smallest]} samples, "
                      f"fewer than k={k}; falling back to unstratified folds")
        return kfold(n, k, seed)
    by_class: dict[str, list[int]] = {}
    for idx, label in enumerate(labels):
        by_class.setdefault(label, []).append(idx)
    rng = random.Random(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for label in sorted(by_class):
        members = by_class[label]
        rng.shuffle(members)
        for position, idx in enumerate(members):
            folds[(offset + position) % k].append(idx)
        offset = (offset + len(members)) % k
    return FoldPlan(k=k, seed=seed, stratified=True,
                    folds=tuple(tuple(sorted(f)) for f in folds))


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class ClassificationMetrics:
    accuracy: float
    per_class: dict[str, ClassMetrics]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    n: int


@dataclass(frozen=True)
class RegressionMetrics:
    mae: float
    pearson_r: float | None
    n: int


def classification_metrics(y_true: Sequence[str],
                           y_pred: Sequence[str]) -> ClassificationMetrics:
    if len(y_true) != len(y_pred):
        raise DataError("label sequences differ in length")
    if not y_true:
        raise DataError("cannot score zero predictions")
    classes = sorted(set(y_true) | set(y_pred))
    per_class: dict[str, ClassMetrics] = {}
    for cls in classes:
        tp = sum(1 for t, p in zip(y_true, y_pred) if t == cls and p == cls)
        fp = sum(1 for t, p in zip(y_true, y_pred) if t != cls and p == cls)
        fn = sum(1 for t, p in zip(y_true, y_pred) if t == cls and p != cls)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[cls] = ClassMetrics(precision, recall, f1, tp + fn)
    present = [c for c in classes if per_class[c].support > 0]
    macro = lambda attr: sum(getattr(per_class[c], attr) for c in present) / len(present)
    accuracy = sum(1 for t, p in zip(y_true, y_pred) if t == p) / len(y_true)
    return ClassificationMetrics(
        accuracy=accuracy,
        per_class=per_class,
        macro_precision=macro("precision"),
        macro_recall=macro("recall"),
        macro_f1=macro("f1"),
        n=len(y_true),
    )


def mae(y_true, y_pred) -> float:
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise DataError("mae expects two equal-length 1-D sequences")
    if len(y_true) == 0:
        raise DataError("mae of zero samples is undefined")
    return float(np.mean(np.abs(y_true - y_pred)))


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DataError("pearson expects two equal-length 1-D sequences")
    if len(x) < 2:
        raise DegenerateInputError("pearson needs at least two samples")
    xm = x - x.mean()
    ym = y - y.mean()
    denom = float(np.sqrt((xm @ xm) * (ym @ ym)))
    if denom == 0.0:
        raise DegenerateInputError("pearson is undefined for a constant sequence")
    return float(min(1.0, max(-1.0, float(xm @ ym) / denom)))


def regression_metrics(y_true, y_pred) -> RegressionMetrics:
    error = mae(y_true, y_pred)
    try:
        r = pearson(y_true, y_pred)
    except DegenerateInputError:
        r = None
    return RegressionMetrics(mae=error, pearson_r=r, n=len(y_true))


@dataclass(frozen=True)
class EvalReport:
    task: str
    groups: tuple[str, ...]
    k: int
    seed: int
    n: int
    folds: tuple
    pooled: ClassificationMetrics | RegressionMetrics

    def fold_means(self) -> dict[str, float | None]:
        """Mean of the headline per-fold metrics."""
        if self.task == TASK_GENDER:
            return {
                "accuracy": sum(f.accuracy for f in self.folds) / len(self.folds),
                "macro_f1": sum(f.macro_f1 for f in self.folds) / len(self.folds),
            }
        values = [f.pearson_r for f in self.folds if f.pearson_r is not None]
        return {
            "mae": sum(f.mae for f in self.folds) / len(self.folds),
            "pearson_r": sum(values) / len(values) if values else None,
        }


def labeled_subset(corpus: Corpus, task: str, min_comments: int,
                    verified_only: bool) -> list[Profile]:
    kept = []
    for profile in corpus.profiles:
        if verified_only and not profile.verified:
            continue
        if len(profile.comments) < min_comments:
            continue
        if task == TASK_GENDER and profile.reported_gender not in (Gender.MALE, Gender.FEMALE):
            continue
        if task == TASK_AGE and profile.reported_age is None:
            continue
        kept.append(profile)
    return kept


def fit_fold(train_profiles: Sequence[Profile], task: str, *,
             groups=ALL_GROUPS, lexicon: LexiconSet | None = None,
             min_df: int = 2, config: TrainConfig | None = None):
    """Fit spec and model on training profiles only; returns (spec, model)."""
    if task not in (TASK_GENDER, TASK_AGE):
        raise DataError(f"unknown task {task!r}")
    spec = fit_feature_spec(train_profiles, groups=groups, lexicon=lexicon,
                            min_df=min_df)
    X = assemble_matrix(train_profiles, spec)
    if task == TASK_GENDER:
        y = np.array([1.0 if p.reported_gender == Gender.MALE else -1.0
                      for p in train_profiles])
        model = train_classifier(X, y, config,
                                 positive_label=Gender.MALE.value,
                                 negative_label=Gender.FEMALE.value,
                                 spec_fingerprint=spec.fingerprint)
    else:
        y = np.array([float(p.reported_age) for p in train_profiles])
        model = train_regressor(X, y, config, spec_fingerprint=spec.fingerprint)
    return spec, model


def cross_validate(corpus: Corpus, *, task: str, groups=ALL_GROUPS,
                   lexicon: LexiconSet | None = None, k: int = 10,
                   seed: int = 0, min_comments: int = 10, min_df: int = 2,
                   config: TrainConfig | None = None,
                   verified_only: bool = True) -> EvalReport:
    """K-fold evaluation over the verified, eligible, labeled profiles."""
    if task not in (TASK_GENDER, TASK_AGE):
        raise DataError(f"unknown task {task!r}")
    profiles = labeled_subset(corpus, task, min_comments, verified_only)
    if len(profiles) < k:
        raise DataError(f"only {len(profiles)} usable profiles for task "
                        f"{task!r}, need at least k={k}")
    if task == TASK_GENDER:
        plan = stratified_kfold([p.reported_gender.value for p in profiles], k, seed)
    else:
        plan = kfold(len(profiles), k, seed)

    fold_metrics = []
    pooled_true: list = []
    pooled_pred: list = []
    for fold in plan.folds:
        held = set(fold)
        train = [p for i, p in enumerate(profiles) if i not in held]
        test = [profiles[i] for i in fold]
        spec, model = fit_fold(train, task, groups=groups, lexicon=lexicon,
                               min_df=min_df, config=config)
        scores = decision_values(model, assemble_matrix(test, spec))
        if task == TASK_GENDER:
            pred = np.where(scores > 0, model.positive_label,
                            np.where(scores < 0, model.negative_label,
                                     model.majority_label)).tolist()
            true = [p.reported_gender.value for p in test]
            fold_metrics.append(classification_metrics(true, pred))
        else:
            pred = np.clip(scores, float(ADULT_AGE_FLOOR), float(AGE_CAP)).tolist()
            true = [float(p.reported_age) for p in test]
            fold_metrics.append(regression_metrics(true, pred))
        pooled_true.extend(true)
        pooled_pred.extend(pred)

    if task == TASK_GENDER:
        pooled = classification_metrics(pooled_true, pooled_pred)
    else:
        pooled = regression_metrics(pooled_true, pooled_pred)
    return EvalReport(task=task, groups=tuple(groups), k=k, seed=seed,
                      n=len(profiles), folds=tuple(fold_metrics), pooled=pooled)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def write_report_csv(report: EvalReport, path: str | Path) -> None:
    """One row per fold plus a pooled row; stable column order."""
    rows = []
    if report.task == TASK_GENDER:
        classes = sorted(report.pooled.per_class)
        header = ["fold", "n", "accuracy"]
        for cls in classes:
            header += [f"precision_{cls}", f"recall_{cls}", f"f1_{cls}",
                       f"support_{cls}"]
        header += ["macro_precision", "macro_recall", "macro_f1"]
        empty = ClassMetrics(0.0, 0.0, 0.0, 0)
        for name, metrics in [*((str(i + 1), m) for i, m in enumerate(report.folds)),
                              ("pooled", report.pooled)]:
            row = [name, metrics.n, metrics.accuracy]
            for cls in classes:
                cm = metrics.per_class.get(cls, empty)
                row += [cm.precision, cm.recall, cm.f1, cm.support]
            row += [metrics.macro_precision, metrics.macro_recall, metrics.macro_f1]
            rows.append(row)
    else:
        header = ["fold", "n", "mae", "pearson_r"]
        for name, metrics in [*((str(i + 1), m) for i, m in enumerate(report.folds)),
                              ("pooled", report.pooled)]:
            rows.append([name, metrics.n, metrics.mae, metrics.pearson_r])
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def format_report_table(report: EvalReport) -> str:
    """Plain-text summary for terminals."""
    lines = [f"task={report.task} groups={','.join(report.groups)} "
             f"k={report.k} seed={report.seed} n={report.n}"]
    means = report.fold_means()
    if report.task == TASK_GENDER:
        pooled = report.pooled
        lines.append(f"pooled accuracy {pooled.accuracy:.4f}  "
                     f"macro F1 {pooled.macro_f1:.4f}")
        for cls in sorted(pooled.per_class):
            cm = pooled.per_class[cls]
            lines.append(f"  {cls:<8} precision {cm.precision:.4f}  "
                         f"recall {cm.recall:.4f}  f1 {cm.f1:.4f}  "
                         f"support {cm.support}")
        lines.append(f"fold means: accuracy {means['accuracy']:.4f}  "
                     f"macro F1 {means['macro_f1']:.4f}")
    else:
        pooled = report.pooled
        r = "n/a" if pooled.pearson_r is None else f"{pooled.pearson_r:.4f}"
        lines.append(f"pooled MAE {pooled.mae:.4f}  pearson r {r}")
        fold_r = means["pearson_r"]
        fold_r_text = "n/a" if fold_r is None else f"{fold_r:.4f}"
        lines.append(f"fold means: MAE {means['mae']:.4f}  pearson r {fold_r_text}")
    if GROUP_NETWORK in report.groups:
        lines.append(f"note: {GENDER_MIX_CAVEAT}")
    return "\n".join(lines)
