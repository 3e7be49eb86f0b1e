"""End-to-end acceptance gates.

Each test is one acceptance gate; together they cover the published-table
arithmetic, the from-scratch solvers against independent oracles, the
planted-signal pipeline, reproducibility, and (when a real corpus is
available) the reference headline numbers. Budgets are asserted where a
gate carries one.
"""

import os
import random
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from catfish.corpus import load_corpus
from catfish.detector import scan_corpus
from catfish.evaluation import (TASK_AGE, TASK_GENDER, classification_metrics,
                                cross_validate, fit_fold, labeled_subset,
                                mae, pearson)
from catfish.model import (TrainConfig, objective, train_classifier,
                           train_regressor, tube_gradient, tube_objective)
from catfish.synth import SynthConfig, generate_corpus, oracle_eval

from oracles import (brute_mae, brute_pearson, central_difference,
                     grid_min_svc, grid_min_svr)

# Reference metrics reported for the original crawled corpus: 299 verified
# female and 820 verified male profiles, per-class precision and recall for
# each feature group, and the headline F1 / macro-F1 / accuracy they imply.
N_FEMALE = 299
N_MALE = 820
REFERENCE_TABLE = {
    "content": {
        "female": {"precision": 0.885, "recall": 0.542, "f1": 0.672},
        "male": {"precision": 0.854, "recall": 0.974, "f1": 0.910},
        "macro_f1": 0.791,
        "accuracy": 0.859,
    },
    "network": {
        "female": {"precision": 0.847, "recall": 0.702, "f1": 0.768},
        "male": {"precision": 0.898, "recall": 0.954, "f1": 0.925},
        "macro_f1": 0.846,
        "accuracy": 0.887,
    },
    "all": {
        "female": {"precision": 0.920, "recall": 0.769, "f1": 0.838},
        "male": {"precision": 0.921, "recall": 0.976, "f1": 0.947},
        "macro_f1": 0.893,
        "accuracy": 0.920,
    },
}


def _labels_from_reference(row) -> tuple[list[str], list[str]]:
    """Integer confusion counts implied by the published (P, R) pair."""
    tp_f = round(row["female"]["recall"] * N_FEMALE)
    p_f = row["female"]["precision"]
    fp_f = round(tp_f * (1.0 - p_f) / p_f)
    fn_f = N_FEMALE - tp_f
    tp_m = N_MALE - fp_f
    y_true = ["female"] * N_FEMALE + ["male"] * N_MALE
    y_pred = (["female"] * tp_f + ["male"] * fn_f
              + ["female"] * fp_f + ["male"] * tp_m)
    return y_true, y_pred


def test_reference_table_is_arithmetically_consistent():
    started = time.perf_counter()
    for group, row in REFERENCE_TABLE.items():
        y_true, y_pred = _labels_from_reference(row)
        got = classification_metrics(y_true, y_pred)
        for cls in ("female", "male"):
            assert got.per_class[cls].f1 == pytest.approx(
                row[cls]["f1"], abs=1e-3), f"{group}/{cls} f1"
            assert got.per_class[cls].precision == pytest.approx(
                row[cls]["precision"], abs=1e-3), f"{group}/{cls} precision"
            assert got.per_class[cls].recall == pytest.approx(
                row[cls]["recall"], abs=1e-3), f"{group}/{cls} recall"
        assert got.macro_f1 == pytest.approx(row["macro_f1"], abs=1e-3), group
        assert got.accuracy == pytest.approx(row["accuracy"], abs=1e-3), group
        print(f"[pass] {group}: accuracy {got.accuracy:.4f} "
              f"macro-F1 {got.macro_f1:.4f}")
    elapsed = time.perf_counter() - started
    print(f"[pass] reference-table identity in {elapsed:.3f}s (budget 1s)")
    assert elapsed < 1.0


def test_solvers_match_grid_oracles_on_tiny_instances():
    started = time.perf_counter()
    rng = np.random.default_rng(1234)
    tight = dict(tolerance=1e-8, max_passes=2000)
    worst = 0.0
    for trial in range(24):
        n = int(rng.integers(2, 7))
        d = int(rng.integers(1, 3))
        X = np.round(rng.normal(size=(n, d)) * rng.choice([0.5, 1.0, 2.0]), 3)
        C = float(rng.choice([0.5, 1.0, 2.0]))
        if trial % 2 == 0:
            y = rng.choice([-1.0, 1.0], size=n)
            if np.all(y == y[0]):
                y[0] = -y[0]
            model = train_classifier(X, y, TrainConfig(C=C, **tight))
            flipped = train_classifier(X, -y, TrainConfig(C=C, **tight))
            oracle, _ = grid_min_svc(X, y, C)
        else:
            y = np.round(rng.normal(scale=3.0, size=n), 3)
            eps = float(rng.choice([0.25, 0.5, 1.0]))
            model = train_regressor(X, y, TrainConfig(C=C, epsilon=eps, **tight))
            flipped = train_regressor(X, -y, TrainConfig(C=C, epsilon=eps, **tight))
            oracle, _ = grid_min_svr(X, y, C, eps)
        gap = abs(objective(model, X, y) - oracle)
        worst = max(worst, gap)
        assert gap <= 1e-3, f"instance {trial}: solver vs grid gap {gap:.2e}"
        np.testing.assert_array_equal(model.weights, -flipped.weights)
        assert model.bias == -flipped.bias
        assert np.all(np.diff(model.pass_objectives) <= 1e-9)
    elapsed = time.perf_counter() - started
    print(f"[pass] 24 instances, worst oracle gap {worst:.2e}, "
          f"label-flip exact, objectives monotone, {elapsed:.1f}s (budget 30s)")
    assert elapsed < 30.0


def test_regressor_gradient_matches_central_differences():
    started = time.perf_counter()
    rng = np.random.default_rng(77)
    X = rng.normal(size=(15, 3))
    y = rng.normal(scale=3.0, size=15)
    C, eps = 1.0, 0.5
    checked = 0
    attempts = 0
    worst = 0.0
    while checked < 100:
        attempts += 1
        assert attempts < 10000, "could not find enough non-kink points"
        point = rng.normal(scale=1.5, size=4)
        w, b = point[:-1], point[-1]
        residual = y - (X @ w + b)
        if np.min(np.abs(np.abs(residual) - eps)) <= 1e-3:
            continue  # too close to a tube edge for a 1e-5 step
        gw, gb = tube_gradient(w, b, X, y, C, eps)
        analytic = np.append(gw, gb)
        fd = central_difference(
            lambda v: tube_objective(v[:-1], v[-1], X, y, C, eps),
            point, step=1e-5)
        scale = np.maximum(np.abs(analytic), 1.0)
        rel = float(np.max(np.abs(fd - analytic) / scale))
        worst = max(worst, rel)
        assert rel <= 1e-4, f"gradient mismatch {rel:.2e} at point {point}"
        checked += 1
    elapsed = time.perf_counter() - started
    print(f"[pass] 100 non-kink points, worst relative error {worst:.2e}, "
          f"{elapsed:.2f}s (budget 5s)")
    assert elapsed < 5.0


def test_planted_corpus_end_to_end():
    started = time.perf_counter()
    config = SynthConfig(n_profiles=2000, seed=42, catfish_fraction=0.2)
    corpus, truth = generate_corpus(config)

    gender = cross_validate(corpus, task=TASK_GENDER, k=10, seed=42)
    assert gender.pooled.accuracy >= 0.90, gender.pooled.accuracy
    print(f"[pass] 10-fold gender accuracy {gender.pooled.accuracy:.4f} "
          f"(floor 0.90)")

    mae_budget = config.age_noise_years + 1.0
    age_all = cross_validate(corpus, task=TASK_AGE, k=10, seed=42)
    assert age_all.pooled.mae <= mae_budget, age_all.pooled.mae
    print(f"[pass] 10-fold age MAE {age_all.pooled.mae:.4f} "
          f"(budget {mae_budget:.1f})")

    profiles = labeled_subset(corpus, TASK_GENDER, 10, True)
    spec, gender_model = fit_fold(profiles, TASK_GENDER)
    _, age_model = fit_fold(profiles, TASK_AGE)
    scan = scan_corpus(corpus, gender_model, age_model, spec)
    report = oracle_eval(truth, scan.verdicts)
    assert report.precision >= 0.8, report.precision
    assert report.recall >= 0.8, report.recall
    print(f"[pass] detector precision {report.precision:.4f} "
          f"recall {report.recall:.4f} (floors 0.8) over "
          f"{report.n_planted} planted")

    age_content = cross_validate(corpus, task=TASK_AGE, k=10, seed=42,
                                 groups=("content",))
    age_network = cross_validate(corpus, task=TASK_AGE, k=10, seed=42,
                                 groups=("network",))
    assert age_content.pooled.mae < age_network.pooled.mae
    print(f"[pass] age MAE content {age_content.pooled.mae:.4f} < "
          f"network {age_network.pooled.mae:.4f}")

    elapsed = time.perf_counter() - started
    print(f"[pass] end-to-end in {elapsed:.1f}s (budget 120s)")
    assert elapsed < 120.0


def _run_cli(*args):
    env = dict(os.environ)
    env.pop("CATFISH_SEED", None)
    result = subprocess.run([sys.executable, "-m", "catfish.cli"]
                            + [str(a) for a in args],
                            env=env, capture_output=True, text=True)
    assert result.returncode == 0, result.stderr
    return result


def test_pipeline_reruns_are_byte_identical(tmp_path):
    artifacts = {}
    for run in ("one", "two"):
        base = tmp_path / run
        base.mkdir()
        corpus = base / "corpus.jsonl"
        _run_cli("synth", "--out", corpus, "--n", 150, "--seed", 6,
                 "--catfish-fraction", 0.2, "--verified-fraction", 0.3)
        _run_cli("train", "--corpus", corpus, "--task", "gender",
                 "--out", base / "gender.model.json", "--seed", 6)
        _run_cli("train", "--corpus", corpus, "--task", "age",
                 "--out", base / "age.model.json", "--seed", 6)
        _run_cli("evaluate", "--corpus", corpus, "--task", "gender",
                 "--k", 5, "--seed", 6, "--out", base / "eval.csv")
        _run_cli("detect", "--corpus", corpus,
                 "--gender-model", base / "gender.model.json",
                 "--age-model", base / "age.model.json",
                 "--out", base / "verdicts.csv")
        artifacts[run] = sorted(
            p for p in base.iterdir()
            if p.is_file() and not p.name.endswith(".manifest.json"))
    names = [p.name for p in artifacts["one"]]
    assert names == [p.name for p in artifacts["two"]]
    for a, b in zip(artifacts["one"], artifacts["two"]):
        assert a.read_bytes() == b.read_bytes(), f"{a.name} differs"
    print(f"[pass] {len(names)} artifacts byte-identical across reruns: "
          + ", ".join(names))


def test_mae_and_pearson_match_brute_force_on_1000_pairs():
    rng = random.Random(2718)
    worst_mae = 0.0
    worst_pearson = 0.0
    for _ in range(1000):
        n = rng.randint(2, 40)
        a = [rng.uniform(-100.0, 100.0) for _ in range(n)]
        b = [rng.uniform(-100.0, 100.0) for _ in range(n)]
        worst_mae = max(worst_mae, abs(mae(a, b) - brute_mae(a, b)))
        worst_pearson = max(worst_pearson,
                            abs(pearson(a, b) - brute_pearson(a, b)))
    assert worst_mae <= 1e-9
    assert worst_pearson <= 1e-9
    print(f"[pass] 1000 pairs: worst mae gap {worst_mae:.2e}, "
          f"worst pearson gap {worst_pearson:.2e} (budget 1e-9)")


def test_real_corpus_reproduces_reference_numbers():
    path = os.environ.get("CATFISH_DATASET")
    if not path or not Path(path).is_file():
        pytest.skip("set CATFISH_DATASET to a real corpus JSONL to run")
    corpus = load_corpus(path)
    gender = cross_validate(corpus, task=TASK_GENDER, k=10, seed=0)
    assert gender.pooled.accuracy == pytest.approx(0.920, abs=0.03)
    age = cross_validate(corpus, task=TASK_AGE, k=10, seed=0,
                         groups=("content",))
    assert age.pooled.mae == pytest.approx(5.581, abs=0.75)
    print(f"[pass] real corpus: gender accuracy {gender.pooled.accuracy:.4f} "
          f"(0.920±0.03), age MAE {age.pooled.mae:.4f} (5.581±0.75)")
