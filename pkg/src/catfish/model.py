"""Linear max-margin models trained with a from-scratch dual solver.

Both tasks reduce to the same box-constrained quadratic program:

    minimize   0.5 * beta' Q beta + p' beta
    subject to 0 <= beta_u <= U_u  and  sum_u s_u beta_u = 0

where Q[u, t] = s_u s_t K[base(u), base(t)] and K is the Gram matrix of
the training rows. The gender classifier is the hinge-loss dual (one
coordinate per sample, s = labels, p = -1). The age regressor is the
epsilon-insensitive dual (two coordinates per sample, s = +1 then -1,
p = eps -/+ y). `_solve_box_qp` runs maximal-violating-pair updates on
that shared form; the bias is then recovered exactly by minimizing the
one-dimensional piecewise-linear primal in b.

Training canonicalizes label signs first and flips the solution back at
the end, so negating every label negates the returned weights and bias
bit for bit.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import ClassVar

import numpy as np
from scipy import sparse

from .corpus import ADULT_AGE_FLOOR, AGE_CAP, Gender
from .errors import (
    ConfigError,
    DataError,
    DegenerateInputError,
    FingerprintMismatchError,
)
from .netfeat import FeatureSpec, FeatureVector, spec_from_dict, spec_to_dict

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class TrainConfig:
    """Solver settings shared by the classifier and the regressor."""

    C: float = 1.0
    epsilon: float = 0.5
    tolerance: float = 1e-3
    max_passes: int = 200
    seed: int = 0
    balanced: bool = False

    def __post_init__(self):
        if not (self.C > 0 and math.isfinite(self.C)):
            raise ConfigError(f"C must be positive and finite, got {self.C!r}")
        if not (self.epsilon >= 0 and math.isfinite(self.epsilon)):
            raise ConfigError(f"epsilon must be nonnegative, got {self.epsilon!r}")
        if not (self.tolerance > 0 and math.isfinite(self.tolerance)):
            raise ConfigError(f"tolerance must be positive, got {self.tolerance!r}")
        if self.max_passes < 1:
            raise ConfigError(f"max_passes must be at least 1, got {self.max_passes!r}")


@dataclass(frozen=True, eq=False)
class ClassifierModel:
    kind: ClassVar[str] = "gender_classifier"

    weights: np.ndarray
    bias: float
    config: TrainConfig
    spec_fingerprint: str
    positive_label: str
    negative_label: str
    majority_label: str
    converged: bool
    epochs: int
    final_violation: float
    pass_objectives: tuple[float, ...]

    def __post_init__(self):
        _check_params(self.weights, self.bias)
        if self.positive_label == self.negative_label:
            raise ConfigError("positive and negative labels must differ")
        if self.majority_label not in (self.positive_label, self.negative_label):
            raise ConfigError("majority label must be one of the class labels")


@dataclass(frozen=True, eq=False)
class RegressorModel:
    kind: ClassVar[str] = "age_regressor"

    weights: np.ndarray
    bias: float
    config: TrainConfig
    spec_fingerprint: str
    converged: bool
    epochs: int
    final_violation: float
    pass_objectives: tuple[float, ...]

    def __post_init__(self):
        _check_params(self.weights, self.bias)


def _check_params(weights: np.ndarray, bias: float) -> None:
    if weights.ndim != 1 or len(weights) < 1:
        raise DataError("weights must be a nonempty 1-D array")
    if not (np.all(np.isfinite(weights)) and math.isfinite(bias)):
        raise DataError("model parameters must be finite")


def _validate_matrix(X) -> tuple[int, int]:
    if X.ndim != 2:
        raise DataError("training matrix must be 2-D")
    n, d = X.shape
    if d < 1:
        raise DataError("training matrix needs at least one feature column")
    data = X.data if sparse.issparse(X) else X
    if not np.all(np.isfinite(data)):
        raise DataError("training matrix contains non-finite values")
    return n, d


def _gram(X) -> np.ndarray:
    if sparse.issparse(X):
        return np.asarray((X @ X.T).todense(), dtype=float)
    X = np.asarray(X, dtype=float)
    return X @ X.T


def _weights_from_dual(X, g: np.ndarray) -> np.ndarray:
    if sparse.issparse(X):
        return np.asarray(X.T.dot(g)).ravel()
    return np.asarray(X, dtype=float).T @ g


def _scores(X, weights: np.ndarray, bias: float = 0.0) -> np.ndarray:
    if sparse.issparse(X):
        return np.asarray(X.dot(weights)).ravel() + bias
    return np.asarray(X, dtype=float) @ weights + bias


def _solve_box_qp(K: np.ndarray, s: np.ndarray, p: np.ndarray, U: np.ndarray,
                  tolerance: float, max_passes: int, rng: random.Random):
    """Maximal-violating-pair updates on the shared dual form.

    Maintains g[i] = sum of s_u beta_u over coordinates based at row i
    (so w = X' g) and h = K g. A pair (i, j) violates optimality when
    v_i - v_j > tolerance with v_u = -h[base(u)] - s_u p_u, i drawn from
    coordinates that can move up, j from those that can move down. Ties
    are broken by a seeded permutation so reruns take identical paths.
    """
    n = K.shape[0]
    N = len(s)
    base = np.arange(N) % n
    beta = np.zeros(N)
    g = np.zeros(n)
    h = np.zeros(n)
    order = np.array(rng.sample(range(N), N))

    converged = False
    final_violation = math.inf
    objectives: list[float] = []
    epochs = 0
    for _ in range(max_passes):
        epochs += 1
        for _ in range(N):
            v = -h[base] - s * p
            up = ((s > 0) & (beta < U)) | ((s < 0) & (beta > 0))
            down = ((s > 0) & (beta > 0)) | ((s < 0) & (beta < U))
            vo = v[order]
            pick_i = int(np.argmax(np.where(up[order], vo, -np.inf)))
            pick_j = int(np.argmin(np.where(down[order], vo, np.inf)))
            i = int(order[pick_i])
            j = int(order[pick_j])
            final_violation = float(v[i] - v[j])
            if final_violation <= tolerance:
                converged = True
                break

            bi, bj = int(base[i]), int(base[j])
            cap_i = (U[i] - beta[i]) if s[i] > 0 else beta[i]
            cap_j = beta[j] if s[j] > 0 else (U[j] - beta[j])
            a = K[bi, bi] + K[bj, bj] - 2.0 * K[bi, bj]
            if a > 0:
                t = min((v[i] - v[j]) / a, cap_i, cap_j)
            else:
                # flat direction, slide to whichever box wall comes first
                t = min(cap_i, cap_j)
            if t == cap_i:
                beta[i] = U[i] if s[i] > 0 else 0.0
            else:
                beta[i] += s[i] * t
            if t == cap_j:
                beta[j] = 0.0 if s[j] > 0 else U[j]
            else:
                beta[j] -= s[j] * t
            g[bi] += t
            g[bj] -= t
            if bi != bj:
                h += t * (K[:, bi] - K[:, bj])
        h = K @ g  # refresh to keep recorded objectives drift-free
        objectives.append(0.5 * float(g @ h) + float(p @ beta))
        if converged:
            break
    return beta, g, converged, epochs, tuple(objectives), final_violation


def _piecewise_bias(events: np.ndarray, deltas: np.ndarray, init_slope: float) -> float:
    """Exact minimizer of a convex piecewise-linear function of b.

    The function starts with slope init_slope and gains deltas[k] at
    events[k]. Returns the smallest-interval midpoint when the minimum
    is a flat segment, the breakpoint itself otherwise.
    """
    order = np.argsort(events, kind="stable")
    events = events[order]
    deltas = deltas[order]
    slope = init_slope
    last = len(events) - 1
    for idx in range(len(events)):
        slope += deltas[idx]
        if slope > 0:
            return float(events[idx])
        if slope == 0:
            if idx < last and events[idx + 1] == events[idx]:
                continue  # zero-width plateau, next delta lands on the same point
            if idx < last:
                return float(0.5 * (events[idx] + events[idx + 1]))
            return float(events[idx])
    return float(events[last])


def _class_weights(y: np.ndarray) -> np.ndarray:
    """Inverse-frequency weights that keep the total budget at n."""
    n = len(y)
    n_pos = int(np.sum(y > 0))
    n_neg = n - n_pos
    return np.where(y > 0, n / (2.0 * n_pos), n / (2.0 * n_neg))


def train_classifier(X, y, config: TrainConfig | None = None, *,
                     positive_label: str = Gender.MALE.value,
                     negative_label: str = Gender.FEMALE.value,
                     spec_fingerprint: str = "") -> ClassifierModel:
    """Fit the hinge-loss linear classifier. Labels must be exactly +/-1."""
    config = config or TrainConfig()
    n, _ = _validate_matrix(X)
    y = np.asarray(y, dtype=float)
    if y.shape != (n,):
        raise DataError(f"expected {n} labels, got shape {y.shape}")
    if not np.all((y == 1.0) | (y == -1.0)):
        raise DataError("classifier labels must be exactly +1 or -1")
    n_pos = int(np.sum(y > 0))
    if n_pos == 0 or n_pos == n:
        raise DegenerateInputError("training labels contain only one class")

    flip = float(y[0])
    yc = flip * y
    if config.balanced:
        U = config.C * _class_weights(yc)
    else:
        U = np.full(n, config.C)
    K = _gram(X)
    rng = random.Random(config.seed)
    _, g, converged, epochs, objectives, violation = _solve_box_qp(
        K, yc, np.full(n, -1.0), U, config.tolerance, config.max_passes, rng)

    w = _weights_from_dual(X, g)
    events = yc - _scores(X, w)
    bias = _piecewise_bias(events, U.copy(), -float(np.sum(U[yc > 0])))

    majority = positive_label if n_pos * 2 >= n else negative_label
    return ClassifierModel(
        weights=flip * w,
        bias=flip * bias,
        config=config,
        spec_fingerprint=spec_fingerprint,
        positive_label=positive_label,
        negative_label=negative_label,
        majority_label=majority,
        converged=converged,
        epochs=epochs,
        final_violation=violation,
        pass_objectives=objectives,
    )


def train_regressor(X, y, config: TrainConfig | None = None, *,
                    spec_fingerprint: str = "") -> RegressorModel:
    """Fit the epsilon-insensitive linear regressor on raw target values."""
    config = config or TrainConfig()
    n, _ = _validate_matrix(X)
    y = np.asarray(y, dtype=float)
    if y.shape != (n,):
        raise DataError(f"expected {n} targets, got shape {y.shape}")
    if n < 2:
        raise DataError("regression needs at least two samples")
    if not np.all(np.isfinite(y)):
        raise DataError("regression targets must be finite")

    flip = 1.0
    for value in y:
        if value != 0.0:
            flip = 1.0 if value > 0 else -1.0
            break
    yc = flip * y
    s = np.concatenate([np.ones(n), -np.ones(n)])
    p = np.concatenate([config.epsilon - yc, config.epsilon + yc])
    U = np.full(2 * n, config.C)
    K = _gram(X)
    rng = random.Random(config.seed)
    _, g, converged, epochs, objectives, violation = _solve_box_qp(
        K, s, p, U, config.tolerance, config.max_passes, rng)

    w = _weights_from_dual(X, g)
    residual = yc - _scores(X, w)
    events = np.concatenate([residual - config.epsilon, residual + config.epsilon])
    deltas = np.full(2 * n, config.C)
    bias = _piecewise_bias(events, deltas, -config.C * n)

    return RegressorModel(
        weights=flip * w,
        bias=flip * bias,
        config=config,
        spec_fingerprint=spec_fingerprint,
        converged=converged,
        epochs=epochs,
        final_violation=violation,
        pass_objectives=objectives,
    )


def hinge_objective(weights: np.ndarray, bias: float, X, y, C: float = 1.0,
                    sample_weight: np.ndarray | None = None) -> float:
    """Primal objective of the classifier: 0.5||w||^2 + sum C_i hinge_i."""
    y = np.asarray(y, dtype=float)
    margins = 1.0 - y * _scores(X, weights, bias)
    cost = C if sample_weight is None else C * np.asarray(sample_weight, dtype=float)
    return 0.5 * float(weights @ weights) + float(np.sum(cost * np.maximum(0.0, margins)))


def tube_objective(weights: np.ndarray, bias: float, X, y, C: float = 1.0,
                   epsilon: float = 0.5,
                   sample_weight: np.ndarray | None = None) -> float:
    """Primal objective of the regressor: 0.5||w||^2 + sum C_i max(0, |r_i|-eps)."""
    y = np.asarray(y, dtype=float)
    residual = y - _scores(X, weights, bias)
    cost = C if sample_weight is None else C * np.asarray(sample_weight, dtype=float)
    excess = np.maximum(0.0, np.abs(residual) - epsilon)
    return 0.5 * float(weights @ weights) + float(np.sum(cost * excess))


def hinge_gradient(weights: np.ndarray, bias: float, X, y, C: float = 1.0,
                   sample_weight: np.ndarray | None = None):
    """Gradient of hinge_objective in (w, b). Valid away from margin kinks."""
    y = np.asarray(y, dtype=float)
    margins = 1.0 - y * _scores(X, weights, bias)
    cost = np.full(len(y), C) if sample_weight is None else C * np.asarray(sample_weight, dtype=float)
    pull = np.where(margins > 0, cost * y, 0.0)
    if sparse.issparse(X):
        loss_w = np.asarray(X.T.dot(pull)).ravel()
    else:
        loss_w = np.asarray(X, dtype=float).T @ pull
    return weights - loss_w, -float(np.sum(pull))


def tube_gradient(weights: np.ndarray, bias: float, X, y, C: float = 1.0,
                  epsilon: float = 0.5,
                  sample_weight: np.ndarray | None = None):
    """Gradient of tube_objective in (w, b). Valid away from tube-edge kinks."""
    y = np.asarray(y, dtype=float)
    residual = y - _scores(X, weights, bias)
    cost = np.full(len(y), C) if sample_weight is None else C * np.asarray(sample_weight, dtype=float)
    pull = np.where(np.abs(residual) > epsilon, cost * np.sign(residual), 0.0)
    if sparse.issparse(X):
        loss_w = np.asarray(X.T.dot(pull)).ravel()
    else:
        loss_w = np.asarray(X, dtype=float).T @ pull
    return weights - loss_w, -float(np.sum(pull))


def objective(model: ClassifierModel | RegressorModel, X, y) -> float:
    """Primal objective of a fitted model on (X, y), honoring its config."""
    cfg = model.config
    if model.kind == ClassifierModel.kind:
        sw = _class_weights(np.asarray(y, dtype=float)) if cfg.balanced else None
        return hinge_objective(model.weights, model.bias, X, y, cfg.C, sw)
    return tube_objective(model.weights, model.bias, X, y, cfg.C, cfg.epsilon)


def decision_value(model: ClassifierModel | RegressorModel,
                   features: FeatureVector | np.ndarray) -> float:
    """Raw linear score w.x + b for one encoded profile."""
    if isinstance(features, FeatureVector):
        return features.dot(model.weights) + model.bias
    features = np.asarray(features, dtype=float)
    if features.shape != model.weights.shape:
        raise DataError(f"expected a vector of dim {len(model.weights)}, "
                        f"got shape {features.shape}")
    return float(features @ model.weights) + model.bias


def decision_values(model: ClassifierModel | RegressorModel, X) -> np.ndarray:
    if X.shape[1] != len(model.weights):
        raise DataError(f"matrix has {X.shape[1]} columns, model expects "
                        f"{len(model.weights)}")
    return _scores(X, model.weights, model.bias)


def predict_gender(model: ClassifierModel,
                   features: FeatureVector | np.ndarray) -> Gender:
    score = decision_value(model, features)
    if score > 0:
        return Gender(model.positive_label)
    if score < 0:
        return Gender(model.negative_label)
    return Gender(model.majority_label)


def predict_age(model: RegressorModel,
                features: FeatureVector | np.ndarray) -> float:
    """Predicted age, clamped to the plausible adult range."""
    raw = decision_value(model, features)
    return float(min(max(raw, float(ADULT_AGE_FLOOR)), float(AGE_CAP)))


def _config_to_dict(config: TrainConfig) -> dict:
    return {"C": config.C, "epsilon": config.epsilon, "tolerance": config.tolerance,
            "max_passes": config.max_passes, "seed": config.seed,
            "balanced": config.balanced}


def _sparse_weights(weights: np.ndarray) -> dict:
    nz = np.flatnonzero(weights != 0.0)
    return {"dim": len(weights),
            "indices": [int(i) for i in nz],
            "values": [float(weights[i]) for i in nz]}


def save_model(model: ClassifierModel | RegressorModel, spec: FeatureSpec,
               path: str | Path) -> None:
    """Write model plus its feature spec as one JSON artifact."""
    if model.spec_fingerprint != spec.fingerprint:
        raise FingerprintMismatchError(
            "model was trained against a different feature spec "
            f"({model.spec_fingerprint[:12]}... vs {spec.fingerprint[:12]}...)")
    payload = {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": model.kind,
        "config": _config_to_dict(model.config),
        "weights": _sparse_weights(model.weights),
        "bias": model.bias,
        "converged": model.converged,
        "epochs": model.epochs,
        "final_violation": model.final_violation,
        "pass_objectives": list(model.pass_objectives),
        "spec": spec_to_dict(spec),
    }
    if model.kind == ClassifierModel.kind:
        payload["labels"] = {"positive": model.positive_label,
                             "negative": model.negative_label,
                             "majority": model.majority_label}
    text = json.dumps(payload, indent=2, ensure_ascii=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_model(path: str | Path):
    """Read a model artifact back; returns (model, spec)."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    version = data.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ConfigError(f"unsupported model format version {version!r}")
    spec = spec_from_dict(data["spec"])
    weights = np.zeros(data["weights"]["dim"])
    for idx, value in zip(data["weights"]["indices"], data["weights"]["values"]):
        weights[idx] = value
    config = TrainConfig(**data["config"])
    common = dict(weights=weights, bias=data["bias"], config=config,
                  spec_fingerprint=spec.fingerprint,
                  converged=data["converged"], epochs=data["epochs"],
                  final_violation=data["final_violation"],
                  pass_objectives=tuple(data["pass_objectives"]))
    if data["kind"] == ClassifierModel.kind:
        labels = data["labels"]
        return ClassifierModel(positive_label=labels["positive"],
                               negative_label=labels["negative"],
                               majority_label=labels["majority"],
                               **common), spec
    if data["kind"] == RegressorModel.kind:
        return RegressorModel(**common), spec
    raise ConfigError(f"unknown model kind {data['kind']!r}")
