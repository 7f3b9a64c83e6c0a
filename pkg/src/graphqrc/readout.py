"""Classical readout layer: ridge regression, RBF kernel SVM, and metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

VARIANCE_FLOOR = 1e-14


@dataclass(frozen=True)
class TrainTestSplit:
    """Step counts for transient discarding, training, and evaluation."""

    n_transient: int = 700
    n_train: int = 1500
    n_test: int = 150

    def __post_init__(self) -> None:
        if min(self.n_transient, self.n_train, self.n_test) <= 0:
            raise ValueError("all split sizes must be positive")

    @property
    def total(self) -> int:
        return self.n_transient + self.n_train + self.n_test

    @property
    def train_slice(self) -> slice:
        return slice(self.n_transient, self.n_transient + self.n_train)

    @property
    def test_slice(self) -> slice:
        return slice(self.n_transient + self.n_train, self.total)


@dataclass(frozen=True)
class Standardizer:
    """Column-wise zero-mean unit-variance transform fitted on training data."""

    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, features: np.ndarray) -> "Standardizer":
        x = np.asarray(features, dtype=float)
        mean = x.mean(axis=0)
        scale = x.std(axis=0)
        scale = np.where(scale < np.sqrt(VARIANCE_FLOOR), 1.0, scale)
        return cls(mean=mean, scale=scale)

    def transform(self, features: np.ndarray) -> np.ndarray:
        return (np.asarray(features, dtype=float) - self.mean) / self.scale


@dataclass(frozen=True)
class RidgeModel:
    weights: np.ndarray
    bias: float
    regularization: float


def ridge_fit(features: np.ndarray, targets: np.ndarray, lam: float) -> RidgeModel:
    """Minimize ||y - X w - b||^2 + lam ||w||^2 with an unpenalized bias.

    Solved by the normal equations on column-centered data; constant
    feature columns are tolerated (the penalty keeps the system regular).
    """
    x = np.asarray(features, dtype=float)
    y = np.asarray(targets, dtype=float)
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValueError("features must be a non-empty 2d array")
    if y.shape != (x.shape[0],):
        raise ValueError(f"targets shape {y.shape} does not match {x.shape[0]} rows")
    if lam <= 0:
        raise ValueError("regularization must be positive")
    x_mean = x.mean(axis=0)
    y_mean = float(y.mean())
    xc = x - x_mean
    yc = y - y_mean
    gram = xc.T @ xc + lam * np.eye(x.shape[1])
    weights = np.linalg.solve(gram, xc.T @ yc)
    bias = y_mean - float(x_mean @ weights)
    return RidgeModel(weights=weights, bias=bias, regularization=lam)


def ridge_predict(model: RidgeModel, features: np.ndarray) -> np.ndarray:
    x = np.asarray(features, dtype=float)
    if x.shape[1] != model.weights.shape[0]:
        raise ValueError(
            f"feature count {x.shape[1]} does not match model ({model.weights.shape[0]})"
        )
    return x @ model.weights + model.bias


def pearson_capacity(y: np.ndarray, yhat: np.ndarray) -> float:
    """Squared Pearson correlation in [0, 1]; 0 when either side is constant."""
    y = np.asarray(y, dtype=float)
    yhat = np.asarray(yhat, dtype=float)
    if y.shape != yhat.shape or y.ndim != 1 or y.size < 2:
        raise ValueError("need two equal-length vectors with at least 2 entries")
    vy = float(np.var(y))
    vh = float(np.var(yhat))
    if vy < VARIANCE_FLOOR or vh < VARIANCE_FLOOR:
        return 0.0
    cov = float(np.mean((y - y.mean()) * (yhat - yhat.mean())))
    return min(1.0, cov * cov / (vy * vh))


def mse(y: np.ndarray, yhat: np.ndarray) -> float:
    y = np.asarray(y, dtype=float)
    yhat = np.asarray(yhat, dtype=float)
    if y.shape != yhat.shape or y.size < 1:
        raise ValueError("need two equal-length non-empty vectors")
    return float(np.mean((y - yhat) ** 2))


def rbf_kernel(a: np.ndarray, b: np.ndarray, length_scale: float) -> np.ndarray:
    """exp(-d(a_i, b_j)^2 / (2 l^2)) with d the Euclidean distance."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    sq = (
        np.sum(a**2, axis=1)[:, None]
        + np.sum(b**2, axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-sq / (2.0 * length_scale**2))


@dataclass(frozen=True)
class KernelModel:
    """Soft-margin RBF classifier in dual form.

    ``dual_coefficients`` are the Lagrange multipliers alpha_i of the kept
    support vectors (0 < alpha_i <= penalty); the decision function is
    sum_i alpha_i y_i K(x_i, x) + bias.
    """

    support_vectors: np.ndarray
    support_labels: np.ndarray
    support_indices: np.ndarray
    dual_coefficients: np.ndarray
    bias: float
    length_scale: float
    penalty: float


def svm_fit(
    features: np.ndarray,
    labels: np.ndarray,
    length_scale: float = 1.0,
    penalty: float = 1.0,
    tol: float = 1e-3,
    max_passes: int = 10_000,
) -> KernelModel:
    """Train a soft-margin RBF SVM by sequential minimal optimization.

    Follows the classic two-multiplier working-set scheme with an error
    cache: pick a violator, pair it with the partner maximizing the cache
    gap, fall back to sweeps over non-bound then all examples. Terminates
    when a full sweep finds no multiplier to change (all violations within
    ``tol``) or after ``max_passes`` sweeps.
    """
    x = np.asarray(features, dtype=float)
    y = np.asarray(labels, dtype=float)
    if x.ndim != 2 or y.shape != (x.shape[0],):
        raise ValueError("features must be 2d with one label per row")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be -1 or +1")
    if len(np.unique(y)) < 2:
        raise ValueError("training data contains a single class")
    if length_scale <= 0 or penalty <= 0:
        raise ValueError("length_scale and penalty must be positive")

    n = x.shape[0]
    c = float(penalty)
    k = rbf_kernel(x, x, length_scale)
    alpha = np.zeros(n)
    bias = 0.0
    errors = -y.copy()  # decision(x_i) - y_i with all-zero multipliers
    rng = np.random.default_rng(0)  # fixed stream: fits are deterministic
    snap = 1e-8 * c

    def take_step(i1: int, i2: int) -> bool:
        nonlocal bias, errors
        if i1 == i2:
            return False
        a1_old, a2_old = alpha[i1], alpha[i2]
        y1, y2 = y[i1], y[i2]
        e1, e2 = errors[i1], errors[i2]
        s = y1 * y2
        if s > 0:
            low, high = max(0.0, a1_old + a2_old - c), min(c, a1_old + a2_old)
        else:
            low, high = max(0.0, a2_old - a1_old), min(c, c + a2_old - a1_old)
        if low >= high:
            return False
        k11, k12, k22 = k[i1, i1], k[i1, i2], k[i2, i2]
        curvature = k11 + k22 - 2.0 * k12
        if curvature > 0:
            a2 = a2_old + y2 * (e1 - e2) / curvature
            a2 = min(max(a2, low), high)
        else:
            # flat direction: compare the dual objective at both clip ends
            f1 = y1 * (e1 - bias) - a1_old * k11 - s * a2_old * k12
            f2 = y2 * (e2 - bias) - s * a1_old * k12 - a2_old * k22
            l1 = a1_old + s * (a2_old - low)
            h1 = a1_old + s * (a2_old - high)
            obj_low = (
                l1 * f1 + low * f2 + 0.5 * l1**2 * k11 + 0.5 * low**2 * k22
                + s * low * l1 * k12
            )
            obj_high = (
                h1 * f1 + high * f2 + 0.5 * h1**2 * k11 + 0.5 * high**2 * k22
                + s * high * h1 * k12
            )
            if obj_low < obj_high - 1e-12:
                a2 = low
            elif obj_low > obj_high + 1e-12:
                a2 = high
            else:
                return False
        if abs(a2 - a2_old) < 1e-12 * (a2 + a2_old + 1e-12):
            return False
        a1 = a1_old + s * (a2_old - a2)
        if a1 < snap:
            a1 = 0.0
        elif a1 > c - snap:
            a1 = c
        if a2 < snap:
            a2 = 0.0
        elif a2 > c - snap:
            a2 = c
        d1, d2 = a1 - a1_old, a2 - a2_old
        b1 = bias - e1 - y1 * d1 * k11 - y2 * d2 * k12
        b2 = bias - e2 - y1 * d1 * k12 - y2 * d2 * k22
        if 0.0 < a1 < c:
            new_bias = b1
        elif 0.0 < a2 < c:
            new_bias = b2
        else:
            new_bias = 0.5 * (b1 + b2)
        errors += y1 * d1 * k[i1] + y2 * d2 * k[i2] + (new_bias - bias)
        bias = new_bias
        alpha[i1], alpha[i2] = a1, a2
        return True

    def examine(i2: int) -> bool:
        r2 = errors[i2] * y[i2]
        if not ((r2 < -tol and alpha[i2] < c) or (r2 > tol and alpha[i2] > 0)):
            return False
        non_bound = np.flatnonzero((alpha > 0) & (alpha < c))
        if non_bound.size > 1:
            i1 = int(non_bound[np.argmax(np.abs(errors[non_bound] - errors[i2]))])
            if take_step(i1, i2):
                return True
        offset = int(rng.integers(n))
        for j in range(non_bound.size):
            if take_step(int(non_bound[(j + offset) % non_bound.size]), i2):
                return True
        offset = int(rng.integers(n))
        for j in range(n):
            if take_step((j + offset) % n, i2):
                return True
        return False

    examine_all = True
    n_changed = 1
    passes = 0
    while (n_changed > 0 or examine_all) and passes < max_passes:
        passes += 1
        n_changed = 0
        if examine_all:
            candidates = range(n)
        else:
            candidates = np.flatnonzero((alpha > 0) & (alpha < c))
        for i in candidates:
            n_changed += examine(int(i))
        if examine_all:
            examine_all = False
        elif n_changed == 0:
            examine_all = True

    kept = np.flatnonzero(alpha > 0)
    return KernelModel(
        support_vectors=x[kept].copy(),
        support_labels=y[kept].copy(),
        support_indices=kept,
        dual_coefficients=alpha[kept].copy(),
        bias=float(bias),
        length_scale=float(length_scale),
        penalty=c,
    )


def svm_decision(model: KernelModel, features: np.ndarray) -> np.ndarray:
    x = np.atleast_2d(np.asarray(features, dtype=float))
    if model.support_vectors.size == 0:
        return np.full(x.shape[0], model.bias)
    if x.shape[1] != model.support_vectors.shape[1]:
        raise ValueError(
            f"feature count {x.shape[1]} does not match model "
            f"({model.support_vectors.shape[1]})"
        )
    k = rbf_kernel(x, model.support_vectors, model.length_scale)
    return k @ (model.dual_coefficients * model.support_labels) + model.bias


def svm_predict(model: KernelModel, features: np.ndarray) -> np.ndarray:
    """Signs of the decision function; exact zeros map to +1."""
    decision = svm_decision(model, features)
    return np.where(decision >= 0.0, 1.0, -1.0)


def accuracy_rescaled(predicted: np.ndarray, target: np.ndarray) -> float:
    """Accuracy shifted so random guessing scores 0 and perfection scores 1."""
    predicted = np.asarray(predicted)
    target = np.asarray(target)
    if predicted.shape != target.shape or predicted.size < 1:
        raise ValueError("need two equal-length non-empty bit vectors")
    fraction = float(np.mean(predicted == target))
    return max(0.0, 2.0 * (fraction - 0.5))


def model_summary(model) -> dict:
    """JSON-friendly summary of a trained readout for experiment logs."""
    if isinstance(model, RidgeModel):
        return {
            "kind": "ridge",
            "weight_norm": float(np.linalg.norm(model.weights)),
            "bias": model.bias,
            "regularization": model.regularization,
        }
    if isinstance(model, KernelModel):
        return {
            "kind": "svm",
            "n_support_vectors": int(model.dual_coefficients.size),
            "bias": model.bias,
            "length_scale": model.length_scale,
            "penalty": model.penalty,
        }
    raise TypeError(f"unknown model type {type(model).__name__}")
