"""Lightweight classifiers and evaluation metrics.

Four trainers (one-vs-rest linear SVM via dual coordinate descent, LDA with
a ridge-stabilized pooled covariance, Gaussian naive Bayes, and a nearest
centroid baseline) plus a z-scoring preprocessor and a confusion-matrix
report with exact binomial confidence bounds and Cohen's kappa.

Everything is deterministic given inputs, hyperparameters and seed; class
order is always the sorted label set and ties resolve to the first class.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg
from scipy.stats import beta as beta_dist

from .errors import (
    EmptyFeatureSetError,
    InvalidInputError,
    InvalidLabelsError,
    NumericalError,
    StratificationError,
)
from .simulate import LabeledDataset

ZERO_VARIANCE_SD = 1e-12


@dataclass
class FeatureMatrix:
    """n x d feature rows with one label per row."""

    rows: np.ndarray
    labels: list[str]
    column_meta: list[str] | None = None

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=float)
        if self.rows.ndim != 2 or self.rows.shape[0] != len(self.labels):
            raise InvalidInputError(
                f"rows shape {self.rows.shape} inconsistent with {len(self.labels)} labels"
            )
        if self.column_meta is not None and len(self.column_meta) != self.rows.shape[1]:
            raise InvalidInputError("column_meta length does not match feature count")

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def d(self) -> int:
        return self.rows.shape[1]

    def subset(self, idx) -> "FeatureMatrix":
        idx = np.asarray(idx)
        return FeatureMatrix(self.rows[idx], [self.labels[i] for i in idx], self.column_meta)


def split_indices(labels, train_fraction: float, seed: int):
    """Per-class shuffled index split; deterministic given the seed."""
    if not 0.0 < train_fraction < 1.0:
        raise InvalidInputError(f"train fraction must be in (0, 1), got {train_fraction}")
    labels = list(labels)
    rng = np.random.default_rng(seed)
    classes = sorted(set(labels))
    train, test = [], []
    for c in classes:
        members = np.array([i for i, l in enumerate(labels) if l == c])
        if members.size < 2:
            raise StratificationError(f"class {c!r} has {members.size} member(s); need >= 2")
        members = members[rng.permutation(members.size)]
        n_train = int(round(train_fraction * members.size))
        n_train = min(max(n_train, 1), members.size - 1)
        train.extend(members[:n_train])
        test.extend(members[n_train:])
    return np.array(sorted(train)), np.array(sorted(test))


def stratified_split(data: LabeledDataset | FeatureMatrix, train_fraction: float, seed: int):
    """Split a dataset or feature matrix, preserving per-class proportions."""
    train_idx, test_idx = split_indices(data.labels, train_fraction, seed)
    return data.subset(train_idx), data.subset(test_idx)


@dataclass
class Preprocessor:
    """Column-wise affine transform learned on training rows only."""

    kind: str  # "none" | "zscore"
    drop_zero_variance: bool
    mask: np.ndarray  # kept-column boolean mask over the original d columns
    means: np.ndarray  # of kept columns
    sds: np.ndarray  # of kept columns


def fit_preprocessor(
    X: FeatureMatrix, kind: str = "zscore", drop_zero_variance: bool = True
) -> Preprocessor:
    if kind not in ("none", "zscore"):
        raise InvalidInputError(f"unknown preprocessor kind {kind!r}")
    rows = X.rows
    if not np.isfinite(rows).all():
        raise InvalidInputError("feature matrix contains non-finite values")
    means = rows.mean(axis=0)
    sds = rows.std(axis=0)
    mask = sds >= ZERO_VARIANCE_SD if drop_zero_variance else np.ones(X.d, dtype=bool)
    if not mask.any():
        raise EmptyFeatureSetError("every column was dropped as zero-variance")
    return Preprocessor(
        kind=kind,
        drop_zero_variance=drop_zero_variance,
        mask=mask,
        means=means[mask],
        sds=sds[mask],
    )


def apply_preprocessor(p: Preprocessor, X: FeatureMatrix) -> FeatureMatrix:
    rows = X.rows[:, p.mask]
    if p.kind == "zscore":
        rows = (rows - p.means) / p.sds
    meta = None
    if X.column_meta is not None:
        meta = [m for m, keep in zip(X.column_meta, p.mask) if keep]
    return FeatureMatrix(rows, list(X.labels), meta)


def _class_index(labels) -> tuple[list[str], np.ndarray]:
    classes = sorted(set(labels))
    lookup = {c: i for i, c in enumerate(classes)}
    return classes, np.array([lookup[l] for l in labels])


# ---------------------------------------------------------------------------
# Linear SVM, one-vs-rest, trained by dual coordinate descent on the
# L2-regularized hinge loss (box-constrained dual, 0 <= alpha_i <= C).
# ---------------------------------------------------------------------------


@dataclass
class LinearModel:
    classes: list[str]
    weights: np.ndarray  # (K, d)
    bias: np.ndarray  # (K,)
    hyperparams: dict = field(default_factory=dict)
    meta: list[dict] = field(default_factory=list)

    def decision_function(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.weights.T + self.bias

    def predict(self, X) -> list[str]:
        scores = self.decision_function(X)
        return [self.classes[i] for i in scores.argmax(axis=1)]


def _dual_cd(Xa, y, C, tol, max_iter, rng, debug):
    """One binary subproblem.  Returns (w, passes, residual, converged).

    Stops when the largest projected-gradient magnitude over a full pass is
    at most tol.  Bound-saturated coordinates are shrunk liblinear-style and
    re-checked before convergence is declared.
    """
    n, d = Xa.shape
    alpha = np.zeros(n)
    w = np.zeros(d)
    qii = np.einsum("ij,ij->i", Xa, Xa)
    active = np.arange(n)
    pg_hi, pg_lo = np.inf, -np.inf  # shrinking thresholds from the last pass
    prev_obj = 0.0  # dual objective at alpha = 0
    residual = np.inf
    for it in range(1, max_iter + 1):
        order = active[rng.permutation(active.size)]
        pg_max, pg_min = -np.inf, np.inf
        keep = []
        for i in order:
            G = y[i] * (Xa[i] @ w) - 1.0
            if alpha[i] == 0.0:
                if G > pg_hi:
                    continue  # shrink: stuck at the lower bound
                pg = min(G, 0.0)
            elif alpha[i] == C:
                if G < pg_lo:
                    continue
                pg = max(G, 0.0)
            else:
                pg = G
            keep.append(i)
            if pg > pg_max:
                pg_max = pg
            if pg < pg_min:
                pg_min = pg
            if pg != 0.0:
                old = alpha[i]
                new = min(max(old - G / qii[i], 0.0), C)
                if new != old:
                    alpha[i] = new
                    w += ((new - old) * y[i]) * Xa[i]
        if debug:
            obj = 0.5 * float(w @ w) - float(alpha.sum())
            assert obj <= prev_obj + 1e-9 * max(1.0, abs(prev_obj)), "dual objective increased"
            prev_obj = obj
        residual = max(abs(pg_max), abs(pg_min)) if np.isfinite(pg_max) else 0.0
        if residual <= tol:
            if active.size == n:
                return w, it, residual, True
            # converged on the shrunk set: re-admit everything and re-check
            active = np.arange(n)
            pg_hi, pg_lo = np.inf, -np.inf
            continue
        active = np.array(keep, dtype=int)
        pg_hi = pg_max if pg_max > 0 else np.inf
        pg_lo = pg_min if pg_min < 0 else -np.inf
    return w, max_iter, residual, False


def train_linear_svm(
    X,
    y,
    C: float = 1.0,
    tol: float = 1e-4,
    max_iter: int = 10000,
    seed: int = 0,
    debug: bool = False,
) -> LinearModel:
    """One-vs-rest linear SVM; each subproblem is solved in the dual.

    Non-convergence within max_iter passes is not an error: the model is
    returned with ``converged=False`` recorded in its per-class metadata.
    """
    X = np.asarray(X, dtype=float)
    classes, y_idx = _class_index(y)
    if len(classes) < 2:
        raise InvalidLabelsError(f"need >= 2 classes, got {classes}")
    Xa = np.ascontiguousarray(np.hstack([X, np.ones((X.shape[0], 1))]))
    weights = np.zeros((len(classes), X.shape[1]))
    bias = np.zeros(len(classes))
    meta = []
    for k, c in enumerate(classes):
        yk = np.where(y_idx == k, 1.0, -1.0)
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(k,)))
        w, n_iter, residual, converged = _dual_cd(Xa, yk, C, tol, max_iter, rng, debug)
        weights[k] = w[:-1]
        bias[k] = w[-1]
        meta.append(
            {"class": c, "n_iter": n_iter, "residual": float(residual), "converged": converged}
        )
    return LinearModel(
        classes=classes,
        weights=weights,
        bias=bias,
        hyperparams={"C": C, "tol": tol, "max_iter": max_iter, "seed": seed},
        meta=meta,
    )


# ---------------------------------------------------------------------------
# Linear discriminant analysis with pooled, ridge-stabilized covariance.
# ---------------------------------------------------------------------------


@dataclass
class LdaModel:
    classes: list[str]
    coef: np.ndarray  # (K, d): rows are Sigma^{-1} mu_k
    intercept: np.ndarray  # (K,)
    means: np.ndarray  # (K, d)
    priors: np.ndarray  # (K,)
    ridge: float

    def decision_function(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.coef.T + self.intercept

    def predict(self, X) -> list[str]:
        scores = self.decision_function(X)
        return [self.classes[i] for i in scores.argmax(axis=1)]


def train_lda(X, y, ridge_scale: float = 1e-6) -> LdaModel:
    """Gaussian discriminant with a shared covariance estimate.

    The pooled within-class covariance gets ridge_scale * (trace/d) added to
    its diagonal before factorization, which keeps the Cholesky solvable
    when d exceeds the sample count.
    """
    X = np.asarray(X, dtype=float)
    classes, y_idx = _class_index(y)
    n, d = X.shape
    K = len(classes)
    if K < 2:
        raise InvalidLabelsError(f"need >= 2 classes, got {classes}")
    if n <= K:
        raise InvalidLabelsError(f"need more samples ({n}) than classes ({K})")
    counts = np.bincount(y_idx, minlength=K).astype(float)
    priors = counts / n
    means = np.zeros((K, d))
    for k in range(K):
        means[k] = X[y_idx == k].mean(axis=0)
    centered = X - means[y_idx]
    cov = (centered.T @ centered) / (n - K)
    ridge = ridge_scale * float(np.trace(cov)) / d
    cov[np.diag_indices_from(cov)] += ridge
    try:
        factor = linalg.cho_factor(cov, lower=True, overwrite_a=True, check_finite=False)
        solved = linalg.cho_solve(factor, means.T, check_finite=False)  # (d, K)
    except linalg.LinAlgError as exc:
        raise NumericalError(f"pooled covariance not positive definite after ridge: {exc}") from exc
    coef = solved.T
    intercept = -0.5 * np.einsum("kd,kd->k", means, coef) + np.log(priors)
    return LdaModel(
        classes=classes,
        coef=coef,
        intercept=intercept,
        means=means,
        priors=priors,
        ridge=ridge,
    )


# ---------------------------------------------------------------------------
# Gaussian naive Bayes and nearest centroid.
# ---------------------------------------------------------------------------


@dataclass
class GnbModel:
    classes: list[str]
    means: np.ndarray  # (K, d)
    variances: np.ndarray  # (K, d), floored
    priors: np.ndarray  # (K,)

    def log_joint(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.empty((X.shape[0], len(self.classes)))
        for k in range(len(self.classes)):
            diff = X - self.means[k]
            out[:, k] = (
                -0.5 * ((diff * diff) / self.variances[k]).sum(axis=1)
                - 0.5 * np.log(2.0 * np.pi * self.variances[k]).sum()
                + np.log(self.priors[k])
            )
        return out

    def predict(self, X) -> list[str]:
        return [self.classes[i] for i in self.log_joint(X).argmax(axis=1)]


def train_gnb(X, y, var_floor: float = 1e-9) -> GnbModel:
    """Per-class, per-feature Gaussian likelihoods scored in the log domain."""
    X = np.asarray(X, dtype=float)
    classes, y_idx = _class_index(y)
    if len(classes) < 2:
        raise InvalidLabelsError(f"need >= 2 classes, got {classes}")
    K, d = len(classes), X.shape[1]
    means = np.zeros((K, d))
    variances = np.zeros((K, d))
    counts = np.bincount(y_idx, minlength=K).astype(float)
    for k in range(K):
        block = X[y_idx == k]
        means[k] = block.mean(axis=0)
        variances[k] = np.maximum(block.var(axis=0), var_floor)
    return GnbModel(classes=classes, means=means, variances=variances, priors=counts / X.shape[0])


@dataclass
class CentroidModel:
    classes: list[str]
    centroids: np.ndarray  # (K, d)

    def predict(self, X) -> list[str]:
        X = np.asarray(X, dtype=float)
        d2 = (
            (X * X).sum(axis=1)[:, None]
            - 2.0 * X @ self.centroids.T
            + (self.centroids * self.centroids).sum(axis=1)[None, :]
        )
        return [self.classes[i] for i in d2.argmin(axis=1)]


def train_centroid(X, y) -> CentroidModel:
    """Nearest Euclidean class mean; ties go to the first (sorted) class."""
    X = np.asarray(X, dtype=float)
    classes, y_idx = _class_index(y)
    centroids = np.zeros((len(classes), X.shape[1]))
    for k in range(len(classes)):
        centroids[k] = X[y_idx == k].mean(axis=0)
    return CentroidModel(classes=classes, centroids=centroids)


def predict(model, X) -> list[str]:
    return model.predict(X)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


@dataclass
class ConfusionMatrix:
    """Counts with rows = predicted class, columns = reference class."""

    labels: list[str]
    counts: np.ndarray  # (K, K) ints

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass
class EvalReport:
    accuracy: float
    ci_low: float
    ci_high: float
    kappa: float
    confusion: ConfusionMatrix

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "kappa": self.kappa,
            "labels": self.confusion.labels,
            "confusion": self.confusion.counts.tolist(),
        }


def clopper_pearson(successes: int, trials: int, confidence: float = 0.95):
    """Exact binomial confidence bounds for a proportion."""
    if trials < 1 or not 0 <= successes <= trials:
        raise InvalidInputError(f"bad counts: {successes}/{trials}")
    alpha = 1.0 - confidence
    low = 0.0 if successes == 0 else float(beta_dist.ppf(alpha / 2, successes, trials - successes + 1))
    high = 1.0 if successes == trials else float(beta_dist.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return low, high


def confusion_matrix(y_true, y_pred) -> ConfusionMatrix:
    y_true, y_pred = list(y_true), list(y_pred)
    if len(y_true) != len(y_pred):
        raise InvalidInputError(f"length mismatch: {len(y_true)} true vs {len(y_pred)} predicted")
    if not y_true:
        raise InvalidInputError("nothing to evaluate")
    labels = sorted(set(y_true) | set(y_pred))
    lookup = {c: i for i, c in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=int)
    for t, p in zip(y_true, y_pred):
        counts[lookup[p], lookup[t]] += 1
    return ConfusionMatrix(labels=labels, counts=counts)


def evaluate_confusion(cm: ConfusionMatrix) -> EvalReport:
    counts = cm.counts
    N = counts.sum()
    correct = int(np.trace(counts))
    accuracy = correct / N
    ci_low, ci_high = clopper_pearson(correct, int(N))
    p_o = accuracy
    p_e = float((counts.sum(axis=1) * counts.sum(axis=0)).sum()) / float(N) ** 2
    if p_e >= 1.0:
        kappa = 1.0 if p_o >= 1.0 else 0.0
    else:
        kappa = (p_o - p_e) / (1.0 - p_e)
    return EvalReport(accuracy=accuracy, ci_low=ci_low, ci_high=ci_high, kappa=kappa, confusion=cm)


def evaluate(y_true, y_pred) -> EvalReport:
    """Accuracy with exact 95% binomial bounds, Cohen's kappa, confusion."""
    return evaluate_confusion(confusion_matrix(y_true, y_pred))


def render_report_table(rows) -> str:
    """Aligned text table from (name, EvalReport) pairs."""
    header = f"{'Classifier':<24}{'Accuracy (%)':>14}{'LL (%)':>10}{'UL (%)':>10}{'Kappa':>10}"
    lines = [header, "-" * len(header)]
    for name, rep in rows:
        lines.append(
            f"{name:<24}{100 * rep.accuracy:>14.1f}{100 * rep.ci_low:>10.2f}"
            f"{100 * rep.ci_high:>10.1f}{rep.kappa:>10.4f}"
        )
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# JSON-friendly (de)serialization of models and preprocessors.
# ---------------------------------------------------------------------------

_MODEL_KINDS = {
    "linear_svm": LinearModel,
    "lda": LdaModel,
    "gnb": GnbModel,
    "centroid": CentroidModel,
}


def model_to_dict(model) -> dict:
    for kind, cls in _MODEL_KINDS.items():
        if isinstance(model, cls):
            break
    else:
        raise InvalidInputError(f"cannot serialize {type(model).__name__}")
    doc = {"kind": kind}
    for name, value in vars(model).items():
        doc[name] = value.tolist() if isinstance(value, np.ndarray) else value
    return doc


def model_from_dict(doc: dict):
    kind = doc.get("kind")
    if kind not in _MODEL_KINDS:
        raise InvalidInputError(f"unknown model kind {kind!r}")
    cls = _MODEL_KINDS[kind]
    kwargs = {k: v for k, v in doc.items() if k != "kind"}
    for name, value in kwargs.items():
        if isinstance(value, list) and name not in ("classes", "meta"):
            kwargs[name] = np.asarray(value)
    return cls(**kwargs)


def preprocessor_to_dict(p: Preprocessor) -> dict:
    return {
        "kind": p.kind,
        "drop_zero_variance": p.drop_zero_variance,
        "mask": p.mask.tolist(),
        "means": p.means.tolist(),
        "sds": p.sds.tolist(),
    }


def preprocessor_from_dict(doc: dict) -> Preprocessor:
    return Preprocessor(
        kind=doc["kind"],
        drop_zero_variance=doc["drop_zero_variance"],
        mask=np.asarray(doc["mask"], dtype=bool),
        means=np.asarray(doc["means"], dtype=float),
        sds=np.asarray(doc["sds"], dtype=float),
    )
