"""Seeded generators for the fifteen benchmark stationary processes.

Six ARMA-family classes driven by Gaussian innovations plus nine white-noise
classes.  The skewed/discrete families (exponential, Bernoulli, Poisson) are
shifted by their means so every class is centered.  Sub-streams are derived
with ``SeedSequence`` spawn keys, so a dataset is reproducible bit-for-bit
regardless of generation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .errors import InvalidLengthError, NotFoundError

# Samples discarded before recording an AR/ARMA trajectory started from a
# zero state; generous for the mixing times of these parameter choices.
BURN_IN = 1024


@dataclass(frozen=True)
class ProcessSpec:
    """One benchmark class: optional ARMA structure over a white-noise family.

    ``noise`` is (family, *params); for pure white-noise classes it is the
    output distribution itself, otherwise the innovation distribution.
    """

    class_id: str
    ar: tuple[float, ...] = ()
    ma: tuple[float, ...] = ()
    noise: tuple = ("normal", 0.5)


PROCESSES: dict[str, ProcessSpec] = {
    "AR1a": ProcessSpec("AR1a", ar=(0.8,)),
    "AR1b": ProcessSpec("AR1b", ar=(0.4,)),
    "AR1c": ProcessSpec("AR1c", ar=(-0.4,)),
    "AR2": ProcessSpec("AR2", ar=(0.8, -0.9)),
    "ARMA1a": ProcessSpec("ARMA1a", ar=(0.8,), ma=(0.8,)),
    "ARMA1b": ProcessSpec("ARMA1b", ar=(0.8,), ma=(-0.8,)),
    "N1": ProcessSpec("N1", noise=("normal", 0.5)),
    "N2": ProcessSpec("N2", noise=("normal", 2.5)),
    "T1": ProcessSpec("T1", noise=("student_t", 1.0)),
    "T3": ProcessSpec("T3", noise=("student_t", 3.0)),
    "C": ProcessSpec("C", noise=("cauchy", 0.5)),
    "U": ProcessSpec("U", noise=("uniform", -0.75, 0.75)),
    "E": ProcessSpec("E", noise=("exponential", 2.0)),
    "B": ProcessSpec("B", noise=("bernoulli", 0.5)),
    "P": ProcessSpec("P", noise=("poisson", 0.25)),
}

CLASS_IDS = tuple(PROCESSES)


@dataclass(frozen=True)
class LabeledDataset:
    """Equal-length series with one class label per row."""

    series: np.ndarray  # (n, T)
    labels: list[str]
    seed: int | None = None

    def __post_init__(self):
        if self.series.ndim != 2 or self.series.shape[0] != len(self.labels):
            raise InvalidLengthError(
                f"series shape {self.series.shape} inconsistent with {len(self.labels)} labels"
            )

    @property
    def n(self) -> int:
        return self.series.shape[0]

    @property
    def T(self) -> int:
        return self.series.shape[1]

    def subset(self, idx) -> "LabeledDataset":
        idx = np.asarray(idx)
        return LabeledDataset(
            series=self.series[idx], labels=[self.labels[i] for i in idx], seed=self.seed
        )


def _draw(noise: tuple, rng: np.random.Generator, n: int) -> np.ndarray:
    family, *params = noise
    if family == "normal":
        (sd,) = params
        return rng.normal(0.0, sd, n)
    if family == "student_t":
        (df,) = params
        return rng.standard_t(df, n)
    if family == "cauchy":
        (scale,) = params
        return scale * rng.standard_cauchy(n)
    if family == "uniform":
        lo, hi = params
        return rng.uniform(lo, hi, n)
    if family == "exponential":
        (rate,) = params
        return rng.exponential(1.0 / rate, n) - 1.0 / rate
    if family == "bernoulli":
        (p,) = params
        return rng.binomial(1, p, n).astype(float) - p
    if family == "poisson":
        (lam,) = params
        return rng.poisson(lam, n).astype(float) - lam
    raise NotFoundError(f"unknown noise family {family!r}")


def get_spec(class_id: str) -> ProcessSpec:
    try:
        return PROCESSES[class_id]
    except KeyError:
        raise NotFoundError(
            f"unknown process class {class_id!r}; available: {', '.join(CLASS_IDS)}"
        ) from None


def simulate(
    spec: ProcessSpec | str, T: int, seed: int | np.random.SeedSequence
) -> np.ndarray:
    """Generate one series of length T, fully determined by (spec, T, seed).

    ARMA classes run the recursion X_t = sum phi_i X_{t-i} + sum theta_j
    eps_{t-j} + eps_t from a zero state and discard a burn-in prefix; white
    noise classes are i.i.d. draws.
    """
    if isinstance(spec, str):
        spec = get_spec(spec)
    if T < 1:
        raise InvalidLengthError(f"series length must be >= 1, got {T}")
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    rng = np.random.default_rng(seed)
    if spec.ar or spec.ma:
        eps = _draw(spec.noise, rng, BURN_IN + T)
        num = np.r_[1.0, spec.ma]
        den = np.r_[1.0, -np.asarray(spec.ar)]
        return lfilter(num, den, eps)[BURN_IN:]
    return _draw(spec.noise, rng, T)


def benchmark_suite(n_per_class: int, T: int, seed: int) -> LabeledDataset:
    """Balanced dataset: n_per_class series of length T for every class.

    Each series gets its own RNG sub-stream keyed by (class index, series
    index), so any subset can be regenerated independently.
    """
    if n_per_class < 1:
        raise InvalidLengthError(f"n_per_class must be >= 1, got {n_per_class}")
    rows = np.empty((len(CLASS_IDS) * n_per_class, T))
    labels: list[str] = []
    r = 0
    for ci, class_id in enumerate(CLASS_IDS):
        spec = PROCESSES[class_id]
        for i in range(n_per_class):
            sub = np.random.SeedSequence(entropy=seed, spawn_key=(ci, i))
            rows[r] = simulate(spec, T, sub)
            labels.append(class_id)
            r += 1
    return LabeledDataset(series=rows, labels=labels, seed=seed)
