"""Scattering cascade on the non-decimated wavelet transform.

Starting from a series X, every tree node holds a non-negative "modulus
signal" of length T: the root is X itself, and the children of a node are
the absolute values of the detail vectors of a fresh J-level MODWT run on
it.  A node is addressed by its path (j_1, ..., j_d), the sequence of
detail levels taken from the root.  The output coefficient vector of a path
is the strided local average of its modulus signal:

    S_{p;i} = sum_{l<M} phi_l * node_p[(k i + l) mod T],  i = 0..ceil(T/k)-1.

The smooth vectors of the intermediate MODWTs are never cascaded, which is
what makes coefficient energy decay with depth.  Depth 0 averages the raw
series.  With max depth m and max level J the transform yields exactly
ceil(T/k) * sum_{d<=m} J^d numbers, every one of depth >= 1 non-negative.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    FilterTooLongError,
    InvalidFilterError,
    InvalidSizeError,
    NotFoundError,
)
from .filters import WaveletFilter, builtin_filter
from .transforms import modwt

Path = tuple[int, ...]


@dataclass(frozen=True)
class AveragingFilter:
    """Non-negative taps summing to one, applied with a stride."""

    phi: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float)
        if phi.ndim != 1 or phi.size == 0:
            raise InvalidSizeError("averaging filter must be a non-empty 1-d vector")
        if abs(float(phi.sum()) - 1.0) > 1e-12:
            raise InvalidFilterError("averaging taps must sum to 1 within 1e-12")
        phi = phi.copy()
        phi.flags.writeable = False
        object.__setattr__(self, "phi", phi)

    @property
    def M(self) -> int:
        return self.phi.size


def uniform_averaging_filter(M: int) -> AveragingFilter:
    """The boxcar filter phi_l = 1/M."""
    if M < 1:
        raise InvalidSizeError(f"averaging filter size must be >= 1, got {M}")
    return AveragingFilter(phi=np.full(M, 1.0 / M), kind="uniform")


@dataclass(frozen=True)
class ScatteringConfig:
    """Everything the cascade needs besides the series itself.

    ``max_level=None`` means "resolve to floor(log2 T) when applied"; the
    same level count is reused at every depth.  ``drop_paths`` only affects
    flattening, never the computation.
    """

    wavelet: WaveletFilter
    avg: AveragingFilter
    stride: int
    max_level: int | None = None
    max_depth: int = 2
    drop_paths: tuple[Path, ...] = ()

    def __post_init__(self):
        if not 1 <= self.stride <= self.avg.M:
            raise InvalidSizeError(
                f"stride must satisfy 1 <= k <= M, got k={self.stride}, M={self.avg.M}"
            )
        if self.max_depth < 0:
            raise InvalidSizeError(f"max depth must be >= 0, got {self.max_depth}")
        if self.max_level is not None and self.max_level < 1:
            raise InvalidSizeError(f"max level must be >= 1, got {self.max_level}")
        object.__setattr__(self, "drop_paths", tuple(tuple(p) for p in self.drop_paths))

    def resolve_level(self, T: int) -> int:
        return int(math.log2(T)) if self.max_level is None else self.max_level


@dataclass(frozen=True)
class ScatteringCoefficients:
    """Ordered map path -> averaged coefficient vector of length ceil(T/k)."""

    entries: dict[Path, np.ndarray]
    T: int
    config: ScatteringConfig

    def vector(self, p: Path) -> np.ndarray:
        p = tuple(p)
        if p not in self.entries:
            raise NotFoundError(f"path {p} not present")
        return self.entries[p]


def local_average(signal, phi: AveragingFilter, k: int) -> np.ndarray:
    """Strided circular moving average; output index i reads the window
    starting at k*i, so the result has ceil(T/k) entries."""
    signal = np.asarray(signal, dtype=float)
    T = signal.size
    if phi.M >= T:
        raise FilterTooLongError(f"averaging filter (M={phi.M}) must be shorter than the signal (T={T})")
    if not 1 <= k <= phi.M:
        raise InvalidSizeError(f"stride must satisfy 1 <= k <= M, got k={k}, M={phi.M}")
    starts = k * np.arange(-(-T // k))
    idx = (starts[:, None] + np.arange(phi.M)[None, :]) % T
    return signal[idx] @ phi.phi


def enumerate_paths(J: int, m: int) -> list[Path]:
    """All level paths of depth 0..m, depths ascending, lexicographic inside
    each depth.  No pruning: every depth-d combination of levels appears."""
    if J < 1:
        raise InvalidSizeError(f"max level must be >= 1, got {J}")
    if m < 0:
        raise InvalidSizeError(f"max depth must be >= 0, got {m}")
    paths: list[Path] = []
    for d in range(m + 1):
        paths.extend(itertools.product(range(1, J + 1), repeat=d))
    return paths


def modulus_tree(x, cfg: ScatteringConfig) -> dict[Path, np.ndarray]:
    """The cascade's intermediate signals: path -> modulus signal (length T).

    The root () maps to the raw series.  For every node of depth < m, a
    fresh MODWT is run on it and the absolute detail vectors become the
    children; the smooth vector is discarded.
    """
    x = np.asarray(x, dtype=float)
    J = cfg.resolve_level(x.size)
    tree: dict[Path, np.ndarray] = {(): x}
    frontier: list[Path] = [()]
    for _ in range(cfg.max_depth):
        next_frontier: list[Path] = []
        for p in frontier:
            c = modwt(tree[p], cfg.wavelet, J)
            for j, w in enumerate(c.detail, start=1):
                child = p + (j,)
                tree[child] = np.abs(w)
                next_frontier.append(child)
        frontier = next_frontier
    return tree


def modwst(x, cfg: ScatteringConfig) -> ScatteringCoefficients:
    """Run the cascade and average every node with the configured stride."""
    x = np.asarray(x, dtype=float)
    tree = modulus_tree(x, cfg)
    J = cfg.resolve_level(x.size)
    entries = {
        p: local_average(tree[p], cfg.avg, cfg.stride)
        for p in enumerate_paths(J, cfg.max_depth)
    }
    return ScatteringCoefficients(entries=entries, T=x.size, config=cfg)


def coefficient_count(T: int, k: int, J: int | str, m: int) -> int:
    """ceil(T/k) * sum_{d=0}^{m} J^d; pass J="auto" for floor(log2 T)."""
    if isinstance(J, str):
        if J != "auto":
            raise InvalidSizeError(f"level must be an integer or 'auto', got {J!r}")
        J = int(math.log2(T))
    return -(-T // k) * sum(J**d for d in range(m + 1))


def flatten(s: ScatteringCoefficients, drop_paths=None) -> np.ndarray:
    """Concatenate vectors in canonical path order, minus the dropped paths.

    ``drop_paths=None`` falls back to the config's drop list; dropping a
    path that was never computed is an error.
    """
    drops = s.config.drop_paths if drop_paths is None else tuple(tuple(p) for p in drop_paths)
    for p in drops:
        if p not in s.entries:
            raise NotFoundError(f"cannot drop path {p}: not present")
    dropset = set(drops)
    return np.concatenate([v for p, v in s.entries.items() if p not in dropset])


def path_label(p: Path) -> str:
    """Compact path name for feature columns: S_0, S_3, S_1.2, ..."""
    return "S_0" if not p else "S_" + ".".join(str(j) for j in p)


def flatten_labels(s: ScatteringCoefficients, drop_paths=None) -> list[str]:
    """Column names matching ``flatten``: one '<path>:<i>' label per value."""
    drops = s.config.drop_paths if drop_paths is None else tuple(tuple(p) for p in drop_paths)
    for p in drops:
        if p not in s.entries:
            raise NotFoundError(f"cannot drop path {p}: not present")
    dropset = set(drops)
    return [
        f"{path_label(p)}:{i}"
        for p, v in s.entries.items()
        if p not in dropset
        for i in range(v.size)
    ]


def path_energy(s: ScatteringCoefficients, p: Path) -> float:
    """Squared Euclidean norm of the coefficient vector at a path."""
    v = s.vector(p)
    return float(v @ v)


def config_to_json(cfg: ScatteringConfig) -> str:
    if cfg.avg.kind != "uniform":
        raise InvalidFilterError("only uniform averaging filters serialize to JSON")
    doc = {
        "wavelet": cfg.wavelet.name,
        "avg": {"kind": "uniform", "M": cfg.avg.M},
        "stride": cfg.stride,
        "max_level": "auto" if cfg.max_level is None else cfg.max_level,
        "max_depth": cfg.max_depth,
        "drop_paths": [list(p) for p in cfg.drop_paths],
    }
    return json.dumps(doc, indent=2)


def config_from_json(text: str) -> ScatteringConfig:
    doc = json.loads(text)
    avg = doc.get("avg", {"kind": "uniform", "M": 32})
    if avg.get("kind", "uniform") != "uniform":
        raise InvalidFilterError(f"unsupported averaging filter kind {avg.get('kind')!r}")
    level = doc.get("max_level", "auto")
    return ScatteringConfig(
        wavelet=builtin_filter(doc.get("wavelet", "haar")),
        avg=uniform_averaging_filter(int(avg["M"])),
        stride=int(doc.get("stride", 16)),
        max_level=None if level == "auto" else int(level),
        max_depth=int(doc.get("max_depth", 2)),
        drop_paths=tuple(tuple(int(j) for j in p) for p in doc.get("drop_paths", [])),
    )
