"""Pyramid wavelet transforms with circular boundary handling.

Two decompositions of a series X of length T:

* ``dwt`` -- the orthonormal transform for T = 2^Jmax, computed by the
  decimating pyramid.  Level j holds T/2^j detail coefficients; the final
  smooth vector brings the total to exactly T.
* ``modwt`` -- the non-decimated variant, defined for any T, where every
  level keeps T coefficients and the per-stage filters are the base taps
  divided by sqrt(2).  The transform is shift-equivariant and preserves
  energy (Percival & Walden, 2000).

All index arithmetic is modulo the current vector length, i.e. the series
is treated as periodic.  ``dwt_matrix`` assembles the explicit orthonormal
matrix from equivalent filters; it exists as an independent cross-check of
the pyramid and as the only inversion route (its transpose).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidLengthError, InvalidLevelError
from .filters import WaveletFilter, modwt_rescale


@dataclass(frozen=True)
class DwtCoefficients:
    detail: list[np.ndarray]  # W_1 .. W_J, W_j of length T / 2^j
    smooth: np.ndarray  # V_J, length T / 2^J
    J: int
    filter_name: str


@dataclass(frozen=True)
class ModwtCoefficients:
    detail: list[np.ndarray]  # each of length T
    smooth: np.ndarray  # length T
    J: int
    filter_name: str


def _as_series(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise InvalidLengthError(f"expected a 1-d series of length >= 2, got shape {x.shape}")
    if not np.isfinite(x).all():
        raise InvalidLengthError("series contains non-finite values")
    return x


def dwt(x, f: WaveletFilter, J: int) -> DwtCoefficients:
    """Decimating pyramid: at stage j, filter-and-halve the previous smooth.

    W_{j,t} = sum_l h_l V_{j-1, (2t+1-l) mod T_{j-1}} and likewise for V
    with the scaling taps, starting from V_0 = X.  Requires T to be a power
    of two and 1 <= J <= log2(T).
    """
    x = _as_series(x)
    T = x.size
    if T & (T - 1) != 0:
        raise InvalidLengthError(f"dwt needs a power-of-two length, got T={T}")
    if not 1 <= J <= int(math.log2(T)):
        raise InvalidLevelError(f"level J={J} out of range for T={T}")
    lags = np.arange(f.L)
    v = x
    detail = []
    for _ in range(J):
        half = np.arange(v.size // 2)
        idx = (2 * half[:, None] + 1 - lags[None, :]) % v.size
        block = v[idx]
        detail.append(block @ f.h)
        v = block @ f.g
    return DwtCoefficients(detail=detail, smooth=v, J=J, filter_name=f.name)


def _upsample(taps: np.ndarray, step: int) -> np.ndarray:
    out = np.zeros((taps.size - 1) * step + 1)
    out[::step] = taps
    return out


def dwt_matrix(T: int, f: WaveletFilter, J: int) -> np.ndarray:
    """Explicit T x T orthonormal matrix with rows ordered (W_1..W_J, V_J).

    Built directly from the level-j equivalent filters (cascades of
    upsampled taps), not from the pyramid recursion, so it can serve as an
    independent oracle.  Row t of the level-j block places tap l at column
    (2^j (t+1) - 1 - l) mod T.
    """
    if T & (T - 1) != 0 or T < 2:
        raise InvalidLengthError(f"dwt_matrix needs a power-of-two length, got T={T}")
    if T > 1024:
        raise InvalidLengthError(f"matrix oracle limited to T <= 1024, got T={T}")
    if not 1 <= J <= int(math.log2(T)):
        raise InvalidLevelError(f"level J={J} out of range for T={T}")

    h_equiv = f.h
    g_equiv = f.g
    rows = []

    def block(taps: np.ndarray, j: int) -> np.ndarray:
        out = np.zeros((T // 2**j, T))
        for t in range(out.shape[0]):
            for l, tap in enumerate(taps):
                out[t, (2**j * (t + 1) - 1 - l) % T] += tap
        return out

    for j in range(1, J + 1):
        if j > 1:
            step = 2 ** (j - 1)
            h_equiv = np.convolve(_upsample(f.h, step), g_equiv)
            g_equiv = np.convolve(_upsample(f.g, step), g_equiv)
        rows.append(block(h_equiv, j))
    rows.append(block(g_equiv, J))
    return np.vstack(rows)


def modwt(x, f: WaveletFilter, J: int) -> ModwtCoefficients:
    """Non-decimated pyramid for any series length.

    W~_{j,t} = sum_l h~_l V~_{j-1, (t - 2^(j-1) l) mod T} with V~_0 = X and
    per-stage taps h~ = h / sqrt(2).  Levels beyond floor(log2 T) stay
    well-defined under circular filtering but are flagged with a warning.
    """
    x = _as_series(x)
    T = x.size
    if J < 1:
        raise InvalidLevelError(f"level J={J} must be >= 1")
    if J > int(math.log2(T)):
        warnings.warn(
            f"J={J} exceeds floor(log2(T))={int(math.log2(T))} for T={T}; "
            "coefficients remain defined but are heavily wrapped",
            stacklevel=2,
        )
    ft = modwt_rescale(f)
    lags = np.arange(f.L)
    t = np.arange(T)
    v = x
    detail = []
    for j in range(1, J + 1):
        idx = (t[:, None] - (1 << (j - 1)) * lags[None, :]) % T
        block = v[idx]
        detail.append(block @ ft.h)
        v = block @ ft.g
    return ModwtCoefficients(detail=detail, smooth=v, J=J, filter_name=f.name)


def energy_decomposition(c: DwtCoefficients | ModwtCoefficients) -> np.ndarray:
    """Per-level energies (||W_1||^2, ..., ||W_J||^2, ||V_J||^2).

    Both transforms preserve energy, so the entries sum to ||X||^2.
    """
    return np.array([float(w @ w) for w in c.detail] + [float(c.smooth @ c.smooth)])
