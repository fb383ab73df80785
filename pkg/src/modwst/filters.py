"""Discrete wavelet filter banks.

A usable wavelet filter {h_l} of even length L must sum to zero, have unit
energy, and be orthogonal to all of its even shifts.  The companion scaling
filter {g_l} is never stored independently: it is always derived from h
through the quadrature mirror relationship g_l = (-1)^(l+1) h_{L-1-l}.

Built-in filters: the Haar pair plus the extremal-phase Daubechies filters
of length 4 and 6 and the least-asymmetric filter of length 8.  Tap values
are exact double roundings of the algebraic coefficients (d4/d6 from their
closed forms, la8 from a 60-digit spectral factorization).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidFilterError, NotFoundError

DEFAULT_TOL = 1e-10

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class WaveletFilter:
    """A wavelet/scaling filter pair of even length L."""

    name: str
    h: np.ndarray  # wavelet (high-pass) taps
    g: np.ndarray  # scaling (low-pass) taps, always derived from h

    @property
    def L(self) -> int:
        return self.h.size


@dataclass(frozen=True)
class ModwtFilter:
    """Per-stage filters for the non-decimated pyramid: base taps / sqrt(2).

    Applying the rescaled pair once per stage accumulates the 2^(-j/2)
    factor carried by the level-j equivalent filter.
    """

    h: np.ndarray
    g: np.ndarray
    base: WaveletFilter


@dataclass(frozen=True)
class ValidationReport:
    sum_zero_residual: float
    unit_energy_residual: float
    max_orthogonality_residual: float
    passed: bool


# Scaling (low-pass) taps of the built-ins; the wavelet taps are derived at
# import time so the quadrature mirror identity holds bit-for-bit.
_BUILTIN_SCALING: dict[str, tuple[float, ...]] = {
    "haar": (1.0 / _SQRT2, 1.0 / _SQRT2),
    # (1 +- sqrt(3)) family
    "d4": (
        0.48296291314453416,
        0.8365163037378079,
        0.2241438680420134,
        -0.12940952255126037,
    ),
    # (1 + sqrt(10) +- sqrt(5 + 2 sqrt(10))) family
    "d6": (
        0.33267055295008263,
        0.8068915093110925,
        0.45987750211849154,
        -0.13501102001025458,
        -0.08544127388202666,
        0.03522629188570953,
    ),
    "la8": (
        -0.07576571478950221,
        -0.029635527646002493,
        0.497618667632775,
        0.8037387518051321,
        0.29785779560530606,
        -0.09921954357663353,
        -0.012603967262031304,
        0.032223100604051466,
    ),
}

BUILTIN_NAMES = tuple(_BUILTIN_SCALING)


def scaling_from_wavelet(h: np.ndarray) -> np.ndarray:
    """Derive the scaling taps: g_l = (-1)^(l+1) h_{L-1-l}."""
    h = np.asarray(h, dtype=float)
    if h.size % 2 != 0 or h.size == 0:
        raise InvalidFilterError(f"filter length must be even and positive, got {h.size}")
    signs = np.where(np.arange(h.size) % 2 == 0, -1.0, 1.0)
    return signs * h[::-1]


def wavelet_from_scaling(g: np.ndarray) -> np.ndarray:
    """Derive the wavelet taps: h_l = (-1)^l g_{L-1-l}."""
    g = np.asarray(g, dtype=float)
    if g.size % 2 != 0 or g.size == 0:
        raise InvalidFilterError(f"filter length must be even and positive, got {g.size}")
    signs = np.where(np.arange(g.size) % 2 == 0, 1.0, -1.0)
    return signs * g[::-1]


def validate_filter(h: np.ndarray, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check the three wavelet filter conditions and report the residuals.

    Residuals are |sum h|, |sum h^2 - 1| and max_{n != 0} |sum h_l h_{l+2n}|
    over every even shift with overlap.  The report never raises; ``passed``
    is true iff all residuals are within ``tol``.
    """
    if tol <= 0:
        raise InvalidFilterError(f"tolerance must be positive, got {tol}")
    h = np.asarray(h, dtype=float)
    sum_zero = abs(float(h.sum()))
    unit_energy = abs(float(h @ h) - 1.0)
    max_orth = 0.0
    for n in range(1, (h.size + 1) // 2):
        max_orth = max(max_orth, abs(float(h[: h.size - 2 * n] @ h[2 * n :])))
    passed = sum_zero <= tol and unit_energy <= tol and max_orth <= tol
    return ValidationReport(sum_zero, unit_energy, max_orth, passed)


def make_filter(name: str, h: np.ndarray) -> WaveletFilter:
    """Build a filter pair from wavelet taps, deriving g."""
    h = np.asarray(h, dtype=float)
    if h.size % 2 != 0 or h.size == 0:
        raise InvalidFilterError(f"filter length must be even and positive, got {h.size}")
    if h[0] == 0.0 or h[-1] == 0.0:
        raise InvalidFilterError("first and last taps must be nonzero")
    h = h.copy()
    h.flags.writeable = False
    g = scaling_from_wavelet(h)
    g.flags.writeable = False
    return WaveletFilter(name=name, h=h, g=g)


def builtin_filter(name: str) -> WaveletFilter:
    """Return a built-in filter by name (haar, d4, d6, la8)."""
    key = name.lower()
    if key not in _BUILTIN_SCALING:
        raise NotFoundError(f"unknown filter {name!r}; available: {', '.join(BUILTIN_NAMES)}")
    return make_filter(key, wavelet_from_scaling(np.array(_BUILTIN_SCALING[key])))


def modwt_rescale(f: WaveletFilter) -> ModwtFilter:
    """Divide both tap vectors by sqrt(2) for use in the non-decimated pyramid."""
    h = f.h / _SQRT2
    g = f.g / _SQRT2
    h.flags.writeable = False
    g.flags.writeable = False
    return ModwtFilter(h=h, g=g, base=f)


def load_filter(path) -> WaveletFilter:
    """Load a filter from a JSON document ``{"name": ..., "h": [taps]}``.

    The scaling taps are always derived, never read from the file.
    """
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "name" not in doc or "h" not in doc:
        raise InvalidFilterError(f"{path}: expected a JSON object with 'name' and 'h'")
    return make_filter(str(doc["name"]), np.asarray(doc["h"], dtype=float))
