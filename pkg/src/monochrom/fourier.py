"""Fourier analysis on Z/lZ.

Convention: the forward transform carries the 1/l factor,

    hat f(xi) = (1/l) * sum_t f(t) e(-xi t / l),     f(u) = sum_xi hat f(xi) e(xi u / l),

with e(x) = exp(2 pi i x). The transform is the direct O(l^2) sum; the phase
index xi*t is reduced mod l in integer arithmetic before the exponential.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class Spectrum:
    modulus: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if coeffs.shape != (self.modulus,):
            raise ValueError(f"expected {self.modulus} coefficients, got shape {coeffs.shape}")
        object.__setattr__(self, "coeffs", coeffs)

    def __getitem__(self, xi: int) -> complex:
        return complex(self.coeffs[xi % self.modulus])

    def __len__(self):
        return self.modulus


_BLOCK = 512


def _transform(v: np.ndarray, sign: int) -> np.ndarray:
    """sum_t v[t] e(sign * xi t / l) for every xi, in row blocks to bound memory."""
    ell = len(v)
    idx = np.arange(ell, dtype=np.int64)
    out = np.empty(ell, dtype=np.complex128)
    for start in range(0, ell, _BLOCK):
        rows = idx[start:start + _BLOCK]
        phase = np.outer(rows, idx) % ell
        out[start:start + _BLOCK] = np.exp(sign * 2j * np.pi * phase / ell) @ v
    return out


def dft(values: Sequence[float], ell: int | None = None) -> Spectrum:
    v = np.asarray(values, dtype=np.complex128)
    if ell is None:
        ell = len(v)
    if ell < 2 or v.shape != (ell,):
        raise ValueError(f"need {ell} >= 2 values, got shape {v.shape}")
    coeffs = _transform(v, -1) / ell
    # frequency 0 is the plain mean; avoid the rounding of the matrix product
    coeffs[0] = v.mean()
    return Spectrum(ell, coeffs)


def idft(spectrum: Spectrum) -> np.ndarray:
    """Inverse transform (no 1/l factor). Returns complex values."""
    return _transform(spectrum.coeffs, +1)


def is_hermitian(spectrum: Spectrum, tol: float = 1e-12) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    c = spectrum.coeffs
    mirrored = c[(-np.arange(spectrum.modulus)) % spectrum.modulus]
    return bool(np.all(np.abs(c - np.conj(mirrored)) <= tol))
