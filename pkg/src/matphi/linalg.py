"""Dense Hermitian linear algebra at desk scale.

Matrices are plain complex numpy arrays treated as immutable; helpers
validate hermiticity where it matters and return fresh arrays.
Logarithms are natural throughout, eigenvalues come back ascending, and
PSD-intended inputs get their tiny negative eigenvalues (within the
spectral tolerance) clamped to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidExponent,
    NotHermitian,
    SpectrumOutOfDomain,
)


def hermiticity_tolerance(a: np.ndarray) -> float:
    """Scale-aware tolerance below which a matrix counts as Hermitian."""
    sup = float(np.max(np.abs(a))) if a.size else 0.0
    return 1e-10 * (1.0 + sup)


def spectral_tolerance(d: int) -> float:
    return 1e-9 * d


def hermitian_part(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    return 0.5 * (a + a.conj().T)


def require_hermitian(a, tol: float | None = None) -> np.ndarray:
    """Validate and return the (exactly) hermitized copy of ``a``."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {a.shape}")
    if tol is None:
        tol = hermiticity_tolerance(a)
    dev = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if dev > tol:
        raise NotHermitian(f"hermiticity deviation {dev:.3e} exceeds tolerance {tol:.3e}")
    return hermitian_part(a)


def spectral_decompose(a, tol: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvector unitary with A = U diag(w) U†."""
    a = require_hermitian(a, tol)
    w, u = np.linalg.eigh(a)
    return w, u


@dataclass(frozen=True)
class SpectralInterval:
    """Closed interval of admissible eigenvalues; endpoints may be infinite."""

    lo: float = -np.inf
    hi: float = np.inf

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def admit(self, w: np.ndarray) -> np.ndarray:
        """Check eigenvalues against the interval and return a clamped copy.

        Eigenvalues within the spectral tolerance of the endpoints are
        clamped onto them (this implements the PSD convention at lo == 0);
        anything further outside raises SpectrumOutOfDomain.
        """
        w = np.asarray(w, dtype=float)
        tol = spectral_tolerance(w.size)
        bad = (w < self.lo - tol) | (w > self.hi + tol)
        if np.any(bad):
            raise SpectrumOutOfDomain(
                f"eigenvalues {w[bad]} outside [{self.lo}, {self.hi}]",
                offending=w[bad],
            )
        return np.clip(w, self.lo, self.hi)


REALS = SpectralInterval()
NONNEGATIVE = SpectralInterval(0.0, np.inf)
UNIT_INTERVAL = SpectralInterval(0.0, 1.0)


def apply_standard_function(
    fn: Callable[[np.ndarray], np.ndarray],
    a,
    domain: SpectralInterval | None = None,
) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum."""
    w, u = spectral_decompose(a)
    if domain is not None:
        w = domain.admit(w)
    fw = np.asarray(fn(w), dtype=float)
    return hermitian_part((u * fw) @ u.conj().T)


def normalized_trace(a) -> float:
    """(1/d) Tr a, imaginary round-off discarded."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return float(np.trace(a).real) / a.shape[0]


def schatten_norm(a, p: float, normalized: bool = False) -> float:
    """Schatten p-norm of a Hermitian matrix; the normalized variant
    averages instead of summing before the 1/p power."""
    if p < 1:
        raise InvalidExponent(f"Schatten exponent must be >= 1, got {p}")
    w = np.abs(np.linalg.eigvalsh(require_hermitian(a)))
    powsum = float(np.sum(w**p))
    if normalized:
        powsum /= w.size
    return powsum ** (1.0 / p)


def positive_part(a) -> np.ndarray:
    """Spectral projection onto nonnegative eigenvalues, (A)_+."""
    w, u = spectral_decompose(a)
    return hermitian_part((u * np.clip(w, 0.0, None)) @ u.conj().T)


def negative_part(a) -> np.ndarray:
    """(A)_- = (-A)_+, so that A = (A)_+ - (A)_-."""
    return positive_part(-np.asarray(a, dtype=complex))


class LoewnerCheck(NamedTuple):
    holds: bool
    min_eigenvalue: float
    witness: np.ndarray | None


def loewner_leq(a, b, tol: float | None = None) -> LoewnerCheck:
    """Test A <= B in the Loewner order; on failure the witness is the
    eigenvector of B - A with the most negative eigenvalue."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch {a.shape} vs {b.shape}")
    diff = hermitian_part(b - a)
    if tol is None:
        tol = spectral_tolerance(diff.shape[0]) * (1.0 + float(np.max(np.abs(diff))))
    w, u = spectral_decompose(diff)
    lam = float(w[0])
    if lam >= -tol:
        return LoewnerCheck(True, lam, None)
    return LoewnerCheck(False, lam, u[:, 0].copy())
