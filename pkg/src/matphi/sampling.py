"""Seeded instance generators.

Randomness is derived from a splittable counter scheme keyed by
(seed, label, index) so that serial and parallel executions of the same
configuration see identical streams.
"""

from __future__ import annotations

import zlib

import numpy as np

from .linalg import hermitian_part
from .models import DiscreteRandomMatrix, FiniteLaw, ProductModel

PSD_EIGEN_FLOOR = 1e-3
PSD_NORM_CAP = 10.0


def rng_for(seed: int, label: str, index: int = 0) -> np.random.Generator:
    key = zlib.crc32(label.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**63 - 1), key, int(index)]))


def random_complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    g = random_complex_gaussian(rng, (d, d))
    return scale * hermitian_part(g)


def random_unit_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    h = random_hermitian(rng, d)
    return h / float(np.linalg.norm(h))


def random_psd(
    rng: np.random.Generator,
    d: int,
    eps: float = PSD_EIGEN_FLOOR,
    norm_cap: float = PSD_NORM_CAP,
) -> np.ndarray:
    """G†G + eps*I with complex Gaussian G, rescaled so the Schatten-2
    norm stays below the cap; keeps spectra and superoperator inversions
    well conditioned."""
    g = random_complex_gaussian(rng, (d, d))
    m = hermitian_part(g.conj().T @ g) + eps * np.eye(d)
    norm = float(np.linalg.norm(m))
    if norm > norm_cap:
        m = m * (norm_cap / norm) + eps * np.eye(d)
    return m


def random_pd(rng: np.random.Generator, d: int, floor: float = 0.1) -> np.ndarray:
    return random_psd(rng, d) + floor * np.eye(d)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    q, r = np.linalg.qr(random_complex_gaussian(rng, (d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng: np.random.Generator, d: int) -> np.ndarray:
    m = random_psd(rng, d)
    return m / float(np.trace(m).real)


def random_probability_vector(rng: np.random.Generator, k: int, floor: float = 0.05) -> np.ndarray:
    v = rng.random(k) + floor
    return v / v.sum()


def random_kernel(rng: np.random.Generator, nx: int, ny: int) -> np.ndarray:
    rows = rng.random((nx, ny)) + 0.05
    return rows / rows.sum(axis=1, keepdims=True)


def random_law(
    rng: np.random.Generator, d: int, size: int, psd: bool = True, pd_floor: float = 0.0
) -> DiscreteRandomMatrix:
    probs = random_probability_vector(rng, size)
    if psd:
        values = np.stack([random_psd(rng, d) + pd_floor * np.eye(d) for _ in range(size)])
    else:
        values = np.stack([random_hermitian(rng, d) for _ in range(size)])
    return DiscreteRandomMatrix(probs, values)


def random_product_model(
    rng: np.random.Generator, d: int, n: int, arity: int = 2, psd: bool = True
) -> ProductModel:
    """Random evaluator table over independent labelled inputs."""
    laws = [
        FiniteLaw(random_probability_vector(rng, arity), tuple(range(arity)))
        for _ in range(n)
    ]
    total = arity**n
    if psd:
        table = np.stack([random_psd(rng, d) for _ in range(total)])
    else:
        table = np.stack([random_hermitian(rng, d) for _ in range(total)])
    return ProductModel.from_table(laws, table)


def random_boolean_function(
    rng: np.random.Generator, n: int, d: int, psd: bool = True
) -> np.ndarray:
    """Table of 2^n Hermitian (or PSD) values for a cube function."""
    count = 2**n
    if psd:
        return np.stack([random_psd(rng, d) for _ in range(count)])
    return np.stack([random_hermitian(rng, d) for _ in range(count)])


def random_cq_states(rng: np.random.Generator, nx: int, d: int) -> np.ndarray:
    return np.stack([random_density(rng, d) for _ in range(nx)])
