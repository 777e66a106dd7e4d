"""Finite-support random matrices and product models of independent inputs.

All expectations here are exact enumerations; the joint size of a product
model is guarded so nothing above desk scale is attempted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import DimensionMismatch, EnumerationTooLarge
from .linalg import hermitian_part, require_hermitian, spectral_tolerance

MAX_ENUMERATION = 10**6


@dataclass(frozen=True)
class DiscreteRandomMatrix:
    """Finite-support law {(p_k, Z_k)} over Hermitian matrices.

    Positivity of the support values is a property of the operations that
    need it (entropy evaluation checks spectra against the generator's
    domain); sign-indefinite laws are allowed for the moment identities.
    """

    probs: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if values.ndim != 3 or values.shape[1] != values.shape[2]:
            raise DimensionMismatch(f"values must be (K, d, d), got {values.shape}")
        if probs.shape != (values.shape[0],):
            raise DimensionMismatch("probabilities and values disagree in length")
        if np.any(probs <= 0):
            raise ValueError("support probabilities must be strictly positive")
        if abs(float(probs.sum()) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, not 1")
        values = np.stack([require_hermitian(v) for v in values])
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[float, np.ndarray]]) -> "DiscreteRandomMatrix":
        probs = np.array([p for p, _ in pairs], dtype=float)
        values = np.stack([np.asarray(v, dtype=complex) for _, v in pairs])
        return cls(probs, values)

    @classmethod
    def from_scalars(cls, pairs: Sequence[tuple[float, float]]) -> "DiscreteRandomMatrix":
        return cls.from_pairs([(p, np.array([[complex(v)]])) for p, v in pairs])

    @property
    def size(self) -> int:
        return self.probs.size

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def mean(self) -> np.ndarray:
        return hermitian_part(np.tensordot(self.probs, self.values, axes=1))

    def expect(self, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        acc = np.zeros((self.d, self.d), dtype=complex)
        for p, v in zip(self.probs, self.values):
            acc += p * np.asarray(fn(v), dtype=complex)
        return acc

    def map_values(self, fn: Callable[[np.ndarray], np.ndarray]) -> "DiscreteRandomMatrix":
        return DiscreteRandomMatrix(self.probs, np.stack([fn(v) for v in self.values]))

    def scaled(self, c: float) -> "DiscreteRandomMatrix":
        return DiscreteRandomMatrix(self.probs, c * self.values)


@dataclass(frozen=True)
class FiniteLaw:
    """One independent input: probabilities over opaque outcomes
    (labels, scalars, or matrices)."""

    probs: np.ndarray
    outcomes: tuple

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1 or len(self.outcomes) != probs.size:
            raise DimensionMismatch("probabilities and outcomes disagree in length")
        if np.any(probs <= 0):
            raise ValueError("input probabilities must be strictly positive")
        if abs(float(probs.sum()) - 1.0) > 1e-12:
            raise ValueError(f"input probabilities sum to {probs.sum()!r}, not 1")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "outcomes", tuple(self.outcomes))

    @classmethod
    def uniform(cls, outcomes: Sequence) -> "FiniteLaw":
        k = len(outcomes)
        return cls(np.full(k, 1.0 / k), tuple(outcomes))

    @property
    def size(self) -> int:
        return self.probs.size


@dataclass(frozen=True)
class ProductModel:
    """Independent inputs X_1..X_n and a total evaluator mapping outcome
    tuples to Hermitian matrices."""

    laws: tuple[FiniteLaw, ...]
    evaluator: Callable[[tuple], np.ndarray]
    max_enumeration: int = MAX_ENUMERATION

    def __post_init__(self):
        object.__setattr__(self, "laws", tuple(self.laws))
        if self.joint_size > self.max_enumeration:
            raise EnumerationTooLarge(
                f"joint support size {self.joint_size} exceeds {self.max_enumeration}"
            )

    @property
    def n(self) -> int:
        return len(self.laws)

    @property
    def joint_size(self) -> int:
        size = 1
        for law in self.laws:
            size *= law.size
        return size

    def iter_joint(self) -> Iterator[tuple[float, tuple]]:
        index_ranges = [range(law.size) for law in self.laws]
        for idx in itertools.product(*index_ranges):
            prob = 1.0
            outcome = []
            for law, k in zip(self.laws, idx):
                prob *= float(law.probs[k])
                outcome.append(law.outcomes[k])
            yield prob, tuple(outcome)

    def iter_minus(self, i: int) -> Iterator[tuple[float, tuple]]:
        """Assignments of all inputs except the i-th, with probabilities."""
        if not 0 <= i < self.n:
            raise IndexError(f"input index {i} out of range for n={self.n}")
        others = [j for j in range(self.n) if j != i]
        index_ranges = [range(self.laws[j].size) for j in others]
        for idx in itertools.product(*index_ranges):
            prob = 1.0
            assignment = {}
            for j, k in zip(others, idx):
                prob *= float(self.laws[j].probs[k])
                assignment[j] = self.laws[j].outcomes[k]
            yield prob, tuple(assignment.get(j) for j in range(self.n))

    def slice_law(self, i: int, partial: tuple) -> DiscreteRandomMatrix:
        """Law of Z as the i-th input varies with the others pinned."""
        law = self.laws[i]
        values = []
        for outcome in law.outcomes:
            point = list(partial)
            point[i] = outcome
            values.append(np.asarray(self.evaluator(tuple(point)), dtype=complex))
        return DiscreteRandomMatrix(law.probs, np.stack(values))

    def to_law(self) -> DiscreteRandomMatrix:
        probs, values = [], []
        for p, outcome in self.iter_joint():
            probs.append(p)
            values.append(np.asarray(self.evaluator(outcome), dtype=complex))
        return DiscreteRandomMatrix(np.array(probs), np.stack(values))

    @classmethod
    def from_table(
        cls, laws: Sequence[FiniteLaw], table: np.ndarray
    ) -> "ProductModel":
        """Evaluator backed by a dense table indexed in mixed radix with
        the first input varying slowest."""
        laws = tuple(laws)
        sizes = [law.size for law in laws]
        table = np.asarray(table, dtype=complex)
        index_of = [
            {outcome: k for k, outcome in enumerate(law.outcomes)} for law in laws
        ]

        def evaluator(outcome_tuple):
            flat = 0
            for size, lookup, outcome in zip(sizes, index_of, outcome_tuple):
                flat = flat * size + lookup[outcome]
            return table[flat]

        return cls(laws, evaluator)


def _check_unit_interval(x: np.ndarray) -> None:
    x = require_hermitian(x)
    w = np.linalg.eigvalsh(x)
    tol = spectral_tolerance(x.shape[0])
    if w[0] < -tol or w[-1] > 1.0 + tol:
        raise ValueError(
            f"matrix outcome spectrum [{w[0]:.3e}, {w[-1]:.3e}] leaves [0, 1]"
        )


@dataclass(frozen=True)
class MatrixInputModel(ProductModel):
    """Product model whose inputs are matrices in the interval [0, I].

    ``partial_norm(xs, i)``, when supplied, returns the exact induced norm
    of the i-th partial derivative of the evaluator at the tuple ``xs``.
    ``partial_derivative(xs, i, e)`` exposes the analytic directional
    derivative when available.
    """

    partial_norm: Callable[[tuple, int], float] | None = None
    partial_derivative: Callable[[tuple, int, np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        super().__post_init__()
        for law in self.laws:
            for outcome in law.outcomes:
                _check_unit_interval(np.asarray(outcome, dtype=complex))
