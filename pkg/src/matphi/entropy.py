"""Matrix entropy functionals and their equivalent convexity checks.

H(Z) = tr[E Phi(Z) - Phi(E Z)] with the normalized trace. The checkers
below are sampling falsifiers: they certify "no violation in N trials"
for members of the entropy class and are expected to produce explicit
witnesses for the out-of-class cube control.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .frechet import (
    frechet_derivative,
    frechet_second,
    apply_superoperator,
    invert_superoperator,
    superoperator_of_derivative,
)
from .linalg import hermitian_part, normalized_trace
from .models import DiscreteRandomMatrix, ProductModel
from .phifun import PhiFunction
from .report import CheckReport, matrix_payload
from .sampling import random_hermitian, random_pd, random_psd, rng_for


def entropy_tolerance(*values: float) -> float:
    return 1e-9 * (1.0 + sum(abs(v) for v in values))


def phi_entropy(phi: PhiFunction, law: DiscreteRandomMatrix) -> float:
    """tr[E Phi(Z) - Phi(E Z)]; nonnegative for convex Phi, zero on
    single-point laws."""
    scalar = phi.scalar()
    expected = law.expect(scalar.apply)
    return normalized_trace(expected - scalar.apply(law.mean()))


@dataclass(frozen=True)
class ConditionalEntropyTable:
    """Entropy of Z over the i-th input for every assignment of the rest."""

    probs: np.ndarray
    entropies: np.ndarray
    assignments: tuple

    @property
    def expectation(self) -> float:
        return float(np.dot(self.probs, self.entropies))


def conditional_phi_entropy(
    phi: PhiFunction, model: ProductModel, i: int
) -> ConditionalEntropyTable:
    probs, entropies, assignments = [], [], []
    for p_minus, partial in model.iter_minus(i):
        law = model.slice_law(i, partial)
        probs.append(p_minus)
        entropies.append(phi_entropy(phi, law))
        assignments.append(partial)
    return ConditionalEntropyTable(
        np.array(probs), np.array(entropies), tuple(assignments)
    )


def check_subadditivity(
    phi: PhiFunction, model: ProductModel, seed: int | None = None
) -> CheckReport:
    """Whole-entropy vs summed conditional entropies, by exact enumeration."""
    law = model.to_law()
    lhs = phi_entropy(phi, law)
    rhs = sum(conditional_phi_entropy(phi, model, i).expectation for i in range(model.n))
    tol = entropy_tolerance(lhs, rhs)
    gap = lhs - rhs
    return CheckReport(
        check="subadditivity",
        passed=gap <= tol,
        max_gap=float(gap),
        phi=phi.label,
        d=law.d,
        n=model.n,
        seed=seed,
        details={"lhs": lhs, "rhs": rhs},
    )


def bregman_maps(phi: PhiFunction, u, v) -> tuple[float, float, float]:
    """The three trace maps whose joint convexity characterizes the class:

    A = Tr[Phi(u+v) - Phi(u) - DPhi[u](v)]
    B = Tr[DPhi[u+v](v) - DPhi[u](v)]
    C = Tr[D^2 Phi[u](v, v)]
    """
    scalar = phi.scalar()
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    d = u.shape[0]
    a_val = d * normalized_trace(
        scalar.apply(u + v) - scalar.apply(u) - frechet_derivative(scalar, u, v)
    )
    b_val = d * normalized_trace(
        frechet_derivative(scalar, u + v, v) - frechet_derivative(scalar, u, v)
    )
    c_val = d * normalized_trace(frechet_second(scalar, u, v, v))
    return a_val, b_val, c_val


def check_joint_convexity(
    map_fn: Callable[[np.ndarray, np.ndarray], float],
    sampler: Callable[[np.random.Generator], tuple],
    trials: int,
    seed: int = 0,
    label: str = "joint-convexity",
    tol_rel: float = 1e-8,
    max_witnesses: int = 5,
) -> CheckReport:
    """Falsifier for joint convexity of a bivariate matrix map: samples
    argument pairs and mixing weights, reports any violating witnesses."""
    violations = []
    max_gap = -np.inf
    for trial in range(trials):
        rng = rng_for(seed, label, trial)
        (u1, v1), (u2, v2) = sampler(rng)
        for t in (0.5, float(rng.uniform(0.05, 0.95))):
            lhs = t * map_fn(u1, v1) + (1.0 - t) * map_fn(u2, v2)
            rhs = map_fn(t * u1 + (1 - t) * u2, t * v1 + (1 - t) * v2)
            gap = rhs - lhs
            max_gap = max(max_gap, gap)
            if gap > tol_rel * (1.0 + abs(lhs) + abs(rhs)):
                if len(violations) < max_witnesses:
                    violations.append(
                        {
                            "gap": float(gap),
                            "t": t,
                            "u1": matrix_payload(u1),
                            "v1": matrix_payload(v1),
                            "u2": matrix_payload(u2),
                            "v2": matrix_payload(v2),
                        }
                    )
    return CheckReport(
        check=label,
        passed=not violations,
        max_gap=float(max_gap),
        trials=trials,
        seed=seed,
        violations=violations,
    )


def check_char_a(
    phi: PhiFunction,
    trials: int,
    d: int,
    seed: int = 0,
    tol_rel: float = 1e-8,
    max_witnesses: int = 5,
) -> CheckReport:
    """Midpoint operator concavity of X -> (D Psi[X])^{-1} on sampled
    positive-definite pairs."""
    if phi.is_affine:
        raise DomainError("the concavity characterization needs a non-affine generator")
    psi = phi.psi()
    violations = []
    max_gap = -np.inf
    for trial in range(trials):
        rng = rng_for(seed, "char-a", trial)
        a = random_pd(rng, d)
        b = random_pd(rng, d)
        inv = {
            key: invert_superoperator(superoperator_of_derivative(psi, m))
            for key, m in (("a", a), ("b", b), ("mid", 0.5 * (a + b)))
        }
        diff = hermitian_part(inv["mid"] - 0.5 * (inv["a"] + inv["b"]))
        lam = float(np.linalg.eigvalsh(diff)[0])
        scale = 1.0 + max(float(np.linalg.norm(inv[k])) for k in inv)
        gap = -lam
        max_gap = max(max_gap, gap)
        if lam < -tol_rel * scale:
            if len(violations) < max_witnesses:
                violations.append(
                    {
                        "gap": float(gap),
                        "min_eigenvalue": lam,
                        "a": matrix_payload(a),
                        "b": matrix_payload(b),
                    }
                )
    return CheckReport(
        check="char-a",
        passed=not violations,
        max_gap=float(max_gap),
        phi=phi.label,
        d=d,
        trials=trials,
        seed=seed,
        violations=violations,
    )


@dataclass(frozen=True)
class CharEResult:
    lhs: float
    rhs: float
    holds: bool


def check_char_e(
    phi: PhiFunction,
    a,
    h,
    k,
    fd_step: float | None = None,
    tol_rel: float = 1e-6,
) -> CharEResult:
    """Fourth-order trace inequality equivalent to class membership.

    lhs = Tr[h T^{-1} D^3Psi[A](k, k, T^{-1} h)]
    rhs = 2 Tr[h T^{-1} D^2Psi[A](k, T^{-1} D^2Psi[A](k, T^{-1} h))]

    with T = D Psi[A]. The third derivative is taken by central
    differences of the exact second derivative along k, which bounds the
    attainable accuracy; at d = 1 everything reduces to
    Phi'''' k^2 h^2 / Phi''^2 >= 2 Phi'''^2 k^2 h^2 / Phi''^3.
    """
    if phi.is_affine:
        return CharEResult(0.0, 0.0, True)
    psi = phi.psi()
    a = np.asarray(a, dtype=complex)
    h = np.asarray(h, dtype=complex)
    k = np.asarray(k, dtype=complex)
    if fd_step is None:
        fd_step = 1e-4 * (1.0 + float(np.linalg.norm(a)))
    t_inv = invert_superoperator(superoperator_of_derivative(psi, a))
    tinv_h = apply_superoperator(t_inv, h)

    def d3_psi(x):
        plus = frechet_second(psi, a + fd_step * k, k, x)
        minus = frechet_second(psi, a - fd_step * k, k, x)
        return (plus - minus) / (2.0 * fd_step)

    lhs_mat = apply_superoperator(t_inv, d3_psi(tinv_h))
    lhs = float(np.trace(h @ lhs_mat).real)
    inner = apply_superoperator(t_inv, frechet_second(psi, a, k, tinv_h))
    rhs_mat = apply_superoperator(t_inv, frechet_second(psi, a, k, inner))
    rhs = 2.0 * float(np.trace(h @ rhs_mat).real)
    tol = tol_rel * (1.0 + abs(lhs) + abs(rhs))
    return CharEResult(lhs, rhs, lhs >= rhs - tol)


def duality_lower_bound(
    phi: PhiFunction, z_law: DiscreteRandomMatrix, t_law: DiscreteRandomMatrix
) -> float:
    """tr E[(Phi'(T) - Phi'(E T))(Z - T)] + H(T), a lower bound for H(Z)
    over couplings sharing the support index; exact equality at T = Z."""
    if z_law.size != t_law.size or not np.allclose(z_law.probs, t_law.probs, atol=1e-12):
        raise DomainError("duality bound needs Z and T coupled on the same index law")
    psi = phi.psi()
    psi_mean = psi.apply(t_law.mean())
    acc = 0.0
    for p, z, t in zip(z_law.probs, z_law.values, t_law.values):
        acc += p * normalized_trace((psi.apply(t) - psi_mean) @ (z - t))
    return acc + phi_entropy(phi, t_law)


def check_char_g(
    phi: PhiFunction, model: ProductModel, seed: int | None = None
) -> CheckReport:
    """Conditional Jensen inequality: averaging the conditional entropy
    over the first input dominates the entropy of the partial average."""
    if model.n != 2:
        raise DomainError("the conditional-Jensen check uses two-input models")
    law0, law1 = model.laws
    cond = 0.0
    for p0, x0 in zip(law0.probs, law0.outcomes):
        slice_values = np.stack(
            [np.asarray(model.evaluator((x0, x1)), dtype=complex) for x1 in law1.outcomes]
        )
        cond += p0 * phi_entropy(phi, DiscreteRandomMatrix(law1.probs, slice_values))
    averaged = np.stack(
        [
            sum(
                p0 * np.asarray(model.evaluator((x0, x1)), dtype=complex)
                for p0, x0 in zip(law0.probs, law0.outcomes)
            )
            for x1 in law1.outcomes
        ]
    )
    rhs = phi_entropy(phi, DiscreteRandomMatrix(law1.probs, averaged))
    tol = entropy_tolerance(cond, rhs)
    gap = rhs - cond
    return CheckReport(
        check="char-g",
        passed=gap <= tol,
        max_gap=float(gap),
        phi=phi.label,
        n=2,
        seed=seed,
        details={"lhs": cond, "rhs": rhs},
    )


def check_char_h(
    phi: PhiFunction,
    z1: DiscreteRandomMatrix,
    z2: DiscreteRandomMatrix,
    t: float,
    seed: int | None = None,
) -> CheckReport:
    """Convexity of the entropy functional along shared-index couplings."""
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"mixing weight must lie in [0, 1], got {t}")
    if z1.size != z2.size or not np.allclose(z1.probs, z2.probs, atol=1e-12):
        raise DomainError("convexity check needs laws coupled on the same index")
    mixed = DiscreteRandomMatrix(z1.probs, t * z1.values + (1 - t) * z2.values)
    lhs = phi_entropy(phi, mixed)
    rhs = t * phi_entropy(phi, z1) + (1 - t) * phi_entropy(phi, z2)
    tol = entropy_tolerance(lhs, rhs)
    gap = lhs - rhs
    return CheckReport(
        check="char-h",
        passed=gap <= tol,
        max_gap=float(gap),
        phi=phi.label,
        d=z1.d,
        seed=seed,
        details={"lhs": lhs, "rhs": rhs, "t": t},
    )


def bregman_pair_sampler(d: int, scale: float = 1.0):
    """Sampler of ((u1, v1), (u2, v2)) with PSD u and PSD v, suitable for
    the convexity falsifiers of the three trace maps."""

    def sampler(rng: np.random.Generator):
        return (
            (random_pd(rng, d, floor=0.05), scale * random_psd(rng, d)),
            (random_pd(rng, d, floor=0.05), scale * random_psd(rng, d)),
        )

    return sampler


def hermitian_direction_sampler(d: int):
    def sampler(rng: np.random.Generator):
        return (
            (random_pd(rng, d, floor=0.05), random_hermitian(rng, d)),
            (random_pd(rng, d, floor=0.05), random_hermitian(rng, d)),
        )

    return sampler
