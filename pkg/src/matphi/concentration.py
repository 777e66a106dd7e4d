"""Resampling variance bounds, Poincare-type inequalities, and Gaussian
Monte Carlo checks.

The resampling quantity E(Z) = (1/2) tr E sum_i (Z - Z_i')^2 is computed
by exact enumeration together with its two equivalent forms; the Gaussian
checks are statistical and carry their standard errors in the report.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .errors import MatPhiError, SeparateConvexityViolated
from .frechet import MultivariateScalarFunction, commuting_eigensystem, multivariate_dd_table, multivariate_apply
from .linalg import (
    hermitian_part,
    loewner_leq,
    negative_part,
    normalized_trace,
    positive_part,
)
from .models import DiscreteRandomMatrix, FiniteLaw, MatrixInputModel, ProductModel
from .report import CheckReport
from .sampling import rng_for

FORM_AGREEMENT_TOL = 1e-10


def variance(law: DiscreteRandomMatrix) -> float:
    """tr[E Z^2 - (E Z)^2]."""
    mean = law.mean()
    second = law.expect(lambda v: v @ v)
    return normalized_trace(second - mean @ mean)


def _matrix(model: ProductModel, outcome: tuple) -> np.ndarray:
    return np.asarray(model.evaluator(outcome), dtype=complex)


def efron_stein_forms(model: ProductModel) -> tuple[float, float, float]:
    """The three equivalent enumerated forms of the resampling quantity:
    half replacement square, conditional variance, and positive part."""
    form_replace = 0.0
    form_condvar = 0.0
    form_plus = 0.0
    for i in range(model.n):
        law_i = model.laws[i]
        for p_minus, partial in model.iter_minus(i):
            values = []
            for outcome in law_i.outcomes:
                point = list(partial)
                point[i] = outcome
                values.append(_matrix(model, tuple(point)))
            probs = law_i.probs
            mean_i = sum(p * v for p, v in zip(probs, values))
            for pk, zk in zip(probs, values):
                form_condvar += p_minus * pk * normalized_trace(
                    (zk - mean_i) @ (zk - mean_i)
                )
                for pl, zl in zip(probs, values):
                    diff = zk - zl
                    w = p_minus * pk * pl
                    form_replace += 0.5 * w * normalized_trace(diff @ diff)
                    plus = positive_part(diff)
                    form_plus += w * normalized_trace(plus @ plus)
    return form_replace, form_condvar, form_plus


def efron_stein_quantity(model: ProductModel) -> float:
    """E(Z) by exact enumeration; the three equivalent forms are
    cross-checked on every call, and a disagreement raises because it can
    only indicate a bug."""
    form_replace, form_condvar, form_plus = efron_stein_forms(model)
    scale = 1.0 + abs(form_replace)
    if (
        abs(form_replace - form_condvar) > FORM_AGREEMENT_TOL * scale
        or abs(form_replace - form_plus) > FORM_AGREEMENT_TOL * scale
    ):
        raise MatPhiError(
            "equivalent resampling forms disagree: "
            f"{form_replace!r} {form_condvar!r} {form_plus!r}"
        )
    return form_replace


def check_efron_stein(model: ProductModel, seed: int | None = None) -> CheckReport:
    """Var(Z) <= E(Z) by exact enumeration."""
    law = model.to_law()
    var = variance(law)
    bound = efron_stein_quantity(model)
    tol = 1e-9 * (1.0 + abs(var) + abs(bound))
    gap = var - bound
    return CheckReport(
        check="efron-stein",
        passed=gap <= tol,
        max_gap=float(gap),
        d=law.d,
        n=model.n,
        seed=seed,
        details={"variance": var, "bound": bound},
    )


def check_plus_identities(law: DiscreteRandomMatrix, q: int, seed: int | None = None) -> CheckReport:
    """Moment identities splitting |X - E X|^q and |X - Y|^q into their
    positive and negative spectral parts (Y an independent copy), plus the
    halved-square identity; all verified entrywise by enumeration."""
    if q not in (1, 2, 3):
        raise ValueError(f"q must be 1, 2 or 3, got {q}")
    mean = law.mean()
    d = law.d

    def mat_pow(m, k):
        out = np.eye(d, dtype=complex)
        for _ in range(k):
            out = out @ m
        return out

    def abs_pow(m, k):
        # |m|^q through the spectral absolute value, independent of the
        # positive/negative split it is compared against
        w, u = np.linalg.eigh(hermitian_part(m))
        return (u * np.abs(w) ** k) @ u.conj().T

    lhs1 = sum(p * abs_pow(v - mean, q) for p, v in zip(law.probs, law.values))
    rhs1 = sum(
        p * (mat_pow(positive_part(v - mean), q) + mat_pow(negative_part(v - mean), q))
        for p, v in zip(law.probs, law.values)
    )
    dev1 = float(np.max(np.abs(lhs1 - rhs1)))

    half_abs = np.zeros((d, d), dtype=complex)
    plus_q = np.zeros((d, d), dtype=complex)
    minus_q = np.zeros((d, d), dtype=complex)
    sq = np.zeros((d, d), dtype=complex)
    for px, x in zip(law.probs, law.values):
        for py, y in zip(law.probs, law.values):
            w = px * py
            diff = x - y
            half_abs += 0.5 * w * abs_pow(diff, q)
            plus_q += w * mat_pow(positive_part(diff), q)
            minus_q += w * mat_pow(negative_part(diff), q)
            sq += 0.5 * w * (diff @ diff)
    dev2 = max(
        float(np.max(np.abs(half_abs - plus_q))), float(np.max(np.abs(half_abs - minus_q)))
    )
    centered_sq = sum(p * (v - mean) @ (v - mean) for p, v in zip(law.probs, law.values))
    dev3 = float(np.max(np.abs(centered_sq - sq)))

    scale = 1.0 + float(np.max(np.abs(law.values))) ** q
    max_dev = max(dev1, dev2, dev3)
    return CheckReport(
        check="plus-identities",
        passed=max_dev <= 1e-10 * scale,
        max_gap=max_dev,
        d=d,
        seed=seed,
        details={"q": q, "centered": dev1, "paired": dev2, "halved_square": dev3},
    )


def _fd_partial(model: MatrixInputModel, xs: tuple, i: int, e: np.ndarray, h: float) -> np.ndarray:
    plus = list(xs)
    minus = list(xs)
    plus[i] = xs[i] + h * e
    minus[i] = xs[i] - h * e
    return (
        np.asarray(model.evaluator(tuple(plus)), dtype=complex)
        - np.asarray(model.evaluator(tuple(minus)), dtype=complex)
    ) / (2.0 * h)


def _directional_norm(
    model: MatrixInputModel, xs: tuple, i: int, directions: int, rng: np.random.Generator
) -> float:
    d = xs[i].shape[0]
    h = 1e-5
    best = 0.0
    for _ in range(directions):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        e = hermitian_part(g)
        e = e / float(np.linalg.norm(e))
        deriv = _fd_partial(model, xs, i, e, h)
        best = max(best, float(np.linalg.norm(deriv)))
    return best


def _spot_check_convexity(
    model: MatrixInputModel, probes: int, rng: np.random.Generator
) -> None:
    for _ in range(probes):
        i = int(rng.integers(model.n))
        law = model.laws[i]
        if law.size < 2:
            continue
        point = tuple(
            law_j.outcomes[int(rng.integers(law_j.size))] for law_j in model.laws
        )
        a_idx, b_idx = rng.choice(law.size, size=2, replace=False)
        xa, xb = law.outcomes[a_idx], law.outcomes[b_idx]
        pa = list(point)
        pb = list(point)
        pmid = list(point)
        pa[i] = xa
        pb[i] = xb
        pmid[i] = 0.5 * (np.asarray(xa) + np.asarray(xb))
        mid_val = _matrix(model, tuple(pmid))
        avg_val = 0.5 * (_matrix(model, tuple(pa)) + _matrix(model, tuple(pb)))
        check = loewner_leq(mid_val, avg_val, tol=1e-8 * (1 + float(np.max(np.abs(avg_val)))))
        if not check.holds:
            raise SeparateConvexityViolated(
                f"midpoint probe failed on coordinate {i} "
                f"(eigenvalue {check.min_eigenvalue:.3e})"
            )


def check_poincare(
    model: MatrixInputModel,
    derivative_mode: str = "analytic",
    directions: int = 200,
    spot_check_probes: int = 50,
    seed: int = 0,
) -> CheckReport:
    """Variance against summed squared derivative norms for separately
    convex evaluators of matrix inputs in [0, I].

    In finite-difference mode the norms are random-direction lower bounds,
    so the reported right side under-estimates the true bound (flagged in
    the report details)."""
    if derivative_mode not in ("analytic", "finite_difference"):
        raise ValueError(f"unknown derivative mode {derivative_mode!r}")
    if derivative_mode == "analytic" and model.partial_norm is None:
        raise ValueError("analytic mode needs the model to expose partial_norm")
    rng = rng_for(seed, "poincare-spot", 0)
    if spot_check_probes:
        _spot_check_convexity(model, spot_check_probes, rng)
    law = model.to_law()
    var = variance(law)
    bound = 0.0
    dir_rng = rng_for(seed, "poincare-directions", 0)
    for prob, outcome in model.iter_joint():
        xs = tuple(np.asarray(x, dtype=complex) for x in outcome)
        for i in range(model.n):
            if derivative_mode == "analytic":
                norm = float(model.partial_norm(xs, i))
            else:
                norm = _directional_norm(model, xs, i, directions, dir_rng)
            bound += prob * norm**2
    tol = 1e-8 * (1.0 + abs(var) + abs(bound))
    gap = var - bound
    return CheckReport(
        check="poincare",
        passed=gap <= tol,
        max_gap=float(gap),
        d=law.d,
        n=model.n,
        seed=seed,
        details={
            "variance": var,
            "bound": bound,
            "rhs_is_lower_bound": derivative_mode == "finite_difference",
        },
    )


def check_poincare_commuting(
    laws: Sequence[FiniteLaw],
    f: MultivariateScalarFunction,
    seed: int | None = None,
) -> CheckReport:
    """Poincare bound for multivariate standard functions of commuting
    inputs, using the sup norm of the partial divided-difference tables."""
    model = ProductModel(tuple(laws), lambda xs: multivariate_apply(f, xs))
    law = model.to_law()
    var = variance(law)
    bound = 0.0
    for prob, outcome in model.iter_joint():
        xs = [np.asarray(x, dtype=complex) for x in outcome]
        lambdas, _ = commuting_eigensystem(xs)
        for i in range(f.n):
            table = multivariate_dd_table(f, lambdas, i)
            bound += prob * float(np.max(np.abs(table))) ** 2
    tol = 1e-8 * (1.0 + abs(var) + abs(bound))
    gap = var - bound
    return CheckReport(
        check="poincare-commuting",
        passed=gap <= tol,
        max_gap=float(gap),
        d=law.d,
        n=len(laws),
        seed=seed,
        details={"variance": var, "bound": bound},
    )


def lipschitz_report(
    laws: Sequence[FiniteLaw],
    f: MultivariateScalarFunction,
    grid_density: int = 16,
    max_evaluations: int = 10**6,
) -> dict:
    """Variance of f over the model vs a grid estimate of the l1-Lipschitz
    constant. The constant is a lower bound of the true one and no
    universal comparison constant is attempted, so only the ratio is
    reported."""
    n = f.n
    density = grid_density
    while density**n > max_evaluations and density > 2:
        density -= 1
    axes = [np.linspace(0.0, 1.0, density) for _ in range(n)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    values = np.array([f.fn(x) for x in grid])
    lipschitz = 0.0
    for a in range(len(grid)):
        diffs = np.abs(values[a + 1 :] - values[a])
        dists = np.sum(np.abs(grid[a + 1 :] - grid[a]), axis=1)
        keep = dists > 0
        if np.any(keep):
            lipschitz = max(lipschitz, float(np.max(diffs[keep] / dists[keep])))
    model = ProductModel(tuple(laws), lambda xs: multivariate_apply(f, xs))
    var = variance(model.to_law())
    ratio = var / lipschitz**2 if lipschitz > 0 else 0.0
    return {"variance": var, "lipschitz_const": lipschitz, "ratio": ratio}


def sample_gue(d: int, rng: np.random.Generator) -> np.ndarray:
    """One Gaussian-ensemble Hermitian matrix: real standard normal on
    the diagonal, unit-variance complex normal off the diagonal."""
    diag = rng.standard_normal(d)
    off = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    m = np.zeros((d, d), dtype=complex)
    iu = np.triu_indices(d, k=1)
    m[iu] = off[iu]
    m = m + m.conj().T
    m[np.diag_indices(d)] = diag
    return m


def gue_clt_sample(d: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Rademacher central-limit construction converging to the Gaussian
    ensemble: S = m^{-1/2} sum_j eps_j Y_j with
    Y_j = ((W_j + i W_j') + (W_j + i W_j')†) / 2 for Rademacher W, W'."""
    w = rng.integers(0, 2, size=(m, d, d)) * 2 - 1
    wp = rng.integers(0, 2, size=(m, d, d)) * 2 - 1
    eps = rng.integers(0, 2, size=m) * 2 - 1
    g = w + 1j * wp
    y = 0.5 * (g + np.conj(np.transpose(g, (0, 2, 1))))
    return np.tensordot(eps, y, axes=1) / np.sqrt(m)


def _batched_moments(values: list, batches: int):
    values = np.array(values, dtype=float)
    per = len(values) // batches
    cut = values[: per * batches].reshape(batches, per)
    means = cut.mean(axis=1)
    return float(means.mean()), float(means.std(ddof=1) / np.sqrt(batches))


class _StatAccumulator:
    """Per-batch accumulation of matrix moments for variance-style
    statistics with batch-means standard errors."""

    def __init__(self, d: int, batches: int):
        self.d = d
        self.batches = batches
        self.reset()

    def reset(self):
        self.sums = []
        self._new_batch()

    def _new_batch(self):
        self.current = {}
        self.count = 0

    def add(self, **matrices):
        for key, m in matrices.items():
            acc = self.current.setdefault(key, np.zeros((self.d, self.d), dtype=complex))
            acc += m
        self.count += 1

    def close_batch(self):
        self.sums.append({k: v / self.count for k, v in self.current.items()})
        self._new_batch()

    def batch_values(self, fn) -> np.ndarray:
        return np.array([fn(batch) for batch in self.sums], dtype=float)


def _mc_pass(lhs: float, rhs: float, se: float) -> bool:
    stderr_rel = se / max(abs(rhs), 1e-30)
    return lhs <= rhs * (1.0 + 3.0 * stderr_rel) + 3.0 * se + 1e-12


def check_gaussian_poincare(
    evaluator: Callable,
    n: int,
    samples: int = 100_000,
    seed: int = 0,
    partials: Callable | None = None,
    partial_norm: Callable | None = None,
    d1: int = 1,
    directions: int = 20,
    fd_step: float = 1e-5,
    batches: int = 10,
) -> CheckReport:
    """Monte Carlo variance bound Var(L(X)) <= sum_i E ||D_i L||_2^2
    within three standard errors.

    With d1 = 1 the inputs are n independent standard Gaussians and the
    evaluator receives a length-n vector; derivatives come from
    ``partials(x, i)`` or central differences. With d1 > 1 the inputs are
    n independent Gaussian-ensemble matrices passed as a tuple;
    the derivative norms come from ``partial_norm(xs, i)`` when supplied,
    otherwise from random-direction finite differences (a lower bound on
    the right side, flagged in the report)."""
    scalar_inputs = d1 == 1

    def as_matrix(v):
        v = np.asarray(v, dtype=complex)
        return v.reshape(1, 1) if v.ndim == 0 else v

    if scalar_inputs:
        probe_point = np.zeros(n)
    else:
        probe_point = tuple(np.zeros((d1, d1), dtype=complex) for _ in range(n))
    probe = as_matrix(evaluator(probe_point))
    d = probe.shape[0]

    def scalar_grad_sq(x, rng):
        total = 0.0
        for i in range(n):
            if partials is not None:
                g = as_matrix(partials(x, i))
            else:
                xp = x.copy()
                xm = x.copy()
                xp[i] += fd_step
                xm[i] -= fd_step
                g = (as_matrix(evaluator(xp)) - as_matrix(evaluator(xm))) / (2 * fd_step)
            total += float(np.linalg.norm(g)) ** 2
        return total

    def matrix_grad_sq(xs, rng):
        total = 0.0
        for i in range(n):
            if partial_norm is not None:
                total += float(partial_norm(xs, i)) ** 2
                continue
            best = 0.0
            for _ in range(directions):
                e = hermitian_part(
                    rng.standard_normal((d1, d1)) + 1j * rng.standard_normal((d1, d1))
                )
                e = e / float(np.linalg.norm(e))
                plus = list(xs)
                minus = list(xs)
                plus[i] = xs[i] + fd_step * e
                minus[i] = xs[i] - fd_step * e
                deriv = (as_matrix(evaluator(tuple(plus))) - as_matrix(evaluator(tuple(minus)))) / (
                    2 * fd_step
                )
                best = max(best, float(np.linalg.norm(deriv)))
            total += best**2
        return total

    acc = _StatAccumulator(d, batches)
    per_batch = samples // batches
    for b in range(batches):
        rng = rng_for(seed, "gaussian-poincare", b)
        for _ in range(per_batch):
            if scalar_inputs:
                x = rng.standard_normal(n)
                grad_sq = scalar_grad_sq(x, rng)
                z = as_matrix(evaluator(x))
            else:
                xs = tuple(sample_gue(d1, rng) for _ in range(n))
                grad_sq = matrix_grad_sq(xs, rng)
                z = as_matrix(evaluator(xs))
            acc.add(z=z, z2=z @ z, grad=grad_sq * np.eye(d))
        acc.close_batch()

    def var_of(batch):
        return normalized_trace(batch["z2"] - batch["z"] @ batch["z"])

    var_vals = acc.batch_values(var_of)
    bound_vals = acc.batch_values(lambda b: normalized_trace(b["grad"]))
    var_mean, var_se = float(var_vals.mean()), float(var_vals.std(ddof=1) / np.sqrt(batches))
    bound_mean, bound_se = float(bound_vals.mean()), float(
        bound_vals.std(ddof=1) / np.sqrt(batches)
    )
    se = var_se + bound_se
    passed = _mc_pass(var_mean, bound_mean, se)
    return CheckReport(
        check="gaussian-poincare",
        passed=passed,
        max_gap=float(var_mean - bound_mean),
        d=d,
        n=n,
        seed=seed,
        samples=per_batch * batches,
        stderr=se,
        details={
            "variance": var_mean,
            "bound": bound_mean,
            "rhs_is_lower_bound": (not scalar_inputs) and partial_norm is None,
        },
    )


def _entropy_xlogx(m: np.ndarray) -> float:
    w = np.linalg.eigvalsh(hermitian_part(m))
    w = np.clip(w, 0.0, None)
    pos = w > 1e-14
    return float(np.sum(w[pos] * np.log(w[pos]))) / m.shape[0]


def check_gaussian_sobolev(
    evaluator: Callable[[np.ndarray], np.ndarray],
    p: float,
    n: int,
    samples: int = 100_000,
    seed: int = 0,
    fd_step: float = 1e-5,
    batches: int = 10,
) -> CheckReport:
    """Monte Carlo interpolation-entropy bound for PSD-valued functions of
    Gaussian inputs with generator u^{2/p}, p in (1, 2)."""
    if not 1.0 < p < 2.0:
        raise ValueError(f"p must lie in (1, 2), got {p}")
    probe = np.asarray(evaluator(np.zeros(n)), dtype=complex)
    d = probe.shape[0]
    acc = _StatAccumulator(d, batches)

    def mat_p(m, expo):
        w, u = np.linalg.eigh(hermitian_part(m))
        w = np.clip(w, 0.0, None)
        return (u * w**expo) @ u.conj().T

    per_batch = samples // batches
    for b in range(batches):
        rng = rng_for(seed, "gaussian-sobolev", b)
        for _ in range(per_batch):
            x = rng.standard_normal(n)
            f = np.asarray(evaluator(x), dtype=complex)
            grad_sq = 0.0
            for i in range(n):
                xp = x.copy()
                xm = x.copy()
                xp[i] += fd_step
                xm[i] -= fd_step
                g = (np.asarray(evaluator(xp)) - np.asarray(evaluator(xm))) / (2 * fd_step)
                grad_sq += float(np.linalg.norm(g)) ** 2
            acc.add(f2=f @ f, fp=mat_p(f, p), grad=grad_sq * np.eye(d))
        acc.close_batch()
    dim_factor = d ** (1.0 - 2.0 / p)

    def lhs_of(batch):
        return normalized_trace(batch["f2"]) - normalized_trace(mat_p(batch["fp"], 2.0 / p))

    def rhs_of(batch):
        energy = normalized_trace(batch["grad"])
        return (2.0 - p) * energy * dim_factor + normalized_trace(batch["f2"]) * (
            1.0 - dim_factor
        )

    lhs_vals = acc.batch_values(lhs_of)
    rhs_vals = acc.batch_values(rhs_of)
    lhs_mean, lhs_se = float(lhs_vals.mean()), float(lhs_vals.std(ddof=1) / np.sqrt(batches))
    rhs_mean, rhs_se = float(rhs_vals.mean()), float(rhs_vals.std(ddof=1) / np.sqrt(batches))
    se = lhs_se + rhs_se
    passed = _mc_pass(lhs_mean, rhs_mean, se)
    return CheckReport(
        check="gaussian-sobolev",
        passed=passed,
        max_gap=float(lhs_mean - rhs_mean),
        d=d,
        n=n,
        seed=seed,
        samples=per_batch * batches,
        stderr=se,
        details={"lhs": lhs_mean, "rhs": rhs_mean, "p": p},
    )


def check_gaussian_logsobolev(
    evaluator: Callable[[np.ndarray], np.ndarray],
    n: int,
    samples: int = 100_000,
    seed: int = 0,
    fd_step: float = 1e-5,
    batches: int = 10,
) -> CheckReport:
    """Monte Carlo log-Sobolev bound Ent(f^2) <= 2 sum_i E||D_i f||_2^2
    + log(d) tr E[f^2] for PSD-valued functions of Gaussian inputs."""
    probe = np.asarray(evaluator(np.zeros(n)), dtype=complex)
    d = probe.shape[0]
    acc = _StatAccumulator(d, batches)
    per_batch = samples // batches
    for b in range(batches):
        rng = rng_for(seed, "gaussian-logsobolev", b)
        for _ in range(per_batch):
            x = rng.standard_normal(n)
            f = np.asarray(evaluator(x), dtype=complex)
            f2 = f @ f
            grad_sq = 0.0
            for i in range(n):
                xp = x.copy()
                xm = x.copy()
                xp[i] += fd_step
                xm[i] -= fd_step
                g = (np.asarray(evaluator(xp)) - np.asarray(evaluator(xm))) / (2 * fd_step)
                grad_sq += float(np.linalg.norm(g)) ** 2
            acc.add(f2=f2, ent=_entropy_xlogx(f2) * np.eye(d), grad=grad_sq * np.eye(d))
        acc.close_batch()

    def lhs_of(batch):
        mean_f2 = batch["f2"]
        return normalized_trace(batch["ent"]) - _entropy_xlogx(mean_f2)

    def rhs_of(batch):
        return 2.0 * normalized_trace(batch["grad"]) + np.log(d) * normalized_trace(
            batch["f2"]
        )

    lhs_vals = acc.batch_values(lhs_of)
    rhs_vals = acc.batch_values(rhs_of)
    lhs_mean, lhs_se = float(lhs_vals.mean()), float(lhs_vals.std(ddof=1) / np.sqrt(batches))
    rhs_mean, rhs_se = float(rhs_vals.mean()), float(rhs_vals.std(ddof=1) / np.sqrt(batches))
    se = lhs_se + rhs_se
    passed = _mc_pass(lhs_mean, rhs_mean, se)
    return CheckReport(
        check="gaussian-log-sobolev",
        passed=passed,
        max_gap=float(lhs_mean - rhs_mean),
        d=d,
        n=n,
        seed=seed,
        samples=per_batch * batches,
        stderr=se,
        details={"lhs": lhs_mean, "rhs": rhs_mean},
    )
