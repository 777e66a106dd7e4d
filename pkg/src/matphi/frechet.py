"""Derivatives of standard matrix functions via divided differences.

First derivatives are Schur multipliers of the first divided-difference
table in the eigenbasis; second derivatives use the second-order table.
Superoperators materialize those linear maps as d^2 x d^2 matrices under
the column-stacking vectorization convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NotCommuting, SingularMatrix, SingularSuperoperator
from .linalg import hermitian_part, require_hermitian, spectral_decompose
from .phifun import ScalarFunction

COND_MAX = 1e12


def _dd_tol(a: float, b: float) -> float:
    return 1e-7 * (1.0 + abs(a) + abs(b))


def _dd1(sf: ScalarFunction, a: float, b: float) -> float:
    if abs(a - b) < _dd_tol(a, b):
        return float(sf.d1(np.array([0.5 * (a + b)]))[0])
    fa = float(sf.fn(np.array([a]))[0])
    fb = float(sf.fn(np.array([b]))[0])
    return (fa - fb) / (a - b)


def _dd2(sf: ScalarFunction, a: float, b: float, c: float) -> float:
    # Divided differences are symmetric in their arguments, so pick the
    # permutation with the widest outer pair before recursing.
    arrangements = ((a, b, c), (b, a, c), (a, c, b))
    x, y, z = max(arrangements, key=lambda t: abs(t[0] - t[2]))
    if abs(x - z) < _dd_tol(x, z):
        mid = (a + b + c) / 3.0
        return 0.5 * float(sf.d2(np.array([mid]))[0])
    return (_dd1(sf, x, y) - _dd1(sf, y, z)) / (x - z)


def divided_difference(sf: ScalarFunction, nodes: Sequence[float], order: int = 1) -> float:
    """f^[order] at the given nodes, with confluent nodes handled by the
    derivative limits f'(a) and f''(a)/2."""
    nodes = [float(t) for t in nodes]
    sf.admit(np.array(nodes))
    if order == 1:
        if len(nodes) != 2:
            raise ValueError("order-1 divided difference takes two nodes")
        return _dd1(sf, nodes[0], nodes[1])
    if order == 2:
        if len(nodes) != 3:
            raise ValueError("order-2 divided difference takes three nodes")
        return _dd2(sf, nodes[0], nodes[1], nodes[2])
    raise ValueError(f"order must be 1 or 2, got {order}")


def dd1_table(sf: ScalarFunction, w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    d = w.size
    table = np.empty((d, d))
    for i in range(d):
        for j in range(d):
            table[i, j] = _dd1(sf, w[i], w[j])
    return table


def dd2_table(sf: ScalarFunction, w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    d = w.size
    table = np.empty((d, d, d))
    for i in range(d):
        for k in range(d):
            for j in range(d):
                table[i, k, j] = _dd2(sf, w[i], w[k], w[j])
    return table


def frechet_derivative(sf: ScalarFunction, a, e) -> np.ndarray:
    """Df[A](E) as the divided-difference Schur multiplier in A's eigenbasis."""
    w, u = spectral_decompose(a)
    w = sf.admit(w)
    e = require_hermitian(e)
    et = u.conj().T @ e @ u
    out = u @ (dd1_table(sf, w) * et) @ u.conj().T
    return hermitian_part(out)


def frechet_second(sf: ScalarFunction, a, e1, e2) -> np.ndarray:
    """D^2 f[A](E1, E2), symmetric and bilinear in the directions."""
    w, u = spectral_decompose(a)
    w = sf.admit(w)
    t2 = dd2_table(sf, w)
    e1t = u.conj().T @ require_hermitian(e1) @ u
    e2t = u.conj().T @ require_hermitian(e2) @ u
    core = np.einsum("ikj,ik,kj->ij", t2, e1t, e2t) + np.einsum(
        "ikj,ik,kj->ij", t2, e2t, e1t
    )
    return hermitian_part(u @ core @ u.conj().T)


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(m, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    d = int(round(np.sqrt(v.size)))
    return np.asarray(v, dtype=complex).reshape((d, d), order="F")


def superoperator_of_derivative(sf: ScalarFunction, a) -> np.ndarray:
    """The d^2 x d^2 matrix T with T vec(E) = vec(Df[A](E)).

    T = W diag(vec F) W† with W = conj(U) (x) U unitary, so T is Hermitian
    (self-adjoint for the Hilbert-Schmidt inner product) with the divided
    differences as its spectrum.
    """
    w, u = spectral_decompose(a)
    w = sf.admit(w)
    table = dd1_table(sf, w)
    big = np.kron(u.conj(), u)
    return hermitian_part(big @ np.diag(vec(table)) @ big.conj().T)


def apply_superoperator(t: np.ndarray, x) -> np.ndarray:
    return unvec(np.asarray(t, dtype=complex) @ vec(x))


def invert_superoperator(t: np.ndarray, cond_max: float = COND_MAX) -> np.ndarray:
    t = np.asarray(t, dtype=complex)
    s = np.linalg.svd(t, compute_uv=False)
    smallest = float(s[-1])
    if smallest <= 0 or float(s[0]) / smallest > cond_max:
        raise SingularSuperoperator(
            f"superoperator condition number above {cond_max:.1e}",
            smallest_singular_value=smallest,
        )
    inv = np.linalg.inv(t)
    if np.max(np.abs(t - t.conj().T)) < 1e-10 * (1.0 + float(s[0])):
        inv = hermitian_part(inv)
    return inv


def frechet_norm(sf: ScalarFunction, a, p: int = 2) -> float:
    """Induced norm sup ||Df[A](E)||_2 / ||E||_2, i.e. the absolute
    condition number; equals the largest singular value of the
    materialized superoperator."""
    if p != 2:
        raise ValueError("only the Schatten-2 induced norm is implemented")
    t = superoperator_of_derivative(sf, a)
    return float(np.linalg.svd(t, compute_uv=False)[0])


@dataclass(frozen=True)
class MultivariateScalarFunction:
    """Scalar function of n real variables with partial derivatives."""

    n: int
    fn: Callable[[np.ndarray], float]
    partial: Callable[[int, np.ndarray], float]


def commuting_eigensystem(
    xs: Sequence[np.ndarray], tol_comm: float | None = None, mix_seed: int = 7
) -> tuple[np.ndarray, np.ndarray]:
    """Simultaneously diagonalize a commuting Hermitian tuple.

    Returns (lambdas, u) with lambdas[i, k] the k-th joint eigenvalue of
    xs[i]. Degeneracies are split by diagonalizing a random-coefficient
    combination of the tuple.
    """
    xs = [require_hermitian(x) for x in xs]
    d = xs[0].shape[0]
    if tol_comm is None:
        tol_comm = 1e-8 * d
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            comm = xs[i] @ xs[j] - xs[j] @ xs[i]
            norm = float(np.linalg.norm(comm))
            if norm > tol_comm:
                raise NotCommuting(
                    f"inputs {i} and {j} fail to commute (||[X_i, X_j]||_2 = {norm:.3e})",
                    pair=(i, j),
                    commutator_norm=norm,
                )
    rng = np.random.default_rng(mix_seed)
    scale = max(float(np.max(np.abs(x))) for x in xs) + 1.0
    for _ in range(4):
        coeffs = 1.0 + rng.random(len(xs))
        mix = sum(c * x for c, x in zip(coeffs, xs))
        _, u = np.linalg.eigh(mix)
        lambdas = np.empty((len(xs), d))
        ok = True
        for i, x in enumerate(xs):
            rotated = u.conj().T @ x @ u
            off = rotated - np.diag(np.diag(rotated))
            if float(np.max(np.abs(off))) > 1e-7 * scale:
                ok = False
                break
            lambdas[i] = np.diag(rotated).real
        if ok:
            return lambdas, u
    raise NotCommuting("failed to split joint degeneracies", pair=None, commutator_norm=0.0)


def multivariate_dd_table(
    mf: MultivariateScalarFunction, lambdas: np.ndarray, i: int
) -> np.ndarray:
    """Partial divided-difference table for coordinate i over the joint
    eigenvalue tuples: the univariate divided difference in slot i with
    the remaining coordinates frozen at the row tuple."""
    lambdas = np.asarray(lambdas, dtype=float)
    d = lambdas.shape[1]
    table = np.empty((d, d))
    for k in range(d):
        xk = lambdas[:, k].copy()
        for ell in range(d):
            ti, tj = lambdas[i, k], lambdas[i, ell]
            if abs(ti - tj) < _dd_tol(ti, tj):
                table[k, ell] = mf.partial(i, xk)
            else:
                ymod = xk.copy()
                ymod[i] = tj
                table[k, ell] = (mf.fn(xk) - mf.fn(ymod)) / (ti - tj)
    return table


def multivariate_apply(mf: MultivariateScalarFunction, xs: Sequence[np.ndarray]) -> np.ndarray:
    """f(X_1, ..., X_n) for a commuting tuple via the joint spectrum."""
    lambdas, u = commuting_eigensystem(xs)
    vals = np.array([mf.fn(lambdas[:, k]) for k in range(lambdas.shape[1])])
    return hermitian_part((u * vals) @ u.conj().T)


def multivariate_partial_frechet(
    mf: MultivariateScalarFunction,
    xs: Sequence[np.ndarray],
    i: int,
    e,
    tol_comm: float | None = None,
) -> np.ndarray:
    """Partial derivative of a multivariate standard matrix function with
    respect to the i-th input, as a Schur multiplier in the common
    eigenbasis. Reduces to frechet_derivative when n = 1."""
    if not 0 <= i < mf.n:
        raise IndexError(f"coordinate {i} out of range for n={mf.n}")
    lambdas, u = commuting_eigensystem(xs, tol_comm=tol_comm)
    table = multivariate_dd_table(mf, lambdas, i)
    et = u.conj().T @ require_hermitian(e) @ u
    return hermitian_part(u @ (table * et) @ u.conj().T)


def inverse_map_derivatives(g_at_a, dg, d2g, cond_max: float = COND_MAX):
    """First and second derivatives of X -> X^{-1} composed with a map G,
    given G(A), DG[A](h), and D^2 G[A](h, h)."""
    g = np.asarray(g_at_a, dtype=complex)
    s = np.linalg.svd(g, compute_uv=False)
    if s[-1] <= 0 or s[0] / s[-1] > cond_max:
        raise SingularMatrix("G(A) is numerically singular")
    ginv = np.linalg.inv(g)
    dg = np.asarray(dg, dtype=complex)
    d2g = np.asarray(d2g, dtype=complex)
    first = -ginv @ dg @ ginv
    second = 2.0 * ginv @ dg @ ginv @ dg @ ginv - ginv @ d2g @ ginv
    return first, second


def _fd_scale(a: np.ndarray) -> float:
    return 1.0 + float(np.linalg.norm(a))


def fd_frechet(apply_fn: Callable[[np.ndarray], np.ndarray], a, e, h: float | None = None) -> np.ndarray:
    """Central finite-difference directional derivative of a matrix map."""
    a = np.asarray(a, dtype=complex)
    e = np.asarray(e, dtype=complex)
    if h is None:
        h = 1e-5 * _fd_scale(a)
    return (apply_fn(a + h * e) - apply_fn(a - h * e)) / (2.0 * h)


def fd_frechet_second(
    apply_fn: Callable[[np.ndarray], np.ndarray],
    a,
    e1,
    e2,
    h: float | None = None,
    richardson: bool = True,
) -> np.ndarray:
    """Second directional derivative by central differences; mixed
    directions via polarization, optionally Richardson-extrapolated."""
    a = np.asarray(a, dtype=complex)
    e1 = np.asarray(e1, dtype=complex)
    e2 = np.asarray(e2, dtype=complex)
    if h is None:
        h = 1e-5 * _fd_scale(a)

    def second_along(e, step):
        return (apply_fn(a + step * e) - 2.0 * apply_fn(a) + apply_fn(a - step * e)) / step**2

    def mixed(step):
        if e1 is e2 or np.array_equal(e1, e2):
            return second_along(e1, step)
        plus = second_along(e1 + e2, step)
        minus = second_along(e1 - e2, step)
        return 0.25 * (plus - minus)

    if not richardson:
        return mixed(h)
    coarse = mixed(h)
    fine = mixed(h / 2.0)
    return (4.0 * fine - coarse) / 3.0
