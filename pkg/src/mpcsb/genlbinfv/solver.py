"""Optimistic FTRL step: minimise <c, x> + psi(x) over conv(A) by damped Newton."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import InstanceSpec
from .polytope import polytope
from .regularizer import RegState, phi, phi_grad, phi_hess

FLOOR = 1e-12


class SolverError(RuntimeError):
    def __init__(self, msg: str, residual: float):
        super().__init__(f"{msg} (reduced gradient norm {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class FractionalPoint:
    """Solution of one OFTRL step.

    ``x`` satisfies the equality constraints exactly (pinned coordinates sit
    on their bound) and is what gets decomposed. ``interior`` is ``x``
    clamped into [FLOOR n_i, (1 - FLOOR) n_i] and feeds the loss estimator
    and the beta update.
    """

    x: np.ndarray
    interior: np.ndarray
    iterations: int
    residual: float


def oftrl_objective(linear, x, reg: RegState) -> float:
    """<linear, x> + sum_i beta_i phi_i(x_i); +inf where x_i <= 0."""
    x = np.asarray(x, dtype=np.float64)
    return float(np.dot(linear, x) + np.sum(reg.beta() * phi(x, reg.caps, reg.gamma)))


def reduced_gradient(spec: InstanceSpec, linear, x, reg: RegState) -> float:
    """Norm of the objective gradient projected onto the feasible directions."""
    poly = polytope(spec)
    F = poly.free
    if F.size == 0 or poly.dim == 0:
        return 0.0
    beta = reg.beta()[F]
    g = np.asarray(linear)[F] + beta * phi_grad(np.asarray(x)[F], reg.caps[F], reg.gamma)
    return float(np.linalg.norm(poly.basis.T @ g))


def solve_oftrl(
    spec: InstanceSpec,
    cumulative,
    q,
    reg: RegState,
    x0=None,
    tol: float = 1e-8,
    max_iter: int = 200,
) -> FractionalPoint:
    """argmin over conv(A) of <q + cumulative, x> + psi(x).

    Newton steps move in the null space of the equality constraints, so the
    Hessian of the reduced problem is Z^T diag(h) Z with h the (diagonal)
    Hessian of psi. Steps are cut back to stay inside the open box and to
    decrease the objective. ``x0`` warm-starts from a previous solution.
    """
    poly = polytope(spec)
    linear = np.asarray(q, dtype=np.float64) + np.asarray(cumulative, dtype=np.float64)
    caps = reg.caps
    F = poly.free
    Z = poly.basis
    x = poly.start.copy() if x0 is None else poly.project(x0)
    if F.size == 0 or poly.dim == 0:
        return _finish(poly, x, 0, 0.0)

    n = caps[F]
    beta = reg.beta()[F]
    c = linear[F]
    gamma = reg.gamma
    xf = x[F]
    if np.any(xf <= 0.0) or np.any(xf >= n):
        xf = poly.start[F].copy()
    # rounding in c . x grows with |c|; the allowance stays far below tol for |c| <= 1e5
    threshold = tol + 1e-14 * float(np.abs(c).max())
    # aim a decade below tol so the returned point clears it with margin
    target = max(0.1 * tol, 1e-14 * float(np.abs(c).max()))

    def objective(z):
        return float(c @ z + beta @ phi(z, n, gamma))

    fval = objective(xf)
    res = prev_res = np.inf
    for it in range(max_iter + 1):
        g = c + beta * phi_grad(xf, n, gamma)
        rg = Z.T @ g
        res = float(np.linalg.norm(rg))
        # accept within tol once Newton stops making progress (rounding floor)
        stalled = res > 0.5 * prev_res
        if res <= target or (res <= threshold and (stalled or it == max_iter)):
            x[F] = xf
            return _finish(poly, x, it, res)
        if it == max_iter:
            break
        prev_res = res
        h = beta * phi_hess(xf, n, gamma)
        H = Z.T @ (h[:, None] * Z)
        dy = -np.linalg.solve(H, rg)
        dx = Z @ dy
        decrement = float(-(g @ dx))
        # largest step keeping every free coordinate strictly inside (0, n)
        with np.errstate(divide="ignore"):
            to_lo = np.where(dx < 0, -xf / dx, np.inf)
            to_hi = np.where(dx > 0, (n - xf) / dx, np.inf)
        step = min(1.0, 0.99 * float(min(to_lo.min(), to_hi.min())))
        if decrement < 0.0625:
            # quadratic-convergence region: take the (boundary-safe) Newton step
            xf = xf + step * dx
            fval = objective(xf)
            continue
        for _ in range(60):
            cand = xf + step * dx
            fc = objective(cand)
            if fc <= fval - 1e-4 * step * decrement:
                break
            step *= 0.5
        else:
            raise SolverError("line search failed", res)
        xf, fval = cand, fc
    raise SolverError(f"no convergence in {max_iter} Newton iterations", res)


def _finish(poly, x, iterations, residual) -> FractionalPoint:
    caps = poly.caps
    interior = np.clip(x, FLOOR * caps, (1.0 - FLOOR) * caps)
    x = x.copy()
    x.setflags(write=False)
    interior.setflags(write=False)
    return FractionalPoint(x, interior, iterations, residual)
