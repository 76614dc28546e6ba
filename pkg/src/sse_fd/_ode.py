"""Adaptive integration of linear systems ``y' = A(t) y``.

Two routes share the same embedded Dormand-Prince 8(5,3) stepper:

``direct``
    integrate the state over the whole span, sampling with dense output.
``floquet``
    for ``A`` periodic with period ``T``, integrate the fundamental matrix
    over one period only and build ``y(jT + s) = U(s) U(T)**j y0``.
    This is exact up to the one-period integration error and makes runs of
    thousands of drive cycles cheap.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

from .errors import StiffnessError

METHOD = "DOP853"


def _check(sol):
    if sol.status < 0:
        raise StiffnessError(f"integrator failed: {sol.message}")


def integrate_direct(generator, y0, t_out, rtol, atol):
    """States at ``t_out`` (starting at 0), shape ``(len(t_out), dim)``."""
    y0 = np.asarray(y0)
    t_out = np.asarray(t_out, dtype=float)

    def rhs(t, y):
        return generator(t) @ y

    if t_out[-1] == t_out[0]:
        return np.repeat(y0[None, :], t_out.size, axis=0)
    sol = solve_ivp(
        rhs, (t_out[0], t_out[-1]), y0, method=METHOD, t_eval=t_out, rtol=rtol, atol=atol
    )
    _check(sol)
    return sol.y.T


def period_propagator(generator, period, dim, dtype, rtol, atol):
    """Dense-output solution for the fundamental matrix on ``[0, period]``."""
    eye = np.eye(dim, dtype=dtype)

    def rhs(t, y):
        return (generator(t) @ y.reshape(dim, dim)).ravel()

    sol = solve_ivp(
        rhs, (0.0, period), eye.ravel(), method=METHOD, dense_output=True, rtol=rtol, atol=atol
    )
    _check(sol)
    return sol.sol


def integrate_floquet(generator, period, y0, t_out, rtol, atol):
    """Like :func:`integrate_direct` for a ``period``-periodic generator."""
    y0 = np.asarray(y0)
    dim = y0.size
    t_out = np.asarray(t_out, dtype=float)
    dense = period_propagator(generator, period, dim, y0.dtype, rtol, atol)

    cycles = np.floor(t_out / period).astype(np.int64)
    offset = t_out - cycles * period
    # guard against offset landing a hair below 0 or above T from rounding
    offset = np.clip(offset, 0.0, period)

    monodromy = dense(period).reshape(dim, dim)
    strobe = np.empty((cycles.max() + 1, dim), dtype=y0.dtype)
    strobe[0] = y0
    for j in range(1, strobe.shape[0]):
        strobe[j] = monodromy @ strobe[j - 1]

    within = dense(offset).reshape(dim, dim, -1)
    return np.einsum("ikn,nk->ni", within, strobe[cycles])
