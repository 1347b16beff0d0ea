"""Numeric kernels for polynomial vector fields and their flows.

A field is packed as three arrays: ``comp`` (output component of each
term), ``coef`` and ``exps`` (one exponent row per term).  With numba
available the evaluator and the adaptive RK4 integrator are compiled at
import time; ``GRADRED_NO_NUMBA=1`` selects the plain numpy versions.
"""
from __future__ import annotations

import importlib
import os
import sys

import numpy as np


class FlowError(RuntimeError):
    """Integration escaped to infinity or the step size collapsed."""


def _use_numba() -> bool:
    if os.environ.get("GRADRED_NO_NUMBA", "").strip() not in ("", "0"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


JIT = _use_numba()

if JIT:
    from numba import njit

    _jit = njit(cache=True)
else:
    def _jit(f):
        return f


def _eval_py(z, comp, coef, exps, out):
    out[:] = 0.0
    if len(coef) == 0:
        return out
    vals = coef * np.prod(z[None, :] ** exps, axis=1)
    np.add.at(out, comp, vals)
    return out


def _eval_loop(z, comp, coef, exps, out):
    for k in range(out.shape[0]):
        out[k] = 0.0
    for t in range(coef.shape[0]):
        v = coef[t]
        for j in range(exps.shape[1]):
            e = exps[t, j]
            for _ in range(e):
                v *= z[j]
        out[comp[t]] += v
    return out


_field = _jit(_eval_loop) if JIT else _eval_py


@_jit
def _rk4(z, h, comp, coef, exps, k1, k2, k3, k4, tmp):
    _field(z, comp, coef, exps, k1)
    tmp[:] = z + 0.5 * h * k1
    _field(tmp, comp, coef, exps, k2)
    tmp[:] = z + 0.5 * h * k2
    _field(tmp, comp, coef, exps, k3)
    tmp[:] = z + h * k3
    _field(tmp, comp, coef, exps, k4)
    return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@_jit
def _integrate(z0, t_end, comp, coef, exps, tol, h0):
    # step doubling; status 0 ok, 1 non-finite state, 2 step collapse
    n = z0.shape[0]
    z = z0.copy()
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    t = 0.0
    sgn = 1.0 if t_end >= 0 else -1.0
    span = abs(t_end)
    h = min(h0, span)
    steps = 0
    while t < span:
        if h < 1e-14 * max(1.0, span):
            return z, steps, 2
        if t + h > span:
            h = span - t
        full = _rk4(z, sgn * h, comp, coef, exps, k1, k2, k3, k4, tmp)
        half = _rk4(z, sgn * 0.5 * h, comp, coef, exps, k1, k2, k3, k4, tmp)
        half = _rk4(half, sgn * 0.5 * h, comp, coef, exps, k1, k2, k3, k4, tmp)
        if not np.all(np.isfinite(half)):
            return half, steps, 1
        err = 0.0
        scale = 1.0
        for i in range(n):
            d = abs(half[i] - full[i]) / 15.0
            if d > err:
                err = d
            a = abs(half[i])
            if a > scale:
                scale = a
        if err <= tol * scale:
            z = half + (half - full) / 15.0
            t += h
            steps += 1
            if err == 0.0:
                h *= 4.0
            else:
                h *= min(4.0, max(0.2, 0.9 * (tol * scale / err) ** 0.2))
        else:
            h *= max(0.1, 0.9 * (tol * scale / err) ** 0.2)
    return z, steps, 0


def reset():
    """Reload this module so a changed GRADRED_NO_NUMBA takes effect."""
    importlib.reload(sys.modules[__name__])


def using_numba() -> bool:
    return JIT


def eval_field(z, comp, coef, exps) -> np.ndarray:
    out = np.zeros(len(z))
    return _field(np.asarray(z, dtype=float), comp, coef, exps, out)


def integrate(z0, t_end, comp, coef, exps, tol=1e-12, h0=0.05):
    z, steps, status = _integrate(np.asarray(z0, dtype=float), float(t_end), comp, coef, exps, tol, h0)
    if status == 1:
        raise FlowError("flow escaped to infinity")
    if status == 2:
        raise FlowError("step size collapsed")
    return z, steps
