"""Classical orthogonal polynomials by three-term recurrence.

All evaluators accept scalars or numpy arrays for ``x``.  Jacobi polynomials
use the weight ``(1 - x)^a (1 + x)^b`` on [-1, 1]; Laguerre polynomials the
weight ``x^a e^{-x}``; Hermite polynomials are the physicists' ``H_n``.
"""
from __future__ import annotations

import math

import numpy as np


def _check_degree(n):
    if int(n) != n or n < 0:
        raise ValueError(f"degree must be a nonnegative integer, got {n}")


def _out(v):
    v = np.asarray(v, dtype=float)
    return v[()] if v.ndim == 0 else v


def jacobi(n: int, a: float, b: float, x):
    _check_degree(n)
    if not (a > -1 and b > -1):
        raise ValueError(f"Jacobi parameters must exceed -1, got a={a}, b={b}")
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return _out(p_prev)
    p = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0
    for m in range(2, n + 1):
        c = 2 * m + a + b
        a1 = 2.0 * m * (m + a + b) * (c - 2.0)
        a2 = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b)
        a3 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * c
        p_prev, p = p, (a2 * p - a3 * p_prev) / a1
    return _out(p)


def jacobi_deriv(n: int, a: float, b: float, x, k: int = 1):
    """k-th derivative of P_n^(a,b) via the parameter-shift identity."""
    _check_degree(n)
    if k > n:
        return _out(np.zeros_like(np.asarray(x, dtype=float)))
    coef = 1.0
    for j in range(1, k + 1):
        coef *= (n + a + b + j) / 2.0
    return _out(coef * np.asarray(jacobi(n - k, a + k, b + k, x)))


def laguerre(n: int, a: float, x):
    _check_degree(n)
    if not a > -1:
        raise ValueError(f"Laguerre parameter must exceed -1, got a={a}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("Laguerre argument must be nonnegative")
    l_prev = np.ones_like(x)
    if n == 0:
        return _out(l_prev)
    l = 1.0 + a - x
    for m in range(1, n):
        l_prev, l = l, ((2 * m + 1 + a - x) * l - (m + a) * l_prev) / (m + 1)
    return _out(l)


def laguerre_deriv(n: int, a: float, x, k: int = 1):
    _check_degree(n)
    if k > n:
        if np.any(np.asarray(x) < 0):
            raise ValueError("Laguerre argument must be nonnegative")
        return _out(np.zeros_like(np.asarray(x, dtype=float)))
    return _out((-1.0) ** k * np.asarray(laguerre(n - k, a + k, x)))


def hermite(n: int, x):
    _check_degree(n)
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return _out(h_prev)
    h = 2.0 * x
    for m in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * m * h_prev
    return _out(h)


def hermite_deriv(n: int, x, k: int = 1):
    _check_degree(n)
    if k > n:
        return _out(np.zeros_like(np.asarray(x, dtype=float)))
    coef = 2.0**k * math.factorial(n) / math.factorial(n - k)
    return _out(coef * np.asarray(hermite(n - k, x)))


def gamma_fn(x: float) -> float:
    if not x > 0:
        raise ValueError(f"gamma_fn is defined here for x > 0 only, got {x}")
    return math.gamma(x)
