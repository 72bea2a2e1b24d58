"""Truncated power-series arithmetic on plain coefficient arrays.

A series is a 1-D numpy array ``c`` with ``c[k]`` the coefficient of x^k;
all operations truncate at the array length.  Only what the virial
inversion needs: product, exponential, composition and reversion of a
series with zero constant term.
"""

from __future__ import annotations

import numpy as np


def ps_trim(c, order: int) -> np.ndarray:
    out = np.zeros(order + 1)
    n = min(len(c), order + 1)
    out[:n] = c[:n]
    return out


def ps_mul(a, b, order: int) -> np.ndarray:
    return ps_trim(np.convolve(a, b), order)


def ps_exp(a, order: int) -> np.ndarray:
    """exp of a series with a[0] == 0, via n*f_n = sum_k k*a_k*f_{n-k}."""
    a = ps_trim(a, order)
    if a[0] != 0.0:
        raise ValueError("ps_exp needs zero constant term")
    f = np.zeros(order + 1)
    f[0] = 1.0
    for n in range(1, order + 1):
        acc = 0.0
        for k in range(1, n + 1):
            acc += k * a[k] * f[n - k]
        f[n] = acc / n
    return f


def ps_compose(outer, inner, order: int) -> np.ndarray:
    """outer(inner(x)) with inner[0] == 0, by Horner on the outer series."""
    inner = ps_trim(inner, order)
    if inner[0] != 0.0:
        raise ValueError("composition needs inner constant term 0")
    outer = ps_trim(outer, order)
    result = np.zeros(order + 1)
    for c in outer[::-1]:
        result = ps_mul(result, inner, order)
        result[0] += c
    return result


def ps_revert(a, order: int) -> np.ndarray:
    """Compositional inverse of a series with a[0] = 0, a[1] != 0.

    Fixed-point iteration g <- (x - (a(g) - a1*g))/a1 gains one correct
    order per pass.
    """
    a = ps_trim(a, order)
    if a[0] != 0.0 or a[1] == 0.0:
        raise ValueError("reversion needs a[0] = 0 and a[1] != 0")
    a1 = a[1]
    tail = a.copy()
    tail[1] = 0.0
    g = np.zeros(order + 1)
    g[1] = 1.0 / a1
    for _ in range(order):
        composed = ps_compose(tail, g, order)
        g = -composed / a1
        g[1] += 1.0 / a1
    return g
