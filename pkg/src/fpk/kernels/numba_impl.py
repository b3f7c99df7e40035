"""Numba-jitted twins of the kernels in ``numpy_impl``.

Same names, same signatures, same discrete definitions. fastmath stays off
so both backends agree to rounding.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def grad_faces_1d(u, h, periodic):
    n = u.shape[0]
    g = np.empty(n + 1)
    for i in range(1, n):
        g[i] = (u[i] - u[i - 1]) / h
    if periodic:
        g[0] = (u[0] - u[n - 1]) / h
        g[n] = g[0]
    else:
        g[0] = 0.0
        g[n] = 0.0
    return g


@njit(cache=True)
def div_faces_1d(F, h, periodic):
    n = F.shape[0] - 1
    out = np.empty(n)
    for i in range(n):
        Fl = F[i]
        Fr = F[i + 1]
        if periodic:
            if i == n - 1:
                Fr = F[0]
        else:
            if i == 0:
                Fl = 0.0
            if i == n - 1:
                Fr = 0.0
        out[i] = (Fr - Fl) / h
    return out


@njit(cache=True)
def laplacian_1d(u, h, periodic):
    return div_faces_1d(grad_faces_1d(u, h, periodic), h, periodic)


@njit(cache=True)
def faces_centered_1d(c, periodic):
    n = c.shape[0]
    F = np.zeros(n + 1)
    for i in range(1, n):
        F[i] = 0.5 * (c[i - 1] + c[i])
    if periodic:
        F[0] = 0.5 * (c[n - 1] + c[0])
        F[n] = F[0]
    return F


@njit(cache=True)
def faces_upwind_1d(c, w, periodic):
    n = c.shape[0]
    F = np.zeros(n + 1)
    for i in range(1, n):
        F[i] = c[i - 1] if w[i] >= 0.0 else c[i]
    if periodic:
        F[0] = c[n - 1] if w[0] >= 0.0 else c[0]
        F[n] = F[0]
    return F


@njit(cache=True)
def grad_faces_2d(u, h, periodic):
    n0, n1 = u.shape
    g0 = np.zeros((n0 + 1, n1))
    g1 = np.zeros((n0, n1 + 1))
    for i in range(1, n0):
        for j in range(n1):
            g0[i, j] = (u[i, j] - u[i - 1, j]) / h
    for i in range(n0):
        for j in range(1, n1):
            g1[i, j] = (u[i, j] - u[i, j - 1]) / h
    if periodic:
        for j in range(n1):
            g0[0, j] = (u[0, j] - u[n0 - 1, j]) / h
            g0[n0, j] = g0[0, j]
        for i in range(n0):
            g1[i, 0] = (u[i, 0] - u[i, n1 - 1]) / h
            g1[i, n1] = g1[i, 0]
    return g0, g1


@njit(cache=True)
def div_faces_2d(F0, F1, h, periodic):
    n0 = F0.shape[0] - 1
    n1 = F1.shape[1] - 1
    out = np.empty((n0, n1))
    for i in range(n0):
        for j in range(n1):
            a0l = F0[i, j]
            a0r = F0[i + 1, j]
            a1l = F1[i, j]
            a1r = F1[i, j + 1]
            if periodic:
                if i == n0 - 1:
                    a0r = F0[0, j]
                if j == n1 - 1:
                    a1r = F1[i, 0]
            else:
                if i == 0:
                    a0l = 0.0
                if i == n0 - 1:
                    a0r = 0.0
                if j == 0:
                    a1l = 0.0
                if j == n1 - 1:
                    a1r = 0.0
            out[i, j] = (a0r - a0l) / h + (a1r - a1l) / h
    return out


@njit(cache=True)
def laplacian_2d(u, h, periodic):
    g0, g1 = grad_faces_2d(u, h, periodic)
    return div_faces_2d(g0, g1, h, periodic)


@njit(cache=True)
def faces_centered_2d(c, axis, periodic):
    n0, n1 = c.shape
    if axis == 0:
        F = np.zeros((n0 + 1, n1))
        for i in range(1, n0):
            for j in range(n1):
                F[i, j] = 0.5 * (c[i - 1, j] + c[i, j])
        if periodic:
            for j in range(n1):
                F[0, j] = 0.5 * (c[n0 - 1, j] + c[0, j])
                F[n0, j] = F[0, j]
        return F
    F = np.zeros((n0, n1 + 1))
    for i in range(n0):
        for j in range(1, n1):
            F[i, j] = 0.5 * (c[i, j - 1] + c[i, j])
    if periodic:
        for i in range(n0):
            F[i, 0] = 0.5 * (c[i, n1 - 1] + c[i, 0])
            F[i, n1] = F[i, 0]
    return F


@njit(cache=True)
def faces_upwind_2d(c, w, axis, periodic):
    n0, n1 = c.shape
    if axis == 0:
        F = np.zeros((n0 + 1, n1))
        for i in range(1, n0):
            for j in range(n1):
                F[i, j] = c[i - 1, j] if w[i, j] >= 0.0 else c[i, j]
        if periodic:
            for j in range(n1):
                F[0, j] = c[n0 - 1, j] if w[0, j] >= 0.0 else c[0, j]
                F[n0, j] = F[0, j]
        return F
    F = np.zeros((n0, n1 + 1))
    for i in range(n0):
        for j in range(1, n1):
            F[i, j] = c[i, j - 1] if w[i, j] >= 0.0 else c[i, j]
    if periodic:
        for i in range(n0):
            F[i, 0] = c[i, n1 - 1] if w[i, 0] >= 0.0 else c[i, 0]
            F[i, n1] = F[i, 0]
    return F


@njit(cache=True)
def helmholtz_apply_1d(y, eps, h, periodic):
    return eps * y - laplacian_1d(y, h, periodic)


@njit(cache=True)
def helmholtz_apply_2d(y, eps, h, periodic):
    return eps * y - laplacian_2d(y, h, periodic)


@njit(cache=True)
def cg_helmholtz_1d(f, eps, h, periodic, rtol, maxiter):
    diag = eps + 2.0 / (h * h)
    fnorm = np.sqrt(np.sum(f * f))
    y = np.zeros_like(f)
    if fnorm == 0.0:
        return y, 0, True
    r = f.copy()
    z = r / diag
    p = z.copy()
    rz = np.sum(r * z)
    tol = rtol * fnorm
    for it in range(1, maxiter + 1):
        Ap = helmholtz_apply_1d(p, eps, h, periodic)
        alpha = rz / np.sum(p * Ap)
        y += alpha * p
        r -= alpha * Ap
        if np.sqrt(np.sum(r * r)) <= tol:
            return y, it, True
        z = r / diag
        rz_new = np.sum(r * z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    return y, maxiter, False


@njit(cache=True)
def cg_helmholtz_2d(f, eps, h, periodic, rtol, maxiter):
    diag = eps + 4.0 / (h * h)
    fnorm = np.sqrt(np.sum(f * f))
    y = np.zeros_like(f)
    if fnorm == 0.0:
        return y, 0, True
    r = f.copy()
    z = r / diag
    p = z.copy()
    rz = np.sum(r * z)
    tol = rtol * fnorm
    for it in range(1, maxiter + 1):
        Ap = helmholtz_apply_2d(p, eps, h, periodic)
        alpha = rz / np.sum(p * Ap)
        y += alpha * p
        r -= alpha * Ap
        if np.sqrt(np.sum(r * r)) <= tol:
            return y, it, True
        z = r / diag
        rz_new = np.sum(r * z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    return y, maxiter, False


@njit(cache=True)
def interp_1d(values, xs, L, h):
    n = values.shape[0]
    out = np.empty(xs.shape[0])
    for k in range(xs.shape[0]):
        s = (xs[k] + L) / h - 0.5
        i0 = int(np.floor(s))
        frac = s - i0
        if i0 < 0:
            i0 = 0
            frac = 0.0
        elif i0 > n - 1:
            i0 = n - 1
            frac = 1.0
        i1 = i0 + 1
        if i1 > n - 1:
            i1 = n - 1
        if frac < 0.0:
            frac = 0.0
        elif frac > 1.0:
            frac = 1.0
        out[k] = (1.0 - frac) * values[i0] + frac * values[i1]
    return out


@njit(cache=True)
def interp_2d(values, xs0, xs1, L, h):
    n0, n1 = values.shape
    out = np.empty(xs0.shape[0])
    for k in range(xs0.shape[0]):
        s0 = (xs0[k] + L) / h - 0.5
        s1 = (xs1[k] + L) / h - 0.5
        i0 = int(np.floor(s0))
        j0 = int(np.floor(s1))
        f0 = s0 - i0
        f1 = s1 - j0
        if s0 < 0.0:
            f0 = 0.0
        elif s0 > n0 - 1:
            f0 = 1.0
        if s1 < 0.0:
            f1 = 0.0
        elif s1 > n1 - 1:
            f1 = 1.0
        if i0 < 0:
            i0 = 0
        elif i0 > n0 - 1:
            i0 = n0 - 1
        if j0 < 0:
            j0 = 0
        elif j0 > n1 - 1:
            j0 = n1 - 1
        i1 = min(i0 + 1, n0 - 1)
        j1 = min(j0 + 1, n1 - 1)
        if f0 < 0.0:
            f0 = 0.0
        elif f0 > 1.0:
            f0 = 1.0
        if f1 < 0.0:
            f1 = 0.0
        elif f1 > 1.0:
            f1 = 1.0
        out[k] = ((1 - f0) * (1 - f1) * values[i0, j0]
                  + f0 * (1 - f1) * values[i1, j0]
                  + (1 - f0) * f1 * values[i0, j1]
                  + f0 * f1 * values[i1, j1])
    return out


@njit(cache=True)
def histogram_1d(xs, n, L):
    h = 2.0 * L / n
    counts = np.zeros(n)
    for k in range(xs.shape[0]):
        i = int(np.floor((xs[k] + L) / h))
        if i == n:
            i = n - 1
        if 0 <= i < n:
            counts[i] += 1.0
    return counts


@njit(cache=True)
def histogram_2d(xs0, xs1, n, L):
    h = 2.0 * L / n
    counts = np.zeros((n, n))
    for k in range(xs0.shape[0]):
        i = int(np.floor((xs0[k] + L) / h))
        j = int(np.floor((xs1[k] + L) / h))
        if i == n:
            i = n - 1
        if j == n:
            j = n - 1
        if 0 <= i < n and 0 <= j < n:
            counts[i, j] += 1.0
    return counts


@njit(cache=True)
def reflect_into_box(xs, L):
    out = np.empty_like(xs)
    for k in range(xs.shape[0]):
        y = (xs[k] + L) % (4.0 * L)
        if y > 2.0 * L:
            y = 4.0 * L - y
        out[k] = y - L
    return out
