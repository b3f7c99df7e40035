"""Pure-numpy implementations of the hot kernels.

Every function here has a numba twin in ``numba_impl`` with the same
signature and the same discrete definition; the backend is selected once
at import time (see ``fpk.kernels``).

Conventions: cell values live at centers x_i = -L + (i+1/2)h; face arrays
along an axis have one extra entry (face f sits between cells f-1 and f).
``periodic=True`` wraps faces (face 0 and face n are the same physical
face); ``periodic=False`` is the zero-flux mode where boundary faces carry
no flux and boundary gradients vanish (mirror ghost cell).
"""

from __future__ import annotations

import numpy as np


# ---------------------------------------------------------------------------
# 1d stencils

def grad_faces_1d(u, h, periodic):
    n = u.shape[0]
    g = np.empty(n + 1)
    g[1:n] = (u[1:] - u[:-1]) / h
    if periodic:
        g[0] = (u[0] - u[n - 1]) / h
        g[n] = g[0]
    else:
        g[0] = 0.0
        g[n] = 0.0
    return g


def div_faces_1d(F, h, periodic):
    n = F.shape[0] - 1
    Fl = F[0:n].copy()
    Fr = F[1:n + 1].copy()
    if periodic:
        Fl[0] = F[0]
        Fr[n - 1] = F[0]
    else:
        Fl[0] = 0.0
        Fr[n - 1] = 0.0
    return (Fr - Fl) / h


def laplacian_1d(u, h, periodic):
    return div_faces_1d(grad_faces_1d(u, h, periodic), h, periodic)


def faces_centered_1d(c, periodic):
    n = c.shape[0]
    F = np.zeros(n + 1)
    F[1:n] = 0.5 * (c[:-1] + c[1:])
    if periodic:
        F[0] = 0.5 * (c[n - 1] + c[0])
        F[n] = F[0]
    return F


def faces_upwind_1d(c, w, periodic):
    """Donor-cell face values: w[f] >= 0 takes the left cell, else the right."""
    n = c.shape[0]
    F = np.zeros(n + 1)
    take_left = w[1:n] >= 0.0
    F[1:n] = np.where(take_left, c[:-1], c[1:])
    if periodic:
        F[0] = c[n - 1] if w[0] >= 0.0 else c[0]
        F[n] = F[0]
    return F


# ---------------------------------------------------------------------------
# 2d stencils (values shaped (n0, n1); axis-0 faces (n0+1, n1), axis-1 (n0, n1+1))

def grad_faces_2d(u, h, periodic):
    n0, n1 = u.shape
    g0 = np.zeros((n0 + 1, n1))
    g1 = np.zeros((n0, n1 + 1))
    g0[1:n0, :] = (u[1:, :] - u[:-1, :]) / h
    g1[:, 1:n1] = (u[:, 1:] - u[:, :-1]) / h
    if periodic:
        g0[0, :] = (u[0, :] - u[n0 - 1, :]) / h
        g0[n0, :] = g0[0, :]
        g1[:, 0] = (u[:, 0] - u[:, n1 - 1]) / h
        g1[:, n1] = g1[:, 0]
    return g0, g1


def div_faces_2d(F0, F1, h, periodic):
    n0 = F0.shape[0] - 1
    n1 = F1.shape[1] - 1
    A0l = F0[0:n0, :].copy()
    A0r = F0[1:n0 + 1, :].copy()
    A1l = F1[:, 0:n1].copy()
    A1r = F1[:, 1:n1 + 1].copy()
    if periodic:
        A0l[0, :] = F0[0, :]
        A0r[n0 - 1, :] = F0[0, :]
        A1l[:, 0] = F1[:, 0]
        A1r[:, n1 - 1] = F1[:, 0]
    else:
        A0l[0, :] = 0.0
        A0r[n0 - 1, :] = 0.0
        A1l[:, 0] = 0.0
        A1r[:, n1 - 1] = 0.0
    return (A0r - A0l) / h + (A1r - A1l) / h


def laplacian_2d(u, h, periodic):
    g0, g1 = grad_faces_2d(u, h, periodic)
    return div_faces_2d(g0, g1, h, periodic)


def faces_centered_2d(c, axis, periodic):
    n0, n1 = c.shape
    if axis == 0:
        F = np.zeros((n0 + 1, n1))
        F[1:n0, :] = 0.5 * (c[:-1, :] + c[1:, :])
        if periodic:
            F[0, :] = 0.5 * (c[n0 - 1, :] + c[0, :])
            F[n0, :] = F[0, :]
    else:
        F = np.zeros((n0, n1 + 1))
        F[:, 1:n1] = 0.5 * (c[:, :-1] + c[:, 1:])
        if periodic:
            F[:, 0] = 0.5 * (c[:, n1 - 1] + c[:, 0])
            F[:, n1] = F[:, 0]
    return F


def faces_upwind_2d(c, w, axis, periodic):
    n0, n1 = c.shape
    if axis == 0:
        F = np.zeros((n0 + 1, n1))
        F[1:n0, :] = np.where(w[1:n0, :] >= 0.0, c[:-1, :], c[1:, :])
        if periodic:
            F[0, :] = np.where(w[0, :] >= 0.0, c[n0 - 1, :], c[0, :])
            F[n0, :] = F[0, :]
    else:
        F = np.zeros((n0, n1 + 1))
        F[:, 1:n1] = np.where(w[:, 1:n1] >= 0.0, c[:, :-1], c[:, 1:])
        if periodic:
            F[:, 0] = np.where(w[:, 0] >= 0.0, c[:, n1 - 1], c[:, 0])
            F[:, n1] = F[:, 0]
    return F


# ---------------------------------------------------------------------------
# Helmholtz apply + conjugate gradients (zero-flux / periodic stencil)

def helmholtz_apply_1d(y, eps, h, periodic):
    return eps * y - laplacian_1d(y, h, periodic)


def helmholtz_apply_2d(y, eps, h, periodic):
    return eps * y - laplacian_2d(y, h, periodic)


def _cg(apply_A, f, diag, rtol, maxiter):
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
        Ap = apply_A(p)
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


def cg_helmholtz_1d(f, eps, h, periodic, rtol, maxiter):
    diag = eps + 2.0 / (h * h)
    return _cg(lambda p: helmholtz_apply_1d(p, eps, h, periodic), f, diag, rtol, maxiter)


def cg_helmholtz_2d(f, eps, h, periodic, rtol, maxiter):
    diag = eps + 4.0 / (h * h)
    return _cg(lambda p: helmholtz_apply_2d(p, eps, h, periodic), f, diag, rtol, maxiter)


# ---------------------------------------------------------------------------
# particle kernels

def interp_1d(values, xs, L, h):
    """Linear interpolation of cell-centered values; clamped outside the centers."""
    n = values.shape[0]
    s = (xs + L) / h - 0.5
    i0 = np.floor(s).astype(np.int64)
    frac = s - i0
    i0 = np.clip(i0, 0, n - 1)
    i1 = np.clip(i0 + 1, 0, n - 1)
    frac = np.clip(frac, 0.0, 1.0)
    return (1.0 - frac) * values[i0] + frac * values[i1]


def interp_2d(values, xs0, xs1, L, h):
    n0, n1 = values.shape
    s0 = (xs0 + L) / h - 0.5
    s1 = (xs1 + L) / h - 0.5
    i0 = np.clip(np.floor(s0).astype(np.int64), 0, n0 - 1)
    j0 = np.clip(np.floor(s1).astype(np.int64), 0, n1 - 1)
    f0 = np.clip(s0 - np.floor(s0), 0.0, 1.0)
    f1 = np.clip(s1 - np.floor(s1), 0.0, 1.0)
    f0 = np.where(s0 < 0, 0.0, np.where(s0 > n0 - 1, 1.0, f0))
    f1 = np.where(s1 < 0, 0.0, np.where(s1 > n1 - 1, 1.0, f1))
    i1 = np.clip(i0 + 1, 0, n0 - 1)
    j1 = np.clip(j0 + 1, 0, n1 - 1)
    return ((1 - f0) * (1 - f1) * values[i0, j0]
            + f0 * (1 - f1) * values[i1, j0]
            + (1 - f0) * f1 * values[i0, j1]
            + f0 * f1 * values[i1, j1])


def histogram_1d(xs, n, L):
    """Counts per cell; positions outside [-L, L] are dropped."""
    h = 2.0 * L / n
    idx = np.floor((xs + L) / h).astype(np.int64)
    ok = (idx >= 0) & (idx < n)
    # particles exactly at +L belong to the last cell
    at_top = idx == n
    idx = np.where(at_top, n - 1, idx)
    ok |= at_top
    return np.bincount(idx[ok], minlength=n).astype(np.float64)


def histogram_2d(xs0, xs1, n, L):
    h = 2.0 * L / n
    i = np.floor((xs0 + L) / h).astype(np.int64)
    j = np.floor((xs1 + L) / h).astype(np.int64)
    i = np.where(i == n, n - 1, i)
    j = np.where(j == n, n - 1, j)
    ok = (i >= 0) & (i < n) & (j >= 0) & (j < n)
    flat = np.bincount(i[ok] * n + j[ok], minlength=n * n).astype(np.float64)
    return flat.reshape(n, n)


def reflect_into_box(xs, L):
    """Fold positions into [-L, L] by specular reflection (period-4L triangle wave)."""
    y = np.mod(xs + L, 4.0 * L)
    y = np.where(y > 2.0 * L, 4.0 * L - y, y)
    return y - L
