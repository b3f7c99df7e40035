"""Discrete function spaces on a truncated box [-L, L]^d (d = 1 or 2).

Cell-centered fields, conservative face-based difference operators, the
Helmholtz solve (eps*I - Lap)^{-1}, and the weighted H^{-1} inner product
<u, v> = sum((eps*I - Lap)^{-1}u * v) * h^d built on top of it.

The Laplacian is div(grad(.)) compositionally, so summation by parts is
exact: periodic mode gives exact discrete adjointness, zero-flux mode
conserves totals exactly (boundary faces carry nothing).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
import scipy.fft

from . import kernels
from .errors import SolverDiverged

Boundary = Literal["periodic", "zero-flux"]


@dataclass(frozen=True)
class Grid:
    d: int
    L: float
    n: int
    boundary: Boundary = "zero-flux"

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ValueError(f"d must be 1 or 2, got {self.d}")
        if self.n < 4:
            raise ValueError(f"need n >= 4 cells per axis, got {self.n}")
        if not self.L > 0:
            raise ValueError(f"half-width L must be positive, got {self.L}")
        if self.boundary not in ("periodic", "zero-flux"):
            raise ValueError(f"unknown boundary mode {self.boundary!r}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.n

    @property
    def periodic(self) -> bool:
        return self.boundary == "periodic"

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.d

    @property
    def size(self) -> int:
        return self.n**self.d

    @property
    def volume(self) -> float:
        return (2.0 * self.L) ** self.d

    def centers(self) -> np.ndarray:
        """Cell centers along one axis: x_i = -L + (i + 1/2) h."""
        return -self.L + (np.arange(self.n) + 0.5) * self.h

    def meshes(self) -> np.ndarray:
        """Coordinate arrays stacked on axis 0, shape (d,) + self.shape."""
        c = self.centers()
        if self.d == 1:
            return c[None, :]
        X0, X1 = np.meshgrid(c, c, indexing="ij")
        return np.stack([X0, X1])


@dataclass
class ScalarField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.shape != self.grid.shape:
            raise ValueError(f"values shape {self.values.shape} != grid shape {self.grid.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite values")

    @classmethod
    def zeros(cls, grid: Grid) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid: Grid, c: float) -> "ScalarField":
        return cls(grid, np.full(grid.shape, float(c)))

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable) -> "ScalarField":
        """Sample fn at cell centers; fn takes d coordinate arrays."""
        return cls(grid, np.asarray(fn(*grid.meshes()), dtype=np.float64))

    def copy(self) -> "ScalarField":
        return ScalarField(self.grid, self.values.copy())


@dataclass
class VectorField:
    """Face-based flux components; component k has one extra entry along axis k."""

    grid: Grid
    faces: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.faces) != self.grid.d:
            raise ValueError("one face array per dimension required")
        n = self.grid.n
        for ax, F in enumerate(self.faces):
            want = tuple(n + 1 if k == ax else n for k in range(self.grid.d))
            if F.shape != want:
                raise ValueError(f"face array {ax} has shape {F.shape}, expected {want}")


# ---------------------------------------------------------------------------
# difference operators


def gradient_faces(u: ScalarField) -> VectorField:
    g = u.grid
    if g.d == 1:
        return VectorField(g, (kernels.grad_faces_1d(u.values, g.h, g.periodic),))
    g0, g1 = kernels.grad_faces_2d(u.values, g.h, g.periodic)
    return VectorField(g, (g0, g1))


def divergence(F: VectorField) -> ScalarField:
    """Per-cell difference of face fluxes. Boundary faces contribute nothing
    in zero-flux mode; periodic mode wraps, so totals always telescope to 0."""
    g = F.grid
    if g.d == 1:
        return ScalarField(g, kernels.div_faces_1d(F.faces[0], g.h, g.periodic))
    return ScalarField(g, kernels.div_faces_2d(F.faces[0], F.faces[1], g.h, g.periodic))


def laplacian(u: ScalarField) -> ScalarField:
    g = u.grid
    if g.d == 1:
        return ScalarField(g, kernels.laplacian_1d(u.values, g.h, g.periodic))
    return ScalarField(g, kernels.laplacian_2d(u.values, g.h, g.periodic))


def centered_flux(grid: Grid, components: list[np.ndarray]) -> VectorField:
    """Face values by arithmetic averaging of the adjacent cell values."""
    if grid.d == 1:
        return VectorField(grid, (kernels.faces_centered_1d(components[0], grid.periodic),))
    return VectorField(grid, tuple(
        kernels.faces_centered_2d(components[ax], ax, grid.periodic) for ax in range(2)))


def upwind_flux(grid: Grid, components: list[np.ndarray], wind: VectorField) -> VectorField:
    """Donor-cell face values: the sign of the face wind picks the donor."""
    if grid.d == 1:
        return VectorField(grid, (
            kernels.faces_upwind_1d(components[0], wind.faces[0], grid.periodic),))
    return VectorField(grid, tuple(
        kernels.faces_upwind_2d(components[ax], wind.faces[ax], ax, grid.periodic)
        for ax in range(2)))


def face_inner(A: VectorField, B: VectorField) -> float:
    """Inner product over physically distinct faces, weighted by h^d.

    Periodic face arrays store the wrap face twice (index 0 and n); only
    the first copy is counted.
    """
    g = A.grid
    total = 0.0
    for ax in range(g.d):
        Fa, Fb = A.faces[ax], B.faces[ax]
        if g.periodic:
            sl = tuple(slice(0, g.n) if k == ax else slice(None) for k in range(g.d))
            Fa, Fb = Fa[sl], Fb[sl]
        total += float(np.sum(Fa * Fb))
    return total * g.h**g.d


# ---------------------------------------------------------------------------
# Helmholtz solve and the H^{-1} geometry


@functools.lru_cache(maxsize=32)
def _spectral_symbol(grid: Grid) -> np.ndarray:
    """Eigenvalues of -Lap for the grid's own stencil, in transform order."""
    n, h = grid.n, grid.h
    if grid.periodic:
        k = np.arange(n)
        s = (2.0 / h**2) * (1.0 - np.cos(2.0 * np.pi * k / n))
    else:
        k = np.arange(n)
        s = (2.0 / h**2) * (1.0 - np.cos(np.pi * k / n))
    if grid.d == 1:
        return s
    return s[:, None] + s[None, :]


def helmholtz_solve(eps: float, f: ScalarField, method: str = "auto",
                    rtol: float = 1e-10, maxiter: int | None = None) -> ScalarField:
    """Solve (eps*I - Lap) y = f for the grid's stencil.

    'auto' uses the exact spectral factorization (FFT on periodic grids,
    DCT-II on zero-flux grids, which diagonalizes the mirror stencil).
    'cg' runs diagonally preconditioned conjugate gradients instead and is
    kept as an independent route; it stops at ||eps*y - Lap y - f||_2 <=
    rtol*||f||_2 and raises SolverDiverged past maxiter.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    g = f.grid
    if method in ("auto", "spectral"):
        s = _spectral_symbol(g)
        if g.periodic:
            fh = np.fft.fftn(f.values)
            y = np.real(np.fft.ifftn(fh / (eps + s)))
        else:
            fh = scipy.fft.dctn(f.values, type=2, norm="ortho")
            y = scipy.fft.idctn(fh / (eps + s), type=2, norm="ortho")
        return ScalarField(g, y)
    if method != "cg":
        raise ValueError(f"unknown method {method!r}")
    if maxiter is None:
        maxiter = 10 * g.size
    if g.d == 1:
        y, iters, ok = kernels.cg_helmholtz_1d(f.values, eps, g.h, g.periodic, rtol, maxiter)
    else:
        y, iters, ok = kernels.cg_helmholtz_2d(f.values, eps, g.h, g.periodic, rtol, maxiter)
    if not ok:
        raise SolverDiverged(f"helmholtz cg: no convergence in {maxiter} iterations")
    return ScalarField(g, y)


def h_neg1_inner(eps: float, u: ScalarField, v: ScalarField) -> float:
    """<u, v> = sum((eps*I - Lap)^{-1} u * v) h^d; symmetric, positive definite."""
    y = helmholtz_solve(eps, u)
    return float(np.sum(y.values * v.values)) * u.grid.h**u.grid.d


def h_neg1_norm(eps: float, u: ScalarField) -> float:
    return float(np.sqrt(max(h_neg1_inner(eps, u, u), 0.0)))


# ---------------------------------------------------------------------------
# norms


@dataclass(frozen=True)
class FieldNorms:
    mass: float
    l1: float
    l2: float
    linf: float
    h1_seminorm: float


def field_norms(u: ScalarField) -> FieldNorms:
    hd = u.grid.h**u.grid.d
    v = u.values
    grad = gradient_faces(u)
    return FieldNorms(
        mass=float(np.sum(v)) * hd,
        l1=float(np.sum(np.abs(v))) * hd,
        l2=float(np.sqrt(np.sum(v * v) * hd)),
        linf=float(np.max(np.abs(v))) if v.size else 0.0,
        h1_seminorm=float(np.sqrt(max(face_inner(grad, grad), 0.0))),
    )


def l1_distance(u: ScalarField, v: ScalarField) -> float:
    return float(np.sum(np.abs(u.values - v.values))) * u.grid.h**u.grid.d


def l2_distance(u: ScalarField, v: ScalarField) -> float:
    d = u.values - v.values
    return float(np.sqrt(np.sum(d * d) * u.grid.h**u.grid.d))
