"""Uniform periodic fields on the flat 2-torus [0, 2pi)^2 with spectral calculus.

Fields are sampled on an n-by-n grid (n a power of two) and carry a lazily
computed, cached array of Fourier coefficients.  The normalization is

    coeff[k] = fft2(values)[k] / n**2,

so a field is the trigonometric polynomial  sum_k coeff[k] * exp(i k.x)  and
Parseval reads  (cell volume) * sum(values**2) == (2pi)**2 * sum(|coeff|**2).

All operations are pure: they return new fields and never mutate inputs, so
they are safe to call concurrently on distinct inputs.  The coefficient cache
is filled once under a lock.
"""

from __future__ import annotations

import csv
import threading
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

TWO_PI = 2.0 * np.pi

FIELD_CSV_HEADER = ("x1", "x2", "value")


@dataclass(frozen=True)
class GridSpec:
    """Uniform n x n discretization of the 2-torus of side 2pi."""

    points_per_axis: int
    domain_length: float = TWO_PI
    dimensions: int = 2

    def __post_init__(self) -> None:
        n = self.points_per_axis
        if n < 8 or (n & (n - 1)) != 0:
            raise ValueError(f"points_per_axis must be a power of two >= 8, got {n}")
        if abs(self.domain_length - TWO_PI) > 1e-15 * TWO_PI:
            raise ValueError("domain_length is fixed at 2pi per axis")
        if self.dimensions != 2:
            raise ValueError("only 2D grids are supported")

    @property
    def spacing(self) -> float:
        return self.domain_length / self.points_per_axis

    @property
    def cell_volume(self) -> float:
        return self.spacing**2

    @property
    def shape(self) -> tuple[int, int]:
        return (self.points_per_axis, self.points_per_axis)

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid (X1, X2) with values[i, j] sampled at (X1[i, j], X2[i, j])."""
        x = np.arange(self.points_per_axis) * self.spacing
        return np.meshgrid(x, x, indexing="ij")

    def wavenumbers(self) -> tuple[np.ndarray, np.ndarray]:
        """Integer wavenumber meshes (k1, k2) matching fft2 layout."""
        return _wavenumbers(self.points_per_axis)


@lru_cache(maxsize=32)
def _wavenumbers(n: int) -> tuple[np.ndarray, np.ndarray]:
    k = np.fft.fftfreq(n, d=1.0 / n)
    k1 = np.repeat(k[:, None], n, axis=1)
    k2 = np.repeat(k[None, :], n, axis=0)
    for a in (k1, k2):
        a.setflags(write=False)
    return k1, k2


@lru_cache(maxsize=32)
def _wavenumber_norm(n: int) -> np.ndarray:
    k1, k2 = _wavenumbers(n)
    kk = np.sqrt(k1**2 + k2**2)
    kk.setflags(write=False)
    return kk


def _as_valid_values(grid: GridSpec, values: np.ndarray) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != grid.shape:
        raise ValueError(f"values shape {arr.shape} does not match grid {grid.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("field values must be finite (found nan or inf)")
    arr = np.ascontiguousarray(arr).copy()
    arr.setflags(write=False)
    return arr


class ScalarField:
    """Real scalar field sampled on a GridSpec, immutable after construction."""

    __slots__ = ("grid", "values", "_spectral", "_lock")

    def __init__(self, grid: GridSpec, values: np.ndarray):
        self.grid = grid
        self.values = _as_valid_values(grid, values)
        self._spectral: np.ndarray | None = None
        self._lock = threading.Lock()

    @classmethod
    def from_function(cls, grid: GridSpec, fn) -> "ScalarField":
        x1, x2 = grid.coordinates()
        return cls(grid, fn(x1, x2))

    @classmethod
    def zeros(cls, grid: GridSpec) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape))

    @property
    def spectral(self) -> np.ndarray:
        """Cached Fourier coefficients fft2(values) / n**2 (compute-once)."""
        if self._spectral is None:
            with self._lock:
                if self._spectral is None:
                    coeff = np.fft.fft2(self.values) / self.values.size
                    coeff.setflags(write=False)
                    self._spectral = coeff
        return self._spectral

    def mean(self) -> float:
        return float(self.values.mean())

    # small arithmetic surface used by tests and demos
    def __add__(self, other):
        if isinstance(other, ScalarField):
            _require_same_grid(self.grid, other.grid)
            return ScalarField(self.grid, self.values + other.values)
        return ScalarField(self.grid, self.values + float(other))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ScalarField):
            _require_same_grid(self.grid, other.grid)
            return ScalarField(self.grid, self.values - other.values)
        return ScalarField(self.grid, self.values - float(other))

    def __mul__(self, other):
        if isinstance(other, ScalarField):
            _require_same_grid(self.grid, other.grid)
            return ScalarField(self.grid, self.values * other.values)
        return ScalarField(self.grid, self.values * float(other))

    __rmul__ = __mul__

    def __neg__(self):
        return ScalarField(self.grid, -self.values)

    def __repr__(self) -> str:
        n = self.grid.points_per_axis
        return f"ScalarField({n}x{n}, mean={self.mean():.3g})"


@dataclass(frozen=True)
class VectorField:
    """Pair of scalar components on a shared grid."""

    u1: ScalarField
    u2: ScalarField

    def __post_init__(self) -> None:
        _require_same_grid(self.u1.grid, self.u2.grid)

    @property
    def grid(self) -> GridSpec:
        return self.u1.grid

    @classmethod
    def from_values(cls, grid: GridSpec, v1: np.ndarray, v2: np.ndarray) -> "VectorField":
        return cls(ScalarField(grid, v1), ScalarField(grid, v2))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.u1 - other.u1, self.u2 - other.u2)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.u1 + other.u1, self.u2 + other.u2)

    def max_speed(self) -> float:
        return float(np.sqrt(self.u1.values**2 + self.u2.values**2).max())


def _require_same_grid(a: GridSpec, b: GridSpec) -> None:
    if a != b:
        raise ValueError("fields live on different grids")


def forward_transform(field: ScalarField) -> np.ndarray:
    """Fourier coefficients of the field (normalized by n**2)."""
    return field.spectral


def inverse_transform(grid: GridSpec, coeff: np.ndarray) -> ScalarField:
    """Field whose Fourier coefficients are `coeff` (real part taken)."""
    n = grid.points_per_axis
    values = np.real(np.fft.ifft2(np.asarray(coeff) * n * n))
    return ScalarField(grid, values)


def _apply_multiplier(field: ScalarField, mult: np.ndarray) -> ScalarField:
    return inverse_transform(field.grid, field.spectral * mult)


@lru_cache(maxsize=32)
def _derivative_multiplier(n: int, axis: int) -> np.ndarray:
    # Odd multiplier: the unpaired Nyquist row is zeroed so real fields map
    # to real fields exactly (its sine samples vanish on the grid anyway).
    k1, k2 = _wavenumbers(n)
    mult = 1j * (k1 if axis == 1 else k2).astype(complex)
    mult[n // 2, :] = 0.0
    mult[:, n // 2] = 0.0
    mult.setflags(write=False)
    return mult


@lru_cache(maxsize=32)
def _riesz_multiplier(n: int, axis: int) -> np.ndarray:
    k1, k2 = _wavenumbers(n)
    kk = _wavenumber_norm(n).copy()
    kk[0, 0] = 1.0
    mult = -1j * (k1 if axis == 1 else k2) / kk
    mult[0, 0] = 0.0
    mult[n // 2, :] = 0.0
    mult[:, n // 2] = 0.0
    mult.setflags(write=False)
    return mult


def derivative(field: ScalarField, axis: int) -> ScalarField:
    """Spectral partial derivative along axis 1 or 2."""
    if axis not in (1, 2):
        raise ValueError(f"axis must be 1 or 2, got {axis}")
    return _apply_multiplier(field, _derivative_multiplier(field.grid.points_per_axis, axis))


def gradient(field: ScalarField) -> VectorField:
    """Spectral gradient; each component is mean-free."""
    return VectorField(derivative(field, 1), derivative(field, 2))


def divergence(v: VectorField) -> ScalarField:
    return derivative(v.u1, 1) + derivative(v.u2, 2)


def curl(v: VectorField) -> ScalarField:
    """Scalar curl d1 u2 - d2 u1."""
    return derivative(v.u2, 1) - derivative(v.u1, 2)


def riesz_transform(g: ScalarField, axis: int) -> ScalarField:
    """Fourier multiplier -i k_axis / |k|; the zero mode is annihilated."""
    if axis not in (1, 2):
        raise ValueError(f"axis must be 1 or 2, got {axis}")
    return _apply_multiplier(g, _riesz_multiplier(g.grid.points_per_axis, axis))


def leray_project(v: VectorField) -> VectorField:
    """Remove the gradient part: vhat -> vhat - k (k.vhat) / |k|^2.

    Divergence-free fields (constants included) are fixed points; gradients
    of scalar potentials are sent to zero.
    """
    n = v.grid.points_per_axis
    k1, k2 = _wavenumbers(n)
    ksq = k1**2 + k2**2
    ksq_safe = np.where(ksq == 0, 1.0, ksq)
    v1 = v.u1.spectral
    v2 = v.u2.spectral
    kdotv = (k1 * v1 + k2 * v2) / ksq_safe
    p1 = v1 - k1 * kdotv
    p2 = v2 - k2 * kdotv
    return VectorField(inverse_transform(v.grid, p1), inverse_transform(v.grid, p2))


def save_field_csv(field: ScalarField, path: str | Path) -> None:
    """Write `x1,x2,value` rows in row-major grid order, 17 significant digits."""
    x1, x2 = field.grid.coordinates()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(FIELD_CSV_HEADER)
        for a, b, val in zip(x1.ravel(), x2.ravel(), field.values.ravel()):
            writer.writerow((f"{a:.17g}", f"{b:.17g}", f"{val:.17g}"))


def load_field_csv(path: str | Path) -> ScalarField:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != FIELD_CSV_HEADER:
            raise ValueError(f"expected header {FIELD_CSV_HEADER}, got {header}")
        values = [float(row[2]) for row in reader]
    n = round(len(values) ** 0.5)
    if n * n != len(values):
        raise ValueError(f"row count {len(values)} is not a perfect square")
    grid = GridSpec(n)
    return ScalarField(grid, np.array(values).reshape(grid.shape))
