"""Clifford-valued fields sampled on regular grids, and their L2 geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import Multivector, algebra


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """Regular grid: axis ``i`` has ``shape[i]`` points at ``origin[i] + j * spacing[i]``."""

    shape: tuple
    spacing: tuple
    origin: tuple

    def __post_init__(self):
        shape = tuple(int(s) for s in self.shape)
        spacing = tuple(float(h) for h in self.spacing)
        origin = tuple(float(o) for o in self.origin)
        if not (len(shape) == len(spacing) == len(origin)) or not shape:
            raise ValueError("shape, spacing and origin must have the same non-zero length")
        if any(s < 1 for s in shape) or any(not h > 0 for h in spacing):
            raise ValueError("grid needs positive sizes and spacings")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "origin", origin)

    @classmethod
    def centered(cls, n: int, points: int, span: float) -> GridSpec:
        """``points`` samples per axis covering ``[-span, span]``."""
        if points < 2:
            raise ValueError("need at least two points per axis")
        h = 2.0 * span / (points - 1)
        return cls((points,) * n, (h,) * n, (-span,) * n)

    @property
    def n(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    @property
    def cell_volume(self) -> float:
        return math.prod(self.spacing)

    def axes(self) -> list[np.ndarray]:
        return [o + h * np.arange(s) for s, h, o in zip(self.shape, self.spacing, self.origin)]

    def coords(self) -> np.ndarray:
        """Sample coordinates, shape ``(*shape, n)``."""
        return np.stack(np.meshgrid(*self.axes(), indexing="ij"), axis=-1)

    def center_offset(self) -> np.ndarray:
        """Displacement of the grid midpoint from the coordinate origin."""
        return np.array([o + h * (s - 1) / 2 for s, h, o in zip(self.shape, self.spacing, self.origin)])

    def is_odd(self) -> bool:
        return all(s % 2 == 1 for s in self.shape)

    def is_centered(self, tol: float = 1e-9) -> bool:
        return self.is_odd() and bool(np.all(np.abs(self.center_offset()) <= tol * np.array(self.spacing)))

    def index_of(self, point, tol: float = 1e-9) -> tuple | None:
        """Grid index of ``point`` or ``None`` if it is not a sample point."""
        idx = []
        for p, s, h, o in zip(np.asarray(point, dtype=float), self.shape, self.spacing, self.origin):
            j = (p - o) / h
            jr = round(j)
            if abs(j - jr) > tol or not 0 <= jr < s:
                return None
            idx.append(int(jr))
        return tuple(idx)

    def to_header(self) -> dict:
        return {"n": self.n, "shape": list(self.shape), "spacing": list(self.spacing), "origin": list(self.origin)}


class CliffordField:
    """Multivector-valued samples on a :class:`GridSpec`.

    ``data`` has shape ``(*grid.shape, 2**n)`` and is stored read-only.
    ``domain`` is ``"space"`` or ``"frequency"``; frequency fields keep the
    spatial grid they came from in ``dual`` so the inverse transform can
    restore an off-centre origin.
    """

    __slots__ = ("grid", "data", "domain", "dual")

    def __init__(self, grid: GridSpec, data, domain: str = "space", dual: GridSpec | None = None):
        data = np.array(data, dtype=np.complex128)
        expected = grid.shape + (1 << grid.n,)
        if data.shape != expected:
            raise ValueError(f"field data shape {data.shape} does not match grid {expected}")
        if domain not in ("space", "frequency"):
            raise ValueError(f"unknown domain {domain!r}")
        data.flags.writeable = False
        self.grid = grid
        self.data = data
        self.domain = domain
        self.dual = dual

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def alg(self):
        return algebra(self.grid.n)

    def __repr__(self):
        return f"CliffordField(shape={self.grid.shape}, n={self.n}, domain={self.domain!r})"

    # constructors
    @classmethod
    def zeros(cls, grid: GridSpec) -> CliffordField:
        return cls(grid, np.zeros(grid.shape + (1 << grid.n,)))

    @classmethod
    def from_scalar(cls, grid: GridSpec, values, blade: int = 0) -> CliffordField:
        data = np.zeros(grid.shape + (1 << grid.n,), dtype=np.complex128)
        data[..., blade] = values
        return cls(grid, data)

    @classmethod
    def from_vector(cls, grid: GridSpec, components) -> CliffordField:
        """``components`` has shape ``(*grid.shape, n)``; embeds ``sum c_j e_j`` pointwise."""
        data = np.zeros(grid.shape + (1 << grid.n,), dtype=np.complex128)
        data[..., algebra(grid.n).vector_masks] = components
        return cls(grid, data)

    @classmethod
    def from_function(cls, grid: GridSpec, func) -> CliffordField:
        """``func(coords)`` maps ``(*shape, n)`` coordinates to ``(*shape, 2**n)`` coefficients."""
        return cls(grid, func(grid.coords()))

    def replace(self, data) -> CliffordField:
        return CliffordField(self.grid, data, self.domain, self.dual)

    def _check(self, other: CliffordField):
        if other.grid != self.grid:
            raise GridMismatchError(f"grid mismatch: {self.grid} vs {other.grid}")

    # pointwise algebra
    def __add__(self, other):
        if isinstance(other, CliffordField):
            self._check(other)
            return self.replace(self.data + other.data)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, CliffordField):
            self._check(other)
            return self.replace(self.data - other.data)
        return NotImplemented

    def __neg__(self):
        return self.replace(-self.data)

    def __mul__(self, other):
        if np.isscalar(other):
            return self.replace(self.data * other)
        if isinstance(other, Multivector):
            return self.replace(self.alg.product(self.data, other.coeffs))
        if isinstance(other, CliffordField):
            self._check(other)
            return self.replace(self.alg.product(self.data, other.data))
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return self.replace(self.data * other)
        if isinstance(other, Multivector):
            return self.replace(self.alg.product(other.coeffs, self.data))
        return NotImplemented

    def dagger(self) -> CliffordField:
        return self.replace(self.alg.dagger(self.data))

    def pointwise_magnitude(self) -> np.ndarray:
        return np.sqrt(np.sum(np.abs(self.data) ** 2, axis=-1))

    def value_at(self, index) -> Multivector:
        return Multivector(self.n, self.data[tuple(index)])

    def boundary_max(self) -> float:
        """Largest pointwise magnitude on the outer faces of the grid."""
        mag = self.pointwise_magnitude()
        faces = []
        for ax in range(mag.ndim):
            faces.append(np.take(mag, [0, -1], axis=ax).max())
        return float(max(faces))


def _sum_points(values: np.ndarray, ndim: int) -> np.ndarray:
    # np.sum reduces contiguous axes pairwise, so the result does not
    # depend on how callers chunk work upstream
    return np.sum(values.reshape((-1,) + values.shape[ndim:]), axis=0)


def inner_product(f: CliffordField, g: CliffordField) -> Multivector:
    """Riemann sum of ``f(x)^dagger g(x) dV``; the result is a multivector."""
    f._check(g)
    prod = f.alg.product(f.alg.dagger(f.data), g.data)
    return Multivector(f.n, _sum_points(prod, f.n) * f.grid.cell_volume)


def norm_l2(f: CliffordField) -> float:
    # scalar part of f^dagger f is sum_A |f_A|^2
    return math.sqrt(float(_sum_points(np.abs(f.data) ** 2, f.n).sum()) * f.grid.cell_volume)


def norm_l1(f: CliffordField) -> float:
    return float(_sum_points(f.pointwise_magnitude(), f.n)) * f.grid.cell_volume


def coordinate_multiply(f: CliffordField, k: int) -> CliffordField:
    """Multiply every coefficient by the ``k``-th coordinate, ``k`` in ``1..n``."""
    if not 1 <= k <= f.n:
        raise ValueError(f"axis {k} out of range 1..{f.n}")
    x = f.grid.axes()[k - 1]
    shape = [1] * f.n + [1]
    shape[k - 1] = -1
    return f.replace(f.data * x.reshape(shape))


def cauchy_schwarz_check(f: CliffordField, g: CliffordField) -> tuple[float, float]:
    """``(|<f, g>|, ||f|| ||g||)`` with ``|.|`` the coefficient norm of the multivector."""
    return inner_product(f, g).magnitude(), norm_l2(f) * norm_l2(g)
