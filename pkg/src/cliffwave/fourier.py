"""Clifford-Fourier transform on centred odd grids.

Continuum convention::

    F[f](xi) = (2 pi)^(-n/2) * integral exp(-i <x, xi>) f(x) dV(x)

The kernel is a complex scalar, so every blade is transformed
independently with an FFT.  Odd axes put ``x = 0`` and ``xi = 0`` on
sample points; a grid whose midpoint sits at ``c`` gets an extra phase
``exp(-i <c, xi>)``.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.fft

from .algebra import Multivector
from .grid import CliffordField, GridMismatchError, GridSpec, inner_product

_workers = None


def set_workers(count: int | None):
    """Thread count handed to ``scipy.fft``; ``None`` means library default."""
    global _workers
    _workers = count


def _spatial_axes(n: int) -> tuple:
    return tuple(range(n))


def _require_odd(grid: GridSpec):
    if not grid.is_odd():
        raise ValueError(f"even-sized axes are not supported: shape {grid.shape}")


def frequency_grid(grid: GridSpec) -> GridSpec:
    """Centred frequency grid with spacing ``2 pi / (N h)`` per axis."""
    _require_odd(grid)
    dxi = [2 * math.pi / (s * h) for s, h in zip(grid.shape, grid.spacing)]
    return GridSpec(grid.shape, dxi, [-(s - 1) / 2 * d for s, d in zip(grid.shape, dxi)])


def spatial_grid(freq: GridSpec, center=None) -> GridSpec:
    """Inverse of :func:`frequency_grid`; ``center`` is the spatial grid midpoint."""
    h = [2 * math.pi / (s * d) for s, d in zip(freq.shape, freq.spacing)]
    c = np.zeros(freq.n) if center is None else np.asarray(center, dtype=float)
    return GridSpec(freq.shape, h, [ci - (s - 1) / 2 * hi for ci, s, hi in zip(c, freq.shape, h)])


def _phase(freq: GridSpec, shift: np.ndarray, sign: float) -> np.ndarray | None:
    if not np.any(shift):
        return None
    xi = freq.coords()
    return np.exp(sign * 1j * (xi @ shift))[..., None]


def centered_fft(data: np.ndarray, n: int) -> np.ndarray:
    axes = _spatial_axes(n)
    return scipy.fft.fftshift(scipy.fft.fftn(scipy.fft.ifftshift(data, axes=axes), axes=axes, workers=_workers), axes=axes)


def centered_ifft(data: np.ndarray, n: int) -> np.ndarray:
    axes = _spatial_axes(n)
    return scipy.fft.fftshift(scipy.fft.ifftn(scipy.fft.ifftshift(data, axes=axes), axes=axes, workers=_workers), axes=axes)


def forward_array(data: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Transform raw coefficient data sampled on ``grid`` (no checks)."""
    out = centered_fft(data, grid.n) * (grid.cell_volume / (2 * math.pi) ** (grid.n / 2))
    ramp = _phase(frequency_grid(grid), grid.center_offset(), -1.0)
    return out if ramp is None else out * ramp


def inverse_array(data: np.ndarray, freq: GridSpec, center=None) -> np.ndarray:
    if center is not None:
        ramp = _phase(freq, np.asarray(center, dtype=float), 1.0)
        if ramp is not None:
            data = data * ramp
    scale = freq.size * freq.cell_volume / (2 * math.pi) ** (freq.n / 2)
    return centered_ifft(data, freq.n) * scale


def cft_forward(f: CliffordField) -> CliffordField:
    if f.domain != "space":
        raise ValueError("cft_forward expects a spatial field")
    _require_odd(f.grid)
    freq = frequency_grid(f.grid)
    return CliffordField(freq, forward_array(f.data, f.grid), domain="frequency", dual=f.grid)


def cft_inverse(F: CliffordField, space: GridSpec | None = None) -> CliffordField:
    """Inverse transform; the spatial grid defaults to ``F.dual`` or a centred grid."""
    if F.domain != "frequency":
        raise ValueError("cft_inverse expects a frequency-domain field")
    _require_odd(F.grid)
    space = space or F.dual or spatial_grid(F.grid)
    dual = frequency_grid(space)
    if dual.shape != F.grid.shape or not np.allclose(dual.spacing, F.grid.spacing, rtol=1e-12, atol=0):
        raise GridMismatchError("frequency grid is not the dual of the requested spatial grid")
    return CliffordField(space, inverse_array(F.data, F.grid, space.center_offset()), domain="space")


def parseval_check(f: CliffordField, g: CliffordField) -> tuple[Multivector, Multivector]:
    """``(<f, g>, <F f, F g>)``; both are multivectors."""
    f._check(g)
    return inner_product(f, g), inner_product(cft_forward(f), cft_forward(g))


def frequency_multiply(F: CliffordField, k: int) -> CliffordField:
    """Multiply a frequency-domain field by ``xi_k`` (``k`` in ``1..n``)."""
    if not 1 <= k <= F.n:
        raise ValueError(f"axis {k} out of range 1..{F.n}")
    xi = F.grid.axes()[k - 1]
    shape = [1] * (F.n + 1)
    shape[k - 1] = -1
    return F.replace(F.data * xi.reshape(shape))


def spectral_derivative(f: CliffordField, k: int) -> CliffordField:
    """``d f / d x_k`` computed as the inverse transform of ``i xi_k F[f]``."""
    F = cft_forward(f)
    return cft_inverse(frequency_multiply(F, k) * 1j)
