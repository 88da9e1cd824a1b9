"""Test fields: closed-form Gaussians and seeded random Gaussian-enveloped multivector fields."""

from __future__ import annotations

import numpy as np

from .grid import CliffordField, GridSpec

# envelope widths and centers keep |f| below ~1e-7 of its peak at the edge of [-8, 8]^n
SIGMA_RANGE = (0.7, 1.2)
CENTER_RANGE = 1.0


def isotropic_gaussian(grid: GridSpec, width: float = 1.0) -> CliffordField:
    r2 = np.sum(grid.coords() ** 2, axis=-1)
    return CliffordField.from_scalar(grid, np.exp(-r2 / (2 * width**2)))


def vector_gaussian_field(grid: GridSpec) -> CliffordField:
    """``x e^{-|x|^2/2}`` as a vector field."""
    x = grid.coords()
    r2 = np.sum(x**2, axis=-1)
    return CliffordField.from_vector(grid, x * np.exp(-r2 / 2)[..., None])


def mexican_hat_field(grid: GridSpec) -> CliffordField:
    """``(n - |x|^2) e^{-|x|^2/2}``, radial with zero mean."""
    r2 = np.sum(grid.coords() ** 2, axis=-1)
    return CliffordField.from_scalar(grid, (grid.n - r2) * np.exp(-r2 / 2))


def modulated_gaussian(grid: GridSpec, frequency: float = 2.0, axis: int = 1) -> CliffordField:
    x = grid.coords()
    r2 = np.sum(x**2, axis=-1)
    return CliffordField.from_scalar(grid, np.exp(-r2 / 2) * np.cos(frequency * x[..., axis - 1]))


def random_enveloped_field(grid: GridSpec, rng: np.random.Generator, terms: int = 2) -> CliffordField:
    """Sum of ``terms`` Gaussian bumps with random centers, widths and affine multivector amplitudes.

    Every blade gets complex coefficients, so the field exercises the whole algebra.
    """
    x = grid.coords()
    n = grid.n
    dim = 1 << n
    data = np.zeros(grid.shape + (dim,), dtype=np.complex128)
    for _ in range(terms):
        mu = rng.uniform(-CENTER_RANGE, CENTER_RANGE, n)
        sigma = rng.uniform(*SIGMA_RANGE)
        const = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        slope = rng.normal(size=(n, dim)) + 1j * rng.normal(size=(n, dim))
        y = x - mu
        envelope = np.exp(-np.sum(y**2, axis=-1) / (2 * sigma**2))
        data += envelope[..., None] * (const + (y / sigma) @ slope)
    return CliffordField(grid, data)


NAMED = {
    "gaussian": isotropic_gaussian,
    "vector-gaussian": vector_gaussian_field,
    "mexican-hat": mexican_hat_field,
}


def make_field(name: str, grid: GridSpec) -> CliffordField:
    try:
        return NAMED[name](grid)
    except KeyError:
        raise ValueError(f"unknown field {name!r}; choose from {sorted(NAMED)}") from None


def corpus(grid: GridSpec, names=("gaussian", "vector-gaussian", "mexican-hat"), random_count: int = 0, seed: int = 0) -> dict[str, CliffordField]:
    """Named fields followed by ``random_count`` seeded random fields ``random-0``, ``random-1``, ..."""
    out = {name: make_field(name, grid) for name in names}
    rng = np.random.default_rng(seed)
    for i in range(random_count):
        out[f"random-{i}"] = random_enveloped_field(grid, rng)
    return out
