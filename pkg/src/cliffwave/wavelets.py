"""Mother wavelets, admissibility, and the spin-scale kernel constant.

Normalization used throughout the package: Haar measure on Spin(n) has
mass 1 and the kernel constant is

    C_psi = (1 / |S^{n-1}|) * integral scalar(psi^(u) psi^(u)^dagger) |u|^-n dV(u)

which is what the spin-scale integral of ``s psi^(a s~ xi s) psi^(..)^dagger s~``
evaluates to for every ``xi != 0``.  The isometry normalizer is
``Z = (2 pi)^n C_psi``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.ndimage import map_coordinates

from .algebra import Multivector, algebra
from .fourier import cft_forward, forward_array, frequency_grid
from .grid import CliffordField, GridSpec
from .spin import SpinQuadrature

SCALARITY_TOL = 1e-8
DIVERGENCE_FRACTION = 0.10
BOUNDARY_DECAY = 1e-10


class NotAdmissible(ValueError):
    def __init__(self, message: str, report: AdmissibilityReport | None = None):
        super().__init__(message)
        self.report = report


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^n: 2 pi for n=2, 4 pi for n=3."""
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)


def _interpolate(f: CliffordField, points: np.ndarray) -> np.ndarray:
    g = f.grid
    idx = (points - np.asarray(g.origin)) / np.asarray(g.spacing)
    idx = np.moveaxis(idx, -1, 0)
    out = np.zeros(points.shape[:-1] + (f.data.shape[-1],), dtype=np.complex128)
    for m in range(f.data.shape[-1]):
        blade = f.data[..., m]
        if not np.any(blade):
            continue
        re = map_coordinates(blade.real, idx, order=3, mode="constant", cval=0.0)
        im = map_coordinates(blade.imag, idx, order=3, mode="constant", cval=0.0)
        out[..., m] = re + 1j * im
    return out


@dataclass(frozen=True, eq=False)
class MotherWavelet:
    """A candidate mother wavelet with its samples and cached spectrum.

    ``spatial`` and ``spectral``, when present, evaluate the wavelet and its
    transform in closed form at arbitrary points (arrays ending in an axis
    of length n).  Without them, evaluation falls back to cubic
    interpolation of the samples.
    """

    name: str
    field: CliffordField
    spectrum: CliffordField
    spatial: Callable | None = None
    spectral: Callable | None = None
    rotation_invariant: bool = False

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def grid(self) -> GridSpec:
        return self.field.grid

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        if self.spatial is not None:
            return self.spatial(points)
        return _interpolate(self.field, points)

    def evaluate_spectrum(self, points: np.ndarray) -> np.ndarray:
        if self.spectral is not None:
            return self.spectral(points)
        return _interpolate(self.spectrum, points)

    def on_grid(self, grid: GridSpec) -> MotherWavelet:
        """The same wavelet sampled on another grid (closed form only)."""
        if grid == self.grid:
            return self
        if self.spatial is None:
            raise ValueError(f"wavelet {self.name!r} is only known by its samples on {self.grid}")
        return _closed_form(self.name, grid, self.spatial, self.spectral, self.rotation_invariant)


def _closed_form(name, grid, spatial, spectral, rotation_invariant) -> MotherWavelet:
    freq = frequency_grid(grid)
    return MotherWavelet(
        name,
        CliffordField.from_function(grid, spatial),
        CliffordField(freq, spectral(freq.coords()), domain="frequency", dual=grid),
        spatial,
        spectral,
        rotation_invariant,
    )


def _vector_gaussian_space(x):
    n = x.shape[-1]
    out = np.zeros(x.shape[:-1] + (1 << n,), dtype=np.complex128)
    out[..., algebra(n).vector_masks] = x * np.exp(-0.5 * np.sum(x * x, axis=-1))[..., None]
    return out


def _vector_gaussian_freq(xi):
    n = xi.shape[-1]
    out = np.zeros(xi.shape[:-1] + (1 << n,), dtype=np.complex128)
    out[..., algebra(n).vector_masks] = -1j * xi * np.exp(-0.5 * np.sum(xi * xi, axis=-1))[..., None]
    return out


def _mexican_hat_space(x):
    n = x.shape[-1]
    r2 = np.sum(x * x, axis=-1)
    out = np.zeros(x.shape[:-1] + (1 << n,), dtype=np.complex128)
    out[..., 0] = (n - r2) * np.exp(-0.5 * r2)
    return out


def _mexican_hat_freq(xi):
    n = xi.shape[-1]
    r2 = np.sum(xi * xi, axis=-1)
    out = np.zeros(xi.shape[:-1] + (1 << n,), dtype=np.complex128)
    out[..., 0] = r2 * np.exp(-0.5 * r2)
    return out


def make_vector_gaussian(grid: GridSpec) -> MotherWavelet:
    """``psi(x) = x exp(-|x|^2/2)`` as a grade-1 field; ``psi^(xi) = -i xi exp(-|xi|^2/2)``."""
    _check_grid(grid)
    return _closed_form("vector-gaussian", grid, _vector_gaussian_space, _vector_gaussian_freq, True)


def make_mexican_hat(grid: GridSpec) -> MotherWavelet:
    """Scalar ``psi(x) = (n - |x|^2) exp(-|x|^2/2)``; ``psi^(xi) = |xi|^2 exp(-|xi|^2/2)``."""
    _check_grid(grid)
    return _closed_form("mexican-hat", grid, _mexican_hat_space, _mexican_hat_freq, True)


def make_gaussian(grid: GridSpec) -> MotherWavelet:
    """Plain Gaussian; not admissible since its spectrum does not vanish at 0."""
    _check_grid(grid)

    def space(x):
        out = np.zeros(x.shape[:-1] + (1 << x.shape[-1],), dtype=np.complex128)
        out[..., 0] = np.exp(-0.5 * np.sum(x * x, axis=-1))
        return out

    return _closed_form("gaussian", grid, space, space, True)


BUILTIN = {
    "vector-gaussian": make_vector_gaussian,
    "mexican-hat": make_mexican_hat,
    "gaussian": make_gaussian,
}


def builtin(name: str, grid: GridSpec) -> MotherWavelet:
    try:
        return BUILTIN[name](grid)
    except KeyError:
        raise ValueError(f"unknown wavelet {name!r}; choose from {sorted(BUILTIN)}") from None


def wavelet_from_field(f: CliffordField, name: str = "file") -> MotherWavelet:
    """Wrap sampled data as a mother wavelet; evaluation uses cubic interpolation."""
    _check_grid(f.grid)
    return MotherWavelet(name, f, cft_forward(f))


def _check_grid(grid: GridSpec):
    if not grid.is_odd():
        raise ValueError(f"wavelet grids must have odd sizes, got {grid.shape}")


@dataclass
class AdmissibilityReport:
    name: str
    n: int
    C_psi: float
    A_psi_sphere: float
    scalarity_max_violation: float
    innermost_fraction: float
    pad: int
    boundary_max: float
    integrand_profile: dict = field(repr=False, default_factory=dict)
    admissible: bool = True
    reason: str = ""

    @property
    def normalizer(self) -> float:
        """``Z = (2 pi)^n C_psi``, the constant in the isometry and reconstruction."""
        return (2 * math.pi) ** self.n * self.C_psi

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "C_psi": self.C_psi,
            "A_psi_sphere": self.A_psi_sphere,
            "Z_psi": self.normalizer,
            "scalarity_max_violation": self.scalarity_max_violation,
            "innermost_fraction": self.innermost_fraction,
            "pad": self.pad,
            "boundary_max": self.boundary_max,
            "admissible": self.admissible,
            "reason": self.reason,
        }


def scalarity_violation(spectrum: np.ndarray, n: int) -> float:
    """Worst pointwise ratio of non-scalar to scalar content of ``psi^ psi^dagger``."""
    alg = algebra(n)
    prod = alg.product(spectrum, alg.dagger(spectrum))
    scalar = np.abs(prod[..., 0])
    nonscalar = np.sqrt(np.sum(np.abs(prod[..., 1:]) ** 2, axis=-1))
    # FFT round-off sets a floor well above 1e-30 for sampled spectra
    floor = 1e-30 + 1e-14 * float(scalar.max(initial=0.0))
    return float(np.max(nonscalar / (scalar + floor), initial=0.0))


def _padded_density(f: CliffordField, pad: int) -> tuple[GridSpec, np.ndarray]:
    """``sum_A |psi^_A|^2`` on a frequency grid refined ``pad`` times by zero padding."""
    g = f.grid
    extra = [(pad - 1) * (s - 1) // 2 for s in g.shape]
    big = GridSpec(
        [s + 2 * e for s, e in zip(g.shape, extra)],
        g.spacing,
        [o - e * h for o, e, h in zip(g.origin, extra, g.spacing)],
    )
    density = np.zeros(big.shape)
    for m in range(f.data.shape[-1]):
        blade = f.data[..., m]
        if not np.any(blade):
            continue
        padded = np.pad(blade, [(e, e) for e in extra])[..., None]
        density += np.abs(forward_array(padded, big)[..., 0]) ** 2
    return frequency_grid(big), density


def _radial_profile(radius: np.ndarray, values: np.ndarray, bins: int = 64) -> dict:
    edges = np.linspace(0.0, radius.max(), bins + 1)
    which = np.clip(np.digitize(radius.ravel(), edges) - 1, 0, bins - 1)
    total = np.bincount(which, weights=values.ravel(), minlength=bins)
    count = np.bincount(which, minlength=bins)
    mean = np.divide(total, count, out=np.zeros(bins), where=count > 0)
    return {"radius": (0.5 * (edges[:-1] + edges[1:])).tolist(), "mean_density": mean.tolist()}


def admissibility(psi: MotherWavelet, pad: int = 4, strict: bool = True) -> AdmissibilityReport:
    """Estimate the kernel constant and test the admissibility conditions.

    The integral runs over the spectrum of the zero-padded samples (``pad``
    times finer in frequency) with the ``xi = 0`` cell left out.  A
    log-divergent integrand is recognised by the share of the total coming
    from the innermost shell ``0 < |xi| <= 2 dxi``: for an admissible
    wavelet it shrinks with refinement, for a divergent one it stays put.
    """
    n = psi.n
    freq, density = _padded_density(psi.field, pad)
    xi = freq.coords()
    radius = np.sqrt(np.sum(xi * xi, axis=-1))
    nonzero = radius > 0
    integrand = np.zeros_like(density)
    integrand[nonzero] = density[nonzero] / radius[nonzero] ** n
    cell = freq.cell_volume
    total = float(integrand.sum()) * cell
    shell = nonzero & (radius <= 2 * min(freq.spacing) * (1 + 1e-9))
    inner = float(integrand[shell].sum()) * cell
    C = total / sphere_area(n)
    violation = scalarity_violation(psi.spectrum.data, n)
    report = AdmissibilityReport(
        name=psi.name,
        n=n,
        C_psi=C,
        A_psi_sphere=(2 * math.pi) ** n * sphere_area(n) * C,
        scalarity_max_violation=violation,
        innermost_fraction=inner / total if total > 0 else math.inf,
        pad=pad,
        boundary_max=psi.field.boundary_max(),
        integrand_profile=_radial_profile(radius, density),
    )
    peak = float(psi.field.pointwise_magnitude().max(initial=0.0))
    if report.boundary_max > BOUNDARY_DECAY * max(peak, 1e-300):
        warnings.warn(f"{psi.name}: samples do not decay at the grid boundary; truncation biases C_psi", stacklevel=2)
    reasons = []
    if not (math.isfinite(C) and C > 0):
        reasons.append(f"kernel constant is not a positive finite number ({C!r})")
    if report.innermost_fraction > DIVERGENCE_FRACTION:
        reasons.append(
            f"innermost frequency shell carries {report.innermost_fraction:.1%} of the integral "
            "(integrand diverges at xi = 0)"
        )
    if violation > SCALARITY_TOL:
        reasons.append(f"psi^ psi^dagger is not scalar (violation {violation:.3g})")
    if reasons:
        report.admissible = False
        report.reason = "; ".join(reasons)
        if strict:
            raise NotAdmissible(f"{psi.name}: {report.reason}", report)
    return report


@dataclass
class KernelReport:
    xis: np.ndarray
    kernels: list
    C_psi: float
    deviations: np.ndarray
    nonscalar: np.ndarray
    boundary_fraction: np.ndarray

    @property
    def max_deviation(self) -> float:
        return float(self.deviations.max())

    @property
    def max_nonscalar(self) -> float:
        return float(self.nonscalar.max())

    @property
    def scale_grid_too_narrow(self) -> bool:
        return bool(np.any(self.boundary_fraction > 0.01))


def spin_scale_kernel(psi: MotherWavelet, xi, scales: np.ndarray, log_weights: np.ndarray, spins: SpinQuadrature):
    """Quadrature of ``s psi^(a s~ xi s) psi^(a s~ xi s)^dagger s~`` over ``da/a`` and Haar ``ds``.

    Returns the kernel multivector and the part contributed by the two end
    scales (used to detect a truncated scale range).
    """
    alg = algebra(psi.n)
    xi = np.asarray(xi, dtype=float)
    mats = spins.matrices()
    # s~ xi s is the inverse rotation, R^T xi
    rotated = np.einsum("pji,j->pi", mats, xi)
    u = scales[:, None, None] * rotated[None, :, :]
    v = psi.evaluate_spectrum(u)
    m = alg.product(v, alg.dagger(v))
    s = spins.coefficient_array().astype(np.complex128)
    sbar = s * alg.conjugation_signs
    sandwiched = alg.product(alg.product(s[None], m), sbar[None])
    weights = log_weights[:, None, None] * spins.weights[None, :, None]
    contrib = sandwiched * weights
    total = contrib.sum(axis=(0, 1))
    ends = contrib[[0, -1]].sum(axis=(0, 1))
    return Multivector(psi.n, total), Multivector(psi.n, ends)


def kernel_constant_check(psi: MotherWavelet, xis, scales, log_weights, spins: SpinQuadrature, C_psi: float | None = None) -> KernelReport:
    """Compare the spin-scale kernel ``K(xi)`` against ``C_psi`` at each sample ``xi``."""
    xis = np.atleast_2d(np.asarray(xis, dtype=float))
    if np.any(np.linalg.norm(xis, axis=1) == 0):
        raise ValueError("kernel samples must be nonzero frequencies")
    if C_psi is None:
        C_psi = admissibility(psi).C_psi
    kernels, dev, nonscalar, boundary = [], [], [], []
    for xi in xis:
        K, ends = spin_scale_kernel(psi, xi, scales, log_weights, spins)
        kernels.append(K)
        dev.append((K - C_psi).magnitude() / C_psi)
        nonscalar.append(K.nonscalar_magnitude() / max(K.magnitude(), 1e-300))
        boundary.append(ends.magnitude() / max(K.magnitude(), 1e-300))
    return KernelReport(xis, kernels, C_psi, np.array(dev), np.array(nonscalar), np.array(boundary))
