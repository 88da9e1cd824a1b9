"""Continuous Clifford wavelet transform over scale, translation and spin.

Daughter wavelets are

    psi_{a,b,s}(x) = a^(-n/2) s psi(s~ (x - b) s / a) s~

and the transform is ``T(a, b, s) = <psi_{a,b,s}, f>``.  For fixed (a, s)
all translations come from one inverse FFT, since

    T(a, ., s) = a^(n/2) (2 pi)^(n/2) F^-1[ s psi^(a s~ xi s)^dagger s~ f^(xi) ]

Here ``s~`` is Clifford conjugation.  The measure on (a, b, s) is
``da / a^(n+1) dV(b) ds``; the ``a^-n`` factor is carried explicitly in
the stored weights rather than cancelled against the ``a^(n/2)`` factors.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algebra import Multivector, algebra
from .fourier import cft_forward, forward_array, frequency_grid, inverse_array
from .grid import CliffordField, GridMismatchError, GridSpec, inner_product, norm_l2
from .scales import log_scale_grid
from .spin import SpinQuadrature, Spinor, haar_quadrature
from .wavelets import MotherWavelet, admissibility

DAUGHTER_TRUNCATION = 1e-6


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("CLIFFWAVE_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True, eq=False)
class CWTGrid:
    """Quadrature over (a, s) plus the translation grid.

    ``log_weights`` integrate against ``da/a``; :attr:`weights` multiply
    them by ``a^-n`` to realize ``da/a^(n+1)``.
    """

    scales: np.ndarray
    log_weights: np.ndarray
    spins: SpinQuadrature
    translations: GridSpec

    def __post_init__(self):
        scales = np.asarray(self.scales, dtype=float)
        if scales.ndim != 1 or len(scales) < 1 or np.any(scales <= 0) or np.any(np.diff(scales) <= 0):
            raise ValueError("scales must be positive and strictly increasing")
        if np.shape(self.log_weights) != scales.shape:
            raise ValueError("one weight per scale is required")
        if self.spins.n != self.translations.n:
            raise ValueError("spin quadrature and translation grid differ in dimension")
        object.__setattr__(self, "scales", scales)
        object.__setattr__(self, "log_weights", np.asarray(self.log_weights, dtype=float))

    @classmethod
    def logarithmic(cls, a_min: float, a_max: float, count: int, spins, translations: GridSpec) -> CWTGrid:
        if isinstance(spins, int):
            spins = haar_quadrature(translations.n, spins)
        scales, w = log_scale_grid(a_min, a_max, count)
        return cls(scales, w, spins, translations)

    @property
    def n(self) -> int:
        return self.translations.n

    @property
    def weights(self) -> np.ndarray:
        """Per-scale weights for ``da / a^(n+1)``."""
        return self.log_weights * self.scales ** (-self.n)

    def slice_weights(self) -> np.ndarray:
        """Weights for the (scale, spin) slices, shape ``(S, P)``, excluding ``dV(b)``."""
        return self.weights[:, None] * self.spins.weights[None, :]

    @property
    def shape(self) -> tuple:
        return (len(self.scales), len(self.spins)) + self.translations.shape

    def same_as(self, other: CWTGrid) -> bool:
        return (
            self.translations == other.translations
            and np.array_equal(self.scales, other.scales)
            and np.array_equal(self.log_weights, other.log_weights)
            and np.array_equal(self.spins.coefficient_array(), other.spins.coefficient_array())
            and np.array_equal(self.spins.weights, other.spins.weights)
        )


class CWTTensor:
    """Coefficients ``T(a, b, s)`` with shape ``(scales, spins, *grid.shape, 2**n)``."""

    def __init__(self, grid: CWTGrid, coefficients):
        coefficients = np.asarray(coefficients, dtype=np.complex128)
        expected = grid.shape + (1 << grid.n,)
        if coefficients.shape != expected:
            raise ValueError(f"coefficients have shape {coefficients.shape}, expected {expected}")
        coefficients.flags.writeable = False
        self.grid = grid
        self.coefficients = coefficients

    def __repr__(self):
        return f"CWTTensor(shape={self.coefficients.shape})"

    def slice(self, i: int, j: int) -> CliffordField:
        return CliffordField(self.grid.translations, self.coefficients[i, j])

    def argmax(self) -> tuple[int, int, tuple]:
        """Index ``(scale, spin, point)`` of the largest scalar-part magnitude."""
        mag = np.abs(self.coefficients[..., 0])
        idx = np.unravel_index(np.argmax(mag), mag.shape)
        return int(idx[0]), int(idx[1]), tuple(int(k) for k in idx[2:])


def _spinor_arrays(s: Spinor) -> tuple[np.ndarray, np.ndarray]:
    return s.value.coeffs, s.conj().coeffs


def analysis_multiplier(psi: MotherWavelet, a: float, s: Spinor, freq: GridSpec) -> np.ndarray:
    """``s psi^(a s~ xi s)^dagger s~`` sampled on ``freq``."""
    alg = algebra(psi.n)
    R = s.matrix()
    u = a * (freq.coords() @ R)
    v = alg.dagger(psi.evaluate_spectrum(u))
    sc, sb = _spinor_arrays(s)
    return alg.product(alg.product(sc, v), sb)


class _Multipliers:
    """Analysis multipliers per (scale, spin); shared across spins when psi is rotation invariant."""

    def __init__(self, psi: MotherWavelet, grid: CWTGrid):
        self.psi = psi
        self.grid = grid
        self.freq = frequency_grid(grid.translations)
        self._cache = {}

    def __call__(self, i: int, j: int) -> np.ndarray:
        key = (i, 0) if self.psi.rotation_invariant else (i, j)
        if key not in self._cache:
            spin = Spinor.identity(self.psi.n) if self.psi.rotation_invariant else self.grid.spins.nodes[j]
            self._cache[key] = analysis_multiplier(self.psi, self.grid.scales[i], spin, self.freq)
        return self._cache[key]


def _check_inputs(f: CliffordField, psi: MotherWavelet, grid: CWTGrid, warn: bool):
    if f.grid != grid.translations:
        raise GridMismatchError("field grid differs from the translation grid")
    if psi.grid != f.grid:
        raise GridMismatchError("mother wavelet is sampled on a different grid than the field")
    if warn:
        report = admissibility(psi, strict=False)
        if not report.admissible:
            warnings.warn(f"analyzing with an inadmissible wavelet: {report.reason}", stacklevel=3)


def iter_slices(f: CliffordField, psi: MotherWavelet, grid: CWTGrid, threads: int | None = None, warn: bool = True):
    """Yield ``(i, j, T[i, j])`` for every (scale, spin) slice, in order."""
    _check_inputs(f, psi, grid, warn)
    alg = algebra(f.n)
    n = f.n
    fhat = forward_array(f.data, f.grid)
    freq = frequency_grid(f.grid)
    center = f.grid.center_offset()
    mult = _Multipliers(psi, grid)
    pairs = [(i, j) for i in range(len(grid.scales)) for j in range(len(grid.spins))]

    def one(pair):
        i, j = pair
        a = grid.scales[i]
        prod = alg.product(mult(i, j), fhat)
        return i, j, a ** (n / 2) * (2 * math.pi) ** (n / 2) * inverse_array(prod, freq, center)

    threads = threads or default_threads()
    if psi.rotation_invariant:
        # s psi^(a s~ xi s)^dagger s~ = psi^(a xi)^dagger, so every spin yields the same slice
        spins = range(len(grid.spins))
        scales = [(i, 0) for i in range(len(grid.scales))]
        if threads > 1:
            for pair in scales:
                mult(*pair)
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = pool.map(one, scales)
                for i, _, data in results:
                    for j in spins:
                        yield i, j, data
        else:
            for pair in scales:
                i, _, data = one(pair)
                for j in spins:
                    yield i, j, data
        return
    if threads > 1:
        # fill the multiplier cache up front so workers only read it
        for i, j in pairs:
            mult(i, j)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            yield from pool.map(one, pairs)
    else:
        for pair in pairs:
            yield one(pair)


def cwt_analyze(f: CliffordField, psi: MotherWavelet, grid: CWTGrid, threads: int | None = None, warn: bool = True) -> CWTTensor:
    """Wavelet coefficients of ``f`` for every scale, spin and grid translation."""
    out = np.empty(grid.shape + (1 << f.n,), dtype=np.complex128)
    for i, j, data in iter_slices(f, psi, grid, threads, warn):
        out[i, j] = data
    return CWTTensor(grid, out)


def make_daughter(psi: MotherWavelet, a: float, b, s: Spinor | None = None, grid: GridSpec | None = None) -> CliffordField:
    """Sample ``a^(-n/2) s psi(s~ (x - b) s / a) s~`` on ``grid`` (default: the wavelet's grid)."""
    if not a > 0:
        raise ValueError(f"scale must be positive, got {a}")
    grid = grid or psi.grid
    n = grid.n
    b = np.zeros(n) if b is None else np.asarray(b, dtype=float)
    if grid.index_of(b) is None:
        raise ValueError(f"translation {b} is not a grid point")
    s = s or Spinor.identity(n)
    alg = algebra(n)
    y = ((grid.coords() - b) @ s.matrix()) / a
    values = psi.evaluate(y)
    sc, sb = _spinor_arrays(s)
    values = alg.product(alg.product(sc, values), sb) * a ** (-n / 2)
    daughter = CliffordField(grid, values)
    peak = float(daughter.pointwise_magnitude().max(initial=0.0))
    if peak > 0 and daughter.boundary_max() > DAUGHTER_TRUNCATION * peak:
        warnings.warn(f"daughter (a={a}, b={tuple(b)}) is truncated by the grid boundary", stacklevel=2)
    return daughter


def cwt_direct(f: CliffordField, psi: MotherWavelet, a: float, b, s: Spinor | None = None) -> Multivector:
    """One coefficient ``<psi_{a,b,s}, f>`` by direct summation over the grid."""
    return inner_product(make_daughter(psi, a, b, s, f.grid), f)


def _weighted_sum(grid: CWTGrid, per_slice: np.ndarray) -> np.ndarray:
    w = grid.slice_weights() * grid.translations.cell_volume
    return np.tensordot(w, per_slice, axes=([0, 1], [0, 1]))


def hpsi_inner_product(T1: CWTTensor, T2: CWTTensor, Z: float) -> Multivector:
    """``(1/Z) * sum T1^dagger T2`` against ``da/a^(n+1) dV(b) ds``."""
    if not T1.grid.same_as(T2.grid):
        raise GridMismatchError("coefficient tensors live on different grids")
    grid = T1.grid
    alg = algebra(grid.n)
    per_slice = np.zeros((len(grid.scales), len(grid.spins), alg.dim), dtype=np.complex128)
    for i in range(len(grid.scales)):
        for j in range(len(grid.spins)):
            prod = alg.product(alg.dagger(T1.coefficients[i, j]), T2.coefficients[i, j])
            per_slice[i, j] = np.sum(prod.reshape(-1, alg.dim), axis=0)
    return Multivector(grid.n, _weighted_sum(grid, per_slice) / Z)


def slice_energies(T: CWTTensor) -> np.ndarray:
    """``sum_b |T(a, b, s)|^2`` per slice (scalar part of ``T^dagger T``)."""
    c = T.coefficients
    return np.sum(np.abs(c.reshape(c.shape[:2] + (-1,))) ** 2, axis=-1)


@dataclass
class PlancherelResult:
    lhs: float
    rhs: float
    ratio: float

    def as_tuple(self):
        return self.lhs, self.rhs, self.ratio


def normalizer(psi: MotherWavelet, C_psi: float | None = None) -> float:
    """``Z = (2 pi)^n C_psi`` (the constant written A_psi in the isometry identity)."""
    C = admissibility(psi).C_psi if C_psi is None else C_psi
    return (2 * math.pi) ** psi.n * C


def safe_ratio(num: float, den: float) -> float:
    # 0/0 is the vacuous case of an identity or inequality
    if den == 0:
        return 1.0 if num == 0 else math.inf
    return num / den


def plancherel_check(f: CliffordField, psi: MotherWavelet, grid: CWTGrid, C_psi: float | None = None, threads: int | None = None) -> PlancherelResult:
    """Weighted coefficient energy against ``Z ||f||^2``."""
    Z = normalizer(psi, C_psi)
    energies = np.zeros((len(grid.scales), len(grid.spins)))
    for i, j, data in iter_slices(f, psi, grid, threads, warn=False):
        energies[i, j] = np.sum(np.abs(data) ** 2)
    lhs = float(_weighted_sum(grid, energies))
    rhs = Z * norm_l2(f) ** 2
    return PlancherelResult(lhs, rhs, safe_ratio(lhs, rhs))


def tensor_energy(T: CWTTensor) -> float:
    return float(_weighted_sum(T.grid, slice_energies(T)))


def reconstruct(T: CWTTensor, psi: MotherWavelet, Z: float) -> CliffordField:
    """``(1/Z) * sum psi_{a,b,s}(x) T(a,b,s)`` against ``da/a^(n+1) dV(b) ds``.

    The sum over ``b`` is a convolution, evaluated in frequency: the
    daughter spectrum ``a^(n/2) e^(-i b xi) s psi^(a s~ xi s) s~`` is the
    dagger of the analysis multiplier.
    """
    grid = T.grid
    space = grid.translations
    if psi.grid != space:
        raise GridMismatchError("mother wavelet is sampled on a different grid than the tensor")
    alg = algebra(grid.n)
    n = grid.n
    freq = frequency_grid(space)
    mult = _Multipliers(psi, grid)
    w = grid.slice_weights()
    acc = np.zeros(space.shape + (alg.dim,), dtype=np.complex128)
    for i, a in enumerate(grid.scales):
        if psi.rotation_invariant:
            # one synthesis multiplier per scale: sum the spin slices first
            coeff = np.tensordot(w[i], T.coefficients[i], axes=(0, 0))
            if np.any(coeff):
                synth = alg.dagger(mult(i, 0))
                acc += (a ** (n / 2) * (2 * math.pi) ** (n / 2)) * alg.product(synth, forward_array(coeff, space))
            continue
        for j in range(len(grid.spins)):
            coeff = T.coefficients[i, j]
            if not np.any(coeff):
                continue
            that = forward_array(coeff, space)
            synth = alg.dagger(mult(i, j))
            acc += (w[i, j] * a ** (n / 2) * (2 * math.pi) ** (n / 2)) * alg.product(synth, that)
    data = inverse_array(acc, freq, space.center_offset()) / Z
    return CliffordField(space, data)


def relative_error(f: CliffordField, g: CliffordField) -> float:
    return safe_ratio(norm_l2(f - g), norm_l2(f))


def tensor_spectrum(T: CWTTensor, i: int, j: int) -> CliffordField:
    """Clifford-Fourier transform of one (scale, spin) slice over the translation variable."""
    return cft_forward(T.slice(i, j))
