"""Complex Clifford algebra with negative-definite generators.

Blades are stored as bitmasks: bit ``i`` set means ``e_{i+1}`` is a factor.
A multivector of the algebra with ``n`` generators is a dense array of
``2**n`` complex coefficients in ascending-mask order.  All products go
through a precomputed sign table, built once per dimension.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

MAX_DIMENSION = 8
DEFAULT_ATOL = 1e-12


class AlgebraMismatchError(ValueError):
    """Operands belong to algebras of different dimension."""


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def blade_product(a: int, b: int) -> tuple[int, int]:
    """Product of two basis blades given as bitmasks.

    Returns ``(sign, mask)`` with ``e_a e_b = sign * e_mask``.  The sign
    collects one factor of -1 per transposition needed to sort the
    generators, and one per repeated generator since ``e_i**2 = -1``.
    """
    swaps = 0
    shifted = a >> 1
    while shifted:
        swaps += popcount(shifted & b)
        shifted >>= 1
    swaps += popcount(a & b)
    return (-1 if swaps & 1 else 1), a ^ b


def blade_name(mask: int) -> str:
    if mask == 0:
        return "1"
    return "e" + "".join(str(i + 1) for i in range(MAX_DIMENSION) if mask >> i & 1)


def parse_blade(name: str) -> int:
    """Inverse of :func:`blade_name`, e.g. ``"e13" -> 0b101``."""
    if name == "1":
        return 0
    if not name.startswith("e") or not name[1:].isdigit():
        raise ValueError(f"not a blade name: {name!r}")
    digits = [int(c) for c in name[1:]]
    if sorted(set(digits)) != digits or digits[0] < 1:
        raise ValueError(f"blade indices must be strictly increasing and >= 1: {name!r}")
    return sum(1 << (d - 1) for d in digits)


class CliffordAlgebra:
    """Tables for the algebra generated by ``e_1..e_n`` with ``e_i e_j + e_j e_i = -2 delta_ij``."""

    def __init__(self, n: int):
        if not 1 <= n <= MAX_DIMENSION:
            raise ValueError(f"dimension must be in 1..{MAX_DIMENSION}, got {n}")
        self.n = n
        self.dim = 1 << n
        masks = np.arange(self.dim)
        self.grades = np.array([popcount(m) for m in range(self.dim)])
        signs = np.empty((self.dim, self.dim), dtype=np.int8)
        for a in range(self.dim):
            for b in range(self.dim):
                signs[a, b] = blade_product(a, b)[0]
        signs.flags.writeable = False
        self.signs = signs
        # perms[a] maps output mask c to the partner blade b = a ^ c
        self._perms = masks[None, :] ^ masks[:, None]
        self._perm_signs = np.take_along_axis(signs, self._perms, axis=1).astype(float)

        k = self.grades
        self.involution_signs = (-1.0) ** k
        self.reversion_signs = (-1.0) ** (k * (k - 1) // 2)
        self.conjugation_signs = (-1.0) ** (k * (k + 1) // 2)
        self.vector_masks = np.array([1 << i for i in range(n)])

    def __repr__(self):
        return f"CliffordAlgebra(n={self.n})"

    def product(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Geometric product of coefficient arrays, broadcasting over leading axes."""
        a = np.asarray(a)
        b = np.asarray(b)
        shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (self.dim,)
        out = np.zeros(shape, dtype=np.result_type(a, b, np.complex128))
        for m in range(self.dim):
            am = a[..., m : m + 1]
            if not np.any(am):
                continue
            out += am * (self._perm_signs[m] * b[..., self._perms[m]])
        return out

    def dagger(self, a: np.ndarray) -> np.ndarray:
        return self.conjugation_signs * np.conj(a)

    def grade_mask(self, k: int) -> np.ndarray:
        return self.grades == k


@lru_cache(maxsize=None)
def algebra(n: int) -> CliffordAlgebra:
    return CliffordAlgebra(n)


def _format_coeff(c: complex) -> str:
    if c.imag == 0:
        return f"{c.real:.17g}"
    if c.real == 0:
        return f"{c.imag:.17g}i"
    return f"({c.real:.17g}{c.imag:+.17g}i)"


class Multivector:
    """Immutable element of the complex Clifford algebra in ``n`` dimensions.

    ``*`` is the geometric product (or scaling by a number), ``+``/``-``
    are componentwise.  Coefficients are read through :attr:`coeffs` or by
    blade name, ``mv["e12"]``.
    """

    __slots__ = ("alg", "coeffs")
    __array_priority__ = 100

    def __init__(self, n: int, coeffs=None):
        alg = algebra(n)
        if coeffs is None:
            data = np.zeros(alg.dim, dtype=np.complex128)
        else:
            data = np.array(coeffs, dtype=np.complex128)
            if data.shape != (alg.dim,):
                raise ValueError(f"expected {alg.dim} coefficients, got shape {data.shape}")
        data.flags.writeable = False
        object.__setattr__(self, "alg", alg)
        object.__setattr__(self, "coeffs", data)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # construction helpers
    @classmethod
    def scalar(cls, n: int, value: complex = 1.0) -> Multivector:
        c = np.zeros(1 << n, dtype=np.complex128)
        c[0] = value
        return cls(n, c)

    @classmethod
    def blade(cls, n: int, mask, value: complex = 1.0) -> Multivector:
        if isinstance(mask, str):
            mask = parse_blade(mask)
        if not 0 <= mask < (1 << n):
            raise ValueError(f"blade mask {mask} out of range for n={n}")
        c = np.zeros(1 << n, dtype=np.complex128)
        c[mask] = value
        return cls(n, c)

    @classmethod
    def from_dict(cls, n: int, terms: dict) -> Multivector:
        c = np.zeros(1 << n, dtype=np.complex128)
        for key, value in terms.items():
            mask = parse_blade(key) if isinstance(key, str) else int(key)
            c[mask] += value
        return cls(n, c)

    @property
    def n(self) -> int:
        return self.alg.n

    def _check(self, other: Multivector):
        if other.alg.n != self.alg.n:
            raise AlgebraMismatchError(f"cannot combine n={self.n} with n={other.n}")

    def __getitem__(self, key) -> complex:
        mask = parse_blade(key) if isinstance(key, str) else key
        return complex(self.coeffs[mask])

    # arithmetic
    def __add__(self, other):
        if isinstance(other, Multivector):
            self._check(other)
            return Multivector(self.n, self.coeffs + other.coeffs)
        if np.isscalar(other):
            return self + Multivector.scalar(self.n, other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.n, -self.coeffs)

    def __sub__(self, other):
        if isinstance(other, Multivector) or np.isscalar(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Multivector):
            self._check(other)
            return Multivector(self.n, self.alg.product(self.coeffs, other.coeffs))
        if np.isscalar(other):
            return Multivector(self.n, self.coeffs * other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return Multivector(self.n, self.coeffs * other)
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return Multivector(self.n, self.coeffs / other)
        return NotImplemented

    # involutions
    def grade_involution(self) -> Multivector:
        return Multivector(self.n, self.alg.involution_signs * self.coeffs)

    def reversion(self) -> Multivector:
        return Multivector(self.n, self.alg.reversion_signs * self.coeffs)

    def conjugation(self) -> Multivector:
        return Multivector(self.n, self.alg.conjugation_signs * self.coeffs)

    def dagger(self) -> Multivector:
        """Hermitian conjugate: Clifford conjugation plus complex conjugation."""
        return Multivector(self.n, self.alg.dagger(self.coeffs))

    # projections
    def grade(self, k: int) -> Multivector:
        return Multivector(self.n, np.where(self.alg.grade_mask(k), self.coeffs, 0))

    def even(self) -> Multivector:
        return Multivector(self.n, np.where(self.alg.grades % 2 == 0, self.coeffs, 0))

    def odd(self) -> Multivector:
        return Multivector(self.n, np.where(self.alg.grades % 2 == 1, self.coeffs, 0))

    @property
    def scalar_part(self) -> complex:
        return complex(self.coeffs[0])

    def vector_part(self) -> np.ndarray:
        return self.coeffs[self.alg.vector_masks].copy()

    def magnitude(self) -> float:
        """Euclidean norm of the coefficient vector, ``sqrt(sum |c_A|^2)``."""
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def nonscalar_magnitude(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs[1:]) ** 2)))

    def is_scalar(self, atol: float = DEFAULT_ATOL) -> bool:
        return self.nonscalar_magnitude() <= atol

    def isclose(self, other, atol: float = DEFAULT_ATOL) -> bool:
        if np.isscalar(other):
            other = Multivector.scalar(self.n, other)
        self._check(other)
        return bool(np.all(np.abs(self.coeffs - other.coeffs) <= atol))

    def __eq__(self, other):
        if isinstance(other, Multivector) and other.n == self.n:
            return bool(np.array_equal(self.coeffs, other.coeffs))
        if np.isscalar(other):
            return self == Multivector.scalar(self.n, other)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"Multivector(n={self.n}, {self})"

    def __str__(self):
        terms = []
        for mask in range(self.alg.dim):
            c = complex(self.coeffs[mask])
            if c == 0:
                continue
            coeff = _format_coeff(c)
            terms.append(coeff if mask == 0 else f"{coeff}·{blade_name(mask)}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")


def vector(x, n: int | None = None) -> Multivector:
    """Embed a real n-vector as the grade-1 element ``sum x_j e_j``."""
    x = np.asarray(x, dtype=float)
    n = len(x) if n is None else n
    if x.shape != (n,):
        raise ValueError(f"expected {n} components, got shape {x.shape}")
    c = np.zeros(1 << n, dtype=np.complex128)
    c[algebra(n).vector_masks] = x
    return Multivector(n, c)


def as_vector_array(x) -> np.ndarray:
    if isinstance(x, Multivector):
        return x.vector_part().real
    return np.asarray(x, dtype=float)


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    return a * b


def grade_involution(a: Multivector) -> Multivector:
    return a.grade_involution()


def reversion(a: Multivector) -> Multivector:
    return a.reversion()


def conjugation(a: Multivector) -> Multivector:
    return a.conjugation()


def hermitian_conjugate(a: Multivector) -> Multivector:
    return a.dagger()


def dot(x, y) -> Multivector:
    """``x . y = -<x, y>`` as a scalar multivector."""
    x, y = as_vector_array(x), as_vector_array(y)
    if x.shape != y.shape:
        raise AlgebraMismatchError("vectors of different dimension")
    return Multivector.scalar(len(x), -float(np.dot(x, y)))


def wedge(x, y) -> Multivector:
    """Outer product ``sum_{j<k} e_j e_k (x_j y_k - x_k y_j)``."""
    x, y = as_vector_array(x), as_vector_array(y)
    if x.shape != y.shape:
        raise AlgebraMismatchError("vectors of different dimension")
    n = len(x)
    c = np.zeros(1 << n, dtype=np.complex128)
    for j in range(n):
        for k in range(j + 1, n):
            c[(1 << j) | (1 << k)] = x[j] * y[k] - x[k] * y[j]
    return Multivector(n, c)


def reflect(omega, x, tol: float = 1e-12) -> np.ndarray:
    """Reflection ``omega x omega`` in the hyperplane orthogonal to unit ``omega``."""
    w, v = as_vector_array(omega), as_vector_array(x)
    if abs(np.linalg.norm(w) - 1.0) > tol:
        raise ValueError(f"reflection axis must be a unit vector, |omega| = {np.linalg.norm(w)!r}")
    if w.shape != v.shape:
        raise AlgebraMismatchError("vectors of different dimension")
    wm = vector(w)
    out = wm * vector(v) * wm
    return out.vector_part().real
