"""Spinors, their rotation action, and Haar quadrature on Spin(2) and Spin(3)."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .algebra import Multivector, as_vector_array, blade_name, parse_blade, vector

UNIT_TOL = 1e-12

# positive real root of x**4 = x + 4, used by the super-Fibonacci spiral
_SPIRAL_PSI = 1.533751168755204288118041


@dataclass(frozen=True, eq=False)
class Spinor:
    """Unit even multivector ``s`` acting on vectors by ``x -> s x conj(s)``."""

    value: Multivector
    factors: tuple | None = None

    def __post_init__(self):
        v = self.value
        if v.odd().magnitude() > UNIT_TOL:
            raise ValueError("spinor must be even-grade")
        if not (v * v.conjugation()).isclose(1.0, atol=UNIT_TOL):
            raise ValueError("spinor is not unit: s conj(s) != 1")

    @property
    def n(self) -> int:
        return self.value.n

    def conj(self) -> Multivector:
        return self.value.conjugation()

    def matrix(self) -> np.ndarray:
        """Orthogonal matrix ``R`` with ``R @ x == rotate(self, x)``."""
        n = self.n
        s, sb = self.value, self.conj()
        cols = [(s * vector(np.eye(n)[j]) * sb).vector_part().real for j in range(n)]
        return np.column_stack(cols)

    @classmethod
    def identity(cls, n: int) -> Spinor:
        return cls(Multivector.scalar(n, 1.0))

    @classmethod
    def planar(cls, phi: float) -> Spinor:
        """``cos(phi) + sin(phi) e12`` in two dimensions; rotates by ``2 phi``."""
        return cls(Multivector.from_dict(2, {"1": math.cos(phi), "e12": math.sin(phi)}))

    @classmethod
    def from_quaternion(cls, q) -> Spinor:
        """Spin(3) element ``w + x e12 + y e13 + z e23`` from ``q = (w, x, y, z)``."""
        w, x, y, z = (float(t) for t in q)
        return cls(Multivector.from_dict(3, {"1": w, "e12": x, "e13": y, "e23": z}))


def spinor_from_vectors(omegas) -> Spinor:
    """Spinor ``omega_1 omega_2 ... omega_2l`` from an even number of unit vectors."""
    ws = [as_vector_array(w) for w in omegas]
    if len(ws) == 0 or len(ws) % 2:
        raise ValueError(f"need an even, non-zero number of unit vectors, got {len(ws)}")
    for w in ws:
        if abs(np.linalg.norm(w) - 1.0) > UNIT_TOL:
            raise ValueError(f"factor {w} is not a unit vector")
    s = vector(ws[0])
    for w in ws[1:]:
        s = s * vector(w)
    return Spinor(s, factors=tuple(tuple(w) for w in ws))


def rotate(s: Spinor, x) -> np.ndarray:
    if not isinstance(s, Spinor):
        s = Spinor(s)
    out = s.value * vector(as_vector_array(x)) * s.conj()
    return out.vector_part().real


@dataclass(frozen=True, eq=False)
class SpinQuadrature:
    """Nodes on Spin(n) with positive weights summing to one (Haar mass 1)."""

    nodes: tuple
    weights: np.ndarray

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise ValueError("nodes and weights differ in length")
        if np.any(self.weights <= 0) or abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be positive and sum to 1")

    def __len__(self):
        return len(self.nodes)

    @property
    def n(self) -> int:
        return self.nodes[0].n

    def matrices(self) -> np.ndarray:
        return np.stack([s.matrix() for s in self.nodes])

    def integrate(self, g) -> complex:
        return sum(w * g(s) for s, w in zip(self.nodes, self.weights))

    def coefficient_array(self) -> np.ndarray:
        return np.stack([s.value.coeffs.real for s in self.nodes])

    def to_csv(self) -> str:
        dim = 1 << self.n
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([blade_name(m) for m in range(dim)] + ["weight"])
        for s, w in zip(self.nodes, self.weights):
            writer.writerow([f"{c:.17g}" for c in s.value.coeffs.real] + [f"{w:.17g}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> SpinQuadrature:
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], rows[1:]
        masks = [parse_blade(h) for h in header[:-1]]
        n = max(masks).bit_length()
        nodes, weights = [], []
        for row in body:
            nodes.append(Spinor(Multivector.from_dict(n, {m: float(v) for m, v in zip(masks, row[:-1])})))
            weights.append(float(row[-1]))
        return cls(tuple(nodes), np.array(weights))


def _super_fibonacci(count: int) -> np.ndarray:
    # Alexa's super-Fibonacci spiral: deterministic, near-uniform on S^3
    i = np.arange(count) + 0.5
    t = i / count
    r, big_r = np.sqrt(t), np.sqrt(1.0 - t)
    alpha = 2 * np.pi * i / math.sqrt(2.0)
    beta = 2 * np.pi * i / _SPIRAL_PSI
    return np.column_stack([r * np.sin(alpha), r * np.cos(alpha), big_r * np.sin(beta), big_r * np.cos(beta)])


def haar_quadrature(n: int, resolution: int) -> SpinQuadrature:
    """Equal-weight quadrature for the normalized Haar measure on Spin(n), n in {2, 3}.

    For n=2 the nodes are ``cos(phi) + sin(phi) e12`` on a uniform grid in
    ``[0, 2 pi)``.  For n=3 they are unit quaternions on a super-Fibonacci
    spiral, identified with ``span{1, e12, e13, e23}``.
    """
    if resolution < 1:
        raise ValueError("resolution must be positive")
    if n == 2:
        phis = 2 * np.pi * np.arange(resolution) / resolution
        nodes = tuple(Spinor.planar(p) for p in phis)
    elif n == 3:
        q = _super_fibonacci(resolution)
        q /= np.linalg.norm(q, axis=1, keepdims=True)
        nodes = tuple(Spinor.from_quaternion(row) for row in q)
    else:
        raise ValueError(f"Haar quadrature is only available for n in {{2, 3}}, got {n}")
    return SpinQuadrature(nodes, np.full(resolution, 1.0 / resolution))
