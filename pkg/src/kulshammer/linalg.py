"""Exact dense linear algebra over prime fields GF(p).

Matrices are numpy integer arrays with entries reduced mod p.  Subspaces
carry a reduced-row-echelon basis, which is canonical: two subspaces are
equal iff their basis arrays are identical, so equality is a byte
comparison.  Everything is immutable after construction and all
operations are pure functions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DimensionMismatchError(ValueError):
    pass


class ContainmentError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    return p


@dataclass(frozen=True)
class Fp:
    """A residue in GF(p).  The modulus is validated prime."""

    p: int
    value: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _lift(self, other) -> "Fp":
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixed moduli")
            return other
        return Fp(self.p, int(other))

    def __add__(self, other):
        o = self._lift(other)
        return Fp(self.p, self.value + o.value)

    def __sub__(self, other):
        o = self._lift(other)
        return Fp(self.p, self.value - o.value)

    def __neg__(self):
        return Fp(self.p, -self.value)

    def __mul__(self, other):
        o = self._lift(other)
        return Fp(self.p, self.value * o.value)

    def inverse(self) -> "Fp":
        if self.value == 0:
            raise ZeroDivisionError("inverse of 0 in GF(p)")
        return Fp(self.p, pow(self.value, self.p - 2, self.p))

    def __truediv__(self, other):
        o = self._lift(other)
        return self * o.inverse()


def asmat(entries, p: int) -> np.ndarray:
    """Coerce to a 2-d integer matrix with entries reduced mod p."""
    m = np.asarray(entries, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise ValueError("expected a matrix")
    return m % p


def inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, p - 2, p)


def rref(m, p: int) -> tuple[np.ndarray, int]:
    """Reduced row echelon form and rank.

    Deterministic: pivots are chosen leftmost-column first, topmost
    available row, and elimination clears the full column.
    """
    a = asmat(m, p).copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivots = np.nonzero(a[r:, c])[0]
        if pivots.size == 0:
            continue
        pr = r + int(pivots[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        a[r] = (a[r] * inv_mod(a[r, c], p)) % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        r += 1
    return a, r


def rank(m, p: int) -> int:
    return rref(m, p)[1]


def _rref_basis(vectors, p: int, ambient: int) -> np.ndarray:
    if len(vectors) == 0:
        return np.zeros((0, ambient), dtype=np.int64)
    a, r = rref(np.asarray(vectors, dtype=np.int64).reshape(-1, ambient), p)
    return a[:r]


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(p)^n with canonical RREF row basis."""

    p: int
    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.int64) % self.p
        if b.ndim != 2 or b.shape[1] != self.ambient_dim:
            raise DimensionMismatchError(
                f"basis shape {b.shape} does not match ambient dim {self.ambient_dim}"
            )
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @staticmethod
    def from_vectors(vectors, p: int, ambient_dim: int) -> "Subspace":
        return Subspace(p, ambient_dim, _rref_basis(vectors, p, ambient_dim))

    @staticmethod
    def zero(ambient_dim: int, p: int) -> "Subspace":
        return Subspace(p, ambient_dim, np.zeros((0, ambient_dim), dtype=np.int64))

    @staticmethod
    def full(ambient_dim: int, p: int) -> "Subspace":
        return Subspace(p, ambient_dim, np.eye(ambient_dim, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def _check_compatible(self, other: "Subspace"):
        if self.p != other.p or self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError("incompatible ambient spaces")

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and self.basis.shape == other.basis.shape
            and bool(np.array_equal(self.basis, other.basis))
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis.tobytes()))

    def reduce(self, v) -> np.ndarray:
        """Remainder of v after elimination against the RREF basis."""
        w = np.asarray(v, dtype=np.int64).copy() % self.p
        if w.shape != (self.ambient_dim,):
            raise DimensionMismatchError("vector has wrong length")
        for row in self.basis:
            c = int(np.nonzero(row)[0][0])
            if w[c]:
                w = (w - w[c] * row) % self.p
        return w

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check_compatible(other)
        return all(self.contains(row) for row in other.basis)

    def coordinates(self, v) -> np.ndarray:
        """Coordinates of v in the RREF basis; raises if v is outside."""
        w = np.asarray(v, dtype=np.int64).copy() % self.p
        coords = np.zeros(self.dim, dtype=np.int64)
        for i, row in enumerate(self.basis):
            c = int(np.nonzero(row)[0][0])
            coords[i] = w[c]
            if w[c]:
                w = (w - w[c] * row) % self.p
        if w.any():
            raise ContainmentError("vector is not in the subspace")
        return coords

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        stacked = np.vstack([self.basis, other.basis])
        return Subspace.from_vectors(stacked, self.p, self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.p)
        # (u, w) with u*A - w*B = 0  <=>  u*A lies in both row spaces
        stacked = np.vstack([self.basis, (-other.basis) % self.p])
        ker = kernel(stacked.T, self.p)
        vecs = (ker.basis[:, : self.dim] @ self.basis) % self.p
        return Subspace.from_vectors(vecs, self.p, self.ambient_dim)

    def __repr__(self):
        return f"Subspace(p={self.p}, ambient={self.ambient_dim}, dim={self.dim})"


def kernel(m, p: int) -> Subspace:
    """Right null space {v : m v = 0} as a canonical subspace."""
    a = asmat(m, p)
    rows, cols = a.shape
    r, rk = rref(a, p)
    pivot_cols = []
    for i in range(rk):
        pivot_cols.append(int(np.nonzero(r[i])[0][0]))
    free_cols = [c for c in range(cols) if c not in pivot_cols]
    vecs = np.zeros((len(free_cols), cols), dtype=np.int64)
    for k, c in enumerate(free_cols):
        vecs[k, c] = 1
        for i, pc in enumerate(pivot_cols):
            vecs[k, pc] = (-r[i, c]) % p
    return Subspace.from_vectors(vecs, p, cols)


def image(m, p: int) -> Subspace:
    """Column space of m, i.e. the image of v -> m v."""
    a = asmat(m, p)
    return Subspace.from_vectors(a.T, p, a.shape[0])


def row_space(m, p: int) -> Subspace:
    a = asmat(m, p)
    return Subspace.from_vectors(a, p, a.shape[1])


def solve(m, b, p: int):
    """One solution of m x = b, or None if inconsistent."""
    a = asmat(m, p)
    rows, cols = a.shape
    bb = np.asarray(b, dtype=np.int64).reshape(rows, 1) % p
    aug, _ = rref(np.hstack([a, bb]), p)
    x = np.zeros(cols, dtype=np.int64)
    for row in aug:
        nz = np.nonzero(row)[0]
        if nz.size == 0:
            continue
        c = int(nz[0])
        if c == cols:
            return None
        x[c] = row[cols]
    return x


def quotient_basis(big: Subspace, small: Subspace) -> np.ndarray:
    """Rows completing small's basis to big's: coset representatives."""
    big._check_compatible(small)
    if not big.contains_subspace(small):
        raise ContainmentError("small is not contained in big")
    reps = []
    current = small
    for row in big.basis:
        if not current.contains(row):
            reps.append(row)
            current = current.sum(
                Subspace.from_vectors([row], big.p, big.ambient_dim)
            )
    out = np.array(reps, dtype=np.int64).reshape(len(reps), big.ambient_dim)
    out.setflags(write=False)
    return out


def preimage(m, target: Subspace, p: int) -> Subspace:
    """{v : m v in target} for m acting on column vectors."""
    a = asmat(m, p)
    rows, cols = a.shape
    if target.ambient_dim != rows:
        raise DimensionMismatchError("target lives in the wrong space")
    if target.dim == 0:
        return kernel(a, p)
    # m v = B^T c  for some c;  kernel of [m | -B^T], projected to v
    block = np.hstack([a, (-target.basis.T) % p])
    ker = kernel(block, p)
    vecs = ker.basis[:, :cols]
    return Subspace.from_vectors(vecs, p, cols)


class QuotientSpace:
    """Coordinates on ambient/sub, with a fixed section.

    Representatives are the canonical completion of the subspace basis
    inside a given ambient subspace (default: the full space).
    """

    def __init__(self, sub: Subspace, ambient: Subspace | None = None):
        amb = ambient if ambient is not None else Subspace.full(sub.ambient_dim, sub.p)
        if not amb.contains_subspace(sub):
            raise ContainmentError("subspace not inside ambient")
        self.p = sub.p
        self.sub = sub
        self.ambient = amb
        self.reps = quotient_basis(amb, sub)
        self.dim = self.reps.shape[0]
        # columns of the change-of-basis matrix: sub basis then reps
        self._basis = np.vstack([sub.basis, self.reps])

    def project(self, v) -> np.ndarray:
        """Quotient coordinates of an ambient vector."""
        coords = _solve_coords(self._basis.T, v, self.p)
        return coords[self.sub.dim :]

    def lift(self, coords) -> np.ndarray:
        c = np.asarray(coords, dtype=np.int64) % self.p
        if c.shape != (self.dim,):
            raise DimensionMismatchError("bad quotient coordinates")
        if self.dim == 0:
            return np.zeros(self.sub.ambient_dim, dtype=np.int64)
        return (c @ self.reps) % self.p


def _solve_coords(basis_cols: np.ndarray, v, p: int) -> np.ndarray:
    x = solve(basis_cols, v, p)
    if x is None:
        raise ContainmentError("vector is not in the span")
    return x
