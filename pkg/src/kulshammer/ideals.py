"""Kulshammer and Reynolds ideals of a finite-dimensional algebra.

All ideals are returned as canonical subspaces of the ambient
coordinate space of the algebra (they live inside the center).  The
chain Z = K_0 >= K_1 >= ... >= R is a derived invariant at the level of
dimensions, which is what the fingerprint records.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    FinDimAlgebra,
    Hh0Data,
    center,
    commutator_subspace,
    hh0,
    radical,
    validate_symmetrizing_form,
    xi_p_on_hh0,
)
from .linalg import Subspace, kernel


def t_r(alg: FinDimAlgebra, r: int, data: Hh0Data | None = None) -> Subspace:
    """Kernel of the r-th iterate of the p-power map on A/[A,A].

    T_0 = 0; the chain T_0 <= T_1 <= ... stabilizes in finitely many
    steps.  Returned in HH_0 quotient coordinates.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    h = data if data is not None else hh0(alg)
    if r == 0:
        return Subspace.zero(h.dim, alg.p)
    xi = xi_p_on_hh0(alg, h)
    power = np.eye(h.dim, dtype=np.int64)
    for _ in range(r):
        power = (xi @ power) % alg.p
    return kernel(power, alg.p)


def _annihilator_in_center(
    alg: FinDimAlgebra, zc: Subspace, lifts: list[np.ndarray], comm: Subspace
) -> Subspace:
    """{a in span(zc) : a*b in [A,A] for every b in lifts}."""
    if not lifts or zc.dim == 0:
        return zc
    from .linalg import QuotientSpace

    quot = QuotientSpace(comm)
    m = np.zeros((len(lifts) * quot.dim, zc.dim), dtype=np.int64)
    for bi, b in enumerate(lifts):
        for zi, zrow in enumerate(zc.basis):
            col = quot.project(alg.multiply(zrow, b))
            m[bi * quot.dim : (bi + 1) * quot.dim, zi] = col
    coeffs = kernel(m, alg.p)
    vecs = (coeffs.basis @ zc.basis) % alg.p
    return Subspace.from_vectors(vecs, alg.p, alg.dim)


def k_r(alg: FinDimAlgebra, r: int, data: Hh0Data | None = None) -> Subspace:
    """{a in Z(A) : a b in [A,A] whenever b^{p^r} in [A,A]}."""
    h = data if data is not None else hh0(alg)
    zc = center(alg)
    if r == 0:
        return zc
    tr = t_r(alg, r, h)
    lifts = [h.lift(row) for row in tr.basis]
    return _annihilator_in_center(alg, zc, lifts, h.commutators)


def k_r_classical(alg: FinDimAlgebra, form, r: int, data: Hh0Data | None = None) -> Subspace:
    """Orthogonal complement of {b : b^{p^r} in [A,A]} under the form."""
    report = validate_symmetrizing_form(alg, form)
    if not report:
        raise ValueError(f"invalid symmetrizing form: {report.reason}")
    g = np.asarray(form, dtype=np.int64) % alg.p
    h = data if data is not None else hh0(alg)
    tr = t_r(alg, r, h)
    # preimage of T_r in A: lifts of T_r basis together with [A,A]
    vecs = [h.lift(row) for row in tr.basis] + [row for row in h.commutators.basis]
    if not vecs:
        return Subspace.full(alg.dim, alg.p)
    b_r = np.array(vecs, dtype=np.int64)
    # a orthogonal to every b:  (a, b) = a^T g b = 0
    m = (b_r @ g.T) % alg.p
    return kernel(m, alg.p)


def stabilization_index(alg: FinDimAlgebra, data: Hh0Data | None = None) -> int:
    """Smallest r with T_r = T_{r+1}; the K-chain is constant beyond it."""
    h = data if data is not None else hh0(alg)
    r = 0
    prev = t_r(alg, 0, h)
    while True:
        nxt = t_r(alg, r + 1, h)
        if nxt == prev:
            return r
        prev = nxt
        r += 1


def default_r_max(alg: FinDimAlgebra) -> int:
    return 1 + max(1, math.ceil(math.log(max(alg.dim, 2), alg.p)))


def reynolds(alg: FinDimAlgebra, r_max: int | None = None) -> Subspace:
    """Intersection of all K_r: the stabilized tail of the chain."""
    h = hh0(alg)
    rmax = r_max if r_max is not None else default_r_max(alg)
    rstar = min(stabilization_index(alg, h), rmax)
    return k_r(alg, rstar, h)


def reynolds_via_radical(alg: FinDimAlgebra) -> Subspace:
    """{a in Z(A) : a J <= [A,A]}, computed from the radical directly."""
    zc = center(alg)
    jac = radical(alg)
    comm = commutator_subspace(alg)
    lifts = [row for row in jac.basis]
    return _annihilator_in_center(alg, zc, lifts, comm)


@dataclass(frozen=True)
class IdealChain:
    alg: FinDimAlgebra
    k_chain: tuple[Subspace, ...]  # K_0 .. K_{r_max}
    t_chain: tuple[Subspace, ...]
    reynolds: Subspace
    r_star: int

    def __post_init__(self):
        for a, b in zip(self.k_chain, self.k_chain[1:]):
            if not a.contains_subspace(b):
                raise AssertionError("K-chain containment violated")
        for a, b in zip(self.t_chain, self.t_chain[1:]):
            if not b.contains_subspace(a):
                raise AssertionError("T-chain containment violated")
        if not self.k_chain[-1].contains_subspace(self.reynolds):
            raise AssertionError("Reynolds ideal escapes the chain")

    @property
    def k_dims(self) -> list[int]:
        return [s.dim for s in self.k_chain]

    @property
    def t_dims(self) -> list[int]:
        return [s.dim for s in self.t_chain]


def ideal_chain(alg: FinDimAlgebra, r_max: int | None = None) -> IdealChain:
    rmax = r_max if r_max is not None else default_r_max(alg)
    h = hh0(alg)
    ks = tuple(k_r(alg, r, h) for r in range(rmax + 1))
    ts = tuple(t_r(alg, r, h) for r in range(rmax + 1))
    rstar = stabilization_index(alg, h)
    return IdealChain(alg=alg, k_chain=ks, t_chain=ts, reynolds=ks[-1], r_star=rstar)


@dataclass(frozen=True)
class Fingerprint:
    """Dimension data transportable along derived equivalences.

    k_dims are the invariant payload; hh0_dim and t_dims are extra
    separating data (cheap to compute, flagged as extra in reports).
    """

    p: int
    k_dims: tuple[int, ...]
    reynolds_dim: int
    hh0_dim: int
    t_dims: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "k_dims": list(self.k_dims),
            "reynolds_dim": self.reynolds_dim,
            "hh0_dim": self.hh0_dim,
            "extra_t_dims": list(self.t_dims),
        }


def fingerprint(alg: FinDimAlgebra, r_max: int | None = None) -> Fingerprint:
    chain = ideal_chain(alg, r_max)
    return Fingerprint(
        p=alg.p,
        k_dims=tuple(chain.k_dims),
        reynolds_dim=chain.reynolds.dim,
        hh0_dim=hh0(alg).dim,
        t_dims=tuple(chain.t_dims),
    )


def compare_fingerprints(a: Fingerprint, b: Fingerprint) -> str:
    """'equal' or a description of the first differing entry."""
    if a.p != b.p:
        return f"differ at p: {a.p} vs {b.p}"
    la, lb = list(a.k_dims), list(b.k_dims)
    n = max(len(la), len(lb))
    la += [la[-1]] * (n - len(la))
    lb += [lb[-1]] * (n - len(lb))
    for r, (x, y) in enumerate(zip(la, lb)):
        if x != y:
            return f"differ at dim K_{r}: {x} vs {y}"
    if a.reynolds_dim != b.reynolds_dim:
        return f"differ at dim R: {a.reynolds_dim} vs {b.reynolds_dim}"
    if a.hh0_dim != b.hh0_dim:
        return f"differ at dim HH0: {a.hh0_dim} vs {b.hh0_dim}"
    return "equal"
