"""Chain-level computations over the dual numbers k[x]/x^2.

Complexes of free right modules with matrix differentials, chain-map
spaces modulo homotopy, Hattori-Stallings traces, and the two-sided
resolution machinery (bicomplex totalization, the section/retraction
pair, and the characteristic-map composites).

This is the oracle layer: it knows nothing about the normal-form
classification of interval complexes and certifies it instead.

Conventions: complexes are cohomological (differential raises degree by
one); X[t] has components X^{i+t} and differential (-1)^t d; a morphism
X -> Y[t] has components f_i: X^i -> Y^{i+t}; composition of normal
data (f: X -> Y[t], g: Y -> Z[s]) is g[t] o f with (g[t])_i = g_{i+t}.

Matrix entries are elements a + b*x, stored as integer arrays of shape
(rows, cols, 2) with coefficients mod p.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import QuotientSpace, Subspace, check_prime, kernel, solve


def lzeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols, 2), dtype=np.int64)

def lscalar(rows: int, a: int = 1, b: int = 0) -> np.ndarray:
    """a + b*x times the identity matrix."""
    m = lzeros(rows, rows)
    for i in range(rows):
        m[i, i, 0] = a
        m[i, i, 1] = b
    return m


def lmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Matrix product over k[x]/x^2."""
    out = lzeros(a.shape[0], b.shape[1])
    out[:, :, 0] = a[:, :, 0] @ b[:, :, 0]
    out[:, :, 1] = a[:, :, 0] @ b[:, :, 1] + a[:, :, 1] @ b[:, :, 0]
    return out % p


@dataclass(frozen=True)
class LambdaComplex:
    """Bounded complex of free modules over the dual numbers."""

    p: int
    ranks: dict
    diff: dict  # i -> matrix X^i -> X^{i+1}

    def __post_init__(self):
        check_prime(self.p)
        for i, d in self.diff.items():
            if d.shape != (self.rank(i + 1), self.rank(i), 2):
                raise ValueError(f"differential at degree {i} has shape {d.shape}")

    def rank(self, i: int) -> int:
        return self.ranks.get(i, 0)

    def d(self, i: int) -> np.ndarray:
        m = self.diff.get(i)
        if m is None:
            return lzeros(self.rank(i + 1), self.rank(i))
        return m

    @property
    def degrees(self) -> list[int]:
        return sorted(self.ranks)

    def validate(self):
        for i in self.degrees:
            dd = lmul(self.d(i + 1), self.d(i), self.p)
            if dd.any():
                raise ValueError(f"d о d != 0 at degree {i}")

    def shift(self, t: int) -> "LambdaComplex":
        """X[t]: components X^{i+t}, differential (-1)^t d."""
        sign = 1 if t % 2 == 0 else self.p - 1
        ranks = {i - t: r for i, r in self.ranks.items()}
        diff = {i - t: (sign * d) % self.p for i, d in self.diff.items()}
        return LambdaComplex(p=self.p, ranks=ranks, diff=diff)

    @staticmethod
    def interval(m: int, n: int, p: int) -> "LambdaComplex":
        """Rank-one terms in degrees m..n with multiplication-by-x maps."""
        if m > n:
            raise ValueError("need m <= n")
        ranks = {i: 1 for i in range(m, n + 1)}
        diff = {}
        for i in range(m, n):
            d = lzeros(1, 1)
            d[0, 0, 1] = 1
            diff[i] = d
        return LambdaComplex(p=p, ranks=ranks, diff=diff)


def shift_chain_map(f: dict, t: int) -> dict:
    """Components of f[t]: (f[t])_i = f_{i+t}."""
    return {i - t: m for i, m in f.items()}


def compose_chain_maps(x: LambdaComplex, f: dict, g: dict, p: int) -> dict:
    """(g o f)_i = g_i f_i, for composable componentwise data."""
    out = {}
    for i, fi in f.items():
        gi = g.get(i)
        if gi is None or fi.shape[0] == 0:
            continue
        out[i] = lmul(gi, fi, p)
    return out


class MapIndex:
    """Flattened coordinates for component maps X^i -> Y^i."""

    def __init__(self, x: LambdaComplex, y: LambdaComplex):
        self.x = x
        self.y = y
        self.slots = []
        self.offset = {}
        pos = 0
        degs = sorted(set(x.degrees) | set(y.degrees))
        for i in degs:
            rx, ry = x.rank(i), y.rank(i)
            if rx and ry:
                self.offset[i] = pos
                self.slots.append((i, ry, rx))
                pos += ry * rx * 2
        self.dim = pos

    def unflatten(self, vec: np.ndarray) -> dict:
        out = {}
        for i, ry, rx in self.slots:
            block = vec[self.offset[i] : self.offset[i] + ry * rx * 2]
            out[i] = np.asarray(block, dtype=np.int64).reshape(ry, rx, 2)
        return out

    def flatten(self, f: dict) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.int64)
        for i, m in f.items():
            if i in self.offset and m.any():
                ry, rx = self.y.rank(i), self.x.rank(i)
                vec[self.offset[i] : self.offset[i] + ry * rx * 2] = m.reshape(-1)
        return vec


def chain_map_space(x: LambdaComplex, y: LambdaComplex) -> tuple[Subspace, MapIndex]:
    """All chain maps X -> Y as a subspace of the flattened coordinates."""
    p = x.p
    idx = MapIndex(x, y)
    if idx.dim == 0:
        return Subspace.zero(0, p), idx
    eqs = []
    degs = sorted(set(x.degrees) | set(y.degrees))
    for i in degs:
        ry1 = y.rank(i + 1)
        rx = x.rank(i)
        if ry1 == 0 or rx == 0:
            continue
        # f_{i+1} d_x^i - d_y^i f_i = 0, entrywise over (row, col, slot)
        block = np.zeros((ry1 * rx * 2, idx.dim), dtype=np.int64)
        dx = x.d(i)
        dy = y.d(i)
        if i + 1 in idx.offset:
            ry, rxx = y.rank(i + 1), x.rank(i + 1)
            for r in range(ry):
                for c in range(rxx):
                    for s in range(2):
                        col = idx.offset[i + 1] + (r * rxx + c) * 2 + s
                        for cc in range(rx):
                            a, b = int(dx[c, cc, 0]), int(dx[c, cc, 1])
                            if s == 0:
                                block[(r * rx + cc) * 2 + 0, col] += a
                                block[(r * rx + cc) * 2 + 1, col] += b
                            else:
                                block[(r * rx + cc) * 2 + 1, col] += a
        if i in idx.offset:
            ry0, rx0 = y.rank(i), x.rank(i)
            for r in range(ry0):
                for c in range(rx0):
                    for s in range(2):
                        col = idx.offset[i] + (r * rx0 + c) * 2 + s
                        for rr in range(ry1):
                            a, b = int(dy[rr, r, 0]), int(dy[rr, r, 1])
                            if s == 0:
                                block[(rr * rx + c) * 2 + 0, col] -= a
                                block[(rr * rx + c) * 2 + 1, col] -= b
                            else:
                                block[(rr * rx + c) * 2 + 1, col] -= a
        eqs.append(block % p)
    if not eqs:
        return Subspace.full(idx.dim, p), idx
    return kernel(np.vstack(eqs), p), idx


def homotopy_space(x: LambdaComplex, y: LambdaComplex) -> Subspace:
    """Span of d_y h + h d_x over all degree -1 maps h."""
    p = x.p
    idx = MapIndex(x, y)
    vecs = []
    degs = sorted(set(x.degrees) | set(y.degrees))
    for i in degs:
        ryh = y.rank(i - 1)
        rxh = x.rank(i)
        if ryh == 0 or rxh == 0:
            continue
        for r in range(ryh):
            for c in range(rxh):
                for s in range(2):
                    h = lzeros(ryh, rxh)
                    h[r, c, s] = 1
                    g = {}
                    # d_y^{i-1} h : X^i -> Y^i
                    m1 = lmul(y.d(i - 1), h, p)
                    if m1.any():
                        g[i] = g.get(i, lzeros(y.rank(i), x.rank(i))) + m1
                    # h d_x^{i-1} : X^{i-1} -> Y^{i-1}
                    if x.rank(i - 1):
                        m2 = lmul(h, x.d(i - 1), p)
                        if m2.any():
                            g[i - 1] = g.get(i - 1, lzeros(y.rank(i - 1), x.rank(i - 1))) + m2
                    vec = idx.flatten({k: v % p for k, v in g.items()})
                    if vec.any():
                        vecs.append(vec)
    return Subspace.from_vectors(vecs, p, idx.dim)


@dataclass
class HomSpace:
    """Hom(X, Y) in the homotopy category, with coordinates."""

    x: LambdaComplex
    y: LambdaComplex
    cycles: Subspace
    boundaries: Subspace
    quotient: QuotientSpace
    index: MapIndex

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def class_of(self, f: dict) -> np.ndarray:
        return self.quotient.project(self.index.flatten(f))

    def rep(self, coords) -> dict:
        return self.index.unflatten(self.quotient.lift(coords))


def hom_space(x: LambdaComplex, y: LambdaComplex) -> HomSpace:
    cycles, idx = chain_map_space(x, y)
    bounds = homotopy_space(x, y)
    if not cycles.contains_subspace(bounds):
        raise AssertionError("homotopies are not chain maps; solver is inconsistent")
    quot = QuotientSpace(bounds, ambient=cycles)
    return HomSpace(x=x, y=y, cycles=cycles, boundaries=bounds, quotient=quot, index=idx)


def hattori_stallings(x: LambdaComplex, f: dict, p: int) -> np.ndarray:
    """Alternating sum of matrix traces, as an element of k[x]/x^2.

    The base algebra is commutative, so the value lives in the algebra
    itself (the commutator space is zero).
    """
    out = np.zeros(2, dtype=np.int64)
    for i, m in f.items():
        r = min(x.rank(i), m.shape[0], m.shape[1])
        sign = 1 if i % 2 == 0 else -1
        for k in range(r):
            out = (out + sign * m[k, k]) % p
    return out % p


# ---------------------------------------------------------------------------
# the two-sided resolution, its totalization, and the section/retraction


def _dplus(p: int) -> np.ndarray:
    m = lzeros(2, 2)
    m[0, 0, 1] = 1      # x on the first generator
    m[1, 0, 0] = 1      # plus the second generator
    m[1, 1, 1] = 1      # x on the second generator
    return m % p


def _dminus(p: int) -> np.ndarray:
    m = lzeros(2, 2)
    m[0, 0, 1] = p - 1  # -x on the first generator
    m[1, 0, 0] = 1
    m[1, 1, 1] = p - 1
    return m % p


def _xtensor1(p: int) -> np.ndarray:
    m = lzeros(2, 2)
    m[1, 0, 0] = 1      # 1(x)1 -> x(x)1, x(x)1 -> 0
    return m % p


def build_totalization(n: int, p: int, depth: int | None = None) -> LambdaComplex:
    """Totalization of the interval-[−n,0] bicomplex, truncated at -depth.

    Summand k of total degree -i is the pair (row 1-k, column k-1-i);
    each is a free rank-2 module.  Diagonal blocks alternate the two
    resolution differentials; superdiagonal blocks carry signed vertical
    maps.  d o d = 0 is validated.
    """
    if depth is None:
        depth = n + 6
    dp, dm, xt = _dplus(p), _dminus(p), _xtensor1(p)

    def summands(i: int) -> int:
        return min(i, n) + 1 if i >= 0 else 0

    ranks = {}
    diff = {}
    for i in range(depth + 1):
        r = summands(i)
        if r:
            ranks[-i] = 2 * r
    for i in range(1, depth + 1):
        src = summands(i)
        dst = summands(i - 1)
        if src == 0 or dst == 0:
            continue
        d = lzeros(2 * dst, 2 * src)
        for k in range(1, dst + 1):
            blk = dp if (i + k - 1) % 2 == 0 else dm
            d[2 * (k - 1) : 2 * k, 2 * (k - 1) : 2 * k] = blk
            if k + 1 <= src:
                sgn = 1 if (i + k) % 2 == 0 else p - 1
                d[2 * (k - 1) : 2 * k, 2 * k : 2 * (k + 1)] = (sgn * xt) % p
        diff[-i] = d % p
    c = LambdaComplex(p=p, ranks=ranks, diff=diff)
    for i in range(-depth + 1, 1):
        dd = lmul(c.d(i), c.d(i - 1), p)
        if dd.any():
            raise AssertionError(f"totalization differential fails d o d = 0 at {i - 1}")
    return c


def _iota1(p: int) -> np.ndarray:
    m = lzeros(2, 1)
    m[0, 0, 0] = 1
    return m


def _pi1(p: int) -> np.ndarray:
    m = lzeros(1, 2)
    m[0, 0, 0] = 1
    return m


def _x2(p: int) -> np.ndarray:
    m = lzeros(1, 2)
    m[0, 1, 1] = 1
    return m


def _ceil_half(i: int) -> int:
    return -(-i // 2)


def iota_map(n: int, p: int, c: LambdaComplex) -> dict:
    """Section interval -> totalization, with the prescribed signs."""
    out = {}
    i1 = _iota1(p)
    for i in range(n + 1):
        r = min(i, n) + 1
        m = lzeros(2 * r, 1)
        for k in range(1, r + 1):
            sgn = (-1) ** _ceil_half(i + 1 - k)
            m[2 * (k - 1) : 2 * k, :] = (sgn * i1) % p
        out[-i] = m % p
    return out


def pi_map(n: int, p: int, c: LambdaComplex, iota: dict) -> tuple[dict, np.ndarray]:
    """Retraction totalization -> interval; bottom-row entries are solved.

    Degrees above -n use the single-entry projection with the known
    sign; the full bottom component is determined by the linear system
    (chain-map conditions plus pi o iota = identity) and returned along
    with the solved coefficient vector.
    """
    out = {}
    p1 = _pi1(p)
    for i in range(n):  # degrees -i with i < n
        r = min(i, n) + 1
        m = lzeros(1, 2 * r)
        m[:, 0:2] = ((-1) ** _ceil_half(i) * p1) % p
        out[-i] = m % p
    r = n + 1
    dc_low = c.d(-n - 1)   # C^{-n-1} -> C^{-n}
    dcn = c.d(-n)          # C^{-n}   -> C^{-n+1}
    dint = lzeros(1, 1)
    dint[0, 0, 1] = 1      # multiplication by x out of the bottom degree
    # unknowns: the 2r algebra entries (4r field coordinates) of pi_{-n}
    probe = []
    for col in range(2 * r):
        for s in range(2):
            e = lzeros(1, 2 * r)
            e[0, col, s] = 1
            row_a = _flatten_lrow(lmul(e, dc_low, p))    # pi_{-n} d = 0
            if n >= 1:
                row_b = _flatten_lrow(lmul(dint, e, p))  # d_int pi_{-n} = pi_{-n+1} d
            else:
                row_b = np.zeros(0, dtype=np.int64)
            row_c = _flatten_lrow(lmul(e, iota[-n], p))  # pi o iota = Id
            probe.append(np.concatenate([row_a, row_b, row_c]))
    target_a = np.zeros(2 * 2 * r, dtype=np.int64)
    target_b = _flatten_lrow(lmul(out[-(n - 1)], dcn, p)) if n >= 1 else np.zeros(0, dtype=np.int64)
    ident = lzeros(1, 1)
    ident[0, 0, 0] = 1
    target_vec = np.concatenate([target_a, target_b % p, _flatten_lrow(ident)])
    mat = np.array(probe, dtype=np.int64).T % p
    sol = solve(mat, target_vec, p)
    if sol is None:
        raise AssertionError("no retraction with the prescribed upper rows exists")
    bottom = lzeros(1, 2 * r)
    for col in range(2 * r):
        for s in range(2):
            bottom[0, col, s] = sol[col * 2 + s]
    out[-n] = bottom % p
    return out, sol


def _flatten_lrow(m: np.ndarray) -> np.ndarray:
    return np.asarray(m, dtype=np.int64).reshape(-1)


def verify_chain_map(x: LambdaComplex, y: LambdaComplex, f: dict, p: int) -> bool:
    degs = sorted(set(x.degrees) | set(y.degrees))
    for i in degs:
        fi = f.get(i, lzeros(y.rank(i), x.rank(i)))
        fi1 = f.get(i + 1, lzeros(y.rank(i + 1), x.rank(i + 1)))
        lhs = lmul(fi1, x.d(i), p) if x.rank(i) and y.rank(i + 1) else None
        rhs = lmul(y.d(i), fi, p) if x.rank(i) and y.rank(i + 1) else None
        if lhs is None:
            continue
        if ((lhs - rhs) % p).any():
            return False
    return True


def solve_homotopy(x: LambdaComplex, y: LambdaComplex, g: dict, interior: list[int]) -> dict | None:
    """Find h with (d_y h + h d_x)_i = g_i for i in `interior`."""
    p = x.p
    hidx = []
    offset = {}
    pos = 0
    degs = sorted(set(x.degrees) | set(y.degrees))
    for i in degs:
        ry, rx = y.rank(i - 1), x.rank(i)
        if ry and rx:
            offset[i] = pos
            hidx.append((i, ry, rx))
            pos += ry * rx * 2
    if pos == 0:
        return None
    rows = []
    targets = []
    for i in interior:
        ry, rx = y.rank(i), x.rank(i)
        if ry == 0 or rx == 0:
            continue
        block = np.zeros((ry * rx * 2, pos), dtype=np.int64)
        # d_y^{i-1} h_i
        if i in offset:
            dy = y.d(i - 1)
            for r in range(y.rank(i - 1)):
                for cc in range(rx):
                    for s in range(2):
                        col = offset[i] + (r * rx + cc) * 2 + s
                        for rr in range(ry):
                            a, b = int(dy[rr, r, 0]), int(dy[rr, r, 1])
                            if s == 0:
                                block[(rr * rx + cc) * 2 + 0, col] += a
                                block[(rr * rx + cc) * 2 + 1, col] += b
                            else:
                                block[(rr * rx + cc) * 2 + 1, col] += a
        # h_{i+1} d_x^i
        if i + 1 in offset:
            dx = x.d(i)
            rx1 = x.rank(i + 1)
            for r in range(ry):
                for cc in range(rx1):
                    for s in range(2):
                        col = offset[i + 1] + (r * rx1 + cc) * 2 + s
                        for c0 in range(rx):
                            a, b = int(dx[cc, c0, 0]), int(dx[cc, c0, 1])
                            if s == 0:
                                block[(r * rx + c0) * 2 + 0, col] += a
                                block[(r * rx + c0) * 2 + 1, col] += b
                            else:
                                block[(r * rx + c0) * 2 + 1, col] += a
        rows.append(block % p)
        gi = g.get(i, lzeros(ry, rx))
        targets.append(gi.reshape(-1) % p)
    if not rows:
        return None
    sol = solve(np.vstack(rows), np.concatenate(targets), p)
    if sol is None:
        return None
    out = {}
    for i, ry, rx in hidx:
        out[i] = sol[offset[i] : offset[i] + ry * rx * 2].reshape(ry, rx, 2)
    return out
