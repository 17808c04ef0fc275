"""Finite-dimensional unital associative algebras over GF(p).

An algebra is given by structure constants: table[i, j] is the
coordinate vector of e_i * e_j.  Construction validates the modulus,
the unit law and associativity on all basis triples, so downstream
code can assume a genuine algebra.  The JSON schema emitted/accepted by
to_json/from_structure_constants is the universal interchange format;
the quiver, group and matrix constructors are sugar on top of it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import QuotientSpace, Subspace, check_prime, kernel


class AlgebraError(ValueError):
    pass


class RadicalUnsupportedError(RuntimeError):
    """The char-p radical strategy could not certify its candidate."""


@dataclass(frozen=True)
class FinDimAlgebra:
    p: int
    dim: int
    labels: tuple[str, ...]
    table: np.ndarray  # shape (dim, dim, dim); table[i, j] = coords of e_i e_j
    unit: np.ndarray
    form: np.ndarray | None = None          # optional symmetrizing gram
    radical_rows: np.ndarray | None = None  # optional recorded radical basis

    def __post_init__(self):
        check_prime(self.p)
        t = np.asarray(self.table, dtype=np.int64) % self.p
        u = np.asarray(self.unit, dtype=np.int64) % self.p
        if t.shape != (self.dim, self.dim, self.dim):
            raise AlgebraError(f"table shape {t.shape}, expected cube of side {self.dim}")
        if u.shape != (self.dim,):
            raise AlgebraError("unit has wrong length")
        if len(self.labels) != self.dim:
            raise AlgebraError("labels length != dim")
        t.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "unit", u)
        if self.form is not None:
            g = np.asarray(self.form, dtype=np.int64) % self.p
            g.setflags(write=False)
            object.__setattr__(self, "form", g)
        if self.radical_rows is not None:
            rr = np.asarray(self.radical_rows, dtype=np.int64).reshape(-1, self.dim) % self.p
            rr.setflags(write=False)
            object.__setattr__(self, "radical_rows", rr)
        self._validate()

    def _validate(self):
        t, p = self.table, self.p
        left = np.einsum("ijm,mkl->ijkl", t, t) % p
        right = np.einsum("jkm,iml->ijkl", t, t) % p
        bad = np.argwhere((left - right) % p != 0)
        if bad.size:
            i, j, k, _ = bad[0]
            raise AlgebraError(
                f"non-associative table at triple "
                f"({self.labels[i]},{self.labels[j]},{self.labels[k]})"
            )
        lu = np.einsum("i,ijk->jk", self.unit, t) % p
        ru = np.einsum("j,ijk->ik", self.unit, t) % p
        eye = np.eye(self.dim, dtype=np.int64)
        if not np.array_equal(lu, eye) or not np.array_equal(ru, eye):
            raise AlgebraError("unit vector does not act as identity")

    def multiply(self, a, b) -> np.ndarray:
        av = np.asarray(a, dtype=np.int64) % self.p
        bv = np.asarray(b, dtype=np.int64) % self.p
        return np.einsum("i,j,ijk->k", av, bv, self.table) % self.p

    def power(self, a, k: int) -> np.ndarray:
        out = self.unit.copy()
        for _ in range(k):
            out = self.multiply(out, a)
        return out

    def left_mult_operator(self, a) -> np.ndarray:
        """Matrix of x -> a x on column coordinate vectors."""
        av = np.asarray(a, dtype=np.int64) % self.p
        return np.einsum("i,ijk->kj", av, self.table) % self.p

    def right_mult_operator(self, a) -> np.ndarray:
        av = np.asarray(a, dtype=np.int64) % self.p
        return np.einsum("j,ijk->ki", av, self.table) % self.p

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.table, np.swapaxes(self.table, 0, 1)))

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def element_from_label(self, label: str) -> np.ndarray:
        return self.basis_vector(self.labels.index(label))

    def describe(self, v) -> str:
        parts = []
        for c, lab in zip(np.asarray(v) % self.p, self.labels):
            if c == 0:
                continue
            parts.append(lab if c == 1 else f"{c}*{lab}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        data = {
            "p": self.p,
            "dim": self.dim,
            "labels": list(self.labels),
            "unit": self.unit.tolist(),
            "table": self.table.tolist(),
        }
        if self.form is not None:
            data["form"] = self.form.tolist()
        if self.radical_rows is not None:
            data["radical"] = self.radical_rows.tolist()
        return data


def from_structure_constants(data: dict) -> FinDimAlgebra:
    """Build and validate an algebra from its JSON description."""
    try:
        p = int(data["p"])
        dim = int(data["dim"])
        labels = tuple(str(x) for x in data.get("labels", [f"e{i}" for i in range(dim)]))
        table = np.asarray(data["table"], dtype=np.int64)
        unit = np.asarray(data["unit"], dtype=np.int64)
    except (KeyError, TypeError, ValueError) as exc:
        raise AlgebraError(f"malformed algebra description: {exc}") from exc
    form = data.get("form")
    radical_rows = data.get("radical")
    return FinDimAlgebra(
        p=p, dim=dim, labels=labels, table=table, unit=unit,
        form=None if form is None else np.asarray(form, dtype=np.int64),
        radical_rows=None if radical_rows is None else np.asarray(radical_rows, dtype=np.int64),
    )


def dual_numbers(p: int) -> FinDimAlgebra:
    """k[x]/x^2 over GF(p), with its standard symmetrizing form."""
    table = np.array([[[1, 0], [0, 1]], [[0, 1], [0, 0]]], dtype=np.int64)
    form = np.array([[0, 1], [1, 0]], dtype=np.int64)
    return FinDimAlgebra(
        p=p, dim=2, labels=("1", "x"), table=table,
        unit=np.array([1, 0], dtype=np.int64), form=form,
        radical_rows=np.array([[0, 1]], dtype=np.int64),
    )


def monomial_quiver_algebra(vertices, arrows, zero_relations, p: int) -> FinDimAlgebra:
    """Path algebra of a quiver modulo monomial (path) relations.

    vertices: list of names.  arrows: list of (name, source, target).
    zero_relations: list of paths, each a list of arrow names, declared
    zero.  The basis is the set of nonzero paths; paths compose
    left-to-right (p followed by q).  Finite dimension is detected with
    the path-length bound equal to the total relation length; a path
    surviving at that length means the nonzero-path set is infinite.
    The radical basis (paths of length >= 1) is recorded.
    """
    vertices = [str(v) for v in vertices]
    if len(set(vertices)) != len(vertices):
        raise AlgebraError("duplicate vertex names")
    arrow_list = [(str(n), str(s), str(t)) for (n, s, t) in arrows]
    names = [n for n, _, _ in arrow_list]
    if len(set(names)) != len(names):
        raise AlgebraError("duplicate arrow names")
    src = {n: s for n, s, _ in arrow_list}
    tgt = {n: t for n, _, t in arrow_list}
    for n in names:
        if src[n] not in vertices or tgt[n] not in vertices:
            raise AlgebraError(f"arrow {n} has an unknown endpoint")
    relations = [tuple(str(a) for a in r) for r in zero_relations]
    for r in relations:
        if not r:
            raise AlgebraError("empty relation")
        for a, b in zip(r, r[1:]):
            if tgt[a] != src[b]:
                raise AlgebraError(f"relation {'*'.join(r)} is not a path")
    bound = max(1, sum(len(r) for r in relations))

    def is_zero(path: tuple[str, ...]) -> bool:
        for r in relations:
            L = len(r)
            for i in range(len(path) - L + 1):
                if path[i : i + L] == r:
                    return True
        return False

    paths: list[tuple] = [("__e__", v) for v in vertices]
    frontier = [(a,) for a in names if not is_zero((a,))]
    while frontier:
        if any(len(q) >= bound for q in frontier):
            raise AlgebraError(
                "infinite nonzero-path set (a path survived the relation-length bound)"
            )
        paths.extend(sorted(frontier))
        nxt = []
        for q in frontier:
            for a in names:
                if src[a] == tgt[q[-1]]:
                    cand = q + (a,)
                    if not is_zero(cand):
                        nxt.append(cand)
        frontier = nxt

    index = {pth: i for i, pth in enumerate(paths)}
    dim = len(paths)

    def path_src(pth):
        return pth[1] if pth[0] == "__e__" else src[pth[0]]

    def path_tgt(pth):
        return pth[1] if pth[0] == "__e__" else tgt[pth[-1]]

    def concat(a, b):
        if path_tgt(a) != path_src(b):
            return None
        if a[0] == "__e__":
            return b
        if b[0] == "__e__":
            return a
        c = a + b
        return None if is_zero(c) else c

    table = np.zeros((dim, dim, dim), dtype=np.int64)
    for a in paths:
        for b in paths:
            c = concat(a, b)
            if c is not None:
                table[index[a], index[b], index[c]] = 1
    unit = np.zeros(dim, dtype=np.int64)
    for v in vertices:
        unit[index[("__e__", v)]] = 1
    rad_rows = [i for i, pth in enumerate(paths) if pth[0] != "__e__"]
    rad = np.eye(dim, dtype=np.int64)[rad_rows] if rad_rows else np.zeros((0, dim), dtype=np.int64)

    def label(pth):
        return f"e_{pth[1]}" if pth[0] == "__e__" else "*".join(pth)

    return FinDimAlgebra(
        p=p, dim=dim, labels=tuple(label(q) for q in paths),
        table=table, unit=unit, radical_rows=rad,
    )


def group_algebra(cayley_table, p: int) -> FinDimAlgebra:
    """Group algebra kG from a Cayley table, with its canonical form.

    cayley_table[i][j] = index of g_i g_j.  Group axioms (identity,
    associativity, inverses) are checked.  The symmetrizing form is
    gram[g][h] = 1 iff g h = 1.
    """
    t = np.asarray(cayley_table, dtype=np.int64)
    n = t.shape[0]
    if t.shape != (n, n) or t.min() < 0 or t.max() >= n:
        raise AlgebraError("Cayley table is not a square table of indices")
    # identity
    ident = None
    for e in range(n):
        if all(t[e, j] == j and t[j, e] == j for j in range(n)):
            ident = e
            break
    if ident is None:
        raise AlgebraError("not a group: no identity element")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if t[t[i, j], k] != t[i, t[j, k]]:
                    raise AlgebraError(f"not a group: associativity fails at ({i},{j},{k})")
    inverse = [-1] * n
    for i in range(n):
        for j in range(n):
            if t[i, j] == ident:
                inverse[i] = j
        if inverse[i] < 0:
            raise AlgebraError(f"not a group: element {i} has no inverse")
    table = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            table[i, j, t[i, j]] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[ident] = 1
    gram = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        gram[i, inverse[i]] = 1
    labels = tuple(f"g{i}" if i != ident else "1" for i in range(n))
    return FinDimAlgebra(p=p, dim=n, labels=labels, table=table, unit=unit, form=gram)


def matrix_algebra(base: FinDimAlgebra, n: int) -> FinDimAlgebra:
    """M_n(base): basis E_{rc} (x) b_k, dimension n^2 * dim(base)."""
    if n < 1:
        raise AlgebraError("matrix size must be >= 1")
    d = base.dim
    dim = n * n * d

    def idx(r, c, k):
        return (r * n + c) * d + k

    table = np.zeros((dim, dim, dim), dtype=np.int64)
    for r in range(n):
        for c in range(n):
            for k in range(d):
                for c2 in range(n):
                    for k2 in range(d):
                        prod = base.table[k, k2]
                        i = idx(r, c, k)
                        j = idx(c, c2, k2)
                        for k3 in range(d):
                            if prod[k3]:
                                table[i, j, idx(r, c2, k3)] = prod[k3]
    unit = np.zeros(dim, dtype=np.int64)
    for r in range(n):
        for k in range(d):
            if base.unit[k]:
                unit[idx(r, r, k)] = base.unit[k]
    labels = tuple(
        f"E{r}{c}[{base.labels[k]}]" for r in range(n) for c in range(n) for k in range(d)
    )
    return FinDimAlgebra(p=base.p, dim=dim, labels=labels, table=table, unit=unit)


def center(alg: FinDimAlgebra) -> Subspace:
    """{a : a e_i = e_i a for all i}, via the stacked commutator system."""
    blocks = []
    for i in range(alg.dim):
        e = alg.basis_vector(i)
        blocks.append((alg.left_mult_operator(e) - alg.right_mult_operator(e)) % alg.p)
    stacked = np.vstack(blocks)
    return kernel(stacked, alg.p)


def commutator_subspace(alg: FinDimAlgebra) -> Subspace:
    """Span of all basis commutators e_i e_j - e_j e_i."""
    vecs = []
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            v = (alg.table[i, j] - alg.table[j, i]) % alg.p
            if v.any():
                vecs.append(v)
    return Subspace.from_vectors(vecs, alg.p, alg.dim)


def _subspace_product(alg: FinDimAlgebra, a: Subspace, b: Subspace) -> Subspace:
    vecs = [alg.multiply(u, v) for u in a.basis for v in b.basis]
    return Subspace.from_vectors(vecs, alg.p, alg.dim)


def is_ideal(alg: FinDimAlgebra, s: Subspace) -> bool:
    for i in range(alg.dim):
        e = alg.basis_vector(i)
        for row in s.basis:
            if not s.contains(alg.multiply(e, row)):
                return False
            if not s.contains(alg.multiply(row, e)):
                return False
    return True


def is_nilpotent_subspace(alg: FinDimAlgebra, s: Subspace) -> bool:
    cur = s
    for _ in range(alg.dim + 1):
        if cur.dim == 0:
            return True
        cur = _subspace_product(alg, cur, s)
    return False


def _frobenius_matrix(alg: FinDimAlgebra) -> np.ndarray:
    """Matrix of a -> a^p; linear only when the algebra is commutative."""
    cols = [alg.power(alg.basis_vector(i), alg.p) for i in range(alg.dim)]
    return np.array(cols, dtype=np.int64).T % alg.p


def radical(alg: FinDimAlgebra) -> Subspace:
    """The Jacobson radical.

    Uses the recorded basis when the constructor provided one, the
    iterated p-power kernel for commutative algebras (exact over GF(p)),
    and otherwise the trace-form candidate; every candidate is verified
    to be a nilpotent ideal, and failure raises RadicalUnsupportedError
    rather than returning a guess.
    """
    if alg.radical_rows is not None:
        cand = Subspace.from_vectors(alg.radical_rows, alg.p, alg.dim)
    elif alg.is_commutative():
        f = _frobenius_matrix(alg)
        k = 1
        power = f.copy()
        while alg.p**k < alg.dim:
            power = (power @ f) % alg.p
            k += 1
        cand = kernel(power, alg.p)
    else:
        rows = []
        for i in range(alg.dim):
            li = alg.left_mult_operator(alg.basis_vector(i))
            rows.append(
                [int(np.trace(alg.left_mult_operator(alg.basis_vector(j)) @ li) % alg.p)
                 for j in range(alg.dim)]
            )
        cand = kernel(np.array(rows, dtype=np.int64), alg.p)
    if not (is_ideal(alg, cand) and is_nilpotent_subspace(alg, cand)):
        raise RadicalUnsupportedError(
            "radical-unsupported: candidate failed the nilpotent-ideal verification"
        )
    return cand


@dataclass(frozen=True)
class Hh0Data:
    """Quotient data for A/[A,A]: projection, section and dimensions."""

    alg: FinDimAlgebra
    commutators: Subspace
    quotient: QuotientSpace

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def project(self, v) -> np.ndarray:
        return self.quotient.project(v)

    def lift(self, coords) -> np.ndarray:
        return self.quotient.lift(coords)


def hh0(alg: FinDimAlgebra) -> Hh0Data:
    comm = commutator_subspace(alg)
    return Hh0Data(alg=alg, commutators=comm, quotient=QuotientSpace(comm))


def xi_p_on_hh0(alg: FinDimAlgebra, data: Hh0Data | None = None) -> np.ndarray:
    """Matrix of the induced p-power map on A/[A,A].

    Linear because the base field is the prime field: scalars satisfy
    c^p = c, and p-th powers are additive modulo commutators.
    """
    h = data if data is not None else hh0(alg)
    cols = []
    for i in range(h.dim):
        coords = np.zeros(h.dim, dtype=np.int64)
        coords[i] = 1
        a = h.lift(coords)
        cols.append(h.project(alg.power(a, alg.p)))
    if h.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    return np.array(cols, dtype=np.int64).T % alg.p


@dataclass(frozen=True)
class FormReport:
    ok: bool
    reason: str = ""
    triple: tuple | None = None

    def __bool__(self):
        return self.ok


def validate_symmetrizing_form(alg: FinDimAlgebra, gram) -> FormReport:
    """Check symmetry, associativity on basis triples, nondegeneracy."""
    g = np.asarray(gram, dtype=np.int64) % alg.p
    if g.shape != (alg.dim, alg.dim):
        return FormReport(False, "gram matrix has wrong shape")
    if not np.array_equal(g, g.T):
        bad = np.argwhere((g - g.T) % alg.p != 0)[0]
        return FormReport(False, "not symmetric", (int(bad[0]), int(bad[1])))
    # (e_i e_j, e_k) == (e_i, e_j e_k)
    left = np.einsum("ijm,mk->ijk", alg.table, g) % alg.p
    right = np.einsum("jkm,im->ijk", alg.table, g) % alg.p
    bad = np.argwhere((left - right) % alg.p != 0)
    if bad.size:
        i, j, k = (int(v) for v in bad[0])
        return FormReport(
            False,
            f"associativity fails: ({alg.labels[i]}*{alg.labels[j]},{alg.labels[k]}) "
            f"!= ({alg.labels[i]},{alg.labels[j]}*{alg.labels[k]})",
            (i, j, k),
        )
    from .linalg import rank as _rank

    if _rank(g, alg.p) != alg.dim:
        return FormReport(False, "degenerate gram matrix")
    return FormReport(True)
