"""Degree-window-truncated graded k-linear categories.

Orbit categories, graded centers and abelianizations, the p-power map,
annihilator ideals K_{r,s} / K_r / R_s, and the Calabi-Yau trace
apparatus (pairings, T_r-orthogonals, the adjoint maps zeta_r).

Truncation is explicit: hom spaces exist for |degree| <= window, a
composition leaving the window raises OutOfWindowError instead of
returning zero, and every graded result carries the degree range it is
certified on.  Sign exponents are computed from degree metadata in one
place (commutation_sign, shift_action_sign), never inlined.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .hochschild import FiniteCat, _matrix_inverse
from .linalg import QuotientSpace, Subspace, check_prime, kernel, solve


class OutOfWindowError(RuntimeError):
    pass


class WindowTooSmallError(RuntimeError):
    pass


class CalabiYauError(RuntimeError):
    pass


def commutation_sign(p: int, i: int, j: int) -> int:
    """(-1)^{ij} as an element of GF(p)."""
    return 1 if (i * j) % 2 == 0 else p - 1


def shift_action_sign(p: int, n: int) -> int:
    """Sign carried by the canonical automorphism action in degree n."""
    return 1 if n % 2 == 0 else p - 1


@dataclass(frozen=True)
class GradedCategory:
    """Finite graded category truncated to |degree| <= window.

    comp[(x, y, z, i, j)][g, f, k]: coefficient of basis k of
    hom(x, z)_{i+j} in (g: y -> z, degree j) after (f: x -> y, degree i).
    Tensors exist exactly when all three degrees are in the window;
    sigma_mats, when present, is the untwisted automorphism action.
    """

    p: int
    objects: tuple
    window: int
    hom_dims: dict
    comp: dict
    identities: dict
    sigma_obj: dict | None = None
    sigma_mats: dict | None = None
    gen_degree_bound: int = 1
    hom_labels: dict | None = None

    def __post_init__(self):
        check_prime(self.p)

    def hom(self, x, y, n: int) -> int:
        return self.hom_dims.get((x, y, n), 0)

    def in_window(self, n: int) -> bool:
        return abs(n) <= self.window

    def compose(self, x, y, z, i: int, j: int, f, g) -> np.ndarray:
        """(g: y->z)_j after (f: x->y)_i; raises outside the window."""
        if not (self.in_window(i) and self.in_window(j)):
            raise OutOfWindowError(f"degrees {i}, {j} outside window {self.window}")
        if not self.in_window(i + j):
            raise OutOfWindowError(
                f"composition degree {i + j} outside window {self.window}"
            )
        t = self.comp.get((x, y, z, i, j))
        if t is None:
            return np.zeros(self.hom(x, z, i + j), dtype=np.int64)
        return np.einsum("g,f,gfk->k", np.asarray(g) % self.p, np.asarray(f) % self.p, t) % self.p

    def validate(self):
        """Identity laws and associativity on all in-window triples."""
        for x in self.objects:
            idv = self.identities[x]
            for y in self.objects:
                for n in range(-self.window, self.window + 1):
                    d = self.hom(x, y, n)
                    if d == 0:
                        continue
                    eye = np.eye(d, dtype=np.int64)
                    for fi in range(d):
                        f = eye[fi]
                        left = self.compose(x, x, y, 0, n, idv, f)
                        right = self.compose(x, y, y, n, 0, f, self.identities[y])
                        if not np.array_equal(left, eye[fi]) or not np.array_equal(right, eye[fi]):
                            raise ValueError(f"identity law fails on hom({x},{y})_{n}")
        by_prefix: dict = {}
        nz = {}
        for key, t in self.comp.items():
            by_prefix.setdefault(key[:2] + (key[3],), []).append(key)
            nz[key] = bool(t.any())
        for (x, y, z, i, j), t1 in self.comp.items():
            for key2 in by_prefix.get((y, z, j), ()):
                (_, _, w, _, k) = key2
                if not self.in_window(i + j + k) or not self.in_window(j + k):
                    continue
                key_xzw = (x, z, w, i + j, k)
                key_xyw = (x, y, w, i, j + k)
                lhs_live = nz[(x, y, z, i, j)] and nz.get(key_xzw, False)
                rhs_live = nz[key2] and nz.get(key_xyw, False)
                if not lhs_live and not rhs_live:
                    continue
                dh = self.hom(z, w, k)
                dg = self.hom(y, z, j)
                df = self.hom(x, y, i)
                dout = self.hom(x, w, i + j + k)
                if 0 in (dh, dg, df):
                    continue
                lhs = (
                    np.einsum("gfm,hmo->hgfo", t1, self.comp[key_xzw]) % self.p
                    if lhs_live
                    else np.zeros((dh, dg, df, dout), dtype=np.int64)
                )
                rhs = (
                    np.einsum("hgm,mfo->hgfo", self.comp[key2], self.comp[key_xyw]) % self.p
                    if rhs_live
                    else np.zeros((dh, dg, df, dout), dtype=np.int64)
                )
                if ((lhs - rhs) % self.p).any():
                    raise ValueError(
                        f"associativity fails at ({x},{y},{z},{w}) degrees ({i},{j},{k})"
                    )

    def diagonal_dims(self, n: int) -> tuple[dict, int]:
        """Offsets and total dimension of ⊕_x hom(x, x, n)."""
        offsets = {}
        total = 0
        for x in self.objects:
            offsets[x] = total
            total += self.hom(x, x, n)
        return offsets, total


@dataclass(frozen=True)
class CatAutomorphism:
    """Automorphism of a finite nongraded category."""

    cat: FiniteCat
    obj_map: dict
    hom_mats: dict  # (x, y) -> matrix hom(x,y) -> hom(obj_map[x], obj_map[y])

    def __post_init__(self):
        vals = set(self.obj_map.values())
        if vals != set(self.cat.objects):
            raise ValueError("object map is not a permutation")
        for (x, y), m in self.hom_mats.items():
            sx, sy = self.obj_map[x], self.obj_map[y]
            if m.shape != (self.cat.hom(sx, sy), self.cat.hom(x, y)):
                raise ValueError(f"action matrix on hom({x},{y}) has wrong shape")
        self._check_functorial()

    def _check_functorial(self):
        c = self.cat
        for (x, y, z), t in c.comp.items():
            sx, sy, sz = self.obj_map[x], self.obj_map[y], self.obj_map[z]
            mf = self.hom_mats[(x, y)]
            mg = self.hom_mats[(y, z)]
            mo = self.hom_mats[(x, z)]
            for fi in range(c.hom(x, y)):
                for gi in range(c.hom(y, z)):
                    f = np.eye(c.hom(x, y), dtype=np.int64)[fi]
                    g = np.eye(c.hom(y, z), dtype=np.int64)[gi]
                    lhs = (mo @ c.compose(x, y, z, f, g)) % c.p
                    rhs = c.compose(sx, sy, sz, (mf @ f) % c.p, (mg @ g) % c.p)
                    if not np.array_equal(lhs, rhs):
                        raise ValueError(f"automorphism not functorial on ({x},{y},{z})")
        for x in c.objects:
            sx = self.obj_map[x]
            pushed = (self.hom_mats[(x, x)] @ c.identities[x]) % c.p
            if not np.array_equal(pushed, c.identities[sx]):
                raise ValueError(f"automorphism does not fix the identity of {x}")

    def power_obj(self, n: int):
        def step(m, forward):
            if forward:
                return {k: self.obj_map[v] for k, v in m.items()}
            inv = {v: k for k, v in self.obj_map.items()}
            return {k: inv[v] for k, v in m.items()}

        out = {x: x for x in self.cat.objects}
        for _ in range(abs(n)):
            out = step(out, n > 0)
        return out

    def power_mat(self, x, y, n: int) -> np.ndarray:
        """Matrix of sigma^n on hom(x, y)."""
        c = self.cat
        if n == 0:
            return np.eye(c.hom(x, y), dtype=np.int64)
        if n > 0:
            m = np.eye(c.hom(x, y), dtype=np.int64)
            cx, cy = x, y
            for _ in range(n):
                m = (self.hom_mats[(cx, cy)] @ m) % c.p
                cx, cy = self.obj_map[cx], self.obj_map[cy]
            return m
        # negative power: invert step by step
        inv_obj = {v: k for k, v in self.obj_map.items()}
        m = np.eye(c.hom(x, y), dtype=np.int64)
        cx, cy = x, y
        for _ in range(-n):
            px, py = inv_obj[cx], inv_obj[cy]
            m = (_matrix_inverse(self.hom_mats[(px, py)], c.p) @ m) % c.p
            cx, cy = px, py
        return m

    @staticmethod
    def identity(cat: FiniteCat) -> "CatAutomorphism":
        mats = {
            (x, y): np.eye(cat.hom(x, y), dtype=np.int64)
            for x in cat.objects
            for y in cat.objects
            if cat.hom(x, y) > 0
        }
        return CatAutomorphism(cat=cat, obj_map={x: x for x in cat.objects}, hom_mats=mats)


def orbit_category(cat: FiniteCat, sigma: CatAutomorphism, window: int) -> GradedCategory:
    """Truncated orbit construction: hom(x, y)_n = hom(x, sigma^n y).

    Composition twists the later morphism by sigma^degree of the earlier
    one.  The untwisted sigma action on each hom space is recorded.
    """
    p = cat.p
    hom_dims = {}
    comp = {}
    sigma_mats = {}
    obj_pow = {n: sigma.power_obj(n) for n in range(-window - 1, window + 2)}
    for n in range(-window, window + 1):
        for x in cat.objects:
            for y in cat.objects:
                d = cat.hom(x, obj_pow[n][y])
                if d:
                    hom_dims[(x, y, n)] = d
    for i in range(-window, window + 1):
        for j in range(-window, window + 1):
            if abs(i + j) > window:
                continue
            for x in cat.objects:
                for y in cat.objects:
                    for z in cat.objects:
                        df = hom_dims.get((x, y, i), 0)
                        dg = hom_dims.get((y, z, j), 0)
                        if df == 0 or dg == 0:
                            continue
                        yi = obj_pow[i][y]
                        zj = obj_pow[j][z]
                        zij = obj_pow[i + j][z]
                        dout = cat.hom(x, zij)
                        tens = np.zeros((dg, df, dout), dtype=np.int64)
                        twist = sigma.power_mat(y, zj, i)  # hom(y, s^j z) -> hom(s^i y, s^{i+j} z)
                        for gi in range(dg):
                            tw_g = twist[:, gi] % p
                            for fi in range(df):
                                f = np.eye(df, dtype=np.int64)[fi]
                                tens[gi, fi] = cat.compose(
                                    x, yi, zij, f, tw_g
                                )
                        comp[(x, y, z, i, j)] = tens
    for n in range(-window, window + 1):
        for x in cat.objects:
            for y in cat.objects:
                if (x, y, n) in hom_dims:
                    sigma_mats[(x, y, n)] = sigma.power_mat(x, obj_pow[n][y], 1)
    g = GradedCategory(
        p=p,
        objects=tuple(cat.objects),
        window=window,
        hom_dims=hom_dims,
        comp=comp,
        identities={x: cat.identities[x].copy() for x in cat.objects},
        sigma_obj=dict(sigma.obj_map),
        sigma_mats=sigma_mats,
        gen_degree_bound=1,
    )
    g.validate()
    return g


def _default_labels(g: GradedCategory) -> dict:
    out = {}
    for (x, y, n), d in g.hom_dims.items():
        out[(x, y, n)] = [f"{x}>{y}@{n}#{k}" for k in range(d)]
    return out


def graded_category_to_json(g: GradedCategory) -> dict:
    """Interchange form: hom bases keyed (x,y,n), composition by labels."""
    labels = g.hom_labels if g.hom_labels is not None else _default_labels(g)
    homs = {f"{x}|{y}|{n}": labels[(x, y, n)] for (x, y, n) in sorted(g.hom_dims)}
    comp = {}
    for (x, y, z, i, j), t in sorted(g.comp.items()):
        lf = labels[(x, y, i)]
        lg = labels[(y, z, j)]
        lo = labels.get((x, z, i + j), [])
        for gi in range(t.shape[0]):
            for fi in range(t.shape[1]):
                for oi in range(t.shape[2]):
                    c = int(t[gi, fi, oi])
                    if c:
                        comp[f"{lg[gi]}|{lf[fi]}|{lo[oi]}"] = c
    data = {
        "p": g.p,
        "window": g.window,
        "objects": list(g.objects),
        "homs": homs,
        "comp": comp,
        "identities": {x: v.tolist() for x, v in g.identities.items()},
    }
    if g.sigma_obj is not None:
        data["sigma"] = {
            "objects": dict(g.sigma_obj),
            "matrices": {
                f"{x}|{y}|{n}": m.tolist() for (x, y, n), m in sorted(g.sigma_mats.items())
            },
        }
    return data


def graded_category_from_json(data: dict) -> GradedCategory:
    p = int(data["p"])
    window = int(data["window"])
    objects = tuple(str(o) for o in data["objects"])
    hom_dims = {}
    labels = {}
    label_pos = {}
    for key, labs in data["homs"].items():
        x, y, n = key.split("|")
        k = (x, y, int(n))
        hom_dims[k] = len(labs)
        labels[k] = list(labs)
        for idx, lab in enumerate(labs):
            label_pos[lab] = (k, idx)
    comp: dict = {}
    for key, c in data["comp"].items():
        lg, lf, lo = key.split("|")
        (kg, gi) = label_pos[lg]
        (kf, fi) = label_pos[lf]
        (ko, oi) = label_pos[lo]
        (x, y, i) = kf
        (_, z, j) = kg
        tkey = (x, y, z, i, j)
        if tkey not in comp:
            comp[tkey] = np.zeros((hom_dims[kg], hom_dims[kf], hom_dims[ko]), dtype=np.int64)
        comp[tkey][gi, fi, oi] = int(c) % p
    identities = {
        str(x): np.asarray(v, dtype=np.int64) % p for x, v in data["identities"].items()
    }
    sigma_obj = None
    sigma_mats = None
    if "sigma" in data:
        sigma_obj = {str(k): str(v) for k, v in data["sigma"]["objects"].items()}
        sigma_mats = {}
        for key, m in data["sigma"]["matrices"].items():
            x, y, n = key.split("|")
            sigma_mats[(x, y, int(n))] = np.asarray(m, dtype=np.int64) % p
    return GradedCategory(
        p=p, objects=objects, window=window, hom_dims=hom_dims, comp=comp,
        identities=identities, sigma_obj=sigma_obj, sigma_mats=sigma_mats,
        hom_labels=labels,
    )


# ---------------------------------------------------------------------------
# centers, commutators, abelianizations


@dataclass(frozen=True)
class CenterComponent:
    degree: int
    space: Subspace          # inside ⊕_x hom(x, x, degree)
    offsets: dict

    @property
    def dim(self) -> int:
        return self.space.dim


def center_component(g: GradedCategory, n: int) -> CenterComponent:
    """Families (m_x) with f m_x = (-1)^{n|f|} m_y f for all in-window f."""
    if abs(n) + g.gen_degree_bound > g.window:
        raise WindowTooSmallError(
            f"degree {n} center needs window >= {abs(n) + g.gen_degree_bound}"
        )
    offsets, total = g.diagonal_dims(n)
    if total == 0:
        return CenterComponent(n, Subspace.zero(0, g.p), offsets)
    eqs = []
    for x in g.objects:
        for y in g.objects:
            for j in range(-g.window, g.window + 1):
                if not g.in_window(n + j):
                    continue
                df = g.hom(x, y, j)
                dout = g.hom(x, y, n + j)
                if df == 0 or dout == 0:
                    continue
                dx = g.hom(x, x, n)
                dy = g.hom(y, y, n)
                sign = commutation_sign(g.p, n, j)
                for fi in range(df):
                    f = np.eye(df, dtype=np.int64)[fi]
                    block = np.zeros((dout, total), dtype=np.int64)
                    for mi in range(dx):
                        m = np.eye(dx, dtype=np.int64)[mi]
                        block[:, offsets[x] + mi] = g.compose(x, x, y, n, j, m, f)
                    for mi in range(dy):
                        m = np.eye(dy, dtype=np.int64)[mi]
                        block[:, offsets[y] + mi] = (
                            block[:, offsets[y] + mi]
                            - sign * g.compose(x, y, y, j, n, f, m)
                        ) % g.p
                    eqs.append(block % g.p)
    if not eqs:
        return CenterComponent(n, Subspace.full(total, g.p), offsets)
    system = np.vstack(eqs)
    return CenterComponent(n, kernel(system, g.p), offsets)


def commutator_component(g: GradedCategory, n: int, certify: bool = True) -> Subspace:
    """[G, G]_n: span of f u - (-1)^{|f||u|} u f over in-window pairs."""

    def span_for(limit: int) -> Subspace:
        offsets, total = g.diagonal_dims(n)
        vecs = []
        for x in g.objects:
            for y in g.objects:
                for i in range(-limit, limit + 1):
                    j = n - i
                    if abs(j) > limit or not g.in_window(i) or not g.in_window(j):
                        continue
                    du = g.hom(x, y, i)   # u: x -> y, degree i
                    df = g.hom(y, x, j)   # f: y -> x, degree j
                    if du == 0 or df == 0:
                        continue
                    sign = commutation_sign(g.p, i, j)
                    for ui in range(du):
                        u = np.eye(du, dtype=np.int64)[ui]
                        for fi in range(df):
                            f = np.eye(df, dtype=np.int64)[fi]
                            fu = g.compose(x, y, x, i, j, u, f)   # at x
                            uf = g.compose(y, x, y, j, i, f, u)   # at y
                            vec = np.zeros(total, dtype=np.int64)
                            vec[offsets[x] : offsets[x] + len(fu)] += fu
                            vec[offsets[y] : offsets[y] + len(uf)] -= sign * uf
                            vecs.append(vec % g.p)
        _, total2 = g.diagonal_dims(n)
        return Subspace.from_vectors(vecs, g.p, total2)

    full = span_for(g.window)
    if certify and g.window >= 1:
        inner = span_for(g.window - 1)
        if inner != full:
            raise WindowTooSmallError(
                f"commutator span at degree {n} not stabilized inside window {g.window}"
            )
    return full


@dataclass(frozen=True)
class AbComponent:
    degree: int
    offsets: dict
    commutators: Subspace
    quotient: QuotientSpace

    @property
    def dim(self) -> int:
        return self.quotient.dim


def ab_component(g: GradedCategory, n: int, certify: bool = True) -> AbComponent:
    offsets, _ = g.diagonal_dims(n)
    comm = commutator_component(g, n, certify=certify)
    return AbComponent(n, offsets, comm, QuotientSpace(comm))


def sigma_invariants(space: Subspace, action: np.ndarray) -> Subspace:
    """Fixed subspace of an action matrix restricted to `space`."""
    p = space.p
    if space.dim == 0:
        return space
    rows = []
    for v in space.basis:
        rows.append(((action @ v) - v) % p)
    m = np.array(rows, dtype=np.int64).T  # columns indexed by space basis
    coeffs = kernel(m, p)
    vecs = (coeffs.basis @ space.basis) % p
    return Subspace.from_vectors(vecs, p, space.ambient_dim)


def sigma_coinvariants(total_dim: int, p: int, action: np.ndarray, scale: int = 1):
    """Quotient by the span of v - scale*action(v); returns QuotientSpace."""
    eye = np.eye(total_dim, dtype=np.int64)
    rel = (eye - (scale % p) * action) % p
    sub = Subspace.from_vectors(rel.T, p, total_dim)
    return QuotientSpace(sub)


def diagonal_sigma_matrix(g: GradedCategory, n: int, signed: bool = True) -> np.ndarray:
    """Automorphism action on ⊕_x hom(x, x, n), optionally signed."""
    if g.sigma_mats is None or g.sigma_obj is None:
        raise ValueError("category carries no automorphism data")
    offsets, total = g.diagonal_dims(n)
    out = np.zeros((total, total), dtype=np.int64)
    sgn = shift_action_sign(g.p, n) if signed else 1
    for x in g.objects:
        d = g.hom(x, x, n)
        if d == 0:
            continue
        sx = g.sigma_obj[x]
        mat = g.sigma_mats[(x, x, n)]
        if g.hom(sx, sx, n) != mat.shape[0]:
            raise ValueError("sigma action has inconsistent shapes")
        out[offsets[sx] : offsets[sx] + mat.shape[0], offsets[x] : offsets[x] + d] = (
            sgn * mat
        ) % g.p
    return out % g.p


# ---------------------------------------------------------------------------
# the p-power map and the ideals


def xi_p_ab(g: GradedCategory, n: int, ab_src: AbComponent | None = None,
            ab_dst: AbComponent | None = None) -> np.ndarray:
    """Matrix of the induced p-power map Ab_n -> Ab_{np}.

    Degrees with |np| > window are indeterminate and raise; nothing is
    silently truncated.
    """
    p = g.p
    if not g.in_window(n * p):
        raise OutOfWindowError(f"degree {n * p} is outside window {g.window}")
    src = ab_src if ab_src is not None else ab_component(g, n)
    dst = ab_dst if ab_dst is not None else ab_component(g, n * p)
    offs_n, tot_n = g.diagonal_dims(n)
    cols = []
    for ci in range(src.dim):
        coords = np.zeros(src.dim, dtype=np.int64)
        coords[ci] = 1
        rep = src.quotient.lift(coords)
        powered = _diagonal_power(g, n, rep, p)
        cols.append(dst.quotient.project(powered))
    if src.dim == 0:
        return np.zeros((dst.dim, 0), dtype=np.int64)
    return np.array(cols, dtype=np.int64).T % p


def _diagonal_power(g: GradedCategory, n: int, rep: np.ndarray, k: int) -> np.ndarray:
    """Componentwise k-th power of a diagonal element of degree n."""
    offs, _ = g.diagonal_dims(n)
    offs_out, tot_out = g.diagonal_dims(n * k)
    out = np.zeros(tot_out, dtype=np.int64)
    for x in g.objects:
        d = g.hom(x, x, n)
        if d == 0:
            continue
        v = rep[offs[x] : offs[x] + d]
        acc = v.copy()
        deg = n
        for _ in range(k - 1):
            acc = g.compose(x, x, x, deg, n, acc, v)
            deg += n
        dd = g.hom(x, x, n * k)
        if dd:
            out[offs_out[x] : offs_out[x] + dd] = acc
    return out % g.p


def t_r_graded(g: GradedCategory, r: int, n: int) -> Subspace:
    """Kernel of the r-th p-power iterate on Ab_n, in Ab_n coordinates."""
    p = g.p
    src = ab_component(g, n)
    if r == 0:
        return Subspace.zero(src.dim, p)
    mats = []
    deg = n
    cur_src = src
    power = np.eye(src.dim, dtype=np.int64)
    for _ in range(r):
        cur_dst = ab_component(g, deg * p)
        m = xi_p_ab(g, deg, cur_src, cur_dst)
        power = (m @ power) % p
        deg *= p
        cur_src = cur_dst
    return kernel(power, p)


@dataclass(frozen=True)
class GradedIdeal:
    """Per-degree subspaces of the graded center, with certification."""

    name: str
    components: dict          # degree -> Subspace (ambient: diagonal coords)
    reliable: tuple           # degrees the result is certified on

    def dims(self) -> dict:
        return {n: s.dim for n, s in sorted(self.components.items())}


def krs_reliable_degrees(g: GradedCategory, r: int, s: int) -> list[int]:
    out = []
    for n in range(-g.window, g.window + 1):
        if abs(n) + g.gen_degree_bound > g.window:
            continue
        m = s - n
        if not g.in_window(m) or not g.in_window(s):
            continue
        if abs(m) * g.p**r > g.window and m != 0:
            continue
        out.append(n)
    return out


def k_rs(g: GradedCategory, r: int, s: int, degrees=None) -> GradedIdeal:
    """(K_{r,s})_n = two-sided annihilator of (T_r)_{s-n} in the center."""
    p = g.p
    degs = degrees if degrees is not None else krs_reliable_degrees(g, r, s)
    comps = {}
    for n in degs:
        zc = center_component(g, n)
        m = s - n
        tr = t_r_graded(g, r, m)
        ab_m = ab_component(g, m)
        ab_s = ab_component(g, s)
        offs_n, _ = g.diagonal_dims(n)
        offs_m, _ = g.diagonal_dims(m)
        if tr.dim == 0 or zc.dim == 0:
            comps[n] = zc.space
            continue
        left_rows = []
        right_rows = []
        for ti in range(tr.dim):
            coords = np.zeros(tr.dim, dtype=np.int64)
            coords[ti] = 1
            v = ab_m.quotient.lift(_embed(tr, coords, p))
            for zi in range(zc.dim):
                a = zc.space.basis[zi]
                left_rows.append(ab_s.quotient.project(_diag_product(g, n, m, a, v)))
                right_rows.append(ab_s.quotient.project(_diag_product(g, m, n, v, a)))
        lmat = _rows_to_system(left_rows, tr.dim, zc.dim, p)
        rmat = _rows_to_system(right_rows, tr.dim, zc.dim, p)
        lsol = kernel(lmat, p)
        rsol = kernel(rmat, p)
        if lsol != rsol:
            # two-sided annihilator: intersect (should agree by graded commutativity)
            sol = lsol.intersect(rsol)
        else:
            sol = lsol
        vecs = (sol.basis @ zc.space.basis) % p
        comps[n] = Subspace.from_vectors(vecs, p, zc.space.ambient_dim)
    return GradedIdeal(name=f"K_{r},{s}", components=comps, reliable=tuple(degs))


def _embed(sub: Subspace, coords: np.ndarray, p: int) -> np.ndarray:
    if sub.dim == 0:
        return np.zeros(sub.ambient_dim, dtype=np.int64)
    return (coords @ sub.basis) % p


def _rows_to_system(rows, n_t, n_z, p):
    """Rows indexed by (t, z) pairs -> matrix over the z unknowns."""
    if not rows:
        return np.zeros((1, n_z), dtype=np.int64)
    width = len(rows[0])
    out = np.zeros((n_t * width, n_z), dtype=np.int64)
    idx = 0
    for ti in range(n_t):
        for zi in range(n_z):
            out[ti * width : (ti + 1) * width, zi] = rows[idx]
            idx += 1
    return out % p


def _diag_product(g: GradedCategory, deg_a: int, deg_b: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Componentwise composition (a_x o b_x)_x of diagonal elements."""
    offs_a, _ = g.diagonal_dims(deg_a)
    offs_b, _ = g.diagonal_dims(deg_b)
    offs_o, tot_o = g.diagonal_dims(deg_a + deg_b)
    out = np.zeros(tot_o, dtype=np.int64)
    for x in g.objects:
        da = g.hom(x, x, deg_a)
        db = g.hom(x, x, deg_b)
        do = g.hom(x, x, deg_a + deg_b)
        if da == 0 or db == 0 or do == 0:
            continue
        va = a[offs_a[x] : offs_a[x] + da]
        vb = b[offs_b[x] : offs_b[x] + db]
        out[offs_o[x] : offs_o[x] + do] = g.compose(x, x, x, deg_b, deg_a, vb, va)
    return out % g.p


def k_r_graded(g: GradedCategory, r: int, s_values=None) -> GradedIdeal:
    """K_r = intersection over s of K_{r,s}, on reliable degrees."""
    svals = s_values if s_values is not None else range(-g.window, g.window + 1)
    comps: dict = {}
    reliable: dict = {}
    for s in svals:
        ideal = k_rs(g, r, s)
        for n, sub in ideal.components.items():
            if n in comps:
                comps[n] = comps[n].intersect(sub)
                reliable[n].append(s)
            else:
                comps[n] = sub
                reliable[n] = [s]
    return GradedIdeal(
        name=f"K_{r}", components=comps,
        reliable=tuple(sorted(comps.keys())),
    )


def r_s_graded(g: GradedCategory, s: int, r_max: int) -> GradedIdeal:
    comps: dict = {}
    for r in range(r_max + 1):
        ideal = k_rs(g, r, s)
        for n, sub in ideal.components.items():
            comps[n] = comps[n].intersect(sub) if n in comps else sub
    return GradedIdeal(name=f"R_{s}", components=comps, reliable=tuple(sorted(comps)))


def reynolds_graded(g: GradedCategory, r_max: int) -> GradedIdeal:
    comps: dict = {}
    for r in range(r_max + 1):
        ideal = k_r_graded(g, r)
        for n, sub in ideal.components.items():
            comps[n] = comps[n].intersect(sub) if n in comps else sub
    return GradedIdeal(name="R", components=comps, reliable=tuple(sorted(comps)))


# ---------------------------------------------------------------------------
# Calabi-Yau structure


@dataclass(frozen=True)
class TraceData:
    """Per-object functionals on hom(x, x, d)."""

    d: int
    functionals: dict  # x -> vector


@dataclass(frozen=True)
class CyReport:
    ok: bool
    weak_ok: bool
    violation: str = ""

    def __bool__(self):
        return self.ok


def trace_of_diagonal(g: GradedCategory, trace: TraceData, v: np.ndarray) -> int:
    offs, _ = g.diagonal_dims(trace.d)
    total = 0
    for x in g.objects:
        d = g.hom(x, x, trace.d)
        if d == 0:
            continue
        t = np.asarray(trace.functionals.get(x, np.zeros(d, dtype=np.int64)), dtype=np.int64)
        total += int(np.dot(t % g.p, v[offs[x] : offs[x] + d]) % g.p)
    return total % g.p


def cy_check(g: GradedCategory, trace: TraceData, d: int, weak: bool = False) -> CyReport:
    """Nondegeneracy of the trace pairings plus the graded symmetry law."""
    p = g.p
    weak_ok = True
    full_ok = True
    violation = ""
    if not g.in_window(d):
        return CyReport(False, False, "Calabi-Yau degree outside window")
    ms = [0] if weak else [m for m in range(-g.window, g.window + 1) if g.in_window(d - m)]
    for m in ms:
        for x in g.objects:
            for y in g.objects:
                dg_ = g.hom(x, y, m)        # g: x -> y degree m
                df = g.hom(y, x, d - m)     # f: y -> x degree d - m
                if dg_ == 0 and df == 0:
                    continue
                if dg_ != df:
                    msg = f"pairing hom({x},{y})_{m} x hom({y},{x})_{d-m}: dims {dg_} vs {df}"
                    return CyReport(False, False, msg)
                if dg_ == 0:
                    continue
                gram = np.zeros((df, dg_), dtype=np.int64)
                sym_sign = commutation_sign(p, m, d - m)
                for fi in range(df):
                    f = np.eye(df, dtype=np.int64)[fi]
                    for gi in range(dg_):
                        gv = np.eye(dg_, dtype=np.int64)[gi]
                        fg = g.compose(x, y, x, m, d - m, gv, f)  # f after g, at x
                        tx = trace.functionals.get(x)
                        val = int(np.dot(np.asarray(tx) % p, fg) % p) if tx is not None else 0
                        gram[fi, gi] = val
                        gf = g.compose(y, x, y, d - m, m, f, gv)  # g after f, at y
                        ty = trace.functionals.get(y)
                        val2 = int(np.dot(np.asarray(ty) % p, gf) % p) if ty is not None else 0
                        if (val - sym_sign * val2) % p != 0:
                            msg = (
                                f"trace symmetry fails at m={m}, hom({x},{y}), "
                                f"basis pair ({fi},{gi})"
                            )
                            if m == 0:
                                weak_ok = False
                            full_ok = False
                            if not violation:
                                violation = msg
                from .linalg import rank as _rank

                if _rank(gram, p) != df:
                    msg = f"degenerate pairing at m={m}, hom({x},{y})"
                    if m == 0:
                        weak_ok = False
                    full_ok = False
                    if not violation:
                        violation = msg
    if weak:
        return CyReport(weak_ok, weak_ok, violation)
    return CyReport(full_ok, weak_ok, violation)


def pairing_matrix(g: GradedCategory, trace: TraceData, n: int,
                   zc: CenterComponent, ab: AbComponent) -> np.ndarray:
    """(a_i, v_j) = tr(v_j o a_i) between Z^n and Ab_{d-n}."""
    d = trace.d
    m = d - n
    out = np.zeros((zc.dim, ab.dim), dtype=np.int64)
    for zi in range(zc.dim):
        a = zc.space.basis[zi]
        for vi in range(ab.dim):
            coords = np.zeros(ab.dim, dtype=np.int64)
            coords[vi] = 1
            v = ab.quotient.lift(coords)
            prod = _diag_product(g, n, m, a, v)  # (a_x o v_x): degree d
            out[zi, vi] = trace_of_diagonal(g, trace, prod)
    return out % g.p


def k_r_via_perp(g: GradedCategory, trace: TraceData, r: int, d: int,
                 degrees=None) -> GradedIdeal:
    """T_r-orthogonal of the center under the trace pairing, per degree."""
    report = cy_check(g, trace, d)
    if not report:
        raise CalabiYauError(f"not Calabi-Yau: {report.violation}")
    p = g.p
    degs = degrees if degrees is not None else krs_reliable_degrees(g, r, d)
    comps = {}
    for n in degs:
        zc = center_component(g, n)
        m = d - n
        tr_sub = t_r_graded(g, r, m)
        ab_m = ab_component(g, m)
        if tr_sub.dim == 0 or zc.dim == 0:
            comps[n] = zc.space
            continue
        pm = pairing_matrix(g, trace, n, zc, ab_m)
        # rows: center basis, cols: Ab basis; restrict columns to T_r
        restricted = (pm @ tr_sub.basis.T) % p
        sol = kernel(restricted.T, p)
        vecs = (sol.basis @ zc.space.basis) % p
        comps[n] = Subspace.from_vectors(vecs, p, zc.space.ambient_dim)
    return GradedIdeal(name=f"K_{r} (perp)", components=comps, reliable=tuple(degs))


def zeta_r(g: GradedCategory, trace: TraceData, r: int, d: int, m: int):
    """The adjoint map on Z^m determined by the trace pairing.

    Returns (target_degree, matrix, image) where matrix maps Z^m
    coordinates to Z^target coordinates; the zero map when p^r does not
    divide d - m.
    """
    p = g.p
    report = cy_check(g, trace, d)
    if not report:
        raise CalabiYauError(f"not Calabi-Yau: {report.violation}")
    zc_m = center_component(g, m)
    if (d - m) % p**r != 0:
        return None, np.zeros((0, zc_m.dim), dtype=np.int64), None
    n = d - (d - m) // p**r
    if abs(n) + g.gen_degree_bound > g.window:
        raise WindowTooSmallError(f"target degree {n} not certified in window")
    zc_n = center_component(g, n)
    ab_dn = ab_component(g, d - n)
    ab_dm = ab_component(g, d - m)
    # xi^r : Ab_{d-n} -> Ab_{d-m}
    xi_pow = np.eye(ab_dn.dim, dtype=np.int64)
    deg = d - n
    cur = ab_dn
    for _ in range(r):
        nxt = ab_component(g, deg * p)
        xi_pow = (xi_p_ab(g, deg, cur, nxt) @ xi_pow) % p
        deg *= p
        cur = nxt
    pm_n = pairing_matrix(g, trace, n, zc_n, ab_dn)
    pm_m = pairing_matrix(g, trace, m, zc_m, ab_dm)
    rhs = (pm_m @ xi_pow) % p  # (f, xi^r v) for f in Z^m basis, v in Ab_{d-n} basis
    cols = []
    for fi in range(zc_m.dim):
        c = solve(pm_n.T, rhs[fi], p)
        if c is None:
            raise CalabiYauError("degenerate pairing; adjoint not solvable")
        cols.append(c)
    mat = (
        np.array(cols, dtype=np.int64).T % p
        if cols
        else np.zeros((zc_n.dim, 0), dtype=np.int64)
    )
    img_vecs = [(mat[:, i] @ zc_n.space.basis) % p for i in range(mat.shape[1])]
    image = Subspace.from_vectors(img_vecs, p, zc_n.space.ambient_dim)
    return n, mat, image


# ---------------------------------------------------------------------------
# direct (oracle) computations on a finite category with automorphism


def nat_transformations_dim(cat: FiniteCat, sigma: CatAutomorphism, n: int,
                            z_condition: bool = False) -> int:
    """Dimension of natural transformations Id -> sigma^n, by enumeration.

    With z_condition, imposes the graded-center compatibility
    sigma(eta_x) = (-1)^n eta_{sigma x}.
    """
    p = cat.p
    obj_n = sigma.power_obj(n)
    offsets = {}
    total = 0
    for x in cat.objects:
        offsets[x] = total
        total += cat.hom(x, obj_n[x])
    if total == 0:
        return 0
    eqs = []
    for x in cat.objects:
        for y in cat.objects:
            df = cat.hom(x, y)
            if df == 0:
                continue
            dx = cat.hom(x, obj_n[x])
            dy = cat.hom(y, obj_n[y])
            dout = cat.hom(x, obj_n[y])
            if dout == 0 and (dx == 0 or dy == 0):
                continue
            sig_f = sigma.power_mat(x, y, n)  # hom(x,y) -> hom(s^n x, s^n y)
            for fi in range(df):
                f = np.eye(df, dtype=np.int64)[fi]
                row = np.zeros((dout, total), dtype=np.int64)
                # sigma^n(f) o eta_x  -  eta_y o f = 0
                for mi in range(dx):
                    m = np.eye(dx, dtype=np.int64)[mi]
                    row[:, offsets[x] + mi] += cat.compose(
                        x, obj_n[x], obj_n[y], m, (sig_f @ f) % p
                    )
                for mi in range(dy):
                    m = np.eye(dy, dtype=np.int64)[mi]
                    row[:, offsets[y] + mi] -= cat.compose(x, y, obj_n[y], f, m)
                eqs.append(row % p)
    if z_condition:
        sgn = shift_action_sign(p, n)
        for x in cat.objects:
            sx = sigma.obj_map[x]
            dx = cat.hom(x, obj_n[x])
            dsx = cat.hom(sx, obj_n[sx])
            if dx == 0 and dsx == 0:
                continue
            push = sigma.power_mat(x, obj_n[x], 1)
            row = np.zeros((dsx, total), dtype=np.int64)
            for mi in range(dx):
                row[:, offsets[x] + mi] += push[:, mi]
            for mi in range(dsx):
                row[mi, offsets[sx] + mi] -= sgn
            eqs.append(row % p)
    if not eqs:
        return total
    return kernel(np.vstack(eqs), p).dim


def nat_ab_direct_dims(cat: FiniteCat, sigma: CatAutomorphism, n: int) -> tuple[int, int]:
    """(dim Nat_n, dim Ab_n) computed from the defining relations."""
    p = cat.p
    obj_n = sigma.power_obj(n)
    offsets = {}
    total = 0
    for x in cat.objects:
        offsets[x] = total
        total += cat.hom(x, obj_n[x])
    u_rel = []
    # f o g - sigma^n(g) o f  for f: x -> s^n y, g: y -> x
    for x in cat.objects:
        for y in cat.objects:
            df = cat.hom(x, obj_n[y])
            dgn = cat.hom(y, x)
            if df == 0 or dgn == 0:
                continue
            for fi in range(df):
                f = np.eye(df, dtype=np.int64)[fi]
                for gi in range(dgn):
                    gv = np.eye(dgn, dtype=np.int64)[gi]
                    fg = cat.compose(y, x, obj_n[y], gv, f)  # at y
                    sg = (sigma.power_mat(y, x, n) @ gv) % p
                    gf = cat.compose(x, obj_n[y], obj_n[x], f, sg)  # at x
                    vec = np.zeros(total, dtype=np.int64)
                    vec[offsets[y] : offsets[y] + len(fg)] += fg
                    vec[offsets[x] : offsets[x] + len(gf)] -= gf
                    u_rel.append(vec % p)
    u_span = Subspace.from_vectors(u_rel, p, total)
    nat_dim = total - u_span.dim
    sgn = shift_action_sign(p, n)
    v_rel = []
    for x in cat.objects:
        sx = sigma.obj_map[x]
        dx = cat.hom(x, obj_n[x])
        if dx == 0:
            continue
        push = sigma.power_mat(x, obj_n[x], 1)
        for mi in range(dx):
            vec = np.zeros(total, dtype=np.int64)
            vec[offsets[x] + mi] += 1
            tgt = push[:, mi]
            vec[offsets[sx] : offsets[sx] + len(tgt)] = (
                vec[offsets[sx] : offsets[sx] + len(tgt)] + sgn * tgt
            ) % p
            v_rel.append(vec % p)
    uv_span = Subspace.from_vectors(u_rel + v_rel, p, total)
    ab_dim = total - uv_span.dim
    return nat_dim, ab_dim
