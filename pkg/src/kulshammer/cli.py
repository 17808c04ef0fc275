"""Command-line front end.

Subcommands: ideals, hh, fingerprint, dualnum, orbit, selftest.
Exit codes: 0 ok, 1 property-check failure, 2 input error.
Identical inputs and seed produce byte-identical JSON output.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import algebra as alg_mod
from . import dualnumbers as dn
from . import graded as gr
from . import hochschild as hh_mod
from . import ideals as id_mod
from .hochschild import BudgetExceededError, FiniteCat
from .linalg import Subspace


class InputError(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_algebra(path: str):
    data = _load_json(path)
    try:
        return alg_mod.from_structure_constants(data)
    except alg_mod.AlgebraError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _emit(payload: dict, fmt: str, tsv_rows=None):
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    elif fmt == "tsv" and tsv_rows is not None:
        for row in tsv_rows:
            print("\t".join(str(c) for c in row))
    else:
        _print_human(payload)


def _print_human(payload: dict, indent: int = 0):
    pad = "  " * indent
    for key in payload:
        val = payload[key]
        if isinstance(val, dict):
            print(f"{pad}{key}:")
            _print_human(val, indent + 1)
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            print(f"{pad}{key}:")
            for item in val:
                _print_human(item, indent + 1)
                print()
        else:
            print(f"{pad}{key}: {val}")


def _labeled_basis(alg, sub: Subspace) -> list[str]:
    return [alg.describe(row) for row in sub.basis]


def cmd_ideals(args) -> int:
    alg = _load_algebra(args.algebra)
    chain = id_mod.ideal_chain(alg, args.r_max)
    h = alg_mod.hh0(alg)
    payload = {
        "p": alg.p,
        "dim": alg.dim,
        "center_dim": chain.k_dims[0],
        "commutator_dim": h.commutators.dim,
        "hh0_dim": h.dim,
        "t_dims": chain.t_dims,
        "k_dims": chain.k_dims,
        "k_bases": {f"K_{r}": _labeled_basis(alg, s) for r, s in enumerate(chain.k_chain)},
        "reynolds_dim": chain.reynolds.dim,
        "reynolds_basis": _labeled_basis(alg, chain.reynolds),
        "stabilizes_at": chain.r_star,
    }
    rows = [("r", "dim K_r", "dim T_r")] + [
        (r, kd, td) for r, (kd, td) in enumerate(zip(chain.k_dims, chain.t_dims))
    ]
    _emit(payload, args.format, rows)
    return 0


def cmd_hh(args) -> int:
    alg = _load_algebra(args.algebra)
    dims = {}
    for l in range(args.l_max + 1):
        try:
            dims[l] = hh_mod.hh_cohomology(alg, l)[0]
        except BudgetExceededError as exc:
            payload = {"error": str(exc), "computed": dims}
            _emit(payload, args.format)
            return 0
    payload = {"p": alg.p, "dim": alg.dim, "hh_dims": {str(l): d for l, d in dims.items()}}
    rows = [("l", "dim HH^l")] + [(l, d) for l, d in dims.items()]
    _emit(payload, args.format, rows)
    return 0


def cmd_fingerprint(args) -> int:
    a = _load_algebra(args.algebra_a)
    b = _load_algebra(args.algebra_b)
    fa = id_mod.fingerprint(a, args.r_max)
    fb = id_mod.fingerprint(b, args.r_max)
    verdict = id_mod.compare_fingerprints(fa, fb)
    payload = {
        "a": fa.to_json(),
        "b": fb.to_json(),
        "verdict": verdict,
        "indistinguishable": verdict == "equal",
    }
    _emit(payload, args.format)
    return 0


def _dualnum_homs_report(p: int, W: int) -> dict:
    objs = dn.interval_objects(W)
    cells = []
    for a in objs:
        for b in objs:
            for t in range(-W, W + 1):
                d = dn.hom_dim(a, b, t)
                if d:
                    cells.append({"src": str(a), "dst": str(b), "t": t, "dim": d})
    return {"hom_spaces": cells, "objects": len(objs)}


def _dualnum_center_report(p: int, W: int) -> dict:
    out = {}
    for t in range(-W, W + 1):
        z = dn.graded_center_model(t, W, p)
        out[str(t)] = {"dim": z.dim, "params": z.params}
    return {"graded_center": out, "window": W}


def _dualnum_ab_report(p: int, W: int) -> dict:
    out = {}
    for t in range(-W, W + 1):
        a = dn.ab_component_model(t, W, p)
        out[str(t)] = {"dim": a.dim, "params": a.params}
    dec = dn.ab0_decomposition(W, p)
    return {
        "abelianization": out,
        "degree0_decomposition": {
            "dim": dec.ab0_dim,
            "phi_image_dim": dec.phi_image.dim,
            "complement_dim": dec.complement.dim,
            "direct": dec.direct,
            "trace_section": dec.trace_section,
        },
    }


def _dualnum_chi_report(p: int, W: int) -> dict:
    cells = []
    for l in range(0, W + 1):
        for gen in dn.hh_generators(l, p):
            target = dn.Interval(-max(l, 1) - 1, 0)
            nf = dn.chi(l, gen, target, p)
            cells.append({
                "l": l, "generator": gen, "target": str(target),
                "value": nf.describe(),
            })
    return {"chi": cells}


def _dualnum_krs_report(p: int, W: int, r_values, s_values, t_values) -> dict:
    cells = []
    for r in r_values:
        for s in s_values:
            for t in t_values:
                cell = dn.k_rs_tables(r, s, t, p, W)
                cells.append(cell.to_json())
    return {"krs_table": cells}


def _dualnum_hk_report(p: int, W: int, r_values, s_values, l_max) -> dict:
    cells = []
    for r in r_values:
        for s in s_values:
            for l in range(l_max + 1):
                cells.append(dn.hk_tables(r, s, l, p, W).to_json())
    return {"hk_table": cells}


def cmd_dualnum(args) -> int:
    p, W = args.p, args.window
    r_values = [1, 2]
    s_values = list(range(-args.s_bound, args.s_bound + 1))
    t_values = list(range(0, args.t_bound + 1))
    reports = {}
    wanted = args.report
    if wanted in ("homs", "all"):
        reports.update(_dualnum_homs_report(p, W))
    if wanted in ("center", "all"):
        reports.update(_dualnum_center_report(p, W))
    if wanted in ("ab", "all"):
        reports.update(_dualnum_ab_report(p, W))
    if wanted in ("chi", "all"):
        reports.update(_dualnum_chi_report(p, W))
    if wanted in ("krs", "all"):
        reports.update(_dualnum_krs_report(p, W, r_values, s_values, t_values))
    if wanted in ("hk", "all"):
        reports.update(_dualnum_hk_report(p, W, r_values, s_values, args.t_bound))
    payload = {
        "p": p,
        "window": W,
        "certified": "interval lengths 0..W; all degrees exact in the parametrized model",
        **reports,
    }
    rows = None
    if wanted == "krs":
        rows = [("p", "r", "s", "t", "kind", "dim", "ambient")]
        for c in reports["krs_table"]:
            rows.append((c["p"], c["r"], c["s"], c["t"], c["kind"], c["dim"], c["ambient_dim"]))
    if wanted == "hk":
        rows = [("p", "r", "s", "l", "kind", "dim", "ambient")]
        for c in reports["hk_table"]:
            rows.append((c["p"], c["r"], c["s"], c["l"], c["kind"], c["dim"], c["ambient_dim"]))
    _emit(payload, args.format, rows)
    return 0


def _load_category(path: str):
    data = _load_json(path)
    if "algebra" in data:
        alg = alg_mod.from_structure_constants(data["algebra"])
        cat = FiniteCat.from_algebra(alg)
    else:
        try:
            p = int(data["p"])
            objects = tuple(str(o) for o in data["objects"])
            hom_dims = {}
            for key, d in data.get("homs", {}).items():
                x, y = key.split("|")
                hom_dims[(x, y)] = int(d)
            comp = {}
            for key, tens in data.get("comp", {}).items():
                x, y, z = key.split("|")
                comp[(x, y, z)] = np.asarray(tens, dtype=np.int64) % p
            identities = {
                str(x): np.asarray(v, dtype=np.int64) % p
                for x, v in data["identities"].items()
            }
            cat = FiniteCat(p=p, objects=objects, hom_dims=hom_dims, comp=comp,
                            identities=identities)
        except (KeyError, ValueError) as exc:
            raise InputError(f"{path}: malformed category: {exc}") from exc
    autos = {}
    for name, spec in (data.get("automorphisms") or {}).items():
        if spec is None:
            autos[name] = gr.CatAutomorphism.identity(cat)
            continue
        if "matrix" in spec and len(cat.objects) == 1:
            o = cat.objects[0]
            autos[name] = gr.CatAutomorphism(
                cat=cat, obj_map={o: o},
                hom_mats={(o, o): np.asarray(spec["matrix"], dtype=np.int64) % cat.p},
            )
        else:
            obj_map = {str(k): str(v) for k, v in spec["objects"].items()}
            mats = {}
            for key, m in spec["matrices"].items():
                x, y = key.split("|")
                mats[(x, y)] = np.asarray(m, dtype=np.int64) % cat.p
            autos[name] = gr.CatAutomorphism(cat=cat, obj_map=obj_map, hom_mats=mats)
    return cat, autos


def cmd_orbit(args) -> int:
    cat, autos = _load_category(args.category)
    name = args.sigma
    if name == "id" and name not in autos:
        sigma = gr.CatAutomorphism.identity(cat)
    elif name in autos:
        sigma = autos[name]
    else:
        raise InputError(f"automorphism {name!r} not defined in {args.category}")
    try:
        orb = gr.orbit_category(cat, sigma, args.window)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    payload: dict = {"p": cat.p, "window": args.window, "objects": list(cat.objects)}
    reliable = [n for n in range(-args.window, args.window + 1)
                if abs(n) + orb.gen_degree_bound <= args.window]
    payload["certified_degrees"] = [min(reliable), max(reliable)] if reliable else []
    if args.report in ("center", "all"):
        payload["center_dims"] = {
            str(n): gr.center_component(orb, n).dim for n in reliable
        }
    if args.report in ("ab", "all"):
        ab_dims = {}
        for n in reliable:
            try:
                ab_dims[str(n)] = gr.ab_component(orb, n).dim
            except gr.WindowTooSmallError:
                ab_dims[str(n)] = "uncertified"
        payload["ab_dims"] = ab_dims
    if args.report in ("krs", "all"):
        ideal = gr.k_rs(orb, args.r, args.s)
        payload["krs"] = {
            "r": args.r, "s": args.s,
            "dims": {str(n): d for n, d in ideal.dims().items()},
            "reliable_degrees": list(ideal.reliable),
        }
    if args.report in ("cy", "all"):
        if args.trace == "coeff-x" and len(cat.objects) == 1:
            o = cat.objects[0]
            alg_dim = cat.hom(o, o)
            func = np.zeros(alg_dim, dtype=np.int64)
            if alg_dim >= 2:
                func[1] = 1
            trace = gr.TraceData(d=args.cy_degree, functionals={o: func})
        else:
            raise InputError("only the one-object coeff-x trace is built in")
        full = gr.cy_check(orb, trace, args.cy_degree, weak=False)
        weak = gr.cy_check(orb, trace, args.cy_degree, weak=True)
        payload["cy"] = {
            "full": bool(full.ok), "weak": bool(weak.ok),
            "violation": full.violation,
        }
        if full.ok:
            perp = gr.k_r_via_perp(orb, trace, args.r, args.cy_degree)
            direct = gr.k_rs(orb, args.r, args.cy_degree)
            agree = all(
                perp.components[n] == direct.components[n] for n in perp.components
            )
            payload["cy"]["perp_equals_annihilator"] = agree
    _emit(payload, args.format)
    return 0


def cmd_selftest(args) -> int:
    rng = np.random.default_rng(args.seed)
    failures = []

    def check(name, ok):
        if not ok:
            failures.append(name)
        print(f"{'ok' if ok else 'FAIL'}  {name}")

    from .linalg import kernel, rank, rref

    for trial in range(20):
        p = int(rng.choice([2, 3, 5]))
        rows, cols = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        m = rng.integers(0, p, size=(rows, cols))
        check(
            f"rank-nullity p={p} trial={trial}",
            rank(m, p) + kernel(m, p).dim == cols,
        )
    for p in (2, 3):
        alg = alg_mod.dual_numbers(p)
        h = alg_mod.hh0(alg)
        comm = h.commutators
        ok = True
        for _ in range(50):
            a = rng.integers(0, p, size=alg.dim)
            c = rng.integers(0, p, size=(max(comm.dim, 1),))
            cvec = (c[: comm.dim] @ comm.basis) % p if comm.dim else np.zeros(alg.dim, dtype=np.int64)
            lhs = h.project(alg.power((a + cvec) % p, p))
            rhs = h.project(alg.power(a, p))
            ok = ok and np.array_equal(lhs, rhs)
        check(f"p-power well-defined on HH0, p={p}", ok)
        cat = FiniteCat.from_algebra(alg)
        mod = hh_mod.bimodule_from_algebra(alg)
        d0 = hh_mod.cochain_differential(cat, mod, 0, 0)
        d1 = hh_mod.cochain_differential(cat, mod, 1, 0)
        check(f"d o d = 0 (cochains), p={p}", not ((d1 @ d0) % p).any())
    for p in (2, 3):
        import itertools

        objs = dn.interval_objects(1)
        ok = True
        for a, b in itertools.product(objs, repeat=2):
            for t in range(-2, 3):
                if dn.hom_dim(a, b, t) != dn.oracle_hom(a, b, t, p).dim:
                    ok = False
        check(f"hom classification vs oracle (small window), p={p}", ok)
    print(f"\n{len(failures)} failure(s)")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kul",
        description="Exact Kulshammer-type ideals and homological invariants over GF(p)",
    )
    ap.add_argument("--json", dest="format", action="store_const", const="json",
                    default="text", help="emit canonical JSON")
    ap.add_argument("--tsv", dest="format", action="store_const", const="tsv",
                    help="emit a TSV table where available")
    sub = ap.add_subparsers(dest="command", required=True)

    p_id = sub.add_parser("ideals", help="algebra-level ideal chain")
    p_id.add_argument("algebra", help="algebra JSON file")
    p_id.add_argument("--r-max", type=int, default=None)
    p_id.set_defaults(func=cmd_ideals)

    p_hh = sub.add_parser("hh", help="bar-complex cohomology dimension table")
    p_hh.add_argument("algebra")
    p_hh.add_argument("--l-max", type=int, default=6)
    p_hh.set_defaults(func=cmd_hh)

    p_fp = sub.add_parser("fingerprint", help="compare two algebras' dimension data")
    p_fp.add_argument("algebra_a")
    p_fp.add_argument("algebra_b")
    p_fp.add_argument("--r-max", type=int, default=None)
    p_fp.set_defaults(func=cmd_fingerprint)

    p_dn = sub.add_parser("dualnum", help="dual-numbers homotopy-category reports")
    p_dn.add_argument("--p", type=int, default=2)
    p_dn.add_argument("--window", type=int, default=4)
    p_dn.add_argument("--s-bound", type=int, default=4)
    p_dn.add_argument("--t-bound", type=int, default=4)
    p_dn.add_argument("--report", default="all",
                      choices=["homs", "center", "ab", "chi", "krs", "hk", "all"])
    p_dn.set_defaults(func=cmd_dualnum)

    p_orb = sub.add_parser("orbit", help="orbit-category reports")
    p_orb.add_argument("category", help="category JSON file")
    p_orb.add_argument("--sigma", default="id")
    p_orb.add_argument("-D", "--window", type=int, default=4)
    p_orb.add_argument("--report", default="all",
                       choices=["center", "ab", "krs", "cy", "all"])
    p_orb.add_argument("--r", type=int, default=1)
    p_orb.add_argument("--s", type=int, default=0)
    p_orb.add_argument("--cy-degree", type=int, default=0)
    p_orb.add_argument("--trace", default="coeff-x")
    p_orb.set_defaults(func=cmd_orbit)

    p_st = sub.add_parser("selftest", help="seeded property checks")
    p_st.add_argument("--seed", type=int, default=0)
    p_st.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    threads = os.environ.get("KUL_THREADS")
    if threads is not None:
        try:
            if int(threads) < 1:
                raise ValueError
        except ValueError:
            print(f"KUL_THREADS must be a positive integer, got {threads!r}", file=sys.stderr)
            return 2
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except alg_mod.AlgebraError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
