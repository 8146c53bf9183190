"""Command line front end: ``adend <verb> ...``.

Exit status: 0 when the command succeeds and any checked predicate holds,
1 when a checked predicate fails (the first failing basis tuple is printed),
2 for usage errors and malformed input.
"""

from __future__ import annotations

import argparse
import glob as globmod
import json
import random
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional

from . import catalog, forms, sampling, solver, structures, transforms
from .algebra import (
    AlgebraError,
    AlgebraSpace,
    BilinForm,
    LinearMap,
    algebra_from_json,
    algebra_to_json,
    load_algebra,
    save_algebra,
)
from .bimodule import (
    bimodule_from_json,
    check_anti_1_cocycle,
    check_anti_O,
    check_anti_rb,
    check_bimodule,
    check_negative_pair,
    check_on_double,
    double_space,
    dual_bimodule,
    embed_hat,
    induced_ops_on_module,
    load_bimodule,
    semidirect,
)
from .identity import IdentityError, Verdict, check_identity, derive_tensor, parse_identity
from .rational import format_rational, parse_rational

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# parsing helpers ------------------------------------------------------------------

def parse_pairs(text: Optional[str]) -> Dict[str, str]:
    """``"a=b,c=d"`` to ``{"a": "b", "c": "d"}``."""
    out: Dict[str, str] = {}
    if not text:
        return out
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise UsageError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _params(values: Optional[List[str]]) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for v in values or []:
        out.update(parse_pairs(v))
    return out


def _q(args):
    if getattr(args, "q", None) is None:
        return None
    try:
        return parse_rational(args.q)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"--q: {exc}") from None


def _load_alg(path: str) -> AlgebraSpace:
    """An algebra file, or ``catalog:ID`` for a built-in entry."""
    if path.startswith("catalog:"):
        return catalog.algebra(path[len("catalog:"):])
    return load_algebra(path)


def _matrix(text: str, n: Optional[int] = None) -> LinearMap:
    p = Path(text)
    raw = json.loads(p.read_text()) if p.exists() else json.loads(text)
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise UsageError("a matrix is a JSON list of rows")
    rows = [[parse_rational(x) for x in r] for r in raw]
    m = LinearMap.from_rows(rows, len(rows[0]) if rows else 0)
    if n is not None and (m.codomain_dim, m.domain_dim) != (n, n):
        raise UsageError(f"matrix must be {n}x{n}")
    return m


def _form_of(alg: AlgebraSpace, name: Optional[str]) -> BilinForm:
    if name:
        return alg.form(name)
    if len(alg.forms) == 1:
        return next(iter(alg.forms.values()))
    raise UsageError(f"choose a form with --form (available: {sorted(alg.forms)})")


def _op_of(alg: AlgebraSpace, name: Optional[str]) -> str:
    if name:
        if not alg.has_op(name):
            raise UsageError(f"algebra has no op {name!r} (ops: {sorted(alg.ops)})")
        return name
    if len(alg.ops) == 1:
        return next(iter(alg.ops))
    raise UsageError(f"choose an op with --op (ops: {sorted(alg.ops)})")


def _tri(alg: AlgebraSpace, bind: Dict[str, str]):
    tri_r = bind.get("tri_r", bind.get(">", "rop"))
    tri_l = bind.get("tri_l", bind.get("<", "lop"))
    for op in (tri_r, tri_l):
        if not alg.has_op(op):
            raise UsageError(f"algebra has no op {op!r}; bind with --bind tri_r=OP,tri_l=OP")
    return tri_r, tri_l


# output -----------------------------------------------------------------------------

def _emit(args, data, text: str) -> None:
    if args.json:
        print(json.dumps(data, separators=(",", ":")))
    else:
        print(text)


def _verdict_text(v: Verdict, label: str) -> str:
    if v.holds:
        return f"{label}: holds"
    out = f"{label}: FAILS"
    if v.identity:
        out += f"\n  identity: {v.identity}"
    if v.witness:
        out += f"\n  at: ({', '.join(v.witness)})"
    if v.value:
        out += f"\n  value: {v.value}"
    if v.detail:
        out += f"\n  {v.detail}"
    return out


def _verdict_exit(args, v: Verdict, label: str, extra: Optional[dict] = None) -> int:
    data = v.to_json()
    if extra:
        data.update(extra)
    _emit(args, data, _verdict_text(v, label))
    return OK if v.holds else FAIL


# verbs ------------------------------------------------------------------------------

def _bundle(name: str):
    if name.endswith(".json") or Path(name).exists():
        return structures.load_structure(name)
    return structures.get_structure(name)


def cmd_check(args) -> int:
    kind = args.kind
    bind = parse_pairs(args.bind)
    if kind == "structure":
        defn = _bundle(args.bundle)
        files = list(args.files)
        if args.glob:
            files.extend(sorted(globmod.glob(args.glob)))
        if not files:
            raise UsageError("no algebra files given")
        q = _q(args)

        def run(path):
            alg = _load_alg(path)
            return path, structures.check_structure(alg, defn, bind or None, q)

        with ThreadPoolExecutor() as pool:
            results = sorted(pool.map(run, files), key=lambda r: r[0])
        if len(results) == 1:
            path, v = results[0]
            return _verdict_exit(args, v, f"{defn.name} on {path}")
        data = {path: v.to_json() for path, v in results}
        _emit(args, data, "\n".join(_verdict_text(v, f"{defn.name} on {path}") for path, v in results))
        return OK if all(v.holds for _, v in results) else FAIL
    if kind == "identity":
        alg = _load_alg(args.file)
        ident = _bind_identity(parse_identity(args.identity), alg, bind)
        return _verdict_exit(args, check_identity(ident, alg), "identity")
    if kind == "double":
        alg = _load_alg(args.file)
        tri_r, tri_l = _tri(alg, bind)
        v = check_on_double(alg, tri_r, tri_l, args.bundle or "associative", _q(args))
        return _verdict_exit(args, v, f"{args.bundle or 'associative'} on the double space")
    if kind == "bimodule":
        return _verdict_exit(args, check_bimodule(load_bimodule(args.file)), "bimodule")
    if kind == "equiv":
        if args.random:
            return _equiv_random(args)
        if not args.file:
            raise UsageError("check equiv needs an algebra file or --random N")
        alg = _load_alg(args.file)
        tri_r, tri_l = _tri(alg, bind)
        data = _equiv_verdicts(alg, tri_r, tri_l)
        _emit(args, data, "\n".join(f"{k}: {v}" for k, v in data.items()))
        return OK if data["agree"] else FAIL
    raise UsageError(f"unknown check kind {kind!r}")


def _equiv_verdicts(alg: AlgebraSpace, tri_r: str, tri_l: str) -> dict:
    v1 = structures.check_structure(alg, "anti-dendriform", {"tri_r": tri_r, "tri_l": tri_l})
    v2 = check_on_double(alg, tri_r, tri_l)
    v3 = check_negative_pair(alg, tri_r, tri_l)
    return {"anti_dendriform": v1.holds, "double_associative": v2.holds,
            "negative_pair_bimodule": v3.holds, "agree": v1.holds == v2.holds == v3.holds}


def _equiv_random(args) -> int:
    rng = random.Random(args.seed)
    rows = []
    for _ in range(args.random):
        alg = sampling.random_two_op_mixed(rng) if args.dim == 2 else sampling.random_two_op(args.dim, rng)
        rows.append(_equiv_verdicts(alg, "rop", "lop"))
    bad = sum(not r["agree"] for r in rows)
    passing = sum(r["anti_dendriform"] for r in rows)
    data = {"instances": len(rows), "anti_dendriform": passing, "disagreements": bad, "seed": args.seed}
    _emit(args, data, "\n".join(f"{k}: {v}" for k, v in data.items()))
    return OK if not bad else FAIL


def _bind_identity(ident, alg: AlgebraSpace, bind: Dict[str, str]):
    """Map op symbols of an identity to op names of the algebra."""
    mapping = dict(bind)
    unbound = [op for op in sorted(ident.ops()) if op not in mapping and not alg.has_op(op)]
    if unbound:
        free_ops = [op for op in alg.ops if op not in mapping.values()]
        if len(unbound) == 1 and len(free_ops) == 1:
            mapping[unbound[0]] = free_ops[0]
        else:
            raise UsageError(f"bind op symbol(s) {unbound} with --bind SYMBOL=OP (ops: {sorted(alg.ops)})")
    return ident.rename_ops({k: v for k, v in mapping.items() if k in ident.ops()})


def _write_or_print(args, alg: AlgebraSpace) -> int:
    if getattr(args, "output", None):
        save_algebra(alg, args.output)
        if not args.json:
            print(f"wrote {args.output}")
            return OK
    if args.json or getattr(args, "output", None):
        _emit(args, algebra_to_json(alg), "")
    else:
        print(alg.describe())
    return OK


def cmd_derive(args) -> int:
    alg = _load_alg(args.file)
    expr = _bind_identity(parse_identity(args.expr), alg, parse_pairs(args.bind))
    t = derive_tensor(expr, {op: alg.tensor(op) for op in expr.ops()}, alg.dim)
    return _write_or_print(args, alg.with_op(args.name, t, replace=args.replace))


def cmd_transform(args) -> int:
    if args.name not in transforms.TRANSFORMS:
        raise UsageError(f"unknown transform {args.name!r}; known: {', '.join(transforms.TRANSFORMS)}")
    arity, fn = transforms.TRANSFORMS[args.name]
    alg = _load_alg(args.file)
    ops = [o for o in (args.ops or "").split(",") if o]
    need = 1 if arity.startswith("one") else 2
    if len(ops) != need:
        raise UsageError(f"{args.name} takes {need} op(s) via --ops")
    kwargs = {}
    if arity.endswith("-q"):
        q = _q(args)
        if q is None:
            raise UsageError(f"{args.name} needs --q")
        kwargs["q"] = q
    if args.out_name:
        key = "names" if args.name in ("q-pair", "q-pair-alt") else "name"
        kwargs[key] = tuple(args.out_name.split(",")) if key == "names" else args.out_name
    return _write_or_print(args, fn(alg, *ops, replace=args.replace, **kwargs))


def cmd_construct(args) -> int:
    bind = parse_pairs(args.bind)
    if args.kind == "double":
        alg = _load_alg(args.file)
        tri_r, tri_l = _tri(alg, bind)
        return _write_or_print(args, double_space(alg, tri_r, tri_l, args.name or "mul"))
    if args.kind in ("semidirect", "dual"):
        m = load_bimodule(args.file)
        if args.kind == "dual":
            m = dual_bimodule(m)
        return _write_or_print(args, semidirect(m, args.name))
    if args.kind == "hat":
        m = load_bimodule(args.file)
        big, hat = embed_hat(_matrix(args.matrix, m.space_dim), m)
        if args.json:
            _emit(args, {"algebra": algebra_to_json(big), "hat": hat.to_json()}, "")
        else:
            print(big.describe())
            print("hat:", hat.to_json())
        return OK
    raise UsageError(f"unknown construction {args.kind!r}")


def cmd_op(args) -> int:
    if args.kind == "anti-rb":
        alg = _load_alg(args.file)
        op = _op_of(alg, args.op)
        rep = check_anti_rb(_matrix(args.matrix, alg.dim), alg, op)
    else:
        m = load_bimodule(args.file)
        T = _matrix(args.matrix)
        if args.kind == "cocycle":
            return _verdict_exit(args, check_anti_1_cocycle(T, m), "anti-1-cocycle")
        if args.kind == "induce":
            return _write_or_print(args, induced_ops_on_module(T, m))
        rep = check_anti_O(T, m)
    data = rep.to_json()
    text = f"operator: {rep.is_operator}\nstrong: {rep.is_strong}"
    if rep.first_failure:
        eq, at = rep.first_failure
        text += f"\n  {eq} fails at ({', '.join(at)})"
    elif rep.strong_failure:
        eq, at = rep.strong_failure
        text += f"\n  not strong: {eq} fails at ({', '.join(at)})"
    _emit(args, data, text)
    return OK if rep.is_operator and (rep.is_strong or not args.strong) else FAIL


def cmd_form(args) -> int:
    alg = _load_alg(args.file)
    if args.kind == "semidirect":
        tri_r, tri_l = _tri(alg, parse_pairs(args.bind))
        big, _ = forms.form_on_semidirect(alg, tri_r, tri_l, args.op or "mul", args.form or "B")
        return _write_or_print(args, big)
    op = _op_of(alg, args.op)
    B = _form_of(alg, args.form)
    if args.kind == "classify":
        rep = forms.classify_form(B, alg, op)
        _emit(args, rep.to_json(), "\n".join(f"{k}: {v}" for k, v in rep.to_json().items()))
        return OK
    if args.kind == "reconstruct":
        return _write_or_print(args, forms.reconstruct_anti_dendriform(B, alg, op))
    raise UsageError(f"unknown form command {args.kind!r}")


def _solve_report(args, sol: solver.SolutionIdeal) -> int:
    samples = solver.sample_points(sol, limit=args.samples) if args.samples else None
    data = sol.to_json(samples)
    text = [f"consistent: {sol.consistent}", "groebner:"] + [f"  {g}" for g in data["groebner"]]
    text.append(f"free: {', '.join(sol.free_vars) or '(none)'}")
    for p in data.get("sample_points", []):
        text.append("sample: " + ", ".join(f"{k}={v}" for k, v in p.items()))
    _emit(args, data, "\n".join(text))
    return OK


def cmd_solve(args) -> int:
    if args.kind == "free":
        if args.dim is None:
            raise UsageError("solve free needs --dim")
        pins = _params(args.pin)
        return _solve_report(args, solver.solve_anti_dendriform_free(args.dim, pins))
    if args.kind == "iso":
        if len(args.files) != 2:
            raise UsageError("solve iso takes two algebra files")
        a, b = (_load_alg(f) for f in args.files)
        ops = [o for o in (args.ops or "").split(",") if o] or sorted(set(a.ops) & set(b.ops))
        res = solver.iso_search(a, b, ops)
        data = res.to_json()
        text = f"ideal consistent: {res.consistent}\nrational witness: {data['rational_witness']}"
        _emit(args, data, text)
        return OK
    if len(args.files) != 1:
        raise UsageError(f"solve {args.kind} takes one algebra file")
    alg = _load_alg(args.files[0])
    op = _op_of(alg, args.op)
    if args.kind == "compatible":
        return _solve_report(args, solver.solve_compatible_anti_dendriform(alg, op))
    if args.kind == "anti-rb":
        return _solve_report(args, solver.solve_anti_rb(alg, op))
    raise UsageError(f"unknown solve kind {args.kind!r}")


def cmd_catalog(args) -> int:
    if args.kind == "list":
        rows = [{"id": k, "description": catalog.load(k).description} for k in catalog.ids()]
        _emit(args, rows, "\n".join(f"{r['id']:8} {r['description']}" for r in rows))
        return OK
    if args.kind == "self-test":
        rep = catalog.self_test()
        _emit(args, {"ok": rep.ok, "lines": rep.lines, "failures": rep.failures},
              "\n".join(rep.lines + [f"FAIL {f}" for f in rep.failures]))
        return OK if rep.ok else FAIL
    if not args.id:
        raise UsageError(f"catalog {args.kind} needs an id")
    entry = catalog.load(args.id, _params(args.param))
    if args.kind == "show":
        data = algebra_to_json(entry.algebra)
        data["id"] = entry.id
        data["description"] = entry.description
        if entry.params:
            data["params"] = {k: format_rational(v) for k, v in entry.params.items()}
        text = f"{entry.id}: {entry.description}\n{entry.algebra.describe()}"
        _emit(args, data, text)
        return OK
    if args.kind == "export":
        return _write_or_print(args, entry.algebra)
    raise UsageError(f"unknown catalog command {args.kind!r}")


def validate_file(path: str, kind: Optional[str] = None) -> str:
    """Load ``path`` as ``kind`` (guessed from its keys when omitted); returns the kind."""
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise AlgebraError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if kind is None:
        if isinstance(data, dict) and "space_dim" in data:
            kind = "bimodule"
        elif isinstance(data, dict) and "identities" in data:
            kind = "structure"
        else:
            kind = "algebra"
    if kind == "algebra":
        algebra_from_json(data)
    elif kind == "bimodule":
        m = bimodule_from_json(data, p.parent)
        v = check_bimodule(m)
        if not v:
            raise AlgebraError(f"{path}: not a bimodule: {v.identity} fails at {v.witness}")
    elif kind == "structure":
        structures.structure_from_json(data)
    else:
        raise UsageError(f"unknown kind {kind!r}")
    return kind


def cmd_validate(args) -> int:
    results = {}
    status = OK
    for path in args.files:
        try:
            results[path] = {"ok": True, "kind": validate_file(path, args.kind)}
        except (AlgebraError, structures.StructureError, IdentityError, OSError) as exc:
            results[path] = {"ok": False, "error": str(exc)}
            status = USAGE
    _emit(args, results, "\n".join(
        f"{p}: ok ({r['kind']})" if r["ok"] else f"{p}: invalid: {r['error']}" for p, r in results.items()))
    return status


# parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized commands")

    p = argparse.ArgumentParser(prog="adend", description="Exact checks and constructions for small algebras.")
    sub = p.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("check", parents=[common], help="check a structure, identity, bimodule or double space")
    csub = c.add_subparsers(dest="kind", required=True)
    cs = csub.add_parser("structure", parents=[common])
    cs.add_argument("bundle")
    cs.add_argument("files", nargs="*")
    cs.add_argument("--bind")
    cs.add_argument("--q")
    cs.add_argument("--glob")
    ci = csub.add_parser("identity", parents=[common])
    ci.add_argument("identity")
    ci.add_argument("file")
    ci.add_argument("--bind")
    cd = csub.add_parser("double", parents=[common])
    cd.add_argument("file")
    cd.add_argument("--bind")
    cd.add_argument("--bundle")
    cd.add_argument("--q")
    cb = csub.add_parser("bimodule", parents=[common])
    cb.add_argument("file")
    cb.set_defaults(bind=None)
    ce = csub.add_parser("equiv", parents=[common])
    ce.add_argument("file", nargs="?")
    ce.add_argument("--random", type=int, default=0, help="check this many seeded random algebras instead")
    ce.add_argument("--dim", type=int, default=2)
    ce.add_argument("--bind")
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("derive", parents=[common], help="add an op given by a two-variable expression")
    d.add_argument("expr", help='e.g. "x,y: x.y - y.x"')
    d.add_argument("file")
    d.add_argument("--name", required=True)
    d.add_argument("--bind")
    d.add_argument("--replace", action="store_true")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_derive)

    t = sub.add_parser("transform", parents=[common], help="apply a named transform")
    t.add_argument("name", help=", ".join(transforms.TRANSFORMS))
    t.add_argument("file")
    t.add_argument("--ops", required=True, help="source op(s), comma separated")
    t.add_argument("--q")
    t.add_argument("--out-name")
    t.add_argument("--replace", action="store_true")
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_transform)

    k = sub.add_parser("construct", parents=[common], help="double space, semidirect products, hat embedding")
    k.add_argument("kind", choices=["double", "semidirect", "dual", "hat"])
    k.add_argument("file")
    k.add_argument("--bind")
    k.add_argument("--name")
    k.add_argument("--matrix")
    k.add_argument("-o", "--output")
    k.set_defaults(func=cmd_construct)

    o = sub.add_parser("op", parents=[common], help="check operators given as matrices")
    o.add_argument("kind", choices=["anti-rb", "anti-o", "cocycle", "induce"])
    o.add_argument("file", help="algebra file (anti-rb) or bimodule file")
    o.add_argument("--matrix", required=True, help="JSON rows or a file holding them")
    o.add_argument("--op")
    o.add_argument("--strong", action="store_true", help="also require strong")
    o.add_argument("-o", "--output")
    o.set_defaults(func=cmd_op)

    f = sub.add_parser("form", parents=[common], help="bilinear form checks and reconstruction")
    f.add_argument("kind", choices=["classify", "reconstruct", "semidirect"])
    f.add_argument("file")
    f.add_argument("--form")
    f.add_argument("--op")
    f.add_argument("--bind")
    f.add_argument("-o", "--output")
    f.set_defaults(func=cmd_form)

    s = sub.add_parser("solve", parents=[common], help="Groebner-basis searches")
    s.add_argument("kind", choices=["compatible", "anti-rb", "free", "iso"])
    s.add_argument("files", nargs="*")
    s.add_argument("--op")
    s.add_argument("--ops")
    s.add_argument("--dim", type=int)
    s.add_argument("--pin", action="append", help="fix unknowns, e.g. r_112=1,l_112=0")
    s.add_argument("--samples", type=int, default=0, help="also report this many sample points")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("catalog", parents=[common], help="built-in algebras")
    g.add_argument("kind", choices=["list", "show", "export", "self-test"])
    g.add_argument("id", nargs="?")
    g.add_argument("--param", action="append")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_catalog)

    v = sub.add_parser("validate", parents=[common], help="validate input files")
    v.add_argument("files", nargs="+")
    v.add_argument("--kind", choices=["algebra", "bimodule", "structure"])
    v.set_defaults(func=cmd_validate)
    return p


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            return args.func(args)
    except (UsageError, AlgebraError, structures.StructureError, IdentityError, catalog.CatalogError,
            OSError, json.JSONDecodeError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, catalog.CatalogError) and exc.args else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
