"""``functor-tor``: batch commands with JSON reports.

Exit codes: 0 success, 1 bad input or configuration, 2 a mathematical check
failed.  The JSON report goes to standard output (and to ``--out``); a short
human-readable table goes to standard error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Callable

from . import __version__
from .crossed import (
    CrossedCategory,
    FiberOrderedCategory,
    NotCrossed,
    build_delta_c,
    build_delta_s,
    build_f_as,
    build_gamma_as,
    build_group_crossed,
    build_symmetric_crossed,
    check_crossed_laws,
    crossed_from_json,
)
from .fincat import (
    FinCategory,
    NotAGroup,
    build_delta_truncated,
    build_group_category,
    category_from_json,
    cyclic_group_table,
    Opposite,
    opposite,
    validate_category,
)
from .hochschild import (
    BimoduleNotAlgebra,
    FiberProductModule,
    LodayModule,
    NotABimodule,
    NotAssociative,
    NotUnital,
    RelationViolation,
    UnsupportedCharacteristic,
    algebra_as_bimodule,
    algebra_from_json,
    compare_homology_routes,
    cyclic_oracle,
    dual_numbers,
    ground_field,
    hochschild_oracle,
)
from .linalg import GF, QQ, Field, FieldMismatch
from .modules import (
    CO,
    CONTRA,
    BaseMismatch,
    CatModule,
    make_representable,
    make_trivial,
    module_from_json,
    validate_functoriality,
)
from .pseudoadj import (
    adjunction_check,
    base_change_check,
    build_b_module,
    check_cyclic_orders_are_pseudo_free,
    pseudo_adjunction_family,
    pseudo_adjunction_iso,
)
from .tor import MarginViolation, check_margin, check_tensor_hom_adjunction, tor_full

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2

TRUNCATED_KINDS = ("delta", "delta_op", "delta_s", "delta_c", "f_as", "gamma_as")
CROSSED_BUILDERS: dict[str, Callable[[int], CrossedCategory]] = {
    "delta_s": build_delta_s,
    "delta_c": build_delta_c,
    "f_as": build_f_as,
    "gamma_as": build_gamma_as,
}
SUITES = ("crossed-laws", "lemma-2-2", "thm-2-3", "pseudo-adjunction", "base-change", "prop-3-4")

_INPUT_ERRORS = (
    ValueError,
    KeyError,
    OSError,
    NotAGroup,
    MarginViolation,
    BaseMismatch,
    FieldMismatch,
    NotAssociative,
    NotUnital,
    NotABimodule,
    BimoduleNotAlgebra,
    UnsupportedCharacteristic,
)


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# reports


class Report:
    def __init__(self, command: str, config: dict):
        self.command = command
        self.config = config
        self.checks: list[dict] = []
        self.data: dict = {}
        self.timings: dict[str, float] = {}
        self.table: list[str] = []

    def check(self, name: str, passed: bool, /, **witness) -> bool:
        entry = {"name": name, "status": "pass" if passed else "fail"}
        if witness:
            entry["witness"] = witness
        self.checks.append(entry)
        self.table.append(f"{'PASS' if passed else 'FAIL'}  {name}")
        return passed

    def timed(self, key: str, fn, *a, **kw):
        t = time.perf_counter()
        try:
            return fn(*a, **kw)
        finally:
            self.timings[key] = round(time.perf_counter() - t, 3)

    @property
    def ok(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "version": __version__,
            "config": self.config,
            "checks": self.checks,
            "data": self.data,
            "ok": self.ok,
            "timings": self.timings,
        }


def _emit(report: Report, out: str | None) -> None:
    text = json.dumps(report.to_json(), indent=2, sort_keys=True, default=str)
    print(text)
    if out:
        Path(out).write_text(text + "\n")
    for line in report.table:
        print(line, file=sys.stderr)


def _error_report(command: str, config: dict, err: BaseException) -> dict:
    return {"command": command, "version": __version__, "config": config,
            "error": {"type": type(err).__name__, "message": str(err)}, "ok": False}


# ---------------------------------------------------------------------------
# configuration


def _field(args) -> Field:
    if args.field in ("Q", "QQ"):
        return QQ
    if args.p is None:
        raise InputError("--field Fp needs --p")
    try:
        return GF(args.p)
    except ValueError as e:
        raise InputError(str(e)) from None


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func",) and v is not None}
    cfg["threads"] = os.environ.get("FUNCTOR_TOR_THREADS")
    return cfg


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e})") from None


def _group_from_file(path: str) -> FinCategory | CrossedCategory:
    """``{"table": [[...]], "c": [...], "d": [...]}``; c and d make it crossed."""
    data = _load_json(path)
    if "homs" in data:
        return crossed_from_json(data) if "c_members" in data else category_from_json(data)
    if "table" not in data:
        raise InputError(f"{path}: expected a multiplication table under 'table'")
    name = data.get("name", Path(path).stem)
    if "c" in data and "d" in data:
        return build_group_crossed(data["table"], data["c"], data["d"], name=name)
    return build_group_category(data["table"], name=name)


def _named_group(spec: str) -> FinCategory | CrossedCategory:
    """``sym<n>`` (Z/n x Sigma_{n-1}), ``cyclic<n>`` or a JSON file path."""
    for prefix, build in (("sym", build_symmetric_crossed),
                          ("cyclic", lambda n: build_group_category(cyclic_group_table(n), name=f"Z/{n}"))):
        rest = spec[len(prefix):].lstrip(":")
        if spec.startswith(prefix) and rest.isdigit():
            return build(int(rest))
    return _group_from_file(spec)


# ---------------------------------------------------------------------------
# category


def _build_kind(kind: str, N: int):
    if kind == "delta":
        return build_delta_truncated(N)
    if kind == "delta_op":
        return opposite(build_delta_truncated(N))
    if kind in CROSSED_BUILDERS:
        return CROSSED_BUILDERS[kind](N)
    if kind == "sym":
        return build_symmetric_crossed(N)
    if kind.startswith("group:"):
        return _group_from_file(kind[len("group:"):])
    raise InputError(f"unknown category kind {kind!r}")


def cmd_category(args) -> Report:
    rep = Report("category", _config(args))
    try:
        obj = rep.timed("build", _build_kind, args.kind, args.N)
    except NotCrossed as e:
        rep.check("unique factorization", False, morphism=repr(e.morph), factorizations=e.count)
        return rep
    cat = obj.base if isinstance(obj, CrossedCategory) else obj
    rep.data["name"] = obj.name
    rep.data["objects"] = cat.n_objects
    rep.data["morphisms"] = cat.n_morphisms()
    rep.data["hom_sizes"] = cat.hom_table()
    rep.table.append(f"{obj.name}: |Hom(x, y)|, rows x, columns y")
    rep.table += ["  " + " ".join(f"{v:6d}" for v in row) for row in cat.hom_table()]
    bad = rep.timed("axioms", validate_category, cat)
    rep.check("category axioms", not bad, violations=bad)
    if isinstance(obj, CrossedCategory):
        rep.check("unique factorization", True)
        viol = rep.timed("crossed_laws", check_crossed_laws, obj)
        rep.check("crossed laws", not viol, violations=viol)
    return rep


# ---------------------------------------------------------------------------
# tor


def _algebra(spec: str, field: Field):
    if spec in ("ground", "ground_field", "K"):
        return ground_field(field)
    if spec in ("dual", "dual_numbers"):
        return dual_numbers(field)
    return algebra_from_json(_load_json(spec))


def _tor_category(kind: str, N: int) -> FinCategory:
    if kind in ("delta", "delta_op"):
        return _build_kind(kind, N)
    if kind in ("delta_s", "f_as"):
        return FiberOrderedCategory("delta_s", N)
    if kind == "delta_c":
        return FiberOrderedCategory("delta_c", N)
    if kind == "gamma_as":
        return FiberOrderedCategory("gamma", N)
    if kind.startswith("cyclic:") or kind.startswith("sym:"):
        obj = _named_group(kind.replace(":", ""))
    elif kind.startswith("group:"):
        obj = _group_from_file(kind[len("group:"):])
    else:
        raise InputError(f"unknown category {kind!r}")
    return obj.base if isinstance(obj, CrossedCategory) else obj


def _module(spec: str, cat: FinCategory, variance: str, field: Field, N: int) -> CatModule:
    if spec == "trivial":
        return make_trivial(cat, variance, field)
    if spec.startswith("rep:"):
        return make_representable(cat, int(spec[4:]), variance, field)
    if spec == "b":
        if variance != CONTRA:
            raise InputError("b is a contravariant module")
        return build_b_module(cat, field)
    if spec.startswith("loday:"):
        if variance != CO:
            raise InputError("the Loday functor is covariant")
        a = _algebra(spec[len("loday:"):], field)
        if a.field != field:
            raise InputError(f"algebra field {a.field!r} differs from --field {field!r}")
        m = algebra_as_bimodule(a)
        if isinstance(cat, FiberOrderedCategory) and cat.kind in ("gamma", "delta_s", "delta_c"):
            return FiberProductModule(m, cat, name="L(A,A)")
        if isinstance(cat, Opposite):
            return LodayModule(m, N, delta_op=cat)
        raise InputError("loday: needs delta_op, delta_c, f_as or gamma_as")
    if spec.startswith("file:"):
        mod = module_from_json(_load_json(spec[len("file:"):]), cat, field)
        if mod.variance != variance:
            raise InputError(f"{spec}: expected a {variance} module")
        bad = validate_functoriality(mod)
        if bad:
            raise InputError(f"{spec}: not a functor ({bad[0]})")
        return mod
    raise InputError(f"unknown module {spec!r}")


def cmd_tor(args) -> Report:
    rep = Report("tor", _config(args))
    field = _field(args)
    truncated = args.category in TRUNCATED_KINDS
    if truncated:
        check_margin(args.N, args.d)

    def compute(N: int):
        cat = _tor_category(args.category, N)
        m = _module(args.left, cat, CONTRA, field, N)
        n = _module(args.right, cat, CO, field, N)
        return cat, tor_full(m, n, args.d, side=args.side)

    cat, res = rep.timed("tor", compute, args.N)
    rep.data.update({"category": cat.name, "tor": res.dims, "side": res.side,
                     "generators": res.generator_objects,
                     "truncation": {"truncated": truncated, "N": args.N if truncated else None,
                                    "margin": args.N - 2 if truncated else None}})
    rep.table.append(f"Tor over {cat.name}, degrees 0..{args.d}: {res.dims}")
    rep.check("d∘d = 0", not res.resolution.check_dd())
    if truncated and not args.no_stabilize:
        _, nxt = rep.timed("stabilization", compute, args.N + 1)
        rep.data["stabilization"] = {"at_N_plus_1": nxt.dims}
        rep.check("stable at N+1", nxt.dims == res.dims, at_N=res.dims, at_N_plus_1=nxt.dims)
    return rep


# ---------------------------------------------------------------------------
# verify


def _suite_crossed_laws(rep: Report, args, field: Field) -> None:
    if args.input or args.group:
        source = args.input or args.group
        try:
            obj = crossed_from_json(_load_json(args.input)) if args.input else _named_group(args.group)
        except NotCrossed as e:
            rep.check(f"{source}: unique factorization", False,
                      law="unique factorization", morphism=repr(e.morph), factorizations=e.count)
            return
        if not isinstance(obj, CrossedCategory):
            raise InputError(f"{args.group}: need c and d to form a crossed category")
        targets = [obj]
    else:
        targets = [build(args.N) for build in CROSSED_BUILDERS.values()]
        targets += [build_symmetric_crossed(n) for n in range(2, 6)]
    for x in targets:
        viol = rep.timed(f"crossed-laws {x.name}", check_crossed_laws, x)
        laws = sorted({v["law"] for v in viol})
        rep.check(f"crossed laws on {x.name}", not viol, laws=laws, violations=viol)


def _suite_lemma(rep: Report, args, field: Field) -> None:
    one = build_group_category([[0]], name="1")
    z3 = build_group_category(cyclic_group_table(3), name="Z/3")
    d2 = build_delta_truncated(2)
    cases = [
        ("one object, K, K", make_trivial(one, CONTRA, field), make_trivial(one, CO, field), 1),
        ("Z/3, trivial, regular", make_trivial(z3, CONTRA, field), make_representable(z3, 0, CO, field), 1),
        ("Delta<=2, K[Hom(-,[1])], K[Hom([1],-)]", make_representable(d2, 1, CONTRA, field),
         make_representable(d2, 1, CO, field), 2),
    ]
    for name, n, m, v in cases:
        r = rep.timed(f"lemma {name}", check_tensor_hom_adjunction, n, m, v)
        rep.check(f"tensor-hom bijection: {name}", r["ok"], **r)


def _suite_thm(rep: Report, args, field: Field) -> None:
    s3 = build_symmetric_crossed(3)
    r = adjunction_check(s3, make_trivial(s3.c, CONTRA, field), make_trivial(s3.base, CONTRA, field))
    rep.check("hom adjunction on Z/3 x Sigma_2, trivial modules", r["ok"], steps=r["steps"])
    fa = build_f_as(2)
    r = adjunction_check(fa, make_trivial(fa.c, CONTRA, field), build_b_module(fa, field))
    rep.check("hom adjunction on F(as)<=2, N = trivial, M = b", r["ok"], steps=r["steps"])


def _suite_pseudo(rep: Report, args, field: Field) -> None:
    if args.group:
        obj = _named_group(args.group)
        if not isinstance(obj, CrossedCategory):
            raise InputError(f"{args.group}: need c and d to form a crossed category")
        targets = [obj]
    else:
        n = min(args.N, 2)
        targets = [build(n) for build in CROSSED_BUILDERS.values()]
        targets += [build_symmetric_crossed(3), build_symmetric_crossed(4)]
        s3 = targets[-2]
        _, r = pseudo_adjunction_iso(s3, make_trivial(s3.c, CONTRA, GF(3)), make_trivial(s3.base, CO, GF(3)))
        rep.check("iso on Z/3 x Sigma_2, trivial modules over F_3", r["ok"] and r["left_dim"] == 1,
                  left_dim=r["left_dim"], right_dim=r["right_dim"])
    for x in targets:
        parts = 1 if x.base.n_objects == 1 and x.base.hom_size(0, 0) > 6 else 2
        fam = rep.timed(f"pseudo-adjunction {x.name}", pseudo_adjunction_family, x, args.pairs, args.seed,
                        field, parts)
        bad = [r for r in fam["results"] if not r["ok"]]
        rep.check(f"pseudo-adjunction on {x.name} ({args.pairs} seeded pairs)", not bad,
                  seed=args.seed, failures=bad[:3])


def _suite_base_change(rep: Report, args, field: Field) -> None:
    if args.group:
        obj = _named_group(args.group)
        if not isinstance(obj, CrossedCategory):
            raise InputError(f"{args.group}: need c and d to form a crossed category")
        d = args.d if args.d is not None else 2
        cases = [(obj, field, d)]
    else:
        s3, s4 = build_symmetric_crossed(3), build_symmetric_crossed(4)
        cases = [(s3, GF(3), 3), (s3, QQ, 3), (s4, GF(2), 2)]
    for x, f, d in cases:
        r = rep.timed(f"base-change {x.name} {f!r}", base_change_check, x,
                      make_trivial(x.c, CONTRA, f), make_trivial(x.base, CO, f), d)
        rep.data.setdefault("base_change", []).append(
            {"category": x.name, "field": repr(f), "left": r["left"], "right": r["right"]})
        ok = r["ok"] and r["resolutions_dd"] and all(r["tor0_is_tensor"])
        rep.check(f"base change on {x.name} over {f!r}", ok, left=r["left"], right=r["right"])


def _suite_prop(rep: Report, args, field: Field) -> None:
    for x in (build_f_as(args.N), build_gamma_as(args.N)):
        r = rep.timed(f"prop-3-4 {x.name}", check_cyclic_orders_are_pseudo_free, x, field)
        fact = [1]
        for k in range(1, args.N + 1):
            fact.append(fact[-1] * k)
        rep.check(f"cyclic orders are pseudo-free on {x.name}", r["ok"] and r["b_dims"] == fact,
                  b_dims=r["b_dims"], violations=r["violations"][:3])


_SUITE_FUNCS = {
    "crossed-laws": _suite_crossed_laws,
    "lemma-2-2": _suite_lemma,
    "thm-2-3": _suite_thm,
    "pseudo-adjunction": _suite_pseudo,
    "base-change": _suite_base_change,
    "prop-3-4": _suite_prop,
}


def cmd_verify(args) -> Report:
    rep = Report("verify", _config(args))
    field = _field(args)
    suites = SUITES if args.suite == "all" else (args.suite,)
    for s in suites:
        _SUITE_FUNCS[s](rep, args, field)
    return rep


# ---------------------------------------------------------------------------
# homology


def cmd_homology(args) -> Report:
    rep = Report("homology", _config(args))
    a = _algebra(args.algebra, _field(args))
    d = args.d
    N = args.N if args.N is not None else d + 2
    rep.data["algebra"] = {"name": a.name, "dim": a.dim, "field": repr(a.field)}
    if args.via in ("functor", "both"):
        check_margin(N, d)
    if args.via == "oracle":
        dims = rep.timed("oracle", hochschild_oracle, a, algebra_as_bimodule(a), d) if args.kind == "hochschild" \
            else rep.timed("oracle", cyclic_oracle, a, d)
        rep.data["routes"] = {"oracle": dims}
        rep.table.append(f"{args.kind} oracle, degrees 0..{d}: {dims}")
        return rep
    r = rep.timed("routes", compare_homology_routes, a, None, N, d, kind=args.kind,
                  stabilize=not args.no_stabilize)
    routes = dict(r["routes"])
    if args.via == "functor":
        routes.pop("oracle")
        ok = routes["crossed"] == routes["simplicial"]
        rep.check("functor routes agree", ok, **routes)
    else:
        for pair, verdict in r["agree"].items():
            rep.check(f"routes agree: {pair}", all(verdict), per_degree=verdict)
    if "stabilization" in r:
        rep.data["stabilization"] = r["stabilization"]["at_N_plus_1"]
        rep.check("stable at N+1", r["stabilization"]["stable"])
    rep.data["routes"] = routes
    rep.data["N"] = N
    for k, v in routes.items():
        rep.table.append(f"{args.kind} via {k}, degrees 0..{d}: {v}")
    return rep


# ---------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", choices=["Q", "QQ", "Fp"], default="Q")
    common.add_argument("--p", type=int)
    common.add_argument("--N", type=int, default=3, help="truncation of simplicial-type categories")
    common.add_argument("--d", type=int, help="top degree")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="also write the JSON report here")

    ap = argparse.ArgumentParser(prog="functor-tor", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("category", parents=[common], help="build and validate a category")
    c.add_argument("kind", help="delta | delta_s | delta_c | f_as | gamma_as | sym | group:<file>")
    c.add_argument("n", nargs="?", type=int, help="truncation (overrides --N)")
    c.set_defaults(func=cmd_category)

    t = sub.add_parser("tor", parents=[common], help="Tor over a category")
    t.add_argument("category", help="delta | delta_op | delta_s | delta_c | f_as | gamma_as | "
                                    "cyclic:<n> | sym:<n> | group:<file>")
    t.add_argument("left", help="contravariant: trivial | rep:<obj> | b | file:<path>")
    t.add_argument("right", help="covariant: trivial | rep:<obj> | loday:<algebra> | file:<path>")
    t.add_argument("--side", choices=["auto", "left", "right"], default="auto")
    t.add_argument("--no-stabilize", action="store_true")
    t.set_defaults(func=cmd_tor)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    v.add_argument("--group", help="sym<n>, cyclic<n> or a group JSON file")
    v.add_argument("--input", help="crossed category JSON for crossed-laws")
    v.add_argument("--pairs", type=int, default=3, help="seeded pairs per category (pseudo-adjunction)")
    v.set_defaults(func=cmd_verify)

    h = sub.add_parser("homology", parents=[common], help="Hochschild or cyclic homology")
    h.add_argument("kind", choices=["hochschild", "cyclic"])
    h.add_argument("algebra", help="algebra JSON file, or ground_field | dual_numbers")
    h.add_argument("--via", choices=["functor", "oracle", "both"], default="both")
    h.add_argument("--no-stabilize", action="store_true")
    h.set_defaults(func=cmd_homology, N=None)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = _parser()
    args = ap.parse_args(argv)
    if args.command == "category" and args.n is not None:
        args.N = args.n
    if args.command in ("tor", "homology") and args.d is None:
        args.d = 2
    config = _config(args)
    try:
        rep = args.func(args)
    except (RelationViolation, NotCrossed) as e:
        print(json.dumps(_error_report(args.command, config, e), indent=2, sort_keys=True, default=str))
        print(f"check failed: {e}", file=sys.stderr)
        return EXIT_CHECK
    except (InputError, *_INPUT_ERRORS) as e:
        print(json.dumps(_error_report(args.command, config, e), indent=2, sort_keys=True, default=str))
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    _emit(rep, args.out)
    return EXIT_OK if rep.ok else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
