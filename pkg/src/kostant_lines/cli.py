"""Command-line front end.

Exit status: 0 on success, 1 for usage errors, 2 when two independent
evaluations of the same quantity disagree. Tables are TSV with a versioned
header comment, or JSON with a ``schema_version`` field.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import dio, kahler, liealg
from .exact_core import rational_to_str
from .liealg import VerificationError

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, Fraction):
        return rational_to_str(x)
    if isinstance(x, complex):
        return f"{x.real:.17g}{x.imag:+.17g}j"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if x is None:
        return "-"
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return rational_to_str(x)
    if isinstance(x, complex):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


class Report:
    def __init__(self, command: str, columns: list, fmt_: str = "tsv"):
        self.command, self.columns, self.format = command, columns, fmt_
        self.rows: list = []
        self.meta: dict = {}

    def add(self, *row):
        self.rows.append(row)

    def emit(self, out=None):
        out = out or sys.stdout
        if self.format == "json":
            doc = {"schema_version": SCHEMA_VERSION, "command": self.command}
            doc.update(_jsonable(self.meta))
            doc["columns"] = self.columns
            doc["rows"] = [[_jsonable(v) for v in r] for r in self.rows]
            out.write(json.dumps(doc, indent=1, sort_keys=False, default=fmt) + "\n")
            return
        out.write(f"# {self.command} v{SCHEMA_VERSION}\t" + "\t".join(self.columns) + "\n")
        for k, v in self.meta.items():
            out.write(f"# {k}={fmt(v) if not isinstance(v, (list, tuple)) else ','.join(fmt(x) for x in v)}\n")
        for r in self.rows:
            out.write("\t".join(fmt(v) for v in r) + "\n")


def _vec(v) -> str:
    return ",".join(fmt(float(x)) for x in v)


# commands

def cmd_kostant(a):
    if a.d < 2:
        raise UsageError("--d must be >= 2")
    es = [a.e] if a.e is not None else list(range(1, a.d))
    if any(not 1 <= e <= a.d - 1 for e in es):
        raise UsageError("--e must satisfy 1 <= e <= d-1")
    rep = Report("kostant", ["d", "e", "scalar"] + [f"kappa_{i}" for i in range(1, a.d + 1)], a.format)
    table = liealg.kostant_table(a.d)
    for e in es:
        kv = table[e - 1]
        entries = kv.primitive() if a.primitive else kv.entries
        rep.add(a.d, e, kv.content() if a.primitive else 1, *entries)
    return rep


def cmd_sigma(a):
    value = liealg.simple_root_on_kostant(a.d, a.e, a.j)
    rep = Report("sigma", ["d", "e", "j", "value", "singular"], a.format)
    rep.add(a.d, a.e, a.j, value, value == 0)
    return rep


def cmd_scan(a):
    rep = Report("scan-singular", ["d", "e", "j"], a.format)
    for t in dio.singular_scan(a.d_max, root=a.root, workers=a.workers):
        rep.add(t.d, t.e, t.j)
    return rep


def cmd_families(a):
    rep = Report("families", ["family", "d", "e", "j"], a.format)
    fams = [a.family] if a.family else ["i", "ii", "iii", "iv", "v"]
    for fam in fams:
        for t in dio.family_members(fam, a.bound, workers=a.workers):
            rep.add(fam, t.d, t.e, t.j)
    return rep


def cmd_kahler(a):
    st = (a.subtype or "A").upper()
    kf = kahler.kahler_in_coordinates(a.d) if st == "A" else kahler.kahler_subtype(st, a.d)
    rep = Report("kahler", ["section", "index", "exact", "value"], a.format)
    rep.meta = {"d": a.d, "subtype": st}
    for e in sorted(kf.coefficients):
        rep.add("coefficient", e, kf.radicands[e], kf.coefficients[e])
    for i, w in enumerate(kf.coords, 1):
        rep.add("coords", i, None, w)
    for i, w in enumerate(kf.form, 1):
        rep.add("form", i, None, w)
    if (st, a.d) in kahler.reference_forms():
        cmp = kahler.compare_with_reference(st, a.d)
        for i, w in enumerate(cmp["reference"], 1):
            rep.add("reference", i, None, w)
        rep.add("max_rel_err", 0, None, cmp["max_rel_err"])
        rep.add("agrees_1e-9", 0, None, cmp["max_rel_err"] <= 1e-9)
    return rep


def cmd_dio3(a):
    rep = Report("dio3", ["e", "y", "d_plus", "d_minus"], a.format)
    for row in dio.quartic_solutions(a.e_max, workers=a.workers):
        rep.add(*row)
    return rep


def _point(xs):
    return dio.CurvePoint.affine(Fraction(xs[0]), Fraction(xs[1]))


def cmd_curve(a):
    rep = Report(f"curve-{a.op}", ["key", "value"], a.format)
    if a.op == "verify":
        rep.add("on_curve", dio.on_curve(_point(a.args)))
    elif a.op == "add":
        P, Q = _point(a.args[:2]), _point(a.args[2:])
        for P_ in (P, Q):
            if not dio.on_curve(P_):
                raise UsageError(f"{P_} is not on the curve")
        rep.add("sum", str(dio.add(P, Q)))
    elif a.op == "mul":
        P = _point(a.args[1:])
        if not dio.on_curve(P):
            raise UsageError(f"{P} is not on the curve")
        rep.add("product", str(dio.scalar_mul(int(a.args[0]), P)))
    elif a.op == "periods":
        per = dio.real_periods()
        for k in ("omega", "omega1", "omega2"):
            rep.add(k, getattr(per, k))
            rep.add(k + "_reference", dio.REFERENCE[k])
        rep.add("half_loop_quadrature", per.omega_quad)
    elif a.op == "ellog":
        x, y = float(Fraction(a.args[0])), float(Fraction(a.args[1]))
        if abs(y * y - (x**3 - 147 * x + 610)) > 1e-9 * max(1.0, abs(x) ** 3):
            raise UsageError("point is not on the curve")
        if x < dio.ellog.E1:
            raise UsageError("point lies on the bounded oval")
        rep.add("integral", dio.elliptic_log_integral(x))
        rep.add("phi", dio.elliptic_log((x, y)))
    elif a.op == "constants":
        c = dio.ellog_constants()
        rep.columns = ["key", "computed", "reference"]
        fields = ["omega", "omega1", "omega2", "tau", "e1", "e2", "e3", "h_inf_j", "h_delta", "h_E",
                  "c1", "c4", "c5", "c6", "c9", "c10", "c11", "E_param", "E_upper", "M"]
        for k in fields:
            rep.add(k, getattr(c, k), dio.REFERENCE.get(k))
        for k, v in c.omega_phi.items():
            rep.add(f"omega_phi_{k}", v, dio.REFERENCE[f"omega_phi_{k}"])
        rep.add("abs_tau", abs(c.tau), dio.REFERENCE["abs_tau"])
    return rep


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}")


def cmd_margulis(a):
    from .affine_dyn import AffineMap, fixed_point_offset, unnormalized_margulis
    data = _read_json(a.input)
    maps = data["maps"] if isinstance(data, dict) else data
    tol = data.get("tol", a.tol) if isinstance(data, dict) else a.tol
    rep = Report("margulis", ["index", "margulis", "offset"], a.format)
    for i, m in enumerate(maps):
        f = AffineMap.from_dict(m)
        rep.add(i, _vec(unnormalized_margulis(f, tol)), _vec(fixed_point_offset(f, tol)))
    return rep


def _pair(d):
    from .affine_dyn import AffineFlagPair
    cols = {k: np.array(d[k], dtype=float).T for k in ("small_plus", "big_plus", "small_minus", "big_minus")}
    return AffineFlagPair(cols["small_plus"], cols["big_plus"], cols["small_minus"], cols["big_minus"],
                          np.array(d["base"], dtype=float))


def cmd_affratio(a):
    from .affine_dyn import affine_ratio
    data = _read_json(a.input)
    items = data["configurations"] if "configurations" in data else [data]
    rep = Report("affratio", ["index", "translation", "oracle_translation", "vector", "linear"], a.format)
    for i, item in enumerate(items):
        r = affine_ratio(_pair(item["a"]), _pair(item["b"]))
        rep.add(i, _vec(r.translation), _vec(r.oracle_translation), _vec(r.vector),
                ";".join(_vec(row) for row in r.linear))
    return rep


def cmd_defect(a):
    from .affine_dyn import additivity_defect, random_transverse_pair
    rng = np.random.default_rng(a.seed)
    f, q = random_transverse_pair(rng, a.d, math.log(a.min_ratio))
    rep = Report("defect", ["n", "error", "defect", "prediction", "prediction_swapped",
                            "log_contraction_f", "log_contraction_q"], a.format)
    rep.meta = {"d": a.d, "seed": a.seed, "min_ratio": a.min_ratio}
    for n in range(1, a.n_max + 1):
        try:
            r = additivity_defect(f, q, n)
        except ValueError as exc:
            rep.add(n, None, None, None, None, None, str(exc))
            continue
        rep.add(n, r.error, _vec(r.defect), _vec(r.prediction), _vec(r.prediction_swapped),
                r.log_contraction_f, r.log_contraction_q)
    return rep


def cmd_varcone(a):
    from .affine_dyn import random_generators, sample_variation_cone, word_label
    gens = random_generators(a.d, a.generators, a.seed, a.cocycle)
    smp = sample_variation_cone(gens, a.word_len, a.seed, workers=a.workers)
    rep = Report("varcone", ["word", "lambda", "dlambda"], a.format)
    rep.meta = {"d": a.d, "seed": a.seed, "cocycle": a.cocycle, "emitted": len(smp.rows), "skipped": smp.skipped}
    for w, lam, dlam in smp.rows:
        rep.add(word_label(w), _vec(lam), _vec(dlam))
    return rep


def cmd_selftest(a):
    from . import selftest
    rep = Report("selftest", ["check", "passed", "detail"], a.format)
    ok = True
    for name, passed, detail in selftest.run_all():
        rep.add(name, passed, detail)
        ok &= passed
    rep.meta = {"all_passed": ok}
    if not ok:
        rep.emit()
        raise VerificationError("self-test failures")
    return rep


def build_parser() -> argparse.ArgumentParser:
    workers_default = dio.singular.default_workers()
    p = _Parser(prog="kostant-lines", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        sp.add_argument("--format", choices=["tsv", "json"], default=argparse.SUPPRESS)
        return sp

    sp = add("kostant", cmd_kostant, "Kostant vectors of sl_d")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--e", type=int)
    sp.add_argument("--primitive", action="store_true", help="print primitive directions and their scalars")

    sp = add("sigma", cmd_sigma, "sigma_j(kappa^e) by two routes")
    for k in ("d", "e", "j"):
        sp.add_argument(f"--{k}", type=int, required=True)

    sp = add("scan-singular", cmd_scan, "all simple-singular (d, e, j) up to d-max")
    sp.add_argument("--d-max", type=int, required=True)
    sp.add_argument("--root", type=int, help="restrict to one simple root j")
    sp.add_argument("--workers", type=int, default=workers_default)

    sp = add("families", cmd_families, "elementary singular families, verified exactly")
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--family", choices=["i", "ii", "iii", "iv", "v"])
    sp.add_argument("--workers", type=int, default=workers_default)

    sp = add("kahler", cmd_kahler, "compatibility functional in coordinates")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--subtype", choices=["A", "B", "C", "G2"])

    sp = add("dio3", cmd_dio3, "square values of the third-root quartic")
    sp.add_argument("--e-max", type=int, required=True)
    sp.add_argument("--workers", type=int, default=workers_default)

    sp = add("curve", cmd_curve, "arithmetic on y^2 = x^3 - 147x + 610")
    sp.add_argument("op", choices=["verify", "add", "mul", "periods", "ellog", "constants"])
    sp.add_argument("args", nargs="*")

    sp = add("margulis", cmd_margulis, "unnormalized Margulis invariants from a JSON file")
    sp.add_argument("--input", required=True)
    sp.add_argument("--tol", type=float, default=1e-6)

    sp = add("affratio", cmd_affratio, "affine ratio of two flag pairs from a JSON file")
    sp.add_argument("--input", required=True)

    sp = add("defect", cmd_defect, "additivity defect against the affine-ratio prediction")
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--n-max", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--min-ratio", type=float, default=10.0, help="minimal consecutive eigenvalue ratio")

    sp = add("varcone", cmd_varcone, "Jordan variations over reduced words")
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--word-len", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--generators", type=int, default=2)
    sp.add_argument("--cocycle", choices=["random", "zero", "coboundary"], default="random")
    sp.add_argument("--workers", type=int, default=workers_default)

    add("selftest", cmd_selftest, "run the invariant checks")
    return p


_CURVE_ARITY = {"verify": 2, "add": 4, "mul": 3, "periods": 0, "ellog": 2, "constants": 0}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "curve" and len(args.args) != _CURVE_ARITY[args.op]:
            raise UsageError(f"curve {args.op} takes {_CURVE_ARITY[args.op]} arguments")
        if getattr(args, "workers", 1) < 1:
            raise UsageError("--workers must be >= 1")
        rep = args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rep.emit()
    return 0


if __name__ == "__main__":
    sys.exit(main())
