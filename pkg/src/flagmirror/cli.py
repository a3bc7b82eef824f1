"""Command-line front end: ``flagmirror compute | verify | compare``.

Exit status: 0 success, 1 failed check or differing series, 2 malformed
input, 3 z-window overflow, 4 provenance mismatch (use ``--force``).
"""
import argparse
import json
import sys

from .ifunctions import (FlagSetup, brown_i, f_ab, grassmann_i, gt_modify, j_function_projective,
                         main_flag_i, oh_split_input, reduce_series, twisted_F)
from .rings import gkm_data
from .serialize import (ProvenanceMismatch, TruncationOverflow, dumps, series_from_json,
                        series_to_json, setup_hash)
from .series import DEFAULT_DMAX, DEFAULT_MINV, DEFAULT_ZWIN
from .verify import (QuantumRing, check_divisor_equation, check_log_pole_C3,
                     check_pole_locations_C1, check_recursion_C2, check_weyl_invariance,
                     compare_series, compare_tables, extract_recursion_table, qde_small_j,
                     tangent_derivative, toric_i_hirzebruch)

ALL_CHECKS = ("divisor", "weyl", "c1", "c2", "c3")


class UsageError(ValueError):
    pass


def load_setup(path):
    with open(path) as fh:
        raw = json.load(fh)
    try:
        setup = FlagSetup.from_json(raw)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed setup {path}: {exc}") from None
    family = raw.get("family", "one")
    if family not in ("one", "oh"):
        raise UsageError(f"unknown family {family!r}")
    canon = setup.to_json()
    canon["family"] = family
    return setup, family, canon


def _family(setup, family, dmax):
    if family == "one":
        return None
    J = j_function_projective(setup.base_dim, dmax) if setup.base_dim else {0: 1}
    return oh_split_input(setup.V_degrees, J, setup.rs, setup.base_dim, dmax)


def _gt_f_ab(setup, fam, dmax):
    F = gt_modify(f_ab(setup, fam, dmax))
    ref = twisted_F(setup, fam, dmax, reduce=True)
    pres = ref.meta.get("presentation")
    return reduce_series(F, pres) if pres is not None else F


def _qde(setup, fam, dmax, zwin):
    if setup.base_dim or any(setup.V_degrees) or len(setup.rs) != 1:
        raise UsageError("qde_small_j needs a Grassmannian setup (one level, trivial V, point base)")
    return qde_small_j(QuantumRing.grassmannian(setup.rs[0], setup.n), dmax, -zwin[0])


def _toric(setup, fam, dmax):
    if setup.base_dim != 1 or sorted(setup.V_degrees) != [-1, 0] or setup.rs != (1,):
        raise UsageError("toric_i_hirzebruch needs r=[1], V=[0,-1], base=1")
    return toric_i_hirzebruch(1, dmax)


CONSTRUCTORS = {
    "grassmann_i": lambda s, f, d, z: grassmann_i(s, f, d),
    "main_flag_i": lambda s, f, d, z: main_flag_i(s, f, d),
    "brown_i": lambda s, f, d, z: brown_i(s, dmax=d, equivariant=s.equivariant),
    "gt_brown_i": lambda s, f, d, z: gt_modify(brown_i(s, dmax=d, equivariant=s.equivariant)),
    "twisted_F": lambda s, f, d, z: twisted_F(s, f, d),
    "f_ab": lambda s, f, d, z: f_ab(s, f, d),
    "gt_f_ab": lambda s, f, d, z: _gt_f_ab(s, f, d),
    "qde_small_j": lambda s, f, d, z: _qde(s, f, d, z),
    "toric_i_hirzebruch": lambda s, f, d, z: _toric(s, f, d),
}


def compute(args):
    if args.constructor not in CONSTRUCTORS:
        raise UsageError(f"unknown constructor {args.constructor!r}; choose from {sorted(CONSTRUCTORS)}")
    if args.dmax < 0 or args.minv < 1 or args.zwin[0] > args.zwin[1]:
        raise UsageError("truncation must be positive with zwin lo <= hi")
    setup, family, canon = load_setup(args.setup)
    fam = _family(setup, family, args.dmax)
    F = CONSTRUCTORS[args.constructor](setup, fam, args.dmax, tuple(args.zwin))
    F = F.with_coeffs(F.coeffs, dmax=args.dmax, zwin=tuple(args.zwin), minv=args.minv)
    doc = series_to_json(F, canon, args.constructor)
    _write(dumps(doc), args.out)
    return 0


def _load_series(path):
    with open(path) as fh:
        doc = json.load(fh)
    return doc, series_from_json(doc)


def _reference_tables(setup, G, dmax, a_max):
    ref_setup = FlagSetup(setup.rs, (0,) * setup.n, equivariant=True)
    M = main_flag_i(ref_setup, dmax=dmax)
    T = extract_recursion_table(M, G, a_max)
    T_deriv = extract_recursion_table(tangent_derivative(M), G, a_max)
    return T, compare_tables(T, T_deriv, G)


def verify(args):
    doc, F = _load_series(args.input)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = [c for c in checks if c not in ALL_CHECKS]
    if unknown:
        raise UsageError(f"unknown checks {unknown}; choose from {list(ALL_CHECKS)}")
    setup = FlagSetup.from_json(doc["setup"])
    if args.setup:
        _, _, canon = load_setup(args.setup)
        if setup_hash(canon) != doc["setup_hash"] and not args.force:
            raise ProvenanceMismatch("setup file does not match the series header")
    reports = []
    nonab = None
    G = None
    if any(c in checks for c in ("c1", "c2", "c3")):
        if not setup.equivariant:
            raise UsageError("pole and recursion checks need an equivariant series")
        G = gkm_data(setup.n, setup.rs, "Fl")
        nonab = gt_modify(F) if F.side == "abelian" else F
    a_max = max(1, min(2, F.dmax))
    for c in checks:
        if c == "divisor":
            rep = check_divisor_equation(F)
        elif c == "weyl":
            if F.side == "abelian":
                rep = check_weyl_invariance(F)
            else:
                rep = {"check": "weyl", "passed": True, "failures": [], "skipped": "nonabelian series"}
        elif c == "c1":
            rep = check_pole_locations_C1(nonab, G)
        elif c == "c2":
            T, tables = _reference_tables(setup, G, F.dmax, a_max)
            rep = check_recursion_C2(nonab, T, G, a_max)
            rep["reference_tables"] = tables
            rep["passed"] = rep["passed"] and tables["passed"]
        else:
            rep = check_log_pole_C3(nonab, G)
        if F.side == "abelian" and c in ("c1", "c2", "c3"):
            rep["applied_to"] = "g/t modification"
        reports.append(rep)
    out = {"schema": doc["schema"], "setup_hash": doc["setup_hash"], "input": args.input,
           "passed": all(r["passed"] for r in reports), "reports": reports}
    _write(dumps(out), args.out)
    return 0 if out["passed"] else 1


def compare(args):
    da, A = _load_series(args.a)
    db, B = _load_series(args.b)
    if da["setup_hash"] != db["setup_hash"] and not args.force:
        raise ProvenanceMismatch("series come from different setups")
    zwin = tuple(args.zwin) if args.zwin else None
    diff = compare_series(A, B, zwin=zwin, dmax=args.dmax)
    out = {"schema": da["schema"], "a": args.a, "b": args.b, "equal": not diff, "diff": diff}
    _write(dumps(out), args.out)
    return 0 if not diff else 1


def _write(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser():
    p = argparse.ArgumentParser(prog="flagmirror", description="I-functions of flag bundles")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute a series")
    c.add_argument("--constructor", required=True)
    c.add_argument("--setup", required=True)
    c.add_argument("--dmax", type=int, default=DEFAULT_DMAX)
    c.add_argument("--zwin", type=int, nargs=2, default=list(DEFAULT_ZWIN), metavar=("LO", "HI"))
    c.add_argument("--minv", type=int, default=DEFAULT_MINV)
    c.add_argument("--out")
    c.set_defaults(func=compute)

    v = sub.add_parser("verify", help="run property checks on a series file")
    v.add_argument("--input", required=True)
    v.add_argument("--checks", default=",".join(ALL_CHECKS))
    v.add_argument("--setup")
    v.add_argument("--out")
    v.add_argument("--force", action="store_true")
    v.set_defaults(func=verify)

    m = sub.add_parser("compare", help="compare two series files")
    m.add_argument("a")
    m.add_argument("b")
    m.add_argument("--dmax", type=int)
    m.add_argument("--zwin", type=int, nargs=2, metavar=("LO", "HI"))
    m.add_argument("--out")
    m.add_argument("--force", action="store_true")
    m.set_defaults(func=compare)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TruncationOverflow as exc:
        sys.stderr.write(dumps(exc.to_json()))
        return 3
    except ProvenanceMismatch as exc:
        sys.stderr.write(dumps({"error": "provenance_mismatch", "message": str(exc)}))
        return 4
    except (UsageError, OSError, json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write(dumps({"error": "usage", "message": str(exc)}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
