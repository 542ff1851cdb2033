"""Command-line front end: ``cubeshape field | shape | count``.

Exit codes: 0 success, 2 invalid input, 3 internal consistency failure.
The environment variable CUBESHAPE_THREADS overrides ``--threads``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from . import arith, census, svg
from .shape import gram_perp, point_from_gram, shape
from .field import DegenerateFieldError, FieldType, canonicalize, enumerate_fields, integral_basis

EXIT_INVALID = 2
EXIT_INCONSISTENT = 3


def g12(v: float) -> float:
    """Round to 12 significant digits for printing."""
    return float(f"{v:.12g}")


def frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _dump(obj) -> str:
    return json.dumps(obj, separators=(", ", ": "))


# ---------------------------------------------------------------------------
# subcommands


def cmd_field(args) -> str:
    f = canonicalize(args.m)
    basis = integral_basis(f)
    rec = f.to_json()
    rec["ratio"] = frac(f.ratio)
    rec["integral_basis"] = [[frac(c) for c in e] for e in basis.elements]
    if basis.sign is not None:
        rec["nu_sign"] = basis.sign
    return _dump(rec) + "\n"


def _shape_record(f):
    p = shape(f)
    closed = complex(*point_from_gram(gram_perp(f).evaluate()))
    if abs(closed - p.z) > 1e-12:
        raise census.ConsistencyError(f"Gram pipeline disagrees with closed form for {f.couple}")
    rec = p.to_json()
    rec["z"] = [g12(v) for v in rec["z"]]
    rec["reduced_z"] = [g12(v) for v in rec["reduced_z"]]
    return rec, p


def cmd_shape(args) -> str:
    if args.scan is not None:
        if args.scan < 1:
            raise ValueError("--scan needs X >= 1")
        fields = enumerate_fields(args.scan)
    elif args.m is not None:
        fields = [canonicalize(args.m)]
    else:
        raise ValueError("give m or --scan X")
    lines, pts = [], []
    for f in fields:
        rec, p = _shape_record(f)
        lines.append(_dump(rec))
        pts.append((p.field_type, p.reduced_z))
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(svg.render(pts))
    return "".join(line + "\n" for line in lines)


def _constants_summary(C: arith.ConstantEstimate) -> dict:
    return {"C": g12(C.value), "prime_bound": C.prime_bound, "tail_bound": g12(C.tail_bound)}


TABLE_COLUMNS = ("X", "type", "R1", "R2", "count", "normalized_mass", "target", "deviation")


def _table(rows, fmt: str, summary: dict) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TABLE_COLUMNS)
        for r in rows:
            w.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in r])
        return buf.getvalue()
    return _dump({"rows": [dict(zip(TABLE_COLUMNS, r)) for r in rows], "constants": summary}) + "\n"


def _row(X, ftype, lo, hi, count, mass, target):
    return (X, str(ftype), g12(float(lo)), g12(float(hi)), count, g12(mass), g12(target), g12(abs(mass - target)))


def cmd_count(args, workers: int) -> str:
    if args.couples:
        N, R = args.couples
        c = census.count_couples(N, R, workers)
        if args.format == "csv":
            return f"N,R,total,type_i,type_ii\n{N:.12g},{R:.12g},{c.total},{c.type_i},{c.type_ii}\n"
        return _dump({"N": g12(N), "R": g12(R), "total": c.total, "type_i": c.type_i,
                      "type_ii": c.type_ii}) + "\n"

    if args.constants is not None:
        P = args.constants
        C, k, g = arith.euler_product_C(P), arith.kappa(P), arith.euler_gamma()
        out = {"prime_bound": P}
        for name, est in (("C", C), ("kappa", k), ("gamma", g)):
            out[name] = {"value": g12(est.value), "tail_bound": g12(est.tail_bound)}
        for ftype, name in ((FieldType.I, "C_I"), (FieldType.II, "C_II")):
            coeff = census.NORMALIZER_COEFF[ftype]
            out[name] = {"value": g12(census.normalizer(ftype, C.value)),
                         "tail_bound": g12(float(coeff) * math.sqrt(3) * C.tail_bound),
                         "coefficient_of_C_sqrt3": frac(coeff)}
        out["C_I_over_C_II"] = frac(census.NORMALIZER_COEFF[FieldType.I] / census.NORMALIZER_COEFF[FieldType.II])
        return _dump(out) + "\n"

    C = arith.euler_product_C(args.prime_bound)
    if args.fields:
        X, R1, R2 = args.fields
        if X != int(X):
            raise ValueError("X must be an integer")
        fc = census.count_fields(int(X), R1, R2, check=True, workers=workers)
        target = math.log(R2 / R1) / 3
        rows = []
        for ftype, n in ((FieldType.I, fc.n_i), (FieldType.II, fc.n_ii)):
            mass = n / (census.normalizer(ftype, C.value) * math.sqrt(X))
            rows.append(_row(int(X), ftype, R1, R2, n, mass, target))
        summary = _constants_summary(C)
        summary.update({"n_i": fc.n_i, "n_ii": fc.n_ii, "n_total": fc.n_total})
        return _table(rows, args.format, summary)

    if args.equidist:
        ftype, X, *edges = args.equidist
        try:
            ftype = FieldType(ftype)
            X = float(X)
            edges = [float(e) for e in edges]
        except ValueError as exc:
            raise ValueError(f"--equidist expects TYPE X EDGE EDGE...: {exc}") from None
        if X != int(X):
            raise ValueError("X must be an integer")
        X = int(X)
        em = census.empirical_measure(ftype, X, edges, C)
        rows = [_row(X, ftype, lo, hi, n, m, t)
                for (lo, hi), n, m, t in zip(zip(em.edges, em.edges[1:]), em.counts, em.masses, em.targets())]
        return _table(rows, args.format, _constants_summary(C))

    raise ValueError("count needs one of --couples, --fields, --equidist, --constants")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubeshape",
        description="Shapes of pure cubic fields and the counts behind their equidistribution.")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for counting (CUBESHAPE_THREADS overrides)")
    parser.add_argument("--output", "-o", help="write output here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", help="canonical couple, type, discriminant and integral basis of Q(m^(1/3))",
                       description="Canonical datum (a, b, m, m', type, discriminant Delta(K), ratio r_K) "
                                   "and integral basis {1, alpha, beta} or {1, nu, beta} of Q(m^(1/3)).")
    p.add_argument("m", type=int)

    p = sub.add_parser("shape", help="shape sh(K) in the upper half-plane and its reduction into F",
                       description="Shape of K: i r_K^(1/3) (Type I) or (1 + i r_K^(1/3))/3 (Type II), "
                                   "with exact coordinates and the GL(2,Z) image in the fundamental domain F.")
    p.add_argument("m", type=int, nargs="?")
    p.add_argument("--scan", type=int, metavar="X", help="every field with |Delta(K)| <= X")
    p.add_argument("--svg", metavar="PATH", help="write reduced shapes over the outline of F")

    p = sub.add_parser("count", help="S(N,R), N_?(X,R1,R2), mu_{?,X} masses, constants C, kappa, gamma",
                       description="Counts of strongly carefree couples S(N,R), S_I, S_II; field counts "
                                   "N_I, N_II(X,R1,R2); empirical masses mu_{?,X}([R1,R2)) = count/(C_? sqrt X); "
                                   "constants C, kappa, gamma, C_I, C_II.")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--couples", nargs=2, type=float, metavar=("N", "R"),
                   help="S(N,R): couples with ab <= N, 1/R <= a/b <= R")
    g.add_argument("--fields", nargs=3, type=float, metavar=("X", "R1", "R2"),
                   help="N_I, N_II: fields with |Delta| <= X, R1 < r_K < R2")
    g.add_argument("--equidist", nargs="+", metavar="ARG",
                   help="TYPE X EDGE EDGE...: masses of mu_{TYPE,X} on bins [EDGE_i, EDGE_i+1)")
    g.add_argument("--constants", type=int, metavar="P",
                   help="C, kappa, gamma, C_I, C_II truncated at primes <= P, with tail bounds")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--prime-bound", type=int, default=10 ** 6,
                   help="prime bound used for C in normalizations")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    workers = args.threads
    env = os.environ.get("CUBESHAPE_THREADS")
    if env:
        try:
            workers = int(env)
        except ValueError:
            parser.error(f"CUBESHAPE_THREADS must be an integer, got {env!r}")
    if workers < 1:
        parser.error("thread count must be >= 1")
    try:
        if args.command == "field":
            text = cmd_field(args)
        elif args.command == "shape":
            text = cmd_shape(args)
        else:
            text = cmd_count(args, workers)
    except census.ConsistencyError as exc:
        print(f"cubeshape: consistency failure: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except DegenerateFieldError as exc:
        print(f"cubeshape: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"cubeshape: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
