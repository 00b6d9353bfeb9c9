"""Command line entry point: ``wreathcount <subcommand> ...``.

Results go to stdout as JSON lines (or CSV with ``--format csv``).  With
``--out PATH`` they are written to a file whose first line is a ``#`` header
carrying the version and a timestamp; ``--no-header`` drops it so identical
runs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .permgroup import (
    GroupTooLarge,
    PermGroup,
    PermParseError,
    invariants_record,
    parse_generators,
    wreath_decompose,
    wreath_product,
)

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated number list, got {text!r}") from exc


def _group(name: str | None, degree: int | None, gens: str | None) -> PermGroup:
    from . import catalog

    if name:
        try:
            return catalog.get_group(name)
        except KeyError as exc:
            raise UsageError(str(exc)) from exc
    if degree is None or gens is None:
        raise UsageError("give --group NAME or both --degree and --gens")
    try:
        return PermGroup(degree, parse_generators(gens, degree))
    except (PermParseError, ValueError) as exc:
        raise UsageError(f"bad generators: {exc}") from exc


# ------------------------------------------------------------ subcommands


def cmd_invariants(a) -> list[dict]:
    G = _group(a.group, a.degree, a.gens)
    if not G.is_transitive:
        raise UsageError("group is not transitive")
    return [invariants_record(G)]


def cmd_wreath(a) -> list[dict]:
    H1 = _group(a.inner, a.inner_degree, a.inner_gens)
    H2 = _group(a.outer, a.outer_degree, a.outer_gens)
    W = wreath_product(H1, H2, order_cap=a.order_cap)
    rec = invariants_record(W)
    h1 = invariants_record(H1)
    rec["inner_a"] = h1["a"]
    rec["inner_b_q"] = h1["b_q"]
    dec = wreath_decompose(W)
    rec["decomposition_e"] = None if dec is None else dec.e
    rec["decomposition_verified"] = None if dec is None else dec.verified
    return [rec]


def cmd_count_c2(a) -> list[dict]:
    from .quadfield import count_quadratic_Q

    xs = sorted(set(_int_list(a.samples)) | {a.x}) if a.samples else [a.x]
    target = 6 / 3.141592653589793**2
    rows = []
    for x in xs:
        c = count_quadratic_Q(x)
        rows.append({"x_sample": x, "count": c, "ratio": c / x, "target": target})
    return rows


def cmd_count_towers(a) -> list[dict]:
    from .towers import count_towers, h1_fields

    fields = _int_list(a.fields) if a.fields else h1_fields(a.field_bound)
    samples = _int_list(a.samples) if a.samples else None
    rep = count_towers(fields, a.x, mode=a.mode, samples=samples, workers=a.workers,
                       keep_towers=a.dump)
    if a.dump:
        return [kc.to_row() for kc in rep.towers]
    return [asdict(c) for c in rep.counts]


def cmd_residue(a) -> list[dict]:
    from .asymptotics import residue_series
    from .quadfield import QuadraticField

    K_set = _int_list(a.fields) if a.fields else None
    if a.dump_fields:
        return [QuadraticField(d).to_json() for d in (K_set or [])]
    rs = residue_series(a.D, tol=a.tol, field_filter=a.filter, K_set=K_set)
    return [rs.to_json()]


def cmd_rank_bound(a) -> list[dict]:
    from .asymptotics import RankBoundQuery, exact_quadratic_ramified_count
    from .quadfield import QuadraticField

    S = frozenset(_int_list(a.S)) if a.S else frozenset()
    base = QuadraticField(a.base) if a.base is not None else None
    q = RankBoundQuery(base, a.ell, S)
    exact = exact_quadratic_ramified_count(S) if base is None and a.ell == 2 else None
    return [{"ell": a.ell, "S": sorted(S), "base": a.base, "s": q.s_exponent, "bound": q.bound, "exact": exact}]


def cmd_verify(a) -> tuple[list[dict], bool]:
    from .acceptance import run_all

    only = _int_list(a.only) if a.only else None
    results = run_all(only)
    for r in results:
        print(r.line(), file=sys.stderr, flush=True)
    rows = [{"criterion": r.number, "name": r.name, "passed": r.passed, "seconds": round(r.seconds, 3),
             "measured": r.measured} for r in results]
    return rows, all(r.passed for r in results)


# ------------------------------------------------------------ plumbing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wreathcount", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json", help="output format (default json lines)")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--csv", help="shorthand for --format csv --out PATH")
    common.add_argument("--no-header", action="store_true", help="omit the timestamp header line in output files")
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("invariants", parents=[common], help="a(G), b(Q,G), blocks of a transitive group")
    s.add_argument("--group", help="catalog name, e.g. D4 or C2wrC3")
    s.add_argument("--degree", type=int)
    s.add_argument("--gens", help='semicolon-separated cycles, e.g. "(1,2,3,4);(1,3)"')
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("wreath", parents=[common], help="invariants of H1 wr H2 and its decomposition")
    for side in ("inner", "outer"):
        s.add_argument(f"--{side}", help="catalog name")
        s.add_argument(f"--{side}-degree", type=int)
        s.add_argument(f"--{side}-gens")
    s.add_argument("--order-cap", type=int, default=10**6)
    s.set_defaults(func=cmd_wreath)

    s = sub.add_parser("count-c2", parents=[common], help="Z(Q,C2;x) by sieve")
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--samples", help="extra comma-separated bounds")
    s.set_defaults(func=cmd_count_c2)

    s = sub.add_parser("count-towers", parents=[common], help="quartic towers L/K/Q over class-number-one K")
    s.add_argument("--fields", help="comma-separated fundamental discriminants (default: all h=1 with |d| <= --field-bound)")
    s.add_argument("--field-bound", type=int, default=50)
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--mode", choices=("tower", "field"), default="tower")
    s.add_argument("--samples", help="extra comma-separated bounds <= x")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--dump", action="store_true", help="emit one row per tower instead of counts")
    s.set_defaults(func=cmd_count_towers)

    s = sub.add_parser("residue", parents=[common], help="residue series sum R(K)/d_K^2")
    s.add_argument("--D", type=int, default=1000)
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--filter", choices=("all", "h1"), default="all")
    s.add_argument("--fields", help="restricted field list")
    s.add_argument("--dump-fields", action="store_true", help="emit per-field data for --fields")
    s.add_argument("--json", action="store_true", help="accepted for compatibility; JSON is the default")
    s.set_defaults(func=cmd_residue)

    s = sub.add_parser("rank-bound", parents=[common], help="bound on C_ell extensions unramified outside S")
    s.add_argument("--ell", type=int, default=2)
    s.add_argument("--S", default="", help="comma-separated primes")
    s.add_argument("--base", type=int, help="fundamental discriminant of a quadratic base (default Q)")
    s.set_defaults(func=cmd_rank_bound)

    s = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    s.add_argument("--only", help="comma-separated criterion numbers")
    s.set_defaults(func=cmd_verify)
    return p


def _render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return "".join(json.dumps(r, sort_keys=False) + "\n" for r in rows)
    buf = io.StringIO()
    if rows:
        flat = [{k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in r.items()} for r in rows]
        w = csv.DictWriter(buf, fieldnames=list(flat[0]), lineterminator="\r\n")
        w.writeheader()
        w.writerows(flat)
    return buf.getvalue()


_LIST_FLAGS = ("--fields", "--S", "--samples")


def _glue_lists(argv: list[str]) -> list[str]:
    # "-4,-3,5" would otherwise be taken for an option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _LIST_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_lists(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.csv:
        args.format, args.out = "csv", args.csv
    ok = True
    try:
        result = args.func(args)
        if isinstance(result, tuple):
            rows, ok = result
        else:
            rows = result
    except UsageError as exc:
        print(f"wreathcount: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GroupTooLarge, ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"wreathcount: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    text = _render(rows, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            if not args.no_header:
                stamp = time.strftime("%Y-%m-%dT%H:%M:%S")
                fh.write(f"# wreathcount {__version__} {args.subcommand} {stamp}\n")
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
