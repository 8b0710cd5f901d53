"""Command-line front end: single-class queries, table sweeps, verification.

Classes are written `d;m1,...,mk` (k is inferred from the list length, `3;`
is the plane cubic class).  Exit codes: 0 success, 1 computation failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import product

from .cusp import c_beta
from .gw import CACHE_ENV_VAR, GWEngine, InconsistentRelationError, UnderdeterminedError
from .lattice import (
    MAX_BLOWUPS,
    DivisorClass,
    SurfaceModel,
    delta,
    format_class_literal,
    minus_one_classes,
    parse_class_literal,
)
from .verify import SUITES


@dataclass
class ResultRecord:
    """One table row: surface, class literal, both counts, validity flag."""

    k: int
    cls: str
    n: int
    c: int
    valid: bool

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "ResultRecord":
        return cls(
            k=int(data["k"]),
            cls=str(data["cls"]),
            n=int(data["n"]),
            c=int(data["c"]),
            valid=bool(data["valid"]),
        )

    def to_tsv(self) -> str:
        return f"{self.k}\t{self.cls}\t{self.n}\t{self.c}\t{_flag(self.valid)}"


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _fraction_str(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def parse_class(text: str) -> tuple[SurfaceModel, DivisorClass]:
    beta = parse_class_literal(text)
    if beta.k > MAX_BLOWUPS:
        raise ValueError(f"k = {beta.k} exceeds {MAX_BLOWUPS}")
    return SurfaceModel(beta.k), beta


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpcount",
        description="Exact curve counts on the plane blown up at up to 8 points.",
    )
    parser.add_argument("--format", choices=("tsv", "json"), default="tsv")
    parser.add_argument(
        "--cache-path",
        default=None,
        help=f"persistent count cache (default: ${CACHE_ENV_VAR} if set)",
    )
    parser.add_argument("--jobs", type=int, default=1, help="worker threads for sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    p_n = sub.add_parser("nbeta", help="count of rational curves in a class")
    p_n.add_argument("cls", help="class literal d;m1,...,mk")

    p_c = sub.add_parser("cbeta", help="count of rational cuspidal curves in a class")
    p_c.add_argument("cls", help="class literal d;m1,...,mk")

    p_t = sub.add_parser("table", help="sweep classes and emit one row per class")
    p_t.add_argument("--k", type=int, required=True)
    p_t.add_argument("--dmax", type=int, required=True)
    p_t.add_argument("--mmax", type=int, default=None)

    p_v = sub.add_parser("verify", help="run a named verification suite")
    p_v.add_argument("--suite", choices=sorted(SUITES), required=True)

    p_s = sub.add_parser("seeds", help="list the recursion seed classes")
    p_s.add_argument("--k", type=int, required=True)

    return parser


def sweep_classes(k: int, dmax: int, mmax: int | None):
    """Deterministic sweep order: degree, then multiplicity tuples lexicographically."""
    for d in range(1, dmax + 1):
        top = d if mmax is None else min(d, mmax)
        for m in product(range(0, top + 1), repeat=k):
            beta = DivisorClass(d, m)
            if delta(beta) < 1:
                continue
            yield beta


def _cmd_nbeta(engine: GWEngine, args) -> int:
    _, beta = parse_class(args.cls)
    value = engine.n_beta(beta)
    if args.format == "json":
        print(json.dumps({"k": beta.k, "cls": args.cls.strip(), "n": value}))
    else:
        print(f"N={value}")
    return 0


def _cmd_cbeta(engine: GWEngine, args) -> int:
    _, beta = parse_class(args.cls)
    result = c_beta(engine, beta)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "k": beta.k,
                    "cls": args.cls.strip(),
                    "c": result.value,
                    "first_term": _fraction_str(result.first_term),
                    "boundary_term": _fraction_str(result.boundary_term),
                    "valid": result.valid,
                    "warnings": result.warnings,
                }
            )
        )
    else:
        print(
            f"C={result.value} first={_fraction_str(result.first_term)} "
            f"boundary={_fraction_str(result.boundary_term)} valid={_flag(result.valid)}"
        )
        for warning in result.warnings:
            print(f"warning: {warning}", file=sys.stderr)
    return 0


def _cmd_table(engine: GWEngine, args) -> int:
    if not 0 <= args.k <= MAX_BLOWUPS:
        raise ValueError(f"k = {args.k} exceeds {MAX_BLOWUPS}")
    classes = list(sweep_classes(args.k, args.dmax, args.mmax))

    def compute(beta: DivisorClass):
        try:
            result = c_beta(engine, beta)
        except (ValueError, InconsistentRelationError) as exc:
            return beta, None, str(exc)
        record = ResultRecord(
            k=beta.k,
            cls=format_class_literal(beta),
            n=engine.n_beta(beta),
            c=result.value,
            valid=result.valid,
        )
        return beta, record, None

    jobs = max(1, args.jobs)
    if jobs == 1:
        results = map(compute, classes)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(compute, classes))

    records = []
    for beta, record, problem in results:
        if record is None:
            print(f"note: skipped {beta}: {problem}", file=sys.stderr)
            continue
        records.append(record)
    if args.format == "json":
        print(json.dumps([r.to_json() for r in records]))
    else:
        for record in records:
            print(record.to_tsv())
    return 0


def _cmd_verify(engine: GWEngine, args) -> int:
    ok, lines = SUITES[args.suite](engine)
    for line in lines:
        print(line)
    return 0 if ok else 1


def _cmd_seeds(engine: GWEngine, args) -> int:
    surface = SurfaceModel(args.k)
    seeds: list[DivisorClass] = [surface.line()]
    seeds.extend(surface.line() - surface.exceptional(i) for i in range(args.k))
    seeds.extend(minus_one_classes(args.k))
    if args.k == 8:
        seeds.append(surface.anticanonical())
    seen = []
    for beta in seeds:
        if beta in seen:
            continue
        seen.append(beta)
    if args.format == "json":
        print(
            json.dumps(
                [
                    {"k": args.k, "cls": format_class_literal(b), "n": engine.seed_value(b)}
                    for b in seen
                ]
            )
        )
    else:
        for beta in seen:
            print(f"{args.k}\t{format_class_literal(beta)}\t{engine.seed_value(beta)}")
    return 0


_COMMANDS = {
    "nbeta": _cmd_nbeta,
    "cbeta": _cmd_cbeta,
    "table": _cmd_table,
    "verify": _cmd_verify,
    "seeds": _cmd_seeds,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    cache_path = args.cache_path or os.environ.get(CACHE_ENV_VAR)
    engine = GWEngine()
    if cache_path:
        for problem in engine.load_cache(cache_path):
            print(problem, file=sys.stderr)

    try:
        code = _COMMANDS[args.command](engine, args)
    except (ValueError, UnderdeterminedError, InconsistentRelationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if cache_path:
        engine.save_cache(cache_path)
    return code


if __name__ == "__main__":
    sys.exit(main())
