"""Command line front end.

Exit codes: 0 success, 2 search budget exhausted, 3 I/O failure,
4 bad configuration or malformed input.
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations
from typing import Optional, Sequence

from . import lattice
from .codes import CodeError, parse_code
from .enumerate import (
    DEFAULT_STATE_BUDGET,
    FIELDS,
    BudgetExceeded,
    KnotRecord,
    enumerate_level,
    format_summary,
    simplify,
    write_json,
    write_tsv,
)
from .groups import DEFAULT_M_MAX, certificate, invariant_vector, parse_certificate

EXIT_OK = 0
EXIT_BUDGET = 2
EXIT_IO = 3
EXIT_CONFIG = 4

HARD_CAP = 9

log = logging.getLogger("pairknot")


class ConfigError(ValueError):
    pass


def _level_job(args):
    n, up_budget, state_budget, m_max = args
    records, summary = enumerate_level(n, up_budget, state_budget)
    for r in records:
        if m_max:
            r.invariants = invariant_vector(r.code, m_max)
        if n >= HARD_CAP:
            r.status = "unconfirmed"
    return records, summary


def run_enumerate(max_crossings: int, up_budget: int = 1, m_max: int = DEFAULT_M_MAX,
                  state_budget: int = DEFAULT_STATE_BUDGET, workers: int = 1):
    jobs = [(n, up_budget, state_budget, m_max) for n in range(max_crossings + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_level_job, reversed(jobs)))[::-1]
    else:
        results = [_level_job(j) for j in jobs]
    records = [r for recs, _ in results for r in recs]
    summaries = [s for _, s in results]
    return records, summaries


def _render(records, fmt: str, header: str) -> str:
    buf = io.StringIO()
    if fmt == "json":
        write_json(records, buf)
    else:
        buf.write(header + "\n")
        write_tsv(records, buf)
    return buf.getvalue()


def _write(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_enumerate(args) -> int:
    if args.up_budget not in (0, 1):
        raise ConfigError("--up-budget must be 0 or 1")
    if args.max_crossings < 0:
        raise ConfigError("--max-crossings must be non-negative")
    if args.max_crossings > HARD_CAP and not args.allow_large:
        raise ConfigError(f"--max-crossings above {HARD_CAP} needs --allow-large")
    if args.workers < 1:
        raise ConfigError("--workers must be positive")
    records, summaries = run_enumerate(args.max_crossings, args.up_budget, args.m_max,
                                       args.orbit_budget, args.workers)
    header = (f"# pairknot catalog max_crossings={args.max_crossings} "
              f"up_budget={args.up_budget} m_max={args.m_max}")
    _write(_render(records, args.format, header), args.out)
    if args.out not in (None, "-"):
        print(format_summary(summaries))
    else:
        print(format_summary(summaries), file=sys.stderr)
    return EXIT_OK


def read_catalog(path: str) -> list[KnotRecord]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("["):
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}: {exc.msg}") from exc
        items = [(k + 1, row) for k, row in enumerate(rows)]
    else:
        items = []
        header = None
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            cells = line.split("\t")
            if header is None:
                header = cells
                if "code" not in header:
                    raise ConfigError(f"{path}:{lineno}: missing header with a code column")
                continue
            if len(cells) != len(header):
                raise ConfigError(f"{path}:{lineno}: expected {len(header)} fields, got {len(cells)}")
            items.append((lineno, dict(zip(header, cells))))
    records = []
    for lineno, row in items:
        try:
            code = parse_code(str(row["code"]))
            rec = KnotRecord(int(row.get("n", code.n)), code, int(row.get("shadow_id", 0) or 0),
                             str(row.get("assignment_bits", "")),
                             parse_certificate(str(row.get("invariants", ""))),
                             str(row.get("status", "confirmed")))
        except (CodeError, KeyError, ValueError) as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
        records.append(rec)
    return records


def cmd_invariants(args) -> int:
    records = read_catalog(args.catalog)
    for r in records:
        r.invariants = invariant_vector(r.code, args.m_max)
    header = f"# pairknot invariants m_max={args.m_max}"
    _write(_render(records, args.format, header), args.out)
    unseparated = [(a, b) for a, b in combinations(records, 2) if a.invariants == b.invariants]
    for a, b in unseparated:
        print(f"unseparated: {a.code} | {b.code}", file=sys.stderr)
    print(f"{len(records)} records, {len(unseparated)} unseparated pairs", file=sys.stderr)
    return EXIT_OK


def cmd_lattice(args) -> int:
    try:
        word = lattice.parse_word(args.word)
    except lattice.AlphabetError as exc:
        raise ConfigError(str(exc)) from exc
    if args.action == "validate":
        bad = lattice.validate_polygon(word)
        if bad is None:
            print("ok")
            return EXIT_OK
        print(f"violation: {bad}")
        return EXIT_CONFIG
    bad = lattice.validate_polygon(word)
    if bad is not None:
        raise ConfigError(f"invalid polygon: {bad}")
    if args.action == "reduce":
        res = lattice.reduce_lattice(word, args.length_budget, args.step_budget)
        print(lattice.format_word(res.word))
        if res.exhausted:
            print(f"step budget of {args.step_budget} exhausted", file=sys.stderr)
            return EXIT_BUDGET
        return EXIT_OK
    raw = lattice.project_to_code(word, args.axis)
    print(raw)
    if args.simplify:
        print(simplify(raw) if raw.n else raw)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pairknot", description="Knot tables from pair codes.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    en = sub.add_parser("enumerate", help="list knots up to a crossing number")
    en.add_argument("--max-crossings", type=int, default=8)
    en.add_argument("--up-budget", type=int, default=1)
    en.add_argument("--m-max", type=int, default=DEFAULT_M_MAX,
                    help="largest symmetric group for invariants (0 skips them)")
    en.add_argument("--orbit-budget", type=int, default=DEFAULT_STATE_BUDGET,
                    help="most diagrams the search may hold per crossing number")
    en.add_argument("--format", choices=("tsv", "json"), default="tsv")
    en.add_argument("--workers", type=int, default=1)
    en.add_argument("--out", default=None)
    en.add_argument("--allow-large", action="store_true")
    en.set_defaults(func=cmd_enumerate)

    inv = sub.add_parser("invariants", help="annotate a catalog with class answers")
    inv.add_argument("catalog")
    inv.add_argument("--m-max", type=int, default=DEFAULT_M_MAX)
    inv.add_argument("--format", choices=("tsv", "json"), default="tsv")
    inv.add_argument("--out", default=None)
    inv.set_defaults(func=cmd_invariants)

    lat = sub.add_parser("lattice", help="cubic lattice polygons")
    lat.add_argument("action", choices=("validate", "reduce", "project"))
    lat.add_argument("word", help='comma separated letters, e.g. "1,2,6,5"')
    lat.add_argument("--length-budget", type=int, default=None)
    lat.add_argument("--step-budget", type=int, default=20_000)
    lat.add_argument("--axis", choices=("x", "y", "z"), default="z")
    lat.add_argument("--simplify", action="store_true", help="also print the simplified name")
    lat.set_defaults(func=cmd_lattice)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
