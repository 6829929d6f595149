"""Command-line front end: ``ktc <subcommand> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 capacity
refusal.  Numbers are written as exact decimal strings; rationals that are
not integers as ``p/q``; intervals as outward-rounded ``lo``/``hi`` columns.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bounds as B
from . import census as C
from . import construction as K
from .errors import CapacityError
from .graph import to_graph6
from .parallel import default_workers
from .widths import check_ppd

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``"3"`` -> ``[3]``; ``"3..6"`` -> ``[3, 4, 5, 6]``."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer or range a..b: {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


@dataclass
class RunConfig:
    command: str
    n: list[int]
    k: list[int]
    s: list[int]
    workers: int
    seed: int
    fmt: str
    out: str | None
    checkpoint: str | None
    long_run: bool
    dedup: bool
    sample: int | None
    no_header: bool
    choose_s: bool = False
    golden: str | None = None
    save_golden: str | None = None
    sidecar: str | None = None
    strict: bool = False
    log_base: str = "2"

    @classmethod
    def from_args(cls, a: argparse.Namespace) -> "RunConfig":
        if a.workers < 1:
            raise UsageError("--workers must be >= 1")
        return cls(
            command=a.command, n=a.n, k=a.k, s=a.s, workers=a.workers, seed=a.seed,
            fmt=a.format, out=a.out, checkpoint=a.checkpoint, long_run=a.long_run,
            dedup=a.dedup, sample=a.sample, no_header=a.no_header,
            choose_s=getattr(a, "choose_s", False), golden=getattr(a, "golden", None),
            save_golden=getattr(a, "save_golden", None), sidecar=getattr(a, "sidecar", None),
            strict=a.strict, log_base=a.log_base,
        )


# --- formatting -------------------------------------------------------------


_DIGITS = 40


def exact_str(x) -> str:
    if isinstance(x, bool) or x is None:
        return "" if x is None else str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def directed_decimal(x: Fraction, up: bool) -> str:
    return B.directed(x, up, _DIGITS)


def _interval_cells(name: str, iv: B.Interval | None) -> dict:
    if iv is None:
        return {f"{name}_lo": "", f"{name}_hi": ""}
    return {f"{name}_lo": directed_decimal(iv.lo, False), f"{name}_hi": directed_decimal(iv.hi, True)}


def emit(cfg: RunConfig, rows: list[dict], out=None) -> None:
    out = out or sys.stdout
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    if cfg.fmt == "json":
        doc = {"command": cfg.command, "rows": [{k: exact_str(v) for k, v in r.items()} for r in rows]}
        if not cfg.no_header:
            doc["generated"] = stamp
        out.write(json.dumps(doc, indent=1) + "\n")
        return
    if not cfg.no_header:
        out.write(f"# ktc {cfg.command} generated {stamp}\n")
    if not rows:
        return
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: exact_str(v) for k, v in r.items()})
    out.write(buf.getvalue())


def _open_out(cfg: RunConfig):
    if cfg.out:
        return open(cfg.out, "w", encoding="ascii", newline="")
    return None


def _write(cfg: RunConfig, rows: list[dict]) -> None:
    fh = _open_out(cfg)
    try:
        emit(cfg, rows, fh)
    finally:
        if fh:
            fh.close()


# --- subcommands ------------------------------------------------------------


def cmd_census(cfg: RunConfig) -> int:
    rows = []
    cells = [(n, k) for n in cfg.n for k in cfg.k]
    for n, k in cells:
        ck = None
        if cfg.checkpoint:
            ck = cfg.checkpoint if len(cells) == 1 else f"{cfg.checkpoint}.n{n}k{k}"
        row = C.census_T(n, k, workers=cfg.workers, checkpoint=ck, long_run=cfg.long_run)
        rows.append({
            "n": n, "k": k, "T": row.T,
            "elapsed_ms": round(row.elapsed * 1000, 3), "method": row.method,
        })
    _write(cfg, rows)
    return EXIT_OK


def cmd_ktrees(cfg: RunConfig) -> int:
    rows = []
    for n in cfg.n:
        for k in cfg.k:
            if not 1 <= k < n:
                continue
            count = C.census_ktrees(n, k, cfg.workers)
            formula = C.ktree_formula(n, k) if n >= k + 2 else ""
            rows.append({"n": n, "k": k, "count": count, "formula": formula,
                         "match": "" if formula == "" else count == formula})
    _write(cfg, rows)
    return EXIT_OK


def cmd_plk(cfg: RunConfig) -> int:
    rows = []
    for n in cfg.n:
        for k in cfg.k:
            if not 1 <= k < n:
                continue
            count = C.census_proper_linear_ktrees(n, k, cfg.workers)
            formula = B.proper_linear_count(n, k) if n >= k + 2 else ""
            rows.append({"n": n, "k": k, "count": count, "formula": formula,
                         "match": "" if formula == "" else count == formula})
    _write(cfg, rows)
    return EXIT_OK


def _single(values: list[int], flag: str) -> int:
    if len(values) != 1:
        raise UsageError(f"{flag} must be a single value for this subcommand")
    return values[0]


def cmd_generate(cfg: RunConfig) -> int:
    n, k, s = _single(cfg.n, "--n"), _single(cfg.k, "--k"), _single(cfg.s, "--s")
    if not 1 < k <= n:
        raise UsageError("generate needs 1 < k <= n")
    if cfg.sample is not None:
        seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.sample)
        triples = [K.sample_triple(n, k, s, np.random.default_rng(q), cfg.strict) for q in seqs]
        items = [(K.build_graph(t), t) for t in triples]
    elif cfg.dedup:
        first: dict = {}
        for t in K.enumerate_triples(n, k, s, strict=cfg.strict):
            g = K.build_graph(t)
            first.setdefault(g.code, (g, t))
        items = [first[c] for c in sorted(first)]
    else:
        items = [(K.build_graph(t), t) for t in K.enumerate_triples(n, k, s, strict=cfg.strict)]

    bad = 0
    side = open(cfg.sidecar, "w", encoding="ascii") if cfg.sidecar else None
    fh = _open_out(cfg) or sys.stdout
    try:
        for g, t in items:
            line = to_graph6(g).decode("ascii")
            fh.write(line + "\n")
            d = K.ppd_witness(t)
            if not check_ppd(g, d):
                bad += 1
            if side:
                rec = {"graph6": line, "triple": t.to_dict(), "ppd": [sorted(b) for b in d.bags]}
                side.write(json.dumps(rec, sort_keys=True) + "\n")
    finally:
        if side:
            side.close()
        if fh is not sys.stdout:
            fh.close()
    return EXIT_FAIL if bad else EXIT_OK


def cmd_preimages(cfg: RunConfig) -> int:
    rows = []
    for n in cfg.n:
        for k in cfg.k:
            for s in cfg.s:
                if not 1 < k <= n:
                    continue
                r = K.grid_row(n, k, s, strict=cfg.strict, workers=cfg.workers)
                rows.append({
                    "n": n, "k": k, "s": s, "triple_count": r.triple_count,
                    "triple_lower_bound": r.triple_lower_bound, "R": r.R,
                    "max_preimages": r.max_preimages, "preimage_bound": r.preimage_bound,
                    "lb_eq8": B.lb_eq8(n, k, s), "single_partial_block": r.single_partial_block,
                })
    _write(cfg, rows)
    return EXIT_OK


def cmd_bounds(cfg: RunConfig) -> int:
    rows = []
    if cfg.choose_s:
        for k in cfg.k:
            c = B.choose_block_size(k)
            row = {"k": k, "s": c.s, "continuous_optimum": c.continuous}
            for sc, v in sorted(c.neighbourhood.items()):
                row[f"cost_s{'-1' if sc < c.s else ('+1' if sc > c.s else '')}"] = v
            rows.append(row)
        _write(cfg, rows)
        return EXIT_OK
    log_base = "e" if cfg.log_base == "e" else 2
    for n in cfg.n:
        for k in cfg.k:
            if not 0 < k <= n:
                continue
            for s in cfg.s:
                rep = B.bound_report(n, k, s, log_base=log_base)
                row = {
                    "n": n, "k": k, "s": s,
                    "ub_eq1": rep.ub_eq1, "ub_eq1_guarded": rep.ub_eq1_guarded,
                    "ub_eq2": rep.ub_eq2, "lb_eq3": rep.lb_eq3, "lb_eq4": rep.lb_eq4,
                }
                row.update(_interval_cells("lb_thm2", rep.lb_thm2))
                row["lb_eq8"] = "" if rep.lb_eq8 is None else rep.lb_eq8
                row.update(_interval_cells("lb_eq9", rep.lb_eq9))
                row["plk_count"] = B.proper_linear_count(n, k) if n >= k + 2 else ""
                row["ppw_ub"] = B.ppw_ub_constant(n, k) if n >= k + 2 else ""
                row["notes"] = "; ".join(rep.notes)
                rows.append(row)
    _write(cfg, rows)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    from .verify import run_checks

    checks = run_checks(cfg.n, cfg.k, cfg.s, workers=cfg.workers, strict=cfg.strict)
    rows = [c.as_row() for c in checks]
    status = EXIT_OK if all(c.status != "fail" for c in checks) else EXIT_FAIL
    values = {c.name: exact_str(c.value) for c in checks if c.status != "skipped"}
    if cfg.save_golden:
        Path(cfg.save_golden).write_text(json.dumps(values, indent=1, sort_keys=True) + "\n")
    if cfg.golden:
        try:
            golden = json.loads(Path(cfg.golden).read_text())
        except (OSError, ValueError) as exc:
            print(f"golden file unreadable: {exc}", file=sys.stderr)
            return EXIT_FAIL
        diff = [
            f"{name}: expected {golden[name]} got {values.get(name, '<missing>')}"
            for name in sorted(golden)
            if values.get(name) != golden[name]
        ]
        if diff:
            print("golden mismatch:", file=sys.stderr)
            for line in diff:
                print(f"  {line}", file=sys.stderr)
            status = EXIT_FAIL
    _write(cfg, rows)
    return status


COMMANDS = {
    "census": cmd_census,
    "ktrees": cmd_ktrees,
    "plk": cmd_plk,
    "generate": cmd_generate,
    "preimages": cmd_preimages,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
}

_DEFAULT_RANGES = {
    "census": ("3..6", "1..3", "1"),
    "ktrees": ("3..7", "1..4", "1"),
    "plk": ("4..7", "1..3", "1"),
    "generate": ("3", "2", "1"),
    "preimages": ("3..6", "2..3", "1..3"),
    "bounds": ("5", "2", "1"),
    "verify": ("3..6", "1..4", "1..3"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ktc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        dn, dk, ds = _DEFAULT_RANGES[name]
        p.add_argument("--n", type=parse_range, default=parse_range(dn))
        p.add_argument("--k", type=parse_range, default=parse_range(dk))
        p.add_argument("--s", type=parse_range, default=parse_range(ds))
        p.add_argument("--workers", type=int, default=default_workers())
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out")
        p.add_argument("--checkpoint")
        p.add_argument("--long-run", action="store_true")
        p.add_argument("--dedup", action="store_true")
        p.add_argument("--sample", type=int)
        p.add_argument("--no-header", action="store_true")
        p.add_argument("--strict", action="store_true",
                       help="use |N(i)| >= floor((k+1)/2)+1 instead of ceil((k+1)/2)")
        p.add_argument("--log-base", choices=("2", "e"), default="2")
        if name == "bounds":
            p.add_argument("--choose-s", action="store_true")
        if name == "verify":
            p.add_argument("--golden")
            p.add_argument("--save-golden")
        if name == "generate":
            p.add_argument("--sidecar", help="JSON-lines file of triples and PPD certificates")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig.from_args(args)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
