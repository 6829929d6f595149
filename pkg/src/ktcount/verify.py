"""Checks behind ``ktc verify``: every inequality and agreement at a given scale."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import bounds as B
from . import census as C
from .construction import audit_cell
from .errors import CapacityError


@dataclass
class Check:
    name: str
    statement: str
    value: object
    status: str  # "pass", "fail" or "skipped"
    detail: str = ""

    def as_row(self) -> dict:
        return {"check": self.name, "statement": self.statement,
                "status": self.status, "detail": self.detail}


def _fmt(x) -> str:
    if isinstance(x, Fraction) and x.denominator != 1:
        return f"{x.numerator}/{x.denominator}"
    return str(int(x)) if isinstance(x, Fraction) else str(x)


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _skip(name: str, reason: str) -> Check:
    return Check(name, "", None, "skipped", reason)


def sandwich_checks(ns, ks, workers=None) -> list[Check]:
    out = []
    for n in ns:
        pairs = [k for k in ks if 1 <= k < n]
        if not pairs:
            continue
        try:
            hist = C.treewidth_histogram(n, workers) if n >= 2 else [1]
        except CapacityError as exc:
            out += [_skip(f"sandwich({n},{k})", str(exc)) for k in pairs]
            continue
        for k in pairs:
            T = sum(hist[: k + 1])
            rep = B.verify_sandwich(n, k, T)
            lb3, ub1 = B.lb_eq3(n, k), B.ub_eq1(n, k)
            ok = lb3 <= T <= ub1
            guard = " (guarded)" if B.ub_eq1_guarded(n, k) else ""
            out.append(Check(f"sandwich({n},{k})", f"{lb3} <= {T} <= {ub1}{guard}", T, _status(ok)))
            if k > 1:
                lo = B.lb_thm2(n, k).lo
                out.append(Check(f"thm2({n},{k})", f"{B.directed(lo)} <= {T}", T,
                                 _status(lo <= T and rep.ok)))
    return out


def forest_checks(ns, workers=None) -> list[Check]:
    out = []
    for n in ns:
        if not 1 <= n <= C.CENSUS_MAX_N - 1:
            out.append(_skip(f"lemma1({n})", "forest dual-oracle run for n <= 6"))
            continue
        T = C.census_T(n, 1, workers).T if n >= 2 else 1
        F = C.forest_count(n, workers)
        out.append(Check(f"lemma1({n})", f"T_{{{n},1}} = {T} == forests = {F}", T, _status(T == F)))
    return out


def ktree_checks(ns, ks, workers=None) -> list[Check]:
    out = []
    for n in ns:
        for k in ks:
            if not (1 <= k <= 4 and n >= k + 2):
                continue
            if n > C.ENUM_MAX_N:
                out.append(_skip(f"thm1({n},{k})", f"enumeration limited to n <= {C.ENUM_MAX_N}"))
                continue
            got, want = C.census_ktrees(n, k, workers), C.ktree_formula(n, k)
            out.append(Check(f"thm1({n},{k})", f"{got} == {want}", got, _status(got == want)))
    return out


def plk_checks(ns, ks, workers=None) -> list[Check]:
    out = []
    for n in ns:
        for k in ks:
            if not (k >= 1 and n >= k + 2):
                continue
            if n > C.ENUM_MAX_N:
                out.append(_skip(f"eq10({n},{k})", f"enumeration limited to n <= {C.ENUM_MAX_N}"))
                continue
            got, want = C.census_proper_linear_ktrees(n, k, workers), B.proper_linear_count(n, k)
            out.append(Check(f"eq10({n},{k})", f"{got} == {want}", got, _status(got == want)))
    return out


def construction_checks(ns, ks, ss, workers=None, strict=False) -> list[Check]:
    out = []
    for n in ns:
        for k in ks:
            if k not in (2, 3) or n < k + 1:
                continue
            for s in ss:
                tag = f"({n},{k},{s})"
                try:
                    r = audit_cell(n, k, s, strict=strict, workers=workers)
                except CapacityError as exc:
                    out.append(_skip(f"construction{tag}", str(exc)))
                    continue
                lb8 = r.lb_eq8
                out += [
                    Check(f"ppd{tag}", f"{r.ppd_failures + r.ppd_width_failures} witness failures, "
                          f"{r.width_failures} width failures", r.ppd_failures + r.width_failures,
                          _status(r.ppd_failures == r.ppd_width_failures == r.width_failures == 0)),
                    Check(f"triples{tag}", f"{r.triple_count} >= {r.triple_lower_bound}", r.triple_count,
                          _status(r.triple_count >= r.triple_lower_bound)),
                    Check(f"preimages{tag}", f"{r.max_preimages} <= {r.preimage_bound}", r.max_preimages,
                          _status(r.max_preimages <= r.preimage_bound)),
                    Check(f"dsets{tag}", f"overlaps {r.dset_overlaps}; max product {r.dset_max_product} <= {2**k}",
                          r.dset_max_product,
                          _status(r.dset_overlaps == 0 and r.dset_max_product <= 2**k)),
                    Check(f"eq8{tag}", f"{r.R} >= {_fmt(lb8)}", r.R,
                          _status(lb8 < 1 or r.R >= lb8),
                          "lb_eq8 < 1, vacuous" if lb8 < 1 else ""),
                ]
    return out


def run_checks(ns, ks, ss, workers=None, strict=False) -> list[Check]:
    return (
        sandwich_checks(ns, ks, workers)
        + (forest_checks(ns, workers) if 1 in ks else [])
        + ktree_checks(ns, ks, workers)
        + plk_checks(ns, ks, workers)
        + construction_checks(ns, ks, ss, workers, strict)
    )
