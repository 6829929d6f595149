"""Exact and interval evaluation of the counting bounds.

Formulas free of ``e`` and logarithms are evaluated as Python ``int`` or
:class:`fractions.Fraction`.  The rest go through ``mpmath.iv`` (outward
rounded interval arithmetic) and come back as an :class:`Interval` whose
endpoints are exact rationals, so comparisons against census counts are exact.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from decimal import ROUND_CEILING, ROUND_FLOOR, Context
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from mpmath import iv
from mpmath.libmp import to_rational

from .errors import DomainError

DEFAULT_PREC = 128
REL_WIDTH_TARGET = Fraction(1, 10**6)
MAX_PREC = 1 << 14


@dataclass(frozen=True, order=False)
class Interval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction
    prec: int = DEFAULT_PREC

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def within(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi


@contextmanager
def _precision(bits: int):
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _to_interval(x, prec: int) -> Interval:
    lo, hi = x._mpi_
    p, q = to_rational(lo)
    r, s = to_rational(hi)
    return Interval(Fraction(int(p), int(q)), Fraction(int(r), int(s)), prec)


def _refined(expr, prec: int | None) -> Interval:
    """Evaluate ``expr()`` under ``iv``; with ``prec=None`` double from 128 bits
    until the relative width drops below ``REL_WIDTH_TARGET``."""
    if prec is not None:
        with _precision(prec):
            return _to_interval(expr(), prec)
    bits = DEFAULT_PREC
    while True:
        with _precision(bits):
            out = _to_interval(expr(), bits)
        scale = max(abs(out.lo), abs(out.hi))
        if scale == 0 or out.width <= REL_WIDTH_TARGET * scale or bits >= MAX_PREC:
            return out
        bits *= 2


def directed(x: Fraction, up: bool = False, digits: int = 12) -> str:
    """``x`` as a decimal string rounded down (or up) to ``digits`` significant digits."""
    ctx = Context(prec=digits, rounding=ROUND_CEILING if up else ROUND_FLOOR)
    return str(ctx.divide(ctx.create_decimal(x.numerator), ctx.create_decimal(x.denominator)))


def _ilog(k: int, log_base):
    if log_base in ("e", "natural", math.e):
        return iv.log(k)
    if log_base in (2, "2", "binary"):
        return iv.log(k) / iv.log(2)
    raise DomainError(f"unsupported log base {log_base!r}")


# --- upper bounds -----------------------------------------------------------


def ub_eq1_guarded(n: int, k: int) -> bool:
    """True when ``n < k + 2`` and :func:`ub_eq1` falls back to ``2^C(n,2)``."""
    return n < k + 2


def ub_eq1(n: int, k: int) -> int:
    """``2^(kn - k(k+1)/2) * C(n,k) * (kn - k^2 + 1)^(n-k-2)`` for ``n >= k + 2``."""
    if not 0 < k <= n:
        raise DomainError(f"need 0 < k <= n, got n={n}, k={k}")
    if ub_eq1_guarded(n, k):
        return 2 ** comb(n, 2)
    return 2 ** (k * n - k * (k + 1) // 2) * comb(n, k) * (k * n - k * k + 1) ** (n - k - 2)


def ub_eq2(n: int, k: int) -> Fraction:
    if not 0 < k <= n:
        raise DomainError(f"need 0 < k <= n, got n={n}, k={k}")
    return Fraction((k * 2**k * n) ** n, 2 ** (k * (k + 1) // 2) * k**k)


# --- lower bounds -----------------------------------------------------------


def lb_eq3(n: int, k: int) -> int:
    """Forest-plus-apices bound ``(n-k+1)^(n-k-1) * 2^((k-1)(n-k+1))``."""
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    m = n - k + 1
    trees = 1 if m == 1 else m ** (m - 2)
    return trees * 2 ** ((k - 1) * m)


def lb_eq4(n: int, k: int) -> Fraction:
    """Asymptotic-conditional form ``(2^k n / 4)^n * 2^(-k^2)``."""
    if not 0 < k <= n:
        raise DomainError(f"need 0 < k <= n, got n={n}, k={k}")
    return Fraction(2**k * n, 4) ** n / 2 ** (k * k)


def lb_thm2(n: int, k: int, log_base=2, prec: int | None = None) -> Interval:
    """Enclosure of ``(k 2^k n / (128 e log k))^n * 2^(-k(k+3)/2) * k^(-2k-2)``.

    ``log_base`` is 2 by default; ``"e"`` gives the natural-log reading.
    """
    if k <= 1 or k > n:
        raise DomainError(f"need 1 < k <= n (log k must be positive), got n={n}, k={k}")

    def expr():
        base = iv.mpf(k * 2**k * n) / (128 * iv.e * _ilog(k, log_base))
        return base**n / iv.mpf(2 ** (k * (k + 3) // 2)) / iv.mpf(k ** (2 * k + 2))

    return _refined(expr, prec)


def eq8_numerator_guarded(n: int, k: int) -> bool:
    """True when ``n < k + 1``: steps ``2..k+1`` do not all exist."""
    return n < k + 1


def eq8_numerator(n: int, k: int, s: int) -> Fraction:
    """Exact lower bound on the number of constructible triples.

    For ``n < k + 1`` the closed form has negative exponents; there the value
    is the exact count ``(n-1)! * prod_{i=2..n} 2^(i-2)`` of the steps that exist.
    """
    if not 1 < k <= n or s < 1:
        raise DomainError(f"need 1 < k <= n and s >= 1, got n={n}, k={k}, s={s}")
    if eq8_numerator_guarded(n, k):
        return Fraction(factorial(n - 1) * 2 ** ((n - 1) * (n - 2) // 2))
    m = n - (k + 1)
    free = m - (-(-m // s))
    return (
        factorial(n - 1)
        * Fraction(k - 1, 2) ** free
        * 2 ** (k * (k - 1) // 2)
        * 2 ** (m * (k - 2))
    )


def block_counts(n: int, k: int, s: int) -> tuple[int, int]:
    """``(q, t)``: number of full blocks and size of the trailing partial block."""
    m = max(n - (k + 1), 0)
    q = m // s
    return q, m - s * q


def preimage_bound(n: int, k: int, s: int) -> int:
    """``2^k * k! * (s!)^q * t!`` bounding the triples that yield one graph."""
    q, t = block_counts(n, k, s)
    return 2**k * factorial(k) * factorial(s) ** q * factorial(t)


def lb_eq8(n: int, k: int, s: int) -> Fraction:
    return eq8_numerator(n, k, s) / preimage_bound(n, k, s)


def lb_eq9(n: int, k: int, s: int, prec: int | None = None) -> Interval:
    if not 1 < k <= n or s < 1:
        raise DomainError(f"need 1 < k <= n and s >= 1, got n={n}, k={k}, s={s}")

    def expr():
        root = iv.exp(iv.log(k) / s)
        base = iv.mpf(k * 2**k * n) / (64 * iv.e * root * s)
        return base**n / iv.mpf(2 ** (k * (k + 3) // 2)) / iv.mpf(k ** (2 * k + 2))

    return _refined(expr, prec)


# --- block size -------------------------------------------------------------


@dataclass(frozen=True)
class BlockSizeChoice:
    k: int
    s: int
    continuous: float
    neighbourhood: dict[int, float] = field(default_factory=dict)


def _block_cost(k: int, s: int) -> float:
    return k ** (1.0 / s) * s


def choose_block_size(k: int) -> BlockSizeChoice:
    """Integer ``s`` minimising ``k^(1/s) * s``; the real minimiser is ``ln k``.

    ``log(k^(1/s) s) = ln k / s + ln s`` is convex in ``s``, so the integer
    optimum is the floor or ceiling of ``ln k``.  Ties go to the smaller ``s``.
    """
    if k < 2:
        raise DomainError(f"block size needs k >= 2, got {k}")
    star = math.log(k)
    lo = max(1, math.floor(star))
    hi = max(1, math.ceil(star))
    # compare exactly: k^(1/lo) lo <= k^(1/hi) hi  <=>  k^(hi-lo) lo^(lo hi) <= hi^(lo hi)
    if lo == hi or k ** (hi - lo) * lo ** (lo * hi) <= hi ** (lo * hi):
        s = lo
    else:
        s = hi
    around = {c: _block_cost(k, c) for c in (s - 1, s, s + 1) if c >= 1}
    return BlockSizeChoice(k, s, star, around)


# --- proper-pathwidth -------------------------------------------------------


def proper_linear_count(n: int, k: int) -> int:
    """Labeled proper linear k-trees: ``n! k^(n-k-1) / (2k k!)``."""
    if k < 1 or n < k + 2:
        raise DomainError(f"need k >= 1 and n >= k + 2, got n={n}, k={k}")
    num = factorial(n) * k ** (n - k - 1)
    den = 2 * k * factorial(k)
    q, r = divmod(num, den)
    assert r == 0, f"proper linear k-tree count not integral at n={n}, k={k}"
    return q


def ppw_ub_constant(n: int, k: int) -> int:
    """Upper bound on graphs of proper-pathwidth <= k: every subgraph of a
    proper linear k-tree."""
    return 2 ** (k * n - k * (k + 1) // 2) * proper_linear_count(n, k)


def ppw_constant_estimate(n: int, k: int) -> float:
    """The ``c`` with ``ppw_ub_constant(n, k) = (k 2^k n / c)^n``; annotation only."""
    log_ub = math.log(ppw_ub_constant(n, k))
    return k * 2**k * n / math.exp(log_ub / n)


# --- reports ----------------------------------------------------------------


@dataclass
class BoundReport:
    n: int
    k: int
    s: int
    ub_eq1: int
    ub_eq1_guarded: bool
    ub_eq2: Fraction
    lb_eq3: int
    lb_eq4: Fraction
    lb_thm2: Interval | None
    lb_eq8: Fraction | None
    lb_eq9: Interval | None
    exact_T: int | None = None
    notes: list[str] = field(default_factory=list)

    def check(self) -> bool:
        if self.exact_T is None:
            return True
        return self.lb_eq3 <= self.exact_T <= self.ub_eq1


def bound_report(n: int, k: int, s: int = 1, exact_T: int | None = None, log_base=2) -> BoundReport:
    notes = ["lb_eq4 is asymptotic-conditional (n/k -> infinity); not asserted"]
    if ub_eq1_guarded(n, k):
        notes.append("ub_eq1 guarded: n < k+2, reporting 2^C(n,2)")
    thm2 = eq8 = eq9 = None
    if 1 < k <= n:
        thm2 = lb_thm2(n, k, log_base)
        eq8 = lb_eq8(n, k, s)
        eq9 = lb_eq9(n, k, s)
        if s > n - (k + 1):
            notes.append("s exceeds n-(k+1): a single partial block")
    else:
        notes.append("lb_thm2/lb_eq8/lb_eq9 need k > 1")
    return BoundReport(
        n, k, s,
        ub_eq1=ub_eq1(n, k),
        ub_eq1_guarded=ub_eq1_guarded(n, k),
        ub_eq2=ub_eq2(n, k),
        lb_eq3=lb_eq3(n, k),
        lb_eq4=lb_eq4(n, k),
        lb_thm2=thm2,
        lb_eq8=eq8,
        lb_eq9=eq9,
        exact_T=exact_T,
        notes=notes,
    )


@dataclass
class SandwichCheck:
    name: str
    lhs: object
    rhs: object
    ok: bool

    def describe(self) -> str:
        mark = "ok" if self.ok else "FAIL"
        return f"{self.name}: {_fmt(self.lhs)} <= {_fmt(self.rhs)} [{mark}]"


@dataclass
class SandwichReport:
    n: int
    k: int
    T: int
    checks: list[SandwichCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def verify_sandwich(n: int, k: int, T: int | None = None, log_base=2) -> SandwichReport:
    """Check ``lb_eq3 <= T <= ub_eq1`` and, for ``k > 1``, ``lb_thm2.lo <= T``."""
    if T is None:
        from .census import census_T

        T = census_T(n, k).T
    lb3 = lb_eq3(n, k)
    ub1 = ub_eq1(n, k)
    checks = [
        SandwichCheck(f"lb_eq3({n},{k}) <= T", lb3, T, lb3 <= T),
        SandwichCheck(f"T <= ub_eq1({n},{k})", T, ub1, T <= ub1),
    ]
    if k > 1:
        lo = lb_thm2(n, k, log_base).lo
        checks.append(SandwichCheck(f"lb_thm2({n},{k}).lo <= T", lo, T, lo <= T))
    return SandwichReport(n, k, T, checks)
