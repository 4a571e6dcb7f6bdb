"""Closed-form sequence DSL and its exact asymptotic analysis.

A sequence is n -> r**n * P(n)/Q(n) with finitely many indices overridden.
Shifts, products and quotients of such sequences stay in the class, which is
what lets the library compute limits, eventual suprema and eventual
monotonicity indices exactly from the stored parameters instead of sampling.
All tail certificates elsewhere in the package bottom out in the analysis
routines here.

Certification convention: polynomial sign questions (where does a derivative
stop changing sign, from which index does an envelope inequality hold) are
settled in exact rational arithmetic over the stored double-precision
coefficients, via Cauchy root bounds. The only float-rounded ingredients are
logarithms of |r|; those enter threshold indices, never bound magnitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np
from numpy.polynomial import polynomial as npp

from .errors import (
    DegenerateSpace,
    IndexCapExceeded,
    IndexNegative,
    NotCertifiable,
    ZeroDenominator,
    ZeroWeight,
)

__all__ = [
    "INDEX_CAP",
    "SequenceExpr",
    "SequenceTriple",
    "TailCert",
    "make_seq",
    "constant_seq",
    "eval_seq",
    "eval_seq_many",
    "log_abs_seq_many",
    "seq_shift",
    "seq_mul",
    "seq_div",
    "seq_scale",
    "seq_sub_same_rate",
    "seq_add_same_rate",
    "seq_rate",
    "seq_limit_abs",
    "seq_degree_excess",
    "seq_lead_abs_ratio",
    "seq_second_order",
    "seq_monotone_from",
    "seq_eventual_bounds",
    "seq_envelope_exponent",
    "ratio_limsup",
    "radius_of_disc",
    "product_weights",
    "product_weights_value",
    "validate_triple",
    "expr_to_json",
    "expr_from_json",
    "triple_to_json",
    "triple_from_json",
]

INDEX_CAP = 10**6

_USER_DEGREE_CAP = 8
_INTERNAL_DEGREE_CAP = 80
_CERT_INDEX_CAP = 10**5  # beyond this an eventual bound is not worth certifying


# ---------------------------------------------------------------------------
# polynomial helpers; coefficients ascending, complex tuples
# ---------------------------------------------------------------------------

def _trim(coeffs) -> tuple[complex, ...]:
    c = [complex(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pval(coeffs: Sequence[complex], x: complex) -> complex:
    out = 0j
    for c in reversed(coeffs):
        out = out * x + c
    return out


def _pmul(c1, c2) -> tuple[complex, ...]:
    return _trim(np.convolve(np.asarray(c1, dtype=complex), np.asarray(c2, dtype=complex)))


def _pshift(coeffs, s: int) -> tuple[complex, ...]:
    """Coefficients of P(n + s)."""
    out = np.zeros(1, dtype=complex)
    base = np.ones(1, dtype=complex)
    shift = np.array([s, 1], dtype=complex)
    for c in coeffs:
        out = npp.polyadd(out, c * base)
        base = npp.polymul(base, shift)
    return _trim(out)


def _degree(coeffs) -> int:
    return len(_trim(coeffs)) - 1


# ---------------------------------------------------------------------------
# exact rational polynomial machinery (sign certification)
# ---------------------------------------------------------------------------

def _frpoly(coeffs: Sequence[float]) -> list[Fraction]:
    out = [Fraction(float(c)) for c in coeffs]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _frp_is_zero(p: list[Fraction]) -> bool:
    return all(c == 0 for c in p)


def _frp_mul(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _frp_sub(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, a in enumerate(p):
        out[i] += a
    for i, b in enumerate(q):
        out[i] -= b
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _frp_add(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    return _frp_sub(p, [-c for c in q])


def _frp_scale(p: list[Fraction], c: Fraction) -> list[Fraction]:
    return [c * a for a in p]


def _frp_pow(p: list[Fraction], k: int) -> list[Fraction]:
    out = [Fraction(1)]
    base = list(p)
    while k > 0:
        if k & 1:
            out = _frp_mul(out, base)
        base = _frp_mul(base, base)
        k >>= 1
    return out


def _frp_deriv(p: list[Fraction]) -> list[Fraction]:
    if len(p) <= 1:
        return [Fraction(0)]
    return [Fraction(i) * p[i] for i in range(1, len(p))]


def _frp_eval(p: list[Fraction], n: int) -> Fraction:
    out = Fraction(0)
    for c in reversed(p):
        out = out * n + c
    return out


def _frp_shift(p: list[Fraction], n: int) -> list[Fraction]:
    """Coefficients of p(x + n), by Horner in polynomial arithmetic."""
    res = [p[-1]]
    for c in reversed(p[:-1]):
        nxt = [Fraction(0)] * (len(res) + 1)
        for i, r in enumerate(res):
            nxt[i + 1] += r
            nxt[i] += r * n
        nxt[0] += c
        res = nxt
    return res


def _frp_trim_dust(p: list[Fraction]) -> list[Fraction]:
    """Drop leading coefficients below 1e-12 of the largest one: exact
    cancellations in the underlying construction leave rounding residue of
    the float coefficients the polynomial was built from, and such a lead
    poisons root bounds.  A genuine small lead is far above this threshold
    for every expression the DSL can build."""
    if not p:
        return p
    top = max(abs(c) for c in p)
    if top == 0:
        return [Fraction(0)]
    eps = top / 10**12
    k = len(p)
    while k > 1 and abs(p[k - 1]) <= eps:
        k -= 1
    return p[:k]


def _cauchy_index(p: list[Fraction]) -> int:
    """Smallest integer N >= 1 with no real root of p at or beyond N.

    Classical Cauchy bound: every real root has |x| < 1 + max|a_i/a_d|.
    A tiny leading coefficient next to large inner ones blows that bound
    up; in that case fall back to an exact shift test: when every
    coefficient of +-p(x + N) is nonnegative (lead positive), p keeps one
    sign past N.  Doubling search on N, still capped.
    """
    if _frp_is_zero(p):
        return 1
    lead = p[-1]
    if lead == 0:  # trimmed already, defensive
        return 1
    m = max((abs(c / lead) for c in p[:-1]), default=Fraction(0))
    bound = 1 + m
    n = int(bound) + 1
    if n > _CERT_INDEX_CAP:
        q = p if lead > 0 else [-c for c in p]
        big = 1
        while big <= _CERT_INDEX_CAP:
            sh = _frp_shift(q, big)
            if all(c >= 0 for c in sh):
                return big if sh[0] > 0 else big + 1
            big *= 2
        raise NotCertifiable(
            f"polynomial sign certification needs index {n} > cap {_CERT_INDEX_CAP}"
        )
    return max(n, 1)


def _abs2_frpolys(expr: "SequenceExpr") -> tuple[list[Fraction], list[Fraction]]:
    """Exact real polynomials U, V with |expr_n|^2 = |r|^(2n) U(n)/V(n)."""
    pre = _frpoly([c.real for c in expr.num])
    pim = _frpoly([c.imag for c in expr.num])
    qre = _frpoly([c.real for c in expr.den])
    qim = _frpoly([c.imag for c in expr.den])
    u = _frp_add(_frp_mul(pre, pre), _frp_mul(pim, pim))
    v = _frp_add(_frp_mul(qre, qre), _frp_mul(qim, qim))
    return u, v


# ---------------------------------------------------------------------------
# the expression type
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailCert:
    """Certificate attached to a bound: CERTIFIED holds from `from_index` on,
    HEURISTIC is a scan-extrapolated estimate with no guarantee. `ratio` is
    set (in [0, 1)) when the certified tail is geometric with that ratio."""

    kind: str  # "CERTIFIED" | "HEURISTIC"
    bound: float = 0.0
    from_index: int = 0
    ratio: float | None = None

    def is_certified(self) -> bool:
        return self.kind == "CERTIFIED"


@dataclass(frozen=True)
class SequenceExpr:
    """n -> r**n * P(n)/Q(n), with finite overrides taking precedence."""

    r: complex
    num: tuple[complex, ...]
    den: tuple[complex, ...] = (1 + 0j,)
    overrides: tuple[tuple[int, complex], ...] = ()
    description: str = ""

    @property
    def override_map(self) -> dict[int, complex]:
        return dict(self.overrides)

    @property
    def override_end(self) -> int:
        """First index guaranteed past every override."""
        return 1 + max((n for n, _ in self.overrides), default=-1)

    def __repr__(self) -> str:  # compact, the dataclass default is unwieldy
        tag = self.description or f"r={self.r:g}, deg {_degree(self.num)}/{_degree(self.den)}"
        return f"SequenceExpr({tag})"


def make_seq(r, num, den=(1,), overrides: Mapping[int, complex] | None = None,
             description: str = "") -> SequenceExpr:
    """Validated user-facing constructor (degree cap 8, Q free of integer zeros)."""
    num_t = _trim(num)
    den_t = _trim(den)
    if _degree(num_t) > _USER_DEGREE_CAP or _degree(den_t) > _USER_DEGREE_CAP:
        raise ValueError(f"polynomial degree exceeds cap {_USER_DEGREE_CAP}")
    if all(c == 0 for c in den_t):
        raise ZeroDenominator("denominator polynomial is identically zero")
    ov = tuple(sorted((int(k), complex(v)) for k, v in (overrides or {}).items()))
    for k, _ in ov:
        if k < 0:
            raise IndexNegative(f"override at negative index {k}")
    expr = SequenceExpr(complex(r), num_t, den_t, ov, description)
    _check_den_nonvanishing(expr)
    return expr


def constant_seq(c, description: str = "") -> SequenceExpr:
    return make_seq(1, (c,), (1,), description=description or f"const {c}")


def _raw_seq(r, num, den, overrides=()) -> SequenceExpr:
    """Internal constructor for derived expressions (larger degree cap)."""
    num_t, den_t = _trim(num), _trim(den)
    if _degree(num_t) > _INTERNAL_DEGREE_CAP or _degree(den_t) > _INTERNAL_DEGREE_CAP:
        raise NotCertifiable("derived expression exceeds internal degree cap")
    return SequenceExpr(complex(r), num_t, den_t, tuple(overrides))


def _check_den_nonvanishing(expr: SequenceExpr) -> None:
    """Q(n) != 0 for every integer n >= 0 not covered by an override; exact."""
    v = _frpoly([c.real for c in expr.den])
    vi = _frpoly([c.imag for c in expr.den])
    v2 = _frp_add(_frp_mul(v, v), _frp_mul(vi, vi))
    top = _cauchy_index(v2)
    ov = expr.override_map
    for n in range(0, top + 1):
        if n in ov:
            continue
        if _frp_eval(v2, n) == 0:
            raise ZeroDenominator(f"denominator vanishes at index {n}")


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _check_indices(ns: np.ndarray) -> None:
    if ns.size and int(ns.min()) < 0:
        raise IndexNegative(f"negative sequence index {int(ns.min())}")
    if ns.size and int(ns.max()) > INDEX_CAP:
        raise IndexCapExceeded(f"index {int(ns.max())} exceeds cap {INDEX_CAP}")


def eval_seq(expr: SequenceExpr, n: int) -> complex:
    """Value at a single index; overrides take precedence over the closed form."""
    if n < 0:
        raise IndexNegative(f"negative sequence index {n}")
    if n > INDEX_CAP:
        raise IndexCapExceeded(f"index {n} exceeds cap {INDEX_CAP}")
    ov = expr.override_map
    if n in ov:
        return ov[n]
    q = _pval(expr.den, n)
    if q == 0:
        raise ZeroDenominator(f"denominator vanishes at index {n}")
    # 0**0 = 1 by the closed-form convention
    rn = complex(1) if n == 0 else expr.r ** n
    return rn * _pval(expr.num, n) / q


def eval_seq_many(expr: SequenceExpr, ns) -> np.ndarray:
    """Vectorized evaluation at an integer index array."""
    ns = np.asarray(ns, dtype=np.int64)
    _check_indices(ns)
    num = npp.polyval(ns.astype(float), np.asarray(expr.num, dtype=complex))
    den = npp.polyval(ns.astype(float), np.asarray(expr.den, dtype=complex))
    if np.any(den == 0):
        bad = int(ns[np.nonzero(den == 0)[0][0]])
        if bad not in expr.override_map:
            raise ZeroDenominator(f"denominator vanishes at index {bad}")
        den = np.where(den == 0, 1.0, den)
    with np.errstate(over="ignore", invalid="ignore"):
        rn = np.power(np.complex128(expr.r), ns)
    if ns.size and expr.r == 0:
        rn = np.where(ns == 0, 1.0 + 0j, rn)
    out = rn * num / den
    for k, v in expr.overrides:
        out[ns == k] = v
    return out


def log_abs_seq_many(expr: SequenceExpr, ns) -> np.ndarray:
    """log|expr_n| without overflow; -inf where the value is 0."""
    ns = np.asarray(ns, dtype=np.int64)
    _check_indices(ns)
    x = ns.astype(float)
    with np.errstate(divide="ignore"):
        lognum = _log_abs_poly(expr.num, x)
        logden = _log_abs_poly(expr.den, x)
        base = math.log(abs(expr.r)) if expr.r != 0 else -math.inf
        out = x * base + lognum - logden
    if expr.r == 0:
        out = np.where(ns == 0, lognum - logden, out)
    for k, v in expr.overrides:
        out = np.where(ns == k, math.log(abs(v)) if v != 0 else -math.inf, out)
    return out


def _log_abs_poly(coeffs, x: np.ndarray) -> np.ndarray:
    """log|P(x)| evaluated stably for large x (leading-term factoring)."""
    c = np.asarray(coeffs, dtype=complex)
    d = len(c) - 1
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.log(np.abs(npp.polyval(x, c)))
    if d == 0:
        return direct
    # for large x evaluate P(x)/x^d via the reversed polynomial at 1/x
    big = x > 1e6
    if np.any(big):
        xi = 1.0 / x[big]
        rev = npp.polyval(xi, c[::-1])
        direct[big] = np.log(np.abs(rev)) + d * np.log(x[big])
    return direct


# ---------------------------------------------------------------------------
# algebra on expressions (closed under shift / product / quotient)
# ---------------------------------------------------------------------------

def _merged_overrides(e1: SequenceExpr, e2: SequenceExpr, op) -> tuple[tuple[int, complex], ...]:
    idx = {n for n, _ in e1.overrides} | {n for n, _ in e2.overrides}
    return tuple(sorted((n, op(eval_seq(e1, n), eval_seq(e2, n))) for n in idx))


def seq_shift(expr: SequenceExpr, s: int) -> SequenceExpr:
    """Expression for n -> expr_(n+s), s >= 0."""
    if s == 0:
        return expr
    if s < 0:
        raise IndexNegative("negative shift")
    scale = expr.r ** s
    num = _pshift(tuple(scale * c for c in expr.num), s)
    den = _pshift(expr.den, s)
    ov = tuple((k - s, v) for k, v in expr.overrides if k - s >= 0)
    return _raw_seq(expr.r, num, den, ov)


def seq_mul(e1: SequenceExpr, e2: SequenceExpr) -> SequenceExpr:
    return _raw_seq(e1.r * e2.r, _pmul(e1.num, e2.num), _pmul(e1.den, e2.den),
                    _merged_overrides(e1, e2, lambda a, b: a * b))


def seq_div(e1: SequenceExpr, e2: SequenceExpr) -> SequenceExpr:
    if e2.r == 0:
        raise ZeroDenominator("division by a rate-0 expression")
    ov = []
    idx = {n for n, _ in e1.overrides} | {n for n, _ in e2.overrides}
    for n in sorted(idx):
        d = eval_seq(e2, n)
        if d == 0:
            raise ZeroDenominator(f"division by zero at index {n}")
        ov.append((n, eval_seq(e1, n) / d))
    # equal rates cancel exactly; complex division would round 1.0 sometimes
    r_new = 1.0 + 0j if e1.r == e2.r else e1.r / e2.r
    return _raw_seq(r_new, _pmul(e1.num, e2.den), _pmul(e1.den, e2.num), tuple(ov))


def seq_scale(expr: SequenceExpr, c) -> SequenceExpr:
    c = complex(c)
    return _raw_seq(expr.r, tuple(c * x for x in expr.num), expr.den,
                    tuple((k, c * v) for k, v in expr.overrides))


def _combine_same_rate(e1: SequenceExpr, e2: SequenceExpr, sign: int) -> SequenceExpr:
    r1, r2 = e1.r, e2.r
    if r1 != r2:
        if abs(r1 - r2) > 1e-9 * max(abs(r1), abs(r2), 1.0):
            raise NotCertifiable(
                f"cannot combine expressions with distinct rates {r1} and {r2}")
        # rates agree to rounding: snap to the first (values are always taken
        # from direct per-index formulas elsewhere, this expression only feeds
        # asymptotic analysis)
        e2 = SequenceExpr(r1, e2.num, e2.den, e2.overrides, e2.description)
    t1 = _pmul(e1.num, e2.den)
    t2 = _pmul(e2.num, e1.den)
    num = _trim(npp.polyadd(np.asarray(t1), sign * np.asarray(t2)))
    # near-cancellation can leave a numerically tiny leading coefficient that
    # explodes downstream root bounds; drop such leads (the true cancellation
    # is exact, the residue is rounding noise)
    if num:
        top = max(abs(x) for x in num)
        k = len(num)
        while k > 1 and abs(num[k - 1]) <= 1e-12 * top:
            k -= 1
        num = num[:k]
    den = _pmul(e1.den, e2.den)
    ov = _merged_overrides(e1, e2, (lambda a, b: a + b) if sign > 0 else (lambda a, b: a - b))
    return _raw_seq(r1, num, den, ov)


def seq_add_same_rate(e1: SequenceExpr, e2: SequenceExpr) -> SequenceExpr:
    return _combine_same_rate(e1, e2, +1)


def seq_sub_same_rate(e1: SequenceExpr, e2: SequenceExpr) -> SequenceExpr:
    return _combine_same_rate(e1, e2, -1)


# ---------------------------------------------------------------------------
# asymptotic analysis
# ---------------------------------------------------------------------------

def seq_rate(expr: SequenceExpr) -> float:
    return abs(expr.r)


def _num_is_zero(expr: SequenceExpr) -> bool:
    return all(c == 0 for c in expr.num)


def seq_degree_excess(expr: SequenceExpr) -> int:
    return _degree(expr.num) - _degree(expr.den)


def seq_lead_abs_ratio(expr: SequenceExpr) -> float:
    return abs(expr.num[-1]) / abs(expr.den[-1])


def seq_limit_abs(expr: SequenceExpr) -> float:
    """lim_n |expr_n| in [0, inf]; exists for every expression in the class."""
    if _num_is_zero(expr):
        return 0.0
    rho = seq_rate(expr)
    if rho < 1.0:
        return 0.0
    if rho > 1.0:
        return math.inf
    d = seq_degree_excess(expr)
    if d < 0:
        return 0.0
    if d > 0:
        return math.inf
    return seq_lead_abs_ratio(expr)


@lru_cache(maxsize=512)
def seq_second_order(expr: SequenceExpr) -> float:
    """gamma with |expr_n| = lead * (1 + gamma/n + O(1/n^2)); needs |r| = 1."""
    u, v = _abs2_frpolys(expr)
    du, dv = len(u) - 1, len(v) - 1
    tu = Fraction(0) if du == 0 else u[-2] / u[-1]
    tv = Fraction(0) if dv == 0 else v[-2] / v[-1]
    return float(tu - tv) / 2.0


@lru_cache(maxsize=512)
def seq_monotone_from(expr: SequenceExpr) -> int:
    """Index from which |expr_n| is monotone (as a function of a real index).

    Sign-certified through the exact polynomial
    W = log(|r|^2) U V + U'V - U V' governing d/dx |expr(x)|^2.
    """
    u, v = _abs2_frpolys(expr)
    w = _frp_sub(_frp_mul(_frp_deriv(u), v), _frp_mul(u, _frp_deriv(v)))
    rho2 = abs(expr.r) ** 2
    if rho2 == 0:
        return max(expr.override_end, 1)
    if rho2 != 1.0:
        w = _frp_add(_frp_scale(_frp_mul(u, v), Fraction(math.log(rho2))), w)
    # U'V - UV' cancels its top coefficients exactly whenever num and den share
    # their leading behaviour; the float-valued coefficients of u, v leave that
    # cancellation as dust that wrecks the root bound.
    w = _frp_trim_dust(w)
    n0 = max(_cauchy_index(w), _cauchy_index(v), expr.override_end, 1)
    return n0


def seq_eventual_bounds(expr: SequenceExpr, start: int = 0) -> tuple[int, float, float, float]:
    """(N0, sup, inf, limit) with sup = sup_{n >= N0} |expr_n| and likewise inf.

    Exact: beyond N0 the modulus is monotone, so the extrema over the tail are
    attained at the endpoint or in the limit.
    """
    n0 = max(seq_monotone_from(expr), start, 0)
    lim = seq_limit_abs(expr)
    v = abs(eval_seq(expr, n0))
    return n0, max(v, lim), min(v, lim), lim


def seq_envelope_exponent(expr: SequenceExpr, window: tuple[float, float],
                          upper: bool = True, denominators=(2, 4, 8)) -> tuple[Fraction, int] | None:
    """Certified dyadic exponent mu inside `window` with, for all k >= N0,

        |expr_k| <= ((k+1)/k)**mu        (upper=True)
        |expr_k| >= ((k+1)/k)**mu        (upper=False)

    Returns (mu, N0) or None. Requires |r| = 1 exactly (polynomial regime).
    The inequality is settled exactly: with mu = m/L it is equivalent to a
    polynomial inequality between U^L k^{2|m|}-type products, checked by a
    Cauchy bound on the difference.
    """
    if abs(expr.r) ** 2 != 1.0:
        return None
    lo, hi = window
    if not (lo < hi):
        return None
    u, v = _abs2_frpolys(expr)
    mid = (lo + hi) / 2.0
    candidates: list[Fraction] = []
    seen = set()
    for L in denominators:
        for m in range(math.floor(lo * L) - 1, math.ceil(hi * L) + 2):
            mu = Fraction(m, L)
            if lo < mu < hi and mu not in seen:
                seen.add(mu)
                candidates.append(mu)
    candidates.sort(key=lambda mu: abs(float(mu) - mid))
    for mu in candidates:
        m, L = mu.numerator, mu.denominator
        uL = _frp_pow(u, L)
        vL = _frp_pow(v, L)
        k2m = _frp_pow([Fraction(0), Fraction(1)], 2 * abs(m))
        k1_2m = _frp_pow([Fraction(1), Fraction(1)], 2 * abs(m))
        if m >= 0:
            lhs = _frp_mul(uL, k2m)
            rhs = _frp_mul(vL, k1_2m)
        else:
            lhs = _frp_mul(uL, k1_2m)
            rhs = _frp_mul(vL, k2m)
        w = _frp_sub(rhs, lhs) if upper else _frp_sub(lhs, rhs)
        if _frp_is_zero(w):
            n0 = max(_cauchy_index(v), expr.override_end, 1)
            return mu, n0
        if w[-1] <= 0:
            continue
        try:
            n0 = max(_cauchy_index(w), _cauchy_index(v), expr.override_end, 1)
        except NotCertifiable:
            continue
        return mu, n0
    return None


# ---------------------------------------------------------------------------
# the public sequence-level operations
# ---------------------------------------------------------------------------

_SCAN_CHECK = 512


def ratio_limsup(s_num: SequenceExpr, s_den: SequenceExpr, shift: int = 0) -> tuple[float, TailCert]:
    """limsup_n |s_num(n) / s_den(n + shift)| with an eventual-bound certificate.

    The returned certificate bound dominates |ratio_n| for every n >= from_index;
    a finite prefix of that claim is asserted on every call.
    """
    expr = seq_div(s_num, seq_shift(s_den, shift))
    lim = seq_limit_abs(expr)
    try:
        n0, sup, _, _ = seq_eventual_bounds(expr)
        cert = TailCert("CERTIFIED", sup, n0)
    except NotCertifiable:
        ns = np.arange(0, 10**4)
        vals = np.exp(log_abs_seq_many(expr, ns))
        sup = float(np.nanmax(vals)) * 1.1
        cert = TailCert("HEURISTIC", sup, 0)
    if math.isfinite(cert.bound):
        ns = np.arange(cert.from_index, cert.from_index + _SCAN_CHECK)
        vals = np.abs(eval_seq_many(expr, ns))
        tol = 1e-12 * max(1.0, cert.bound)
        worst = float(np.max(vals))
        assert worst <= cert.bound + tol, (
            f"eventual bound {cert.bound} violated by scan value {worst}")
    return lim, cert


def radius_of_disc(a: SequenceExpr, b: SequenceExpr) -> tuple[float, TailCert]:
    """Radius R with 1/R = limsup (|a_n| + |b_n|)^(1/n); exact from the rates.

    Polynomial factors and finite overrides wash out under the n-th root, so
    the limsup is max(|r_a|, |r_b|) (a rate counts 0 if its numerator is 0).
    """
    ra = 0.0 if _num_is_zero(a) else seq_rate(a)
    rb = 0.0 if _num_is_zero(b) else seq_rate(b)
    if not (math.isfinite(ra) and math.isfinite(rb)):
        raise DegenerateSpace("coefficient growth rate is not finite")
    top = max(ra, rb)
    cert = TailCert("CERTIFIED", top, 0)
    if top == 0.0:
        return math.inf, cert
    return 1.0 / top, cert


def product_weights(w: SequenceExpr, nu: int, n: int) -> tuple[float, complex]:
    """(log-magnitude, unit phase) of w_nu * w_(nu+1) * ... * w_(nu+n-1).

    Log-magnitude plus separate phase keeps products of size 8**n representable.
    """
    if nu < 0 or n < 0:
        raise IndexNegative("negative index in weight product")
    if nu + n > INDEX_CAP:
        raise IndexCapExceeded(f"weight product reaches index {nu + n} > {INDEX_CAP}")
    if n == 0:
        return 0.0, 1.0 + 0j
    ks = np.arange(nu, nu + n)
    vals = eval_seq_many(w, ks)
    mags = np.abs(vals)
    if np.any(mags == 0):
        bad = int(ks[np.nonzero(mags == 0)[0][0]])
        raise ZeroWeight(f"weight w_{bad} = 0")
    logmag = float(np.sum(np.log(mags)))
    phase = complex(np.prod(vals / mags))
    return logmag, phase


def product_weights_value(w: SequenceExpr, nu: int, n: int) -> complex:
    """Plain complex value of the weight product; overflows raise OverflowError."""
    if nu < 0 or n < 0:
        raise IndexNegative("negative index in weight product")
    if nu + n > INDEX_CAP:
        raise IndexCapExceeded(f"weight product reaches index {nu + n} > {INDEX_CAP}")
    if n == 0:
        return 1.0 + 0j
    vals = eval_seq_many(w, np.arange(nu, nu + n))
    if np.any(vals == 0):
        bad = nu + int(np.nonzero(vals == 0)[0][0])
        raise ZeroWeight(f"weight w_{bad} = 0")
    direct = complex(np.prod(vals))
    if direct != 0 and not (math.isinf(abs(direct)) or math.isnan(abs(direct))):
        return direct
    logmag, phase = product_weights(w, nu, n)
    if logmag > 700.0:
        raise OverflowError("weight product exceeds float range; use product_weights")
    return math.exp(logmag) * phase


# ---------------------------------------------------------------------------
# triples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SequenceTriple:
    """The data (a, b, w) of a shifted tridiagonal model: basis coefficients
    a, b and shift weights w."""

    a: SequenceExpr
    b: SequenceExpr
    w: SequenceExpr
    label: str = ""

    def __repr__(self) -> str:
        return f"SequenceTriple({self.label or 'unnamed'})"


def _nonvanishing_check(expr: SequenceExpr, name: str, err_cls) -> None:
    u, v = _abs2_frpolys(expr)
    try:
        top = max(_cauchy_index(u), _cauchy_index(v), expr.override_end)
    except NotCertifiable:
        top = 10**4
    ov = expr.override_map
    for n in range(0, top + 1):
        val = ov[n] if n in ov else None
        if val is not None:
            if val == 0:
                raise err_cls(f"{name}_{n} = 0 (override)")
            continue
        if expr.r == 0 and n >= 1:
            raise err_cls(f"{name}_{n} = 0 (rate 0)")
        if _frp_eval(u, n) == 0:
            raise err_cls(f"{name}_{n} = 0")


def validate_triple(triple: SequenceTriple) -> None:
    """a_n, b_n nonzero (basis nondegeneracy) and w_n nonzero, all n >= 0; exact."""
    _nonvanishing_check(triple.a, "a", ZeroDenominator)
    _nonvanishing_check(triple.b, "b", ZeroDenominator)
    _nonvanishing_check(triple.w, "w", ZeroWeight)


# ---------------------------------------------------------------------------
# JSON serialization (external interface)
# ---------------------------------------------------------------------------

def _c2pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _pair2c(p) -> complex:
    return complex(float(p[0]), float(p[1]))


def expr_to_json(expr: SequenceExpr) -> dict:
    return {
        "r": _c2pair(expr.r),
        "P": [_c2pair(c) for c in expr.num],
        "Q": [_c2pair(c) for c in expr.den],
        "overrides": {str(k): _c2pair(v) for k, v in expr.overrides},
    }


def expr_from_json(d: Mapping) -> SequenceExpr:
    return make_seq(
        _pair2c(d["r"]),
        [_pair2c(c) for c in d.get("P", [[1.0, 0.0]])],
        [_pair2c(c) for c in d.get("Q", [[1.0, 0.0]])],
        {int(k): _pair2c(v) for k, v in d.get("overrides", {}).items()},
    )


def triple_to_json(triple: SequenceTriple) -> dict:
    return {
        "a": expr_to_json(triple.a),
        "b": expr_to_json(triple.b),
        "w": expr_to_json(triple.w),
        "label": triple.label,
    }


def triple_from_json(d: Mapping) -> SequenceTriple:
    t = SequenceTriple(
        a=expr_from_json(d["a"]),
        b=expr_from_json(d["b"]),
        w=expr_from_json(d["w"]),
        label=str(d.get("label", "")),
    )
    validate_triple(t)
    return t
