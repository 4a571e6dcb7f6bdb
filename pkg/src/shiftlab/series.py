"""Certified summation of nonnegative series driven by closed-form term ratios.

Every infinite series the library sums (monomial norms, chaos-type series,
dual tails, operator-norm tails) has terms t_n >= 0 whose consecutive ratio
t_(n+1)/t_n equals |e_n|^power for a DSL expression e. That single fact gives
three rigorous regimes:

- geometric: the ratio expression has limit < 1, so an eventual sup r < 1 is
  certified and the tail beyond the last summed term is <= t_M r/(1-r);
- polynomial: the ratio tends to 1 with second-order coefficient gamma, so
  terms behave like n^(power*gamma). A certified dyadic envelope exponent mu
  (ratio <= ((k+1)/k)^mu from some exact index on) yields the rigorous tail
  bound t_J * J / (-power*mu - 1); the reported value is sharpened by a
  Hurwitz-zeta fit of the tail, clamped inside the rigorous bound;
- certified divergence: an eventual ratio inf > 1, or a lower envelope with
  power*mu >= -1, witnesses that the terms cannot be summable.

Anything else falls back to a flagged heuristic estimate or INCONCLUSIVE.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import zeta as _hurwitz_zeta

from .errors import NotCertifiable
from .sequences import (
    SequenceExpr,
    TailCert,
    eval_seq,
    eval_seq_many,
    seq_div,
    seq_envelope_exponent,
    seq_eventual_bounds,
    seq_limit_abs,
    seq_monotone_from,
    seq_second_order,
    seq_shift,
)

__all__ = ["SeriesResult", "sum_abs_power", "certified_ratio_sum", "geometric_tail"]

_POLY_MARGIN = 0.05  # refuse to classify when |power*gamma + 1| is this close to 0


@dataclass(frozen=True)
class SeriesResult:
    """Outcome of summing a nonnegative series.

    value: best estimate of the full sum (inf when divergent);
    partial_sum: the plainly summed finite part;
    tail_bound: rigorous bound on |true sum - value| when certified, else an
        estimate quality indicator (heuristic) or inf;
    status: CONVERGED_CERTIFIED | CONVERGED_HEURISTIC | DIVERGES_CERTIFIED |
        DIVERGES_HEURISTIC | INCONCLUSIVE.
    """

    value: float
    partial_sum: float
    tail_bound: float
    terms_used: int
    status: str
    cert: TailCert
    detail: str = ""

    def converged_certified(self) -> bool:
        return self.status == "CONVERGED_CERTIFIED"

    def diverges_certified(self) -> bool:
        return self.status == "DIVERGES_CERTIFIED"

    def is_certified(self) -> bool:
        return self.status in ("CONVERGED_CERTIFIED", "DIVERGES_CERTIFIED")


def geometric_tail(t_last: float, ratio: float) -> float:
    """Tail bound t_last * (ratio + ratio^2 + ...) for term ratios <= ratio < 1."""
    if not (0.0 <= ratio < 1.0):
        raise ValueError(f"geometric tail needs ratio in [0,1), got {ratio}")
    return t_last * ratio / (1.0 - ratio)


def sum_abs_power(expr: SequenceExpr, power: float, start: int = 0,
                  cap: int = 4096, tol: float = 1e-12) -> SeriesResult:
    """Sum_{n >= start} |expr_n|^power with a certified tail when possible."""
    if all(c == 0 for c in expr.num):
        # only overrides contribute
        end = max(expr.override_end, start)
        ns = np.arange(start, max(end, start + 1))
        partial = float(math.fsum(np.abs(eval_seq_many(expr, ns)) ** power))
        return SeriesResult(partial, partial, 0.0, int(ns.size), "CONVERGED_CERTIFIED",
                            TailCert("CERTIFIED", 0.0, int(end)),
                            "finitely supported sequence")

    def term_fn(ns: np.ndarray) -> np.ndarray:
        return np.abs(eval_seq_many(expr, ns)) ** power

    ratio_expr = seq_div(seq_shift(expr, 1), expr)
    return certified_ratio_sum(term_fn, ratio_expr, power, start=start, cap=cap, tol=tol)


def _partial(term_fn, start: int, upto: int) -> tuple[float, np.ndarray]:
    ns = np.arange(start, upto + 1)
    t = np.asarray(term_fn(ns), dtype=float)
    return float(math.fsum(t)), t


def _forward_threshold_index(ratio_expr: SequenceExpr, n0: int, thresh: float,
                             below: bool) -> int | None:
    """Smallest-ish n >= n0 (by doubling) with |ratio_n| on the wanted side of
    thresh; |ratio| is monotone beyond n0, so one crossing suffices."""
    n = max(n0, 1)
    for _ in range(64):
        v = abs(eval_seq(ratio_expr, n))
        if (v < thresh) if below else (v > thresh):
            return n
        if n > 10**7:
            return None
        n = 2 * n + 8
    return None


def certified_ratio_sum(term_fn: Callable[[np.ndarray], np.ndarray],
                        ratio_expr: SequenceExpr, power: float, start: int = 0,
                        cap: int = 4096, tol: float = 1e-12,
                        detail: str = "") -> SeriesResult:
    """Sum a nonnegative series whose term ratios are |ratio_expr|^power.

    term_fn(ns) must return the exact nonnegative terms t_n; ratio_expr must
    satisfy t_(n+1)/t_n = |ratio_expr(n)|^power for every n beyond its
    overrides (and for all n >= start where both terms are nonzero).
    """
    if power <= 0:
        raise ValueError("power must be positive")
    try:
        limit = seq_limit_abs(ratio_expr)
    except ZeroDivisionError:  # degenerate ratio data
        limit = math.nan
    if math.isnan(limit):
        return _heuristic(term_fn, start, cap, detail + " (no ratio limit)")

    if limit < 1.0:
        return _geometric_sum(term_fn, ratio_expr, power, limit, start, cap, tol, detail)
    if limit > 1.0:
        return _certified_divergence_by_growth(term_fn, ratio_expr, limit, start, cap, detail)
    return _polynomial_sum(term_fn, ratio_expr, power, start, cap, tol, detail)


def _geometric_sum(term_fn, ratio_expr, power, limit, start, cap, tol, detail) -> SeriesResult:
    try:
        n0 = seq_monotone_from(ratio_expr)
        thresh = (1.0 + limit) / 2.0
        if abs(eval_seq(ratio_expr, n0)) >= thresh:
            n1 = _forward_threshold_index(ratio_expr, n0, thresh, below=True)
            if n1 is None:
                raise NotCertifiable("ratio never observed below threshold")
        else:
            n1 = n0
        rsup = max(abs(eval_seq(ratio_expr, n1)), limit)
    except NotCertifiable:
        return _heuristic(term_fn, start, cap, detail + " (ratio sup not certifiable)")
    rq = rsup ** power
    if not rq < 1.0:
        return _heuristic(term_fn, start, cap, detail + " (certified ratio sup >= 1)")
    m = max(n1, start, start + 16)
    partial, t = _partial(term_fn, start, m)
    tail = geometric_tail(float(t[-1]), rq)
    while tail > tol * max(partial, 1.0) and (m - start) < cap:
        m2 = min(start + cap, 2 * m + 16)
        add, t2 = _partial(term_fn, m + 1, m2)
        partial = float(math.fsum((partial, add)))
        t, m = t2, m2
        tail = geometric_tail(float(t[-1]), rq)
    cert = TailCert("CERTIFIED", tail, m, rq)
    return SeriesResult(partial, partial, tail, m - start + 1, "CONVERGED_CERTIFIED",
                        cert, (detail + " geometric tail").strip())


def _certified_divergence_by_growth(term_fn, ratio_expr, limit, start, cap, detail) -> SeriesResult:
    """Ratio limit > 1: find a certified index beyond which terms increase."""
    try:
        n0 = seq_monotone_from(ratio_expr)
        if abs(eval_seq(ratio_expr, n0)) <= 1.0:
            thresh = (1.0 + limit) / 2.0 if math.isfinite(limit) else 2.0
            n1 = _forward_threshold_index(ratio_expr, n0, thresh, below=False)
        else:
            n1 = n0
    except NotCertifiable:
        n1 = None
    m = min(start + cap, max(start + 64, (n1 or start) + 8))
    partial, t = _partial(term_fn, start, m)
    if n1 is not None:
        witness = float(term_fn(np.arange(n1, n1 + 1))[0])
        if witness > 0.0:
            return SeriesResult(
                math.inf, partial, math.inf, m - start + 1, "DIVERGES_CERTIFIED",
                TailCert("CERTIFIED", math.inf, n1),
                (detail + f" terms increase beyond index {n1} "
                 f"(term there = {witness:g}, ratio limit {limit:g} > 1)").strip())
    return _heuristic(term_fn, start, cap, detail + " (growth not certifiable)")


def _polynomial_sum(term_fn, ratio_expr, power, start, cap, tol, detail) -> SeriesResult:
    gamma = seq_second_order(ratio_expr)
    alpha = power * gamma
    if abs(alpha + 1.0) <= _POLY_MARGIN:
        res = _heuristic(term_fn, start, cap,
                         detail + f" (exponent {alpha:.3f} within margin of -1)")
        return SeriesResult(res.value, res.partial_sum, res.tail_bound, res.terms_used,
                            "INCONCLUSIVE", res.cert, res.detail)

    if alpha < -1.0:
        env = seq_envelope_exponent(ratio_expr, (gamma, -1.0 / power), upper=True)
        if env is None:
            return _heuristic(term_fn, start, cap, detail + " (no upper envelope)")
        mu, n_env = env
        mup = float(mu) * power
        if not mup < -1.0:
            return _heuristic(term_fn, start, cap, detail + " (envelope exponent too weak)")
        j = max(n_env, start + 16, 64)
        j = min(j, start + cap)
        partial, t = _partial(term_fn, start, j)
        while j - start < cap:
            j2 = min(start + cap, 2 * j)
            add, t2 = _partial(term_fn, j + 1, j2)
            partial = float(math.fsum((partial, add)))
            t, j = t2, j2
        t_j = float(t[-1])
        rigorous = t_j * j / (-mup - 1.0)
        est = _zeta_tail_estimate(term_fn, j, alpha)
        est = min(max(est, 0.0), rigorous)
        cert = TailCert("CERTIFIED", rigorous, j)
        return SeriesResult(partial + est, partial, rigorous, j - start + 1,
                            "CONVERGED_CERTIFIED", cert,
                            (detail + f" polynomial tail, envelope exponent {mu},"
                             f" valid from {n_env}").strip())

    # alpha > -1: divergence, witnessed by a lower envelope with power*mu >= -1
    env = seq_envelope_exponent(ratio_expr, (-1.0 / power - 1e-9, gamma), upper=False)
    if env is not None:
        mu, n_env = env
        if float(mu) * power >= -1.0 - 1e-12:
            j = min(start + cap, max(n_env, start + 64))
            partial, _ = _partial(term_fn, start, j)
            witness = float(term_fn(np.arange(n_env, n_env + 1))[0])
            if witness > 0.0:
                return SeriesResult(
                    math.inf, partial, math.inf, j - start + 1, "DIVERGES_CERTIFIED",
                    TailCert("CERTIFIED", math.inf, n_env),
                    (detail + f" terms dominate a divergent power tail "
                     f"(exponent {float(mu) * power:.4f} >= -1 from index {n_env})").strip())
    return _heuristic(term_fn, start, cap, detail + " (no lower envelope)")


def _zeta_tail_estimate(term_fn, j: int, alpha: float) -> float:
    """Estimate sum_{n>j} t_n by fitting t_n = n^alpha (A + B/n) at n=j/2, j
    and summing the fit exactly with Hurwitz zeta."""
    j1 = max(j // 2, 2)
    if j1 >= j:
        return 0.0
    tj1 = float(term_fn(np.arange(j1, j1 + 1))[0])
    tj = float(term_fn(np.arange(j, j + 1))[0])
    y1 = tj1 * float(j1) ** (-alpha)
    y2 = tj * float(j) ** (-alpha)
    # y = A + B/n through (j1, y1), (j, y2)
    b = (y1 - y2) / (1.0 / j1 - 1.0 / j)
    a = y2 - b / j
    s = -alpha
    est = a * float(_hurwitz_zeta(s, j + 1)) + b * float(_hurwitz_zeta(s + 1.0, j + 1))
    return est


def _heuristic(term_fn, start, cap, detail) -> SeriesResult:
    """Scan-based fallback: no certificates, flagged HEURISTIC/INCONCLUSIVE."""
    m = start + cap
    partial, t = _partial(term_fn, start, m)
    nz = t[t > 0]
    if nz.size >= 16:
        recent = t[-(min(64, t.size)):]
        ratios = recent[1:] / np.where(recent[:-1] == 0, np.nan, recent[:-1])
        ratios = ratios[np.isfinite(ratios)]
        rhat = float(np.max(ratios)) if ratios.size else math.nan
        if math.isfinite(rhat) and rhat < 0.999 and t[-1] > 0:
            tail = geometric_tail(float(t[-1]), rhat)
            return SeriesResult(partial, partial, tail, m - start + 1,
                                "CONVERGED_HEURISTIC",
                                TailCert("HEURISTIC", tail, m, rhat),
                                (detail + " observed-ratio tail estimate").strip())
        if math.isfinite(rhat) and float(np.min(recent)) > 0 and rhat >= 1.0:
            return SeriesResult(math.inf, partial, math.inf, m - start + 1,
                                "DIVERGES_HEURISTIC",
                                TailCert("HEURISTIC", math.inf, m),
                                (detail + " terms not decreasing in scan").strip())
    return SeriesResult(partial, partial, math.inf, m - start + 1, "INCONCLUSIVE",
                        TailCert("HEURISTIC", math.inf, m),
                        (detail + " no certificate; partial sum only").strip())
