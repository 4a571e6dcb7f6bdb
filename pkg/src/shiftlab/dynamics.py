"""Dynamical criteria for the adjoint of the weighted forward shift.

Every checker mechanically evaluates one sufficient, necessary, or equivalent
condition for hypercyclicity, mixing, or chaos of the adjoint operator in dual
coordinates (or, for one checker, of the plain weighted backward shift on the
space itself).  Verdicts are `CriterionReport` data; only contract violations
raise.  Each report's `implication` states the direction of the inference
(sufficient only / necessary only / equivalence), and `conclusion` carries the
machine-readable dynamical consequence.

The recurring quantity is normalized tail data of the form

    q(nu, n) = (sum of |coefficient sequences at index nu + n + shift|)
               / |w_nu * w_(nu+1) * ... * w_(nu+n-1)|.

Within the closed sequence class (geometric rate times a rational function,
finitely many overrides) the logarithm of q expands as

    log q(nu, n) = A n^2 + B n log n + C n + D log n + E(nu) + o(1),

where A, B, C, D do not depend on the start offset nu: the offset only shifts
the additive constant.  The first nonzero coefficient therefore decides
lim_n q(nu, n) -- zero, infinity, or (when all four vanish) a finite nonzero
value -- for every nu at once.  This is how the "for all offsets" quantifiers
in the criteria are certified without scanning infinitely many nu.  It also
means q has a genuine limit, so liminf- and lim-style conditions coincide here
and differ only in the strength of what they let one conclude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (CertMismatch, PolynomialNotInSpace, PreconditionNotMet,
                     TailNotCertifiable, ZeroWeight)
from .report import (FAILS_NUMERIC, HOLDS_CERTIFIED, HOLDS_NUMERIC,
                     INCONCLUSIVE, CriterionReport, Quantity)
from .sequences import (SequenceExpr, SequenceTriple, eval_seq_many,
                        log_abs_seq_many, seq_degree_excess, seq_div,
                        seq_eventual_bounds, seq_lead_abs_ratio,
                        seq_limit_abs, seq_mul, seq_rate,
                        seq_second_order, seq_shift)
from .series import certified_ratio_sum, sum_abs_power
from .space import (DualVec, FunctionVec, SpaceConfig, coeff_functional_kn,
                    kn_norm_bound, monomial_norm)
from .operator import (A_coeff, _chain_sum_bound, _sup_from, apply_adjoint,
                       c_coeff, alpha_expr, check_sup_limsup, ratio_ba_expr)

__all__ = [
    "GrowthClass", "normalized_tail_class",
    "hypercyclic_sufficient", "hypercyclic_necessary", "hypercyclic_iff",
    "chaos_series", "chaos_extra_condition", "generic_kn_criteria",
    "wuc_check", "backward_shift_chaos_check", "zero_one_decay_check",
    "supercyclic_fact", "all_criteria",
]

_NU_MAX = 16       # default offset scan depth
_N_MAX = 512       # default tail scan depth
_TIE = 1e-12       # below this a log-scale coefficient is treated as zero
_CLEAR = 1e-9      # above this a decision is considered numerically clean

_PRECONDITION_NOTE = ("precondition (finite band sup with eventual-contraction "
                      "limsup) not met; this criterion's hypotheses fail, so "
                      "it yields no information here")


def _require_dynamics(cfg: SpaceConfig) -> None:
    if not cfg.dynamics_supported():
        raise PreconditionNotMet(
            "dynamics criteria are stated for exponents 1 < p < inf; "
            f"p={cfg.p!r} (the l^1 and c0 modes fall outside their hypotheses)")


# ---------------------------------------------------------------------------
# growth classification of normalized tail data, uniform in the offset
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthClass:
    """Limit class of q(nu, n) as n -> inf, the same for every offset nu.

    kind: "ZERO" | "INFINITE" | "FINITE_NONZERO";
    level: which term of the log-expansion decided ("quadratic", "n-log-n",
        "linear", "logarithmic", or "constant" for the finite-limit case);
    coefficient: the deciding log-scale coefficient (0.0 for "constant");
    certified: True when every comparison along the way was exact or cleanly
        separated from zero.
    """

    kind: str
    level: str
    coefficient: float
    certified: bool

    def is_zero(self) -> bool:
        return self.kind == "ZERO"


def _live_numerators(numerators) -> list[tuple[SequenceExpr, int]]:
    live = []
    for expr, shift in numerators:
        if all(c == 0 for c in expr.num) or seq_rate(expr) == 0.0:
            # identically zero beyond the overrides: no effect on any limit
            continue
        live.append((expr, shift))
    return live


def normalized_tail_class(numerators, w: SequenceExpr) -> GrowthClass:
    """Classify lim_n q(nu, n) for q as in the module docstring.

    `numerators` is an iterable of (expr, shift) pairs; the numerator of q is
    the sum of |expr(nu + n + shift)|.  Because all summands are nonnegative
    there is no cancellation: the fastest-growing summand dictates the class.
    The decision walks the log-expansion levels in order; integer-valued
    coefficients are compared exactly, float-valued ones with a dead zone
    (|x| <= 1e-12 treated as zero) and a cleanliness margin (1e-9).
    """
    live = _live_numerators(numerators)
    if not live:
        return GrowthClass("ZERO", "constant", -math.inf, True)
    rw = seq_rate(w)
    if rw == 0.0:
        raise ZeroWeight("weight sequence vanishes identically beyond its overrides")

    levels: list[tuple[str, float, bool]] = []
    # n^2 term: only the weight products reach quadratic log-growth
    levels.append(("quadratic", -0.5 * math.log(rw), False))
    # n log n term: degree excess of the weights (exact integer)
    levels.append(("n-log-n", float(-seq_degree_excess(w)), True))
    # n term: numerator rate against the leading weight magnitude
    r_top = max(seq_rate(e) for e, _ in live)
    lead_w = seq_lead_abs_ratio(w)
    if r_top == 0.0:
        c_lin = -math.inf
    else:
        c_lin = math.log(r_top) - math.log(lead_w)
    levels.append(("linear", c_lin, False))
    # log n term: numerator degree excess against the second-order weight drift
    tied = [e for e, _ in live
            if r_top > 0.0 and math.log(seq_rate(e)) >= math.log(r_top) - _TIE]
    d_top = max((seq_degree_excess(e) for e in tied), default=0)
    gamma_w = seq_second_order(w)
    levels.append(("logarithmic", float(d_top) - gamma_w, False))

    clean = True
    for name, coef, exact in levels:
        if exact:
            if coef != 0.0:
                return GrowthClass("INFINITE" if coef > 0 else "ZERO",
                                   name, coef, clean)
            continue
        mag = abs(coef)
        if mag <= _TIE:
            clean = clean and (mag == 0.0)
            continue
        certified = clean and mag > _CLEAR
        return GrowthClass("INFINITE" if coef > 0 else "ZERO",
                           name, coef, certified)
    return GrowthClass("FINITE_NONZERO", "constant", 0.0, clean)


def _scan_logq(triple: SequenceTriple, numerators, nu_max: int,
               n_max: int) -> np.ndarray:
    """log q(nu, n) on the grid nu in [0, nu_max], n in [1, n_max]."""
    top = nu_max + n_max + 1
    ks = np.arange(top)
    with np.errstate(divide="ignore"):
        lw = log_abs_seq_many(triple.w, ks[:-1])
    if np.isneginf(lw).any():
        bad = int(np.nonzero(np.isneginf(lw))[0][0])
        raise ZeroWeight(f"weight w_{bad} = 0 inside the scan window")
    cum = np.concatenate(([0.0], np.cumsum(lw)))
    lognum = np.full(top, -np.inf)
    for expr, shift in numerators:
        vals = np.full(top, -np.inf)
        idx = ks + shift
        ok = idx >= 0
        with np.errstate(divide="ignore"):
            vals[ok] = log_abs_seq_many(expr, idx[ok])
        lognum = np.logaddexp(lognum, vals)
    ns = np.arange(1, n_max + 1)
    out = np.empty((nu_max + 1, n_max))
    for v in range(nu_max + 1):
        out[v] = lognum[v + ns] - (cum[v + ns] - cum[v])
    return out


def _liminf_quantities(logq: np.ndarray, count: int = 4) -> dict[str, Quantity]:
    """Scan-based liminf proxies: min of q(nu, n) over the tail half in n."""
    half = logq.shape[1] // 2
    out: dict[str, Quantity] = {}
    for v in range(min(count, logq.shape[0])):
        out[f"liminf_nu{v}"] = Quantity(float(np.exp(np.min(logq[v, half:]))))
    out["scan_min"] = Quantity(float(np.exp(np.min(logq))))
    return out


def _class_quantity(cls: GrowthClass) -> Quantity:
    return Quantity(cls.coefficient, 0.0,
                    "CERTIFIED" if cls.certified else "HEURISTIC")


# ---------------------------------------------------------------------------
# hypercyclicity of the adjoint: sufficient / necessary / equivalent gates
# ---------------------------------------------------------------------------

def hypercyclic_sufficient(triple: SequenceTriple, cfg: SpaceConfig | None = None,
                           mode: str = "liminf", nu_max: int = _NU_MAX,
                           n_max: int = _N_MAX) -> CriterionReport:
    """Sufficient condition for hypercyclicity (mode "liminf") or mixing
    (mode "lim") of the adjoint shift: the normalized tail data

        q(nu, n) = (|a_(nu+n)| + |b_(nu+n-1)|) / |w_nu ... w_(nu+n-1)|

    must drop to zero along n for every offset nu (in the liminf sense, or as
    a genuine limit for mixing).  Within the closed sequence class q always
    has a limit, so both modes test the same event and differ only in the
    conclusion they license.  Sufficient direction only: a failure concludes
    nothing.
    """
    cfg = cfg or SpaceConfig()
    _require_dynamics(cfg)
    if mode not in ("liminf", "lim"):
        raise ValueError(f"mode must be 'liminf' or 'lim', got {mode!r}")
    numerators = ((triple.a, 0), (triple.b, -1))
    cls = normalized_tail_class(numerators, triple.w)
    logq = _scan_logq(triple, numerators, nu_max, n_max)
    quantities = _liminf_quantities(logq)
    quantities["tail_class_coefficient"] = _class_quantity(cls)
    scan = {"nu_max": nu_max, "n_max": n_max}
    cid = f"adjoint-hypercyclic-sufficient-{mode}"

    if cls.is_zero():
        verdict = HOLDS_CERTIFIED if cls.certified else HOLDS_NUMERIC
        if mode == "lim":
            conclusion = "MIXING"
            implication = (
                "the normalized tail data tends to 0 for every start offset "
                f"(decided at the {cls.level} level of its log-expansion): "
                "sufficient for the adjoint shift to be mixing, hence "
                "hypercyclic")
        else:
            conclusion = "HYPERCYCLIC"
            implication = (
                "the normalized tail data has liminf 0 for every start offset "
                f"(decided at the {cls.level} level of its log-expansion): "
                "sufficient for the adjoint shift to be hypercyclic")
        return CriterionReport(cid, verdict, quantities, scan, implication,
                               conclusion)
    return CriterionReport(
        cid, FAILS_NUMERIC, quantities, scan,
        "sufficient condition not met; no conclusion "
        f"(the normalized tail data has a {'finite nonzero' if cls.kind == 'FINITE_NONZERO' else 'divergent'} "
        f"limit, decided at the {cls.level} level)",
        "NO_CONCLUSION")


def hypercyclic_necessary(triple: SequenceTriple, cfg: SpaceConfig | None = None,
                          n_max: int = 128) -> CriterionReport:
    """Necessary condition for hypercyclicity of the adjoint when the constant
    function 1 belongs to the space: the weighted monomial norms

        s_n = |w_0 ... w_(n-1)| * ||z^n||

    must be unbounded.  Contrapositive use only: a certified finite supremum
    proves the adjoint is NOT hypercyclic; unbounded growth concludes nothing.
    Raises PolynomialNotInSpace when 1 is certifiably not a member.
    """
    cfg = cfg or SpaceConfig()
    _require_dynamics(cfg)
    try:
        nrm0, _ = monomial_norm(triple, 0, cfg)
    except TailNotCertifiable:
        return CriterionReport(
            "adjoint-hypercyclic-necessary-growth", INCONCLUSIVE, {}, {},
            "membership of the constant function could not be certified, so "
            "the growth gate does not apply", "NO_CONCLUSION")
    if math.isinf(nrm0):
        raise PolynomialNotInSpace(
            "the constant function 1 has no norm-convergent expansion, so the "
            "weighted-monomial growth gate does not apply")

    p = float(cfg.p)
    ratio = ratio_ba_expr(triple)
    alph = alpha_expr(triple)
    n0a, sup_a, _, _ = seq_eventual_bounds(alph)
    n0r, sup_r, _, _ = seq_eventual_bounds(ratio)
    grid = max(n_max, n0a + 2, n0r + 2)

    ks = np.arange(grid)
    with np.errstate(divide="ignore"):
        lw = log_abs_seq_many(triple.w, ks)
        la = log_abs_seq_many(triple.a, ks)
    if np.isneginf(lw).any():
        bad = int(np.nonzero(np.isneginf(lw))[0][0])
        raise ZeroWeight(f"weight w_{bad} = 0 inside the scan window")
    cum = np.concatenate(([0.0], np.cumsum(lw)))
    log_t = cum[:grid] - la                  # |w_0...w_(n-1)| / |a_n|
    chains = [_chain_sum_bound(triple, n, p) for n in range(grid)]
    chain_vals = np.array([c[0] for c in chains])
    chain_cert = all(c[1] and math.isfinite(c[0]) for c in chains)
    log_s = log_t + np.log1p(chain_vals) / p
    s_scan = np.exp(log_s)

    quantities = {
        "sup_scan": Quantity(float(np.max(s_scan))),
        "s_first": Quantity(float(s_scan[0])),
        "s_last": Quantity(float(s_scan[-1])),
    }
    scan = {"n_max": grid}

    # certification: beyond n0a the factor t is non-increasing (|alpha| <= 1)
    # and beyond n0r the bracket is bounded by its geometric closure, so the
    # supremum over all n is attained on the computed grid.
    bracket_ok = sup_r < 1.0 and chain_cert
    t_ok = sup_a <= 1.0 + 1e-15
    if bracket_ok and t_ok:
        sup_s = float(np.max(s_scan))
        quantities["sup_certified"] = Quantity(sup_s, 0.0, "CERTIFIED")
        return CriterionReport(
            "adjoint-hypercyclic-necessary-growth", FAILS_NUMERIC, quantities,
            scan,
            "necessary condition fails: the weighted monomial norms are "
            f"certifiably bounded (sup = {sup_s:.6g} < inf: the normalized "
            "basis factor is eventually non-increasing and the expansion "
            "bracket is closed geometrically), so by contraposition the "
            "adjoint shift is NOT hypercyclic",
            "NOT_HYPERCYCLIC")
    growth = float(s_scan[-1] / max(s_scan[grid // 2], 1e-300))
    quantities["tail_growth_factor"] = Quantity(growth)
    return CriterionReport(
        "adjoint-hypercyclic-necessary-growth", INCONCLUSIVE, quantities, scan,
        "the weighted monomial norms show no certified finite supremum "
        "(necessary direction only: unbounded growth is consistent with "
        "hypercyclicity but implies nothing by itself)",
        "NO_CONCLUSION")


def hypercyclic_iff(triple: SequenceTriple, cfg: SpaceConfig | None = None,
                    nu_max: int = _NU_MAX, n_max: int = _N_MAX) -> CriterionReport:
    """Equivalence test for hypercyclicity of the adjoint, available under the
    standing precondition (finite band sup with eventual-contraction limsup):
    the adjoint is hypercyclic if and only if

        liminf_n |a_(nu+n)| / |w_nu ... w_(nu+n-1)| = 0   for every offset nu.

    Both directions are usable: a certified failure proves NOT hypercyclic.
    Without the precondition the report is INCONCLUSIVE.
    """
    cfg = cfg or SpaceConfig()
    _require_dynamics(cfg)
    cid = "adjoint-hypercyclic-iff-ratio"
    pre = check_sup_limsup(triple)
    if not pre.holds():
        return CriterionReport(cid, INCONCLUSIVE, dict(pre.quantities), {},
                               _PRECONDITION_NOTE, "NO_CONCLUSION")
    numerators = ((triple.a, 0),)
    cls = normalized_tail_class(numerators, triple.w)
    logq = _scan_logq(triple, numerators, nu_max, n_max)
    quantities = _liminf_quantities(logq)
    quantities["tail_class_coefficient"] = _class_quantity(cls)
    scan = {"nu_max": nu_max, "n_max": n_max}
    if cls.is_zero():
        verdict = HOLDS_CERTIFIED if cls.certified else HOLDS_NUMERIC
        return CriterionReport(
            cid, verdict, quantities, scan,
            "equivalence: the normalized coefficient ratio has liminf 0 for "
            f"every start offset (decided at the {cls.level} level), which "
            "holds if and only if the adjoint shift is hypercyclic",
            "HYPERCYCLIC")
    return CriterionReport(
        cid, FAILS_NUMERIC, quantities, scan,
        "equivalence: the normalized coefficient ratio stays away from 0 "
        f"(limit decided at the {cls.level} level"
        f"{', certified' if cls.certified else ''}); under the standing "
        "precondition this proves the adjoint shift is NOT hypercyclic",
        "NOT_HYPERCYCLIC")


# ---------------------------------------------------------------------------
# chaos of the adjoint
# ---------------------------------------------------------------------------

def chaos_series(triple: SequenceTriple, cfg: SpaceConfig | None = None,
                 cap: int = 4096) -> CriterionReport:
    """Chaos criterion for the adjoint shift under the standing precondition:
    convergence of the dual-pairing series

        Sum_{n >= 1} |a_n / (w_0 w_1 ... w_(n-1))|^q,   q = p/(p-1).

    Sufficient direction: convergence makes the adjoint chaotic (and mixing,
    since the same decay feeds the lim-mode sufficient gate).  Divergence
    concludes nothing by itself, but refutes chaos when the companion chain
    condition also holds.
    """
    cfg = cfg or SpaceConfig()
    _require_dynamics(cfg)
    cid = "adjoint-chaos-dual-series"
    pre = check_sup_limsup(triple)
    if not pre.holds():
        return CriterionReport(cid, INCONCLUSIVE, dict(pre.quantities), {},
                               _PRECONDITION_NOTE, "NO_CONCLUSION")
    q = cfg.q
    top = cap + 2
    ks = np.arange(top)
    with np.errstate(divide="ignore"):
        lw = log_abs_seq_many(triple.w, ks)
        la = log_abs_seq_many(triple.a, ks)
    if np.isneginf(lw).any():
        bad = int(np.nonzero(np.isneginf(lw))[0][0])
        raise ZeroWeight(f"weight w_{bad} = 0 inside the series window")
    cum = np.concatenate(([0.0], np.cumsum(lw)))

    def term_fn(js: np.ndarray) -> np.ndarray:
        return np.exp(q * (la[js] - cum[js]))

    ratio = seq_div(seq_shift(triple.a, 1), seq_mul(triple.a, triple.w))
    res = certified_ratio_sum(term_fn, ratio, q, start=1, cap=cap, tol=cfg.tol,
                              detail="dual-pairing series")
    quantities = {
        "series_value": Quantity(res.value, res.tail_bound,
                                 "CERTIFIED" if res.is_certified() else "HEURISTIC"),
        "partial_sum": Quantity(res.partial_sum),
    }
    scan = {"terms": res.terms_used}
    if res.status in ("CONVERGED_CERTIFIED", "CONVERGED_HEURISTIC"):
        verdict = HOLDS_CERTIFIED if res.converged_certified() else HOLDS_NUMERIC
        return CriterionReport(
            cid, verdict, quantities, scan,
            "the dual-pairing series converges "
            f"(value {res.value:.12g}, tail bound {res.tail_bound:.3g}): "
            "sufficient for the adjoint shift to be chaotic, with a dense set "
            "of periodic points; the same decay makes it mixing",
            "CHAOTIC")
    if res.status in ("DIVERGES_CERTIFIED", "DIVERGES_HEURISTIC"):
        return CriterionReport(
            cid, FAILS_NUMERIC, quantities, scan,
            "the dual-pairing series diverges: chaos cannot be concluded this "
            "way (and is refuted outright when the companion chain condition "
            "holds, which upgrades this test to an equivalence)",
            "NO_CONCLUSION")
    return CriterionReport(cid, INCONCLUSIVE, quantities, scan,
                           f"series engine returned {res.status}: {res.detail}",
                           "NO_CONCLUSION")


def _chain_double_sum(triple: SequenceTriple, cfg: SpaceConfig,
                      outer_start: int, scan_n: int) -> tuple[CriterionReport, str]:
    """Shared engine for the double series

        Sum_{n >= outer_start} (Sum_{j >= 1} prod_{k=1}^{j}
                                |b_(n+k-1) / a_(n+k)|^p)^(q/p).

    Returns a partially filled report (criterion_id and implication left to
    the caller) plus a one-word status: "CONVERGED", "DIVERGES", "OPEN".
    """
    p, q = float(cfg.p), cfg.q
    e = q / p
    ratio = ratio_ba_expr(triple)
    limr = seq_limit_abs(ratio)
    quantities: dict[str, Quantity] = {"chain_ratio_limit": Quantity(limr, 0.0, "CERTIFIED")}
    scan = {"outer_start": outer_start, "outer_scanned": scan_n}

    if limr > 0.0:
        # inner(n) >= |ratio(n)|^p, its first chain product, so the outer
        # terms are eventually bounded below by about limr^q > 0: a certified
        # term-level divergence witness regardless of how the limit is
        # approached.
        detail = ("the chain ratio has the certified nonzero limit "
                  f"{limr:.6g}; every inner sum is at least the p-th power of "
                  "its first chain factor, so the outer terms stay bounded "
                  "away from 0 and the double-series diverges")
        report = CriterionReport("", FAILS_NUMERIC, quantities, scan, detail,
                                 "NO_CONCLUSION")
        return report, "DIVERGES"

    # limr == 0: try the geometric closure for a certified convergent bound
    n0, sup_r, _, _ = seq_eventual_bounds(ratio, outer_start)
    j0 = max(scan_n + outer_start, n0 + 1)
    if j0 - outer_start > 1 << 16:
        report = CriterionReport("", INCONCLUSIVE, quantities, scan,
                                 "chain monotonicity threshold out of reach",
                                 "NO_CONCLUSION")
        return report, "OPEN"
    chains = [_chain_sum_bound(triple, n, p) for n in range(outer_start, j0)]
    head = float(math.fsum(c[0] ** e for c in chains))
    head_cert = all(c[1] and math.isfinite(c[0]) for c in chains)
    s_star, s_cert = _sup_from(ratio, j0)
    tail_val = math.inf
    tail_cert = False
    if s_cert and s_star < 1.0:
        g_star = s_star ** p / (1.0 - s_star ** p)
        tail_res = sum_abs_power(ratio, q, start=j0, tol=cfg.tol)
        if tail_res.converged_certified():
            tail_val = (1.0 + g_star) ** e * tail_res.value
            tail_cert = True
        elif tail_res.status == "CONVERGED_HEURISTIC":
            tail_val = (1.0 + g_star) ** e * tail_res.value
    total = head + tail_val
    quantities["series_bound"] = Quantity(
        total, 0.0, "CERTIFIED" if head_cert and tail_cert else "HEURISTIC")
    quantities["head_sum"] = Quantity(head)
    if math.isfinite(total):
        verdict = HOLDS_CERTIFIED if head_cert and tail_cert else HOLDS_NUMERIC
        report = CriterionReport(
            "", verdict, quantities, scan,
            f"the chain double-series is bounded by {total:.12g} "
            "(per-start chain closures plus a geometric outer tail)",
            "NO_CONCLUSION")
        return report, "CONVERGED"
    report = CriterionReport("", INCONCLUSIVE, quantities, scan,
                             "no certified closure for the chain double-series",
                             "NO_CONCLUSION")
    return report, "OPEN"


def chaos_extra_condition(triple: SequenceTriple, cfg: SpaceConfig | None = None,
                          scan_n: int = 96) -> CriterionReport:
    """Companion chain condition that upgrades the dual-series chaos test to
    an equivalence: convergence of

        Sum_{n >= 0} (Sum_{j >= 1} prod_{k=1}^{j} |b_(n+k-1)/a_(n+k)|^p)^(q/p).

    On its own it concludes nothing; it only changes what the dual-pairing
    series is allowed to imply.
    """
    cfg = cfg or SpaceConfig()
    _require_dynamics(cfg)
    cid = "adjoint-chaos-chain-condition"
    report, status = _chain_double_sum(triple, cfg, 0, scan_n)
    quantities = dict(report.quantities)
    if status == "CONVERGED":
        return CriterionReport(
            cid, report.verdict, quantities, report.scan,
            report.implication + "; with this condition in force, divergence "
            "of the dual-pairing series refutes chaos of the adjoint shift",
            "NO_CONCLUSION")
    if status == "DIVERGES":
        return CriterionReport(
            cid, FAILS_NUMERIC, quantities, report.scan,
            report.implication + "; the chain condition fails, so the "
            "dual-pairing series keeps only its sufficient direction",
            "NO_CONCLUSION")
    return CriterionReport(cid, INCONCLUSIVE, quantities, report.scan,
                           report.implication, "NO_CONCLUSION")


# ---------------------------------------------------------------------------
# generic coefficient-functional criteria
# ---------------------------------------------------------------------------

def generic_kn_criteria(triple: SequenceTriple, cfg: SpaceConfig | None = None,
                        n_max: int = _N_MAX) -> CriterionReport:
    """Sufficient conditions phrased through the coefficient functionals: with
    v_n = ||k_n|| / |w_0 ... w_(n-1)|, inf_n v_n = 0 forces hypercyclicity of
    the adjoint and lim_n v_n = 0 forces mixing.  Only the computable upper
    bound (|a_n|^q + |b_(n-1)|^q)^(1/q) of ||k_n|| is scanned, which preserves
    the sufficient direction but turns a failure into no conclusion at all
    (the true norms could still dip to zero).
    """
    cfg = cfg or SpaceConfig()
    _require_dynamics(cfg)
    cid = "adjoint-kn-functional-decay"
    numerators = ((triple.a, 0), (triple.b, -1))
    cls = normalized_tail_class(numerators, triple.w)

    ks = np.arange(n_max)
    with np.errstate(divide="ignore"):
        lw = log_abs_seq_many(triple.w, ks)
    if np.isneginf(lw).any():
        bad = int(np.nonzero(np.isneginf(lw))[0][0])
        raise ZeroWeight(f"weight w_{bad} = 0 inside the scan window")
    cum = np.concatenate(([0.0], np.cumsum(lw)))
    v = np.array([kn_norm_bound(triple, n, cfg) * math.exp(-cum[n])
                  for n in range(n_max)])
    quantities = {
        "inf_scan": Quantity(float(np.min(v))),
        "v_last": Quantity(float(v[-1])),
        "tail_class_coefficient": _class_quantity(cls),
    }
    scan = {"n_max": n_max}
    if cls.is_zero():
        verdict = HOLDS_CERTIFIED if cls.certified else HOLDS_NUMERIC
        return CriterionReport(
            cid, verdict, quantities, scan,
            "the coefficient-functional norms decay to zero relative to the "
            f"weight products (decided at the {cls.level} level): sufficient "
            "for the adjoint shift to be mixing, hence hypercyclic",
            "MIXING")
    return CriterionReport(
        cid, FAILS_NUMERIC, quantities, scan,
        "the scanned upper bound of the normalized functional norms stays "
        "away from zero; since only an upper bound is available the "
        "sufficient conditions simply do not engage (no conclusion)",
        "NO_CONCLUSION")


# ---------------------------------------------------------------------------
# unconditional-convergence gate for a single vector
# ---------------------------------------------------------------------------

def wuc_check(triple: SequenceTriple, f: FunctionVec,
              cfg: SpaceConfig | None = None) -> CriterionReport:
    """Weighted unconditional-convergence gate for one function: finiteness of

        Sum_{n >= 1} |k_n(f)| / |w_0 ... w_(n-1)|,
        k_n(f) = lambda_n a_n + lambda_(n-1) b_(n-1),

    where lambda are the basis coefficients of f.  Feeding the chaos machinery
    requires this for every member of the space, so a single vector only ever
    yields evidence (conclusion NO_CONCLUSION).  When f carries a nonzero
    stored tail and the inverse weight products grow, the omitted coefficients
    could dominate the sum: the report is INCONCLUSIVE, never a pass.
    """
    cfg = cfg or SpaceConfig()
    _require_dynamics(cfg)
    cid = "wuc-series-single-vector"
    lam = np.asarray(f.coeffs, dtype=complex)
    size = lam.size
    top = size + 2
    ks = np.arange(top)
    with np.errstate(divide="ignore"):
        lw = log_abs_seq_many(triple.w, ks)
    if np.isneginf(lw).any():
        bad = int(np.nonzero(np.isneginf(lw))[0][0])
        raise ZeroWeight(f"weight w_{bad} = 0 inside the stored support")
    cum = np.concatenate(([0.0], np.cumsum(lw)))
    a_vals = eval_seq_many(triple.a, np.arange(size + 1))
    b_vals = eval_seq_many(triple.b, np.arange(size))

    terms = []
    for n in range(1, size + 1):
        kn = (lam[n] * a_vals[n] if n < size else 0.0) + lam[n - 1] * b_vals[n - 1]
        if kn != 0.0:
            terms.append(math.exp(math.log(abs(kn)) - cum[n]))
    stored = float(math.fsum(terms))
    quantities = {"partial_sum": Quantity(stored, 0.0, "CERTIFIED")}
    scan = {"stored_terms": size}

    if f.tail_bound == 0.0:
        return CriterionReport(
            cid, HOLDS_CERTIFIED, quantities, scan,
            f"the series is an exact finite sum ({stored:.12g}) because the "
            "vector has no omitted tail; evidence toward the "
            "every-vector convergence that feeds the chaos criteria",
            "NO_CONCLUSION")

    # |k_n(f)| <= tail * (|a_n| + |b_(n-1)|) beyond the stored support; the
    # two pieces are closed separately so each keeps a rational term ratio.
    def term_a(js: np.ndarray) -> np.ndarray:
        top_j = int(js.max()) + 1
        laj = log_abs_seq_many(triple.a, np.arange(top_j))
        lwj = log_abs_seq_many(triple.w, np.arange(top_j))
        cumj = np.concatenate(([0.0], np.cumsum(lwj)))
        return np.exp(laj[js] - cumj[js])

    def term_b(ms: np.ndarray) -> np.ndarray:
        top_m = int(ms.max()) + 2
        lbj = log_abs_seq_many(triple.b, np.arange(top_m))
        lwj = log_abs_seq_many(triple.w, np.arange(top_m))
        cumj = np.concatenate(([0.0], np.cumsum(lwj)))
        return np.exp(lbj[ms] - cumj[ms + 1])

    ratio_a = seq_div(seq_shift(triple.a, 1), seq_mul(triple.a, triple.w))
    ratio_b = seq_div(seq_shift(triple.b, 1),
                      seq_mul(triple.b, seq_shift(triple.w, 1)))
    res_a = certified_ratio_sum(term_a, ratio_a, 1.0, start=size + 1,
                                tol=cfg.tol, detail="tail, coefficient piece")
    res_b = certified_ratio_sum(term_b, ratio_b, 1.0, start=size,
                                tol=cfg.tol, detail="tail, band piece")
    ok = {"CONVERGED_CERTIFIED", "CONVERGED_HEURISTIC"}
    if res_a.status in ok and res_b.status in ok:
        amp = res_a.value + res_b.value
        total = stored + f.tail_bound * amp
        certified = res_a.converged_certified() and res_b.converged_certified()
        quantities["tail_amplification"] = Quantity(
            amp, 0.0, "CERTIFIED" if certified else "HEURISTIC")
        quantities["series_bound"] = Quantity(total)
        return CriterionReport(
            cid, HOLDS_CERTIFIED if certified else HOLDS_NUMERIC, quantities,
            scan,
            f"stored coefficients contribute {stored:.12g} and the omitted "
            f"tail at most {f.tail_bound:.3g} * {amp:.6g}; the series is "
            "finite for this vector (evidence only)",
            "NO_CONCLUSION")
    return CriterionReport(
        cid, INCONCLUSIVE, quantities, scan,
        "tail-amplified divergence risk: the stored coefficients sum to "
        f"{stored:.12g}, but the vector's omitted tail (bound "
        f"{f.tail_bound:.3g}) meets inverse weight products that grow without "
        "a summable closure, so no verdict is possible for this vector",
        "NO_CONCLUSION")


# ---------------------------------------------------------------------------
# chaos of the weighted backward shift on the space itself
# ---------------------------------------------------------------------------

def backward_shift_chaos_check(triple: SequenceTriple,
                               cfg: SpaceConfig | None = None,
                               scan_n: int = 96) -> CriterionReport:
    """Sufficient condition for the weighted backward shift acting on the
    space itself (not the adjoint) to be chaotic: the monomials must belong to
    the space and both series

        Sum_{n >= 1} 1 / |w_1 ... w_n a_n|^p,
        Sum_{n >= 1} (Sum_{j >= 1} prod_{k=1}^{j} |b_(n+k-1)/a_(n+k)|^p)^(q/p)

    must converge.  Sufficient direction only.  Raises PolynomialNotInSpace
    when a monomial is certifiably not a member.
    """
    cfg = cfg or SpaceConfig()
    _require_dynamics(cfg)
    cid = "backward-shift-chaos"
    for k in range(3):
        try:
            nrm, _ = monomial_norm(triple, k, cfg)
        except TailNotCertifiable:
            return CriterionReport(
                cid, INCONCLUSIVE, {}, {},
                f"membership of z^{k} could not be certified, so the "
                "chaos gate for the backward shift does not apply",
                "NO_CONCLUSION")
        if math.isinf(nrm):
            raise PolynomialNotInSpace(
                f"z^{k} has no norm-convergent expansion, so the backward "
                "shift's chaos gate does not apply")

    p = float(cfg.p)
    top = 4096 + 2
    with np.errstate(divide="ignore"):
        lw = log_abs_seq_many(triple.w, np.arange(top))
        la = log_abs_seq_many(triple.a, np.arange(top))
    if np.isneginf(lw).any():
        bad = int(np.nonzero(np.isneginf(lw))[0][0])
        raise ZeroWeight(f"weight w_{bad} = 0 inside the series window")
    cum1 = np.concatenate(([0.0], np.cumsum(lw[1:])))  # cum1[n] = sum_{k=1}^{n}

    def term_fn(js: np.ndarray) -> np.ndarray:
        return np.exp(-p * (cum1[js] + la[js]))

    ratio1 = seq_div(triple.a, seq_mul(seq_shift(triple.w, 1),
                                       seq_shift(triple.a, 1)))
    res1 = certified_ratio_sum(term_fn, ratio1, p, start=1, tol=cfg.tol,
                               detail="inverse weighted-coefficient series")
    quantities = {
        "first_series": Quantity(res1.value, res1.tail_bound,
                                 "CERTIFIED" if res1.is_certified() else "HEURISTIC"),
    }
    if res1.status in ("DIVERGES_CERTIFIED", "DIVERGES_HEURISTIC"):
        return CriterionReport(
            cid, FAILS_NUMERIC, quantities, {"terms": res1.terms_used},
            "the inverse weighted-coefficient series diverges"
            f"{' (certified)' if res1.diverges_certified() else ''}; the "
            "sufficient condition fails and nothing follows about the "
            "backward shift either way",
            "NO_CONCLUSION")
    if res1.status not in ("CONVERGED_CERTIFIED", "CONVERGED_HEURISTIC"):
        return CriterionReport(
            cid, INCONCLUSIVE, quantities, {"terms": res1.terms_used},
            f"series engine returned {res1.status} on the first series",
            "NO_CONCLUSION")

    chain_rep, status = _chain_double_sum(triple, cfg, 1, scan_n)
    quantities.update(chain_rep.quantities)
    scan = {"terms": res1.terms_used, **chain_rep.scan}
    if status == "CONVERGED":
        certified = (res1.converged_certified()
                     and chain_rep.verdict == HOLDS_CERTIFIED)
        return CriterionReport(
            cid, HOLDS_CERTIFIED if certified else HOLDS_NUMERIC, quantities,
            scan,
            "monomials belong to the space and both series converge"
            f"{' (certified)' if certified else ''}: sufficient for the "
            "weighted backward shift on the space itself to be chaotic",
            "BACKWARD_SHIFT_CHAOTIC")
    if status == "DIVERGES":
        return CriterionReport(
            cid, FAILS_NUMERIC, quantities, scan,
            "the chain double-series diverges; the sufficient condition "
            "fails and nothing follows about the backward shift either way",
            "NO_CONCLUSION")
    return CriterionReport(cid, INCONCLUSIVE, quantities, scan,
                           chain_rep.implication, "NO_CONCLUSION")


# ---------------------------------------------------------------------------
# coordinatewise decay of adjoint orbits (zero-one alternative)
# ---------------------------------------------------------------------------

def _closed_adjoint_coordinate(triple: SequenceTriple, lam: np.ndarray,
                               tail: float, nu: int, n: int,
                               p: float) -> tuple[complex, float]:
    """Coordinate n of the nu-th adjoint power applied to the dual vector with
    coordinates `lam`, by the closed band expansion

        alpha_(n,nu) = lam_(nu+n) A_(n,nu) + lam_(nu+n+1) c_(n,nu)
                       + c_(n,nu) * Sum_{j >= 2} (-1)^(j-1) lam_(nu+n+j)
                         * prod_{k=1}^{j-1} b_(nu+n+k) / a_(nu+n+k+1),

    together with a rigorous bound for the part hidden in the vector's tail.
    """
    size = lam.size
    base = nu + n
    A = A_coeff(triple, n, nu)
    c = c_coeff(triple, n, nu)
    val = 0.0 + 0.0j
    if base < size:
        val += lam[base] * A
    if base + 1 < size:
        val += lam[base + 1] * c
    j_top = size - base  # largest stored j is j_top - 1
    if j_top >= 3 and c != 0.0:
        ms = np.arange(base + 1, base + j_top - 1)
        rho = eval_seq_many(ratio_ba_expr(triple), ms)
        prods = np.cumprod(rho)
        js = np.arange(2, j_top)
        signs = (-1.0) ** (js - 1)
        val += c * np.sum(signs * lam[base + js] * prods)
    err = 0.0
    if tail > 0.0:
        chain, _ = _chain_sum_bound(triple, base + 1, p)
        bracket = (1.0 + chain) ** (1.0 / p) if math.isfinite(chain) else math.inf
        err = tail * (abs(A) + abs(c) * (1.0 + bracket))
    return val, err


def zero_one_decay_check(triple: SequenceTriple, u: DualVec,
                         cfg: SpaceConfig | None = None, nu_max: int = _NU_MAX,
                         n_max: int = 8,
                         decay_tol: float = 1e-6) -> CriterionReport:
    """Coordinatewise decay of the adjoint orbit of one dual vector, available
    under the standing precondition: the adjoint shift fails to be hypercyclic
    exactly when every dual vector's adjoint orbit collapses to zero in each
    coordinate.  One vector therefore gives evidence, never the quantifier
    (conclusion stays NO_CONCLUSION).

    Each coordinate is computed twice -- by the closed band expansion and by
    iterating the certified adjoint application -- and the routes must agree
    within their combined error bounds (CertMismatch otherwise).
    """
    cfg = cfg or SpaceConfig()
    _require_dynamics(cfg)
    cid = "adjoint-zero-one-coordinate-decay"
    pre = check_sup_limsup(triple)
    if not pre.holds():
        return CriterionReport(cid, INCONCLUSIVE, dict(pre.quantities), {},
                               _PRECONDITION_NOTE, "NO_CONCLUSION")
    p = float(cfg.p)
    lam = np.asarray(u.coeffs, dtype=complex)
    scale = float(np.max(np.abs(lam), initial=0.0)) + u.tail_bound

    peaks = np.empty(nu_max)
    max_dev = 0.0
    vec = u
    for nu in range(1, nu_max + 1):
        vec = apply_adjoint(triple, vec, 1, cfg=cfg)
        row_peak = 0.0
        for n in range(n_max + 1):
            closed, err = _closed_adjoint_coordinate(triple, lam, u.tail_bound,
                                                     nu, n, p)
            iterated = vec.coeffs[n] if n < vec.coeffs.size else 0.0
            budget = err + vec.tail_bound + 1e-9 * max(scale, 1.0) * (
                abs(closed) + abs(iterated) + 1.0)
            dev = abs(closed - iterated)
            if dev > budget:
                raise CertMismatch(
                    f"adjoint coordinate (nu={nu}, n={n}) disagrees between "
                    f"the closed expansion ({closed}) and the iterated "
                    f"application ({iterated}) beyond the error budget "
                    f"{budget:.3g}")
            max_dev = max(max_dev, dev)
            row_peak = max(row_peak, abs(closed) + err)
        peaks[nu - 1] = row_peak

    quantities = {
        "alpha_max_first": Quantity(float(peaks[0])),
        "alpha_max_final": Quantity(float(peaks[-1])),
        "route_deviation": Quantity(max_dev, 0.0, "CERTIFIED"),
    }
    for nu in (2, 4, 8, 16, 32):
        if nu <= nu_max:
            quantities[f"alpha_max_nu{nu}"] = Quantity(float(peaks[nu - 1]))
    scan = {"nu_max": nu_max, "n_max": n_max}

    if peaks[-1] <= decay_tol:
        return CriterionReport(
            cid, HOLDS_NUMERIC, quantities, scan,
            "every scanned coordinate of the adjoint orbit has collapsed "
            f"below {decay_tol:.1g} by power {nu_max} (both computation "
            "routes agree); universal decay over all dual vectors is "
            "equivalent, under the standing precondition, to the adjoint NOT "
            "being hypercyclic -- a single vector is evidence only",
            "NO_CONCLUSION")
    half = max(nu_max // 2, 1)
    growing = bool(np.all(np.diff(peaks[half - 1:]) > 0)) and peaks[-1] > peaks[0]
    if growing:
        return CriterionReport(
            cid, FAILS_NUMERIC, quantities, scan,
            "the adjoint orbit of this vector grows coordinatewise through "
            "the end of the scan; persistent non-decay of any single dual "
            "vector rules out the universal-decay alternative, which under "
            "the standing precondition is what non-hypercyclicity requires",
            "NO_CONCLUSION")
    return CriterionReport(
        cid, INCONCLUSIVE, quantities, scan,
        "the adjoint orbit of this vector neither collapsed below the decay "
        "tolerance nor grew monotonically within the scan window",
        "NO_CONCLUSION")


# ---------------------------------------------------------------------------
# static facts and the battery runner
# ---------------------------------------------------------------------------

def supercyclic_fact() -> CriterionReport:
    """The adjoint shift is supercyclic for every admissible weight; this is a
    structural fact about the dual pairing, not a computation, and is reported
    as such."""
    return CriterionReport(
        "adjoint-supercyclic-static", HOLDS_CERTIFIED, {}, {},
        "the adjoint shift is supercyclic regardless of the weight data; "
        "recorded as a static fact (no computation involved)",
        "SUPERCYCLIC")


def all_criteria(triple: SequenceTriple,
                 cfg: SpaceConfig | None = None) -> list[CriterionReport]:
    """Run the whole battery against one triple: the boundedness gate, the
    static supercyclicity fact, both hypercyclicity gates and the equivalence,
    the chaos pair, the functional-decay gate, the backward-shift gate, and
    single-vector evidence checks on canonical vectors.  Per-criterion
    precondition failures are folded into INCONCLUSIVE reports so the battery
    always completes."""
    cfg = cfg or SpaceConfig()
    _require_dynamics(cfg)
    reports = [check_sup_limsup(triple), supercyclic_fact()]

    def _guard(fn, *args, **kwargs):
        try:
            reports.append(fn(*args, **kwargs))
        except (PolynomialNotInSpace, TailNotCertifiable) as exc:
            name = getattr(fn, "__name__", "criterion")
            reports.append(CriterionReport(
                name.replace("_", "-"), INCONCLUSIVE, {}, {},
                f"not applicable here: {exc}", "NO_CONCLUSION"))

    _guard(hypercyclic_sufficient, triple, cfg, mode="liminf")
    _guard(hypercyclic_sufficient, triple, cfg, mode="lim")
    _guard(hypercyclic_necessary, triple, cfg)
    _guard(hypercyclic_iff, triple, cfg)
    _guard(chaos_series, triple, cfg)
    _guard(chaos_extra_condition, triple, cfg)
    _guard(generic_kn_criteria, triple, cfg)
    _guard(backward_shift_chaos_check, triple, cfg)
    _guard(wuc_check, triple, FunctionVec(np.array([1.0 + 0.0j])), cfg)
    _guard(zero_one_decay_check, triple, coeff_functional_kn(triple, 2), cfg)
    return reports
