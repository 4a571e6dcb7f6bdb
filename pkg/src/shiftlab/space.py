"""Basis algebra of the tridiagonal analytic sequence space.

The space has Schauder basis f_n(z) = (a_n + b_n z) z^n and coefficient norm
(sum |coeff_n|^p)^(1/p) (sup norm in the c0 mode). This module converts
between basis coefficients and Taylor coefficients, expands monomials in the
basis with certified tails, builds the coefficient functionals and dual
vectors, and evaluates p/q norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import IndexNegative, NotInDual, TailNotCertifiable
from .sequences import (
    SequenceExpr,
    SequenceTriple,
    TailCert,
    eval_seq,
    eval_seq_many,
    log_abs_seq_many,
    make_seq,
    seq_add_same_rate,
    seq_div,
    seq_eventual_bounds,
    seq_mul,
    seq_scale,
    seq_shift,
)
from .series import SeriesResult, certified_ratio_sum, geometric_tail

__all__ = [
    "C0",
    "SpaceConfig",
    "FunctionVec",
    "DualVec",
    "eval_basis_fn",
    "coeffs_to_taylor",
    "taylor_to_coeffs",
    "monomial_expansion",
    "monomial_norm",
    "coeff_functional_kn",
    "kn_norm_bound",
    "fstar_in_k_basis",
    "ev_functional",
    "dual_pairing",
    "norm",
    "vec_to_json",
    "function_vec_from_json",
    "dual_vec_from_json",
]

C0 = "c0"  # sup-norm mode marker for the p field


@dataclass(frozen=True)
class SpaceConfig:
    """Exponent and truncation settings shared by most operations."""

    p: float | str = 2.0
    N: int = 256
    J: int = 128
    tol: float = 1e-12

    def __post_init__(self):
        if self.is_c0:
            object.__setattr__(self, "p", C0)
        else:
            p = float(self.p)
            if not (p >= 1.0 and math.isfinite(p)):
                raise ValueError(f"p must be in [1, inf) or '{C0}', got {self.p}")
            object.__setattr__(self, "p", p)
        if self.N < 8:
            raise ValueError("truncation N must be >= 8")
        if self.J < 1:
            raise ValueError("series cap J must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    @property
    def is_c0(self) -> bool:
        return isinstance(self.p, str) and self.p.lower() == C0

    @property
    def q(self) -> float:
        """Conjugate exponent: q = p/(p-1); inf for p=1; 1 for the c0 mode."""
        if self.is_c0:
            return 1.0
        if self.p == 1.0:
            return math.inf
        return self.p / (self.p - 1.0)

    def dynamics_supported(self) -> bool:
        """Dynamics criteria require 1 < p < inf."""
        return not self.is_c0 and 1.0 < self.p < math.inf


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.ndim != 1:
        raise ValueError("coefficient data must be one-dimensional")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FunctionVec:
    """A function as finitely many basis coefficients plus an l^p tail bound
    on whatever was omitted."""

    coeffs: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen_array(self.coeffs))
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be nonnegative")

    def __len__(self) -> int:
        return int(self.coeffs.size)


@dataclass(frozen=True)
class DualVec:
    """A dual functional in coordinate (l^q) form plus an l^q tail bound."""

    coeffs: np.ndarray
    tail_bound: float = 0.0
    cert: TailCert = field(default_factory=lambda: TailCert("CERTIFIED", 0.0, 0))

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen_array(self.coeffs))
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be nonnegative")

    def __len__(self) -> int:
        return int(self.coeffs.size)


# ---------------------------------------------------------------------------
# evaluation and Taylor conversions
# ---------------------------------------------------------------------------

def eval_basis_fn(triple: SequenceTriple, n: int, z: complex) -> complex:
    """Value of the n-th basis function (a_n + b_n z) z^n."""
    if n < 0:
        raise IndexNegative(f"basis index {n}")
    z = complex(z)
    return (eval_seq(triple.a, n) + eval_seq(triple.b, n) * z) * z ** n


def eval_basis_many(triple: SequenceTriple, ns, z: complex) -> np.ndarray:
    ns = np.asarray(ns, dtype=np.int64)
    z = complex(z)
    a = eval_seq_many(triple.a, ns)
    b = eval_seq_many(triple.b, ns)
    return (a + b * z) * np.power(z, ns)


def coeffs_to_taylor(f: FunctionVec, triple: SequenceTriple) -> np.ndarray:
    """Taylor coefficients c with c_0 = coeff_0 a_0,
    c_n = coeff_n a_n + coeff_(n-1) b_(n-1), and a final overflow term
    c_N = coeff_(N-1) b_(N-1)."""
    lam = f.coeffs
    n = lam.size
    if n == 0:
        return np.zeros(0, dtype=complex)
    ns = np.arange(n)
    a = eval_seq_many(triple.a, ns)
    b = eval_seq_many(triple.b, ns)
    c = np.zeros(n + 1, dtype=complex)
    c[:n] += lam * a
    c[1:] += lam * b
    return c


def taylor_to_coeffs(c: Sequence[complex], triple: SequenceTriple) -> FunctionVec:
    """Forward substitution inverting coeffs_to_taylor: coeff_0 = c_0/a_0,
    coeff_n = (c_n - coeff_(n-1) b_(n-1))/a_n."""
    c = np.asarray(c, dtype=complex)
    n = c.size
    if n == 0:
        return FunctionVec(np.zeros(0, dtype=complex))
    ns = np.arange(n)
    a = eval_seq_many(triple.a, ns)
    b = eval_seq_many(triple.b, ns)
    lam = np.zeros(n, dtype=complex)
    lam[0] = c[0] / a[0]
    for k in range(1, n):
        lam[k] = (c[k] - lam[k - 1] * b[k - 1]) / a[k]
    return FunctionVec(lam)


# ---------------------------------------------------------------------------
# monomials
# ---------------------------------------------------------------------------

def _unit_phases(v: np.ndarray) -> np.ndarray:
    """v/|v| elementwise, robust across the whole float range (subnormal and
    huge values are rescaled by an exact power of two first); entries that are
    zero or non-finite get phase 1."""
    m = np.abs(v)
    ok = np.isfinite(m) & (m > 0)
    vv = np.where(ok, v, 1.0)
    mm = np.where(ok, m, 1.0)
    e = np.floor(np.log2(mm)).astype(np.int32)
    scaled = np.ldexp(vv.real, -e) + 1j * np.ldexp(vv.imag, -e)
    return scaled / np.abs(scaled)


def _monomial_coeff_data(triple: SequenceTriple, n: int, count: int) -> np.ndarray:
    """First `count` basis coefficients of z^n: the j-th sits at basis index
    n + j and equals (1/a_n) (-1)^j prod_{k<j} b_(n+k)/a_(n+k+1)."""
    a_n = eval_seq(triple.a, n)
    if count <= 0:
        return np.zeros(0, dtype=complex)
    js = np.arange(count - 1)
    # magnitudes analytically in log space (immune to float under/overflow
    # of the raw values; products may still reach 0 or inf, which is the
    # honest answer), unit phases separately
    lr = (log_abs_seq_many(triple.b, n + js)
          - log_abs_seq_many(triple.a, n + 1 + js))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        ub = _unit_phases(eval_seq_many(triple.b, n + js))
        ua = _unit_phases(eval_seq_many(triple.a, n + 1 + js))
        phases = np.cumprod(-ub / ua)
        mags = np.exp(np.cumsum(lr))
        out = np.empty(count, dtype=complex)
        out[0] = 1.0 / a_n
        out[1:] = (1.0 / a_n) * mags * phases
    return out


def _monomial_ratio_expr(triple: SequenceTriple, n: int) -> SequenceExpr:
    """|coeff_(j+1)/coeff_j| as a DSL expression in j (for tail certification)."""
    e = seq_div(triple.b, seq_shift(triple.a, 1))
    return seq_shift(e, n)


def _lp_from_series(res: SeriesResult, p: float) -> tuple[float, float]:
    """Convert a certified sum S of |x|^p with tail bound d into
    (S^(1/p), norm error bound)."""
    s = res.value
    d = res.tail_bound
    v = s ** (1.0 / p)
    hi = (s + d) ** (1.0 / p)
    lo = max(s - d, 0.0) ** (1.0 / p)
    return v, max(hi - v, v - lo)


def monomial_expansion(triple: SequenceTriple, n: int, J: int,
                       cfg: SpaceConfig | None = None) -> tuple[np.ndarray, TailCert]:
    """Basis coefficients of z^n at positions n..n+J-1, plus a tail
    certificate bounding the coefficient-norm of the omitted part."""
    cfg = cfg or SpaceConfig()
    if n < 0:
        raise IndexNegative(f"monomial degree {n}")
    if J < 1:
        raise ValueError("J must be >= 1")
    coeffs = _monomial_coeff_data(triple, n, J)
    ratio = _monomial_ratio_expr(triple, n)
    if cfg.is_c0:
        # sup-norm tail of omitted coefficients
        n0, sup, _, _ = seq_eventual_bounds(ratio, start=J - 1)
        extra = np.abs(_monomial_coeff_data(triple, n, n0 + 2)[J:])
        if sup < 1.0:
            bound = max(float(np.max(extra, initial=0.0)),
                        abs(coeffs[-1]) * sup)
            return coeffs, TailCert("CERTIFIED", bound, J, sup)
        raise TailNotCertifiable(
            "sup-norm tail of the monomial expansion is not certified "
            f"(eventual coefficient ratio {sup} >= 1)")
    p = float(cfg.p)

    def term_fn(js: np.ndarray) -> np.ndarray:
        top = int(js.max()) + 1
        all_c = _monomial_coeff_data(triple, n, top)
        return np.abs(all_c[js]) ** p

    res = certified_ratio_sum(term_fn, ratio, p, start=J, cap=cfg.J + 4096,
                              tol=cfg.tol, detail=f"z^{n} expansion tail")
    if res.converged_certified():
        bound = (res.value + res.tail_bound) ** (1.0 / p)
        return coeffs, TailCert("CERTIFIED", bound, J, res.cert.ratio)
    if res.status == "CONVERGED_HEURISTIC":
        bound = (res.value + min(res.tail_bound, res.value)) ** (1.0 / p)
        return coeffs, TailCert("HEURISTIC", bound, J)
    raise TailNotCertifiable(
        f"coefficient tail of z^{n} not certified: {res.status} ({res.detail})")


def monomial_norm(triple: SequenceTriple, n: int,
                  cfg: SpaceConfig | None = None) -> tuple[float, TailCert]:
    """Norm of z^n in the space, certified; inf with a divergence certificate
    when z^n is not a member."""
    cfg = cfg or SpaceConfig()
    if n < 0:
        raise IndexNegative(f"monomial degree {n}")
    ratio = _monomial_ratio_expr(triple, n)
    if cfg.is_c0:
        n0, sup, _, _ = seq_eventual_bounds(ratio)
        count = max(n0 + 2, 8)
        vals = np.abs(_monomial_coeff_data(triple, n, count))
        if sup <= 1.0:
            # beyond n0 coefficients are non-increasing (ratio <= 1)
            return float(np.max(vals)), TailCert("CERTIFIED", 0.0, count, min(sup, 1.0))
        raise TailNotCertifiable("sup-norm of the expansion not certified")
    p = float(cfg.p)

    def term_fn(js: np.ndarray) -> np.ndarray:
        top = int(js.max()) + 1
        all_c = _monomial_coeff_data(triple, n, top)
        return np.abs(all_c[js]) ** p

    res = certified_ratio_sum(term_fn, ratio, p, start=0, cap=max(cfg.J, 16384),
                              tol=cfg.tol, detail=f"norm of z^{n}")
    if res.converged_certified():
        v, err = _lp_from_series(res, p)
        return v, TailCert("CERTIFIED", err, res.terms_used, res.cert.ratio)
    if res.diverges_certified():
        return math.inf, TailCert("CERTIFIED", math.inf, res.cert.from_index)
    if res.status == "CONVERGED_HEURISTIC":
        v, err = _lp_from_series(res, p)
        return v, TailCert("HEURISTIC", err, res.terms_used)
    raise TailNotCertifiable(f"norm of z^{n} not certified: {res.status} ({res.detail})")


# ---------------------------------------------------------------------------
# coefficient functionals and the dual side
# ---------------------------------------------------------------------------

def coeff_functional_kn(triple: SequenceTriple, n: int, N: int | None = None) -> DualVec:
    """The n-th Taylor-coefficient functional in dual coordinates: a_n at
    position n and b_(n-1) at position n-1 (just a_0 at n=0). Exact."""
    if n < 0:
        raise IndexNegative(f"functional index {n}")
    size = N if N is not None else n + 1
    if size < n + 1:
        raise ValueError(f"truncation {size} too small to hold index {n}")
    u = np.zeros(size, dtype=complex)
    u[n] = eval_seq(triple.a, n)
    if n >= 1:
        u[n - 1] = eval_seq(triple.b, n - 1)
    return DualVec(u, 0.0, TailCert("CERTIFIED", 0.0, size))


def kn_norm_bound(triple: SequenceTriple, n: int, cfg: SpaceConfig | None = None) -> float:
    """Upper bound for the norm of the n-th coefficient functional:
    (|a_n|^q + |b_(n-1)|^q)^(1/q), with max for p=1 and sum in the c0 mode."""
    cfg = cfg or SpaceConfig()
    if n == 0:
        return abs(eval_seq(triple.a, 0))
    an = abs(eval_seq(triple.a, n))
    bn1 = abs(eval_seq(triple.b, n - 1))
    if cfg.is_c0:
        return an + bn1
    q = cfg.q
    if math.isinf(q):
        return max(an, bn1)
    return (an ** q + bn1 ** q) ** (1.0 / q)


def fstar_in_k_basis(triple: SequenceTriple, n: int) -> np.ndarray:
    """Coefficients expressing the n-th coordinate functional over the
    coefficient functionals k_0..k_n: position n gets 1/a_n and position n-j
    gets (-1)^j (b_(n-1)...b_(n-j)) / (a_n...a_(n-j))."""
    if n < 0:
        raise IndexNegative(f"index {n}")
    out = np.zeros(n + 1, dtype=complex)
    coef = 1.0 / eval_seq(triple.a, n)
    out[n] = coef
    for j in range(1, n + 1):
        coef = coef * (-eval_seq(triple.b, n - j) / eval_seq(triple.a, n - j))
        out[n - j] = coef
    return out


def _value_expr_same_rate(triple: SequenceTriple, z: complex) -> SequenceExpr | None:
    """DSL expression for f_n(z) = (a_n + b_n z) z^n when a and b share a rate."""
    z = complex(z)
    if z == 0:
        return None
    if triple.a.r != triple.b.r:
        return None
    inner = seq_add_same_rate(triple.a, seq_scale(triple.b, z))
    return seq_mul(inner, make_seq(z, (1,)))


def ev_functional(triple: SequenceTriple, z: complex,
                  cfg: SpaceConfig | None = None) -> DualVec:
    """Point-evaluation functional at z in dual coordinates (f_n(z))_n with a
    certified l^q tail; raises NotInDual when membership cannot be certified."""
    cfg = cfg or SpaceConfig()
    z = complex(z)
    n_trunc = cfg.N
    coords = eval_basis_many(triple, np.arange(n_trunc), z)
    if z == 0:
        return DualVec(coords, 0.0, TailCert("CERTIFIED", 0.0, n_trunc))
    q = cfg.q
    if math.isinf(q):
        # p = 1: dual tail in sup norm
        expr = _value_expr_same_rate(triple, z)
        if expr is None:
            raise NotInDual("sup-norm dual tail needs a shared coefficient rate")
        n0, sup, _, lim = seq_eventual_bounds(expr, start=n_trunc)
        if lim > 0 or not math.isfinite(sup):
            raise NotInDual(f"evaluation coordinates do not vanish at {z}")
        extra = np.abs(eval_basis_many(triple, np.arange(n_trunc, n0 + 1), z))
        bound = max(float(np.max(extra, initial=0.0)), sup)
        return DualVec(coords, bound, TailCert("CERTIFIED", bound, n_trunc))

    results = []
    expr = _value_expr_same_rate(triple, z)
    if expr is not None:
        def term_fn(ns: np.ndarray) -> np.ndarray:
            with np.errstate(over="ignore"):  # inf terms certify divergence
                return np.abs(eval_basis_many(triple, ns, z)) ** q

        ratio = seq_div(seq_shift(expr, 1), expr)
        results.append(certified_ratio_sum(term_fn, ratio, q, start=n_trunc,
                                           cap=cfg.J + 8192, tol=cfg.tol,
                                           detail=f"evaluation tail at {z}"))
    else:
        # distinct rates: bound the tail by the two geometric pieces
        # (valid strictly inside the disc by the triangle inequality)
        for part, scale in ((triple.a, 1.0), (triple.b, abs(z))):
            piece = seq_mul(part, make_seq(z, (1,)))

            def term_fn(ns: np.ndarray, _piece=piece) -> np.ndarray:
                with np.errstate(over="ignore"):  # inf terms certify divergence
                    return np.abs(eval_seq_many(_piece, ns)) ** q

            ratio = seq_div(seq_shift(piece, 1), piece)
            res = certified_ratio_sum(term_fn, ratio, q, start=n_trunc,
                                      cap=cfg.J + 8192, tol=cfg.tol,
                                      detail="evaluation tail piece")
            results.append((res, scale))

    if expr is not None:
        res = results[0]
        if not res.converged_certified():
            raise NotInDual(
                f"l^q membership of evaluation at {z} not certified: {res.status}")
        bound = (res.value + res.tail_bound) ** (1.0 / q)
    else:
        bound = 0.0
        for res, scale in results:
            if not res.converged_certified():
                raise NotInDual(
                    f"l^q membership of evaluation at {z} not certified: {res.status}")
            bound += scale * (res.value + res.tail_bound) ** (1.0 / q)
    return DualVec(coords, bound, TailCert("CERTIFIED", bound, n_trunc))


def dual_pairing(u: DualVec, f: FunctionVec,
                 cfg: SpaceConfig | None = None) -> tuple[complex, float]:
    """Apply the functional to the function over stored coordinates; the error
    bound is the Holder product of everything not stored on both sides."""
    cfg = cfg or SpaceConfig()
    m = min(len(u), len(f))
    value = complex(np.sum(u.coeffs[:m] * f.coeffs[:m]))
    u_tail = _full_tail(u.coeffs[m:], u.tail_bound, cfg.q)
    f_tail = _full_tail(f.coeffs[m:], f.tail_bound,
                        math.inf if cfg.is_c0 else float(cfg.p))
    return value, u_tail * f_tail


def _full_tail(extra: np.ndarray, tail_bound: float, exponent: float) -> float:
    stored = _lp_norm(extra, exponent)
    if math.isinf(exponent):
        return max(stored, tail_bound)
    return (stored ** exponent + tail_bound ** exponent) ** (1.0 / exponent)


def _lp_norm(arr: np.ndarray, exponent: float) -> float:
    if arr.size == 0:
        return 0.0
    mags = np.abs(arr)
    if math.isinf(exponent):
        return float(np.max(mags, initial=0.0))
    return float(np.sum(mags ** exponent) ** (1.0 / exponent))


def norm(vec: FunctionVec | DualVec, cfg: SpaceConfig | None = None) -> float:
    """Finite-part coefficient norm: l^p (sup in c0 mode) for functions, l^q
    for dual vectors; the vector's tail_bound accounts for the rest."""
    cfg = cfg or SpaceConfig()
    if isinstance(vec, DualVec):
        return _lp_norm(vec.coeffs, cfg.q)
    exponent = math.inf if cfg.is_c0 else float(cfg.p)
    return _lp_norm(vec.coeffs, exponent)


# ---------------------------------------------------------------------------
# JSON forms
# ---------------------------------------------------------------------------

def vec_to_json(vec: FunctionVec | DualVec) -> dict:
    data = {
        "coeffs": [[c.real, c.imag] for c in vec.coeffs],
        "tail_bound": float(vec.tail_bound),
    }
    if isinstance(vec, DualVec):
        data["cert"] = {
            "kind": vec.cert.kind,
            "bound": float(vec.cert.bound),
            "from_index": int(vec.cert.from_index),
        }
    return data


def function_vec_from_json(d: dict) -> FunctionVec:
    coeffs = [complex(x[0], x[1]) for x in d.get("coeffs", [])]
    return FunctionVec(np.array(coeffs, dtype=complex), float(d.get("tail_bound", 0.0)))


def dual_vec_from_json(d: dict) -> DualVec:
    coeffs = [complex(x[0], x[1]) for x in d.get("coeffs", [])]
    c = d.get("cert", {})
    cert = TailCert(str(c.get("kind", "HEURISTIC")), float(c.get("bound", 0.0)),
                    int(c.get("from_index", 0)))
    return DualVec(np.array(coeffs, dtype=complex), float(d.get("tail_bound", 0.0)), cert)
