"""Independent brute-force references, used only by tests.

Everything here recomputes production quantities by a deliberately different
route — Taylor-side coefficient shifting, high-precision compensated
summation, dense triangular inversion — sharing only the stored sequence
parameters with the production code, never its numerics.  Slowness is fine;
these functions exist so the fast routes can be held to their stated bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .errors import CertMismatch, IndexNegative
from .sequences import SequenceExpr, SequenceTriple

__all__ = [
    "OracleConfig",
    "eval_seq_mp",
    "taylor_apply_Fw",
    "basis_vector_taylor",
    "taylor_to_basis",
    "matrix_column_oracle",
    "series_sum_highprec",
    "dense_basis_inverse",
]


@dataclass(frozen=True)
class OracleConfig:
    """Extended-precision settings: `dps` significant digits (>= 30), and
    caps on how far the brute-force routes will iterate."""

    dps: int = 40
    n_cap: int = 8192
    j_cap: int = 200000

    def __post_init__(self):
        if self.dps < 30:
            raise ValueError("oracle precision must be >= 30 digits")


_DEFAULT = OracleConfig()


def _mpc(z) -> mp.mpc:
    if isinstance(z, (mp.mpf, mp.mpc)):
        return mp.mpc(z)
    z = complex(z)
    return mp.mpc(z.real, z.imag)


def eval_seq_mp(expr: SequenceExpr, n: int) -> mp.mpc:
    """Evaluate a stored sequence at index n in extended precision, straight
    from its parameters: override value, or r^n * P(n) / Q(n)."""
    if n < 0:
        raise IndexNegative(f"sequence index {n}")
    for k, v in expr.overrides:
        if k == n:
            return _mpc(v)
    num = mp.mpc(0)
    for j, cj in enumerate(expr.num):
        num += _mpc(cj) * mp.mpf(n) ** j
    den = mp.mpc(0)
    for j, cj in enumerate(expr.den):
        den += _mpc(cj) * mp.mpf(n) ** j
    return _mpc(expr.r) ** n * num / den


def taylor_apply_Fw(triple: SequenceTriple, coeffs, nu: int = 1,
                    cfg: OracleConfig | None = None) -> list:
    """Apply the operator on the Taylor side, nu times: the coefficient at
    degree n moves to degree n+1 multiplied by w_n.  Exact reference for the
    forward application and for matrix columns."""
    cfg = cfg or _DEFAULT
    if nu < 0:
        raise ValueError("power nu must be >= 0")
    with mp.workdps(cfg.dps):
        cur = [_mpc(c) for c in coeffs]
        for _ in range(nu):
            out = [mp.mpc(0)] * (len(cur) + 1)
            for n, lam in enumerate(cur):
                out[n + 1] = lam * eval_seq_mp(triple.w, n)
            cur = out
        return cur


def basis_vector_taylor(triple: SequenceTriple, j: int,
                        cfg: OracleConfig | None = None) -> list:
    """Taylor coefficients of the j-th basis function: a_j at degree j and
    b_j at degree j+1."""
    cfg = cfg or _DEFAULT
    if j < 0:
        raise IndexNegative(f"basis index {j}")
    with mp.workdps(cfg.dps):
        out = [mp.mpc(0)] * (j + 2)
        out[j] = eval_seq_mp(triple.a, j)
        out[j + 1] = eval_seq_mp(triple.b, j)
        return out


def taylor_to_basis(triple: SequenceTriple, taylor,
                    cfg: OracleConfig | None = None) -> list:
    """Forward-solve the triangular Taylor identity c_n = lam_n a_n +
    lam_(n-1) b_(n-1) for the basis coefficients lam, in extended
    precision."""
    cfg = cfg or _DEFAULT
    with mp.workdps(cfg.dps):
        c = [_mpc(x) for x in taylor]
        lam: list = []
        prev = mp.mpc(0)
        for n, cn in enumerate(c):
            an = eval_seq_mp(triple.a, n)
            if n == 0:
                cur = cn / an
            else:
                cur = (cn - prev * eval_seq_mp(triple.b, n - 1)) / an
            lam.append(cur)
            prev = cur
        return lam


def matrix_column_oracle(triple: SequenceTriple, j: int, nu: int,
                         count: int, cfg: OracleConfig | None = None
                         ) -> np.ndarray:
    """Column j of the nu-th power matrix, recomputed via the Taylor side:
    basis vector -> Taylor form -> nu coefficient shifts -> triangular solve
    back to basis coefficients.  Returns the leading `count` entries."""
    cfg = cfg or _DEFAULT
    with mp.workdps(cfg.dps):
        taylor = basis_vector_taylor(triple, j, cfg)
        taylor = taylor_apply_Fw(triple, taylor, nu, cfg)
        taylor += [mp.mpc(0)] * max(0, count - len(taylor))
        lam = taylor_to_basis(triple, taylor[:count], cfg)
        return np.array([complex(x.real, x.imag) for x in lam], dtype=complex)


def series_sum_highprec(term_fn, start: int = 0, count: int | None = None,
                        production: float | complex | None = None,
                        bound: float = 0.0,
                        cfg: OracleConfig | None = None,
                        infinite: bool = False):
    """Compensated extended-precision sum of term_fn(n) for n in
    [start, start+count) — or, with `infinite`, the accelerated sum over
    [start, inf) via mpmath's nsum (terms should then be mp-typed to
    benefit from the extended precision).  When a production value is
    supplied, assert it agrees within `bound` (plus a sliver for the
    production value's own float representation) and raise CertMismatch
    otherwise.

    Returns the high-precision value as a float (complex when the terms
    are)."""
    cfg = cfg or _DEFAULT
    n_terms = cfg.j_cap if count is None else int(count)
    with mp.workdps(cfg.dps):
        if infinite:
            total = _mpc(mp.nsum(lambda n: _mpc(term_fn(int(n))),
                                 [start, mp.inf]))
        else:
            total = mp.fsum(
                (_mpc(term_fn(n)) for n in range(start, start + n_terms)),
            )
        value = complex(total.real, total.imag)
        if production is not None:
            dev = abs(complex(production) - value)
            slack = 1e-15 * (1.0 + abs(value))
            if dev > bound + slack:
                raise CertMismatch(
                    f"production value {production!r} deviates from the "
                    f"oracle sum {value!r} by {dev:.3e} > stated bound "
                    f"{bound:.3e}")
    if value.imag == 0.0:
        return value.real
    return value


def dense_basis_inverse(triple: SequenceTriple, n: int,
                        cfg: OracleConfig | None = None) -> np.ndarray:
    """Express the coordinate functionals over the coefficient functionals
    by brute force: build the (n+1)x(n+1) upper-triangular matrix whose
    column j holds k_j = a_j f_j* + b_(j-1) f_(j-1)*, invert it in extended
    precision, and return the inverse (column j = f_j* in the k-basis)."""
    cfg = cfg or _DEFAULT
    if n < 0:
        raise IndexNegative(f"index {n}")
    with mp.workdps(cfg.dps):
        size = n + 1
        B = mp.zeros(size, size)
        for j in range(size):
            B[j, j] = eval_seq_mp(triple.a, j)
            if j >= 1:
                B[j - 1, j] = eval_seq_mp(triple.b, j - 1)
        inv = B ** -1
        out = np.zeros((size, size), dtype=complex)
        for i in range(size):
            for j in range(size):
                z = inv[i, j]
                out[i, j] = complex(z.real, z.imag)
        return out
