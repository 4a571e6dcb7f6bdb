"""Sequence DSL: evaluation, products, certified asymptotics, serialization."""

from __future__ import annotations

import numpy as np
import pytest

from shiftlab import (
    INDEX_CAP,
    IndexCapExceeded,
    IndexNegative,
    SequenceTriple,
    ZeroWeight,
    eval_seq,
    eval_seq_many,
    expr_from_json,
    expr_to_json,
    get_preset,
    log_abs_seq_many,
    make_seq,
    product_weights,
    radius_of_disc,
    ratio_limsup,
    seq_scale,
    triple_from_json,
    triple_to_json,
    validate_triple,
)
from conftest import random_triple


def _direct_eval(expr, n: int) -> complex:
    """Independent re-evaluation straight from the stored parameters."""
    if expr.overrides and n in expr.overrides:
        return complex(expr.overrides[n])
    num = sum(c * n**i for i, c in enumerate(expr.num))
    den = sum(c * n**i for i, c in enumerate(expr.den))
    return complex(expr.r) ** n * num / den


def test_eval_matches_direct_formula(rng):
    """1000 random indices across random expressions, rel err <= 1e-14."""
    for _ in range(20):
        t = random_triple(rng)
        for expr in (t.a, t.b, t.w):
            ns = rng.integers(0, 500, size=50)
            for n in ns:
                n = int(n)
                got = eval_seq(expr, n)
                want = _direct_eval(expr, n)
                assert abs(got - want) <= 1e-14 * max(1.0, abs(want))


def test_eval_seq_many_matches_scalar(rng):
    t = random_triple(rng)
    ns = np.arange(0, 64)
    many = eval_seq_many(t.a, ns)
    for i, n in enumerate(ns):
        want = eval_seq(t.a, int(n))
        assert abs(many[i] - want) <= 1e-14 * max(1.0, abs(want))


def test_overrides_take_precedence():
    e = make_seq(0.5, (2.0,), (0.0, 1.0), overrides={0: 1.0})
    assert eval_seq(e, 0) == 1.0
    assert eval_seq(e, 3) == pytest.approx(0.5**3 * 2.0 / 3.0, rel=1e-15)


def test_log_abs_matches_log_of_eval(rng):
    t = random_triple(rng)
    ns = np.arange(1, 40)
    for expr in (t.a, t.b, t.w):
        la = log_abs_seq_many(expr, ns)
        direct = np.log(np.abs(eval_seq_many(expr, ns)))
        assert np.allclose(la, direct, atol=1e-12)


def test_product_weights_log_additivity(rng):
    """log|prod(nu, m+n)| = log|prod(nu, m)| + log|prod(nu+m, n)|."""
    for _ in range(10):
        t = random_triple(rng)
        for _ in range(20):
            nu = int(rng.integers(0, 30))
            m = int(rng.integers(0, 20))
            n = int(rng.integers(0, 20))
            lg_all, _ = product_weights(t.w, nu, m + n)
            lg_a, _ = product_weights(t.w, nu, m)
            lg_b, _ = product_weights(t.w, nu + m, n)
            assert abs(lg_all - (lg_a + lg_b)) <= 1e-12 * max(1.0, abs(lg_all))


def test_ratio_limsup_bounds_scanned_prefix(rng):
    """A certified limsup bound dominates the ratio beyond its start index."""
    for _ in range(10):
        t = random_triple(rng)
        lim, cert = ratio_limsup(t.b, t.a, shift=1)
        assert cert.is_certified()
        n0 = max(cert.from_index, 1)
        ns = np.arange(n0, n0 + 400)
        # log domain: raw values may underflow to 0/0 at large indices
        with np.errstate(divide="ignore"):
            lv = log_abs_seq_many(t.b, ns) - log_abs_seq_many(t.a, ns + 1)
        vals = np.exp(lv)
        bound = max(lim, cert.bound) if np.isfinite(cert.bound) else lim
        assert np.all(vals <= bound + 1e-12)


def test_radius_invariant_under_common_scaling(rng):
    for _ in range(5):
        t = random_triple(rng)
        r0, c0 = radius_of_disc(t.a, t.b)
        for s in (3.0, 0.2, -7.5):
            r1, c1 = radius_of_disc(seq_scale(t.a, s), seq_scale(t.b, s))
            assert r1 == pytest.approx(r0, rel=1e-12)
            assert c1.kind == c0.kind


def test_preset_radii():
    assert radius_of_disc(get_preset("EX-CHAOS").a, get_preset("EX-CHAOS").b)[0] == 2.0
    assert radius_of_disc(get_preset("EX-TRIDIAG").a, get_preset("EX-TRIDIAG").b)[0] == 1.0
    for name in ("EX-HC", "EX-DECAY"):
        t = get_preset(name)
        r, cert = radius_of_disc(t.a, t.b)
        assert r == 1.0
        assert cert.is_certified()


def test_expr_json_round_trip(rng):
    t = random_triple(rng)
    for expr in (t.a, t.b, t.w):
        back = expr_from_json(expr_to_json(expr))
        ns = np.arange(0, 32)
        assert np.array_equal(eval_seq_many(expr, ns), eval_seq_many(back, ns))


def test_triple_json_round_trip(rng):
    t = random_triple(rng)
    back = triple_from_json(triple_to_json(t))
    validate_triple(back)
    ns = np.arange(0, 32)
    for e0, e1 in ((t.a, back.a), (t.b, back.b), (t.w, back.w)):
        assert np.array_equal(eval_seq_many(e0, ns), eval_seq_many(e1, ns))


def test_negative_index_rejected():
    e = make_seq(1.0, (1.0,))
    with pytest.raises(IndexNegative):
        eval_seq(e, -1)


def test_index_cap_enforced():
    e = make_seq(1.0, (1.0,))
    with pytest.raises(IndexCapExceeded):
        eval_seq(e, INDEX_CAP + 1)


def test_degree_cap_enforced():
    with pytest.raises(ValueError):
        make_seq(1.0, tuple(range(1, 11)))


def test_zero_weight_rejected():
    t = get_preset("EX-TRIDIAG")
    w0 = make_seq(1.0, (0.0, 1.0))  # w_0 = 0
    with pytest.raises(ZeroWeight):
        validate_triple(SequenceTriple(t.a, t.b, w0))
