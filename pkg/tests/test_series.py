"""Certified summation layer: geometric closed forms, tail soundness,
divergence detection."""

from __future__ import annotations

import math

import numpy as np
import pytest

from shiftlab import certified_ratio_sum, geometric_tail, make_seq, sum_abs_power
from shiftlab.sequences import seq_div, seq_shift
from conftest import random_triple


def test_geometric_closed_form():
    e = make_seq(0.5, (1.0,))
    res = sum_abs_power(e, 1.0)
    assert res.converged_certified()
    assert abs(res.value - 2.0) <= res.tail_bound + 1e-12
    res2 = sum_abs_power(e, 2.0)
    assert abs(res2.value - 4.0 / 3.0) <= res2.tail_bound + 1e-12


def test_certified_tail_covers_true_remainder():
    """value + tail_bound brackets the true sum for a ratio -> 1 series."""
    e = make_seq(1.0, (1.0,), (1.0, 2.0, 1.0))  # 1/(n+1)^2
    res = sum_abs_power(e, 1.0)
    assert res.converged_certified()
    true = math.pi**2 / 6.0
    assert abs(res.value - true) <= res.tail_bound + 1e-12
    assert res.tail_bound >= 0.0


def test_divergence_certified():
    res = sum_abs_power(make_seq(2.0, (1.0,)), 1.0)
    assert res.diverges_certified()
    assert res.value == math.inf


def test_geometric_tail_formula():
    assert geometric_tail(0.5, 0.5) == pytest.approx(0.5, rel=1e-15)
    assert geometric_tail(1.0, 0.25) == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert geometric_tail(0.0, 0.5) == 0.0


def test_certified_ratio_sum_custom_terms():
    """Summing |0.5^n|^2 through the callable interface."""
    e = make_seq(0.5, (1.0,))

    def term_fn(js: np.ndarray) -> np.ndarray:
        return np.abs(0.5 ** js.astype(float)) ** 2

    ratio = seq_div(e, seq_shift(e, 0))  # constant expression with ratio 1/2
    res = certified_ratio_sum(term_fn, make_seq(0.5, (1.0,)), 2.0)
    assert res.converged_certified()
    assert abs(res.value - 4.0 / 3.0) <= res.tail_bound + 1e-12


def test_start_offset_drops_prefix():
    e = make_seq(0.5, (1.0,))
    res = sum_abs_power(e, 1.0, start=1)
    assert abs(res.value - 1.0) <= res.tail_bound + 1e-12


def test_random_triple_expansion_ratio_sums(rng):
    """The expansion ratio series of random triples certifies and is finite."""
    for _ in range(5):
        t = random_triple(rng)
        ratio = seq_div(t.b, seq_shift(t.a, 1))
        res = sum_abs_power(ratio, 2.0)
        assert res.converged_certified() or res.status == "CONVERGED_HEURISTIC"
        assert math.isfinite(res.value)
