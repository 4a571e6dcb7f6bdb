"""Space layer: coordinates, monomial expansions, functionals, norms."""

from __future__ import annotations

import math

import numpy as np
import pytest

from shiftlab import (
    C0,
    DualVec,
    NotInDual,
    SpaceConfig,
    coeff_functional_kn,
    coeffs_to_taylor,
    dual_pairing,
    ev_functional,
    eval_basis_fn,
    fstar_in_k_basis,
    get_preset,
    monomial_expansion,
    monomial_norm,
    norm,
    radius_of_disc,
    taylor_to_coeffs,
)
from shiftlab.space import FunctionVec
from conftest import random_triple

CFG = SpaceConfig()


def test_space_config_validation():
    with pytest.raises(ValueError):
        SpaceConfig(p=0.5)
    with pytest.raises(ValueError):
        SpaceConfig(N=4)
    with pytest.raises(ValueError):
        SpaceConfig(J=0)
    c = SpaceConfig(p=C0)
    assert c.is_c0 and c.q == 1.0
    assert SpaceConfig(p=2.0).q == 2.0
    assert SpaceConfig(p=1.0).q == math.inf
    assert SpaceConfig(p=4.0).q == pytest.approx(4.0 / 3.0)


def test_taylor_round_trip_random(rng):
    """taylor_to_coeffs(coeffs_to_taylor(f)) = f for finitely supported f.

    The tolerance carries the triangular solve's growth factor: rounding
    introduced at step n propagates with |b_(n-1)/a_n|, which random triples
    may push above 1 on early indices (the certified machinery elsewhere
    bounds exactly this ratio).
    """
    from shiftlab import eval_seq_many

    for _ in range(40):
        t = random_triple(rng)
        for _ in range(25):
            size = int(rng.integers(1, 40))
            f = FunctionVec(rng.normal(size=size) + 1j * rng.normal(size=size))
            tay = coeffs_to_taylor(f, t)
            back = taylor_to_coeffs(tay, t)
            padded = np.zeros(len(back.coeffs), dtype=complex)
            padded[:size] = f.coeffs
            ns = np.arange(1, len(back.coeffs))
            rho = np.abs(eval_seq_many(t.b, ns - 1) / eval_seq_many(t.a, ns))
            kappa = float(np.max(np.cumprod(np.maximum(rho, 1.0)), initial=1.0))
            scale = max(1.0, float(np.max(np.abs(f.coeffs))))
            assert np.max(np.abs(back.coeffs - padded)) <= 1e-12 * scale * kappa


def test_monomial_expansion_consistency(preset):
    """Partial sums of the expansion reproduce z^n within the certified tail
    at sample points with |z| <= 0.9 min(R, 1)."""
    R, _ = radius_of_disc(preset.a, preset.b)
    rmax = 0.9 * min(R, 1.0)
    zs = [rmax * 0.9, -rmax * 0.5, rmax * (0.45 + 0.6j), rmax * 0.99j,
          rmax * (-0.3 - 0.4j)]
    for n in (0, 1, 2, 5):
        coeffs, cert = monomial_expansion(preset, n, 60, CFG)
        assert cert.is_certified()
        for z in zs:
            z = complex(z)
            s = sum(coeffs[j] * eval_basis_fn(preset, n + j, z)
                    for j in range(len(coeffs)))
            assert abs(s - z**n) <= cert.bound + 1e-10


def test_basis_change_triangular_inverse(preset):
    """fstar_in_k_basis composed with coeff_functional_kn is the identity."""
    n = 12
    # columns: f_j* written in the k basis
    M1 = np.zeros((n + 1, n + 1), dtype=complex)
    for j in range(n + 1):
        col = fstar_in_k_basis(preset, j)
        M1[: len(col), j] = col[: n + 1]
    # columns: k_m written in the f* basis
    M2 = np.zeros((n + 1, n + 1), dtype=complex)
    for m in range(n + 1):
        M2[:, m] = coeff_functional_kn(preset, m, n + 1).coeffs
    prod = M2 @ M1
    assert np.max(np.abs(prod - np.eye(n + 1))) <= 1e-10


def test_dual_pairing_is_taylor_coefficient(preset, rng):
    for _ in range(10):
        size = int(rng.integers(3, 20))
        f = FunctionVec(rng.normal(size=size) + 1j * rng.normal(size=size))
        tay = coeffs_to_taylor(f, preset)
        for m in range(min(size, 6)):
            val, bound = dual_pairing(coeff_functional_kn(preset, m, size + 1),
                                      f, CFG)
            assert bound == 0.0
            assert abs(val - tay[m]) <= 1e-12 * max(1.0, abs(tay[m]))


def test_ev_pairing_reproduces_monomial(preset):
    R, _ = radius_of_disc(preset.a, preset.b)
    z = 0.4 * min(R, 1.0)
    ev = ev_functional(preset, z, CFG)
    for n in (0, 1, 3):
        coeffs, cert = monomial_expansion(preset, n, 48, CFG)
        full = np.zeros(n + 48, dtype=complex)
        full[n:] = coeffs
        val, bound = dual_pairing(ev, FunctionVec(full), CFG)
        combined = bound + cert.bound * max(1.0, norm(ev, CFG)) + 1e-10
        assert abs(val - z**n) <= combined


def test_ev_functional_at_zero_is_k0(preset):
    ev = ev_functional(preset, 0.0, CFG)
    k0 = coeff_functional_kn(preset, 0, len(ev.coeffs))
    assert ev.tail_bound == 0.0
    assert np.allclose(ev.coeffs, k0.coeffs, atol=1e-15)


def test_ev_functional_outside_disc_rejected(preset):
    R, _ = radius_of_disc(preset.a, preset.b)
    with pytest.raises(NotInDual):
        ev_functional(preset, 4.0 * max(R, 1.0), CFG)


def test_monomial_norms_finite_and_certified(preset):
    for n in range(8):
        v, cert = monomial_norm(preset, n, CFG)
        assert math.isfinite(v) and v > 0
        assert cert.kind == "CERTIFIED"


def test_monomial_norm_chaos_closed_form():
    """EX-CHAOS: the expansion ratio is exactly 0.5^(n+j), so
    ||z^n||^2 = (1/a_n^2) sum_j 0.25^(nj + j(j-1)/2)."""
    t = get_preset("EX-CHAOS")
    from shiftlab.sequences import eval_seq
    for n in range(8):
        a_n = eval_seq(t.a, n)
        s = sum(0.25 ** (n * j + j * (j - 1) / 2.0) for j in range(80))
        want = math.sqrt(s) / abs(a_n)
        got, _ = monomial_norm(t, n, CFG)
        assert got == pytest.approx(want, rel=1e-12)


def test_norm_l2_and_c0_modes(preset):
    u = DualVec(np.array([3.0, 4.0], dtype=complex))
    assert norm(u, SpaceConfig(p=2.0)) == pytest.approx(5.0, rel=1e-15)
    # c0 dual norm is the l1 coefficient norm
    assert norm(u, SpaceConfig(p=C0)) == pytest.approx(7.0, rel=1e-15)
    f = FunctionVec(np.array([3.0, 4.0], dtype=complex))
    assert norm(f, SpaceConfig(p=2.0)) == pytest.approx(5.0, rel=1e-15)
    assert norm(f, SpaceConfig(p=C0)) == pytest.approx(4.0, rel=1e-15)
