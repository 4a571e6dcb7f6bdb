"""Shared fixtures: seeded RNG, preset access, random triple generators.

All randomness is seeded so runs are reproducible; nothing here depends on
wall-clock or platform entropy.
"""

from __future__ import annotations

import numpy as np
import pytest

from shiftlab import (
    SequenceTriple,
    SpaceConfig,
    get_preset,
    make_seq,
    opnorm_bound,
    ratio_limsup,
)

SEED = 20260816


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


@pytest.fixture(params=["EX-CHAOS", "EX-DECAY", "EX-HC", "EX-TRIDIAG"])
def preset(request) -> SequenceTriple:
    return get_preset(request.param)


def _random_poly(rng: np.random.Generator, max_deg: int = 2) -> tuple[float, ...]:
    """Random ascending coefficients, all positive so the polynomial has no
    zeros at nonnegative integers."""
    deg = int(rng.integers(0, max_deg + 1))
    return tuple(float(c) for c in rng.uniform(0.3, 2.0, size=deg + 1))


def random_triple(rng: np.random.Generator, bounded: bool = False) -> SequenceTriple:
    """A random DSL triple with moderate rates.

    The b-rate is kept well below the a-rate so the expansion ratio
    |b_n/a_(n+1)| certifies a limsup < 0.9 (resampled otherwise).  With
    bounded=True the weight rate is pulled under 1 and the triple is
    resampled until a finite certified operator-norm bound exists.
    """
    while True:
        ra = float(rng.uniform(0.6, 1.5))
        rb = float(rng.uniform(0.3, 0.7)) * ra
        rw = float(rng.uniform(0.5, 0.95)) if bounded else float(rng.uniform(0.7, 1.3))
        sign = -1.0 if rng.uniform() < 0.5 else 1.0
        a = make_seq(ra, _random_poly(rng), _random_poly(rng))
        b = make_seq(rb, tuple(sign * c for c in _random_poly(rng)), _random_poly(rng))
        w = make_seq(rw, _random_poly(rng), _random_poly(rng))
        triple = SequenceTriple(a, b, w)
        lim, cert = ratio_limsup(b, a, shift=1)
        if not (cert.is_certified() and lim < 0.9):
            continue
        if bounded and not np.isfinite(opnorm_bound(triple)):
            continue
        return triple


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One visible pass/fail line per acceptance criterion."""
    lines = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" in nodeid:
                name = nodeid.split("::")[-1]
                lines.append((name, status.upper()))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{name}: {status}")
