"""Frozen model triples used by the CLI, demos, and tests.

The override values (index-0 entries) are part of each model's definition and
are pinned here in code so they cannot drift.

- EX-CHAOS:   a_n = 1/(n 2^(n-1)) with a_0 = 1; b_n = 1/((n+1) 4^n);
              w_0 = 1, w_n = 4 for n >= 1. Radius 2; the compact-decomposition
              weights tend to 8 and the chaos series converges.
- EX-TRIDIAG: a_n = 1, b_n = -(n+1)/(n+2), w_n = 1. Radius 1; the forward
              shift is a compact perturbation of the unweighted shift and the
              adjoint has an eigenvector of boundary evaluations.
- EX-HC:      a_n = 1, b_n = 2^(-n-1), w_n = 2. Hypercyclic, mixing, chaotic.
- EX-DECAY:   a_n = 1, b_n = 2^(-n-1), w_n = 1/2. Certified not hypercyclic
              (orbits of the adjoint decay).
"""

from __future__ import annotations

from .sequences import SequenceTriple, make_seq, validate_triple

__all__ = ["PRESET_NAMES", "get_preset"]


def _build() -> dict[str, SequenceTriple]:
    ex_chaos = SequenceTriple(
        a=make_seq(0.5, (2,), (0, 1), overrides={0: 1},
                   description="1/(n 2^(n-1)), a_0 = 1"),
        b=make_seq(0.25, (1,), (1, 1), description="1/((n+1) 4^n)"),
        w=make_seq(1, (4,), overrides={0: 1}, description="w_0 = 1, w_n = 4"),
        label="EX-CHAOS",
    )
    ex_tridiag = SequenceTriple(
        a=make_seq(1, (1,), description="1"),
        b=make_seq(1, (-1, -1), (2, 1), description="-(n+1)/(n+2)"),
        w=make_seq(1, (1,), description="1"),
        label="EX-TRIDIAG",
    )
    ex_hc = SequenceTriple(
        a=make_seq(1, (1,), description="1"),
        b=make_seq(0.5, (0.5,), description="2^(-n-1)"),
        w=make_seq(1, (2,), description="2"),
        label="EX-HC",
    )
    ex_decay = SequenceTriple(
        a=make_seq(1, (1,), description="1"),
        b=make_seq(0.5, (0.5,), description="2^(-n-1)"),
        w=make_seq(1, (0.5,), description="1/2"),
        label="EX-DECAY",
    )
    out = {t.label: t for t in (ex_chaos, ex_tridiag, ex_hc, ex_decay)}
    for t in out.values():
        validate_triple(t)
    return out


_PRESETS = _build()
PRESET_NAMES = tuple(sorted(_PRESETS))


def get_preset(name: str) -> SequenceTriple:
    """Look up a frozen preset by name (case-insensitive)."""
    key = name.strip().upper()
    if key not in _PRESETS:
        raise ValueError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")
    return _PRESETS[key]
