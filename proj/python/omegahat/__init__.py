"""Exact semi-POVM constructions at finite stage.

Thin wrappers over the compiled ``_core`` module: rationals come back as
``fractions.Fraction`` and reports as dictionaries.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from . import _core
from ._core import OmegahatError, from_index, is_psd, loewner_leq, pair, to_index, unpair

__all__ = [
    "OmegahatError",
    "complexity_upper",
    "from_index",
    "hhat",
    "is_psd",
    "loewner_leq",
    "measurement",
    "omega_hat_quad",
    "omega_lower",
    "pair",
    "sample_counts",
    "scalar_floor",
    "stream_eval",
    "to_index",
    "unpair",
    "validate",
]


def _frac(text: str) -> Fraction:
    return Fraction(text)


def omega_lower(machine: str, stage: int) -> Fraction:
    """Sum of 2^-|p| over programs found halting by ``stage``."""
    return _frac(_core.omega_lower(machine, stage))


def complexity_upper(machine: str, stage: int, bits: str) -> Optional[int]:
    return _core.complexity_upper(machine, stage, bits)


def stream_eval(stream: str, stage: int, s: int) -> dict:
    """Operator JSON ``{"block": ..., "tail": ...}`` of a named stream."""
    return json.loads(_core.stream_eval(stream, stage, s))


def validate(stream: str, stages: int) -> dict:
    return json.loads(_core.validate(stream, stages))


def omega_hat_quad(stage: int, window: int, state: str = "e1") -> Fraction:
    """<Omega-hat lower bound x, x> for a state specifier (e.g. "e1" or inline JSON)."""
    return _frac(_core.omega_hat_quad(stage, window, state))


def measurement(stream: str, stage: int, state: str, window: int) -> dict:
    d = json.loads(_core.measurement(stream, stage, state, window))
    d["residual"] = _frac(d["residual"])
    for o in d["outcomes"]:
        o["p"] = Fraction(int(o["p_num"]), int(o["p_den"]))
    return d


def sample_counts(stream: str, stage: int, state: str, window: int, seed: int, count: int, jobs: int = 1) -> list:
    """Outcome counts for s = 1..window followed by the completion outcome."""
    return _core.sample_counts(stream, stage, state, window, seed, count, jobs)


def hhat(s: int, stage: int, eps: str = "1/1048576") -> dict:
    return json.loads(_core.hhat(s, stage, eps))


def scalar_floor(s: int) -> Fraction:
    return _frac(_core.scalar_floor(s))
