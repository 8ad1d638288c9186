"""Deterministic text formatting for emitted files.

Floats are printed with 6 significant digits so reruns are byte-identical.
Histogram probabilities are the one exception (12 digits): emitted
distributions must still sum to 1 within 1e-9 after parsing.
"""

from __future__ import annotations


def fmt(x: float | int | None, sig: int = 6) -> str:
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    return f"{x:.{sig}g}"


def fmt_prob(x: float) -> str:
    return f"{x:.12g}"
