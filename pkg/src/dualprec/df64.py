"""Emulated double precision as (high, low) pairs of binary32 values.

A value v is carried as an unevaluated sum high + low of two single-precision
floats, the DSFUN90 double-float scheme: high holds the binary32 rounding of v
and low the rounded remainder, giving roughly 48 significant bits.  All
arithmetic below rounds every intermediate to binary32, exactly as a shader
without fp64 support would, so CPU results are byte-comparable with the
emulated GPU path.

Scalar operations work on :class:`Df64`; the ``*_arrays`` kernels apply the
same algorithms elementwise to numpy float32 arrays and are what the transform
pipeline and vertex packing use.  Everything here is pure; no shared state.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DivideByZeroError, RangeError

__all__ = [
    "Df64",
    "split",
    "to_f64",
    "two_sum",
    "two_prod",
    "add",
    "sub",
    "mul",
    "div",
    "neg",
    "compare",
    "is_canonical",
    "split_arrays",
    "to_f64_arrays",
    "two_sum_arrays",
    "two_prod_arrays",
    "add_arrays",
    "sub_arrays",
    "mul_arrays",
    "div_arrays",
    "F32_MAX",
    "F32_MIN_NORMAL",
]

F32_MAX = float(np.finfo(np.float32).max)
F32_MIN_NORMAL = float(np.finfo(np.float32).tiny)

# Veltkamp splitting constant for binary32: 2^12 + 1.  Chosen over a fused
# multiply-add so host arithmetic matches shaders that cannot assume FMA.
_SPLITTER = np.float32(4097.0)

_F32 = np.float32


class Df64(NamedTuple):
    """An emulated double: unevaluated sum of two binary32 components.

    Components are stored as Python floats that are exact binary32 values
    (widening is lossless), which keeps ``high + low`` a plain binary64
    expression.  Canonical form: ``high == fl32(high + low)``, equivalently
    ``|low| <= 0.5 * ulp32(high)``.
    """

    high: float
    low: float

    def __neg__(self) -> "Df64":
        return Df64(-self.high, -self.low)


def _err_ranges(*arrays: np.ndarray) -> None:
    for a in arrays:
        if not np.isfinite(a).all():
            raise RangeError("intermediate or result overflowed binary32 range")


def split_arrays(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Decompose binary64 values into (high, low) binary32 array pairs.

    high is the binary32 nearest each value; low is the binary32 rounding of
    the remainder computed in binary64.  Rejects NaN and magnitudes beyond
    binary32 range instead of saturating: a silent infinity here would
    corrupt every error metric downstream.
    """
    values = np.asarray(values, dtype=np.float64)
    if np.isnan(values).any():
        raise RangeError("cannot split NaN into an emulated double")
    if (np.abs(values) > F32_MAX).any():
        raise RangeError(
            "magnitude exceeds binary32 range; rescale before splitting"
        )
    high = values.astype(np.float32)
    low = (values - high.astype(np.float64)).astype(np.float32)
    return high, low


def to_f64_arrays(high: np.ndarray, low: np.ndarray) -> np.ndarray:
    """Recombine component arrays into binary64: widen(high) + widen(low)."""
    return high.astype(np.float64) + low.astype(np.float64)


def two_sum_arrays(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Error-free addition (Knuth): s = fl32(a+b) and s + e == a + b exactly."""
    with np.errstate(over="ignore", invalid="ignore"):
        s = a + b
        bb = s - a
        e = (a - (s - bb)) + (b - bb)
    _err_ranges(s, e)
    return s, e


def _fast_two_sum(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Requires |a| >= |b| (or a == 0); callers guarantee it.
    s = a + b
    e = b - (s - a)
    return s, e


def _veltkamp(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod_arrays(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Error-free product via Veltkamp splitting: p + e == a * b exactly."""
    with np.errstate(over="ignore", invalid="ignore"):
        p = a * b
        ah, al = _veltkamp(a)
        bh, bl = _veltkamp(b)
        e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    _err_ranges(p, e)
    return p, e


def add_arrays(
    a: tuple[np.ndarray, np.ndarray], b: tuple[np.ndarray, np.ndarray]
) -> tuple[np.ndarray, np.ndarray]:
    """Pair + pair with full cancellation handling (relative error <= 3*2^-48).

    The sloppy DSFUN90 add loses accuracy when the high parts cancel; the
    two-two-sum variant below keeps the 2^-44 contract in that case too.
    """
    ah, al = a
    bh, bl = b
    with np.errstate(over="ignore", invalid="ignore"):
        sh, se = two_sum_arrays(ah, bh)
        th, te = two_sum_arrays(al, bl)
        c = se + th
        vh, vl = _fast_two_sum(sh, c)
        w = vl + te
        zh, zl = _fast_two_sum(vh, w)
    _err_ranges(zh)
    return zh, zl


def sub_arrays(
    a: tuple[np.ndarray, np.ndarray], b: tuple[np.ndarray, np.ndarray]
) -> tuple[np.ndarray, np.ndarray]:
    """Pair - pair; negation is componentwise."""
    bh, bl = b
    return add_arrays(a, (-bh, -bl))


def mul_arrays(
    a: tuple[np.ndarray, np.ndarray], b: tuple[np.ndarray, np.ndarray]
) -> tuple[np.ndarray, np.ndarray]:
    """Pair * pair, relative error <= 7*2^-48 against the exact product."""
    ah, al = a
    bh, bl = b
    exact_high = ah.astype(np.float64) * bh.astype(np.float64)
    under = (exact_high != 0.0) & (np.abs(exact_high) < F32_MIN_NORMAL)
    if under.any():
        raise RangeError("product underflowed below binary32 normal range")
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        p, e = two_prod_arrays(ah, bh)
        cross = ah * bl + al * bh
        e = e + cross
        zh, zl = _fast_two_sum(p, e)
    _err_ranges(zh)
    return zh, zl


def _mul_pair_fp(
    a: tuple[np.ndarray, np.ndarray], y: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    # Pair * plain float32, used by division's residual step.
    ah, al = a
    p, e = two_prod_arrays(ah, y)
    e = al * y + e
    return _fast_two_sum(p, e)


def div_arrays(
    a: tuple[np.ndarray, np.ndarray], b: tuple[np.ndarray, np.ndarray]
) -> tuple[np.ndarray, np.ndarray]:
    """Pair / pair: quotient estimate plus one residual correction.

    q1 = high(a)/high(b), r = a - q1*b evaluated pairwise, q2 = high(r)/high(b);
    the renormalized (q1, q2) is within 2^-43 relative of the binary64
    quotient, one rounding step looser than the other operations.
    """
    ah, al = a
    bh, bl = b
    if (bh == 0.0).any():
        raise DivideByZeroError("division by an emulated-double zero")
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        q1 = ah / bh
        ph, pl = _mul_pair_fp((bh, bl), q1)
        rh, rl = add_arrays((ah, al), (-ph, -pl))
        q2 = rh / bh
        zh, zl = _fast_two_sum(q1, q2)
    _err_ranges(zh)
    return zh, zl


# ---------------------------------------------------------------------------
# Scalar interface
# ---------------------------------------------------------------------------


def _as_pair(x: Df64) -> tuple[np.ndarray, np.ndarray]:
    if math.isnan(x.high) or math.isnan(x.low):
        raise RangeError("NaN operand")
    return np.asarray(x.high, dtype=_F32), np.asarray(x.low, dtype=_F32)


def _from_pair(h: np.ndarray, l: np.ndarray) -> Df64:
    return Df64(float(h), float(l))


def split(value: float) -> Df64:
    """Decompose one binary64 value; see :func:`split_arrays` for errors."""
    h, l = split_arrays(np.asarray(value, dtype=np.float64))
    return _from_pair(h, l)


def to_f64(x: Df64) -> float:
    """widen(high) + widen(low), evaluated in binary64."""
    return x.high + x.low


def two_sum(a: float, b: float) -> tuple[float, float]:
    """Scalar error-free sum of two binary32 values (returned widened)."""
    s, e = two_sum_arrays(np.asarray(a, dtype=_F32), np.asarray(b, dtype=_F32))
    return float(s), float(e)


def two_prod(a: float, b: float) -> tuple[float, float]:
    """Scalar error-free product of two binary32 values (returned widened)."""
    p, e = two_prod_arrays(np.asarray(a, dtype=_F32), np.asarray(b, dtype=_F32))
    return float(p), float(e)


def add(a: Df64, b: Df64) -> Df64:
    return _from_pair(*add_arrays(_as_pair(a), _as_pair(b)))


def sub(a: Df64, b: Df64) -> Df64:
    return _from_pair(*sub_arrays(_as_pair(a), _as_pair(b)))


def mul(a: Df64, b: Df64) -> Df64:
    return _from_pair(*mul_arrays(_as_pair(a), _as_pair(b)))


def div(a: Df64, b: Df64) -> Df64:
    return _from_pair(*div_arrays(_as_pair(a), _as_pair(b)))


def neg(x: Df64) -> Df64:
    return -x


def compare(a: Df64, b: Df64) -> int:
    """Lexicographic ordering on (high, low): -1, 0, or +1.

    Canonical representations are unique per value, so this agrees with
    comparing the recombined binary64 values.
    """
    if math.isnan(a.high) or math.isnan(b.high):
        raise RangeError("NaN operand")
    if a.high != b.high:
        return -1 if a.high < b.high else 1
    if a.low != b.low:
        return -1 if a.low < b.low else 1
    return 0


def is_canonical(x: Df64) -> bool:
    """True when high absorbs all it can: high == fl32(high + low)."""
    widened = np.float64(x.high) + np.float64(x.low)
    return float(np.float32(widened)) == x.high and math.isfinite(x.high)
