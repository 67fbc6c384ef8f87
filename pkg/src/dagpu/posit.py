"""Posit <L, es> codec and bit-exact scalar arithmetic.

A pattern of all zeros is exactly zero and the pattern 10...0 is NaR
(not-a-real). Every other pattern decodes to a nonzero dyadic rational
(-1)^sign * mant * 2^exp2 with mant a positive integer, and the signed
two's-complement ordering of patterns is monotone in the decoded value.
Encoding rounds to nearest with ties to even on the discarded bits of the
unbounded posit bit expansion, and saturates at maxpos/minpos: no finite
nonzero value ever encodes to zero or NaR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class Special(Enum):
    ZERO = 0
    NAR = 1


ZERO = Special.ZERO
NAR = Special.NAR


@dataclass(frozen=True)
class PositConfig:
    """Format descriptor: total length and maximum exponent field length."""

    length: int
    es: int

    def __post_init__(self):
        if self.length < 3:
            raise ValueError("posit length must be at least 3")
        if not (0 <= self.es < self.length - 2):
            raise ValueError("es must satisfy 0 <= es < length - 2")

    @property
    def max_scale(self) -> int:
        """log2(maxpos) = 2**es * (length - 2)."""
        return (1 << self.es) * (self.length - 2)

    @property
    def nar_pattern(self) -> int:
        return 1 << (self.length - 1)

    @property
    def maxpos_pattern(self) -> int:
        return (1 << (self.length - 1)) - 1

    @property
    def minpos_pattern(self) -> int:
        return 1


def decode(bits: int, cfg: PositConfig):
    """Split a pattern into (sign, mant, exp2), or ZERO / NAR.

    The value is (-1)^sign * mant * 2^exp2. Negative patterns are
    two's-complement negated before field extraction. Truncated exponent
    fields are zero-padded on the right.
    """
    L, es = cfg.length, cfg.es
    bits &= (1 << L) - 1
    if bits == 0:
        return ZERO
    if bits == 1 << (L - 1):
        return NAR
    sign = bits >> (L - 1)
    if sign:
        bits = (-bits) & ((1 << L) - 1)
    width = L - 1
    body = bits & ((1 << width) - 1)
    lead = (body >> (width - 1)) & 1
    run = 1
    pos = width - 2
    while pos >= 0 and ((body >> pos) & 1) == lead:
        run += 1
        pos -= 1
    k = (run - 1) if lead else -run
    consumed = min(run + 1, width)  # regime plus terminator, capped at word end
    rem = width - consumed
    e_bits = min(es, rem)
    e = ((body >> (rem - e_bits)) & ((1 << e_bits) - 1)) if e_bits else 0
    e <<= es - e_bits
    m = rem - e_bits
    frac = body & ((1 << m) - 1) if m else 0
    scale = (k << es) + e
    return (sign, (1 << m) | frac, scale - m)


def encode_scaled(sign: int, mant: int, exp2: int, cfg: PositConfig) -> int:
    """Encode (-1)^sign * mant * 2^exp2 (mant > 0) with saturating rounding."""
    L, es = cfg.length, cfg.es
    width = L - 1
    bl = mant.bit_length()
    h = bl - 1 + exp2  # floor(log2 |value|)
    max_h = cfg.max_scale
    if h > max_h or (h == max_h and (mant & (mant - 1))):
        body = (1 << width) - 1
    elif h < -max_h:
        body = 1
    else:
        k, e = divmod(h, 1 << es)
        if k >= 0:
            prefix = ((1 << (k + 1)) - 1) << 1
            plen = k + 2
        else:
            prefix = 1
            plen = -k + 1
        frac = mant - (1 << (bl - 1))
        fw = bl - 1
        total = (((prefix << es) | e) << fw) | frac
        tlen = plen + es + fw
        if tlen <= width:
            body = total << (width - tlen)
        else:
            drop = tlen - width
            body = total >> drop
            rest = total & ((1 << drop) - 1)
            guard = (rest >> (drop - 1)) & 1
            sticky = rest & ((1 << (drop - 1)) - 1)
            if guard and (sticky or (body & 1)):
                body += 1
    if sign:
        return (-body) & ((1 << L) - 1)
    return body


def encode_real(x, cfg: PositConfig) -> int:
    """Round a real (int or float) to the nearest posit; NaN/inf map to NaR."""
    if isinstance(x, float) and not math.isfinite(x):
        return cfg.nar_pattern
    if x == 0:
        return 0
    num, den = abs(x).as_integer_ratio()
    return encode_scaled(1 if x < 0 else 0, num, -(den.bit_length() - 1), cfg)


def to_float(bits: int, cfg: PositConfig) -> float:
    d = decode(bits, cfg)
    if d is ZERO:
        return 0.0
    if d is NAR:
        return math.nan
    sign, mant, exp2 = d
    try:
        v = math.ldexp(float(mant), exp2)
    except OverflowError:
        v = math.inf
    return -v if sign else v


def add(a: int, b: int, cfg: PositConfig) -> int:
    """Exact significand addition then re-encode; NaR absorbs, x + 0 = x."""
    da = decode(a, cfg)
    db = decode(b, cfg)
    if da is NAR or db is NAR:
        return cfg.nar_pattern
    if da is ZERO:
        return b
    if db is ZERO:
        return a
    sa, ma, ea = da
    sb, mb, eb = db
    e = min(ea, eb)
    s = (ma << (ea - e)) * (-1 if sa else 1) + (mb << (eb - e)) * (-1 if sb else 1)
    if s == 0:
        return 0
    if s < 0:
        return encode_scaled(1, -s, e, cfg)
    return encode_scaled(0, s, e, cfg)


def mul(a: int, b: int, cfg: PositConfig) -> int:
    """Exact significand multiplication then re-encode; NaR absorbs, x * 0 = 0."""
    da = decode(a, cfg)
    db = decode(b, cfg)
    if da is NAR or db is NAR:
        return cfg.nar_pattern
    if da is ZERO or db is ZERO:
        return 0
    sa, ma, ea = da
    sb, mb, eb = db
    return encode_scaled(sa ^ sb, ma * mb, ea + eb, cfg)


def _signed(bits: int, L: int) -> int:
    return bits - (1 << L) if bits >> (L - 1) else bits


def max_(a: int, b: int, cfg: PositConfig) -> int:
    # Two's-complement pattern order is value order, so an integer compare
    # suffices; NaR propagates.
    nar = cfg.nar_pattern
    if a == nar or b == nar:
        return nar
    return a if _signed(a, cfg.length) >= _signed(b, cfg.length) else b


def min_(a: int, b: int, cfg: PositConfig) -> int:
    nar = cfg.nar_pattern
    if a == nar or b == nar:
        return nar
    return a if _signed(a, cfg.length) <= _signed(b, cfg.length) else b
