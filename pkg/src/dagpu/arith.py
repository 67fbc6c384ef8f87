"""Arithmetic models and precision-scalable lane packing.

Every model maps reals to machine words (``from_real``), back again
(``to_real``), and provides add/mul/max/min over words. Posit models work on
L-bit patterns, the minifloat models on IEEE-style sign/exponent/fraction
patterns with saturating (non-trapping) semantics, and the float64 model on
native doubles for exact-reference use. ``LaneModel`` packs 1x32b, 2x16b, or
4x8b independent lanes into one 32-bit word for batched execution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import posit
from .dag import Op


class ArithModel:
    """Scalar word arithmetic; subclasses fill in the four ops and codecs."""

    name: str = "?"
    width: int | None = None  # word length in bits; None for native float64

    def from_real(self, x: float):
        raise NotImplementedError

    def to_real(self, w) -> float:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def max_(self, a, b):
        raise NotImplementedError

    def min_(self, a, b):
        raise NotImplementedError

    def apply(self, op: Op, a, b):
        if op is Op.ADD:
            return self.add(a, b)
        if op is Op.MUL:
            return self.mul(a, b)
        if op is Op.MAX:
            return self.max_(a, b)
        if op is Op.MIN:
            return self.min_(a, b)
        raise ValueError(f"not an arithmetic op: {op}")

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class Float64Model(ArithModel):
    """Native IEEE double arithmetic; the exact-reference model."""

    name = "float64"
    width = None

    def from_real(self, x):
        return float(x)

    def to_real(self, w):
        return w

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def max_(self, a, b):
        return a if a >= b else b

    def min_(self, a, b):
        return a if a <= b else b


class PositModel(ArithModel):
    """Scalar posit arithmetic over bit patterns, with memoized add/mul."""

    def __init__(self, cfg: posit.PositConfig, name: str | None = None):
        self.cfg = cfg
        self.name = name or f"posit{cfg.length}e{cfg.es}"
        self.width = cfg.length
        self._add_cache: dict[tuple[int, int], int] = {}
        self._mul_cache: dict[tuple[int, int], int] = {}

    def from_real(self, x):
        return posit.encode_real(x, self.cfg)

    def to_real(self, w):
        return posit.to_float(w, self.cfg)

    def add(self, a, b):
        key = (a, b) if a <= b else (b, a)
        r = self._add_cache.get(key)
        if r is None:
            r = posit.add(a, b, self.cfg)
            self._add_cache[key] = r
        return r

    def mul(self, a, b):
        key = (a, b) if a <= b else (b, a)
        r = self._mul_cache.get(key)
        if r is None:
            r = posit.mul(a, b, self.cfg)
            self._mul_cache[key] = r
        return r

    def max_(self, a, b):
        return posit.max_(a, b, self.cfg)

    def min_(self, a, b):
        return posit.min_(a, b, self.cfg)


class MiniFloatModel(ArithModel):
    """IEEE-layout float of configurable width with saturating semantics.

    Overflow clamps to the largest finite value and nonzero magnitudes below
    the smallest subnormal clamp to that subnormal, mirroring the posit
    models' exception-free behavior. Arithmetic decodes to float64 (exact
    for all supported widths), computes, and re-encodes with
    round-to-nearest-even.
    """

    def __init__(self, exp_bits: int, frac_bits: int, name: str):
        if exp_bits + frac_bits + 1 > 32 or frac_bits > 23:
            raise ValueError("format too wide for exact float64 arithmetic")
        self.exp_bits = exp_bits
        self.frac_bits = frac_bits
        self.name = name
        self.width = 1 + exp_bits + frac_bits
        self.bias = (1 << (exp_bits - 1)) - 1
        self.emin = 1 - self.bias
        self.emax = self.bias

    def from_real(self, x):
        x = float(x)
        fb = self.frac_bits
        if math.isnan(x) or math.isinf(x):
            sign = 1 if (math.copysign(1.0, x) < 0) else 0
            return self._pack_maxfinite(sign)
        if x == 0.0:
            return 0
        sign = 1 if x < 0 else 0
        num, den = abs(x).as_integer_ratio()
        exp2 = -(den.bit_length() - 1)
        h = num.bit_length() - 1 + exp2
        e = max(h, self.emin)
        shift = exp2 - (e - fb)
        if shift >= 0:
            q = num << shift
        else:
            drop = -shift
            q = num >> drop
            rest = num & ((1 << drop) - 1)
            guard = (rest >> (drop - 1)) & 1
            sticky = rest & ((1 << (drop - 1)) - 1)
            if guard and (sticky or (q & 1)):
                q += 1
        if q >= (1 << (fb + 1)):
            q >>= 1
            e += 1
        if e > self.emax:
            return self._pack_maxfinite(sign)
        if q == 0:
            q = 1  # clamp to the smallest subnormal rather than flushing to zero
        if q < (1 << fb):
            biased = 0
            frac = q
        else:
            biased = e + self.bias
            frac = q - (1 << fb)
        return (sign << (self.exp_bits + fb)) | (biased << fb) | frac

    def to_real(self, w):
        fb = self.frac_bits
        frac = w & ((1 << fb) - 1)
        biased = (w >> fb) & ((1 << self.exp_bits) - 1)
        sign = w >> (self.exp_bits + fb)
        if biased == (1 << self.exp_bits) - 1:
            # Reserved IEEE inf/nan codes read back as the clamp value.
            v = math.ldexp(float((1 << (fb + 1)) - 1), self.emax - fb)
        elif biased == 0:
            v = math.ldexp(float(frac), self.emin - fb)
        else:
            v = math.ldexp(float((1 << fb) + frac), biased - self.bias - fb)
        return -v if sign else v

    def _pack_maxfinite(self, sign: int) -> int:
        fb = self.frac_bits
        body = (((1 << self.exp_bits) - 2) << fb) | ((1 << fb) - 1)
        return (sign << (self.exp_bits + fb)) | body

    def add(self, a, b):
        return self.from_real(self.to_real(a) + self.to_real(b))

    def mul(self, a, b):
        return self.from_real(self.to_real(a) * self.to_real(b))

    def max_(self, a, b):
        return a if self.to_real(a) >= self.to_real(b) else b

    def min_(self, a, b):
        return a if self.to_real(a) <= self.to_real(b) else b


@dataclass(frozen=True)
class PositFamily:
    """A choice of es per lane width."""

    name: str
    es_by_width: tuple[tuple[int, int], ...]

    def es_for(self, width: int) -> int:
        for w, es in self.es_by_width:
            if w == width:
                return es
        raise KeyError(f"{self.name} has no es for width {width}")

    def config(self, width: int) -> posit.PositConfig:
        return posit.PositConfig(width, self.es_for(width))


STANDARD_POSIT = PositFamily("standard-posit", ((8, 0), (16, 1), (32, 2)))
CUSTOM_POSIT = PositFamily("custom-posit", ((8, 2), (16, 3), (32, 6)))

FLOAT64 = Float64Model()
BINARY32 = MiniFloatModel(8, 23, "binary32")
BINARY16 = MiniFloatModel(5, 10, "binary16")
FLOAT8_143 = MiniFloatModel(4, 3, "float8-143")

_posit_models: dict[tuple[str, int], PositModel] = {}


def posit_model(family: PositFamily, width: int) -> PositModel:
    """Shared PositModel instance per (family, width), so op caches persist."""
    key = (family.name, width)
    m = _posit_models.get(key)
    if m is None:
        m = PositModel(family.config(width), f"{family.name}-{width}")
        _posit_models[key] = m
    return m


@dataclass(frozen=True)
class PrecisionMode:
    name: str
    lanes: int
    width: int


P32 = PrecisionMode("P32", 1, 32)
P16 = PrecisionMode("P16", 2, 16)
P8 = PrecisionMode("P8", 4, 8)
MODES = {32: P32, 16: P16, 8: P8}


class LaneModel:
    """Applies a scalar model lane-wise on packed 32-bit words.

    Lane i occupies bits [i*w, (i+1)*w) of the packed word (lane 0 is least
    significant). In P32 mode packing is the identity, which also admits the
    non-bit-packed float64 model.
    """

    def __init__(self, scalar: ArithModel, mode: PrecisionMode):
        if mode.lanes > 1 and scalar.width != mode.width:
            raise ValueError(f"{scalar.name} ({scalar.width}b) cannot drive {mode.name} lanes")
        self.scalar = scalar
        self.mode = mode

    @property
    def lanes(self) -> int:
        return self.mode.lanes

    def pack(self, lane_words) -> object:
        if self.mode.lanes == 1:
            return lane_words[0]
        w = self.mode.width
        word = 0
        for i, lw in enumerate(lane_words):
            word |= (lw & ((1 << w) - 1)) << (i * w)
        return word

    def unpack(self, word) -> list:
        if self.mode.lanes == 1:
            return [word]
        w = self.mode.width
        return [(word >> (i * w)) & ((1 << w) - 1) for i in range(self.mode.lanes)]

    def from_reals(self, xs) -> object:
        return self.pack([self.scalar.from_real(x) for x in xs])

    def apply(self, op: Op, a, b):
        if self.mode.lanes == 1:
            return self.scalar.apply(op, a, b)
        return self.pack(
            [self.scalar.apply(op, la, lb) for la, lb in zip(self.unpack(a), self.unpack(b))]
        )


def lane_model(family: PositFamily, mode: PrecisionMode) -> LaneModel:
    return LaneModel(posit_model(family, mode.width), mode)


def log_uniform_grid(exp_lo: float = -40.0, exp_hi: float = 40.0, points: int = 321) -> list[float]:
    """Grid of 2**u for u evenly spaced over [exp_lo, exp_hi]."""
    if points < 2:
        raise ValueError("need at least 2 grid points")
    step = (exp_hi - exp_lo) / (points - 1)
    return [2.0 ** (exp_lo + i * step) for i in range(points)]


def relative_error_profile(model: ArithModel, grid) -> list[tuple[float, float]]:
    """Per-point relative representation error |enc(x) - x| / |x|."""
    out = []
    for x in grid:
        y = model.to_real(model.from_real(x))
        out.append((x, abs(y - x) / abs(x)))
    return out


def mean_log10_error(profile, floor: float = 1e-20) -> float:
    """Mean of log10(relative error), flooring exact points at ``floor``."""
    return sum(math.log10(max(err, floor)) for _, err in profile) / len(profile)
