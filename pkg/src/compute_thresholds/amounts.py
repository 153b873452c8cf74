"""Log-domain quantities for threshold accounting.

Training-compute figures span some thirty orders of magnitude (a single
gradient step on a toy model up through 1e26+ FLOP frontier runs), so
amounts are stored as log10(FLOP) rather than raw floats.  Addition is
log-sum-exp, comparison is plain float comparison on the logs, and the
string codec is lossless: parse(render(a)) == a for every representable
amount.

Exact zero needs care: several derivation events (weight copies, scaffold
wrapping) consume no training compute at all, and `a + zero == a` must be
exact.  Zero is carried as a -inf sentinel in the log slot; the "log10 is
finite and >= 0" rule applies to every nonzero amount.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

_LN10 = math.log(10.0)
_LOG10_ZERO = float("-inf")


class AmountError(ValueError):
    """Invalid compute or money quantity."""


def _parse_log10(text: str) -> float:
    """Parse a decimal-scientific string into an exact-as-possible log10.

    Splitting the Decimal into mantissa and power-of-ten exponent keeps the
    log10 of round numbers exact: "1e26" -> 26.0, not 25.999999....
    """
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise AmountError(f"not a numeric amount: {text!r}") from None
    if not d.is_finite():
        raise AmountError(f"amount must be finite: {text!r}")
    if d < 0:
        raise AmountError(f"amount must be non-negative: {text!r}")
    if d == 0:
        return _LOG10_ZERO
    e = d.adjusted()  # exponent such that mantissa = d / 10^e is in [1, 10)
    mantissa = float(d.scaleb(-e))
    return math.log10(mantissa) + e


def _sci_candidate(m: float, digits: int, e: int) -> str:
    """Format m (in [1, 10)) at the given precision as <mantissa>e<e>,
    folding a round-up to 10 into the exponent."""
    s = f"{m:.{digits}g}"
    if "e" in s:
        ms, es = s.split("e")
        return f"{ms}e{e + int(es)}"
    return f"{s}e{e}"


@dataclass(frozen=True, order=True)
class ComputeAmount:
    """A non-negative quantity of compute in FLOP, stored as log10(FLOP).

    Ordering and equality compare the log field directly; the zero sentinel
    (-inf) sorts below everything else, as it should.
    """

    log10_flop: float

    def __post_init__(self) -> None:
        v = self.log10_flop
        if math.isnan(v) or v == math.inf:
            raise AmountError(f"log10_flop must be finite or -inf (zero): {v!r}")
        if v != _LOG10_ZERO and v < 0.0:
            raise AmountError(
                f"nonzero amounts start at 1 FLOP (log10 >= 0), got log10 {v!r}"
            )

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "ComputeAmount":
        return cls(_LOG10_ZERO)

    @classmethod
    def from_log10(cls, log10_flop: float) -> "ComputeAmount":
        return cls(float(log10_flop))

    @classmethod
    def from_flop(cls, flop: float) -> "ComputeAmount":
        if isinstance(flop, bool) or not isinstance(flop, (int, float)):
            raise AmountError(f"expected a number of FLOP, got {flop!r}")
        if math.isnan(flop) or flop == math.inf:
            raise AmountError(f"FLOP count must be finite: {flop!r}")
        if flop < 0:
            raise AmountError(f"FLOP count must be non-negative: {flop!r}")
        if flop == 0:
            return cls.zero()
        return cls(math.log10(flop))

    @classmethod
    def parse(cls, text: str) -> "ComputeAmount":
        """Inverse of render().

        Accepts any decimal-scientific string ("1e26", "3.5e25", "700",
        "0") plus the explicit log form "10^<float>" that render() falls
        back to when no decimal string reproduces the stored log exactly.
        """
        if not isinstance(text, str):
            raise AmountError(f"expected an amount string, got {text!r}")
        s = text.strip()
        if s.startswith("10^"):
            try:
                v = float(s[3:])
            except ValueError:
                raise AmountError(f"bad exponent in {text!r}") from None
            if math.isnan(v) or v == math.inf:
                raise AmountError(f"bad exponent in {text!r}")
            return cls(v)
        return cls(_parse_log10(s))

    # -- predicates and accessors ------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.log10_flop == _LOG10_ZERO

    @property
    def flop(self) -> float:
        """Linear-domain value; overflows to inf above ~1.8e308."""
        if self.is_zero:
            return 0.0
        return 10.0 ** self.log10_flop

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "ComputeAmount") -> "ComputeAmount":
        if not isinstance(other, ComputeAmount):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        hi, lo = self.log10_flop, other.log10_flop
        if lo > hi:
            hi, lo = lo, hi
        return ComputeAmount(hi + math.log1p(10.0 ** (lo - hi)) / _LN10)

    def scaled(self, factor: float) -> "ComputeAmount":
        """Multiply by a linear factor (factor > 0). scaled(1.0) is exact."""
        if math.isnan(factor) or factor <= 0 or factor == math.inf:
            raise AmountError(f"scale factor must be positive and finite: {factor!r}")
        if self.is_zero:
            return self
        return ComputeAmount(self.log10_flop + math.log10(factor))

    def shifted_ooms(self, ooms: float) -> "ComputeAmount":
        """Multiply by 10**ooms. shifted_ooms(0.0) is exact."""
        if math.isnan(ooms) or math.isinf(ooms):
            raise AmountError(f"OOM shift must be finite: {ooms!r}")
        if self.is_zero:
            return self
        return ComputeAmount(self.log10_flop + ooms)

    def ratio_to(self, other: "ComputeAmount") -> float:
        """Linear ratio self / other. other must be nonzero."""
        if other.is_zero:
            raise AmountError("ratio denominator is zero compute")
        if self.is_zero:
            return 0.0
        return 10.0 ** (self.log10_flop - other.log10_flop)

    # -- rendering -----------------------------------------------------------

    def render(self) -> str:
        """Lossless string form: ComputeAmount.parse(a.render()) == a.

        Prefers a decimal-scientific string (repr of the mantissa, nudged by
        up to a few ulps when rounding through the decimal form lands one
        float off).  For a small set of sub-1e3 logs no decimal string maps
        back exactly; those render as "10^<repr(log10)>", which parse() also
        accepts.
        """
        if self.is_zero:
            return "0"
        target = self.log10_flop
        e = math.floor(target)
        frac = target - e
        if frac >= 1.0:  # floor/rounding edge at exact powers of ten
            e += 1
            frac = target - e
        m = 10.0 ** frac
        # shortest decimal mantissa that maps back to the exact log
        for digits in range(1, 18):
            candidate = _sci_candidate(m, digits, e)
            if _parse_log10(candidate) == target:
                return candidate
        # rounding through decimal can land one float off; nudge a few ulps
        for _ in range(9):
            candidate = f"{m!r}e{e}"
            got = _parse_log10(candidate)
            if got == target:
                return candidate
            m = math.nextafter(m, math.inf if got < target else -math.inf)
        return f"10^{target!r}"

    def scientific(self, digits: int = 2) -> str:
        """Human-oriented fixed-precision form, e.g. 1.10e+25. Lossy."""
        if self.is_zero:
            return "0"
        e = math.floor(self.log10_flop)
        m = 10.0 ** (self.log10_flop - e)
        if round(m, digits) >= 10.0:  # 9.999.. rounds up a decade
            m /= 10.0
            e += 1
        return f"{m:.{digits}f}e{e:+03d}"

    def compact(self) -> str:
        """Short form for thresholds and labels, e.g. 1e26, 3e25, 1.5e25. Lossy."""
        if self.is_zero:
            return "0"
        e = math.floor(self.log10_flop)
        m = 10.0 ** (self.log10_flop - e)
        if float(f"{m:.10g}") >= 10.0:
            m /= 10.0
            e += 1
        mantissa = f"{m:.10g}"
        if "." in mantissa:
            mantissa = mantissa.rstrip("0").rstrip(".")
        return f"{mantissa}e{e}"

    def __str__(self) -> str:
        return self.render()


ZERO = ComputeAmount.zero()


def total(amounts) -> ComputeAmount:
    """Log-sum-exp fold over an iterable, zero-seeded."""
    acc = ZERO
    for a in amounts:
        acc = acc + a
    return acc


@dataclass(frozen=True, order=True)
class MoneyAmount:
    """A non-negative USD cost. Linear float is fine here; money spans
    a much smaller range than compute."""

    usd: float

    def __post_init__(self) -> None:
        v = self.usd
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise AmountError(f"expected a USD number, got {v!r}")
        if math.isnan(v) or math.isinf(v) or v < 0:
            raise AmountError(f"cost must be finite and non-negative: {v!r}")
        object.__setattr__(self, "usd", float(v))

    @classmethod
    def parse(cls, value) -> "MoneyAmount":
        if isinstance(value, MoneyAmount):
            return value
        if isinstance(value, str):
            try:
                value = float(Decimal(value.strip().lstrip("$").replace(",", "")))
            except InvalidOperation:
                raise AmountError(f"not a USD amount: {value!r}") from None
        return cls(value)

    def compact(self) -> str:
        v = self.usd
        for unit, div in (("B", 1e9), ("M", 1e6), ("k", 1e3)):
            if v >= div:
                s = f"{v / div:.10g}"
                return f"${s}{unit}"
        return f"${v:.10g}"

    def __str__(self) -> str:
        return self.compact()
