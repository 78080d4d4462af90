"""Exact nonzero constants, point strata, and unit tokens.

Unit series are never materialized; the engine carries only what later
constructions consume: the nonzero constant value of each unit at the
chart point, plus a list of symbolic shift factors (x_j + alpha)^e for
display and reindexing.  Constants are products of a nonzero rational
and named generic nonzero symbols with exact fractional exponents, so
ratios and fractional powers stay closed and comparable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class UnitValue:
    """A guaranteed-nonzero constant: coeff * prod(symbol^exponent)."""

    coeff: Fraction = Fraction(1)
    symbols: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        if self.coeff == 0:
            raise ValueError("unit values are nonzero")

    @staticmethod
    def of(x) -> "UnitValue":
        if isinstance(x, UnitValue):
            return x
        return UnitValue(_as_fraction(x))

    @staticmethod
    def symbol(name: str, exp=1) -> "UnitValue":
        e = _as_fraction(exp)
        if e == 0:
            return UnitValue()
        return UnitValue(Fraction(1), ((name, e),))

    def __mul__(self, other: "UnitValue") -> "UnitValue":
        exps: dict[str, Fraction] = dict(self.symbols)
        for name, e in other.symbols:
            exps[name] = exps.get(name, Fraction(0)) + e
        syms = tuple(sorted((n, e) for n, e in exps.items() if e != 0))
        return UnitValue(self.coeff * other.coeff, syms)

    def __pow__(self, exp) -> "UnitValue":
        e = _as_fraction(exp)
        if e == 0:
            return UnitValue()
        syms = tuple((n, x * e) for n, x in self.symbols)
        if e.denominator == 1:
            coeff = self.coeff ** e.numerator
        elif self.coeff == 1:
            coeff = Fraction(1)
        else:
            # A fractional power of a non-unit rational: keep it symbolic.
            return UnitValue(Fraction(1), tuple(sorted(
                syms + ((f"rat:{self.coeff}", e),))))
        return UnitValue(coeff, syms)

    def inv(self) -> "UnitValue":
        return self ** -1

    @property
    def is_one(self) -> bool:
        return self.coeff == 1 and not self.symbols

    @property
    def is_rational(self) -> bool:
        return not self.symbols

    def __str__(self):
        parts = [] if self.coeff == 1 and self.symbols else [str(self.coeff)]
        for name, e in self.symbols:
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) or "1"


ONE = UnitValue()


@dataclass(frozen=True)
class Stratum:
    """Case split on a translation constant: zero, generic nonzero, or a value.

    Generic strata carry the symbol that names their value once the
    constant is consumed, keeping enumeration and replay deterministic.
    """

    kind: str  # "zero" | "generic" | "value"
    value: Fraction | None = None
    symbol: str | None = None

    def __post_init__(self):
        if self.kind not in ("zero", "generic", "value"):
            raise ValueError(f"bad stratum kind {self.kind!r}")
        if self.kind == "value" and (self.value is None or self.value == 0):
            raise ValueError("value strata must be nonzero")
        if self.kind == "generic" and not self.symbol:
            raise ValueError("generic strata need a symbol name")

    @staticmethod
    def zero() -> "Stratum":
        return Stratum("zero")

    @staticmethod
    def generic(symbol: str) -> "Stratum":
        return Stratum("generic", symbol=symbol)

    @staticmethod
    def of_value(x) -> "Stratum":
        return Stratum("value", value=_as_fraction(x))

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    def unit_value(self) -> UnitValue:
        """The constant this stratum assigns; only for nonzero strata."""
        if self.kind == "generic":
            return UnitValue.symbol(self.symbol)
        if self.kind == "value":
            return UnitValue.of(self.value)
        raise ValueError("zero stratum has no unit value")

    def __str__(self):
        if self.kind == "zero":
            return "0"
        if self.kind == "generic":
            return self.symbol
        return str(self.value)


ZERO_STRATUM = Stratum.zero()


@dataclass(frozen=True)
class UnitFactor:
    """A translated-variable factor (x_var + shift)^exp of a unit series."""

    var: int
    shift: UnitValue
    exp: int

    def constant(self) -> UnitValue:
        return self.shift ** self.exp


@dataclass(frozen=True)
class UnitToken:
    """A unit series reduced to its origin value and shift factors.

    The factor variables must stay outside the chart's active range
    (divisor, slot, and identity variables); the evaluation at the
    chart point is base * prod((0 + shift)^exp).
    """

    base: UnitValue = ONE
    factors: tuple[UnitFactor, ...] = ()

    def constant(self) -> UnitValue:
        value = self.base
        for f in self.factors:
            value = value * f.constant()
        return value

    def times(self, other: "UnitToken") -> "UnitToken":
        return UnitToken(self.base * other.base, self.factors + other.factors)

    def over(self, other: "UnitToken") -> "UnitToken":
        inverted = tuple(UnitFactor(f.var, f.shift, -f.exp) for f in other.factors)
        return UnitToken(self.base * other.base.inv(), self.factors + inverted)

    def with_factor(self, var: int, shift: UnitValue, exp: int) -> "UnitToken":
        if exp == 0:
            return self
        return UnitToken(self.base, self.factors + (UnitFactor(var, shift, exp),))

    def remap_vars(self, mapping: dict[int, int]) -> "UnitToken":
        return UnitToken(self.base, tuple(
            UnitFactor(mapping.get(f.var, f.var), f.shift, f.exp) for f in self.factors))

    def collapsed(self) -> "UnitToken":
        """Fold the factors into the base constant (used at lift time)."""
        return UnitToken(self.constant(), ())

    @property
    def is_trivial(self) -> bool:
        return self.base.is_one and not self.factors

    def min_factor_var(self) -> int | None:
        return min((f.var for f in self.factors), default=None)


TRIVIAL_UNIT = UnitToken()
