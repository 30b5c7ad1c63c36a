"""Exact decimal rendering and parsing of rationals."""
from __future__ import annotations

from decimal import Decimal
from fractions import Fraction


def is_decimal(value: Fraction) -> bool:
    d = Fraction(value).denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def decimal_str(value) -> str:
    """Shortest exact decimal string for a terminating rational."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    if not is_decimal(value):
        raise ValueError(f"{value} has no finite decimal expansion")
    digits = 0
    d = value.denominator
    while d != 1:
        digits += 1
        d = (value * 10 ** digits).denominator
    return format(Decimal(value.numerator * 10 ** digits // value.denominator).scaleb(-digits), "f")


def parse_fraction(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(Decimal(str(text)))


def json_number(value):
    """JSON-ready number; non-integers go through their shortest decimal text."""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    text = decimal_str(value)
    if len(text.replace("-", "").replace(".", "").lstrip("0")) > 15:
        raise ValueError(f"{value} needs more than 15 significant digits")
    return float(text)
