"""Exact rational parsing/formatting shared by the file formats and the CLI."""

from __future__ import annotations

from fractions import Fraction


class Infinite:
    """Sentinel for an infinite penalty (pair must be connected)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __eq__(self, other):
        return isinstance(other, Infinite)

    def __hash__(self):
        return hash("pcsf-infinite")


INF = Infinite()


def parse_rational(token: str) -> Fraction:
    """Parse ``a/b`` or a decimal literal into an exact Fraction."""
    token = token.strip()
    if "/" in token:
        num, den = token.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(token)


def parse_penalty(token: str):
    if token.strip().lower() in ("inf", "infinity", "infinite"):
        return INF
    return parse_rational(token)


def format_rational(value) -> str:
    if isinstance(value, Infinite):
        return "inf"
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def rational_json(value):
    """JSON-friendly pair: exact string plus a float annotation."""
    if isinstance(value, Infinite):
        return {"exact": "inf", "approx": None}
    f = Fraction(value)
    return {"exact": format_rational(f), "approx": float(f)}
