"""Exact extended-rational arithmetic.

All numeric data in this package is either an exact rational (`Rat`) or the
positive-infinity sentinel `INF`.  Finite values are `gmpy2.mpq` when gmpy2 is
available and `fractions.Fraction` otherwise; both normalise to lowest terms
and print as ``p/q`` (integers print without the ``/1``).

There is no negative infinity, and ``INF * 0`` is rejected.
"""

from __future__ import annotations

from typing import Iterable, Union

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Rat


def _is_rational(value) -> bool:
    return isinstance(value, (Rat, int))


class _Infinity:
    """Positive infinity.  Compares above every rational, absorbs addition."""

    __slots__ = ()

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return isinstance(other, _Infinity)

    def __ne__(self, other):
        return not isinstance(other, _Infinity)

    def __hash__(self):
        return hash(float("inf"))

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _Infinity)

    def __gt__(self, other):
        return not isinstance(other, _Infinity)

    def __ge__(self, other):
        return True

    def __add__(self, other):
        if isinstance(other, _Infinity) or _is_rational(other):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, _Infinity):
            raise ArithmeticError("inf - inf is undefined")
        if _is_rational(other):
            return self
        return NotImplemented

    def __rsub__(self, other):
        raise ArithmeticError("negative infinity is not representable")

    def __mul__(self, other):
        if isinstance(other, _Infinity):
            return self
        if _is_rational(other):
            if other == 0:
                raise ArithmeticError("inf * 0 is undefined")
            if other < 0:
                raise ArithmeticError("negative infinity is not representable")
            return self
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        raise ArithmeticError("negative infinity is not representable")

    def __bool__(self):
        return True


INF = _Infinity()

#: A finite rational or the INF sentinel.
ExtRat = Union[Rat, _Infinity]

ZERO = Rat(0)
ONE = Rat(1)


def is_inf(value) -> bool:
    return isinstance(value, _Infinity)


def ext_sum(values: Iterable[ExtRat]) -> ExtRat:
    """Sum that absorbs INF.  Empty sum is 0."""
    total: ExtRat = ZERO
    for v in values:
        if is_inf(v) or is_inf(total):
            return INF
        total = total + v
    return total


def ext_min(*values: ExtRat) -> ExtRat:
    best: ExtRat = INF
    for v in values:
        if not is_inf(v) and (is_inf(best) or v < best):
            best = v
    return best


def clamp_nonneg(value: Rat) -> Rat:
    """(value)+ : max(value, 0) for finite rationals."""
    return value if value > 0 else ZERO


def parse_rat(token: str, allow_inf: bool = False) -> ExtRat:
    """Parse ``p``, ``p/q`` or (optionally) ``inf``.

    Raises ValueError on malformed input; q must be positive.
    """
    token = token.strip()
    if token == "inf":
        if allow_inf:
            return INF
        raise ValueError("'inf' is not allowed here")
    if "/" in token:
        num, _, den = token.partition("/")
        try:
            n, d = int(num), int(den)
        except ValueError:
            raise ValueError(f"malformed rational {token!r}") from None
        if d <= 0:
            raise ValueError(f"denominator must be positive in {token!r}")
        return Rat(n, d)
    try:
        return Rat(int(token))
    except ValueError:
        raise ValueError(f"malformed rational {token!r}") from None


def fmt_rat(value: ExtRat) -> str:
    """Render as ``p/q`` (integers without the ``/1``), or ``inf``."""
    if is_inf(value):
        return "inf"
    return str(value)
