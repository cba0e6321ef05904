"""The rational function field K(eps) over an exact coefficient field K.

A :class:`Poly` is a dense univariate polynomial in eps with coefficients in
K, stored as a raw coefficient tuple indexed by exponent from eps^0 upward
(Fractions over Q, int residues over F_p), trailing zeros trimmed; the zero
polynomial has an empty tuple.  A :class:`RatFunc` is a normalized quotient
num/den with gcd(num, den) = 1 and den monic, so equal values have equal
representations.  :class:`EpsField` tags K(eps) the way FieldSpec tags K.

Curves of group elements appearing in degeneration certificates have rational
function entries, so exact arithmetic here removes any need for truncation
order bookkeeping.  Laurent data at eps = 0 is recovered on demand:
``rf_valuation`` gives the order of vanishing (negative at a pole, +inf at 0)
and ``rf_series`` expands exactly up to a requested exponent.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import FieldMismatchError
from .fields import FieldSpec, Scalar

INFINITE_VALUATION = math.inf


class Poly:
    """Polynomial in eps over Q or F_p; raw dense coefficients from eps^0."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs=()):
        raw = []
        p = field.p
        for c in coeffs:
            if isinstance(c, Scalar):
                if c.field != field:
                    raise FieldMismatchError(
                        f"{c.field.name} coefficient in {field.name}[eps] polynomial"
                    )
                raw.append(c.value)
            elif isinstance(c, int):
                raw.append(Fraction(c) if p is None else c % p)
            elif isinstance(c, Fraction) and p is None:
                raw.append(c)
            else:
                raise TypeError(f"bad polynomial coefficient {c!r}")
        while raw and raw[-1] == 0:
            raw.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(raw))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @property
    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1."""
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def coefficient(self, e: int) -> Scalar:
        raw = self.coeffs[e] if 0 <= e < len(self.coeffs) else None
        return Scalar(self.field, raw) if raw is not None else self.field.zero()

    def valuation(self):
        """Index of the lowest nonzero coefficient; +inf for the zero polynomial."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return INFINITE_VALUATION

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        p = self.field.p
        out = []
        for i in range(n):
            v = (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
            out.append(v if p is None else v % p)
        return Poly(self.field, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        p = self.field.p
        return Poly(self.field, [-c if p is None else (-c) % p for c in self.coeffs])

    def __mul__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(self.field)
        p = self.field.p
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        if p is not None:
            out = [c % p for c in out]
        return Poly(self.field, out)

    def scale(self, raw):
        p = self.field.p
        if p is None:
            return Poly(self.field, [c * raw for c in self.coeffs])
        raw %= p
        return Poly(self.field, [c * raw % p for c in self.coeffs])

    def shift(self, n: int):
        """Multiply by eps^n (n >= 0)."""
        if not self.coeffs:
            return self
        return Poly(self.field, (0,) * n + self.coeffs)

    def _check(self, other):
        if not isinstance(other, Poly) or other.field != self.field:
            raise FieldMismatchError("polynomials over different fields")

    def divmod(self, other):
        """Exact Euclidean division by a nonzero polynomial."""
        self._check(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.field.p
        inv_lead = 1 / other.leading() if p is None else pow(other.leading(), -1, p)
        rem = list(self.coeffs)
        db = other.degree
        quo = [0] * max(len(rem) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            q = c * inv_lead if p is None else c * inv_lead % p
            quo[i - db] = q
            for j, bj in enumerate(other.coeffs):
                v = rem[i - db + j] - q * bj
                rem[i - db + j] = v if p is None else v % p
        return Poly(self.field, quo), Poly(self.field, rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if not self:
            return self
        p = self.field.p
        inv = 1 / self.leading() if p is None else pow(self.leading(), -1, p)
        return self.scale(inv)

    def text(self) -> str:
        """Comma-separated coefficients from eps^0 ("0" for the zero polynomial)."""
        if not self.coeffs:
            return "0"
        return ",".join(Scalar(self.field, c).text() for c in self.coeffs)

    def __repr__(self):
        return f"Poly({self.field.name}, [{self.text()}])"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm."""
    while b:
        a, b = b, a % b
    return a.monic()


def poly_parse(field: FieldSpec, text: str) -> Poly:
    text = text.strip()
    if text in ("", "0"):
        return Poly(field)
    return Poly(field, [field.parse(part).value for part in text.split(",")])


class EpsField:
    """The field K(eps) of rational functions over a base FieldSpec."""

    __slots__ = ("base",)

    def __init__(self, base: FieldSpec):
        object.__setattr__(self, "base", base)

    def __setattr__(self, name, value):
        raise AttributeError("EpsField is immutable")

    @property
    def name(self):
        return f"{self.base.name}(eps)"

    def __eq__(self, other):
        return isinstance(other, EpsField) and self.base == other.base

    def __hash__(self):
        return hash(("EpsField", self.base))

    def __repr__(self):
        return f"EpsField({self.base.name})"

    def zero(self) -> "RatFunc":
        return RatFunc(Poly(self.base), Poly(self.base, [1]))

    def one(self) -> "RatFunc":
        return RatFunc(Poly(self.base, [1]), Poly(self.base, [1]))

    def eps(self, n: int = 1) -> "RatFunc":
        """The monomial eps^n, for any integer n."""
        one = Poly(self.base, [1])
        if n >= 0:
            return RatFunc(one.shift(n), one)
        return RatFunc(one, one.shift(-n))

    def from_int(self, n: int) -> "RatFunc":
        return RatFunc(Poly(self.base, [n]), Poly(self.base, [1]))

    def lift(self, s: Scalar) -> "RatFunc":
        if s.field != self.base:
            raise FieldMismatchError(f"cannot lift {s.field.name} scalar into {self.name}")
        return RatFunc(Poly(self.base, [s.value]), Poly(self.base, [1]))

    def coerce(self, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            if x.field != self.base:
                raise FieldMismatchError(f"cannot coerce {x.field.name}(eps) into {self.name}")
            return x
        if isinstance(x, Scalar):
            return self.lift(x)
        if isinstance(x, Poly):
            if x.field != self.base:
                raise FieldMismatchError("polynomial over the wrong base field")
            return RatFunc(x, Poly(self.base, [1]))
        if isinstance(x, (int, Fraction)):
            return self.lift(self.base.coerce(x))
        raise TypeError(f"cannot coerce {type(x).__name__} into {self.name}")


class RatFunc:
    """Normalized quotient of polynomials in eps: gcd(num, den) = 1, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        if num.field != den.field:
            raise FieldMismatchError("numerator and denominator over different fields")
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            den = Poly(num.field, [1])
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num // g
                den = den // g
            p = num.field.p
            lead = den.leading()
            if lead != 1:
                inv = 1 / lead if p is None else pow(lead, -1, p)
                num = num.scale(inv)
                den = den.scale(inv)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @property
    def field(self) -> FieldSpec:
        return self.num.field

    @property
    def ring(self) -> EpsField:
        return EpsField(self.num.field)

    def _other(self, other):
        if isinstance(other, RatFunc):
            if other.field != self.field:
                raise FieldMismatchError("rational functions over different base fields")
            return other
        if isinstance(other, (Scalar, int, Fraction, Poly)):
            return self.ring.coerce(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __pow__(self, n: int):
        if n < 0:
            return (self.ring.one() / self) ** (-n)
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def inverse(self) -> "RatFunc":
        if not self:
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.den, self.num)

    def valuation(self):
        """Order of vanishing at eps = 0; negative at a pole, +inf for 0."""
        if not self:
            return INFINITE_VALUATION
        return self.num.valuation() - self.den.valuation()

    def series(self, upto: int) -> list[Scalar]:
        """Exact Laurent coefficients from the valuation up to exponent `upto`.

        Empty for the zero function; otherwise requires upto >= valuation.
        """
        if not self:
            return []
        v = self.valuation()
        if upto < v:
            raise ValueError(f"expansion order {upto} below valuation {v}")
        vn = self.num.valuation()
        vd = self.den.valuation()
        n0 = self.num.coeffs[vn:]
        d0 = self.den.coeffs[vd:]
        count = upto - v + 1
        p = self.field.p
        inv0 = 1 / d0[0] if p is None else pow(d0[0], -1, p)
        out = []
        for j in range(count):
            acc = n0[j] if j < len(n0) else (Fraction(0) if p is None else 0)
            for i in range(max(0, j - len(d0) + 1), j):
                acc -= out[i] * d0[j - i]
            c = acc * inv0
            out.append(c if p is None else c % p)
        return [Scalar(self.field, c) for c in out]

    def coefficient(self, e: int) -> Scalar:
        """The exact Laurent coefficient at eps^e."""
        if not self:
            return self.field.zero()
        v = self.valuation()
        if e < v:
            return self.field.zero()
        return self.series(e)[e - v]

    def substitute_power(self, n: int) -> "RatFunc":
        """The rational function f(eps^n), n >= 1."""
        if n < 1:
            raise ValueError("power substitution needs n >= 1")
        return RatFunc(_spread(self.num, n), _spread(self.den, n))

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree <= 0

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        if not self:
            return self.field.zero()
        return Scalar(self.field, self.num.coeffs[0])

    def text(self) -> str:
        return f"{self.num.text()} ; {self.den.text()}"

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"RatFunc({self.text()!r})"


def _spread(poly: Poly, n: int) -> Poly:
    if not poly.coeffs:
        return poly
    out = [0] * ((len(poly.coeffs) - 1) * n + 1)
    for i, c in enumerate(poly.coeffs):
        out[i * n] = c
    return Poly(poly.field, out)


def ratfunc_parse(field: FieldSpec, text: str) -> RatFunc:
    """Parse the "num ; den" textual form (den defaults to 1)."""
    if ";" in text:
        num_text, den_text = text.split(";")
    else:
        num_text, den_text = text, "1"
    return RatFunc(poly_parse(field, num_text), poly_parse(field, den_text))


def rf_valuation(f: RatFunc):
    """Order of vanishing of f at eps = 0 (+inf for f = 0)."""
    return f.valuation()


def rf_series(f: RatFunc, upto: int) -> list[Scalar]:
    """Exact Laurent coefficients of f from its valuation up to exponent `upto`."""
    return f.series(upto)
