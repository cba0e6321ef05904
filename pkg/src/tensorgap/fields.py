"""Exact coefficient fields: arbitrary-precision rationals and prime fields F_p.

A :class:`FieldSpec` names the field.  A :class:`Scalar` pairs a FieldSpec with
a raw value: a `fractions.Fraction` (always in lowest terms, positive
denominator) over the rationals, an int residue in [0, p) over F_p.  Scalars
are immutable, support the usual arithmetic operators, and refuse to mix
fields (FieldMismatchError).  Plain Python ints are coerced into either field,
so ``x + 1`` works.

Textual form: ``a/b`` (just ``a`` for integers) over the rationals, the
decimal residue over F_p.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldMismatchError

# Word-sized moduli only; no extension fields.
MAX_PRIME = 2**63

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24 with these bases."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldSpec:
    """The rationals (p is None) or the prime field F_p."""

    __slots__ = ("p",)

    def __init__(self, p=None):
        if p is not None:
            if not isinstance(p, int) or not 2 <= p < MAX_PRIME:
                raise ValueError(f"modulus must be an integer in [2, 2^63): {p!r}")
            if not is_prime(p):
                raise ValueError(f"modulus must be prime: {p}")
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("FieldSpec is immutable")

    @property
    def is_rational(self):
        return self.p is None

    @property
    def name(self):
        return "Q" if self.p is None else f"F{self.p}"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.p == other.p

    def __hash__(self):
        return hash(("FieldSpec", self.p))

    def __repr__(self):
        return f"FieldSpec({self.name})"

    # -- element construction ------------------------------------------------

    def zero(self) -> "Scalar":
        return Scalar(self, Fraction(0) if self.p is None else 0)

    def one(self) -> "Scalar":
        return Scalar(self, Fraction(1) if self.p is None else 1)

    def from_int(self, n: int) -> "Scalar":
        return Scalar(self, Fraction(n) if self.p is None else n % self.p)

    def from_fraction(self, q) -> "Scalar":
        q = Fraction(q)
        if self.p is None:
            return Scalar(self, q)
        den = q.denominator % self.p
        if den == 0:
            raise ZeroDivisionError(f"denominator of {q} vanishes in F_{self.p}")
        return Scalar(self, q.numerator * pow(den, -1, self.p) % self.p)

    def coerce(self, x) -> "Scalar":
        """Coerce an int, Fraction, or Scalar of this field into a Scalar."""
        if isinstance(x, Scalar):
            if x.field != self:
                raise FieldMismatchError(f"cannot coerce {x.field.name} scalar into {self.name}")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self.name}")

    def parse(self, text: str) -> "Scalar":
        """Parse the textual scalar form: "a" or "a/b"."""
        text = text.strip()
        try:
            if "/" in text:
                a, b = text.split("/")
                return self.from_fraction(Fraction(int(a), int(b)))
            return self.from_int(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad scalar literal {text!r} for {self.name}: {exc}") from None


QQ = FieldSpec()


def GF(p: int) -> FieldSpec:
    """The prime field F_p (p a word-sized prime)."""
    return FieldSpec(p)


class Scalar:
    """An element of Q or F_p, tagged with its field."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatchError(
                    f"cannot combine {self.field.name} and {other.field.name} scalars"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        v = self.value + o.value
        return Scalar(self.field, v if p is None else v % p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        v = self.value - o.value
        return Scalar(self.field, v if p is None else v % p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        v = self.value * o.value
        return Scalar(self.field, v if p is None else v % p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        p = self.field.p
        return Scalar(self.field, -self.value if p is None else (-self.value) % p)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a natural number")
        p = self.field.p
        if p is None:
            return Scalar(self.field, self.value**n)
        return Scalar(self.field, pow(self.value, n, p))

    def inverse(self) -> "Scalar":
        if not self:
            raise ZeroDivisionError(f"inverse of zero in {self.field.name}")
        p = self.field.p
        if p is None:
            return Scalar(self.field, 1 / self.value)
        return Scalar(self.field, pow(self.value, -1, p))

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.coerce(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError(
                f"cannot compare {self.field.name} and {other.field.name} scalars"
            )
        return self.value == other.value

    def __hash__(self):
        return hash((self.field, self.value))

    def text(self) -> str:
        if self.field.p is not None:
            return str(self.value)
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"Scalar({self.field.name}, {self.text()})"
