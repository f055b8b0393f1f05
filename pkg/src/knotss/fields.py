"""Exact coefficient fields: the prime fields F_p and the rationals Q.

Elements are stored as plain Python values (int residues in 0..p-1 for
F_p, Fraction for Q); a Field object supplies the arithmetic.  Matrices
and chains carry a field tag instead of wrapping every entry, which
keeps elimination loops cheap.  The Scalar wrapper below exists for API
surfaces that want a self-describing value.
"""

from dataclasses import dataclass
from fractions import Fraction


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """F_p for prime p, or Q when p is None."""

    def __init__(self, p=None):
        if p is not None and not _is_prime(p):
            raise ValueError("characteristic must be prime, got %r" % (p,))
        self.p = p

    @property
    def name(self):
        return "q" if self.p is None else "f%d" % self.p

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def of(self, x):
        """Coerce an int or Fraction into this field."""
        if self.p is None:
            return Fraction(x)
        x = Fraction(x)
        den_inv = pow(x.denominator % self.p, -1, self.p)
        return (x.numerator * den_inv) % self.p

    def add(self, a, b):
        return (a + b) % self.p if self.p is not None else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p is not None else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p is not None else a * b

    def neg(self, a):
        return (-a) % self.p if self.p is not None else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / a
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Field(%r)" % (self.p,)


F2 = Field(2)
F3 = Field(3)
QQ = Field(None)

_BY_NAME = {"f2": F2, "f3": F3, "q": QQ}


def field_by_name(name):
    """Resolve 'f2' / 'f3' / 'q' (shipped fields only)."""
    try:
        return _BY_NAME[name.lower()]
    except KeyError:
        raise ValueError("unknown field %r; shipped fields are f2, f3, q" % name)


@dataclass(frozen=True)
class Scalar:
    """A field element tagged with its field."""

    field: Field
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.of(self.value))

    def _same(self, other):
        if self.field != other.field:
            raise ValueError("mixed fields: %r vs %r" % (self.field, other.field))

    def __add__(self, other):
        self._same(other)
        return Scalar(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other):
        self._same(other)
        return Scalar(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other):
        self._same(other)
        return Scalar(self.field, self.field.mul(self.value, other.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def inverse(self):
        return Scalar(self.field, self.field.inv(self.value))

    def __bool__(self):
        return bool(self.value)
