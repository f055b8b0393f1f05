"""Cohomology of planar configuration spaces in the Arnold presentation.

H^*(Conf_p(R^2); k) is generated by degree-1 classes g_{ij}, 1 <= i < j
<= p, subject to g_{ij}^2 = 0, anticommutativity, and the 3-term
relation g_{ik} g_{jk} = g_{ij} g_{jk} - g_{ij} g_{ik} for i < j < k.
A monomial is admissible when its factors have pairwise-distinct,
strictly increasing second indices; admissible monomials form a basis
of size [t^q] prod_{k=1}^{p-1} (1 + k t).

The cosimplicial structure enters through coface/codegeneracy pullbacks
on generators and the alternating-sum differential d_1.
"""

import re
from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .fields import Field


def _sort_with_sign(factors):
    """Sort odd-degree factors by (second, first) index; count swaps mod 2.

    Insertion sort keeps the parity bookkeeping trivial at these sizes.
    """
    fs = list(factors)
    sign = 1
    for a in range(1, len(fs)):
        b = a
        while b > 0 and (fs[b - 1][1], fs[b - 1][0]) > (fs[b][1], fs[b][0]):
            fs[b - 1], fs[b] = fs[b], fs[b - 1]
            sign = -sign
            b -= 1
    return tuple(fs), sign


def straighten(factors):
    """Express a product of generators over Z in the admissible basis.

    Returns {admissible factor tuple: integer coefficient}.  The 3-term
    rewrite g_{ik} g_{jk} -> g_{ij} g_{jk} - g_{ij} g_{ik} strictly
    decreases the sum of second indices, so the worklist terminates.
    """
    result = {}
    stack = [(1, tuple(factors))]
    while stack:
        coeff, fs, = stack.pop()
        fs, sgn = _sort_with_sign(fs)
        coeff *= sgn
        if any(fs[a] == fs[a + 1] for a in range(len(fs) - 1)):
            continue  # g^2 = 0
        offender = None
        for a in range(len(fs) - 1):
            if fs[a][1] == fs[a + 1][1]:
                offender = a
                break
        if offender is None:
            result[fs] = result.get(fs, 0) + coeff
            if result[fs] == 0:
                del result[fs]
            continue
        (i, k), (j, k2) = fs[offender], fs[offender + 1]
        rest = fs[:offender] + fs[offender + 2:]
        stack.append((coeff, ((i, j), (j, k)) + rest))
        stack.append((-coeff, ((i, j), (i, k)) + rest))
    return result


@dataclass(frozen=True)
class GMonomial:
    """A product of generators g_{ij} at a fixed arity."""

    arity: int
    factors: tuple

    def __post_init__(self):
        for (i, j) in self.factors:
            if not (1 <= i < j <= self.arity):
                raise ValueError("generator g(%d,%d) out of range at arity %d"
                                 % (i, j, self.arity))

    @property
    def degree(self):
        return len(self.factors)

    def is_admissible(self):
        seconds = [j for (_, j) in self.factors]
        return seconds == sorted(set(seconds))


@dataclass
class CohClass:
    """Linear combination of admissible monomials in H^q(Conf_p)."""

    arity: int
    degree: int
    field: Field
    terms: dict = dc_field(default_factory=dict)  # factor tuple -> field value

    def __post_init__(self):
        self.terms = {m: v for m, v in self.terms.items() if v}
        for m in self.terms:
            if len(m) != self.degree:
                raise ValueError("mixed degrees in class")

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if (self.arity, self.degree, self.field) != (other.arity, other.degree, other.field):
            raise ValueError("incompatible classes")
        F = self.field
        terms = dict(self.terms)
        for m, v in other.terms.items():
            terms[m] = F.add(terms.get(m, F.zero), v)
        return CohClass(self.arity, self.degree, F, terms)

    def scale(self, c):
        F = self.field
        c = F.of(c)
        return CohClass(self.arity, self.degree, F,
                        {m: F.mul(c, v) for m, v in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return (isinstance(other, CohClass)
                and (self.arity, self.degree, self.field) == (other.arity, other.degree, other.field)
                and self.terms == other.terms)

    def __mul__(self, other):
        if (self.arity, self.field) != (other.arity, other.field):
            raise ValueError("incompatible classes")
        F = self.field
        terms = {}
        for m1, v1 in self.terms.items():
            for m2, v2 in other.terms.items():
                c = F.mul(v1, v2)
                for m, z in straighten(m1 + m2).items():
                    zc = F.mul(F.of(z), c)
                    terms[m] = F.add(terms.get(m, F.zero), zc)
        return CohClass(self.arity, self.degree + other.degree, F, terms)

    def __repr__(self):
        if not self.terms:
            return "0[p=%d,q=%d,%s]" % (self.arity, self.degree, self.field.name)
        bits = []
        for m, v in sorted(self.terms.items()):
            mono = "*".join("g(%d,%d)" % f for f in m) or "1"
            bits.append("%s·%s" % (v, mono))
        return " + ".join(bits)


def normal_form(arity, factors, field, coeff=1):
    """Straighten a single product of generators into a CohClass."""
    GMonomial(arity, tuple(factors))  # range validation
    F = field
    c = F.of(coeff)
    terms = {}
    for m, z in straighten(factors).items():
        terms[m] = F.add(terms.get(m, F.zero), F.mul(F.of(z), c))
    return CohClass(arity, len(tuple(factors)), F, terms)


def zero_class(arity, degree, field):
    return CohClass(arity, degree, field, {})


def dim_cohomology(p, q, field=None):
    """Coefficient of t^q in prod_{k=1}^{p-1} (1 + k t); field-independent."""
    if not (0 <= q <= max(p - 1, 0)):
        return 0
    poly = [1]
    for k in range(1, p):
        poly = [a + k * b for a, b in zip(poly + [0], [0] + poly)]
    return poly[q] if q < len(poly) else 0


def admissible_basis(p, q):
    """All admissible degree-q monomials at arity p, sorted."""
    out = []
    for seconds in combinations(range(2, p + 1), q):
        def grow(idx, acc):
            if idx == q:
                out.append(tuple(acc))
                return
            k = seconds[idx]
            for i in range(1, k):
                grow(idx + 1, acc + [(i, k)])
        grow(0, [])
    return sorted(out)


def class_to_vector(x, basis):
    index = {m: i for i, m in enumerate(basis)}
    v = [x.field.zero] * len(basis)
    for m, c in x.terms.items():
        v[index[m]] = c
    return v


def coface_pullback(i, x):
    """Pullback along the i-th coface, H^q(Conf_p) -> H^q(Conf_{p-1}).

    On generators: the inner cofaces double the i-th point (collapse
    indices i, i+1 and kill g_{i,i+1}); the outer cofaces i=0 and i=p
    kill generators touching the new end point and shift the rest.
    """
    p = x.arity
    if p < 2:
        raise ValueError("arity must be at least 2")
    if not (0 <= i <= p):
        raise ValueError("coface index %d out of range 0..%d" % (i, p))
    F = x.field
    terms = {}
    for m, c in x.terms.items():
        mapped = []
        dead = False
        for (a, b) in m:
            if i == 0:
                if a == 1:
                    dead = True
                    break
                mapped.append((a - 1, b - 1))
            elif i == p:
                if b == p:
                    dead = True
                    break
                mapped.append((a, b))
            else:
                ca = a if a <= i else a - 1
                cb = b if b <= i else b - 1
                if ca == cb:
                    dead = True
                    break
                mapped.append((ca, cb))
        if dead:
            continue
        for mm, z in straighten(tuple(mapped)).items():
            zc = F.mul(F.of(z), c)
            terms[mm] = F.add(terms.get(mm, F.zero), zc)
    return CohClass(p - 1, x.degree, F, terms)


def codegeneracy_pullback(i, x):
    """Pullback along the i-th codegeneracy, H^q(Conf_p) -> H^q(Conf_{p+1})."""
    p = x.arity
    if not (0 <= i <= p):
        raise ValueError("codegeneracy index %d out of range 0..%d" % (i, p))
    F = x.field
    terms = {}
    for m, c in x.terms.items():
        mapped = tuple((a if a <= i else a + 1, b if b <= i else b + 1) for (a, b) in m)
        for mm, z in straighten(mapped).items():
            zc = F.mul(F.of(z), c)
            terms[mm] = F.add(terms.get(mm, F.zero), zc)
    return CohClass(p + 1, x.degree, F, terms)


def sinha_d1(x):
    """Alternating sum of coface pullbacks: H^q(Conf_p) -> H^q(Conf_{p-1})."""
    p = x.arity
    out = zero_class(p - 1, x.degree, x.field)
    for i in range(p + 1):
        term = coface_pullback(i, x)
        out = out + (term if i % 2 == 0 else -term)
    return out


class ParseError(ValueError):
    def __init__(self, message, position):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


_TOKEN = re.compile(r"\s*(?:(?P<sign>[+-])|(?P<int>\d+)|(?P<star>\*)"
                    r"|g\((?P<a>\d+),\s*(?P<b>\d+)\)|g(?P<c>\d)(?P<d>\d))")


def parse_class(text, arity, field):
    """Parse 'g14*g23 + g13*g24' or '-2*g(1,3)*g(2,4) + ...' into a class.

    Grammar: signed terms joined by + / -; each term an optional integer
    coefficient and '*'-joined generators, written gAB for single-digit
    indices or g(A,B) in general.
    """
    pos = 0
    terms = []  # (coeff, factors)
    sign = 1
    expect_term = True
    coeff = None
    factors = None

    def flush(at):
        nonlocal coeff, factors, sign
        if factors is None and coeff is None:
            raise ParseError("empty term", at)
        if factors is None:
            factors = []
        terms.append((sign * (1 if coeff is None else coeff), list(factors)))
        coeff, factors, sign = None, None, 1

    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError("unexpected character %r" % text[pos], pos)
        pos = m.end()
        if m.group("sign"):
            if not expect_term:
                flush(m.start())
            sign = 1 if m.group("sign") == "+" else -1
            expect_term = True
        elif m.group("int"):
            if coeff is not None or factors is not None:
                raise ParseError("misplaced coefficient", m.start())
            coeff = int(m.group("int"))
            expect_term = False
        elif m.group("star"):
            expect_term = False
        else:
            a = int(m.group("a") or m.group("c"))
            b = int(m.group("b") or m.group("d"))
            if not (1 <= a < b):
                raise ParseError("generator indices must satisfy i < j", m.start())
            if b > arity:
                raise ParseError("index %d exceeds arity %d" % (b, arity), m.start())
            if factors is None:
                factors = []
            factors.append((a, b))
            expect_term = False
    if coeff is not None or factors is not None:
        flush(len(text))
    if not terms:
        raise ParseError("empty expression", 0)
    degrees = {len(fs) for _, fs in terms}
    if len(degrees) > 1:
        raise ParseError("mixed degrees %s" % sorted(degrees), 0)
    out = zero_class(arity, degrees.pop(), field)
    for c, fs in terms:
        out = out + normal_form(arity, fs, field, coeff=c)
    return out
