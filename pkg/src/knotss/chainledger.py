"""Symbolic ledger for bounding-chain bookkeeping on the graph-labeled
tower of Thom spaces.

A chain is a rational combination of terms f(w), where f is an affine
map expression R^4 x (parameter box) -> R^{2n} and w is a weight built
from two sphere factors, interval-at-infinity factors bound to
s-parameters, and unit-interval factors bound to t-parameters.  The
boundary D has a restriction part (s := 0; t := 1 minus t := 0, with
Koszul signs read off the weight order) and a Cech part removing one
edge of the label graph at a time.  The merge maps delta_i relabel
terms; terms whose image maps collapse to the basepoint are removed
either syntactically (loops, double edges, extreme incidence, equal or
reversed first coordinates inside a piece) or by table lookup against
zero facts that are verified separately by geometric sampling.
"""

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .partgraph import PGraph, Partition, delta_graph, discrete_partition

# ---------------------------------------------------------------------------
# polynomials over Q in named parameters, multilinear (affine in each name)


class Poly:
    """Multilinear polynomial; terms maps sorted name tuples to Fraction."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[tuple(mono)] = c

    @classmethod
    def const(cls, c):
        return cls({(): c})

    @classmethod
    def var(cls, name):
        return cls({(name,): 1})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            elif m in out:
                del out[m]
        p = Poly()
        p.terms = out
        return p

    def __neg__(self):
        p = Poly()
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if set(m1) & set(m2):
                    raise ValueError("product is not affine in %r" % (set(m1) & set(m2),))
                m = tuple(sorted(m1 + m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                elif m in out:
                    del out[m]
        p = Poly()
        p.terms = out
        return p

    def subst(self, name, value):
        value = Fraction(value)
        out = Poly()
        for m, c in self.terms.items():
            if name in m:
                rest = tuple(x for x in m if x != name)
                c = c * value
                if not c:
                    continue
                out = out + Poly({rest: c})
            else:
                out = out + Poly({m: c})
        return out

    def rename(self, mapping):
        out = {}
        for m, c in self.terms.items():
            m2 = tuple(sorted(mapping.get(x, x) for x in m))
            if len(set(m2)) != len(m2):
                raise ValueError("renaming collides")
            out[m2] = out.get(m2, 0) + c
        return Poly(out)

    def names(self):
        return {x for m in self.terms for x in m}

    def evaluate(self, values):
        acc = Fraction(0)
        for m, c in self.terms.items():
            for x in m:
                c = c * values[x]
            acc += c
        return acc

    def key(self):
        return tuple(sorted((m, c) for m, c in self.terms.items()))

    def text(self):
        if not self.terms:
            return "0"
        bits = []
        for m, c in sorted(self.terms.items()):
            body = "*".join((str(c),) + m) if m else str(c)
            bits.append(body)
        return "+".join(bits).replace("+-", "-")

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __repr__(self):
        return "Poly(%s)" % self.text()


_Z = Poly()
_ONE = Poly.const(1)

# ---------------------------------------------------------------------------
# map expressions R^4 x params -> R^{2n}


class MapExpr:
    """n components, each c_x*x + c_y*y + q_u*u + q_v*v with Poly coeffs."""

    __slots__ = ("comps",)

    BASIS = ("x", "y", "u", "v")

    def __init__(self, comps):
        self.comps = tuple(tuple(comp) for comp in comps)
        for comp in self.comps:
            if len(comp) != 4:
                raise ValueError("component needs (c_x, c_y, q_u, q_v)")

    @property
    def n(self):
        return len(self.comps)

    def __add__(self, other):
        return MapExpr([[a + b for a, b in zip(c1, c2)]
                        for c1, c2 in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return MapExpr([[a - b for a, b in zip(c1, c2)]
                        for c1, c2 in zip(self.comps, other.comps)])

    def scale(self, p):
        if not isinstance(p, Poly):
            p = Poly.const(p)
        return MapExpr([[p * a for a in comp] for comp in self.comps])

    def subst(self, name, value):
        return MapExpr([[a.subst(name, value) for a in comp] for comp in self.comps])

    def rename(self, mapping):
        return MapExpr([[a.rename(mapping) for a in comp] for comp in self.comps])

    def names(self):
        out = set()
        for comp in self.comps:
            for a in comp:
                out |= a.names()
        return out

    def swap_xy(self):
        return MapExpr([[c[1], c[0], c[2], c[3]] for c in self.comps])

    def evaluate(self, x, y, values=None):
        """Exact image point list; x, y are pairs of rationals."""
        values = values or {}
        out = []
        for cx, cy, qu, qv in self.comps:
            a, b, u0, v0 = (p.evaluate(values) for p in (cx, cy, qu, qv))
            out.append((a * Fraction(x[0]) + b * Fraction(y[0]) + u0,
                        a * Fraction(x[1]) + b * Fraction(y[1]) + v0))
        return out

    def key(self):
        return tuple(tuple(a.key() for a in comp) for comp in self.comps)

    def text(self):
        def comp_text(comp):
            bits = []
            for p, base in zip(comp, self.BASIS):
                if p.is_zero():
                    continue
                if p == _ONE:
                    bits.append(base)
                else:
                    bits.append("(%s)%s" % (p.text(), base))
            return "+".join(bits) or "0"
        return ";".join(comp_text(c) for c in self.comps)

    def __eq__(self, other):
        return isinstance(other, MapExpr) and self.comps == other.comps

    def __repr__(self):
        return "MapExpr(%s)" % self.text()


def const_map(n, which):
    """The map all of whose components are x (or y)."""
    comps = []
    for _ in range(n):
        comp = [_Z, _Z, _Z, _Z]
        comp[0 if which == "x" else 1] = _ONE
        comps.append(comp)
    return MapExpr(comps)


# ---------------------------------------------------------------------------
# graph helpers: numbers 1..n versus piece positions of a partition


def piece_position(P, number):
    """Position (0-based over all pieces) of the piece containing number."""
    for pos, piece in enumerate(P.pieces()):
        if number in piece:
            return pos
    raise ValueError("number %d outside the partition" % number)


def _components(P, edges):
    """Union-find components over internal piece positions 1..#P-2."""
    m = P.num_internal
    parent = list(range(m + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for (a, b) in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return find


def graph_connected(P, edges, pos_a, pos_b):
    find = _components(P, edges)
    return find(pos_a) == find(pos_b)


def f_graph(G, n=None):
    """The map whose i-th component is x when piece(i) connects to
    piece(1) in G, and y otherwise."""
    P = G.partition
    n = n or P.n
    pos1 = piece_position(P, 1)
    comps = []
    for i in range(1, n + 1):
        pos = piece_position(P, i)
        which = 0 if graph_connected(P, G.edges, pos, pos1) else 1
        comp = [_Z, _Z, _Z, _Z]
        comp[which] = _ONE
        comps.append(comp)
    return MapExpr(comps)


def edge_signs(G, e):
    """A_e multipliers: +1 on the side of the smaller endpoint of the
    bridge e after its removal, -1 on the other side, 0 elsewhere."""
    P = G.partition
    a, b = e
    rest = tuple(x for x in G.edges if x != e)
    if len(rest) == len(G.edges):
        raise ValueError("edge %r not in graph" % (e,))
    find = _components(P, rest)
    ra, rb = find(a), find(b)
    if ra == rb:
        raise ValueError("edge %r is not a bridge" % (e,))
    out = []
    for i in range(1, P.n + 1):
        pos = piece_position(P, i)
        if pos in (0, P.num_pieces - 1):
            out.append(0)
            continue
        r = find(pos)
        out.append(1 if r == ra else (-1 if r == rb else 0))
    return out


def contraction(expr, G, e, s_name, direction=1):
    """expr + A_e(s) in the v direction; direction=-1 reverses it."""
    signs = edge_signs(G, e)
    s = Poly.var(s_name)
    comps = []
    for comp, sg in zip(expr.comps, signs):
        comp = list(comp)
        if sg:
            comp[3] = comp[3] + s * Poly.const(sg * direction)
        comps.append(comp)
    return MapExpr(comps)


def ee_contraction(expr, G, e1, e2, s1, s2, d1=1, d2=1):
    return contraction(contraction(expr, G, e1, s1, d1), G, e2, s2, d2)


def straight(f, g, t_name):
    """(1-t) f + t g."""
    t = Poly.var(t_name)
    if t_name in f.names() or t_name in g.names():
        raise ValueError("homotopy parameter %r already bound" % t_name)
    return f.scale(_ONE - t) + g.scale(t)


def i_contraction(expr, i, s_name, eps=1):
    """+eps*s*u on component i, -eps*s*u on component i+1 (1-based)."""
    if not (1 <= i <= expr.n - 1):
        raise ValueError("component index %d out of range" % i)
    s = Poly.var(s_name)
    comps = [list(c) for c in expr.comps]
    comps[i - 1][2] = comps[i - 1][2] + s * Poly.const(eps)
    comps[i][2] = comps[i][2] - s * Poly.const(eps)
    return MapExpr(comps)


# ---------------------------------------------------------------------------
# weights and ledger terms


@dataclass(frozen=True)
class WeightSpec:
    """Two sphere factors, then w_infty factors bound to s-parameters,
    then w_I factors bound to t-parameters, in this order."""
    s_names: tuple
    t_names: tuple

    @property
    def degree(self):
        return 4 + len(self.s_names) + len(self.t_names)


def make_weight(factors):
    """Normalize a factor word [('s', name) | ('t', name), ...] to the
    canonical s-block/t-block order; returns (WeightSpec, Koszul sign)."""
    s_names, t_names, sign = [], [], 1
    pending_t = 0
    for kind, name in factors:
        if kind == "s":
            s_names.append(name)
            if pending_t % 2:
                sign = -sign
        elif kind == "t":
            t_names.append(name)
            pending_t += 1
        else:
            raise ValueError("unknown factor kind %r" % kind)
    return WeightSpec(tuple(s_names), tuple(t_names)), sign


class Term:
    __slots__ = ("expr", "weight", "label")

    def __init__(self, expr, weight, label):
        self.expr = expr
        self.weight = weight
        self.label = label

    def key(self):
        return (self.expr.key(), self.weight, self.label)


def _perm_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def canon_term(coeff, expr, weight, label):
    """Canonical representative: bound parameters renamed positionally,
    factor transpositions and the x/y swap of the sphere block resolved
    by picking the least key (transpositions of odd factors carry their
    permutation sign; the sphere swap is sign-free in even dimension)."""
    free = expr.names()
    for nm in free:
        if nm not in weight.s_names and nm not in weight.t_names:
            raise ValueError("parameter %r not bound by the weight" % nm)
    k, l = len(weight.s_names), len(weight.t_names)
    best = None
    for ps in permutations(range(k)):
        for pt in permutations(range(l)):
            mapping = {}
            for pos, old in zip(ps, weight.s_names):
                mapping[old] = "s%d" % (pos + 1)
            for pos, old in zip(pt, weight.t_names):
                mapping[old] = "t%d" % (pos + 1)
            sign = _perm_sign(ps) * _perm_sign(pt)
            base = expr.rename(mapping)
            for cand, csign in ((base, sign), (base.swap_xy(), sign)):
                key = cand.key()
                if best is None or key < best[0]:
                    best = (key, cand, csign)
    w = WeightSpec(tuple("s%d" % (i + 1) for i in range(k)),
                   tuple("t%d" % (i + 1) for i in range(l)))
    return coeff * best[2], Term(best[1], w, label)


class Chain:
    """Rational combination of canonical ledger terms."""

    def __init__(self):
        self.terms = {}  # key -> [coeff, Term]

    def add(self, coeff, expr, weight, label):
        coeff = Fraction(coeff)
        if not coeff:
            return self
        coeff, term = canon_term(coeff, expr, weight, label)
        key = term.key()
        if key in self.terms:
            self.terms[key][0] += coeff
            if not self.terms[key][0]:
                del self.terms[key]
        else:
            self.terms[key] = [coeff, term]
        return self

    def add_term(self, coeff, term):
        return self.add(coeff, term.expr, term.weight, term.label)

    def __add__(self, other):
        out = Chain()
        for c, t in self.items():
            out.add_term(c, t)
        for c, t in other.items():
            out.add_term(c, t)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        out = Chain()
        for coeff, t in self.items():
            out.add_term(coeff * Fraction(c), t)
        return out

    def items(self):
        return [(c, t) for c, t in self.terms.values()]

    def is_zero(self):
        return not self.terms

    def reduce(self, char):
        """Drop terms whose coefficient vanishes modulo char (char=0
        keeps everything); coefficients stay rational."""
        out = Chain()
        for c, t in self.items():
            if char:
                if c.denominator % char == 0:
                    raise ValueError("coefficient %s not defined mod %d" % (c, char))
                if c.numerator % char == 0:
                    continue
            out.add_term(c, t)
        return out

    def equal_mod(self, other, char):
        return (self - other).reduce(char).is_zero()

    def diff_report(self, other, char):
        d = (self - other).reduce(char)
        return [(str(c), t.expr.text(), str(t.label)) for c, t in d.items()]

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return "Chain(%d terms)" % len(self.terms)


def single(coeff, expr, factors, label):
    """Convenience: one-term chain with factor-order normalization."""
    weight, sign = make_weight(factors)
    return Chain().add(Fraction(coeff) * sign, expr, weight, label)


# ---------------------------------------------------------------------------
# boundary and merge operators


def boundary_D(chain, convention, tr=1, drop_degenerate=True):
    """D = d + partial (char2) or d + (-1)^degree partial (char3).

    The restriction part sets each s-parameter to 0 and takes the
    difference of t := 1 and t := 0, signed by the factor position with
    the degree-4 sphere block first.  The Cech part removes one edge at
    a time; results with fewer than tr edges are truncated away.  A
    restricted term whose expression no longer depends on one of its
    remaining t-parameters is a degenerate simplex and is dropped.
    """
    if convention not in ("char2", "char3"):
        raise ValueError("unknown convention %r" % convention)
    out = Chain()
    for coeff, term in chain.items():
        w = term.weight
        k = len(w.s_names)
        # restriction part
        for j, s in enumerate(w.s_names):
            sign = -1 if j % 2 else 1
            expr = term.expr.subst(s, 0)
            w2 = WeightSpec(w.s_names[:j] + w.s_names[j + 1:], w.t_names)
            _emit(out, coeff * sign, expr, w2, term.label, drop_degenerate)
        for j, t in enumerate(w.t_names):
            sign = -1 if (k + j) % 2 else 1
            w2 = WeightSpec(w.s_names, w.t_names[:j] + w.t_names[j + 1:])
            _emit(out, coeff * sign, term.expr.subst(t, 1), w2, term.label,
                  drop_degenerate)
            _emit(out, -coeff * sign, term.expr.subst(t, 0), w2, term.label,
                  drop_degenerate)
        # Cech part
        psign = 1 if convention == "char2" else (-1) ** w.degree
        edges = term.label.edges
        if len(edges) - 1 >= tr:
            for pos in range(len(edges)):
                smaller = PGraph(term.label.partition,
                                 edges[:pos] + edges[pos + 1:])
                esign = 1 if pos % 2 == 0 else -1
                out.add(coeff * psign * esign, term.expr, w, smaller)
    return out


def _emit(out, coeff, expr, weight, label, drop_degenerate):
    if drop_degenerate:
        free = expr.names()
        for t in weight.t_names:
            if t not in free:
                return
    out.add(coeff, expr, weight, label)


def first_coord_collapse(expr, P):
    """True when two components in one internal piece of P have first
    coordinates in weakly reversed order identically on the whole
    domain (s >= 0, t in [0,1]); such a term maps to the basepoint."""
    pieces = P.pieces()
    for pos in range(1, P.num_pieces - 1):
        members = [i for i in pieces[pos] if 1 <= i <= P.n]
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                i, j = members[a], members[b]
                ci, cj = expr.comps[i - 1], expr.comps[j - 1]
                dx, dy, du = cj[0] - ci[0], cj[1] - ci[1], cj[2] - ci[2]
                if dx.is_zero() and dy.is_zero() and _nonpositive_on_box(du):
                    return True
    return False


def _nonpositive_on_box(poly):
    """poly <= 0 for every s >= 0, t in [0,1]?  Exact for multilinear
    polynomials: evaluate all t-corners; the s-part must then have no
    positive coefficient."""
    tnames = sorted(n for n in poly.names() if n.startswith("t"))
    corners = [poly]
    for t in tnames:
        corners = [q.subst(t, v) for q in corners for v in (0, 1)]
    for q in corners:
        for m, c in q.terms.items():
            if c > 0:
                return False
    return True


class ZeroFacts:
    """Checked-in table of geometrically verified basepoint collapses."""

    def __init__(self, records=None):
        self.table = {}
        for rec in records or []:
            self.table[(rec["expr"], rec["label"])] = rec

    @classmethod
    def load(cls, path=None):
        path = path or os.path.join(os.path.dirname(__file__), "data",
                                    "zerofacts.json")
        with open(path) as fh:
            return cls(json.load(fh))

    def match(self, term):
        return self.table.get((term.expr.text(), str(term.label)))


def apply_facts(chain, facts=None):
    """Drop terms that collapse to the basepoint: first syntactically
    (first-coordinate order inside a piece), then by the fact table.
    Returns (chain, report)."""
    out = Chain()
    report = {"syntactic": [], "facts": [], "kept": 0}
    for coeff, term in chain.items():
        if first_coord_collapse(term.expr, term.label.partition):
            report["syntactic"].append((term.expr.text(), str(term.label)))
            continue
        if facts is not None:
            rec = facts.match(term)
            if rec is not None:
                report["facts"].append(rec.get("citation", ""))
                continue
        out.add_term(coeff, term)
        report["kept"] += 1
    return out, report


def apply_delta(chain, i=None, facts=None, use_syntactic=True):
    """Merge relabeling.  With i given: the single map delta_i (edge
    permutation sign only); otherwise the full signed sum over all
    merge positions.  Loops, double edges, and extreme incidences kill
    terms inside partgraph.delta_graph; surviving terms then pass the
    collapse filters.  Returns (chain, report)."""
    out = Chain()
    report = {"killed_shape": 0, "syntactic": [], "facts": [], "survivors": []}
    for coeff, term in chain.items():
        P = term.label.partition
        positions = [i] if i is not None else range(P.num_pieces - 1)
        for pos in positions:
            hit = delta_graph(pos, term.label)
            if hit is None:
                report["killed_shape"] += 1
                continue
            image, sign = hit
            c = coeff * sign
            if i is None and pos % 2:
                c = -c
            if use_syntactic and first_coord_collapse(term.expr, image.partition):
                report["syntactic"].append((term.expr.text(), str(image)))
                continue
            if facts is not None:
                rec = facts.match(Term(term.expr, term.weight, image))
                if rec is not None:
                    report["facts"].append(rec.get("citation", ""))
                    continue
            report["survivors"].append((term.expr.text(), str(image)))
            out.add(c, term.expr, term.weight, image)
    return out, report
