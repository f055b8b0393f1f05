"""Free planar operads on generators mu_k (k >= 2) and the homotopy-
associativity differential.

Trees are nested tuples: a leaf is "*", an internal vertex of arity k
is (k, child_1, ..., child_k).  The generator mu_k has degree k - 2.
The differential is

    d mu_k = sum mu_l o_{p+1} mu_q,   l, q >= 2, 0 <= p <= l-1, l+q = k+1,

extended to trees as a derivation.  In "verbatim" mode every summand
has coefficient +1 (this squares to zero only in characteristic 2); in
"signed" mode the summand mu_l o_{p+1} mu_q carries (-1)^{p + q(l-p-1)}
and the derivation rule carries Koszul signs, which squares to zero
over any field.
"""

LEAF = "*"


def leaf_count(tree):
    if tree == LEAF:
        return 1
    return sum(leaf_count(c) for c in tree[1:])


def tree_degree(tree):
    """Sum of k - 2 over internal vertices."""
    if tree == LEAF:
        return 0
    return (tree[0] - 2) + sum(tree_degree(c) for c in tree[1:])


def generator(k):
    if k < 2:
        raise ValueError("generators start at arity 2")
    return (k,) + (LEAF,) * k


def graft(a, i, b):
    """Replace the i-th leaf (1-based, planar order) of a by b."""
    total = leaf_count(a)
    if not (1 <= i <= total):
        raise ValueError("slot %d out of range 1..%d" % (i, total))

    def go(tree, i):
        if tree == LEAF:
            return b if i == 1 else None, i - 1
        children = []
        for c in tree[1:]:
            lc = leaf_count(c)
            if 1 <= i <= lc:
                newc, _ = go(c, i)
                children.append(newc)
            else:
                children.append(c)
            i -= lc
        return (tree[0],) + tuple(children), i

    out, _ = go(a, i)
    return out


class FreeElement:
    """Formal sum of planar trees with field coefficients."""

    def __init__(self, field, terms=None):
        self.field = field
        self.terms = {}
        for t, c in (terms or {}).items():
            c = field.of(c)
            if c:
                self.terms[t] = c
        degs = {tree_degree(t) for t in self.terms}
        if len(degs) > 1:
            raise ValueError("inhomogeneous element: degrees %s" % sorted(degs))

    @classmethod
    def zero(cls, field):
        return cls(field)

    @classmethod
    def single(cls, field, tree, coeff=1):
        return cls(field, {tree: coeff})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        F = self.field
        terms = dict(self.terms)
        for t, c in other.terms.items():
            v = F.add(terms.get(t, F.zero), c)
            if v:
                terms[t] = v
            elif t in terms:
                del terms[t]
        out = FreeElement(F)
        out.terms = terms
        return out

    def scale(self, c):
        F = self.field
        c = F.of(c)
        return FreeElement(F, {t: F.mul(c, v) for t, v in self.terms.items()} if c else {})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        return isinstance(other, FreeElement) and self.field == other.field \
            and self.terms == other.terms

    def __repr__(self):
        return " + ".join("%s·%s" % (c, t) for t, c in
                          sorted(self.terms.items(), key=lambda kv: repr(kv[0]))) or "0"


def compose_free(a, i, b):
    """Bilinear partial composition a o_i b."""
    if a.field != b.field:
        raise ValueError("mixed fields")
    F = a.field
    out = FreeElement(F)
    for ta, ca in a.terms.items():
        for tb, cb in b.terms.items():
            out = out + FreeElement.single(F, graft(ta, i, tb), F.mul(ca, cb))
    return out


def ainf_differential(k, field, mode="verbatim"):
    """d mu_k as a free element; zero for k = 2."""
    if k < 2:
        raise ValueError("arity must be >= 2")
    F = field
    out = FreeElement(F)
    for l in range(2, k):
        q = k + 1 - l
        if q < 2:
            continue
        for p in range(l):
            tree = graft(generator(l), p + 1, generator(q))
            if mode == "signed":
                sign = (-1) ** (p + q * (l - p - 1))
            elif mode == "verbatim":
                sign = 1
            else:
                raise ValueError("unknown mode %r" % mode)
            out = out + FreeElement.single(F, tree, sign)
    return out


def _d_tree(tree, field, mode):
    """Derivation extension of the generator differential, as a list of
    (coefficient, tree); Koszul signs apply only in signed mode."""
    F = field
    if tree == LEAF:
        return []
    k = tree[0]
    children = tree[1:]
    out = []
    # differentiate the root vertex; re-graft the children afterwards.
    # Trees are oriented by depth-first vertex order, so inserting the
    # new vertex mu_q after the first p children moves it (in signed
    # mode) past their vertices, which costs (-1)^{q * deg(c_1..c_p)}.
    for l in range(2, k):
        q = k + 1 - l
        if q < 2:
            continue
        for p in range(l):
            full = graft(generator(l), p + 1, generator(q))
            for pos in range(k, 0, -1):
                full = graft(full, pos, children[pos - 1])
            if mode == "signed":
                passed = sum(tree_degree(c) for c in children[:p])
                sign = (-1) ** (p + q * (l - p - 1) + q * passed)
            else:
                sign = 1
            out.append((F.of(sign), full))
    # differentiate inside each child, passing over the root and the
    # preceding children
    sign = (-1) ** (k - 2) if mode == "signed" else 1
    for idx, child in enumerate(children):
        for c0, sub in _d_tree(child, F, mode):
            coeff = F.mul(F.of(sign), c0)
            out.append((coeff, (k,) + children[:idx] + (sub,) + children[idx + 1:]))
        if mode == "signed":
            sign *= (-1) ** (tree_degree(child) % 2)
    return out


def free_differential(x, mode="verbatim"):
    """d on a formal sum of trees."""
    F = x.field
    out = FreeElement(F)
    for t, c in x.terms.items():
        for c0, t2 in _d_tree(t, F, mode):
            out = out + FreeElement.single(F, t2, F.mul(c, F.of(c0)))
    return out


def d_squared_report(max_arity, field, mode="verbatim"):
    """Check d(d mu_k) = 0 for all k <= max_arity; returns a report."""
    failures = []
    for k in range(2, max_arity + 1):
        dd = free_differential(ainf_differential(k, field, mode=mode), mode=mode)
        if not dd.is_zero():
            failures.append(k)
    return {"max_arity": max_arity, "field": field.name, "mode": mode,
            "failures": failures, "pass": not failures}
