"""Dense exact linear algebra over a Field: rank, kernels, solving,
subquotients, and induced maps on subquotients.

Everything is plain Gaussian elimination on lists of lists.  The
matrices in this project top out at a few hundred rows, so no sparse or
block machinery is attempted.
"""


class Matrix:
    """Dense matrix; entries are raw field values (see fields.Field)."""

    def __init__(self, field, rows, coerce=True):
        self.field = field
        if coerce:
            rows = [[field.of(x) for x in row] for row in rows]
        else:
            rows = [list(row) for row in rows]
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValueError("ragged rows")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = widths.pop() if rows else 0

    @classmethod
    def zeros(cls, field, nrows, ncols):
        z = field.zero
        m = cls(field, [], coerce=False)
        m.rows = [[z] * ncols for _ in range(nrows)]
        m.nrows, m.ncols = nrows, ncols
        return m

    @classmethod
    def identity(cls, field, n):
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    @classmethod
    def from_columns(cls, field, cols, ambient=None):
        if not cols:
            return cls.zeros(field, ambient or 0, 0)
        return cls(field, [[c[i] for c in cols] for i in range(len(cols[0]))])

    def column(self, j):
        return [row[j] for row in self.rows]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self):
        t = Matrix(self.field, [], coerce=False)
        t.rows = [list(col) for col in zip(*self.rows)] if self.rows else []
        t.nrows, t.ncols = self.ncols, self.nrows
        return t

    def mul_vector(self, v):
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch: %d cols, vector of %d" % (self.ncols, len(v)))
        F = self.field
        out = []
        for row in self.rows:
            acc = F.zero
            for a, x in zip(row, v):
                if a and x:
                    acc = F.add(acc, F.mul(a, x))
            out.append(acc)
        return out

    def mul_matrix(self, other):
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        cols = [self.mul_vector(other.column(j)) for j in range(other.ncols)]
        return Matrix.from_columns(self.field, cols, ambient=self.nrows)

    def is_zero(self):
        return all(not x for row in self.rows for x in row)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.rows == other.rows and self.ncols == other.ncols)

    def __repr__(self):
        return "Matrix(%s, %dx%d)" % (self.field.name, self.nrows, self.ncols)


def _rref(field, rows, ncols):
    """In-place reduced row echelon form; returns pivot column list."""
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = field.inv(rows[r][c])
        if inv != field.one:
            rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                ri, rr = rows[i], rows[r]
                rows[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(ri, rr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(M):
    rows = [list(r) for r in M.rows]
    return len(_rref(M.field, rows, M.ncols))


def kernel_basis(M):
    """Subspace spanned by {v : Mv = 0}."""
    F = M.field
    rows = [list(r) for r in M.rows]
    pivots = _rref(F, rows, M.ncols)
    pivot_set = set(pivots)
    free = [c for c in range(M.ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [F.zero] * M.ncols
        v[fc] = F.one
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(rows[i][fc])
        basis.append(v)
    return Subspace(F, M.ncols, basis)


def solve(M, b):
    """Some x with Mx = b, or None if inconsistent."""
    if len(b) != M.nrows:
        raise ValueError("dimension mismatch: %d rows, rhs of %d" % (M.nrows, len(b)))
    F = M.field
    rows = [list(r) + [F.of(x)] for r, x in zip(M.rows, b)]
    pivots = _rref(F, rows, M.ncols)
    for i in range(len(pivots), M.nrows):
        if rows[i][M.ncols]:
            return None
    x = [F.zero] * M.ncols
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][M.ncols]
    return x


class Eliminator:
    """Incremental Gaussian elimination over a field.

    Maintains a row-echelon set of vectors; add() reports independence,
    and with track=True coordinates of dependent vectors in terms of the
    previously inserted independent ones are available.
    """

    def __init__(self, field, track=False):
        self.field = field
        self.rows = []  # (pivot index, reduced vector, combination)
        self.track = track
        self.count = 0  # independent vectors inserted

    def _reduce(self, v, comb):
        F = self.field
        v = list(v)
        for pivot, row, rcomb in self.rows:
            c = v[pivot]
            if c:
                for t in range(len(v)):
                    if row[t]:
                        v[t] = F.sub(v[t], F.mul(c, row[t]))
                if comb is not None:
                    for t in range(len(rcomb)):
                        if rcomb[t]:
                            comb[t] = F.sub(comb[t], F.mul(c, rcomb[t]))
        return v, comb

    def add(self, v):
        """Insert v; returns True when v was independent of the span."""
        F = self.field
        comb = None
        if self.track:
            comb = [F.zero] * (self.count + 1)
            comb[self.count] = F.one
        v, comb = self._reduce(v, comb)
        pivot = next((i for i, c in enumerate(v) if c), None)
        if pivot is None:
            return False
        inv = F.inv(v[pivot])
        if inv != F.one:
            v = [F.mul(inv, c) for c in v]
            if comb is not None:
                comb = [F.mul(inv, c) for c in comb]
        if self.track:
            for _, row, rcomb in self.rows:
                rcomb.append(F.zero)
            comb = comb + []
        self.rows.append((pivot, v, comb))
        self.count += 1
        return True

    @property
    def rank(self):
        return len(self.rows)

    def coords_in_span(self, v):
        """Coordinates of v in the inserted independent vectors, or None."""
        if not self.track:
            raise ValueError("eliminator built without tracking")
        F = self.field
        comb = [F.zero] * self.count
        v, comb = self._reduce(list(v), comb)
        if any(v):
            return None
        return [F.neg(c) for c in comb]


class Subspace:
    """Span of independent column vectors inside an ambient k^n."""

    def __init__(self, field, ambient, basis, check=True):
        self.field = field
        self.ambient = ambient
        self.basis = [[field.of(x) for x in v] for v in basis]
        for v in self.basis:
            if len(v) != ambient:
                raise ValueError("basis vector of wrong length")
        if check and self.basis:
            if rank(self.matrix()) != len(self.basis):
                raise ValueError("basis vectors are dependent")

    @property
    def dim(self):
        return len(self.basis)

    def matrix(self):
        return Matrix.from_columns(self.field, self.basis, ambient=self.ambient)

    def coords_of(self, v):
        """Coordinates of v in this basis, or None if v is outside."""
        return solve(self.matrix(), v)

    def contains(self, v):
        return self.coords_of(v) is not None

    def contains_subspace(self, other):
        return all(self.contains(v) for v in other.basis)


def subquotient(Z, B):
    """Dimension and representatives of Z/B; B must sit inside Z."""
    if Z.field != B.field or Z.ambient != B.ambient:
        raise ValueError("incompatible subspaces")
    zspan = Eliminator(Z.field)
    for v in Z.basis:
        zspan.add(v)
    zrank = zspan.rank
    for v in B.basis:
        if zspan.add(v):
            raise ValueError("quotient subspace not contained in the ambient one")
    assert zspan.rank == zrank
    elim = Eliminator(Z.field)
    for v in B.basis:
        elim.add(v)
    reps = [v for v in Z.basis if elim.add(v)]
    assert len(reps) == Z.dim - B.dim
    return len(reps), reps


def induced_map(f, source_z, source_b, target_z, target_b):
    """Matrix of the map induced by f on (source Z/B) -> (target Z/B).

    Checks that f carries Z into Z and B into B; a violation is reported
    with the witness vector.
    """
    F = f.field
    belim = Eliminator(F)
    for v in target_b.basis:
        belim.add(v)
    brank = belim.rank
    for v in source_b.basis:
        fv = f.mul_vector(v)
        if belim.add(fv):
            raise ValueError("not well defined: image of %r leaves the boundary subspace" % (v,))
    assert belim.rank == brank
    _, src_reps = subquotient(source_z, source_b)
    _, tgt_reps = subquotient(target_z, target_b)
    # Solve against [B-basis | representatives] and read off the rep part.
    full = Eliminator(F, track=True)
    for v in target_b.basis + tgt_reps:
        full.add(v)
    cols = []
    for v in src_reps:
        fv = f.mul_vector(v)
        coords = full.coords_in_span(fv)
        if coords is None:
            raise ValueError("not well defined: image of %r leaves the cycle subspace" % (v,))
        cols.append(coords[target_b.dim:])
    return Matrix.from_columns(F, cols, ambient=len(tgt_reps))
