"""Exact linear algebra over Z and Z/2.

Smith normal form with unimodular transforms, integer lattice solving, and
finitely generated abelian groups presented as subquotients of Z^g with
explicit generator lifts.  Everything runs on Python's arbitrary-precision
integers; no floating point is used anywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass


class LinAlgError(ValueError):
    """Malformed matrix input or an inconsistent presentation."""


class ChainConditionError(LinAlgError):
    """The composite d_out . d_in is nonzero, so the input is not a complex."""


class IntMatrix:
    """Dense matrix of exact integers, shape fixed at construction.

    Vectors are columns.  Instances are treated as immutable; all operations
    return fresh matrices.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows, cols, data):
        if rows < 0 or cols < 0:
            raise LinAlgError("matrix dimensions must be nonnegative")
        data = tuple(tuple(row) for row in data)
        if len(data) != rows or any(len(row) != cols for row in data):
            raise LinAlgError(
                "entry count does not match %d x %d" % (rows, cols))
        for row in data:
            for x in row:
                if not isinstance(x, int):
                    raise LinAlgError("entries must be exact integers")
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def from_rows(cls, rows):
        rows = [tuple(r) for r in rows]
        if not rows:
            raise LinAlgError("from_rows needs at least one row; "
                              "use IntMatrix(r, c, []) for empty matrices")
        return cls(len(rows), len(rows[0]), rows)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [[1 if i == j else 0 for j in range(n)]
                          for i in range(n)])

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, [[0] * cols for _ in range(rows)])

    @classmethod
    def column_vector(cls, entries):
        entries = list(entries)
        return cls(len(entries), 1, [[x] for x in entries])

    @classmethod
    def diagonal(cls, entries):
        entries = list(entries)
        n = len(entries)
        return cls(n, n, [[entries[i] if i == j else 0 for j in range(n)]
                          for i in range(n)])

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise LinAlgError("shape mismatch in product: %dx%d @ %dx%d"
                              % (self.rows, self.cols, other.rows, other.cols))
        odata = other.data
        out = []
        for row in self.data:
            acc = [0] * other.cols
            for k, a in enumerate(row):
                if a:
                    orow = odata[k]
                    for j, b in enumerate(orow):
                        if b:
                            acc[j] += a * b
            out.append(acc)
        return IntMatrix(self.rows, other.cols, out)

    def mul_vector(self, vec):
        vec = list(vec)
        if len(vec) != self.cols:
            raise LinAlgError("vector length does not match column count")
        out = []
        for row in self.data:
            s = 0
            for a, b in zip(row, vec):
                if a and b:
                    s += a * b
            out.append(s)
        return out

    def scale(self, c):
        return IntMatrix(self.rows, self.cols,
                         [[c * x for x in row] for row in self.data])

    def __add__(self, other):
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols,
                         [[a + b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.data, other.data)])

    def __sub__(self, other):
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols,
                         [[a - b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.data, other.data)])

    def __neg__(self):
        return self.scale(-1)

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LinAlgError("shape mismatch")

    def transpose(self):
        return IntMatrix(self.cols, self.rows,
                         [[self.data[i][j] for i in range(self.rows)]
                          for j in range(self.cols)])

    def mod(self, m):
        return IntMatrix(self.rows, self.cols,
                         [[x % m for x in row] for row in self.data])

    def column(self, j):
        return tuple(row[j] for row in self.data)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def take_columns(self, indices):
        return IntMatrix(self.rows, len(indices),
                         [[row[j] for j in indices] for row in self.data])

    def top_rows(self, k):
        return IntMatrix(k, self.cols, self.data[:k])

    @staticmethod
    def hstack(*mats):
        mats = [m for m in mats if m is not None]
        if not mats:
            raise LinAlgError("hstack of nothing")
        rows = mats[0].rows
        if any(m.rows != rows for m in mats):
            raise LinAlgError("hstack row mismatch")
        data = [sum((list(m.data[i]) for m in mats), []) for i in range(rows)]
        return IntMatrix(rows, sum(m.cols for m in mats), data)

    @staticmethod
    def vstack(*mats):
        mats = [m for m in mats if m is not None]
        if not mats:
            raise LinAlgError("vstack of nothing")
        cols = mats[0].cols
        if any(m.cols != cols for m in mats):
            raise LinAlgError("vstack column mismatch")
        data = []
        for m in mats:
            data.extend(m.data)
        return IntMatrix(sum(m.rows for m in mats), cols, data)

    def is_zero(self):
        return all(all(x == 0 for x in row) for row in self.data)

    def __eq__(self, other):
        return (isinstance(other, IntMatrix)
                and (self.rows, self.cols) == (other.rows, other.cols)
                and self.data == other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        return "IntMatrix(%d, %d, %r)" % (self.rows, self.cols,
                                          [list(r) for r in self.data])


def _identity_rows(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class SNFDecomposition:
    """U . M . V = D with U, V unimodular and D = diag(d1 | d2 | ...) >= 0.

    Uinv and Vinv are the exact inverses of U and V (handy for generator
    extraction; their presence also certifies det U = det V = +-1).
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    Uinv: IntMatrix
    Vinv: IntMatrix

    @property
    def diag(self):
        n = min(self.D.rows, self.D.cols)
        return tuple(self.D.data[i][i] for i in range(n))

    @property
    def rank(self):
        return sum(1 for d in self.diag if d)


def smith_normal_form(M):
    """Smith normal form of an integer matrix.

    Deterministic: the pivot is the entry of smallest nonzero absolute
    value, ties broken by lowest row then column index.
    """
    m, n = M.rows, M.cols
    D = [list(row) for row in M.data]
    U = _identity_rows(m)
    Ui = _identity_rows(m)
    V = _identity_rows(n)
    Vi = _identity_rows(n)

    def row_swap(i, j):
        if i != j:
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]
            for r in Ui:
                r[i], r[j] = r[j], r[i]

    def row_addmul(i, j, c):
        # row_i += c * row_j on D and U; Ui picks up the inverse column op
        di, dj = D[i], D[j]
        for t in range(n):
            if dj[t]:
                di[t] += c * dj[t]
        ui, uj = U[i], U[j]
        for t in range(m):
            if uj[t]:
                ui[t] += c * uj[t]
        for r in Ui:
            if r[i]:
                r[j] -= c * r[i]

    def row_negate(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]
        for r in Ui:
            r[i] = -r[i]

    def col_swap(i, j):
        if i != j:
            for r in D:
                r[i], r[j] = r[j], r[i]
            for r in V:
                r[i], r[j] = r[j], r[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def col_addmul(i, j, c):
        # col_i += c * col_j on D and V; Vi picks up the inverse row op
        for r in D:
            if r[j]:
                r[i] += c * r[j]
        for r in V:
            if r[j]:
                r[i] += c * r[j]
        vi, vj = Vi[i], Vi[j]
        for t in range(n):
            if vi[t]:
                vj[t] -= c * vi[t]

    def clear(t):
        # Reduce column t and row t against the pivot until both vanish
        # beyond (t, t); the pivot may shrink along the way.
        if D[t][t] < 0:
            row_negate(t)
        while True:
            restart = False
            i = t + 1
            while i < m:
                a = D[i][t]
                if a:
                    q = a // D[t][t]
                    if q:
                        row_addmul(i, t, -q)
                    if D[i][t]:
                        row_swap(t, i)
                        if D[t][t] < 0:
                            row_negate(t)
                        restart = True
                        i = t + 1
                        continue
                i += 1
            j = t + 1
            while j < n:
                a = D[t][j]
                if a:
                    q = a // D[t][t]
                    if q:
                        col_addmul(j, t, -q)
                    if D[t][j]:
                        col_swap(t, j)
                        if D[t][t] < 0:
                            row_negate(t)
                        restart = True
                        j = t + 1
                        continue
                j += 1
            if not restart:
                return

    t = 0
    limit = min(m, n)
    while t < limit:
        best = None
        piv = None
        for i in range(t, m):
            di = D[i]
            for j in range(t, n):
                a = di[j]
                if a:
                    a = -a if a < 0 else a
                    if best is None or a < best:
                        best = a
                        piv = (i, j)
                        if a == 1:
                            break
            if best == 1:
                break
        if piv is None:
            break
        row_swap(t, piv[0])
        col_swap(t, piv[1])
        clear(t)
        while True:
            d = D[t][t]
            if d == 1:
                break
            bad = None
            for i in range(t + 1, m):
                di = D[i]
                for j in range(t + 1, n):
                    if di[j] % d:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_addmul(t, bad, 1)
            clear(t)
        t += 1

    dec = SNFDecomposition(
        U=IntMatrix(m, m, U), D=IntMatrix(m, n, D), V=IntMatrix(n, n, V),
        Uinv=IntMatrix(m, m, Ui), Vinv=IntMatrix(n, n, Vi))
    return dec


class LinearSolver:
    """Solve M x = b over Z, reusing one Smith decomposition for many b."""

    def __init__(self, M):
        self.M = M
        self.snf = smith_normal_form(M)
        self._diag = self.snf.diag

    def solve_vector(self, b):
        """An integer solution of M x = b, or None if there is none."""
        m, n = self.M.rows, self.M.cols
        if len(b) != m:
            raise LinAlgError("right-hand side has wrong length")
        c = self.snf.U.mul_vector(b)
        z = [0] * n
        for i in range(m):
            d = self._diag[i] if i < len(self._diag) else 0
            if d:
                q, r = divmod(c[i], d)
                if r:
                    return None
                z[i] = q
            elif c[i]:
                return None
        return self.snf.V.mul_vector(z)

    def solve_matrix(self, B):
        """X with M X = B, or None if some column is unsolvable."""
        cols = []
        for j in range(B.cols):
            x = self.solve_vector(B.column(j))
            if x is None:
                return None
            cols.append(x)
        return IntMatrix(self.M.cols, len(cols),
                         [[col[i] for col in cols]
                          for i in range(self.M.cols)])

    def contains(self, B):
        """Whether every column of B lies in the column lattice of M."""
        return self.solve_matrix(B) is not None


def kernel_basis(M):
    """Columns form a basis of the integer kernel {x : M x = 0}."""
    snf = smith_normal_form(M)
    r = snf.rank
    return snf.V.take_columns(list(range(r, M.cols)))


def lattices_equal(A, B):
    """Whether the column lattices of A and B coincide (same ambient)."""
    if A.rows != B.rows:
        raise LinAlgError("lattices live in different ambients")
    return LinearSolver(A).contains(B) and LinearSolver(B).contains(A)


class FGAbelianGroup:
    """Isomorphism class Z^free_rank + sum Z/d_i, d_i >= 2, d_i | d_{i+1}.

    Optionally carries chosen generator lifts in an ambient basis (torsion
    generators first, then free ones).  Equality and hashing look only at
    the isomorphism data: generator choices are explicitly non-canonical.
    """

    __slots__ = ("free_rank", "torsion", "generators")

    def __init__(self, free_rank, torsion=(), generators=None):
        torsion = tuple(int(d) for d in torsion)
        if free_rank < 0:
            raise LinAlgError("free rank must be nonnegative")
        for a, b in zip(torsion, torsion[1:]):
            if b % a:
                raise LinAlgError("invariant factors must form a "
                                  "divisibility chain")
        if any(d < 2 for d in torsion):
            raise LinAlgError("invariant factors must be >= 2")
        self.free_rank = free_rank
        self.torsion = torsion
        self.generators = (None if generators is None
                           else tuple(tuple(g) for g in generators))

    @property
    def ngens(self):
        return self.free_rank + len(self.torsion)

    @property
    def orders(self):
        """Per-generator order, 0 meaning infinite; torsion first."""
        return self.torsion + (0,) * self.free_rank

    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def f2_dim(self):
        """Dimension as a Z/2 vector space; only for elementary groups."""
        if self.free_rank or any(d != 2 for d in self.torsion):
            raise LinAlgError("%s is not an elementary abelian 2-group"
                              % self)
        return len(self.torsion)

    def __eq__(self, other):
        return (isinstance(other, FGAbelianGroup)
                and self.free_rank == other.free_rank
                and self.torsion == other.torsion)

    def __hash__(self):
        return hash((self.free_rank, self.torsion))

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append("Z^%d" % self.free_rank)
        i = 0
        tor = self.torsion
        while i < len(tor):
            j = i
            while j < len(tor) and tor[j] == tor[i]:
                j += 1
            if j - i == 1:
                parts.append("Z/%d" % tor[i])
            else:
                parts.append("(Z/%d)^%d" % (tor[i], j - i))
            i = j
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return "FGAbelianGroup(%d, %r)" % (self.free_rank, list(self.torsion))

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["free_rank"], obj["torsion"])


class PresentedGroup(FGAbelianGroup):
    """A subquotient (ker d_out mod relations) / (im d_in + relations) of
    Z^ambient_rank, remembering enough structure to reduce arbitrary cycles
    to canonical generator coordinates and to lift coordinates back."""

    __slots__ = ("ambient_rank", "_orders_all", "_kept", "_ksolver", "_uy",
                 "d_out", "d_in", "rels_ambient", "rels_target", "kmat")

    def reduce(self, vec):
        """Coordinates of an ambient cycle in the chosen generators.

        Raises if vec is not a cycle of the presentation.  Torsion
        coordinates are returned in [0, d).
        """
        y = self._ksolver.solve_vector(vec)
        if y is None:
            raise LinAlgError("vector is not a cycle of this presentation")
        u = self._uy.mul_vector(y)
        out = []
        for i in self._kept:
            d = self._orders_all[i]
            out.append(u[i] % d if d else u[i])
        return tuple(out)

    def lift(self, coords):
        """An ambient cycle representing the given generator coordinates."""
        coords = list(coords)
        if len(coords) != self.ngens:
            raise LinAlgError("coordinate vector has wrong length")
        vec = [0] * self.ambient_rank
        for c, gen in zip(coords, self.generators):
            if c:
                for i, g in enumerate(gen):
                    vec[i] += c * g
        return tuple(vec)

    def is_zero_class(self, vec):
        return all(c == 0 for c in self.reduce(vec))

    def relation_columns(self):
        """Columns spanning the relation lattice of the coordinate space,
        i.e. diag(orders) restricted to the torsion generators."""
        cols = []
        for i, d in enumerate(self.orders):
            if d:
                col = [0] * self.ngens
                col[i] = d
                cols.append(col)
        return IntMatrix(self.ngens, len(cols),
                         [[col[i] for col in cols]
                          for i in range(self.ngens)])

    def coordinate_kernel_lattice(self, matrix, target):
        """Generators of {x in Z^ngens : matrix . x dies in target}, as a
        sublattice of this group's coordinate space (contains relations)."""
        stacked = IntMatrix.hstack(matrix, target.relation_columns())
        ker = kernel_basis(stacked).top_rows(self.ngens)
        return IntMatrix.hstack(ker, self.relation_columns())


def _subquotient(d_out, d_in, rels_ambient, rels_target):
    g = d_out.cols
    if d_in.rows != g:
        raise LinAlgError("d_in lands in the wrong ambient")
    stacked = IntMatrix.hstack(d_out, rels_target)
    kmat = kernel_basis(stacked).top_rows(g)
    ksolver = LinearSolver(kmat)
    # the projection stays a basis because the relation columns are
    # independent (diagonal); anything else would corrupt reductions
    assert ksolver.snf.rank == kmat.cols, "cycle basis degenerated"
    lmat = IntMatrix.hstack(d_in, rels_ambient)
    y = ksolver.solve_matrix(lmat)
    if y is None:
        raise ChainConditionError(
            "boundaries do not lie in the cycle lattice")
    sy = smith_normal_form(y)
    t = kmat.cols
    diag = sy.diag
    orders_all = tuple(diag[i] if i < len(diag) else 0 for i in range(t))
    kept = tuple(i for i in range(t) if orders_all[i] != 1)
    gens_in_k = sy.Uinv.take_columns(list(kept))
    gens_ambient = kmat @ gens_in_k
    torsion = tuple(orders_all[i] for i in kept if orders_all[i] >= 2)
    free_rank = sum(1 for i in kept if orders_all[i] == 0)

    grp = PresentedGroup(free_rank, torsion,
                         generators=gens_ambient.columns())
    grp.ambient_rank = g
    grp._orders_all = orders_all
    grp._kept = kept
    grp._ksolver = ksolver
    grp._uy = sy.U
    grp.d_out = d_out
    grp.d_in = d_in
    grp.rels_ambient = rels_ambient
    grp.rels_target = rels_target
    grp.kmat = kmat
    return grp


def _mod_relations(rank, mod):
    if mod:
        return IntMatrix.identity(rank).scale(mod)
    return IntMatrix.zeros(rank, 0)


def homology_at(d_in, d_out, mod=0):
    """ker(d_out) / im(d_in) with explicit generator lifts.

    d_in : Z^s -> Z^g and d_out : Z^g -> Z^h must satisfy d_out.d_in = 0
    (mod `mod` when it is nonzero).  mod=0 works over Z, mod=2 over Z/2.
    Pass d_in=None for no incoming differential.
    """
    g = d_out.cols
    if d_in is None:
        d_in = IntMatrix.zeros(g, 0)
    comp = d_out @ d_in
    comp_ok = comp.mod(mod).is_zero() if mod else comp.is_zero()
    if not comp_ok:
        raise ChainConditionError("d_out . d_in != 0: not a chain complex")
    return _subquotient(d_out, d_in,
                        _mod_relations(g, mod), _mod_relations(d_out.rows, mod))


def presented_module(group, rels=None):
    """Present a plain FGAbelianGroup as a subquotient of its own
    coordinate space (used for group cohomology of presented modules)."""
    n = group.ngens
    cols = []
    for i, d in enumerate(group.orders):
        if d:
            col = [0] * n
            col[i] = d
            cols.append(col)
    relmat = IntMatrix(n, len(cols),
                       [[col[i] for col in cols] for i in range(n)])
    return relmat


def _canonical_matrix(target, mat):
    data = []
    orders = target.orders
    for i in range(mat.rows):
        d = orders[i]
        row = mat.data[i]
        data.append([x % d if d else x for x in row])
    return IntMatrix(mat.rows, mat.cols, data)


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism between presented groups, as a matrix acting on
    generator coordinates (target coords x source coords)."""

    source: FGAbelianGroup
    target: FGAbelianGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.rows != self.target.ngens \
                or self.matrix.cols != self.source.ngens:
            raise LinAlgError("homomorphism matrix has wrong shape")

    def apply(self, coords):
        out = self.matrix.mul_vector(coords)
        return tuple(x % d if d else x
                     for x, d in zip(out, self.target.orders))

    def compose(self, inner):
        """self o inner."""
        if inner.target is not self.source and inner.target != self.source:
            raise LinAlgError("composition endpoint mismatch")
        return GroupHom(inner.source, self.target,
                        _canonical_matrix(self.target,
                                          self.matrix @ inner.matrix))

    def is_zero(self):
        return _canonical_matrix(self.target, self.matrix).is_zero()

    @classmethod
    def zero(cls, source, target):
        return cls(source, target,
                   IntMatrix.zeros(target.ngens, source.ngens))

    @classmethod
    def identity(cls, group):
        return cls(group, group, IntMatrix.identity(group.ngens))


def induced_hom(chain_map, src, tgt):
    """The map on homology induced by a chain-level matrix.

    Checks that chain_map sends the cycle lattice of src into that of tgt
    and boundaries to boundaries (this is exactly well-definedness and
    independence of the chosen generator lifts).
    """
    if chain_map.cols != src.ambient_rank or chain_map.rows != tgt.ambient_rank:
        raise LinAlgError("chain map has wrong shape for these presentations")
    boundary_img = chain_map @ IntMatrix.hstack(src.d_in, src.rels_ambient)
    tgt_boundaries = LinearSolver(
        IntMatrix.hstack(tgt.d_in, tgt.rels_ambient))
    if not tgt_boundaries.contains(boundary_img):
        raise LinAlgError("chain map does not commute with the "
                          "differentials: boundaries are not preserved")
    cols = []
    for gen in src.generators:
        img = chain_map.mul_vector(gen)
        try:
            cols.append(tgt.reduce(img))
        except LinAlgError:
            raise LinAlgError("generator image fails membership in the "
                              "target cycle lattice") from None
    mat = IntMatrix(tgt.ngens, len(cols),
                    [[col[i] for col in cols] for i in range(tgt.ngens)])
    return GroupHom(src, tgt, _canonical_matrix(tgt, mat))


def image_lattice(hom):
    """Columns spanning im(hom) + relations inside the target coordinates."""
    return IntMatrix.hstack(hom.matrix, hom.target.relation_columns())


def kernel_lattice(hom):
    """Columns spanning ker(hom) inside the source coordinates
    (includes the source relations)."""
    return hom.source.coordinate_kernel_lattice(hom.matrix, hom.target)


def exact_at(incoming, outgoing):
    """Whether im(incoming) = ker(outgoing) at their common group.

    The two maps must share the *same presentation object* in the middle;
    isomorphic-but-differently-presented groups would make the comparison
    meaningless.
    """
    if incoming.target is not outgoing.source:
        raise LinAlgError("maps do not share the middle presentation")
    comp = outgoing.compose(incoming)
    if not comp.is_zero():
        return False
    return lattices_equal(image_lattice(incoming), kernel_lattice(outgoing))
