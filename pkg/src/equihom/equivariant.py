"""Equivariant homology and cohomology of finite simplicial G-complexes.

For a complex X with involution and coefficients A(k) (A = Z or Z/2, the
involution acting on Z(k) by (-1)^k), the equivariant group in degree p is
the degree-p homology of the total complex built from copies of the chain
complex placed in columns j = 0, 1, 2, ...: the component in column j and
chain degree q sits in total degree p = q - j, the vertical differential is
the boundary, and the horizontal map out of column j is 1 - (-1)^j sigma
(the twist sign is folded into sigma).  With the sign convention

    D(x at (q, j)) = boundary(x) at (q-1, j)
                     + (-1)^q (1 - (-1)^j sigma)(x) at (q, j+1)

D squares to zero exactly.  Degrees may be negative; for a point the
construction reproduces group cohomology of the group of order two.

Everything below: edge morphisms (column-0 projection), the eta cap
(column shift raising the twist), the two long exact sequences, the
localization maps to the mod-2 homology/cohomology of the fixed set,
degree maps, and fundamental classes of closed G-manifolds.

All inputs are immutable and the computations are pure; results are
memoized per (complex, coefficient system, degree), and the caches are
safe for concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .complexes import (
    COEFF_Z2,
    Coeff,
    builtin,
    chain_complex,
    constant_map,
    dim,
    fixed_inclusion,
    fixed_subcomplex,
    gmap_chain_matrices,
)
from .intlinalg import (
    FGAbelianGroup,
    GroupHom,
    IntMatrix,
    LinAlgError,
    LinearSolver,
    _canonical_matrix,
    _mod_relations,
    _subquotient,
    exact_at,
    homology_at,
    induced_hom,
)


class ExactnessError(AssertionError):
    """An im = ker check failed at a named node; this signals a bug in the
    assembly of the complexes, never a mathematical failure."""


# ---------------------------------------------------------------------------
# Total complexes
# ---------------------------------------------------------------------------

class TotalComplex:
    """The staircase total complex of X with coefficients; differentials
    are produced per total degree and memoized."""

    def __init__(self, X, coeff):
        self.X = X
        self.coeff = coeff
        self.cc = chain_complex(X, coeff)
        self.n = dim(X)
        self._diffs = {}
        self._blocks = {}

    def blocks(self, p):
        """List of (q, j, offset) for the column blocks in total degree p,
        columns ascending."""
        if p not in self._blocks:
            out = []
            offset = 0
            j = max(0, -p)
            while p + j <= self.n:
                q = p + j
                out.append((q, j, offset))
                offset += self.cc.rank(q)
                j += 1
            self._blocks[p] = tuple(out)
        return self._blocks[p]

    def rank(self, p):
        blocks = self.blocks(p)
        if not blocks:
            return 0
        q, _, offset = blocks[-1]
        return offset + self.cc.rank(q)

    def block_offset(self, p, j):
        for q, jj, offset in self.blocks(p):
            if jj == j:
                return offset
        raise LinAlgError("no column %d in total degree %d" % (j, p))

    def diff(self, p):
        """The total differential T_p -> T_{p-1}."""
        if p in self._diffs:
            return self._diffs[p]
        rows, cols = self.rank(p - 1), self.rank(p)
        tgt_off = {j: off for _, j, off in self.blocks(p - 1)}
        data = [[0] * cols for _ in range(rows)]
        for q, j, off in self.blocks(p):
            nq = self.cc.rank(q)
            if q - 1 >= 0 and j in tgt_off:
                bnd = self.cc.boundary(q)
                roff = tgt_off[j]
                for r in range(bnd.rows):
                    row = bnd.data[r]
                    out = data[roff + r]
                    for c in range(nq):
                        if row[c]:
                            out[off + c] += row[c]
            if j + 1 in tgt_off:
                sg = self.cc.sigma(q)
                hsign = -1 if q % 2 else 1
                ssign = -1 if j % 2 else 1
                roff = tgt_off[j + 1]
                for c in range(nq):
                    data[roff + c][off + c] += hsign
                for r in range(nq):
                    row = sg.data[r]
                    out = data[roff + r]
                    for c in range(nq):
                        if row[c]:
                            out[off + c] -= hsign * ssign * row[c]
        mat = IntMatrix(rows, cols, data)
        if self.coeff.mod:
            mat = mat.mod(self.coeff.mod)
        self._diffs[p] = mat
        return mat


class TotalCochainComplex:
    """Mirrored construction on cochains; the component in cochain degree q
    and column i sits in total degree p = q + i, so p >= 0."""

    def __init__(self, X, coeff):
        self.X = X
        self.coeff = coeff
        self.cc = chain_complex(X, coeff)
        self.n = dim(X)
        self._diffs = {}

    def blocks(self, p):
        out = []
        offset = 0
        if p < 0:
            return ()
        for q in range(min(p, self.n), -1, -1):
            i = p - q
            out.append((q, i, offset))
            offset += self.cc.rank(q)
        return tuple(out)

    def rank(self, p):
        blocks = self.blocks(p)
        if not blocks:
            return 0
        q, _, offset = blocks[-1]
        return offset + self.cc.rank(q)

    def block_offset(self, p, i):
        for q, ii, offset in self.blocks(p):
            if ii == i:
                return offset
        raise LinAlgError("no column %d in total degree %d" % (i, p))

    def diff(self, p):
        """The total codifferential T^p -> T^{p+1}."""
        if p in self._diffs:
            return self._diffs[p]
        rows, cols = self.rank(p + 1), self.rank(p)
        tgt_off = {i: off for _, i, off in self.blocks(p + 1)}
        data = [[0] * cols for _ in range(rows)]
        for q, i, off in self.blocks(p):
            nq = self.cc.rank(q)
            if q + 1 <= self.n and i in tgt_off:
                cob = self.cc.boundary(q + 1).transpose()
                roff = tgt_off[i]
                for r in range(cob.rows):
                    row = cob.data[r]
                    out = data[roff + r]
                    for c in range(nq):
                        if row[c]:
                            out[off + c] += row[c]
            if i + 1 in tgt_off:
                # sigma acts on cochains by its transpose
                sg = self.cc.sigma(q)
                hsign = -1 if q % 2 else 1
                ssign = -1 if i % 2 else 1
                roff = tgt_off[i + 1]
                for c in range(nq):
                    data[roff + c][off + c] += hsign
                for r in range(nq):
                    out = data[roff + r]
                    for c in range(nq):
                        v = sg.data[c][r]
                        if v:
                            out[off + c] -= hsign * ssign * v
        mat = IntMatrix(rows, cols, data)
        if self.coeff.mod:
            mat = mat.mod(self.coeff.mod)
        self._diffs[p] = mat
        return mat


@lru_cache(maxsize=None)
def total_complex_of(X, coeff):
    return TotalComplex(X, coeff)


@lru_cache(maxsize=None)
def total_cochain_complex_of(X, coeff):
    return TotalCochainComplex(X, coeff)


def total_complex(X, coeff, p_min, p_max):
    """Windowed view with prebuilt differentials; windows agree wherever
    they overlap because everything is derived from one construction."""
    tc = total_complex_of(X, coeff)
    return {p: tc.diff(p) for p in range(p_min, p_max + 1)}


# ---------------------------------------------------------------------------
# Groups
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def eq_homology(X, coeff, p):
    tc = total_complex_of(X, coeff)
    return homology_at(tc.diff(p + 1), tc.diff(p), coeff.mod)


@lru_cache(maxsize=None)
def eq_cohomology(X, coeff, p):
    tc = total_cochain_complex_of(X, coeff)
    return homology_at(tc.diff(p - 1), tc.diff(p), coeff.mod)


@lru_cache(maxsize=None)
def homology(X, coeff, q):
    cc = chain_complex(X, coeff)
    return homology_at(cc.boundary(q + 1), cc.boundary(q), coeff.mod)


@lru_cache(maxsize=None)
def cohomology(X, coeff, q):
    cc = chain_complex(X, coeff)
    d_out = cc.boundary(q + 1).transpose()
    d_in = cc.boundary(q).transpose()
    return homology_at(d_in, d_out, coeff.mod)


@lru_cache(maxsize=None)
def homology_involution(X, coeff, q):
    """The involution acting on ordinary homology (twist included)."""
    spot = homology(X, coeff, q)
    cc = chain_complex(X, coeff)
    return induced_hom(cc.sigma(q), spot, spot)


def group_cohomology(module, invol, p):
    """Cohomology of the order-two group with coefficients in a finitely
    generated module.

    `module` is an FGAbelianGroup (its coordinate space is torsion
    generators first, then free ones); `invol` an integer matrix acting on
    those coordinates.  Degree 0 gives the invariants; degrees >= 1 are
    the two-periodic kernels mod images of 1 -/+ invol.
    """
    if p < 0:
        raise LinAlgError("group cohomology lives in degrees >= 0")
    n = module.ngens
    if invol.rows != n or invol.cols != n:
        raise LinAlgError("involution matrix has wrong shape")
    rels_cols = []
    for i, d in enumerate(module.orders):
        if d:
            col = [0] * n
            col[i] = d
            rels_cols.append(col)
    rels = IntMatrix(n, len(rels_cols),
                     [[col[i] for col in rels_cols] for i in range(n)])
    ident = IntMatrix.identity(n)
    square = invol @ invol - ident
    if rels.cols:
        rel_solver = LinearSolver(rels)
        ok = rel_solver.contains(square) and rel_solver.contains(invol @ rels)
    else:
        ok = square.is_zero()
    if not ok:
        raise LinAlgError("matrix is not an involution of the module")
    sign = -1 if p % 2 else 1
    d_out = ident - invol.scale(sign)
    if p == 0:
        d_in = IntMatrix.zeros(n, 0)
    else:
        d_in = ident + invol.scale(sign)
    return _subquotient(d_out, d_in, rels, rels)


# ---------------------------------------------------------------------------
# Classes and graded vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EqClass:
    """A cycle of the total complex, i.e. an element of H_p(X; G, A(k))."""

    X: object
    coeff: Coeff
    p: int
    vector: tuple

    def spot(self):
        return eq_homology(self.X, self.coeff, self.p)

    def coords(self):
        return self.spot().reduce(self.vector)

    def same_class(self, other):
        if (self.X, self.coeff, self.p) != (other.X, other.coeff, other.p):
            return False
        diff = tuple(a - b for a, b in zip(self.vector, other.vector))
        return all(c == 0 for c in self.spot().reduce(diff))

    def is_zero_class(self):
        return all(c == 0 for c in self.coords())


def make_eq_class(X, coeff, p, vector):
    vector = tuple(vector)
    tc = total_complex_of(X, coeff)
    if len(vector) != tc.rank(p):
        raise LinAlgError("vector length does not match the total degree")
    image = tc.diff(p).mul_vector(vector)
    if coeff.mod:
        image = [x % coeff.mod for x in image]
    if any(image):
        raise LinAlgError("vector is not a cycle of the total complex")
    return EqClass(X, coeff, p, vector)


def class_from_coords(X, coeff, p, coords):
    spot = eq_homology(X, coeff, p)
    return EqClass(X, coeff, p, spot.lift(coords))


@dataclass(frozen=True)
class EtaClass:
    """Power of the distinguished degree-one class of the group: acting by
    it shifts the column index and raises the twist, once per power."""

    power: int = 1


@dataclass(frozen=True)
class GradedClassVector:
    """Element of the direct sum over p of H_p of the fixed set with mod-2
    coefficients, stored as coordinates per degree."""

    entries: tuple  # sorted tuple of (degree, coords); zero coords dropped

    @classmethod
    def from_dict(cls, mapping):
        entries = []
        for p in sorted(mapping):
            coords = tuple(c % 2 for c in mapping[p])
            if any(coords):
                entries.append((p, coords))
        return cls(tuple(entries))

    def component(self, p):
        for degree, coords in self.entries:
            if degree == p:
                return coords
        return ()

    def degrees(self):
        return tuple(p for p, _ in self.entries)

    def __add__(self, other):
        out = {}
        for p, coords in list(self.entries) + list(other.entries):
            if p in out:
                a = out[p]
                length = max(len(a), len(coords))
                a = tuple((a[i] if i < len(a) else 0)
                          + (coords[i] if i < len(coords) else 0)
                          for i in range(length))
                out[p] = a
            else:
                out[p] = coords
        return GradedClassVector.from_dict(out)

    def parity_part(self, parity):
        return GradedClassVector(tuple(
            (p, coords) for p, coords in self.entries if p % 2 == parity))

    def even(self):
        return self.parity_part(0)

    def odd(self):
        return self.parity_part(1)

    def is_zero(self):
        return not self.entries

    def scale_mod2(self, c):
        return GradedClassVector(()) if c % 2 == 0 else self


GRADED_ZERO = GradedClassVector(())


# ---------------------------------------------------------------------------
# Edge morphisms and the eta cap
# ---------------------------------------------------------------------------

def _column_projection(tc, p, rank_target, offset_or_none):
    cols = tc.rank(p)
    data = [[0] * cols for _ in range(rank_target)]
    if offset_or_none is not None:
        off = offset_or_none
        for r in range(rank_target):
            data[r][off + r] = 1
    return IntMatrix(rank_target, cols, data)


@lru_cache(maxsize=None)
def edge_morphism(X, coeff, p):
    """e_p : H_p(X; G, A(k)) -> H_p(X, A(k)), the column-0 projection.

    The image always lands in the invariants of the twisted involution
    (asserted)."""
    src = eq_homology(X, coeff, p)
    tgt = homology(X, coeff, p)
    tc = total_complex_of(X, coeff)
    offset = None
    for q, j, off in tc.blocks(p):
        if j == 0:
            offset = off
    proj = _column_projection(tc, p, tgt.ambient_rank, offset)
    hom = induced_hom(proj, src, tgt)
    if tgt.ngens:
        sigma_star = homology_involution(X, coeff, p)
        assert sigma_star.compose(hom).matrix == \
            _canonical_matrix(tgt, hom.matrix), \
            "edge image is not invariant under the involution"
    return hom


@lru_cache(maxsize=None)
def edge_morphism_cohomology(X, coeff, p):
    """e^p : H^p(X; G, A(k)) -> H^p(X, A(k)), the column-0 component."""
    src = eq_cohomology(X, coeff, p)
    tgt = cohomology(X, coeff, p)
    tc = total_cochain_complex_of(X, coeff)
    offset = None
    for q, i, off in tc.blocks(p):
        if i == 0:
            offset = off
    proj = _column_projection(tc, p, tgt.ambient_rank, offset)
    return induced_hom(proj, src, tgt)


def _shift_matrix(X, coeff_src, coeff_tgt, p, steps=1):
    """Ambient matrix of the column shift T_p(src twist) ->
    T_{p-steps}(twist raised by steps), block (q, j) -> (q, j + steps)."""
    tc_src = total_complex_of(X, coeff_src)
    tc_tgt = total_complex_of(X, coeff_tgt)
    rows, cols = tc_tgt.rank(p - steps), tc_src.rank(p)
    data = [[0] * cols for _ in range(rows)]
    tgt_off = {j: off for _, j, off in tc_tgt.blocks(p - steps)}
    for q, j, off in tc_src.blocks(p):
        roff = tgt_off[j + steps]
        for c in range(tc_src.cc.rank(q)):
            data[roff + c][off + c] = 1
    return IntMatrix(rows, cols, data)


@lru_cache(maxsize=None)
def eta_cap(X, coeff, p):
    """Cap with the twist class: H_p(X;G,A(k)) -> H_{p-1}(X;G,A(k+1)),
    realized by the column shift."""
    src = eq_homology(X, coeff, p)
    tgt = eq_homology(X, coeff.shift(), p - 1)
    shift = _shift_matrix(X, coeff, coeff.shift(), p)
    return induced_hom(shift, src, tgt)


def cap_with_eta(cls, power=1):
    """Cap an explicit class with a power of the twist class."""
    if isinstance(power, EtaClass):
        power = power.power
    coeff, p, vec = cls.coeff, cls.p, cls.vector
    X = cls.X
    for _ in range(power):
        shift = _shift_matrix(X, coeff, coeff.shift(), p)
        vec = shift.mul_vector(vec)
        coeff, p = coeff.shift(), p - 1
    return make_eq_class(X, coeff, p, vec)


# ---------------------------------------------------------------------------
# Long exact sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LesNode:
    degree: int
    label: str
    group: FGAbelianGroup
    exact: bool


@dataclass(frozen=True)
class LesReport:
    kind: str
    description: str
    nodes: tuple

    @property
    def ok(self):
        return all(node.exact for node in self.nodes)


@lru_cache(maxsize=None)
def _edge_connecting(X, coeff, p):
    """Connecting map H_p(X, A(k)) -> H_p(X; G, A(k-1)) of the column-0
    quotient sequence of total complexes (sign fixed by the construction,
    exposed only up to sign)."""
    prev = coeff.shift()
    src = homology(X, coeff, p)
    tgt = eq_homology(X, prev, p)
    cc = chain_complex(X, coeff)
    tc_prev = total_complex_of(X, prev)
    nq = cc.rank(p)
    sign = -1 if p % 2 else 1
    if nq:
        ident = IntMatrix.identity(nq)
        h0 = (ident - cc.sigma(p)).scale(sign)
    cols = []
    for gen in src.generators:
        vec = [0] * tc_prev.rank(p)
        if nq:
            w = h0.mul_vector(gen)
            off = tc_prev.block_offset(p, 0)
            for i, x in enumerate(w):
                vec[off + i] = x
        cols.append(tgt.reduce(vec))
    # well-definedness: ordinary boundaries must die in the target
    bnd = IntMatrix.hstack(src.d_in, src.rels_ambient)
    for jcol in range(bnd.cols):
        z = bnd.column(jcol)
        vec = [0] * tc_prev.rank(p)
        if nq:
            w = h0.mul_vector(z)
            off = tc_prev.block_offset(p, 0)
            for i, x in enumerate(w):
                vec[off + i] = x
        assert all(c == 0 for c in tgt.reduce(vec)), \
            "connecting map is not well defined"
    mat = IntMatrix(tgt.ngens, len(cols),
                    [[col[i] for col in cols] for i in range(tgt.ngens)])
    return GroupHom(src, tgt, _canonical_matrix(tgt, mat))


def les_edge(X, coeff, p_min, p_max):
    """The long exact sequence relating the edge morphisms and the eta cap,

      ... -> H_{p+1}(A(k-1)) --cap--> H_p(A(k)) --edge--> H_p(X, A(k))
          --conn--> H_p(A(k-1)) --cap--> H_{p-1}(A(k)) -> ...

    verified node by node over the requested degree range.  Any failure
    raises ExactnessError naming the node.
    """
    prev = coeff.shift()
    nodes = []
    for p in range(p_max, p_min - 1, -1):
        cap_in = eta_cap(X, prev, p + 1)
        edge = edge_morphism(X, coeff, p)
        conn = _edge_connecting(X, coeff, p)
        cap_out = eta_cap(X, prev, p)
        for label, incoming, outgoing, grp in (
                ("H_%d(X;G,%s)" % (p, coeff), cap_in, edge, edge.source),
                ("H_%d(X,%s)" % (p, coeff), edge, conn, conn.source),
                ("H_%d(X;G,%s)" % (p, prev), conn, cap_out, cap_out.source)):
            ok = exact_at(incoming, outgoing)
            nodes.append(LesNode(p, label, grp, ok))
            if not ok:
                raise ExactnessError(
                    "edge sequence not exact at %s" % label)
    return LesReport("edge", "edge/cap sequence for %s" % coeff,
                     tuple(nodes))


@lru_cache(maxsize=None)
def _times_two(X, coeff, p):
    spot = eq_homology(X, coeff, p)
    amb = IntMatrix.identity(spot.ambient_rank).scale(2)
    return induced_hom(amb, spot, spot)


@lru_cache(maxsize=None)
def _mod2_reduction(X, coeff, p):
    src = eq_homology(X, coeff, p)
    tgt = eq_homology(X, COEFF_Z2, p)
    assert src.ambient_rank == tgt.ambient_rank
    return induced_hom(IntMatrix.identity(src.ambient_rank), src, tgt)


@lru_cache(maxsize=None)
def _coefficient_bockstein(X, coeff, p):
    """Connecting map H_p(X;G,Z/2) -> H_{p-1}(X;G,Z(k)) of the sequence
    0 -> Z(k) --2--> Z(k) -> Z/2 -> 0."""
    src = eq_homology(X, COEFF_Z2, p)
    tgt = eq_homology(X, coeff, p - 1)
    tc = total_complex_of(X, coeff)
    d = tc.diff(p)
    cols = []
    for gen in src.generators:
        w = d.mul_vector(gen)
        assert all(x % 2 == 0 for x in w), "mod-2 cycle has odd boundary"
        cols.append(tgt.reduce([x // 2 for x in w]))
    for jcol in range(src.d_in.cols):
        z = src.d_in.column(jcol)
        w = d.mul_vector(z)
        assert all(x % 2 == 0 for x in w)
        assert all(c == 0 for c in tgt.reduce([x // 2 for x in w])), \
            "coefficient connecting map is not well defined"
    mat = IntMatrix(tgt.ngens, len(cols),
                    [[col[i] for col in cols] for i in range(tgt.ngens)])
    return GroupHom(src, tgt, _canonical_matrix(tgt, mat))


def les_coeff(X, k, p_min, p_max):
    """The long exact sequence of 0 -> Z(k) --x2--> Z(k) -> Z/2 -> 0,
    verified node by node; failures raise ExactnessError."""
    coeff = Coeff("Z", k)
    nodes = []
    for p in range(p_max, p_min - 1, -1):
        bock_in = _coefficient_bockstein(X, coeff, p + 1)
        two = _times_two(X, coeff, p)
        red = _mod2_reduction(X, coeff, p)
        bock = _coefficient_bockstein(X, coeff, p)
        for label, incoming, outgoing, grp in (
                ("H_%d(X;G,%s) [x2 source]" % (p, coeff), bock_in, two,
                 two.source),
                ("H_%d(X;G,%s) [x2 target]" % (p, coeff), two, red,
                 red.source),
                ("H_%d(X;G,Z/2)" % p, red, bock, bock.source)):
            ok = exact_at(incoming, outgoing)
            nodes.append(LesNode(p, label, grp, ok))
            if not ok:
                raise ExactnessError(
                    "coefficient sequence not exact at %s" % label)
    return LesReport("coeff", "coefficient sequence for %s" % coeff,
                     tuple(nodes))


def ordinary_bockstein(F, p):
    """Bockstein H_{p+1}(F, Z/2) -> H_p(F, Z/2) of 0->Z/2->Z/4->Z/2->0 on
    an ordinary complex, computed as (boundary of an integer lift)/2
    reduced mod 2."""
    src = homology(F, COEFF_Z2, p + 1)
    tgt = homology(F, COEFF_Z2, p)
    cc = chain_complex(F, Coeff("Z", 0))
    bnd = cc.boundary(p + 1)
    cols = []
    for gen in src.generators:
        w = bnd.mul_vector(gen)
        assert all(x % 2 == 0 for x in w)
        cols.append(tgt.reduce([x // 2 for x in w]))
    mat = IntMatrix(tgt.ngens, len(cols),
                    [[col[i] for col in cols] for i in range(tgt.ngens)])
    return GroupHom(src, tgt, _canonical_matrix(tgt, mat))


# ---------------------------------------------------------------------------
# Localization to the fixed set
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _localization_solver(X, p):
    """Solver for inverting the inclusion of the fixed set on mod-2
    equivariant classes in (negative) total degree p: solve

        incl . y = w  modulo  im(diff) + 2 . ambient."""
    F = fixed_subcomplex(X)
    tcx = total_complex_of(X, COEFF_Z2)
    tcf = total_complex_of(F, COEFF_Z2)
    mats = gmap_chain_matrices(fixed_inclusion(X), COEFF_Z2)
    rows = tcx.rank(p)
    cols = tcf.rank(p)
    data = [[0] * cols for _ in range(rows)]
    xoff = {j: off for _, j, off in tcx.blocks(p)}
    for q, j, off in tcf.blocks(p):
        roff = xoff[j]
        mat = mats[q] if q < len(mats) else None
        if mat is None:
            continue
        for r in range(mat.rows):
            row = mat.data[r]
            out = data[roff + r]
            for c in range(mat.cols):
                if row[c]:
                    out[off + c] = row[c]
    incl = IntMatrix(rows, cols, data)
    system = IntMatrix.hstack(incl, tcx.diff(p + 1),
                              _mod_relations(rows, 2))
    return LinearSolver(system), cols, tcf


@dataclass(frozen=True)
class HomologyLocalization:
    """The map into the mod-2 homology of the fixed set: reduce mod two,
    cap with a high power of the twist class, invert the inclusion of the
    fixed set (an isomorphism in negative degrees), and project away the
    twist columns."""

    X: object
    coeff: Coeff
    n: int
    gen_images: tuple

    def source(self):
        return eq_homology(self.X, self.coeff, self.n)

    def apply(self, cls):
        if isinstance(cls, EqClass):
            coords = cls.coords()
        else:
            coords = tuple(cls)
        out = GRADED_ZERO
        for c, img in zip(coords, self.gen_images):
            out = out + img.scale_mod2(c)
        return out

    def apply_parity(self, cls, parity):
        return self.apply(cls).parity_part(parity)

    def apply_component(self, cls, p):
        return self.apply(cls).component(p)


@lru_cache(maxsize=None)
def localize_homology(X, coeff, n):
    """rho in degree n: H_n(X; G, A(k)) -> direct sum of H_p(X^G, Z/2)."""
    src = eq_homology(X, coeff, n)
    F = fixed_subcomplex(X)
    if F.vertex_count == 0:
        return HomologyLocalization(
            X, coeff, n, tuple(GRADED_ZERO for _ in src.generators))
    steps = dim(X) + 1
    p_low = n - steps
    solver, ycols, tcf = _localization_solver(X, p_low)
    shift = _shift_matrix(X, COEFF_Z2, COEFF_Z2, n, steps)
    images = []
    for gen in src.generators:
        w = shift.mul_vector(gen)
        sol = solver.solve_vector(w)
        assert sol is not None, \
            "inclusion of the fixed set could not be inverted (bug)"
        y = sol[:ycols]
        graded = {}
        for q, j, off in tcf.blocks(p_low):
            spot = homology(F, COEFF_Z2, q)
            comp = y[off:off + spot.ambient_rank]
            graded[q] = spot.reduce(comp)
        images.append(GradedClassVector.from_dict(graded))
    return HomologyLocalization(X, coeff, n, tuple(images))


@dataclass(frozen=True)
class CohomologyLocalization:
    """The cohomology analogue: restrict to the fixed set, reduce mod two,
    split off the twist columns."""

    X: object
    coeff: Coeff
    n: int
    gen_images: tuple

    def source(self):
        return eq_cohomology(self.X, self.coeff, self.n)

    def apply(self, coords):
        out = GRADED_ZERO
        for c, img in zip(coords, self.gen_images):
            out = out + img.scale_mod2(c)
        return out

    def apply_component(self, coords, p):
        return self.apply(coords).component(p)


@lru_cache(maxsize=None)
def localize_cohomology(X, coeff, n):
    """beta in degree n: H^n(X; G, A(k)) -> direct sum of H^p(X^G, Z/2);
    the zero map when the fixed set is empty."""
    src = eq_cohomology(X, coeff, n)
    F = fixed_subcomplex(X)
    if F.vertex_count == 0:
        return CohomologyLocalization(
            X, coeff, n, tuple(GRADED_ZERO for _ in src.generators))
    tcx = total_cochain_complex_of(X, coeff)
    mats = gmap_chain_matrices(fixed_inclusion(X), COEFF_Z2)
    images = []
    for gen in src.generators:
        graded = {}
        for q, i, off in tcx.blocks(n):
            if q >= len(mats):
                continue
            res = mats[q].transpose()
            comp = res.mul_vector(gen[off:off + tcx.cc.rank(q)])
            spot = cohomology(F, COEFF_Z2, q)
            graded[q] = spot.reduce(comp)
        images.append(GradedClassVector.from_dict(graded))
    return CohomologyLocalization(X, coeff, n, tuple(images))


# ---------------------------------------------------------------------------
# Degrees, fundamental classes, pushforward
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def total_chain_map(f, coeff, p):
    """The map of total complexes T_p(source) -> T_p(target) induced by an
    equivariant simplicial map, acting block by block."""
    mats = gmap_chain_matrices(f, coeff)
    tc_src = total_complex_of(f.source, coeff)
    tc_tgt = total_complex_of(f.target, coeff)
    rows, cols = tc_tgt.rank(p), tc_src.rank(p)
    data = [[0] * cols for _ in range(rows)]
    tgt_off = {j: off for _, j, off in tc_tgt.blocks(p)}
    for q, j, off in tc_src.blocks(p):
        if j not in tgt_off or q >= len(mats):
            continue
        mat = mats[q]
        roff = tgt_off[j]
        for r in range(mat.rows):
            row = mat.data[r]
            out = data[roff + r]
            for c in range(mat.cols):
                if row[c]:
                    out[off + c] = row[c]
    return IntMatrix(rows, cols, data)


@lru_cache(maxsize=None)
def pushforward_hom(f, coeff, p):
    """Functoriality on equivariant homology as a homomorphism."""
    src = eq_homology(f.source, coeff, p)
    tgt = eq_homology(f.target, coeff, p)
    return induced_hom(total_chain_map(f, coeff, p), src, tgt)


@lru_cache(maxsize=None)
def ordinary_pushforward_hom(f, coeff, q):
    src = homology(f.source, coeff, q)
    tgt = homology(f.target, coeff, q)
    mats = gmap_chain_matrices(f, coeff)
    mat = mats[q] if q < len(mats) else IntMatrix.zeros(
        tgt.ambient_rank, src.ambient_rank)
    return induced_hom(mat, src, tgt)


@lru_cache(maxsize=None)
def total_cochain_map(f, coeff, p):
    """Pullback of total cochain complexes T^p(target) -> T^p(source)."""
    mats = gmap_chain_matrices(f, coeff)
    tc_src = total_cochain_complex_of(f.source, coeff)
    tc_tgt = total_cochain_complex_of(f.target, coeff)
    rows, cols = tc_src.rank(p), tc_tgt.rank(p)
    data = [[0] * cols for _ in range(rows)]
    src_off = {i: off for _, i, off in tc_src.blocks(p)}
    for q, i, off in tc_tgt.blocks(p):
        if i not in src_off or q >= len(mats):
            continue
        mat = mats[q]
        roff = src_off[i]
        for r in range(mat.rows):
            row = mat.data[r]
            for c in range(mat.cols):
                if row[c]:
                    data[roff + c][off + r] = row[c]
    return IntMatrix(rows, cols, data)


@lru_cache(maxsize=None)
def pullback_hom(f, coeff, p):
    """Contravariant functoriality on equivariant cohomology."""
    src = eq_cohomology(f.target, coeff, p)
    tgt = eq_cohomology(f.source, coeff, p)
    return induced_hom(total_cochain_map(f, coeff, p), src, tgt)


def fixed_map(f):
    """The restriction of an equivariant map to the fixed subcomplexes."""
    from .complexes import fixed_vertex_injection, make_gmap
    FX = fixed_subcomplex(f.source)
    FY = fixed_subcomplex(f.target)
    src_verts = fixed_vertex_injection(f.source)
    tgt_index = {v: i for i, v in enumerate(fixed_vertex_injection(f.target))}
    return make_gmap(FX, FY, [tgt_index[f.vertex_map[v]] for v in src_verts])


def graded_pushforward(f, gcv):
    """Push a graded fixed-set class along the restriction of a map."""
    fg = fixed_map(f)
    mats = gmap_chain_matrices(fg, COEFF_Z2)
    out = {}
    for p, coords in gcv.entries:
        src = homology(fg.source, COEFF_Z2, p)
        tgt = homology(fg.target, COEFF_Z2, p)
        mat = mats[p] if p < len(mats) else IntMatrix.zeros(
            tgt.ambient_rank, src.ambient_rank)
        out[p] = induced_hom(mat, src, tgt).apply(coords)
    return GradedClassVector.from_dict(out)


def graded_pullback(f, gcv):
    """Pull a graded fixed-set cohomology class back along the restriction."""
    fg = fixed_map(f)
    mats = gmap_chain_matrices(fg, COEFF_Z2)
    out = {}
    for p, coords in gcv.entries:
        src = cohomology(fg.target, COEFF_Z2, p)
        tgt = cohomology(fg.source, COEFF_Z2, p)
        mat = (mats[p].transpose() if p < len(mats)
               else IntMatrix.zeros(tgt.ambient_rank, src.ambient_rank))
        out[p] = induced_hom(mat, src, tgt).apply(coords)
    return GradedClassVector.from_dict(out)


def graded_bockstein(F, gcv):
    """Apply the ordinary mod-2 Bockstein of the fixed set degreewise
    (each degree p component lands in degree p - 1)."""
    out = {}
    for p, coords in gcv.entries:
        if p == 0:
            continue
        img = ordinary_bockstein(F, p - 1).apply(coords)
        if p - 1 in out:
            img = tuple((a + b) % 2 for a, b in zip(out[p - 1], img))
        out[p - 1] = img
    return GradedClassVector.from_dict(out)


def pushforward(f, cls):
    """Covariant functoriality along an equivariant simplicial map."""
    if cls.X != f.source:
        raise LinAlgError("class does not live on the source of the map")
    coeff = cls.coeff
    out = total_chain_map(f, coeff, cls.p).mul_vector(cls.vector)
    if coeff.mod:
        out = [x % coeff.mod for x in out]
    return make_eq_class(f.target, coeff, cls.p, out)


def equivariant_degree(cls):
    """Pushforward to the point in degree zero; defined for untwisted
    integral and mod-2 coefficients."""
    if cls.p != 0:
        raise LinAlgError("degree is defined only in degree zero")
    if cls.coeff.ring == "Z" and cls.coeff.k % 2:
        raise LinAlgError("degree needs an untwisted coefficient system")
    point = builtin("point")
    pushed = pushforward(constant_map(cls.X, point), cls)
    coords = pushed.coords()
    return coords[0] if coords else 0


def ordinary_degree(X, coeff, chain0):
    """Degree of an ordinary 0-cycle: the sum of its coefficients."""
    total = sum(chain0)
    return total % 2 if coeff.mod else total


def graded_degree_mod2(F, gcv):
    """The mod-2 degree of the degree-0 part of a graded class vector on
    the fixed set, the other degrees counting zero."""
    coords = gcv.component(0)
    if not coords:
        return 0
    spot = homology(F, COEFF_Z2, 0)
    return ordinary_degree(F, COEFF_Z2, spot.lift(coords))


def fundamental_class(X, ring, expect_dim=None):
    """The fundamental class of a closed A-oriented G-manifold, lifted
    through the edge isomorphism; the twist parity is detected from the
    involution action on the top homology."""
    d = dim(X) if expect_dim is None else expect_dim
    ord_spot = homology(X, Coeff(ring, 0), d)
    if ring == "Z":
        if ord_spot != FGAbelianGroup(1):
            raise LinAlgError(
                "H_%d(X, Z) = %s is not Z: no integral orientation"
                % (d, ord_spot))
        sigma_star = homology_involution(X, Coeff("Z", 0), d)
        action = sigma_star.matrix.data[0][0]
        if action == 1:
            k = 0
        elif action == -1:
            k = 1
        else:
            raise AssertionError(
                "involution acts on the top class by %d (bug)" % action)
    else:
        if ord_spot != FGAbelianGroup(0, (2,)):
            raise LinAlgError(
                "H_%d(X, Z/2) = %s is not Z/2: not a closed connected "
                "surface presentation" % (d, ord_spot))
        k = 0
    coeff = Coeff(ring, k)
    ord_twisted = homology(X, coeff, d)
    mu = ord_twisted.generators[0]
    eq_spot = eq_homology(X, coeff, d)
    tc = total_complex_of(X, coeff)
    offset = tc.block_offset(d, 0)
    nq = ord_twisted.ambient_rank
    proj = _column_projection(tc, d, nq, offset)
    reachable = IntMatrix.hstack(
        proj @ eq_spot.kmat,
        ord_twisted.d_in, ord_twisted.rels_ambient)
    sol = LinearSolver(reachable).solve_vector(mu)
    if sol is None:
        raise AssertionError("edge morphism misses the fundamental cycle "
                             "(bug: wrong twist parity?)")
    y = eq_spot.kmat.mul_vector(sol[:eq_spot.kmat.cols])
    if coeff.mod:
        y = [x % coeff.mod for x in y]
    cls = make_eq_class(X, coeff, d, y)
    check = ord_twisted.reduce(proj.mul_vector(y))
    assert check == ord_twisted.reduce(mu), "edge image mismatch (bug)"
    return cls


def represented_class(j, ring):
    """The class represented by a closed sub-G-manifold: the pushforward
    of its fundamental class along the inclusion."""
    return pushforward(j, fundamental_class(j.source, ring))
