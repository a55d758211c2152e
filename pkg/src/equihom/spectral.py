"""Second spectral-sequence pages, Galois-Maximality decisions, the
surjectivity criteria for the fixed-set localization, and duality checks.

A compact G-complex is Galois-Maximal (GM) when the total mod-2 homology of
its fixed set reaches the bound given by group cohomology of the mod-2
homology of the space; Z-GM is the integral analogue (one bound for the
even part, one for the odd part).  Both decisions are made exactly through
edge-morphism surjectivity onto invariants; the dimension counts are
computed as an independent cross-check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .complexes import (
    COEFF_Z,
    COEFF_Z1,
    COEFF_Z2,
    Coeff,
    chain_complex,
    connected_components,
    dim,
    fixed_subcomplex,
)
from .equivariant import (
    cohomology,
    edge_morphism,
    edge_morphism_cohomology,
    eq_cohomology,
    eq_homology,
    fundamental_class,
    homology,
    homology_involution,
    group_cohomology,
    localize_cohomology,
    localize_homology,
)
from .intlinalg import (
    FGAbelianGroup,
    IntMatrix,
    LinAlgError,
    image_lattice,
    induced_hom,
    lattices_equal,
)


# ---------------------------------------------------------------------------
# Mod-2 span helpers (flattened graded vectors as bitmasks)
# ---------------------------------------------------------------------------

def _f2_rank(masks):
    basis = []
    for m in masks:
        for b in basis:
            low = b & -b
            if m & low:
                m ^= b
        if m:
            basis.append(m)
    return len(basis)


def _f2_spans(span_masks, targets):
    """Whether every target mask lies in the span of span_masks."""
    r = _f2_rank(list(span_masks))
    return _f2_rank(list(span_masks) + list(targets)) == r


class _FixedFlattener:
    """Flatten graded class vectors on the fixed set into bitmasks."""

    def __init__(self, F):
        self.F = F
        self.offsets = {}
        off = 0
        self.dims = {}
        for q in range(dim(F) + 1):
            d = homology(F, COEFF_Z2, q).ngens
            self.offsets[q] = off
            self.dims[q] = d
            off += d
        self.total = off

    def mask(self, gcv):
        m = 0
        for p, coords in gcv.entries:
            off = self.offsets.get(p)
            if off is None:
                continue
            for i, c in enumerate(coords):
                if c % 2:
                    m |= 1 << (off + i)
        return m

    def unit(self, q, i):
        return 1 << (self.offsets[q] + i)

    def degree_functional(self):
        """Bit positions of H_0 generators weighted by their mod-2 degree."""
        weights = {}
        if 0 in self.dims and self.dims[0]:
            spot = homology(self.F, COEFF_Z2, 0)
            for i, gen in enumerate(spot.generators):
                weights[self.offsets[0] + i] = sum(gen) % 2
        return weights

    def subspace_masks(self, parity=None, degree_zero=False):
        """A basis of the subspace cut out by a parity condition and/or the
        vanishing of the extended degree."""
        positions = []
        for q in range(dim(self.F) + 1):
            if parity is not None and q % 2 != parity:
                continue
            for i in range(self.dims[q]):
                positions.append((self.offsets[q] + i, q))
        if not degree_zero:
            return [1 << pos for pos, _ in positions]
        weights = self.degree_functional()
        zero_deg = [1 << pos for pos, _ in positions
                    if not weights.get(pos, 0)]
        odd_deg = [pos for pos, _ in positions if weights.get(pos, 0)]
        masks = zero_deg
        for a, b in zip(odd_deg, odd_deg[1:]):
            masks.append((1 << a) | (1 << b))
        return masks


# ---------------------------------------------------------------------------
# E2 page
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class E2Page:
    coeff: Coeff
    p_min: int
    q_max: int
    table: tuple  # tuple of ((p, q), FGAbelianGroup)

    def entry(self, p, q):
        for key, grp in self.table:
            if key == (p, q):
                return grp
        raise KeyError((p, q))


def e2_page(X, coeff, depth=None):
    """The page E2(p, q) = H^{-p}(group, H_q(X, A(k))) for -depth <= p <= 0
    and 0 <= q <= dim X.  Columns p <= -1 are verified two-periodic over Z
    and constant over Z/2."""
    if depth is None:
        depth = dim(X) + 2
    entries = []
    for q in range(dim(X) + 1):
        hq = homology(X, coeff, q)
        sigma = homology_involution(X, coeff, q)
        for p in range(0, -depth - 1, -1):
            grp = group_cohomology(hq, sigma.matrix, -p)
            entries.append(((p, q), grp))
    page = E2Page(coeff, -depth, dim(X), tuple(entries))
    for (p, q), grp in page.table:
        if p <= -1:
            if coeff.mod and p - 1 >= -depth:
                assert page.entry(p - 1, q) == grp, "mod-2 periodicity broken"
            if not coeff.mod and p - 2 >= -depth:
                assert page.entry(p - 2, q) == grp, "periodicity broken"
    return page


# ---------------------------------------------------------------------------
# Edge surjectivity, GM reports
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def invariant_lattice(X, coeff, q):
    """Sublattice of H_q(X, A(k)) coordinates fixed by the involution."""
    spot = homology(X, coeff, q)
    sigma = homology_involution(X, coeff, q)
    ident = IntMatrix.identity(spot.ngens)
    return spot.coordinate_kernel_lattice(ident - sigma.matrix, spot)


@lru_cache(maxsize=None)
def edge_surjective(X, coeff, p):
    """Whether e_p maps onto the invariants of H_p(X, A(k))."""
    hom = edge_morphism(X, coeff, p)
    if hom.target.ngens == 0:
        return True
    return lattices_equal(image_lattice(hom), invariant_lattice(X, coeff, p))


@lru_cache(maxsize=None)
def cohomology_involution(X, coeff, q):
    spot = cohomology(X, coeff, q)
    cc = chain_complex(X, coeff)
    return induced_hom(cc.sigma(q).transpose(), spot, spot)


@lru_cache(maxsize=None)
def coedge_surjective(X, coeff, p):
    """Whether e^p maps onto the invariants of H^p(X, A(k))."""
    hom = edge_morphism_cohomology(X, coeff, p)
    spot = hom.target
    if spot.ngens == 0:
        return True
    sigma = cohomology_involution(X, coeff, p)
    ident = IntMatrix.identity(spot.ngens)
    inv = spot.coordinate_kernel_lattice(ident - sigma.matrix, spot)
    return lattices_equal(image_lattice(hom), inv)


EDGE_FAMILIES = (("Z2", COEFF_Z2), ("Z+", COEFF_Z), ("Z-", COEFF_Z1))


@dataclass(frozen=True)
class GMReport:
    gm1: tuple  # (lhs, rhs)
    gm2: tuple
    gm3: tuple
    is_gm: bool
    is_zgm: bool
    edge_surjectivity: tuple  # ((family, degree, bool), ...)

    def to_json(self):
        return {
            "gm1": {"lhs": self.gm1[0], "rhs": self.gm1[1]},
            "gm2": {"lhs": self.gm2[0], "rhs": self.gm2[1]},
            "gm3": {"lhs": self.gm3[0], "rhs": self.gm3[1]},
            "is_gm": self.is_gm,
            "is_zgm": self.is_zgm,
            "edge_surjectivity": [
                {"family": fam, "degree": p, "surjective": ok}
                for fam, p, ok in self.edge_surjectivity],
        }


def gm_bounds(X):
    """The three inequalities (lhs, rhs): total/even/odd mod-2 homology of
    the fixed set against stabilized column sums of the second page.

    The rhs are the column sums of the page in a far-negative total
    degree: with mod-2 coefficients every entry is the degree-1 group
    cohomology, and over Z the group-cohomology degree q - n has the
    parity of the row q, so even rows contribute degree-2 entries and odd
    rows degree-1 entries (even target; the odd target swaps the roles).
    lhs <= rhs is a hard assertion.
    """
    F = fixed_subcomplex(X)
    dims = [homology(F, COEFF_Z2, q).ngens for q in range(dim(F) + 1)]
    lhs1 = sum(dims)
    lhs2 = sum(d for q, d in enumerate(dims) if q % 2 == 0)
    lhs3 = sum(d for q, d in enumerate(dims) if q % 2 == 1)
    rhs1 = rhs2 = rhs3 = 0
    for r in range(dim(X) + 1):
        h2 = homology(X, COEFF_Z2, r)
        s2 = homology_involution(X, COEFF_Z2, r)
        rhs1 += group_cohomology(h2, s2.matrix, 1).f2_dim()
        hz = homology(X, COEFF_Z, r)
        sz = homology_involution(X, COEFF_Z, r)
        deg1 = group_cohomology(hz, sz.matrix, 1).f2_dim()
        deg2 = group_cohomology(hz, sz.matrix, 2).f2_dim()
        if r % 2 == 0:
            rhs2 += deg2
            rhs3 += deg1
        else:
            rhs2 += deg1
            rhs3 += deg2
    bounds = ((lhs1, rhs1), (lhs2, rhs2), (lhs3, rhs3))
    for lhs, rhs in bounds:
        assert lhs <= rhs, "Galois bound violated: %d > %d" % (lhs, rhs)
    return bounds

def gm_report(X):
    """Exact GM / Z-GM decision through edge surjectivity in every degree,
    with the dimension bounds as cross-check data."""
    gm1, gm2, gm3 = gm_bounds(X)
    table = []
    for fam, coeff in EDGE_FAMILIES:
        for p in range(dim(X) + 1):
            table.append((fam, p, edge_surjective(X, coeff, p)))
    is_gm = all(ok for fam, _, ok in table if fam == "Z2")
    is_zgm = all(ok for fam, _, ok in table if fam in ("Z+", "Z-"))
    return GMReport(gm1, gm2, gm3, is_gm, is_zgm, tuple(table))


# ---------------------------------------------------------------------------
# Surjectivity criteria for the localization in degree two
# ---------------------------------------------------------------------------

RHO_VARIANTS = ("zz", "even-z", "odd-z")


def rho_surjectivity_criteria(X, variant):
    """Two independently computed booleans:

      criterion_zero -- the composite (degree-1 edge, then projection to
        the degree-2 group cohomology of first homology) vanishes;
      rho_surjective -- the degree-2 localization maps onto its stated
        target (degree-zero part for 'zz', even degree-zero part for
        'even-z', odd part for 'odd-z').

    The two agree; the suite tests rather than assumes this.
    """
    if variant not in RHO_VARIANTS:
        raise LinAlgError("unknown variant %r" % (variant,))
    if connected_components(X) != 1:
        raise LinAlgError("criterion needs a connected complex")
    F = fixed_subcomplex(X)
    if variant in ("zz", "odd-z") and F.vertex_count == 0:
        raise LinAlgError("criterion needs a nonempty fixed set")

    if variant == "zz":
        coeff2, coeff1 = COEFF_Z2, COEFF_Z2
        parity, degree_zero = None, True
    elif variant == "even-z":
        coeff2, coeff1 = COEFF_Z, COEFF_Z1
        parity, degree_zero = 0, True
    else:
        coeff2, coeff1 = COEFF_Z1, COEFF_Z
        parity, degree_zero = 1, False

    # side one: the composite through group cohomology of H_1
    e1 = edge_morphism(X, coeff1, 1)
    h1 = homology(X, coeff1, 1)
    sigma = homology_involution(X, coeff1, 1)
    h2g = group_cohomology(h1, sigma.matrix, 2)
    criterion_zero = True
    for j in range(e1.matrix.cols):
        img = e1.matrix.column(j)
        if any(h2g.reduce(img)):
            criterion_zero = False
            break

    # side two: image of the localization against the target subspace
    flat = _FixedFlattener(F)
    src = eq_homology(X, coeff2, 2)
    loc = localize_homology(X, coeff2, 2)
    span = []
    for img in loc.gen_images:
        part = img if parity is None else img.parity_part(parity)
        span.append(flat.mask(part))
    targets = flat.subspace_masks(parity=parity, degree_zero=degree_zero)
    rho_surjective = _f2_spans(span, targets)
    return criterion_zero, rho_surjective


def edge_defect_witness(X):
    """When the degree-2 cohomology edge map fails to hit all invariants
    (mod-2 coefficients), exhaustively find a degree-1 class with nonzero
    edge image that localizes to zero on the fixed set; None when the edge
    map is surjective."""
    F = fixed_subcomplex(X)
    if F.vertex_count == 0:
        raise LinAlgError("witness search needs a nonempty fixed set")
    if coedge_surjective(X, COEFF_Z2, 2):
        return None
    src = eq_cohomology(X, COEFF_Z2, 1)
    if src.ngens > 16:
        raise LinAlgError("search space too large")
    e1 = edge_morphism_cohomology(X, COEFF_Z2, 1)
    beta = localize_cohomology(X, COEFF_Z2, 1)
    for coords in itertools.product((0, 1), repeat=src.ngens):
        if not any(coords):
            continue
        if any(e1.apply(coords)) and beta.apply(coords).is_zero():
            return coords
    raise AssertionError("no witness found although the degree-2 edge map "
                         "is not surjective (bug)")


# ---------------------------------------------------------------------------
# Duality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DualityEntry:
    ring: str
    i: int
    twist: int
    cohomology: FGAbelianGroup
    homology: FGAbelianGroup
    equal: bool


@dataclass(frozen=True)
class DualityReport:
    X: object
    d: int
    detected_twists: tuple
    entries: tuple

    @property
    def ok(self):
        return all(e.equal for e in self.entries)


def poincare_check(X, d, rings=("Z", "Z2"), i_range=None):
    """Isomorphism-type comparison H^i(X;G,A(l)) vs H_{d-i}(X;G,A(k-l))
    for every twist l, where k is the detected parity of the fundamental
    class.  The cap map itself is not constructed."""
    if i_range is None:
        i_range = range(-2, d + 4)
    entries = []
    twists = []
    for ring in rings:
        mu = fundamental_class(X, ring, expect_dim=d)
        k = mu.coeff.k
        twists.append((ring, k))
        lvals = (0, 1) if ring == "Z" else (0,)
        for i in i_range:
            for l in lvals:
                co = eq_cohomology(X, Coeff(ring, l), i)
                ho = eq_homology(X, Coeff(ring, (k - l) % 2), d - i)
                entries.append(DualityEntry(
                    ring, i, l, FGAbelianGroup(co.free_rank, co.torsion),
                    FGAbelianGroup(ho.free_rank, ho.torsion), co == ho))
    return DualityReport(X, d, tuple(twists), tuple(entries))
