"""Finite simplicial complexes with an order-two simplicial involution.

A complex is stored by its maximal simplices plus a vertex permutation of
order two.  Regularity (every simplex fixed setwise is fixed vertexwise) is
enforced; one barycentric subdivision always restores it.  Chain complexes
carry the involution as a signed permutation matrix per degree, with the
coefficient twist folded in.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from .intlinalg import IntMatrix


class ComplexError(ValueError):
    """Structurally malformed complex or map."""


class ComplexFormatError(ComplexError):
    """Malformed complex/type file; the message names the offending field."""


@dataclass(frozen=True)
class Coeff:
    """Coefficient system: the ring Z or Z/2, with a twist parity.

    The involution acts on Z(k) coefficients by (-1)^k; the twist is
    meaningless over Z/2 and normalized to 0 there.
    """

    ring: str
    k: int = 0

    def __post_init__(self):
        if self.ring not in ("Z", "Z2"):
            raise ComplexError("ring must be 'Z' or 'Z2'")
        object.__setattr__(self, "k", 0 if self.ring == "Z2" else self.k % 2)

    @property
    def mod(self):
        return 2 if self.ring == "Z2" else 0

    def shift(self):
        """The system with twist raised by one (Z/2 is its own shift)."""
        return Coeff(self.ring, self.k + 1)

    def __str__(self):
        if self.ring == "Z2":
            return "Z/2"
        return "Z" if self.k == 0 else "Z(1)"


COEFF_Z2 = Coeff("Z2")
COEFF_Z = Coeff("Z", 0)
COEFF_Z1 = Coeff("Z", 1)

COEFF_BY_FLAG = {"Z2": COEFF_Z2, "Z": COEFF_Z, "Z1": COEFF_Z1}


@dataclass(frozen=True)
class GComplex:
    """Finite simplicial complex with involution, closed under faces."""

    vertex_count: int
    maximal_simplices: tuple
    involution: tuple
    auto_subdivided: bool = False

    def sigma(self, v):
        return self.involution[v]


def make_complex(vertex_count, simplices, involution, auto_subdivided=False):
    """Canonicalize and face-close the input; structural errors raise."""
    if vertex_count < 0:
        raise ComplexFormatError("vertices: must be nonnegative")
    involution = tuple(involution)
    if len(involution) != vertex_count:
        raise ComplexFormatError(
            "involution: expected a list of length %d, got %d"
            % (vertex_count, len(involution)))
    seen = set()
    for v, w in enumerate(involution):
        if not isinstance(w, int) or not 0 <= w < vertex_count:
            raise ComplexFormatError(
                "involution[%d]: %r is not a vertex id" % (v, w))
        seen.add(w)
    if len(seen) != vertex_count:
        raise ComplexFormatError("involution: not a permutation")

    cleaned = []
    covered = set()
    for idx, simplex in enumerate(simplices):
        simplex = tuple(sorted(simplex))
        if not simplex:
            raise ComplexFormatError("simplices[%d]: empty simplex" % idx)
        if len(set(simplex)) != len(simplex):
            raise ComplexFormatError(
                "simplices[%d]: repeated vertex in %r" % (idx, list(simplex)))
        for v in simplex:
            if not isinstance(v, int) or not 0 <= v < vertex_count:
                raise ComplexFormatError(
                    "simplices[%d]: %r is not a vertex id" % (idx, v))
        cleaned.append(simplex)
        covered.update(simplex)
    if covered != set(range(vertex_count)):
        missing = sorted(set(range(vertex_count)) - covered)
        raise ComplexFormatError(
            "simplices: vertex %d appears in no simplex" % missing[0])

    # drop duplicates and non-maximal faces
    cleaned = sorted(set(cleaned), key=lambda s: (-len(s), s))
    maximal = []
    for s in cleaned:
        sset = set(s)
        if not any(sset < set(t) for t in maximal):
            maximal.append(s)
    maximal.sort(key=lambda s: (len(s), s))
    return GComplex(vertex_count, tuple(maximal), involution, auto_subdivided)


@lru_cache(maxsize=None)
def simplices_by_dim(X):
    """All faces, per dimension, in sorted order."""
    faces = set()
    for s in X.maximal_simplices:
        for q in range(1, len(s) + 1):
            faces.update(itertools.combinations(s, q))
    out = []
    for q in range(dim(X) + 1):
        level = sorted(f for f in faces if len(f) == q + 1)
        out.append(tuple(level))
    return tuple(out)


def dim(X):
    if not X.maximal_simplices:
        return -1
    return max(len(s) for s in X.maximal_simplices) - 1


def simplex_count(X):
    return sum(len(level) for level in simplices_by_dim(X))


def euler_characteristic(X):
    return sum((-1) ** q * len(level)
               for q, level in enumerate(simplices_by_dim(X)))


@lru_cache(maxsize=None)
def face_index(X):
    return tuple({s: i for i, s in enumerate(level)}
                 for level in simplices_by_dim(X))


def _sigma_simplex(X, simplex):
    return tuple(sorted(X.involution[v] for v in simplex))


def validate(X):
    """None when all invariants hold, else a message naming the first
    failing simplex."""
    inv = X.involution
    for v in range(X.vertex_count):
        if inv[inv[v]] != v:
            return "involution is not of order two at vertex %d" % v
    index = face_index(X)
    for level in simplices_by_dim(X):
        for s in level:
            image = _sigma_simplex(X, s)
            if image not in index[len(s) - 1]:
                return ("involution is not simplicial: image of %r missing"
                        % (list(s),))
            if set(image) == set(s) and any(inv[v] != v for v in s):
                return ("regularity violated: simplex %r is fixed setwise "
                        "but not vertexwise" % (list(s),))
    return None


def is_valid(X):
    return validate(X) is None


def barycentric_subdivide(X):
    """Barycentric subdivision with the induced involution.

    One subdivision always restores regularity: a setwise-fixed flag has
    every member setwise fixed, so all its barycenters are fixed vertices.
    """
    inv = X.involution
    for v in range(X.vertex_count):
        if inv[inv[v]] != v:
            raise ComplexError("involution is not of order two")
    all_faces = []
    for level in simplices_by_dim(X):
        all_faces.extend(level)
    bary_id = {s: i for i, s in enumerate(all_faces)}
    for s in all_faces:
        if _sigma_simplex(X, s) not in bary_id:
            raise ComplexError("involution is not simplicial")
    new_inv = [bary_id[_sigma_simplex(X, s)] for s in all_faces]
    new_simplices = []
    for s in X.maximal_simplices:
        for perm in itertools.permutations(s):
            flag = [tuple(sorted(perm[:i + 1])) for i in range(len(perm))]
            new_simplices.append(tuple(sorted(bary_id[f] for f in flag)))
    return make_complex(len(all_faces), new_simplices, new_inv,
                        auto_subdivided=X.auto_subdivided)


@lru_cache(maxsize=None)
def fixed_subcomplex(X):
    """The subcomplex of vertexwise-fixed simplices, with trivial
    involution; by regularity this is the topological fixed set."""
    fixed = [v for v in range(X.vertex_count) if X.involution[v] == v]
    renum = {v: i for i, v in enumerate(fixed)}
    fixed_set = set(fixed)
    kept = []
    for s in X.maximal_simplices:
        for q in range(1, len(s) + 1):
            for face in itertools.combinations(s, q):
                if set(face) <= fixed_set:
                    kept.append(tuple(renum[v] for v in face))
    if not fixed:
        return GComplex(0, (), ())
    return make_complex(len(fixed), kept, list(range(len(fixed))))


@lru_cache(maxsize=None)
def fixed_vertex_injection(X):
    """Vertex map of the inclusion fixed_subcomplex(X) -> X (monotone, so
    every induced chain map has +1 signs)."""
    return tuple(v for v in range(X.vertex_count) if X.involution[v] == v)


def _perm_sign(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[j] < seq[i]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class GChainComplex:
    """Oriented chain complex of a G-complex with coefficients.

    boundaries[q] : C_q -> C_{q-1}; sigmas[q] is the involution action on
    C_q including the orientation sign and the twist sign (-1)^k.  Over
    Z/2 all matrices are reduced mod 2.
    """

    X: GComplex
    coeff: Coeff
    bases: tuple
    boundaries: tuple
    sigmas: tuple

    def rank(self, q):
        if 0 <= q < len(self.bases):
            return len(self.bases[q])
        return 0

    def boundary(self, q):
        """The boundary C_q -> C_{q-1}, with empty fallbacks off range."""
        if 0 <= q < len(self.boundaries):
            return self.boundaries[q]
        return IntMatrix.zeros(self.rank(q - 1), self.rank(q))

    def sigma(self, q):
        if 0 <= q < len(self.sigmas):
            return self.sigmas[q]
        return IntMatrix.zeros(self.rank(q), self.rank(q))


@lru_cache(maxsize=None)
def chain_complex(X, coeff):
    levels = simplices_by_dim(X)
    index = face_index(X)
    n = dim(X)
    mod = coeff.mod
    twist = 1 if (coeff.k % 2 == 0 or mod) else -1

    boundaries = []
    sigmas = []
    for q in range(n + 1):
        basis = levels[q]
        prev = len(levels[q - 1]) if q else 0
        bdata = [[0] * len(basis) for _ in range(prev)]
        for col, s in enumerate(basis):
            if q == 0:
                continue
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                bdata[index[q - 1][face]][col] = (-1) ** i
        sdata = [[0] * len(basis) for _ in range(len(basis))]
        for col, s in enumerate(basis):
            image = [X.involution[v] for v in s]
            target = tuple(sorted(image))
            sign = _perm_sign(image) * twist
            sdata[index[q][target]][col] = sign
        b = IntMatrix(prev, len(basis), bdata)
        sg = IntMatrix(len(basis), len(basis), sdata)
        if mod:
            b = b.mod(mod)
            sg = sg.mod(mod)
        boundaries.append(b)
        sigmas.append(sg)

    cc = GChainComplex(X, coeff, tuple(levels), tuple(boundaries),
                       tuple(sigmas))
    for q in range(n + 1):
        dd = cc.boundary(q - 1) @ cc.boundary(q)
        ss = cc.sigma(q) @ cc.sigma(q)
        comm = cc.boundary(q) @ cc.sigma(q) - cc.sigma(q - 1) @ cc.boundary(q)
        if mod:
            dd, ss, comm = dd.mod(mod), ss.mod(mod), comm.mod(mod)
            ident = IntMatrix.identity(cc.rank(q)).mod(mod)
        else:
            ident = IntMatrix.identity(cc.rank(q))
        assert dd.is_zero(), "boundary squared is nonzero"
        assert comm.is_zero(), "involution does not commute with boundary"
        assert ss == ident, "involution matrix is not an involution"
    return cc


@dataclass(frozen=True)
class GMap:
    """Simplicial map commuting with the involutions (may collapse)."""

    source: GComplex
    target: GComplex
    vertex_map: tuple


def make_gmap(source, target, vertex_map):
    vertex_map = tuple(vertex_map)
    if len(vertex_map) != source.vertex_count:
        raise ComplexError("vertex map has wrong length")
    for v, w in enumerate(vertex_map):
        if not 0 <= w < target.vertex_count:
            raise ComplexError("vertex map sends %d outside the target" % v)
    for v in range(source.vertex_count):
        if vertex_map[source.involution[v]] != target.involution[vertex_map[v]]:
            raise ComplexError(
                "map does not commute with the involutions at vertex %d" % v)
    tgt_index = face_index(target)
    for level in simplices_by_dim(source):
        for s in level:
            image = tuple(sorted(set(vertex_map[v] for v in s)))
            if image not in tgt_index[len(image) - 1]:
                raise ComplexError(
                    "map is not simplicial: image of %r missing" % (list(s),))
    return GMap(source, target, vertex_map)


def identity_map(X):
    return make_gmap(X, X, range(X.vertex_count))


def constant_map(X, target=None):
    """The equivariant collapse onto a point (target defaults to builtin
    point; its involution is trivial, so any source works)."""
    if target is None:
        target = builtin("point")
    return make_gmap(X, target, [0] * X.vertex_count)


def fixed_inclusion(X):
    XG = fixed_subcomplex(X)
    return make_gmap(XG, X, fixed_vertex_injection(X))


@lru_cache(maxsize=None)
def gmap_chain_matrices(f, coeff):
    """Per-degree chain matrices of a simplicial map; collapsing simplices
    contribute zero."""
    src = chain_complex(f.source, coeff)
    tgt = chain_complex(f.target, coeff)
    tgt_index = face_index(f.target)
    mats = []
    for q in range(len(src.bases)):
        rows = tgt.rank(q)
        data = [[0] * src.rank(q) for _ in range(rows)]
        for col, s in enumerate(src.bases[q]):
            image = [f.vertex_map[v] for v in s]
            if len(set(image)) != len(image):
                continue
            target = tuple(sorted(image))
            sign = _perm_sign(image)
            if coeff.mod:
                sign %= coeff.mod
            data[tgt_index[q][target]][col] = sign
        mats.append(IntMatrix(rows, src.rank(q), data))
    return tuple(mats)


def relabel(X, perm):
    """The same complex with vertices renamed by a permutation; the
    involution is conjugated accordingly."""
    perm = tuple(perm)
    if sorted(perm) != list(range(X.vertex_count)):
        raise ComplexError("relabeling is not a permutation")
    inverse = [0] * X.vertex_count
    for v, w in enumerate(perm):
        inverse[w] = v
    simplices = [tuple(perm[v] for v in s) for s in X.maximal_simplices]
    involution = [perm[X.involution[inverse[w]]]
                  for w in range(X.vertex_count)]
    return make_complex(X.vertex_count, simplices, involution)


def disjoint_union(X, Y):
    off = X.vertex_count
    simplices = list(X.maximal_simplices)
    simplices += [tuple(v + off for v in s) for s in Y.maximal_simplices]
    involution = list(X.involution) + [v + off for v in Y.involution]
    return make_complex(X.vertex_count + Y.vertex_count, simplices,
                        involution)


# ---------------------------------------------------------------------------
# Builtin catalog
# ---------------------------------------------------------------------------

def _square_circle(involution):
    edges = [(0, 1), (1, 2), (2, 3), (0, 3)]
    return make_complex(4, edges, involution)


def _octahedron(involution):
    # vertex pairs (0,1)=+-x, (2,3)=+-y, (4,5)=+-z
    faces = [(x, y, z) for x in (0, 1) for y in (2, 3) for z in (4, 5)]
    return make_complex(6, faces, involution)


def _grid_torus(diagonals, col_map):
    """4 x 3 vertex grid on the torus; diagonals[i] is '/' or '\\' for the
    strip between columns i and i+1."""
    def vid(i, j):
        return 3 * (i % 4) + (j % 3)

    triangles = []
    for i in range(4):
        for j in range(3):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i, j + 1), vid(i + 1, j + 1)
            if diagonals[i] == "/":
                triangles += [(a, b, d), (a, d, c)]
            else:
                triangles += [(a, b, c), (b, d, c)]
    involution = [3 * col_map[i] + j for i in range(4) for j in range(3)]
    return make_complex(12, triangles, involution)


def _klein_bottle():
    def vid(i, j):
        return 3 * (i % 4) + j

    def up(i, j):
        if j < 2:
            return vid(i, j + 1)
        return vid((-i) % 4, 0)

    triangles = []
    for i in range(4):
        for j in range(3):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = up(i, j), up(i + 1, j)
            triangles += [(a, b, d), (a, d, c)]
    return make_complex(12, triangles, list(range(12)))


def _rp2():
    faces = [(0, 1, 4), (0, 1, 5), (0, 2, 3), (0, 2, 4), (0, 3, 5),
             (1, 2, 3), (1, 2, 5), (1, 3, 4), (2, 4, 5), (3, 4, 5)]
    return make_complex(6, faces, list(range(6)))


_BUILTIN_FACTORIES = {
    "point": lambda: make_complex(1, [(0,)], [0]),
    "free-pair": lambda: make_complex(2, [(0,), (1,)], [1, 0]),
    "circle-antipodal": lambda: _square_circle([2, 3, 0, 1]),
    "circle-reflection": lambda: _square_circle([0, 3, 2, 1]),
    "sphere-octahedron-antipodal": lambda: _octahedron([1, 0, 3, 2, 5, 4]),
    "sphere-octahedron-reflection": lambda: _octahedron([0, 1, 2, 3, 5, 4]),
    "torus-reflection": lambda: _grid_torus("//\\\\", [0, 3, 2, 1]),
    "torus-free": lambda: _grid_torus("////", [2, 3, 0, 1]),
    "klein-bottle-trivial": _klein_bottle,
    "rp2-trivial": _rp2,
}

# per-dimension simplex counts of the documented fixed set
BUILTIN_FIXED_COUNTS = {
    "point": (1,),
    "free-pair": (),
    "circle-antipodal": (),
    "circle-reflection": (2,),
    "sphere-octahedron-antipodal": (),
    "sphere-octahedron-reflection": (4, 4),
    "torus-reflection": (6, 6),
    "torus-free": (),
    "klein-bottle-trivial": (12, 36, 24),
    "rp2-trivial": (6, 15, 10),
}

BUILTIN_EULER = {
    "point": 1,
    "free-pair": 2,
    "circle-antipodal": 0,
    "circle-reflection": 0,
    "sphere-octahedron-antipodal": 2,
    "sphere-octahedron-reflection": 2,
    "torus-reflection": 0,
    "torus-free": 0,
    "klein-bottle-trivial": 0,
    "rp2-trivial": 1,
}

BUILTIN_NAMES = tuple(_BUILTIN_FACTORIES)


@lru_cache(maxsize=None)
def builtin(name):
    """A catalogued complex; '+'-joined names give disjoint unions."""
    if "+" in name:
        parts = name.split("+")
        X = builtin(parts[0])
        for part in parts[1:]:
            X = disjoint_union(X, builtin(part))
        return X
    try:
        X = _BUILTIN_FACTORIES[name]()
    except KeyError:
        raise ComplexError("unknown builtin complex %r (choose from %s)"
                           % (name, ", ".join(BUILTIN_NAMES))) from None
    message = validate(X)
    assert message is None, "builtin %s invalid: %s" % (name, message)
    return X


def connected_components(X):
    parent = list(range(X.vertex_count))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for s in X.maximal_simplices:
        for a, b in zip(s, s[1:]):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    return len({find(v) for v in range(X.vertex_count)})


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------

def complex_from_dict(obj):
    """Build a complex from the file schema {"vertices", "simplices",
    "involution"}.  Regularity violations are repaired by one barycentric
    subdivision, recorded in the auto_subdivided flag; any other defect is
    an error naming the field."""
    if not isinstance(obj, dict):
        raise ComplexFormatError("top level: expected an object")
    for key in ("vertices", "simplices", "involution"):
        if key not in obj:
            raise ComplexFormatError("%s: missing field" % key)
    extra = set(obj) - {"vertices", "simplices", "involution"}
    if extra:
        raise ComplexFormatError("%s: unknown field" % sorted(extra)[0])
    if not isinstance(obj["vertices"], int):
        raise ComplexFormatError("vertices: expected an integer")
    if not isinstance(obj["simplices"], list):
        raise ComplexFormatError("simplices: expected a list of lists")
    for i, s in enumerate(obj["simplices"]):
        if not isinstance(s, list):
            raise ComplexFormatError("simplices[%d]: expected a list" % i)
    if not isinstance(obj["involution"], list):
        raise ComplexFormatError("involution: expected a list")
    X = make_complex(obj["vertices"], obj["simplices"], obj["involution"])
    message = validate(X)
    if message is None:
        return X
    if message.startswith("regularity"):
        X = barycentric_subdivide(X)
        X = GComplex(X.vertex_count, X.maximal_simplices, X.involution,
                     auto_subdivided=True)
        message = validate(X)
        if message is None:
            return X
    raise ComplexFormatError(message)


def load_complex(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexFormatError(
            "invalid JSON at line %d column %d: %s"
            % (exc.lineno, exc.colno, exc.msg)) from None
    return complex_from_dict(obj)
