"""Core lattice algebra on integer Gram matrices.

A lattice is given by the Gram matrix of a basis: entry (i, j) is B(v_i, v_j)
and the diagonal holds Q(v_i).  Everything here is exact; bases of sublattices
are integer coordinate rows in the parent's basis.
"""

from dataclasses import dataclass
from math import gcd, isqrt

from . import intmat
from .errors import LatticeInputError, NotPositiveDefinite


@dataclass(frozen=True)
class GramLattice:
    """A free Z-lattice described by an integer symmetric Gram matrix."""

    gram: tuple

    def __post_init__(self):
        g = self.gram
        n = len(g)
        for i, row in enumerate(g):
            if len(row) != n:
                raise LatticeInputError("gram row %d has length %d, expected %d"
                                        % (i, len(row), n))
            for j, x in enumerate(row):
                if not isinstance(x, int) or isinstance(x, bool):
                    raise LatticeInputError("gram[%d][%d] is not an integer" % (i, j))
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise LatticeInputError(
                        "gram is not symmetric at gram[%d][%d] != gram[%d][%d]"
                        % (i, j, j, i))
        if n and intmat.det_bareiss([list(r) for r in g]) == 0:
            raise LatticeInputError("gram matrix is singular")

    @property
    def rank(self):
        return len(self.gram)

    def rows(self):
        return [list(r) for r in self.gram]

    def bilinear(self, x, y):
        return sum(x[i] * sum(self.gram[i][j] * y[j] for j in range(self.rank))
                   for i in range(self.rank))

    def value(self, x):
        return self.bilinear(x, x)

    def is_positive_definite(self):
        return all(m > 0 for m in intmat.leading_principal_minors(self.rows()))

    def __repr__(self):
        return "GramLattice(%r)" % (self.gram,)


def make_lattice(rows):
    return GramLattice(tuple(tuple(int(x) for x in row) for row in rows))


def diagonal_lattice(*entries):
    n = len(entries)
    return make_lattice([[entries[i] if i == j else 0 for j in range(n)]
                         for i in range(n)])


ZERO_LATTICE = GramLattice(())


def require_positive_definite(lat):
    if not lat.is_positive_definite():
        raise NotPositiveDefinite("lattice is not positive definite")


@dataclass(frozen=True)
class SublatticeBasis:
    """A sublattice given by integer coordinate rows in the parent's basis."""

    parent: GramLattice
    coords: tuple

    def __post_init__(self):
        n = self.parent.rank
        for i, row in enumerate(self.coords):
            if len(row) != n:
                raise LatticeInputError("coords row %d has length %d, expected %d"
                                        % (i, len(row), n))
        rows = [list(r) for r in self.coords]
        if rows and intmat.row_rank(rows) != len(rows):
            raise LatticeInputError("coordinate rows are linearly dependent")

    @property
    def rank(self):
        return len(self.coords)

    def rows(self):
        return [list(r) for r in self.coords]

    def __repr__(self):
        return "SublatticeBasis(coords=%r)" % (self.coords,)


def make_sublattice(parent, coords):
    return SublatticeBasis(parent, tuple(tuple(int(x) for x in row) for row in coords))


def full_sublattice(lat):
    return make_sublattice(lat, intmat.identity(lat.rank))


@dataclass(frozen=True)
class IdealData:
    scale: int
    norm: int
    volume: int


def induced_gram(sub):
    """Gram matrix of the sublattice: coords * G * coords^T."""
    c = sub.rows()
    g = matgram(sub.parent, c)
    return make_lattice(g)


def matgram(lat, rows):
    cg = intmat.matmul(rows, lat.rows())
    return intmat.matmul(cg, intmat.transpose(rows))


def volume(lat):
    """Determinant of the Gram matrix."""
    return intmat.det_bareiss(lat.rows())


def scale_norm(lat):
    """Generators of the scale and norm ideals, plus the volume."""
    s = 0
    n = 0
    for i in range(lat.rank):
        n = gcd(n, lat.gram[i][i])
        for j in range(lat.rank):
            s = gcd(s, lat.gram[i][j])
            if i != j:
                n = gcd(n, 2 * lat.gram[i][j])
    return IdealData(scale=s, norm=n, volume=volume(lat))


def hermite_normal_form(m):
    """Row HNF with transform: (H, U), U unimodular, U*M = H."""
    rows = [list(r) for r in m]
    return intmat.hermite_normal_form(rows)


def saturation(sub):
    """The sublattice (Q-span of sub) intersect parent; always primitive."""
    rows = sub.rows()
    if not rows:
        return sub
    sat = intmat.row_saturation(rows)
    return make_sublattice(sub.parent, sat)


def is_primitive(sub):
    """True iff the coordinate rows have all elementary divisors 1."""
    rows = sub.rows()
    if not rows:
        return True
    return all(d in (1, -1) for d in intmat.elementary_divisors(rows))


def sublattice_index(sub):
    """Index of sub inside its saturation (product of elementary divisors)."""
    rows = sub.rows()
    if not rows:
        return 1
    out = 1
    for d in intmat.elementary_divisors(rows):
        out *= abs(d)
    return out


def orthogonal_complement(sub):
    """Saturated basis of {x in parent : B(x, sub) = 0}."""
    lat = sub.parent
    if lat.rank and volume(lat) == 0:
        raise LatticeInputError("parent lattice is degenerate")
    if sub.rank == 0:
        return full_sublattice(lat)
    m = intmat.matmul(sub.rows(), lat.rows())
    ker = intmat.right_kernel(m)
    return make_sublattice(lat, ker)


def splits(sub):
    """True iff sub is an orthogonal summand of its parent.

    Detected by the volume identity vol(sub) * vol(complement) = vol(parent);
    only meaningful for primitive sub, so non-primitive input is rejected.
    """
    if not is_primitive(sub):
        raise LatticeInputError("splitting test requires a primitive sublattice")
    comp = orthogonal_complement(sub)
    vs = volume(induced_gram(sub))
    vc = volume(induced_gram(comp))
    return vs * vc == volume(sub.parent)


def orthogonal_sum(parts):
    """Block-diagonal Gram of the given lattices."""
    total = sum(p.rank for p in parts)
    g = [[0] * total for _ in range(total)]
    off = 0
    for p in parts:
        for i in range(p.rank):
            for j in range(p.rank):
                g[off + i][off + j] = p.gram[i][j]
        off += p.rank
    return make_lattice(g)


def _hnf_profiles(n, m):
    """Yield (diagonal, above-pivot-entries) choices for n x n HNFs of det m."""
    def split(rest, k):
        if k == 1:
            yield (rest,)
            return
        d = 1
        while d <= rest:
            if rest % d == 0:
                for tail in split(rest // d, k - 1):
                    yield (d,) + tail
            d += 1
    yield from split(m, n)


def sublattices_of_index(lat, m):
    """All full-rank sublattices of index m, as canonical HNF bases, sorted."""
    if m < 1:
        raise LatticeInputError("index must be a positive integer")
    n = lat.rank
    if n == 0:
        if m == 1:
            return [full_sublattice(lat)]
        return []
    out = []
    for diag in _hnf_profiles(n, m):
        # entries above the pivot in column j range over [0, diag[j])
        free = [(i, j) for j in range(n) for i in range(j) if diag[j] > 1]
        def rec(idx, mat):
            if idx == len(free):
                out.append([row[:] for row in mat])
                return
            i, j = free[idx]
            for v in range(diag[j]):
                mat[i][j] = v
                rec(idx + 1, mat)
            mat[i][j] = 0
        base = [[diag[j] if i == j else 0 for j in range(n)] for i in range(n)]
        rec(0, base)
    out.sort()
    return [make_sublattice(lat, rows) for rows in out]


def superlattices_of_index(lat, e):
    """All integral lattices M containing lat with index e, as GramLattices.

    M corresponds to an HNF matrix A of determinant e writing lat's basis in
    an M-basis; the Gram of M is A^-1 G A^-T, kept only when integral.
    """
    if e < 1:
        raise LatticeInputError("index must be a positive integer")
    out = []
    seen = set()
    for sub in sublattices_of_index(lat, e):
        a = sub.rows()
        ainv = intmat.invert_fraction(a)
        g = intmat.matmul(intmat.matmul(ainv, lat.rows()), intmat.transpose(ainv))
        try:
            gi = intmat.fractions_to_ints(g)
        except ValueError:
            continue
        key = tuple(tuple(row) for row in gi)
        if key not in seen:
            seen.add(key)
            out.append(make_lattice(gi))
    return out


def sublattice_contains(sub, vec):
    """Is the parent-coordinate vector in the row span of sub over Z?"""
    rows = sub.rows()
    h = intmat.hnf_basis(rows + [list(vec)])
    return h == intmat.hnf_basis(rows)


def canonical_coords(sub):
    """HNF-canonicalized copy of a sublattice basis."""
    return make_sublattice(sub.parent, intmat.hnf_basis(sub.rows()))


def index_in(inner, outer):
    """Index [outer : inner] for nested full-rank-in-outer sublattices."""
    a = intmat.solve_left(outer.rows(), inner.rows())
    rows = intmat.fractions_to_ints(a)
    d = intmat.det_bareiss(rows)
    if d == 0:
        raise LatticeInputError("inner sublattice has smaller rank than outer")
    return abs(d)


def gcd_list(xs):
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g


def perfect_square(n):
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n
