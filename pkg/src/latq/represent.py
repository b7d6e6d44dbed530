"""Representation, isometry and canonical-form machinery.

A representation of N by L is an integer matrix phi (rows = images of N's
basis vectors in L's coordinates) with phi * G_L * phi^T = G_N exactly.
"""

from dataclasses import dataclass
from functools import lru_cache

from . import intmat
from .errors import LatticeInputError
from .lattice import (GramLattice, make_lattice, make_sublattice, matgram,
                      perfect_square, require_positive_definite, volume)
from .reduction import (reduce_basis, represents_value, vectors_up_to,
                        vectors_with_value)

CANONICAL_RANK_LIMIT = 8


@dataclass(frozen=True)
class Representation:
    source: GramLattice
    target: GramLattice
    matrix: tuple

    @property
    def is_primitive(self):
        rows = [list(r) for r in self.matrix]
        if not rows:
            return True
        return all(d in (1, -1) for d in intmat.elementary_divisors(rows))

    def check(self):
        return matgram(self.target, [list(r) for r in self.matrix]) == \
            self.source.rows()


def _processing_order(gram):
    """Row order: decreasing diagonal, ties broken by keeping the next row
    coupled (nonzero B) to an already placed one when possible."""
    n = len(gram)
    remaining = list(range(n))
    order = []
    while remaining:
        best = None
        for i in remaining:
            coupled = any(gram[i][j] != 0 for j in order)
            key = (-gram[i][i], 0 if (coupled or not order) else 1, i)
            if best is None or key < best[0]:
                best = (key, i)
        order.append(best[1])
        remaining.remove(best[1])
    return order


def representations(source, target, limit=None, primitive_only=False):
    """All representations of source by target, deterministically ordered.

    With `limit`, stops after that many matches (after the primitivity filter
    when primitive_only is set).
    """
    require_positive_definite(source)
    require_positive_definite(target)
    n, l = source.rank, target.rank
    if n > l:
        return []
    if n == 0:
        return [Representation(source=source, target=target, matrix=())]
    if n == l:
        # det scales by the square of the change-of-basis determinant
        vs, vt = volume(source), volume(target)
        if vs % vt != 0 or not perfect_square(vs // vt):
            return []
    red = reduce_basis(source)
    gs = [list(r) for r in red.lattice.gram]
    t = [list(r) for r in red.transform]
    tinv = intmat.invert_unimodular(t)
    order = _processing_order(gs)
    gl = target.rows()

    cands = {}

    def candidates(value):
        if value not in cands:
            vl = vectors_with_value(target, value)
            signed = sorted(vl.signed())
            cands[value] = tuple(signed)
        return cands[value]

    found = []
    placed = []
    placed_gw = []

    def place(k):
        if k == len(order):
            mat = [None] * n
            for pos, row_idx in enumerate(order):
                mat[row_idx] = list(placed[pos])
            # rows of mat are images of the reduced basis; pull back
            full = intmat.matmul(tinv, mat)
            rep = Representation(source=source, target=target,
                                 matrix=tuple(tuple(r) for r in full))
            if primitive_only and not rep.is_primitive:
                return False
            found.append(rep)
            return limit is not None and len(found) >= limit
        i = order[k]
        for v in candidates(gs[i][i]):
            ok = True
            for pos in range(k):
                j = order[pos]
                if sum(v[a] * placed_gw[pos][a] for a in range(l)) != gs[i][j]:
                    ok = False
                    break
            if not ok:
                continue
            placed.append(v)
            placed_gw.append(intmat.mat_vec(gl, list(v)))
            stop = place(k + 1)
            placed.pop()
            placed_gw.pop()
            if stop:
                return True
        return False

    place(0)
    return found


def is_represented(source, target):
    if source.rank == 1:
        return represents_value(target, source.gram[0][0])
    return bool(representations(source, target, limit=1))


def is_primitively_represented(source, target):
    if source.rank == 1:
        m = source.gram[0][0]
        return any(intmat.content(list(v)) == 1
                   for v in vectors_with_value(target, m).vectors)
    return bool(representations(source, target, limit=1, primitive_only=True))


def is_isometric(a, b):
    if a.rank != b.rank or volume(a) != volume(b):
        return False
    if a.gram == b.gram:
        return True
    return is_represented(a, b)


def _offdiag_key(x):
    return (abs(x), 0 if x >= 0 else 1)


def _row_key(q, brow):
    return (q,) + tuple(k for x in brow for k in _offdiag_key(x))


@lru_cache(maxsize=8192)
def canonical_form(lat, max_rank=CANONICAL_RANK_LIMIT):
    """Canonical Gram matrix: equal canonical forms iff isometric lattices.

    Minimizes, over all bases, the sequence of per-row blocks
    (Q(v_k); B(v_k, v_1), ..., B(v_k, v_{k-1})) lexicographically, using the
    scalar order 0 < 1 < -1 < 2 < -2 < ... on off-diagonal entries.
    """
    require_positive_definite(lat)
    n = lat.rank
    if n > max_rank:
        raise LatticeInputError(
            "canonical form limited to rank <= %d (got %d)" % (max_rank, n))
    if n == 0:
        return lat
    red = reduce_basis(lat)
    bound = max(red.lattice.gram[i][i] for i in range(n))
    gl = lat.rows()

    best = None

    def search(bound):
        nonlocal best
        best = None
        pool = vectors_up_to(lat, bound).signed()
        pool_rows = [(lat.value(v), v, intmat.mat_vec(gl, list(v))) for v in pool]
        pool_rows.sort(key=lambda t: (t[0], t[1]))
        stack = []
        key_so_far = []

        def extend(k):
            # returns False if the pool was too small at some node
            nonlocal best
            cand = []
            for q, v, gw in pool_rows:
                brow = tuple(sum(v[a] * stack[j][2][a] for a in range(n))
                             for j in range(k))
                cand.append((_row_key(q, brow), q, v, gw, brow))
            cand.sort(key=lambda t: t[0])
            any_saturated = False
            for rk, q, v, gw, brow in cand:
                if best is not None:
                    # compare (key_so_far + rk) against best's prefix
                    prefix = key_so_far + [rk]
                    bprefix = best[0][: len(prefix)]
                    if prefix > bprefix:
                        break  # candidates sorted: all later ones worse
                rows = [list(s[1]) for s in stack] + [list(v)]
                if intmat.row_rank(rows) != k + 1:
                    continue
                if not all(d in (1, -1) for d in intmat.elementary_divisors(rows)):
                    continue
                any_saturated = True
                stack.append((q, v, gw))
                key_so_far.append(rk)
                if k + 1 == n:
                    cand_key = list(key_so_far)
                    if best is None or cand_key < best[0]:
                        g = matgram(lat, [list(s[1]) for s in stack])
                        best = (cand_key, tuple(tuple(r) for r in g))
                else:
                    if not extend(k + 1):
                        stack.pop()
                        key_so_far.pop()
                        return False
                stack.pop()
                key_so_far.pop()
            if not any_saturated and k < n:
                return False  # need a larger pool
            return True

        return extend(0)

    while not search(bound):
        bound *= 2
    return make_lattice([list(r) for r in best[1]])


def isometry_classes(lattices, max_rank=CANONICAL_RANK_LIMIT):
    """Deduplicate a list of lattices by isometry; returns canonical forms
    sorted by (det, gram)."""
    seen = {}
    for lat in lattices:
        c = canonical_form(lat, max_rank=max_rank)
        seen[c.gram] = c
    return sorted(seen.values(), key=lambda l: (volume(l), l.gram))


def eichler_decompose(lat):
    """Orthogonal decomposition into indecomposable primitive sublattices.

    Classical construction: vectors with Q up to the reduced diagonal generate
    the lattice; a vector is kept when it admits no splitting v = x + y with
    B(x, y) >= 0, and connected components of the nonzero-B graph on the kept
    vectors span the summands.
    """
    require_positive_definite(lat)
    n = lat.rank
    if n == 0:
        return []
    red = reduce_basis(lat)
    bound = max(red.lattice.gram[i][i] for i in range(n))
    pool = vectors_up_to(lat, bound)
    reps = list(pool.vectors)
    signed = pool.signed()
    by_value = {}
    for x in signed:
        by_value.setdefault(lat.value(x), []).append(x)

    def indecomposable_vector(v):
        qv = lat.value(v)
        for qx in sorted(by_value):
            if qx >= qv:
                break
            for x in by_value[qx]:
                y = tuple(a - b for a, b in zip(v, x))
                if any(y) and lat.bilinear(x, y) >= 0:
                    return False
        return True

    kept = [v for v in reps if indecomposable_vector(v)]
    # connected components under "B != 0"
    comp = {}

    def find(i):
        while comp[i] != i:
            comp[i] = comp[comp[i]]
            i = comp[i]
        return i

    for i in range(len(kept)):
        comp[i] = i
    for i in range(len(kept)):
        for j in range(i):
            if lat.bilinear(kept[i], kept[j]) != 0:
                ci, cj = find(i), find(j)
                if ci != cj:
                    comp[ci] = cj
    groups = {}
    for i in range(len(kept)):
        groups.setdefault(find(i), []).append(kept[i])
    subs = []
    for vs in groups.values():
        rows = intmat.row_saturation([list(v) for v in vs])
        subs.append(make_sublattice(lat, rows))
    subs.sort(key=lambda s: (len(s.coords),
                             canonical_form(make_lattice(
                                 matgram(lat, s.rows()))).gram))
    return subs


def is_indecomposable(lat):
    if lat.rank == 0:
        return False
    return len(eichler_decompose(lat)) == 1
