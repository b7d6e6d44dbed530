"""Nonsplit volume-minimizing flags and the decomposability checks built
on them.

For a primitive sublattice N of L, the candidate set collects primitive
rank-(n+1) overlattices M of primitively represented copies of N such that
the copy does not split M; the minimal-volume slice of that set drives the
flag construction.
"""

import itertools
from dataclasses import dataclass

from . import intmat
from .errors import EmptyDSetError, LatticeInputError
from .lattice import (GramLattice, SublatticeBasis, canonical_coords,
                      full_sublattice, index_in, induced_gram, make_lattice,
                      make_sublattice, orthogonal_sum, require_positive_definite,
                      splits, sublattices_of_index, volume, is_primitive)
from .reduction import minimum, shortest_vectors, vectors_with_value
from .represent import (canonical_form, is_indecomposable, is_represented,
                        representations)


@dataclass(frozen=True)
class Flag:
    ambient: GramLattice
    chain: tuple
    certificates: tuple

    @property
    def length(self):
        return len(self.chain)

    @property
    def is_maximal(self):
        return self.length == self.ambient.rank


@dataclass(frozen=True)
class FlagCheck:
    ok: bool
    reason: str = None

    def __bool__(self):
        return self.ok


def rank1_minimizers(lat):
    """Rank-1 sublattices spanned by the minimal vectors; all primitive."""
    require_positive_definite(lat)
    if lat.rank == 0:
        return []
    return [canonical_coords(make_sublattice(lat, [list(v)]))
            for v in shortest_vectors(lat).vectors]


def _completion(coords, n):
    """Unimodular matrix whose first rows span the same sublattice as coords."""
    if not coords:
        return intmat.identity(n)
    s, u, v = intmat.smith_normal_form([list(r) for r in coords])
    if any(s[i][i] not in (1, -1) for i in range(len(coords))):
        raise LatticeInputError("extensions require a primitive sublattice")
    return intmat.invert_unimodular(v)


def _quotient_form(sub):
    """(Pint, denom): the projection form away from sub on L/sub, scaled by
    denom = vol(sub) to be integral; plus the lift rows of the quotient basis."""
    lat = sub.parent
    n = lat.rank
    k = sub.rank
    w = _completion(sub.rows(), n)
    gw = intmat.matmul(intmat.matmul(w, lat.rows()), intmat.transpose(w))
    a = [row[:k] for row in gw[:k]]
    b = [row[k:] for row in gw[:k]]
    d = [row[k:] for row in gw[k:]]
    if k == 0:
        return [list(r) for r in d], 1, w
    det_a = intmat.det_bareiss(a)
    inv_a = intmat.invert_fraction(a)
    adj_a = intmat.fractions_to_ints(
        [[x * det_a for x in row] for row in inv_a])
    bt = intmat.transpose(b)
    pint = [[det_a * d[i][j] - sum(bt[i][s] * sum(adj_a[s][t] * b[t][j]
                                                  for t in range(k))
                                   for s in range(k))
             for j in range(n - k)] for i in range(n - k)]
    return pint, det_a, w


def extensions(sub):
    """Yield every primitive overlattice of sub of rank+1, in nondecreasing
    volume order (the yielded volume equals the scaled projection value)."""
    lat = sub.parent
    require_positive_definite(lat)
    if sub.rank >= lat.rank:
        raise LatticeInputError("extensions need rank(sub) < rank(parent)")
    if not is_primitive(sub):
        raise LatticeInputError("extensions require a primitive sublattice")
    pint, denom, w = _quotient_form(sub)
    qlat = make_lattice(pint)
    lift_rows = w[sub.rank:]
    base = sub.rows()
    for scaled in itertools.count(1):
        if scaled % denom != 0 and denom > 1:
            # volumes are integers: vol(M) = scaled/denom must be integral
            pass
        for wbar in vectors_with_value(qlat, scaled).vectors:
            if intmat.content(list(wbar)) != 1:
                continue
            wvec = [sum(wbar[i] * lift_rows[i][j] for i in range(len(wbar)))
                    for j in range(lat.rank)]
            yield canonical_coords(make_sublattice(lat, base + [wvec]))


def extension_volume(sub, ext):
    return volume(induced_gram(ext))


def _primitive_images(nsub):
    """Distinct images phi(N) in L over phi in R*(N, L), with one witness
    matrix each (least in row-major order)."""
    lat = nsub.parent
    nabs = induced_gram(nsub)
    images = {}
    for rep in representations(nabs, lat, primitive_only=True):
        img = canonical_coords(make_sublattice(lat, [list(r) for r in rep.matrix]))
        key = img.coords
        if key not in images or rep.matrix < images[key][1].matrix:
            images[key] = (img, rep)
    return [images[k] for k in sorted(images)]


def _splits_inside(outer_sub, inner_rows):
    """Does the sublattice given by inner_rows (coords in L) split the
    lattice spanned by outer_sub (coords in L)?"""
    a = intmat.fractions_to_ints(intmat.solve_left(outer_sub.rows(), inner_rows))
    return splits(make_sublattice(induced_gram(outer_sub), a))


def d_set(nsub, vol_cap):
    """All M in the nonsplit-extension set of nsub with vol(M) <= vol_cap."""
    lat = nsub.parent
    require_positive_definite(lat)
    if not is_primitive(nsub):
        raise LatticeInputError("d_set requires a primitive sublattice")
    out = {}
    for img, _rep in _primitive_images(nsub):
        for m in extensions(img):
            v = volume(induced_gram(m))
            if v > vol_cap:
                break
            if not _splits_inside(m, img.rows()):
                out[m.coords] = m
    return [out[k] for k in sorted(out)]


def _m_set_with_witnesses(nsub):
    lat = nsub.parent
    require_positive_definite(lat)
    if not is_primitive(nsub):
        raise LatticeInputError("m_set requires a primitive sublattice")
    images = _primitive_images(nsub)
    live = [(img, rep) for img, rep in images
            if not splits(make_sublattice(lat, img.rows()))]
    if not live:
        raise EmptyDSetError(
            "every primitive image splits the ambient lattice")
    # first pass: the minimal nonsplit volume over the live images
    floor = None
    for img, _rep in live:
        for m in extensions(img):
            v = volume(induced_gram(m))
            if floor is not None and v > floor:
                break
            if not _splits_inside(m, img.rows()):
                floor = v if floor is None else min(floor, v)
                break
    # second pass: collect everything at the floor volume
    found = {}
    for img, rep in live:
        for m in extensions(img):
            v = volume(induced_gram(m))
            if v > floor:
                break
            if not _splits_inside(m, img.rows()):
                if m.coords not in found or rep.matrix < found[m.coords][1].matrix:
                    found[m.coords] = (m, rep)
    return [found[k] for k in sorted(found)], floor


def m_set(nsub):
    """The volume-minimal slice of the nonsplit-extension set; raises
    EmptyDSetError when that set is empty."""
    pairs, _floor = _m_set_with_witnesses(nsub)
    return [m for m, _ in pairs]


def build_flag(lat):
    """Construct a maximal nonsplit volume-minimizing flag (indecomposable
    ambient lattices only), rebasing the chain through the chosen witness at
    every step as in the inductive construction."""
    require_positive_definite(lat)
    if not is_indecomposable(lat):
        raise LatticeInputError("flags are built over indecomposable lattices")
    n = lat.rank
    mins = rank1_minimizers(lat)
    first = min(mins, key=lambda s: s.coords)
    chain = [first]
    certs = [(minimum(lat), minimum(lat))]
    while len(chain) < n:
        top = chain[-1]
        pairs, floor = _m_set_with_witnesses(top)
        choice = min(pairs, key=lambda mr: (
            canonical_form(induced_gram(mr[0])).gram, mr[0].coords,
            mr[1].matrix))
        m, rep = choice
        phi = [list(r) for r in rep.matrix]
        new_chain = []
        for sub in chain:
            a = intmat.fractions_to_ints(
                intmat.solve_left(top.rows(), sub.rows()))
            new_chain.append(canonical_coords(
                make_sublattice(lat, intmat.matmul(a, phi))))
        new_chain.append(m)
        chain = new_chain
        certs.append((volume(induced_gram(m)), floor))
    return Flag(ambient=lat, chain=tuple(chain), certificates=tuple(certs))


def is_valid_flag(flag):
    """Re-verify every flag invariant from scratch (returns a reason code on
    failure), including that every representation of each chain member by the
    ambient lattice is primitive."""
    lat = flag.ambient
    chain = list(flag.chain)
    if not chain:
        return FlagCheck(False, "empty chain")
    for i, sub in enumerate(chain):
        if sub.parent.gram != lat.gram:
            return FlagCheck(False, "chain member %d has wrong parent" % (i + 1))
        if sub.rank != i + 1:
            return FlagCheck(False, "chain member %d has rank %d" % (i + 1, sub.rank))
        if not is_primitive(sub):
            return FlagCheck(False, "chain member %d is not primitive" % (i + 1))
    for i in range(1, len(chain)):
        prev, cur = chain[i - 1], chain[i]
        stacked = intmat.hnf_basis(cur.rows() + prev.rows())
        if stacked != intmat.hnf_basis(cur.rows()):
            return FlagCheck(False, "chain member %d does not contain member %d"
                             % (i + 1, i))
        if _splits_inside(cur, prev.rows()):
            return FlagCheck(False, "member %d splits member %d" % (i, i + 1))
    # volume-minimizing membership
    if volume(induced_gram(chain[0])) != minimum(lat):
        return FlagCheck(False, "first member does not minimize the volume")
    for i in range(1, len(chain)):
        try:
            members = m_set(chain[i - 1])
        except EmptyDSetError:
            return FlagCheck(False, "nonsplit-extension set empty at step %d" % (i + 1))
        if canonical_coords(chain[i]).coords not in {m.coords for m in members}:
            return FlagCheck(False, "member %d is not volume-minimal" % (i + 1))
    # every representation of every member by the ambient lattice is primitive
    for i, sub in enumerate(chain):
        for rep in representations(induced_gram(sub), lat):
            if not rep.is_primitive:
                return FlagCheck(False,
                                 "member %d has an imprimitive representation"
                                 % (i + 1))
    return FlagCheck(True)


@dataclass(frozen=True)
class RecoverabilityReport:
    ambient: GramLattice
    sum_gram: GramLattice
    represents_ambient: bool
    tested: tuple  # rows of (coords, rank, represented_by_sum)


def _is_proper(lat, part):
    if part.rank < lat.rank:
        return part.rank >= 1
    return index_in(part, full_sublattice(lat)) > 1


def check_nonrecoverability(lat, parts, index_bound):
    """Assemble the orthogonal sum of the given proper sublattices, assert it
    does not represent the ambient lattice, and test which bounded proper
    sublattices it does represent."""
    require_positive_definite(lat)
    if not is_indecomposable(lat):
        raise LatticeInputError("ambient lattice must be indecomposable")
    for p in parts:
        if p.parent.gram != lat.gram:
            raise LatticeInputError("part is not a sublattice of the ambient lattice")
        if not _is_proper(lat, p):
            raise LatticeInputError("part %r is not a proper sublattice" % (p.coords,))
    gsum = orthogonal_sum([induced_gram(p) for p in parts])
    represents = is_represented(lat, gsum)
    full = []
    for m in range(2, index_bound + 1):
        full.extend(sublattices_of_index(lat, m))
    lower = {}
    universe = [full_sublattice(lat)] + full
    for sub in universe:
        rows = sub.rows()
        for r in range(1, lat.rank):
            for combo in itertools.combinations(range(lat.rank), r):
                sat = intmat.row_saturation([rows[i] for i in combo])
                key = tuple(tuple(x) for x in sat)
                if key not in lower:
                    lower[key] = make_sublattice(lat, sat)
    tested = []
    for sub in full + [lower[k] for k in sorted(lower)]:
        ok = is_represented(induced_gram(sub), gsum)
        tested.append((sub.coords, sub.rank, ok))
    return RecoverabilityReport(ambient=lat, sum_gram=gsum,
                                represents_ambient=represents,
                                tested=tuple(tested))
