"""Basis reduction and exhaustive short-vector enumeration.

All pruning is exact: the enumeration works with the fraction-free
Gram-Schmidt data (integer lambda/d arrays) and integer-scaled budgets, so no
floating point ever enters a decision.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt, lcm

from . import intmat
from .errors import NotPositiveDefinite
from .lattice import GramLattice, make_lattice, require_positive_definite

GREEDY_RANK_LIMIT = 6


@dataclass(frozen=True)
class ReducedBasis:
    lattice: GramLattice
    transform: tuple
    mu: tuple


@dataclass(frozen=True)
class VectorList:
    lattice: GramLattice
    vectors: tuple
    value_bound: int = None
    exact_value: int = None

    def signed(self):
        """Expand each +-pair representative into both signs."""
        out = []
        for v in self.vectors:
            out.append(v)
            out.append(tuple(-x for x in v))
        return out


def _int_gso(g):
    """Fraction-free Gram-Schmidt: d[0..n] leading minors, lam[i][j] = d[j+1]*mu_ij."""
    n = len(g)
    d = [1] * (n + 1)
    lam = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            u = g[i][j]
            for k in range(j):
                u = (d[k + 1] * u - lam[i][k] * lam[j][k]) // d[k]
            if j < i:
                lam[i][j] = u
            else:
                d[i + 1] = u
    return d, lam


def _lll_gram(g0, u0=None):
    """Exact LLL (delta = 99/100) on a Gram matrix; returns (gram, transform)."""
    n = len(g0)
    g = intmat.copy_matrix(g0)
    u = intmat.copy_matrix(u0) if u0 else intmat.identity(n)

    def rowop(k, j, q):
        # b_k -= q * b_j
        u[k] = [x - q * y for x, y in zip(u[k], u[j])]
        for t in range(n):
            g[k][t] -= q * g[j][t]
        for t in range(n):
            g[t][k] -= q * g[t][j]

    def swap(k):
        u[k], u[k - 1] = u[k - 1], u[k]
        g[k], g[k - 1] = g[k - 1], g[k]
        for row in g:
            row[k], row[k - 1] = row[k - 1], row[k]

    d, lam = _int_gso(g)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            if 2 * abs(lam[k][j]) > d[j + 1]:
                q = (2 * lam[k][j] + d[j + 1]) // (2 * d[j + 1])
                rowop(k, j, q)
                d, lam = _int_gso(g)
        if 100 * d[k + 1] * d[k - 1] < 99 * d[k] * d[k] - 100 * lam[k][k - 1] ** 2:
            swap(k)
            d, lam = _int_gso(g)
            k = max(k - 1, 1)
        else:
            k += 1
    return g, u


@lru_cache(maxsize=4096)
def _lll_cached(lat):
    g, u = _lll_gram(lat.rows())
    return tuple(tuple(r) for r in g), tuple(tuple(r) for r in u)


@lru_cache(maxsize=4096)
def _enum_ctx(lat):
    """Enumeration context on the LLL-reduced Gram of lat."""
    g, u = _lll_cached(lat)
    d, lam = _int_gso([list(r) for r in g])
    n = len(g)
    delta = 1
    for j in range(n):
        delta = lcm(delta, d[j + 1] * d[j])
    w = [delta // (d[j + 1] * d[j]) for j in range(n)]
    return d, lam, w, delta, u


def _zbound(budget, w):
    if budget < 0:
        return -1
    zb = isqrt(budget // w)
    while (zb + 1) * (zb + 1) * w <= budget:
        zb += 1
    return zb


def _enumerate(lat, cap, equality, limit=None):
    """Core search: coordinate vectors x (in lat's own basis) with
    Q(x) <= cap (equality=False) or Q(x) == cap (equality=True),
    one representative per +-pair.  Returns unsorted list of tuples."""
    n = lat.rank
    if n == 0 or cap < 0 or (equality and cap == 0):
        return []
    d, lam, w, delta, u = _enum_ctx(lat)
    found = []
    x = [0] * n
    cap_scaled = cap * delta

    def search(level, budget, leading):
        # budget = cap*delta - sum_{k>level} z_k^2 w_k
        acc = 0
        for i in range(level + 1, n):
            acc += lam[i][level] * x[i]
        dj = d[level + 1]
        if level == 0 and equality:
            if budget % w[0]:
                return False
            s2 = budget // w[0]
            s = isqrt(s2)
            if s * s != s2:
                return False
            for z in ((s, -s) if s else (s,)):
                if leading and z < 0:
                    continue
                num = z - acc
                if num % dj == 0:
                    x[0] = num // dj
                    if leading and x[0] < 0:
                        continue
                    found.append(tuple(x))
                    if limit is not None and len(found) >= limit:
                        return True
            return False
        zb = _zbound(budget, w[level])
        if zb < 0:
            return False
        hi = (zb - acc) // dj
        lo = -((zb + acc) // dj)
        if leading and lo < 0:
            lo = 0
        for xv in range(hi, lo - 1, -1):
            x[level] = xv
            z = dj * xv + acc
            rem = budget - z * z * w[level]
            if rem < 0:
                continue
            if level == 0:
                if xv == 0 and leading:
                    continue
                found.append(tuple(x))
                if limit is not None and len(found) >= limit:
                    return True
            else:
                if search(level - 1, rem, leading and xv == 0):
                    return True
        return False

    search(n - 1, cap_scaled, True)
    # map back to the original basis
    out = []
    for v in found:
        out.append(tuple(sum(v[i] * u[i][j] for i in range(n)) for j in range(n)))
    return out


def _canonical_rep(v):
    for x in v:
        if x > 0:
            return v
        if x < 0:
            return tuple(-y for y in v)
    return v


def _vector_sort_key(lat, v):
    return (lat.value(v), v)


def vectors_up_to(lat, c):
    """All nonzero vectors with Q(v) <= c, one per +-pair, sorted."""
    require_positive_definite(lat)
    if c < 0:
        raise ValueError("bound must be nonnegative")
    vs = [_canonical_rep(v) for v in _enumerate(lat, c, equality=False)]
    vs.sort(key=lambda v: _vector_sort_key(lat, v))
    return VectorList(lattice=lat, vectors=tuple(vs), value_bound=c)


def vectors_with_value(lat, m):
    """All vectors with Q(v) == m exactly, one per +-pair, sorted."""
    require_positive_definite(lat)
    vs = [_canonical_rep(v) for v in _enumerate(lat, m, equality=True)]
    vs.sort(key=lambda v: _vector_sort_key(lat, v))
    return VectorList(lattice=lat, vectors=tuple(vs), exact_value=m)


def represents_value(lat, m):
    """Fast existence test for a vector with Q(v) == m."""
    if m == 0:
        return False
    return bool(_enumerate(lat, m, equality=True, limit=1))


def minimum(lat):
    """The minimum of Q over nonzero vectors."""
    require_positive_definite(lat)
    if lat.rank == 0:
        raise ValueError("rank-0 lattice has no minimum")
    g, _ = _lll_cached(lat)
    bound = min(g[i][i] for i in range(lat.rank))
    best = bound
    for v in _enumerate(lat, bound, equality=False):
        q = lat.value(v)
        if q < best:
            best = q
    return best


def shortest_vectors(lat):
    return vectors_with_value(lat, minimum(lat))


def successive_minima(lat):
    """Greedy minima: mu_i = least Q(x) with x independent from the
    previously chosen vectors.  Returns (mu tuple, chosen vectors)."""
    require_positive_definite(lat)
    n = lat.rank
    g, _ = _lll_cached(lat)
    bound = max((g[i][i] for i in range(n)), default=0)
    pool = vectors_up_to(lat, bound).vectors
    chosen = []
    mu = []
    for v in pool:
        if len(chosen) == n:
            break
        if intmat.row_rank([list(w) for w in chosen] + [list(v)]) == len(chosen) + 1:
            chosen.append(v)
            mu.append(lat.value(v))
    return tuple(mu), tuple(chosen)


def _greedy_minkowski(lat):
    """Greedy basis: at each step the least-Q vector keeping the stack
    saturated (extendable to a basis).  Grows the search bound as needed."""
    n = lat.rank
    g, _ = _lll_cached(lat)
    bound = max(g[i][i] for i in range(n))
    chosen = []
    while len(chosen) < n:
        pool = vectors_up_to(lat, bound).vectors
        progressed = False
        for v in pool:
            if len(chosen) == n:
                break
            stack = [list(w) for w in chosen] + [list(v)]
            if intmat.row_rank(stack) != len(stack):
                continue
            if all(x in (1, -1) for x in intmat.elementary_divisors(stack)):
                chosen.append(v)
                progressed = True
        if len(chosen) < n:
            bound *= 2
            if not progressed and bound > 2 ** 40:
                raise RuntimeError("greedy reduction failed to complete a basis")
    return chosen


def _size_reduce(g, u):
    n = len(g)
    d, lam = _int_gso(g)
    for k in range(1, n):
        for j in range(k - 1, -1, -1):
            if 2 * abs(lam[k][j]) > d[j + 1]:
                q = (2 * lam[k][j] + d[j + 1]) // (2 * d[j + 1])
                u[k] = [x - q * y for x, y in zip(u[k], u[j])]
                for t in range(n):
                    g[k][t] -= q * g[j][t]
                for t in range(n):
                    g[t][k] -= q * g[t][j]
                d, lam = _int_gso(g)
    return g, u


def _normalize_signs(g, u):
    """Flip basis vectors so the first nonzero off-diagonal entry in each
    column (scanning rows upward from the diagonal) is nonnegative."""
    n = len(g)
    for j in range(1, n):
        lead = next((g[i][j] for i in range(j) if g[i][j] != 0), None)
        if lead is not None and lead < 0:
            u[j] = [-x for x in u[j]]
            for t in range(n):
                g[j][t] = -g[j][t]
            for t in range(n):
                g[t][j] = -g[t][j]
    return g, u


def reduce_basis(lat):
    """LLL plus (rank <= 6) greedy Minkowski refinement; canonical signs."""
    require_positive_definite(lat)
    n = lat.rank
    if n == 0:
        return ReducedBasis(lattice=lat, transform=(), mu=())
    if n <= GREEDY_RANK_LIMIT:
        rows = _greedy_minkowski(lat)
        u = [list(r) for r in rows]
        g = intmat.matmul(intmat.matmul(u, lat.rows()), intmat.transpose(u))
        g, u = _size_reduce(g, u)
    else:
        g, u = _lll_cached(lat)
        g, u = [list(r) for r in g], [list(r) for r in u]
    g, u = _normalize_signs(g, u)
    mu, _ = successive_minima(lat)
    return ReducedBasis(lattice=make_lattice(g),
                        transform=tuple(tuple(r) for r in u),
                        mu=mu)
