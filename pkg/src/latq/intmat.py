"""Exact integer matrix helpers: products, determinants, HNF/SNF, kernels.

All matrices are lists (or tuples) of rows of Python ints; arithmetic is
arbitrary precision throughout.
"""

from fractions import Fraction
from math import gcd


def dims(m):
    return len(m), len(m[0]) if m else 0


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def copy_matrix(m):
    return [list(row) for row in m]


def transpose(m):
    return [list(col) for col in zip(*m)] if m else []


def matmul(a, b):
    if not a or not b:
        return []
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m, v):
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def vec_mat(v, m):
    return [sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0]))] if m else []


def is_symmetric(m):
    n = len(m)
    return all(len(row) == n for row in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i)
    )


def det_bareiss(m):
    """Determinant by fraction-free Gaussian elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = copy_matrix(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def leading_principal_minors(m):
    """All leading principal minors, exactly (Bareiss pivots give them directly)."""
    return [det_bareiss([row[: k + 1] for row in m[: k + 1]]) for k in range(len(m))]


def hermite_normal_form(m):
    """Row-style HNF: returns (H, U) with U unimodular and U*M = H.

    Pivots are positive; entries above each pivot are reduced into [0, pivot).
    Zero rows trail.
    """
    nrows, ncols = dims(m)
    h = copy_matrix(m)
    u = identity(nrows)
    pivot_row = 0
    for col in range(ncols):
        # clear below using extended gcd row ops
        piv = None
        for r in range(pivot_row, nrows):
            if h[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        h[pivot_row], h[piv] = h[piv], h[pivot_row]
        u[pivot_row], u[piv] = u[piv], u[pivot_row]
        for r in range(pivot_row + 1, nrows):
            while h[r][col] != 0:
                a, b = h[pivot_row][col], h[r][col]
                if abs(a) > abs(b):
                    h[pivot_row], h[r] = h[r], h[pivot_row]
                    u[pivot_row], u[r] = u[r], u[pivot_row]
                    continue
                q = h[r][col] // h[pivot_row][col]
                if q:
                    h[r] = [x - q * y for x, y in zip(h[r], h[pivot_row])]
                    u[r] = [x - q * y for x, y in zip(u[r], u[pivot_row])]
                else:
                    break
        if h[pivot_row][col] < 0:
            h[pivot_row] = [-x for x in h[pivot_row]]
            u[pivot_row] = [-x for x in u[pivot_row]]
        # reduce entries above the pivot into [0, pivot)
        p = h[pivot_row][col]
        for r in range(pivot_row):
            q = h[r][col] // p
            if q:
                h[r] = [x - q * y for x, y in zip(h[r], h[pivot_row])]
                u[r] = [x - q * y for x, y in zip(u[r], u[pivot_row])]
        pivot_row += 1
        if pivot_row == nrows:
            break
    return h, u


def hnf_basis(m):
    """Nonzero rows of the HNF of m: a canonical basis of the row lattice."""
    h, _ = hermite_normal_form(m)
    return [row for row in h if any(row)]


def smith_normal_form(m):
    """Returns (S, U, V) with U, V unimodular and U*M*V = S diagonal,
    each diagonal entry dividing the next."""
    nrows, ncols = dims(m)
    s = copy_matrix(m)
    u = identity(nrows)
    v = identity(ncols)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, q):
        s[dst] = [x - q * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def addmul_col(dst, src, q):
        for row in s:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    t = 0
    while t < min(nrows, ncols):
        # find a pivot
        piv = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if s[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, nrows):
                while s[i][t] != 0:
                    q = s[i][t] // s[t][t]
                    addmul_row(i, t, q)
                    if s[i][t] != 0:
                        swap_rows(i, t)
                        dirty = True
            for j in range(t + 1, ncols):
                while s[t][j] != 0:
                    q = s[t][j] // s[t][t]
                    addmul_col(j, t, q)
                    if s[t][j] != 0:
                        swap_cols(j, t)
                        dirty = True
            if not dirty:
                break
        # divisibility: s[t][t] must divide everything below-right
        fixed = True
        for i in range(t + 1, nrows):
            for j in range(t + 1, ncols):
                if s[i][j] % s[t][t] != 0:
                    addmul_row(t, i, -1)
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            if s[t][t] < 0:
                s[t] = [-x for x in s[t]]
                u[t] = [-x for x in u[t]]
            t += 1
    return s, u, v


def elementary_divisors(m):
    s, _, _ = smith_normal_form(m)
    return [s[i][i] for i in range(min(dims(m))) if s[i][i] != 0]


def row_rank(m):
    return len(elementary_divisors(m))


def row_saturation(m):
    """Basis (HNF rows) of the saturation of the row lattice of m:
    (Q-span of rows) intersected with Z^n."""
    nrows, ncols = dims(m)
    s, _, v = smith_normal_form(m)
    r = sum(1 for i in range(min(nrows, ncols)) if s[i][i] != 0)
    # M = U^-1 S V^-1, so the Q-row-span is spanned by the first r rows
    # of V^-1, which are primitive
    vinv = invert_unimodular(v)
    return hnf_basis(vinv[:r])


def right_kernel(m):
    """Saturated basis of {x : M x = 0} over Z, as rows."""
    nrows, ncols = dims(m)
    if ncols == 0:
        return []
    if nrows == 0:
        return identity(ncols)
    s, _, v = smith_normal_form(m)
    r = sum(1 for i in range(min(nrows, ncols)) if s[i][i] != 0)
    cols = transpose(v)
    return hnf_basis(cols[r:]) if r < ncols else []


def invert_unimodular(m):
    """Exact inverse of a matrix with det +-1."""
    n = len(m)
    h, u = hermite_normal_form(m)
    if any(h[i][i] not in (1, -1) for i in range(n)):
        raise ValueError("matrix is not unimodular")
    # h is identity up to signs on the diagonal; fold them into u
    for i in range(n):
        if h[i][i] == -1:
            u[i] = [-x for x in u[i]]
    return u


def invert_fraction(m):
    """Exact inverse over Q as a Fraction matrix."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def solve_left(a, b):
    """X with X*A = B over Q (A has full row rank); Fraction entries."""
    if not a:
        return [[] for _ in range(len(b))]
    at = transpose(a)
    return [_solve_lin(at, row) for row in b]


def _solve_lin(a, b):
    """One exact solution x (Fractions) of A x = b, A full column rank."""
    nrows, ncols = dims(a)
    aug = [[Fraction(a[i][j]) for j in range(ncols)] + [Fraction(b[i])]
           for i in range(nrows)]
    row = 0
    pivots = []
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(nrows):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    for r in range(row, nrows):
        if aug[r][ncols] != 0:
            raise ValueError("inconsistent linear system")
    x = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        x[col] = aug[r][ncols]
    return x


def fractions_to_ints(rows):
    """Convert a Fraction matrix known to be integral; raises otherwise."""
    out = []
    for row in rows:
        r = []
        for x in row:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError("entry %s is not an integer" % x)
                r.append(int(x))
            else:
                r.append(int(x))
        out.append(r)
    return out


def content(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return g
