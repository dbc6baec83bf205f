"""Dense exact linear algebra over the integers.

Matrices are plain ``list[list[int]]`` with Python's arbitrary-precision
integers; a matrix with zero rows or columns is represented with explicit
shape arguments where needed.  Pivots are chosen by minimal absolute value
because intermediate entry blowup is the known failure mode of integer
elimination.
"""

from .errors import InternalInvariantError

Matrix = list


def shape(a, ncols=None):
    m = len(a)
    if m:
        return m, len(a[0])
    if ncols is None:
        return 0, 0
    return 0, ncols


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def identity(n):
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def copy_matrix(a):
    return [row[:] for row in a]


def transpose(a, ncols=None):
    m, n = shape(a, ncols)
    return [[a[i][j] for i in range(m)] for j in range(n)]


def matmul(a, b, a_cols=None, b_cols=None):
    # row counts are always len(); column counts of empty matrices are
    # unknowable, so they are inferred from the other operand when needed
    m = len(a)
    n = len(a[0]) if m else a_cols
    n2 = len(b)
    p = len(b[0]) if n2 else b_cols
    if n is not None and n != n2:
        raise InternalInvariantError(f"matmul shape mismatch {m}x{n} * {n2}x{p}")
    if p is None:
        p = 0
    out = zeros(m, p)
    for i in range(m):
        row = a[i]
        acc = out[i]
        for k in range(n):
            v = row[k]
            if v:
                brow = b[k]
                for j in range(p):
                    w = brow[j]
                    if w:
                        acc[j] += v * w
    return out


def stack_rows(blocks, ncols):
    out = []
    for blk in blocks:
        out.extend(copy_matrix(blk))
    if not out:
        return []
    for row in out:
        if len(row) != ncols:
            raise InternalInvariantError("stack_rows: ragged blocks")
    return out


def _swap_rows(a, i, j):
    if i != j:
        a[i], a[j] = a[j], a[i]


def _swap_cols(a, i, j):
    if i != j:
        for row in a:
            row[i], row[j] = row[j], row[i]


def _add_row(a, dst, src, factor):
    if factor:
        rs = a[src]
        rd = a[dst]
        for j in range(len(rd)):
            rd[j] += factor * rs[j]


def _add_col(a, dst, src, factor):
    if factor:
        for row in a:
            row[dst] += factor * row[src]


def _negate_row(a, i):
    a[i] = [-v for v in a[i]]


def smith_normal_form(a, ncols=None):
    """Diagonalize ``a`` by unimodular row/column operations.

    Returns ``(d, u, v)`` with ``u @ a @ v == d``, ``d`` diagonal with
    nonnegative entries in a divisibility chain and zeros last.
    """
    m, n = shape(a, ncols)
    d = copy_matrix(a)
    u = identity(m)
    v = identity(n)
    r = min(m, n)
    t = 0
    while t < r:
        pivot = _find_pivot(d, t, m, n)
        if pivot is None:
            break
        pi, pj = pivot
        _swap_rows(d, t, pi)
        _swap_rows(u, t, pi)
        _swap_cols(d, t, pj)
        _swap_cols(v, t, pj)
        while True:
            # clear column t completely first: row operations against a
            # dirty column let entries in the rest of the matrix mix and
            # blow up, so remainders are swapped into the pivot (strictly
            # shrinking it) and the scan restarts until the column is clean
            while True:
                swapped = False
                for i in range(t + 1, m):
                    val = d[i][t]
                    if val:
                        q = val // d[t][t]
                        if q:
                            _add_row(d, i, t, -q)
                            _add_row(u, i, t, -q)
                        if d[i][t]:
                            _swap_rows(d, t, i)
                            _swap_rows(u, t, i)
                            swapped = True
                if not swapped:
                    break
            # with the column clear these column operations touch row t only
            row_swapped = False
            for j in range(t + 1, n):
                val = d[t][j]
                if val:
                    q = val // d[t][t]
                    if q:
                        _add_col(d, j, t, -q)
                        _add_col(v, j, t, -q)
                    if d[t][j]:
                        _swap_cols(d, t, j)
                        _swap_cols(v, t, j)
                        row_swapped = True
            if not row_swapped:
                break
        t += 1
    _normalize_diagonal(d, u, v, m, n)
    return d, u, v


def _find_pivot(d, t, m, n):
    best = None
    where = None
    for i in range(t, m):
        row = d[i]
        for j in range(t, n):
            val = row[j]
            if val:
                a = abs(val)
                if best is None or a < best:
                    best = a
                    where = (i, j)
                    if a == 1:
                        return where
    return where


def _normalize_diagonal(d, u, v, m, n):
    r = min(m, n)
    for i in range(r):
        if d[i][i] < 0:
            _negate_row(d, i)
            _negate_row(u, i)
    # push zeros to the end, then repair divisibility pairwise
    while True:
        moved = False
        for i in range(r - 1):
            if d[i][i] == 0 and d[i + 1][i + 1] != 0:
                _swap_rows(d, i, i + 1)
                _swap_rows(u, i, i + 1)
                _swap_cols(d, i, i + 1)
                _swap_cols(v, i, i + 1)
                moved = True
        if not moved:
            break
    while True:
        fixed = True
        for i in range(r - 1):
            a, b = d[i][i], d[i + 1][i + 1]
            if a and b and b % a:
                _pair_reduce(d, u, v, i, i + 1)
                fixed = False
        if fixed:
            break


def _pair_reduce(d, u, v, i, j):
    # turn diag(a, b) with a not dividing b into diag(gcd, +-lcm)
    _add_row(d, i, j, 1)
    _add_row(u, i, j, 1)
    # row i is now (a, b) on columns (i, j); euclid on those two columns
    while d[i][j]:
        q = d[i][i] // d[i][j]
        _add_col(d, i, j, -q)
        _add_col(v, i, j, -q)
        _swap_cols(d, i, j)
        _swap_cols(v, i, j)
    if d[j][i]:
        q = d[j][i] // d[i][i]
        _add_row(d, j, i, -q)
        _add_row(u, j, i, -q)
        if d[j][i]:
            raise InternalInvariantError("pair reduction failed to clear row")
    if d[i][i] < 0:
        _negate_row(d, i)
        _negate_row(u, i)
    if d[j][j] < 0:
        _negate_row(d, j)
        _negate_row(u, j)


def diagonal(d, m=None, n=None):
    if m is None:
        m, n = shape(d)
    r = min(m, n)
    return [d[i][i] for i in range(r)]


def invariant_factors(a, ncols=None):
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    m, n = shape(a, ncols)
    d, _, _ = smith_normal_form(a, ncols=n)
    return [x for x in diagonal(d, m, n) if x]


def cokernel_invariants(a, ncols=None):
    """``(rank, torsion)`` of ``Z^m / column-lattice(a)`` for an m x n map."""
    m, n = shape(a, ncols)
    facs = invariant_factors(a, ncols=n)
    rank = m - len(facs)
    torsion = [x for x in facs if x != 1]
    return rank, torsion


def kernel_basis(a, ncols=None):
    """Columns spanning ``ker(a)`` as a matrix (n x p); saturated lattice."""
    m, n = shape(a, ncols)
    if n == 0:
        return [], 0
    d, _, v = smith_normal_form(a, ncols=n)
    r = min(m, n)
    free = [j for j in range(n) if j >= r or d[j][j] == 0]
    basis = [[v[i][j] for j in free] for i in range(n)]
    return basis, len(free)


def solve_columns(a, b, a_cols=None, b_cols=None):
    """Integer solve ``a @ x == b`` column by column.

    Raises ``InternalInvariantError`` when no integer solution exists; all
    call sites in this package only solve systems that are solvable by
    construction.
    """
    m, n = shape(a, a_cols)
    mb, p = shape(b, b_cols)
    if m != mb:
        raise InternalInvariantError("solve_columns: row mismatch")
    if p == 0:
        return [[] for _ in range(n)], 0
    d, u, v = smith_normal_form(a, ncols=n)
    y = matmul(u, b, b_cols=p)
    r = min(m, n)
    z = zeros(n, p)
    for i in range(m):
        di = d[i][i] if i < r else 0
        for j in range(p):
            val = y[i][j]
            if di:
                if val % di:
                    raise InternalInvariantError("solve_columns: no integer solution")
                if i < n:
                    z[i][j] = val // di
            elif val:
                raise InternalInvariantError("solve_columns: inconsistent system")
    x = matmul(v, z, b_cols=p)
    return x, p


def quotient_invariants(span, sub, span_cols=None, sub_cols=None):
    """Invariants of ``lattice(span) / lattice(sub)`` with ``sub`` inside the
    span; both given by columns over the same ambient Z^m."""
    _, k = shape(span, span_cols)
    if k == 0:
        return 0, []
    coords, p = solve_columns(span, sub, a_cols=span_cols, b_cols=sub_cols)
    if p == 0:
        return k, []
    return cokernel_invariants(coords, ncols=p)
