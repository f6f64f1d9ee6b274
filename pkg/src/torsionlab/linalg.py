"""Exact linear algebra helpers: rational elimination, integer Smith form, integer roots.

Everything here is deterministic and exact.  Rational matrices are tuples of
tuples of Fractions; integer matrices are lists of lists of ints.  No floating
point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Row = tuple[Fraction, ...]
Matrix = tuple[Row, ...]


def frac_rows(rows) -> Matrix:
    """Normalize any nested numeric iterable into a Fraction matrix."""
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def zeros(n: int, m: int) -> Matrix:
    return tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n))


def identity(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n)
    )


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, a: Matrix) -> Matrix:
    c = Fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def rref(rows) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form with unit pivots; returns (rows, pivot columns).

    Zero rows are dropped.  The result is the canonical basis of the row span,
    so equal spans give identical output.
    """
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [row for row in m[:r]], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def span_contains(basis, vec) -> bool:
    """True iff vec lies in the row span of basis (over the rationals)."""
    base, pivots = rref(basis)
    v = list(map(Fraction, vec))
    for row, p in zip(base, pivots):
        if v[p] != 0:
            f = v[p]
            v = [x - f * y for x, y in zip(v, row)]
    return all(x == 0 for x in v)


def span_leq(sub, sup) -> bool:
    """True iff span(sub) is contained in span(sup)."""
    base, pivots = rref(sup)
    for vec in sub:
        v = list(map(Fraction, vec))
        for row, p in zip(base, pivots):
            if v[p] != 0:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
        if any(x != 0 for x in v):
            return False
    return True


def span_intersect(a_basis, b_basis) -> list[list[Fraction]]:
    """Basis of span(a) ∩ span(b), by the kernel of the stacked coefficient map."""
    a = [list(map(Fraction, r)) for r in a_basis]
    b = [list(map(Fraction, r)) for r in b_basis]
    if not a or not b:
        return []
    na, nb = len(a), len(b)
    # solve sum x_i a_i - sum y_j b_j = 0; columns are the ambient coordinates
    stacked = [[a[i][k] for i in range(na)] + [-b[j][k] for j in range(nb)]
               for k in range(len(a[0]))]
    out = []
    for ker in nullspace(stacked):
        vec = [sum(ker[i] * a[i][k] for i in range(na)) for k in range(len(a[0]))]
        if any(x != 0 for x in vec):
            out.append(vec)
    base, _ = rref(out)
    return base


def nullspace(rows) -> list[list[Fraction]]:
    """Basis of the right kernel {x : rows @ x = 0}, free variables in order."""
    base, pivots = rref(rows)
    if not rows:
        return []
    ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, p in zip(base, pivots):
            v[p] = -row[fc]
        out.append(v)
    return out


def solve(rows, rhs):
    """One exact solution of rows @ x = rhs, or None if inconsistent.

    Free variables are set to zero, which makes the answer deterministic
    under the natural (lexicographic) column order.
    """
    if not rows:
        return None
    aug = [list(map(Fraction, r)) + [Fraction(v)] for r, v in zip(rows, rhs)]
    base, pivots = rref(aug)
    ncols = len(rows[0])
    x = [Fraction(0)] * ncols
    for row, p in zip(base, pivots):
        if p == ncols:
            return None  # pivot in the constant column: inconsistent
        x[p] = row[ncols]
    # verify (cheap, and guards against misuse with dependent rows)
    for r, v in zip(rows, rhs):
        if sum(Fraction(a) * b for a, b in zip(r, x)) != Fraction(v):
            return None
    return x


# ---------------------------------------------------------------------------
# integer matrices


def smith_normal_form(mat) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form over the integers: returns (D, U, V) with D = U @ mat @ V.

    U and V are unimodular; D is diagonal with d1 | d2 | ... (entries >= 0).
    Intended for the small matrices of the torsion model, not for bulk work.
    """
    a = [list(map(int, row)) for row in mat]
    n = len(a)
    m = len(a[0]) if n else 0
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def clear_pivot(t) -> bool:
        """Zero the column and row at pivot t; True when both are clean."""
        for i in range(t + 1, n):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                add_row(t, i, -q)
                if a[i][t]:
                    swap_rows(t, i)
                    return False
        for j in range(t + 1, m):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                add_col(t, j, -q)
                if a[t][j]:
                    swap_cols(t, j)
                    return False
        return True

    t = 0
    while t < min(n, m):
        best = None
        for i in range(t, n):
            for j in range(t, m):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while not clear_pivot(t):
            pass
        # pivot must divide the remaining block; merge an offending row and redo
        offender = next(
            ((i, j) for i in range(t + 1, n) for j in range(t + 1, m) if a[i][j] % a[t][t]),
            None,
        )
        if offender is not None:
            add_row(offender[0], t, 1)
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return a, u, v


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a non-negative integer, exactly."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0, k >= 1")
    if n == 0:
        return 0
    if k == 1:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    return x


def ceil_root(n: int, k: int) -> int:
    """Smallest integer r with r**k >= n (n >= 0)."""
    r = iroot(n, k)
    return r if r ** k == n else r + 1


def ceil_root_fraction(num: int, den: int, k: int) -> int:
    """Smallest integer t >= (num/den)^(1/k) for positive num/den."""
    t = iroot(num // den, k)
    while t ** k * den < num:
        t += 1
    while t > 0 and (t - 1) ** k * den >= num:
        t -= 1
    return t


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)
