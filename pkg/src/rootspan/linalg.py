"""Exact linear algebra over the rationals: row reduction, kernels, Smith form.

All matrices are lists of lists whose entries are ints or fractions.Fraction;
results stay exact.  Sizes here are tiny (rank <= 10), so clarity wins over
asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def mat_copy(m):
    return [[Fraction(x) for x in row] for row in m]


def rref(m):
    """Reduced row echelon form.  Returns (rref_rows, pivot_columns)."""
    a = mat_copy(m)
    if not a:
        return a, []
    rows, cols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m):
    return len(rref(m)[1])


def kernel_basis(m):
    """Basis of the right kernel {v : m v = 0}, as primitive integer vectors."""
    if not m:
        return []
    cols = len(m[0])
    red, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(primitive_vector(v))
    return basis


def solve(m, b):
    """One exact solution of m x = b, or None if inconsistent."""
    if not m:
        return None
    rows, cols = len(m), len(m[0])
    aug = [[Fraction(x) for x in m[i]] + [Fraction(b[i])] for i in range(rows)]
    red, pivots = rref(aug)
    for row in red:
        if all(x == 0 for x in row[:cols]) and row[cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(p for p in pivots if p < cols):
        x[pc] = red[r][cols]
    return x


def invert(m):
    n = len(m)
    aug = [[Fraction(x) for x in m[i]] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red[:n]]


def mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b)))
             for j in range(len(b[0]))] for i in range(len(a))]


def mat_vec(m, v):
    return [sum(row[j] * v[j] for j in range(len(v))) for row in m]


def primitive_vector(v):
    """Scale a rational vector to a coprime integer vector, first nonzero > 0."""
    denoms = lcm(*[Fraction(x).denominator for x in v]) if v else 1
    ints = [int(Fraction(x) * denoms) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x != 0), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return [Fraction(x) for x in ints]


def smith_normal_form(m):
    """Elementary divisors of an integer matrix (nonzero ones, in order)."""
    a = [[int(x) for x in row] for row in m]
    if not a or not a[0]:
        return []
    rows, cols = len(a), len(a[0])
    divisors = []
    top = 0
    left = 0
    while top < rows and left < cols:
        # Find a nonzero pivot of minimal absolute value.
        best = None
        for i in range(top, rows):
            for j in range(left, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        a[top], a[bi] = a[bi], a[top]
        for row in a:
            row[left], row[bj] = row[bj], row[left]
        p = a[top][left]
        done = True
        for i in range(top + 1, rows):
            q = a[i][left] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[top])]
            if a[i][left] != 0:
                done = False
        for j in range(left + 1, cols):
            q = a[top][j] // p
            if q:
                for i in range(rows):
                    a[i][j] -= q * a[i][left]
            if a[top][j] != 0:
                done = False
        if not done:
            continue
        # Pivot must divide every remaining entry for true SNF.
        fix = next(((i, j) for i in range(top + 1, rows) for j in range(left + 1, cols)
                    if a[i][j] % p != 0), None)
        if fix is not None:
            a[top] = [x + y for x, y in zip(a[top], a[fix[0]])]
            continue
        divisors.append(abs(p))
        top += 1
        left += 1
    return divisors


def is_positive_semidefinite(gram):
    """Exact PSD test for a symmetric rational matrix via pivoted elimination.

    A symmetric matrix is PSD iff elimination on nonzero diagonal pivots keeps
    all pivots positive and any zero diagonal entry has an all-zero row in the
    remaining block.
    """
    a = mat_copy(gram)
    n = len(a)
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            return all(a[i][j] == 0 for i in active for j in active)
        if a[piv][piv] < 0:
            return False
        active.remove(piv)
        p = a[piv][piv]
        for i in active:
            f = a[i][piv] / p
            if f != 0:
                for j in active:
                    a[i][j] -= f * a[piv][j]
                a[i][piv] = Fraction(0)
                a[piv][i] = Fraction(0)
    return True
