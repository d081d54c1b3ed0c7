"""Exact rational linear algebra: Gaussian elimination and phase-one simplex.

Problems here are small (tens of variables, a handful of rows), so a dense
tableau over ``Fraction`` with Bland's rule is plenty and never cycles.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

Vector = tuple[Fraction, ...]


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def scale(c: Fraction, u: Sequence[Fraction]) -> Vector:
    return tuple(c * a for a in u)


def combination(coeffs: Sequence[Fraction], points: Sequence[Sequence[Fraction]]) -> Vector:
    d = len(points[0])
    out = [Fraction(0)] * d
    for c, p in zip(coeffs, points):
        if c:
            for k in range(d):
                out[k] += c * p[k]
    return tuple(out)


def solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Vector | None:
    """Solve a square system exactly; None when singular."""
    n = len(matrix)
    rows = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return None
        rows[col], rows[pivot] = rows[pivot], rows[col]
        piv = rows[col][col]
        rows[col] = [v / piv for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return tuple(rows[r][n] for r in range(n))


def null_vector(columns: Sequence[Sequence[Fraction]]) -> Vector | None:
    """A nonzero c with sum_j c_j * columns[j] = 0, or None if independent."""
    m = len(columns[0]) if columns else 0
    k = len(columns)
    rows = [[Fraction(columns[j][i]) for j in range(k)] for i in range(m)]
    pivots: list[int] = []
    r = 0
    for col in range(k):
        pivot = next((i for i in range(r, m) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        piv = rows[r][col]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    free = next((c for c in range(k) if c not in pivots), None)
    if free is None:
        return None
    vec = [Fraction(0)] * k
    vec[free] = Fraction(1)
    for i, col in enumerate(pivots):
        vec[col] = -rows[i][free]
    return tuple(vec)


def feasible_nonneg(a_eq: Sequence[Sequence[Fraction]], b_eq: Sequence[Fraction]) -> Vector | None:
    """A basic feasible solution of {A x = b, x >= 0}, or None if infeasible.

    The returned point is a vertex, so it has at most ``len(b_eq)`` nonzero
    entries.
    """
    m = len(b_eq)
    n = len(a_eq[0]) if m else 0
    if m == 0:
        return tuple(Fraction(0) for _ in range(n))
    rows: list[list[Fraction]] = []
    for row, b in zip(a_eq, b_eq):
        row = [Fraction(v) for v in row]
        b = Fraction(b)
        if b < 0:
            row = [-v for v in row]
            b = -b
        rows.append(row + [Fraction(int(i == len(rows))) for i in range(m)] + [b])
    width = n + m
    basis = list(range(n, n + m))
    # phase-one objective: minimize the artificials; reduced costs as a row
    cost = [Fraction(0)] * (width + 1)
    for row in rows:
        for j in range(width + 1):
            cost[j] -= row[j]
    for j in range(n, n + m):
        cost[j] = Fraction(0)
    while True:
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        best = None
        for i, row in enumerate(rows):
            if row[entering] > 0:
                ratio = row[width] / row[entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            # unbounded direction cannot occur in phase one (objective >= 0)
            break
        i = best[1]
        piv = rows[i][entering]
        rows[i] = [v / piv for v in rows[i]]
        for k, row in enumerate(rows):
            if k != i and row[entering] != 0:
                f = row[entering]
                rows[k] = [a - f * b for a, b in zip(row, rows[i])]
        if cost[entering] != 0:
            f = cost[entering]
            cost = [a - f * b for a, b in zip(cost, rows[i])]
        basis[i] = entering
    if cost[width] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rows[i][width]
    return tuple(x)


def feasible(
    constraints: Sequence[tuple[Sequence[Fraction], str, Fraction]],
    nvars: int,
    free: Sequence[int] = (),
) -> Vector | None:
    """Find x with every ``(coeffs, op, rhs)`` holding, op in {'<=', '>=', '=='}.

    Variables listed in ``free`` are unrestricted, the rest are >= 0.
    """
    free = sorted(set(free))
    # column layout: original vars, negative parts of free vars, slacks
    n_slack = sum(1 for _, op, _ in constraints if op != "==")
    width = nvars + len(free) + n_slack
    a_eq: list[list[Fraction]] = []
    b_eq: list[Fraction] = []
    s = nvars + len(free)
    for coeffs, op, rhs in constraints:
        row = [Fraction(0)] * width
        for j, c in enumerate(coeffs):
            row[j] = Fraction(c)
        for k, j in enumerate(free):
            row[nvars + k] = -row[j]
        if op == "<=":
            row[s] = Fraction(1)
            s += 1
        elif op == ">=":
            row[s] = Fraction(-1)
            s += 1
        elif op != "==":
            raise ValueError(f"unknown constraint operator {op!r}")
        a_eq.append(row)
        b_eq.append(Fraction(rhs))
    sol = feasible_nonneg(a_eq, b_eq)
    if sol is None:
        return None
    x = list(sol[:nvars])
    for k, j in enumerate(free):
        x[j] -= sol[nvars + k]
    return tuple(x)
