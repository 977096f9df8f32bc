"""Independent oracles used to cross-check the library.

Everything here is deliberately naive and exact (Fraction arithmetic,
exhaustive subset enumeration) so it can serve as ground truth.
"""

from fractions import Fraction
from itertools import combinations


def _solve_exact(matrix, rhs):
    """Gaussian elimination over the rationals; None if inconsistent."""
    rows = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    n_cols = len(matrix[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][-1] != 0:
            return None
    sol = [Fraction(0)] * n_cols
    for i, c in enumerate(pivots):
        sol[c] = rows[i][-1]
    return sol


def hull_membership_oracle(v, points):
    """Whether v lies in the convex hull of points, by Caratheodory.

    v is in the hull iff some subset of at most d+1 points admits exact
    nonnegative barycentric coordinates summing to one.
    """
    points = list(dict.fromkeys(points))
    if not points:
        return False
    d = len(points[0])
    for size in range(1, min(len(points), d + 1) + 1):
        for sub in combinations(points, size):
            # Rows: one per coordinate, plus the affine constraint.
            matrix = [[p[i] for p in sub] for i in range(d)]
            matrix.append([1] * size)
            rhs = list(v) + [1]
            sol = _solve_exact(matrix, rhs)
            if sol is not None and all(x >= 0 for x in sol):
                # Solvers may leave free variables at zero; re-check.
                ok = all(
                    sum(s * p[i] for s, p in zip(sol, sub)) == v[i]
                    for i in range(d)
                ) and sum(sol) == 1
                if ok:
                    return True
    return False


def closure_oracle_z(points):
    """All lattice points of the hull of a Z^d point set, by the oracle."""
    if not points:
        return set()
    d = len(points[0])
    los = [min(p[i] for p in points) for i in range(d)]
    his = [max(p[i] for p in points) for i in range(d)]
    out = set()

    def walk(prefix):
        if len(prefix) == d:
            if hull_membership_oracle(tuple(prefix), points):
                out.add(tuple(prefix))
            return
        i = len(prefix)
        for x in range(los[i], his[i] + 1):
            walk(prefix + [x])

    walk([])
    return out


def legal_patterns_bruteforce(region, family):
    """Every locally legal assignment on a region, by full enumeration."""
    from itertools import product

    from tepkit.families import Pattern
    from tepkit.tep import is_locally_legal

    out = []
    for values in product(range(family.alphabet.size), repeat=len(region)):
        p = Pattern(region, values)
        if is_locally_legal(p, family):
            out.append(values)
    return out
