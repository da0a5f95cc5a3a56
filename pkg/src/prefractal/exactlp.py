"""Dense exact-arithmetic simplex for small linear programs.

Written as an independent oracle for shortest-path duality checks, so it
deliberately shares no code with the graph machinery: a plain tableau
over Fractions with Bland's anti-cycling rule. Sizes stay in the dozens
of rows, where exactness matters more than speed.
"""

from __future__ import annotations

from fractions import Fraction


class Unbounded(Exception):
    pass


class Infeasible(Exception):
    pass


def _pivot(tableau, basis, row, col):
    piv = tableau[row][col]
    tableau[row] = [e / piv for e in tableau[row]]
    for r in range(len(tableau)):
        if r != row and tableau[r][col] != 0:
            f = tableau[r][col]
            tableau[r] = [e - f * p for e, p in zip(tableau[r], tableau[row])]
    basis[row] = col


def _bland_solve(tableau, basis, n_cols):
    """Run simplex to optimality on a feasible tableau (last row = -z)."""
    while True:
        obj = tableau[-1]
        col = next((j for j in range(n_cols) if obj[j] < 0), None)
        if col is None:
            return
        best = None
        for r in range(len(tableau) - 1):
            a = tableau[r][col]
            if a > 0:
                ratio = tableau[r][-1] / a
                key = (ratio, basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:
            raise Unbounded("column %d has no blocking row" % col)
        _pivot(tableau, basis, best[1], col)


def maximize(c, a_ub, b_ub):
    """max c.x subject to a_ub.x <= b_ub, x >= 0, exactly.

    Returns (optimal value, solution list). Negative right-hand sides are
    handled by a phase-1 with artificial variables; raises Infeasible or
    Unbounded accordingly.
    """
    m = len(a_ub)
    n = len(c)
    c = [Fraction(v) for v in c]
    rows = [[Fraction(v) for v in row] for row in a_ub]
    b = [Fraction(v) for v in b_ub]
    if any(len(r) != n for r in rows):
        raise ValueError("constraint width does not match objective length")

    need_phase1 = any(v < 0 for v in b)
    n_art = sum(1 for v in b if v < 0) if need_phase1 else 0
    width = n + m + n_art + 1
    tableau = []
    basis = []
    art_cols = []
    next_art = n + m
    for i in range(m):
        row = [Fraction(0)] * width
        sign = -1 if b[i] < 0 else 1
        for j in range(n):
            row[j] = sign * rows[i][j]
        row[n + i] = Fraction(sign)
        row[-1] = sign * b[i]
        if sign < 0:
            row[next_art] = Fraction(1)
            art_cols.append(next_art)
            basis.append(next_art)
            next_art += 1
        else:
            basis.append(n + i)
        tableau.append(row)

    if need_phase1:
        obj = [Fraction(0)] * width
        for col in art_cols:
            obj[col] = Fraction(1)
        tableau.append(obj)
        # price out the artificial basis
        for r, col in enumerate(basis):
            if col in art_cols:
                tableau[-1] = [e - t for e, t in zip(tableau[-1], tableau[r])]
        _bland_solve(tableau, basis, n + m + n_art)
        if tableau[-1][-1] != 0:
            raise Infeasible("phase-1 optimum is nonzero")
        tableau.pop()
        # drive any artificial variable out of the basis where possible;
        # a stuck one sits at value zero and never re-enters (the entering
        # scan below stops at column n + m)
        for r, col in enumerate(basis):
            if col in art_cols:
                piv_col = next((j for j in range(n + m)
                                if tableau[r][j] != 0), None)
                if piv_col is not None:
                    _pivot(tableau, basis, r, piv_col)

    obj = [Fraction(0)] * width
    for j in range(n):
        obj[j] = -c[j]
    tableau.append(obj)
    for r, col in enumerate(basis):
        if col < n and tableau[-1][col] != 0:
            f = tableau[-1][col]
            tableau[-1] = [e - f * t for e, t in zip(tableau[-1], tableau[r])]
    _bland_solve(tableau, basis, n + m)

    x = [Fraction(0)] * n
    for r, col in enumerate(basis):
        if col < n:
            x[col] = tableau[r][-1]
    return tableau[-1][-1], x


def max_difference_objective(n_vars, constraints, plus: int, minus: int):
    """max h[plus] - h[minus] over free h with h[a] - h[b] <= w constraints.

    Every free variable is split h = p - q with p,q >= 0, which keeps all
    right-hand sides nonnegative (weights are) and phase 1 unnecessary.
    Returns the exact optimum.
    """
    c = [Fraction(0)] * (2 * n_vars)
    c[2 * plus] = Fraction(1)
    c[2 * plus + 1] = Fraction(-1)
    c[2 * minus] = Fraction(-1)
    c[2 * minus + 1] = Fraction(1)
    a = []
    b = []
    for u, v, w in constraints:
        if Fraction(w) < 0:
            raise ValueError("difference bound must be nonnegative")
        row = [Fraction(0)] * (2 * n_vars)
        row[2 * u] += 1
        row[2 * u + 1] -= 1
        row[2 * v] -= 1
        row[2 * v + 1] += 1
        a.append(row)
        b.append(Fraction(w))
    value, _ = maximize(c, a, b)
    return value
