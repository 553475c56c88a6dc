"""Smith normal form over the integers, exact.

``smith_decomposition(A)`` returns ``(U, D, V)`` with ``U @ A @ V == D``,
``U`` and ``V`` unimodular and ``D`` diagonal with d1 | d2 | ... .  Matrices are
lists of lists of Python ints.
"""

from __future__ import annotations


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _copy(A):
    return [list(map(int, row)) for row in A]


def smith_decomposition(A, transforms=True):
    A = _copy(A)
    rows = len(A)
    cols = len(A[0]) if rows else 0
    U = _identity(rows) if transforms else None
    V = _identity(cols) if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        # row dst += c * row src
        if c:
            A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
            if U is not None:
                U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        if c:
            for row in A:
                row[dst] += c * row[src]
            if V is not None:
                for row in V:
                    row[dst] += c * row[src]

    def neg_row(i):
        A[i] = [-x for x in A[i]]
        if U is not None:
            U[i] = [-x for x in U[i]]

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero |entry| in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // p))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // p))
                    if A[t][j]:
                        done = False
            if done:
                # divisibility: push any entry not divisible by the pivot into row t
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if A[i][j] % p), None)
                if bad is None:
                    break
                add_row(bad[0], t, 1)
                continue
            # a smaller remainder appeared in row/column t: move it to the pivot
            best = None
            for i in range(t, rows):
                if A[i][t] and (best is None or abs(A[i][t]) < abs(A[best[0]][best[1]])):
                    best = (i, t)
            for j in range(t, cols):
                if A[t][j] and (best is None or abs(A[t][j]) < abs(A[best[0]][best[1]])):
                    best = (t, j)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
        if A[t][t] < 0:
            neg_row(t)
        t += 1
    return U, A, V


def smith_normal_form(A) -> list:
    """Diagonal of the Smith form, length min(rows, cols); zeros (if any) come last."""
    _, D, _ = smith_decomposition(A, transforms=False)
    n = min(len(D), len(D[0]) if D else 0)
    return [D[i][i] for i in range(n)]


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def determinant(A) -> int:
    """Exact integer determinant (Bareiss)."""
    M = _copy(A)
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if M[i][k]), None)
            if piv is None:
                return 0
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1] if n else 1


def abelian_group_from_relations(relations, ngens):
    """(free rank, torsion factors > 1) of Z^ngens / rowspace(relations)."""
    if ngens == 0:
        return 0, []
    if not relations:
        return ngens, []
    diag = smith_normal_form(relations)
    nonzero = [d for d in diag if d]
    return ngens - len(nonzero), [d for d in nonzero if d > 1]
