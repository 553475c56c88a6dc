import itertools
import random
from math import gcd

import pytest

from reebtorus.smith import (abelian_group_from_relations, determinant, matmul,
                             smith_decomposition, smith_normal_form)


def minors_invariants(A):
    # d_k = g_k / g_{k-1}, g_k the gcd of all k x k minors
    r, c = len(A), len(A[0])
    out, prev = [], 1
    for k in range(1, min(r, c) + 1):
        g = 0
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(c), k):
                g = gcd(g, determinant([[A[i][j] for j in cols] for i in rows]))
        if g == 0:
            out.extend([0] * (min(r, c) - len(out)))
            break
        out.append(g // prev)
        prev = g
    return out


def is_diagonal_chain(D):
    n = min(len(D), len(D[0]))
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            if i != j and x:
                return False
    d = [D[i][i] for i in range(n)]
    return all(x >= 0 for x in d) and all(b % a == 0 if a else b == 0 for a, b in zip(d, d[1:]))


@pytest.mark.parametrize("A, expected", [
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [1, 1, 1]),
    ([[2, 0], [0, 3]], [1, 6]),
    ([[2, 4], [6, 8]], [2, 4]),
    ([[0, 0], [0, 0]], [0, 0]),
    ([[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]], [1, 10, 30, 0]),
])
def test_known_forms(A, expected):
    assert smith_normal_form(A) == expected


def test_rectangular():
    assert smith_normal_form([[2, 4, 6]]) == [2]
    assert smith_normal_form([[2], [4], [6]]) == [2]
    U, D, V = smith_decomposition([[1, 2, 3], [4, 5, 6]])
    assert matmul(matmul(U, [[1, 2, 3], [4, 5, 6]]), V) == D


def test_random_against_minors():
    rng = random.Random(7)
    for _ in range(40):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)]
        assert smith_normal_form(A) == minors_invariants(A)


def test_decomposition_factors_unimodular():
    rng = random.Random(11)
    for _ in range(30):
        A = [[rng.randint(-9, 9) for _ in range(5)] for _ in range(3)]
        U, D, V = smith_decomposition(A)
        assert matmul(matmul(U, A), V) == D
        assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
        assert is_diagonal_chain(D)


def test_determinant():
    assert determinant([[2, 1], [1, 1]]) == 1
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[1, 2, 3], [4, 5, 6], [7, 8, 9]]) == 0
    assert determinant([[0, 2, 1], [3, 0, 0], [1, 1, 1]]) == -3


def test_abelian_group_from_relations():
    assert abelian_group_from_relations([], 2) == (2, [])
    assert abelian_group_from_relations([[2, 0]], 2) == (1, [2])
    # Z^2 / <(2,4),(6,8)> = Z_2 + Z_4
    assert abelian_group_from_relations([[2, 4], [6, 8]], 2) == (0, [2, 4])
    assert abelian_group_from_relations([[1, -1]], 3) == (2, [])
