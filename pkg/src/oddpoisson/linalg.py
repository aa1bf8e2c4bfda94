"""Exact Gauss-Jordan elimination over any field whose elements support + - * / and truthiness."""

from __future__ import annotations

from typing import Sequence


def rank_and_inverse(matrix: Sequence[Sequence], one, zero):
    """Return ``(rank, inverse)``; ``inverse`` is None unless the square matrix has full rank."""
    n = len(matrix)
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(matrix)]
    rank = 0
    for col in range(n):
        pivot = next((r for r in range(rank, n) if aug[r][col]), None)
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        inv = one / aug[rank][col]
        aug[rank] = [x * inv for x in aug[rank]]
        for r in range(n):
            if r != rank and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[rank])]
        rank += 1
    if rank < n:
        return rank, None
    return rank, [row[n:] for row in aug]


def solve(columns: Sequence[Sequence], target: Sequence, zero):
    """Solve ``sum_k x_k * columns[k] = target`` for linearly independent columns.

    Raises ValueError when ``target`` is outside their span.
    """
    m = len(target)
    k = len(columns)
    rows = [[columns[j][i] for j in range(k)] + [target[i]] for i in range(m)]
    pivots = []
    r = 0
    for col in range(k):
        pivot = next((i for i in range(r, m) if rows[i][col]), None)
        if pivot is None:
            raise ValueError("columns are linearly dependent")
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][col]
        rows[r] = [x / p for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(r)
        r += 1
    if any(rows[i][k] for i in range(r, m)):
        raise ValueError("target is not in the span of the columns")
    return [rows[i][k] if i < r else zero for i in range(k)]
