"""Smith normal form over the integers with recorded unimodular transforms.

All arithmetic uses Python ints, so there is no overflow and no rounding.
Matrices are lists of row lists.
"""

from dataclasses import dataclass


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


@dataclass(frozen=True)
class SmithForm:
    """``L @ A @ R == D`` with ``L``, ``R`` unimodular and ``D`` diagonal.

    Hence ``A == L_inv @ D @ R_inv``.  The diagonal entries are positive and
    each divides the next; ``rank`` of them are nonzero.
    """

    D: list
    L: list
    L_inv: list
    R: list
    R_inv: list
    rank: int

    @property
    def diagonal(self):
        return [self.D[i][i] for i in range(self.rank)]


def smith_normal_form(A):
    rows = len(A)
    cols = len(A[0]) if rows else 0
    D = [[int(x) for x in row] for row in A]
    L, L_inv = identity(rows), identity(rows)
    R, R_inv = identity(cols), identity(cols)

    # Row ops act as D <- E D, L <- E L, L_inv <- L_inv E^-1.
    # Column ops act as D <- D E, R <- R E, R_inv <- E^-1 R_inv.
    def swap_rows(i, j):
        for M in (D, L):
            M[i], M[j] = M[j], M[i]
        for row in L_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for M in (D, R):
            for row in M:
                row[i], row[j] = row[j], row[i]
        R_inv[i], R_inv[j] = R_inv[j], R_inv[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        for M in (D, L):
            M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]
        for row in L_inv:
            row[src] -= q * row[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for M in (D, R):
            for row in M:
                row[dst] += q * row[src]
        R_inv[src] = [a - q * b for a, b in zip(R_inv[src], R_inv[dst])]

    def negate_row(i):
        for M in (D, L):
            M[i] = [-a for a in M[i]]
        for row in L_inv:
            row[i] = -row[i]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(D[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if D[i][j] != 0]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, rows):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, cols):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if D[i][j] % D[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            negate_row(t)
        t += 1

    return SmithForm(D=D, L=L, L_inv=L_inv, R=R, R_inv=R_inv, rank=t)
