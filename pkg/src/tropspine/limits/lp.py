"""Exact feasibility of ``A x = b, x >= 0`` over the rationals.

Two solvers, both in :class:`fractions.Fraction`:

* Fourier-Motzkin elimination (equalities are used for substitution first),
  preferred for up to ``FM_MAX_VARS`` variables;
* phase-one simplex with Bland's rule for larger systems.

Each returns either a feasible ``x`` or a Farkas certificate ``y`` with
``A^T y <= 0`` and ``b^T y > 0``, which proves infeasibility.
"""

from dataclasses import dataclass
from fractions import Fraction

FM_MAX_VARS = 12


@dataclass(frozen=True)
class LPResult:
    feasible: bool
    x: tuple = None
    farkas: tuple = None
    method: str = ""


def _frac_matrix(A):
    return [[Fraction(v) for v in row] for row in A]


def check_solution(A, b, x):
    if any(v < 0 for v in x):
        return False
    return all(sum(Fraction(a) * v for a, v in zip(row, x)) == Fraction(bi) for row, bi in zip(A, b))


def check_farkas(A, b, y):
    """``A^T y <= 0`` and ``b^T y > 0`` exactly."""
    cols = len(A[0]) if A else 0
    for j in range(cols):
        if sum(Fraction(A[i][j]) * y[i] for i in range(len(A))) > 0:
            return False
    return sum(Fraction(bi) * yi for bi, yi in zip(b, y)) > 0


# ------------------------------------------------------------ Fourier-Motzkin


def _fm(A, b):
    m = len(A)
    nv = len(A[0]) if A else 0
    # A row is (coef, rhs, is_eq, mult); mult has one entry per original equality
    # (any sign) followed by one per nonnegativity row -x_j <= 0 (>= 0).
    def unit(i):
        return tuple(Fraction(int(i == r)) for r in range(m + nv))

    rows = []
    for i in range(m):
        rows.append((tuple(Fraction(v) for v in A[i]), Fraction(b[i]), True, unit(i)))
    for j in range(nv):
        rows.append((tuple(Fraction(-int(j == c)) for c in range(nv)), Fraction(0), False, unit(m + j)))

    def comb(r1, c1, r2, c2):
        coef = tuple(c1 * a + c2 * b_ for a, b_ in zip(r1[0], r2[0]))
        mult = tuple(c1 * a + c2 * b_ for a, b_ in zip(r1[3], r2[3]))
        return coef, c1 * r1[1] + c2 * r2[1], r1[2] and r2[2], mult

    history = []  # (var, kind, data) for back substitution
    for var in range(nv):
        eq = next((r for r in rows if r[2] and r[0][var] != 0), None)
        if eq is not None:
            new = []
            for r in rows:
                if r is eq:
                    continue
                if r[0][var] != 0:
                    r = comb(r, Fraction(1), eq, -r[0][var] / eq[0][var])
                new.append(r)
            history.append((var, "eq", eq))
            rows = new
        else:
            pos = [r for r in rows if r[0][var] > 0]
            neg = [r for r in rows if r[0][var] < 0]
            rest = [r for r in rows if r[0][var] == 0]
            history.append((var, "ineq", (pos, neg)))
            for p in pos:
                for q in neg:
                    rest.append(comb(p, -q[0][var], q, p[0][var]))
            seen = {}
            for r in rest:
                key = _normal_key(r)
                if key not in seen:
                    seen[key] = r
            rows = list(seen.values())
        for r in rows:
            if all(c == 0 for c in r[0]) and ((r[2] and r[1] != 0) or (not r[2] and r[1] < 0)):
                return _fm_certificate(r, m)

    x = [Fraction(0)] * nv
    for var, kind, data in reversed(history):
        if kind == "eq":
            coef, rhs = data[0], data[1]
            s = rhs - sum(coef[j] * x[j] for j in range(nv) if j != var)
            x[var] = s / coef[var]
        else:
            pos, neg = data
            hi = [(r[1] - sum(r[0][j] * x[j] for j in range(nv) if j != var)) / r[0][var] for r in pos]
            lo = [(r[1] - sum(r[0][j] * x[j] for j in range(nv) if j != var)) / r[0][var] for r in neg]
            x[var] = max(lo) if lo else (min(hi) if hi else Fraction(0))
    return LPResult(True, x=tuple(x), method="fourier-motzkin")


def _normal_key(r):
    coef, rhs, is_eq, _ = r
    lead = next((abs(c) for c in coef if c != 0), None)
    if lead is None:
        return coef, rhs, is_eq
    return tuple(c / lead for c in coef), rhs / lead, is_eq


def _fm_certificate(r, m):
    # Row r reads 0 (<= or =) rhs with rhs violating it.  Its multipliers eta on
    # the equalities give A^T eta = mu >= 0 and b^T eta = rhs; y = -eta up to sign.
    rhs, mult = r[1], r[3]
    eta = list(mult[:m])
    if r[2] and rhs > 0:
        eta = [-e for e in eta]
    return LPResult(False, farkas=tuple(-e for e in eta), method="fourier-motzkin")


# ---------------------------------------------------------------- simplex


def _simplex(A, b):
    m = len(A)
    nv = len(A[0]) if A else 0
    sign = [(-1 if Fraction(bi) < 0 else 1) for bi in b]
    T = [[sign[i] * v for v in row] + [Fraction(int(i == r)) for r in range(m)] + [sign[i] * Fraction(b[i])]
         for i, row in enumerate(_frac_matrix(A))]
    basis = [nv + i for i in range(m)]
    ncols = nv + m
    cost = [Fraction(0)] * nv + [Fraction(1)] * m

    def reduced(j):
        return cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(m))

    while True:
        enter = next((j for j in range(ncols) if reduced(j) < 0), None)
        if enter is None:
            break
        ratios = [(T[i][-1] / T[i][enter], basis[i], i) for i in range(m) if T[i][enter] > 0]
        _, _, leave = min(ratios)
        piv = T[leave][enter]
        T[leave] = [v / piv for v in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [a - f * c for a, c in zip(T[i], T[leave])]
        basis[leave] = enter

    value = sum(cost[basis[i]] * T[i][-1] for i in range(m))
    if value == 0:
        x = [Fraction(0)] * nv
        for i, j in enumerate(basis):
            if j < nv:
                x[j] = T[i][-1]
        return LPResult(True, x=tuple(x), method="simplex")
    # Dual of phase one: y_i = c_B B^-1, read off the artificial columns.
    y = [cost[nv + i] - reduced(nv + i) for i in range(m)]
    return LPResult(False, farkas=tuple(sign[i] * y[i] for i in range(m)), method="simplex")


def solve_feasibility(A, b, method=None):
    """Decide ``exists x >= 0 with A x = b``; the result is checked exactly."""
    nv = len(A[0]) if A else 0
    if method is None:
        method = "fm" if nv <= FM_MAX_VARS else "simplex"
    res = _fm(A, b) if method == "fm" else _simplex(A, b)
    if res.feasible:
        assert check_solution(A, b, res.x)
    else:
        assert check_farkas(A, b, res.farkas)
    return res
