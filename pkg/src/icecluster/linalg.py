"""Tiny exact linear algebra over Q and prime fields.

Matrices are lists of row lists with explicit shapes passed alongside, so
zero-dimensional edge cases stay well defined.  Entries are Fractions over Q
and ints in [0, p) over F_p.
"""

from fractions import Fraction

from .errors import DomainError


class FieldQ:
    """The rationals."""

    name = "Q"

    @staticmethod
    def convert(x):
        return Fraction(x)

    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        if a == 0:
            raise ZeroDivisionError
        return Fraction(1) / a


class FieldFp:
    """The prime field F_p."""

    def __init__(self, p):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise DomainError("%d is not prime" % p)
        self.p = p
        self.name = "F%d" % p
        self.zero = 0
        self.one = 1 % p

    def convert(self, x):
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise DomainError("denominator divisible by %d" % self.p)
            return (x.numerator * pow(den, self.p - 2, self.p)) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError
        return pow(a, self.p - 2, self.p)


def zeros(m, n, field):
    return [[field.zero] * n for _ in range(m)]


def identity(n, field):
    out = zeros(n, n, field)
    for i in range(n):
        out[i][i] = field.one
    return out


def mat_mul(A, B, field):
    m = len(A)
    inner = len(B)
    n = len(B[0]) if B else 0
    if A and len(A[0]) != inner:
        raise DomainError("matrix shape mismatch")
    out = zeros(m, n, field)
    for i in range(m):
        Ai = A[i]
        for k in range(inner):
            a = Ai[k]
            if a == field.zero:
                continue
            Bk = B[k]
            row = out[i]
            for j in range(n):
                row[j] = field.add(row[j], field.mul(a, Bk[j]))
    return out


def mat_vec(A, v, field):
    return [
        _dot(row, v, field)
        for row in A
    ]


def _dot(row, v, field):
    acc = field.zero
    for a, b in zip(row, v):
        if a != field.zero and b != field.zero:
            acc = field.add(acc, field.mul(a, b))
    return acc


def transpose(A, m, n):
    return [[A[i][j] for i in range(m)] for j in range(n)]


def rref(rows, ncols, field):
    """Reduced row echelon form; returns (pivot column list, nonzero rows)."""
    rows = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(rank, len(rows)):
            if rows[i][col] != field.zero:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        inv = field.inv(rows[rank][col])
        rows[rank] = [field.mul(inv, x) for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != field.zero:
                factor = rows[i][col]
                rows[i] = [field.sub(x, field.mul(factor, y))
                           for x, y in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
    return pivots, rows[:rank]


def rank(rows, ncols, field):
    return len(rref(rows, ncols, field)[0])


def nullspace(rows, ncols, field):
    """Basis of the right kernel {x : A x = 0}."""
    pivots, reduced = rref(rows, ncols, field)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    for f in free:
        vec = [field.zero] * ncols
        vec[f] = field.one
        for i, p in enumerate(pivots):
            vec[p] = field.neg(reduced[i][f])
        basis.append(vec)
    return basis


def in_rowspace(reduced_rows, pivots, vec, field):
    """Membership test against an already reduced row basis."""
    v = list(vec)
    for row, p in zip(reduced_rows, pivots):
        if v[p] != field.zero:
            factor = v[p]
            v = [field.sub(x, field.mul(factor, y)) for x, y in zip(v, row)]
    return all(x == field.zero for x in v)
