"""Exact matrix arithmetic over the rationals.

Matrices are tuples of tuples of ``fractions.Fraction`` (or plain ints).
Everything here is small and dense; no attempt is made to be fast beyond
what the exact checks in the rest of the package need.
"""

from fractions import Fraction


def to_exact(rows):
    """Normalize a nested sequence into an immutable Fraction matrix."""
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity(n):
    return tuple(tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
                 for i in range(n))


def zeros(n, m=None):
    m = n if m is None else m
    return tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n))


def shape(a):
    return len(a), len(a[0]) if a else 0


def transpose(a):
    return tuple(tuple(row[i] for row in a) for i in range(len(a[0])))


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a):
    return tuple(tuple(-x for x in row) for row in a)


def scalar_mul(c, a):
    c = Fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def mat_mul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(ra, cb)) for cb in bt) for ra in a)


def mat_vec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_eq(a, b):
    return shape(a) == shape(b) and all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_symmetric(a):
    n, m = shape(a)
    return n == m and all(a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))


def is_integral(a):
    return all(Fraction(x).denominator == 1 for row in a for x in row)


def det(a):
    """Exact determinant by fraction-free Gaussian elimination."""
    n, m = shape(a)
    if n != m:
        raise ValueError("determinant needs a square matrix")
    rows = [list(map(Fraction, row)) for row in a]
    sign = 1
    d = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            sign = -sign
        p = rows[col][col]
        d *= p
        for r in range(col + 1, n):
            factor = rows[r][col] / p
            if factor:
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return sign * d


def inverse(a):
    """Exact inverse via Gauss-Jordan; raises ValueError if singular."""
    n, m = shape(a)
    if n != m:
        raise ValueError("inverse needs a square matrix")
    aug = [list(map(Fraction, row)) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def from_json_entries(rows):
    """Parse a JSON matrix whose entries are ints or exact 'p/q' strings."""
    out = []
    for row in rows:
        parsed = []
        for x in row:
            if isinstance(x, str):
                parsed.append(Fraction(x))
            elif isinstance(x, int):
                parsed.append(Fraction(x))
            else:
                raise ValueError(f"entry {x!r} is not an exact integer or rational string")
        out.append(tuple(parsed))
    return tuple(out)


def to_json_entries(a):
    """Serialize with ints where possible, 'p/q' strings otherwise."""
    out = []
    for row in a:
        ser = []
        for x in row:
            f = Fraction(x)
            ser.append(int(f) if f.denominator == 1 else f"{f.numerator}/{f.denominator}")
        out.append(ser)
    return out
