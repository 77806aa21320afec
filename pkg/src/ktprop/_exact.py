"""Small exact linear-algebra helpers over ``int`` and ``Fraction``."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def to_fraction(value) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction.

    Floats are rejected: exact pipelines never accept binary floating point.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        if any(c in text for c in ".eE"):
            raise ValueError(f"not an exact rational literal: {value!r}")
        num, sep, den = text.partition("/")
        if sep and int(den) == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return Fraction(int(num), int(den)) if sep else Fraction(int(num))
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


def format_fraction(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)


def lcm_denominator(values) -> int:
    out = 1
    for v in values:
        d = Fraction(v).denominator
        out = out * d // gcd(out, d)
    return out


def det(matrix: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-free Bareiss elimination (exact)."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    den = lcm_denominator(x for row in matrix for x in row)
    a = [[int(Fraction(x) * den) for x in row] for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return Fraction(sign * a[n - 1][n - 1], den**n)


def rank(rows: Sequence[Sequence]) -> int:
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def pivot_columns(rows: Sequence[Sequence]) -> list[int]:
    """Pivot columns of the reduced row echelon form of ``rows``."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return []
    pivots = []
    r = 0
    for c in range(len(m[0])):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return pivots


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve a square nonsingular system exactly by Gauss-Jordan elimination."""
    n = len(matrix)
    m = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return [row[n] for row in m]


def inverse(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(matrix)
    cols = [solve(matrix, [1 if i == j else 0 for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def integer_nth_root(value: int, n: int) -> int | None:
    """Exact non-negative integer n-th root of ``value``, or None."""
    if value < 0:
        return None
    if value in (0, 1):
        return value
    lo, hi = 0, 1 << (value.bit_length() // n + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**n <= value:
            lo = mid
        else:
            hi = mid - 1
    return lo if lo**n == value else None


def rational_nth_root(value: Fraction, n: int) -> Fraction | None:
    value = Fraction(value)
    if value < 0:
        return None
    p = integer_nth_root(value.numerator, n)
    q = integer_nth_root(value.denominator, n)
    if p is None or q is None:
        return None
    return Fraction(p, q)
