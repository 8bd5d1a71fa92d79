"""Exact polynomial signatures of Laplacian matrices.

The primary graph descriptor is the second immanantal polynomial of the
Laplacian, written

    d2(xI - L) = c0*x^n - c1*x^(n-1) + ... + (-1)^n * cn

and stored as the non-negative-leading coefficient vector (c0, ..., cn).
It is invariant under node relabeling, strictly finer in practice than
the characteristic polynomial, and integer-valued for integer weights,
which makes it usable as an exact hash key.

Everything here is computed over Python integers; no floating point is
involved anywhere, so recomputing a signature is always bit-identical.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import GraphError, SizeLimitError
from .graphs import Laplacian

DEFAULT_N_MAX = 12
ORACLE_N_MAX = 8


@dataclass(frozen=True)
class GraphSignature:
    """Coefficient vector (c0..cn) of the second immanantal polynomial.

    c0 = n-1 always; for a binary graph with m edges, c1 = 2*m*(n-1).
    """

    size: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.size + 1:
            raise GraphError(
                f"signature for n={self.size} needs {self.size + 1} coefficients, "
                f"got {len(self.coeffs)}"
            )


@dataclass(frozen=True)
class CharPolySignature:
    """Monic integer coefficients of det(xI - L), highest degree first.

    The constant term is 0 for every Laplacian (0 is always an eigenvalue).
    """

    size: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.size + 1:
            raise GraphError(
                f"characteristic polynomial for n={self.size} needs "
                f"{self.size + 1} coefficients, got {len(self.coeffs)}"
            )


def _bareiss_det(m: list[list[int]]) -> int:
    """Exact determinant by fraction-free elimination with row pivoting.

    Destroys `m`.  All divisions are exact by the Bareiss identity, so the
    result is an exact integer for integer input.
    """
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for j in range(n - 1):
        if m[j][j] == 0:
            for i in range(j + 1, n):
                if m[i][j] != 0:
                    m[i], m[j] = m[j], m[i]
                    sign = -sign
                    break
            else:
                return 0
        pivot_row = m[j]
        pivot = pivot_row[j]
        for i in range(j + 1, n):
            row = m[i]
            factor = row[j]
            for k in range(j + 1, n):
                row[k] = (pivot * row[k] - factor * pivot_row[k]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def _check_size(n: int, n_max: int):
    if n > n_max:
        raise SizeLimitError(f"matrix size {n} exceeds limit {n_max}")
    if n < 2:
        raise SizeLimitError(f"signatures need n >= 2, got n={n}")


def d2_signature(lap: Laplacian, n_max: int = DEFAULT_N_MAX) -> GraphSignature:
    """Second-immanantal-polynomial signature of a Laplacian.

    c0 and c1 come from the closed forms c0 = n-1 and c1 = (n-1)*trace(L)
    (the latter reduces to 2m(n-1) on binary graphs).  For 2 <= k <= n,
    expanding over all size-k index subsets X:

        ck = sum_X ( sum_{i in X} l_ii * det(L[X \\ i]) + (n-k-1) * det(L[X]) )

    where L[X] is the principal submatrix on X.  This is the subset
    expansion of the block form diag(L[X], I_{n-k}): padding the block
    with an identity contributes det(L[X]) once per padded row, which is
    where the (n-k) part of the (n-k-1) factor comes from.  Cost grows
    with 2^n, hence the n_max guard; determinants of the principal
    submatrices are shared across subsets.
    """
    n = lap.n
    _check_size(n, n_max)
    rows = lap.rows
    index = range(n)

    dets: dict[tuple[int, ...], int] = {(): 1}
    for k in range(1, n + 1):
        for sub in itertools.combinations(index, k):
            mat = [[rows[a][b] for b in sub] for a in sub]
            dets[sub] = _bareiss_det(mat)

    coeffs = [n - 1, (n - 1) * lap.trace]
    for k in range(2, n + 1):
        total = 0
        pad = n - k - 1
        for sub in itertools.combinations(index, k):
            acc = pad * dets[sub]
            for i in sub:
                reduced = tuple(a for a in sub if a != i)
                acc += rows[i][i] * dets[reduced]
            total += acc
        coeffs.append(total)
    return GraphSignature(n, tuple(coeffs))


def char_signature(lap: Laplacian, n_max: int = DEFAULT_N_MAX) -> CharPolySignature:
    """Characteristic polynomial det(xI - L) via Faddeev-LeVerrier.

    The per-step trace divisions are exact over the integers, checked at
    runtime.
    """
    n = lap.n
    _check_size(n, n_max)
    a = [list(r) for r in lap.rows]
    coeffs = [1]
    work = [row[:] for row in a]  # A * (accumulated polynomial in A)
    for step in range(1, n + 1):
        tr = sum(work[i][i] for i in range(n))
        if tr % step != 0:
            raise GraphError("non-integer trace in characteristic polynomial step")
        c = -(tr // step)
        coeffs.append(c)
        if step == n:
            break
        for i in range(n):
            work[i][i] += c
        nxt = [[0] * n for _ in range(n)]
        for i in range(n):
            ai = a[i]
            row = nxt[i]
            for k in range(n):
                aik = ai[k]
                if aik:
                    wk = work[k]
                    for j in range(n):
                        row[j] += aik * wk[j]
        work = nxt
    return CharPolySignature(n, tuple(coeffs))


def diff(s1: GraphSignature, s2: GraphSignature) -> int:
    """Squared-difference score between two same-size signatures.

    Sums (c_k1 - c_k2)^2 over k = 1..n; c0 is excluded since it only
    encodes the (shared) size.  A diagnostic, not a retrieval path.
    """
    if s1.size != s2.size:
        raise GraphError(
            f"diff needs equal sizes, got n={s1.size} and n={s2.size}"
        )
    return sum((a - b) ** 2 for a, b in zip(s1.coeffs[1:], s2.coeffs[1:]))


# --- independent oracle ------------------------------------------------------


@lru_cache(maxsize=None)
def _d2_permutations(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Permutations of S_n with non-zero d2 character weight.

    The weight of a permutation s is sgn(s) * (fix(s) - 1): the character
    of the partition (2, 1^(n-2)), i.e. the immanant one step up from the
    determinant.  Permutations with exactly one fixed point drop out.
    """
    out = []
    for p in itertools.permutations(range(n)):
        seen = [False] * n
        sign = 1
        fix = 0
        for i in range(n):
            if p[i] == i:
                fix += 1
            if seen[i]:
                continue
            j = i
            length = 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        weight = sign * (fix - 1)
        if weight:
            out.append((p, weight))
    return tuple(out)


def _interpolate_integer_poly(xs: list[int], ys: list[int]) -> list[int]:
    """Exact integer polynomial through the given points, highest degree
    first.  Raises if the interpolant is not integral."""
    n = len(xs) - 1
    coef = [Fraction(y) for y in ys]
    for j in range(1, n + 1):
        for i in range(n, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * (n + 1)  # ascending powers
    for i in range(n, -1, -1):
        shifted = [Fraction(0)] * (n + 1)
        for d in range(n):
            shifted[d + 1] = poly[d]
        poly = [shifted[d] - xs[i] * poly[d] for d in range(n + 1)]
        poly[0] += coef[i]
    descending = list(reversed(poly))
    if any(c.denominator != 1 for c in descending):
        raise GraphError("interpolated polynomial is not integral")
    return [int(c) for c in descending]


def d2_oracle(lap: Laplacian, n_max: int = ORACLE_N_MAX) -> GraphSignature:
    """Definitional d2 signature via the character-weighted permutation sum.

    Evaluates d2(xI - L) at n+1 integer points and interpolates exactly.
    Factorial cost, so limited to small n; exists purely to validate
    `d2_signature` through an independent route.
    """
    n = lap.n
    _check_size(n, n_max)
    rows = lap.rows
    perms = _d2_permutations(n)
    xs = list(range(n + 1))
    ys = []
    for x in xs:
        b = [
            [(x if i == j else 0) - rows[i][j] for j in range(n)]
            for i in range(n)
        ]
        total = 0
        for p, weight in perms:
            prod = weight
            for i in range(n):
                prod *= b[i][p[i]]
                if prod == 0:
                    break
            total += prod
        ys.append(total)
    descending = _interpolate_integer_poly(xs, ys)
    coeffs = tuple(
        coeff if k % 2 == 0 else -coeff for k, coeff in enumerate(descending)
    )
    return GraphSignature(n, coeffs)
