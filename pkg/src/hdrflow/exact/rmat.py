"""Dense matrices over the rational function field F_p(x)."""
from __future__ import annotations

from .laurent import Laurent
from .poly import Poly, RatFun


def coerce(p: int, a) -> RatFun:
    if isinstance(a, RatFun):
        return a
    if isinstance(a, Poly):
        return RatFun(a)
    if isinstance(a, Laurent):
        return a.to_ratfun()
    return RatFun.const(p, a)


def rmat(p: int, rows):
    return [[coerce(p, a) for a in r] for r in rows]


def rmat_identity(p: int, n: int):
    return [[RatFun.one(p) if i == j else RatFun.zero(p) for j in range(n)]
            for i in range(n)]


def rmat_shape(M):
    return len(M), len(M[0]) if M else 0


def rmat_eq(A, B) -> bool:
    return (rmat_shape(A) == rmat_shape(B)
            and all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb)))


def rmat_is_zero(M) -> bool:
    return all(a.is_zero() for r in M for a in r)


def rmat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def rmat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def rmat_neg(M):
    return [[-a for a in r] for r in M]


def rmat_scale(f, M):
    return [[f * a for a in r] for r in M]


def rmat_mul(A, B):
    n, k = rmat_shape(A)
    k2, m = rmat_shape(B)
    if k != k2:
        raise ValueError("shape mismatch")
    p = A[0][0].p
    out = [[RatFun.zero(p) for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for t in range(k):
            a = A[i][t]
            if a.is_zero():
                continue
            for j in range(m):
                if not B[t][j].is_zero():
                    out[i][j] = out[i][j] + a * B[t][j]
    return out


def rmat_vec(A, v):
    n, k = rmat_shape(A)
    p = A[0][0].p
    out = [RatFun.zero(p) for _ in range(n)]
    for i in range(n):
        for t in range(k):
            if not A[i][t].is_zero() and not v[t].is_zero():
                out[i] = out[i] + A[i][t] * v[t]
    return out


def rmat_pow(M, k: int):
    n, m = rmat_shape(M)
    if n != m:
        raise ValueError("power of a non-square matrix")
    out = rmat_identity(M[0][0].p, n)
    for _ in range(k):
        out = rmat_mul(out, M)
    return out


def rmat_trace(M) -> RatFun:
    return sum((M[i][i] for i in range(len(M))), RatFun.zero(M[0][0].p))


def rmat_det(M) -> RatFun:
    n, m = rmat_shape(M)
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    p = M[0][0].p
    if n == 0:
        return RatFun.one(p)
    if n == 1:
        return M[0][0]
    out = RatFun.zero(p)
    sign = 1
    for j in range(n):
        if not M[0][j].is_zero():
            minor = [[M[i][t] for t in range(n) if t != j] for i in range(1, n)]
            term = M[0][j] * rmat_det(minor)
            out = out + term if sign > 0 else out - term
        sign = -sign
    return out


def rmat_inverse(M):
    n, m = rmat_shape(M)
    if n != m:
        raise ValueError("inverse of a non-square matrix")
    if n == 1:
        return [[M[0][0].reciprocal()]]
    d = rmat_det(M)
    if d.is_zero():
        raise ZeroDivisionError("singular matrix")
    dinv = d.reciprocal()
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[M[a][b] for b in range(n) if b != i]
                     for a in range(n) if a != j]
            cof = rmat_det(minor)
            if (i + j) % 2:
                cof = -cof
            out[i][j] = cof * dinv
    return out


def rmat_deriv(M):
    return [[a.deriv() for a in r] for r in M]


def rmat_subst_inv(M):
    return [[a.subst_inv() for a in r] for r in M]


def rmat_eval(M, a: int):
    """Evaluate entrywise; raises ZeroDivisionError on a pole."""
    return [[f.eval(a) for f in r] for r in M]


def rmat_from_pmat(rows):
    return [[RatFun(a) for a in r] for r in rows]


def rmat_from_lmat(M):
    return [[a.to_ratfun() for a in r] for r in M]


def rmat_clear_rows(M):
    """Scale each row by the lcm of its denominators: a polynomial matrix
    with the same kernel."""
    out = []
    for row in M:
        l = Poly.one(row[0].p)
        for a in row:
            l = (l * a.den) // l.gcd(a.den)
        out.append([(a * l).to_poly() for a in row])
    return out


def rmat_clear_cols(M):
    """Scale each column by the lcm of its denominators: the column span
    saturates to the same sub-module."""
    n, m = rmat_shape(M)
    p = M[0][0].p
    out = [[None] * m for _ in range(n)]
    for j in range(m):
        l = Poly.one(p)
        for i in range(n):
            l = (l * M[i][j].den) // l.gcd(M[i][j].den)
        for i in range(n):
            out[i][j] = (M[i][j] * l).to_poly()
    return out
