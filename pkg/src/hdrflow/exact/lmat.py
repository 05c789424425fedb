"""Dense matrices over F_p[x, 1/x]."""
from __future__ import annotations

from .laurent import Laurent
from .poly import Poly


def coerce(p: int, a) -> Laurent:
    if isinstance(a, Laurent):
        return a
    if isinstance(a, Poly):
        return Laurent.from_poly(a)
    return Laurent.const(p, a)


def lmat(p: int, rows):
    return [[coerce(p, a) for a in r] for r in rows]


def lmat_identity(p: int, n: int):
    return [[Laurent.one(p) if i == j else Laurent.zero(p) for j in range(n)]
            for i in range(n)]


def lmat_shape(M):
    return len(M), len(M[0]) if M else 0


def lmat_eq(A, B) -> bool:
    return (lmat_shape(A) == lmat_shape(B)
            and all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb)))


def lmat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def lmat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def lmat_scale(f: Laurent, M):
    return [[f * a for a in r] for r in M]


def lmat_mul(A, B):
    n, k = lmat_shape(A)
    k2, m = lmat_shape(B)
    if k != k2:
        raise ValueError("shape mismatch")
    p = A[0][0].p
    out = [[Laurent.zero(p) for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for t in range(k):
            a = A[i][t]
            if a.is_zero():
                continue
            for j in range(m):
                if not B[t][j].is_zero():
                    out[i][j] = out[i][j] + a * B[t][j]
    return out


def lmat_vec(A, v):
    n, k = lmat_shape(A)
    p = A[0][0].p
    out = [Laurent.zero(p) for _ in range(n)]
    for i in range(n):
        for t in range(k):
            if not A[i][t].is_zero() and not v[t].is_zero():
                out[i] = out[i] + A[i][t] * v[t]
    return out


def lmat_det(M) -> Laurent:
    n, m = lmat_shape(M)
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    p = M[0][0].p
    if n == 0:
        return Laurent.one(p)
    if n == 1:
        return M[0][0]
    out = Laurent.zero(p)
    sign = 1
    for j in range(n):
        if not M[0][j].is_zero():
            minor = [[M[i][t] for t in range(n) if t != j] for i in range(1, n)]
            term = M[0][j] * lmat_det(minor)
            out = out + term if sign > 0 else out - term
        sign = -sign
    return out


def lmat_min_exp(M):
    es = [a.min_exp() for r in M for a in r if not a.is_zero()]
    return min(es) if es else None


def lmat_max_exp(M):
    es = [a.max_exp() for r in M for a in r if not a.is_zero()]
    return max(es) if es else None


def lmat_from_xpoly(rows):
    return [[Laurent.from_poly(a) for a in r] for r in rows]


def lmat_from_ypoly(rows):
    """Matrix of polynomials in y = 1/x, as Laurent matrices in x."""
    return [[Laurent.from_poly(a).subst_inv() for a in r] for r in rows]


def lmat_to_xpoly(M):
    return [[a.to_poly_x() for a in r] for r in M]


def lmat_to_ypoly(M):
    return [[a.to_poly_z() for a in r] for r in M]


def lmat_transpose(M):
    n, m = lmat_shape(M)
    return [[M[i][j] for i in range(n)] for j in range(m)]
