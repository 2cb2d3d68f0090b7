"""Dense linear algebra mod p on numpy int64 matrices.

Primes are below 2^32 is not assumed here; entries must satisfy p*p < 2^63
so a single product never overflows, which every admissible prime (< 2^20
for pipelines, < 2^32 for fields) satisfies.
"""

from __future__ import annotations

import numpy as np


def rref(mat, p: int):
    """Row-reduce a matrix mod p.

    Returns (R, pivots) where R is the reduced row echelon form with unit
    pivots and pivots is the list of pivot column indices.  Zero rows are
    dropped.
    """
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim != 2 or a.size == 0:
        return np.zeros((0, a.shape[1] if a.ndim == 2 else 0), dtype=np.int64), []
    rows, cols = a.shape
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + nz[0]
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(mat, p: int) -> int:
    return len(rref(mat, p)[1])


def nullspace(mat, p: int):
    """Echelonized basis of the right kernel, as a list of int64 vectors."""
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim != 2 or a.shape[0] == 0:
        n = a.shape[1] if a.ndim == 2 else 0
        return [np.eye(n, dtype=np.int64)[i] for i in range(n)]
    R, pivots = rref(a, p)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = np.zeros(cols, dtype=np.int64)
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-int(R[i, fc])) % p
        basis.append(v)
    return basis


def solve_matrix(A, B, p: int):
    """Solve A X = B mod p for square invertible A."""
    A = np.array(A, dtype=np.int64) % p
    B = np.array(B, dtype=np.int64) % p
    n = A.shape[0]
    aug = np.concatenate([A, B.reshape(n, -1)], axis=1)
    R, pivots = rref(aug, p)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular mod p")
    return R[:, n:]


def in_rowspace(R, pivots, v, p: int) -> bool:
    """Membership of v in the row space given an rref basis."""
    w = np.array(v, dtype=np.int64) % p
    for i, c in enumerate(pivots):
        if w[c]:
            w = (w - w[c] * R[i]) % p
    return not w.any()


def reduce_against(R, pivots, v, p: int):
    w = np.array(v, dtype=np.int64) % p
    for i, c in enumerate(pivots):
        if w[c]:
            w = (w - w[c] * R[i]) % p
    return w


# -- univariate polynomials mod p (coefficient lists, low degree first) -------


def poly_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_mod(f, g, p):
    f = [c % p for c in f]
    poly_trim(f)
    g = [c % p for c in g]
    poly_trim(g)
    if not g:
        raise ZeroDivisionError("mod by zero polynomial")
    inv = pow(g[-1], p - 2, p)
    while len(f) >= len(g):
        c = f[-1] * inv % p
        off = len(f) - len(g)
        for i, gc in enumerate(g):
            f[off + i] = (f[off + i] - c * gc) % p
        poly_trim(f)
        if not f:
            break
    return f


def poly_gcd(f, g, p):
    f = poly_trim([c % p for c in list(f)])
    g = poly_trim([c % p for c in list(g)])
    while g:
        f, g = g, poly_mod(f, g, p)
    if f:
        inv = pow(f[-1], p - 2, p)
        f = [c * inv % p for c in f]
    return f


def poly_derivative(f, p):
    return poly_trim([i * c % p for i, c in enumerate(f)][1:])


def is_squarefree(f, p) -> bool:
    """Squarefreeness of a nonconstant univariate polynomial mod p.

    gcd(f, f') == 1 is sound for the minimal polynomials tested here: a
    repeated factor always shows up in the gcd unless the factor is a
    p-th power, which cannot occur at the tiny degrees involved (< p).
    """
    g = poly_gcd(f, poly_derivative(f, p), p)
    return len(g) == 1


def min_poly(T, p: int, tries: int = 3):
    """Minimal polynomial of a square matrix mod p via Krylov iteration.

    Takes the lcm of the local minimal polynomials of a few deterministic
    start vectors; for the multiplication operators used here the local
    polynomial of a single generic vector is already the answer.
    """
    T = np.array(T, dtype=np.int64) % p
    n = T.shape[0]
    if n == 0:
        return [1]
    result = [1]
    rng_state = 12345
    for t in range(tries):
        if t == 0:
            v = np.ones(n, dtype=np.int64)
        else:
            vals = []
            for _ in range(n):
                rng_state = (rng_state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
                vals.append((rng_state >> 16) % p)
            v = np.array(vals, dtype=np.int64)
        local = _local_min_poly(T, v, p)
        result = _poly_lcm(result, local, p)
        if len(result) == n + 1:
            break
    return result


def _local_min_poly(T, v, p):
    n = T.shape[0]
    # rows: v, Tv, T^2 v, ...; find first linear dependence
    basis = np.zeros((0, n), dtype=np.int64)
    pivots = []
    coords = []  # expression of each reduced new vector in terms of the krylov vecs
    krylov = []
    w = v % p
    for k in range(n + 1):
        krylov.append(w.copy())
        red = w.copy()
        expr = np.zeros(n + 2, dtype=np.int64)
        expr[k] = 1
        # reduce against current echelon, tracking coordinates
        for i, c in enumerate(pivots):
            if red[c]:
                f = int(red[c])
                red = (red - f * basis[i]) % p
                expr = (expr - f * coords[i]) % p
        nz = np.nonzero(red)[0]
        if nz.size == 0:
            poly = [int(expr[i]) for i in range(k + 1)]
            return poly_trim([c % p for c in poly]) or [1]
        c = int(nz[0])
        inv = pow(int(red[c]), p - 2, p)
        red = red * inv % p
        expr = expr * inv % p
        basis = np.vstack([basis, red])
        pivots.append(c)
        coords.append(expr)
        w = T.dot(w) % p
    raise AssertionError("krylov chain did not terminate")


def _poly_mul(f, g, p):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return poly_trim(out)


def _poly_lcm(f, g, p):
    if len(f) == 1:
        return g
    if len(g) == 1:
        return f
    d = poly_gcd(f, g, p)
    q = _poly_div(f, d, p)
    return _poly_mul(q, g, p)


def _poly_div(f, g, p):
    f = [c % p for c in list(f)]
    g = poly_trim([c % p for c in list(g)])
    inv = pow(g[-1], p - 2, p)
    out = [0] * max(1, len(f) - len(g) + 1)
    while len(poly_trim(f)) >= len(g) and f:
        c = f[-1] * inv % p
        off = len(f) - len(g)
        out[off] = c
        for i, gc in enumerate(g):
            f[off + i] = (f[off + i] - c * gc) % p
        poly_trim(f)
    return poly_trim(out) or [0]
