"""Independent brute-force oracles the Groebner/ideal machinery is tested against.

Kept deliberately naive: the Macaulay oracle answers homogeneous membership
through row reduction of multiplication matrices, and the monomial-ideal
oracle does quotient/intersection/saturation purely combinatorially.
Neither touches the division or elimination code under test.
"""

import numpy as np

from liaisonlab._linalg import in_rowspace, rref
from liaisonlab.algebra_core import EXP_BITS


def macaulay_membership(f, gens, ring):
    """Homogeneous membership via the degree-d Macaulay matrix.

    f belongs to the ideal iff its coefficient vector lies in the row space
    of {m*g : g generator, deg(m*g) = deg(f)}.
    """
    md = f.multidegree()
    if md is None:
        return True
    p = ring.field.p
    monos = ring.monomials_of_multidegree(md)
    col = {m: i for i, m in enumerate(monos)}
    rows = []
    for g in gens:
        gd = g.multidegree()
        shift = tuple(a - b for a, b in zip(md, gd))
        if any(s < 0 for s in shift):
            continue
        for mono in ring.monomials_of_multidegree(shift):
            h = g.shift(mono)
            v = [0] * len(monos)
            for m, c in h.terms.items():
                v[col[m]] = c
            rows.append(v)
    if not rows:
        return not f.terms
    R, piv = rref(np.array(rows, dtype=np.int64), p)
    v = [0] * len(monos)
    for m, c in f.terms.items():
        v[col[m]] = c
    return in_rowspace(R, piv, v, p)


# -- monomial ideals as tuples of exponent tuples ------------------------------


def mono_minimalize(gens):
    gens = sorted(set(gens))
    out = []
    for g in gens:
        if not any(all(x <= y for x, y in zip(h, g)) for h in out):
            out = [h for h in out if not all(x >= y for x, y in zip(h, g))]
            out.append(g)
    return tuple(sorted(out))


def mono_intersect(A, B):
    return mono_minimalize(
        tuple(max(x, y) for x, y in zip(a, b)) for a in A for b in B
    )


def mono_quotient_single(A, m):
    return mono_minimalize(tuple(max(x - y, 0) for x, y in zip(a, m)) for a in A)


def mono_quotient(A, B):
    out = None
    for m in B:
        q = mono_quotient_single(A, m)
        out = q if out is None else mono_intersect(out, q)
    return out


def mono_saturate_single(A, m):
    support = [i for i, e in enumerate(m) if e]
    out = []
    for a in A:
        out.append(tuple(0 if i in support else e for i, e in enumerate(a)))
    return mono_minimalize(out)


def mono_saturate(A, B):
    out = None
    for m in B:
        s = mono_saturate_single(A, m)
        out = s if out is None else mono_intersect(out, s)
    return out


def mono_member(A, m):
    return any(all(x <= y for x, y in zip(a, m)) for a in A)


def ideal_from_exponents(ring, exps):
    from liaisonlab.ideal_ops import Ideal

    return Ideal(ring, [ring.monomial(e) for e in exps])


def exponents_from_ideal(I):
    ring = I.ring
    out = []
    for g in I.groebner().elements:
        assert len(g.terms) == 1, "expected a monomial ideal"
        (m,) = g.terms
        out.append(ring.unpack(m))
    return mono_minimalize(out)
