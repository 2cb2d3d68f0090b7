"""Scratch timing harness for the bigraded liaison steps (not part of the package)."""

import time

from liaisonlab.algebra_core import PrimeField, RingSpec
from liaisonlab.constructions import (
    Rng,
    link,
    random_ci_rational_curve,
    random_fiber_line,
    random_hypersurfaces_containing,
    union_ideal,
)
from liaisonlab.invariants import curve_invariants, h0_ideal
from liaisonlab.ideal_ops import Ideal, quotient, saturate_irrelevant

t0 = time.perf_counter()


def tick(label):
    global t0
    t = time.perf_counter()
    print(f"{label:45s} {t - t0:8.2f}s")
    t0 = t


F = PrimeField(10007)
ring = RingSpec.p1xp2(F)
rng = Rng(42)

lines = []
lams = []
seen = set()
while len(lines) < 5:
    L, lam = random_fiber_line(ring, rng)
    if lam in seen:
        continue
    seen.add(lam)
    lines.append(L)
    lams.append(lam)
tick("5 fiber lines")

R = random_ci_rational_curve(ring, rng)
tick("rational (1,4) CI curve (incl. smooth check)")
print("   R invariants:", curve_invariants(R))

C2 = union_ideal([R] + lines)
tick("union C'' = R + 5 lines")
inv2 = curve_invariants(C2)
print("   C'' invariants:", inv2)
tick("C'' invariants")

h = h0_ideal(C2, (5, 2))
print("   h0(I_C''(5,2)) =", h)
tick("h0 (5,2)")

forms, Y = random_hypersurfaces_containing(C2, (5, 2), 2, rng)
tick("two (5,2) forms + CI check")

C1, step = link(C2, Y)
tick("link -> C'")
print("   C' predicted:", step.predicted)
print("   C' computed:", step.computed)
print("   intersection length predicted:", step.predicted_intersection_length)

print("   h0(I_C'(5,2)) =", h0_ideal(C1, (5, 2)))
print("   h0(I_C'(3,3)) =", h0_ideal(C1, (3, 3)))
print("   h0(I_C'(4,3)) =", h0_ideal(C1, (4, 3)))
tick("C' h0 table")

from liaisonlab.geometry import (
    is_smooth_curve, transverse_nodal_intersection, plane_model,
    nodal_plane_model_check, maximal_rank_check, nondegeneracy_check,
)

sm = is_smooth_curve(C1, rng=rng.split("smC1"))
tick("C' smoothness")
print("   smooth:", sm)

rep = transverse_nodal_intersection(C1, C2, 29, rng=rng.split("tn1"))
tick("C' cap C'' nodal intersection")
print("   report:", rep.zero_dimensional, rep.length, rep.reduced, "pass:", rep.passed)

table, ok = maximal_rank_check(C1, 2, range(1, 7))
tick("maximal rank (b,2) table")
print("   table:", table, ok)

Fpm = plane_model(C1, expected_degree=11)
tick("plane model of C' (degree 11)")

nod = nodal_plane_model_check(Fpm, 4, rng=rng.split("nod1"))
tick("nodal plane model check (delta=41)")
print("   delta:", nod.length, "expected:", nod.expected_length, "pass:", nod.passed)

f33 = C1.graded_piece((3, 3))
f43basis = C1.graded_piece((4, 3))
print("   dims:", len(f33), len(f43basis))
import random as _r
comb = sum((b.scale(rng.randmod(10007)) for b in f43basis), ring.zero())
Y2 = Ideal(ring, [f33[0], comb])
C0, step2 = link(C1, Y2, rng=rng.split("link2"))
tick("second link -> C")
print("   C computed:", step2.computed, "predicted:", step2.predicted)

sm2 = is_smooth_curve(C0, rng=rng.split("smC"))
tick("C smoothness")
print("   smooth:", sm2)

rep2 = transverse_nodal_intersection(C0, C1, 42, rng=rng.split("tn2"))
tick("C cap C' nodal intersection")
print("   report:", rep2.length, rep2.reduced, "pass:", rep2.passed)

t2, ok2 = maximal_rank_check(C0, 3, range(1, 5))
tick("maximal rank (a,3) table")
print("   table:", t2, ok2)
print("   nondegenerate:", nondegeneracy_check(C0))
Fc = plane_model(C0, expected_degree=10)
tick("plane model of C (degree 10)")
