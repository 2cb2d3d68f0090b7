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
from liaisonlab.geometry import (
    collinear_fiber_scan,
    is_smooth_curve,
    maximal_rank_check,
    nodal_plane_model_check,
    plane_model,
)

F = PrimeField(10007)
ring = RingSpec.p1xp2(F)
rng = Rng(42)
lines, lams, seen = [], [], set()
while len(lines) < 5:
    L, lam = random_fiber_line(ring, rng)
    if lam in seen:
        continue
    seen.add(lam)
    lines.append(L)
    lams.append(lam)
R = random_ci_rational_curve(ring, rng)
C2 = union_ideal([R] + lines)
forms, Y = random_hypersurfaces_containing(C2, (5, 2), 2, rng)
C1, step = link(C2, Y, rng=rng.split("l1"))
print("link done", flush=True)
t0 = time.perf_counter()
sm = is_smooth_curve(C1, rng=rng.split("sm"))
print(f"smooth (fixed minors): {sm} {time.perf_counter()-t0:.1f}s", flush=True)
t0 = time.perf_counter()
tab, ok = maximal_rank_check(C1, 2, range(1, 7))
print(f"maxrank: {ok} {time.perf_counter()-t0:.1f}s", flush=True)
t0 = time.perf_counter()
F11 = plane_model(C1, expected_degree=11)
print(f"plane model: {time.perf_counter()-t0:.1f}s", flush=True)
t0 = time.perf_counter()
nod = nodal_plane_model_check(F11, 4, rng=rng.split("nod"))
print(f"nodal check: delta={nod.length} pass={nod.passed} {time.perf_counter()-t0:.1f}s", flush=True)
t0 = time.perf_counter()
scan = collinear_fiber_scan(C1, rng=rng.split("scan"))
print(f"scan: hits={sorted(scan.hits)} {time.perf_counter()-t0:.1f}s", flush=True)
print("lams:", sorted(lams), flush=True)
