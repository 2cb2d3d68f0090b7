"""Smoothness, nodal loci, plane models, maximal rank, fiber scans on small fixtures."""

import pytest

from liaisonlab.algebra_core import MonomialOrder, PrimeField, RingSpec, parse_polynomial
from liaisonlab.constructions import (
    Rng,
    random_ci_rational_curve,
    random_fiber_line,
    random_form,
    random_plane_quartic_graph,
    union_ideal,
)
from liaisonlab.errors import ProjectionError, SpecialityError
from liaisonlab.geometry import (
    collinear_fiber_scan,
    is_smooth_curve,
    maximal_rank_check,
    nodal_plane_model_check,
    nondegeneracy_check,
    plane_model,
    singular_locus,
    transverse_nodal_intersection,
)
from liaisonlab.ideal_ops import Ideal, saturate_irrelevant, zero_dim_degree
from liaisonlab.invariants import curve_invariants


@pytest.fixture(scope="module")
def rng():
    return Rng(99)


def test_singular_locus_smooth_conic(plane):
    I = Ideal(plane, ["y0*y2 - y1^2"])
    assert singular_locus(I).is_unit()


def test_singular_locus_nodal_cubic(plane):
    # y1^2*y2 - y0^2*(y0 + y2): classical node at (0:0:1)
    I = Ideal(plane, ["y1^2*y2 - y0^3 - y0^2*y2"])
    N = saturate_irrelevant(singular_locus(I))
    assert not N.is_unit()
    assert zero_dim_degree(N) == 1


def test_nodal_plane_model_check_cubic(plane, rng):
    F = parse_polynomial("y1^2*y2 - y0^3 - y0^2*y2", plane)
    rep = nodal_plane_model_check(F, 0, rng=rng.split("cubic"))
    assert rep.passed and rep.length == 1


def test_smooth_curve_fixtures(ring, rng):
    R = random_ci_rational_curve(ring, rng.split("ci"))
    assert is_smooth_curve(R, rng=rng.split("sm"))
    # a union of two fiber lines in one fiber meeting at a point is singular
    L1 = Ideal(ring, ["x0 - x1", "y0"], saturated=True)
    L2 = Ideal(ring, ["x0 - x1", "y1"], saturated=True)
    X = union_ideal([L1, L2])
    assert not is_smooth_curve(X, rng=rng.split("sing"))


def test_smoothness_invariant_under_coordinate_change(ring, rng):
    R = random_ci_rational_curve(ring, rng.split("base"))
    from liaisonlab.ideal_ops import _block_substitute, _random_block_change

    p = ring.field.p
    M, _ = _random_block_change(ring, 3, rng.split("M"))
    idxs = ring.block_var_indices("y")
    moved = Ideal(ring, [_block_substitute(g, idxs, M) for g in R.generators], saturated=True)
    assert is_smooth_curve(moved, rng=rng.split("sm2"))


def test_transverse_intersection_skew_lines(ring, rng):
    L1 = Ideal(ring, ["x0 - x1", "y0"], saturated=True)
    L2 = Ideal(ring, ["x0 - 2*x1", "y1"], saturated=True)
    rep = transverse_nodal_intersection(L1, L2, 0, rng=rng.split("skew"))
    assert rep.passed and rep.length == 0


def test_transverse_intersection_crossing_lines(ring, rng):
    # same fiber, different lines in the plane: one intersection point
    L1 = Ideal(ring, ["x0 - x1", "y0"], saturated=True)
    L2 = Ideal(ring, ["x0 - x1", "y1"], saturated=True)
    rep = transverse_nodal_intersection(L1, L2, 1, rng=rng.split("cross"))
    assert rep.passed and rep.length == 1 and rep.reduced


def test_plane_model_of_graph(ring, rng):
    G = random_plane_quartic_graph(ring, rng.split("graph"))
    F = plane_model(G, expected_degree=4)
    assert F.multidegree() == (4,)
    F2 = plane_model(G, expected_degree=4, method="eliminate")
    order = MonomialOrder.grevlex(F.ring)
    assert F.monic(order) == F2.monic(order)


def test_plane_model_projection_error(ring):
    # a fiber line projects to a line, not a degree-2 form
    L = Ideal(ring, ["x0 - x1", "y0"], saturated=True)
    with pytest.raises(ProjectionError):
        plane_model(L, expected_degree=2)


def test_maximal_rank_closed_form(ring, rng):
    R = random_ci_rational_curve(ring, rng.split("mr"))
    # (1,4) rational curve: chi(O(a,b)) = a + 4b + 1
    table, ok = maximal_rank_check(R, 2, range(1, 4))
    assert ok
    for a in range(1, 4):
        ambient = (a + 1) * 6
        chi = a + 8 + 1
        assert table[a][1] == max(0, ambient - chi)


def test_maximal_rank_speciality_guard(ring):
    # a (0,1) line with b=0 twists of degree 0 < 2g-1 is fine (g=0 => bound -1),
    # but a positive-genus curve with a tiny twist must refuse
    from liaisonlab.invariants import CurveInvariants

    I = Ideal(ring, ["x0", "y0"], saturated=True)
    fake = CurveInvariants("P1xP2", 1, (0, 1), 5)
    with pytest.raises(SpecialityError):
        maximal_rank_check(I, 0, [1], inv=fake)


def test_nondegeneracy(ring, rng):
    L = Ideal(ring, ["x0 - x1", "y0"], saturated=True)
    assert not nondegeneracy_check(L)
    R = random_ci_rational_curve(ring, rng.split("nd"))
    # a (1,4) curve lies on no (1,0) or (0,1) hypersurface
    assert nondegeneracy_check(R)


def test_collinear_scan_all_fibers_degenerate():
    # three graph sections with linearly dependent coordinate vectors:
    # every fiber is collinear, so the scan must flag every lambda
    field = PrimeField(1009)
    ring = RingSpec.p1xp2(field)
    rng = Rng(4)
    f = [random_form(ring, (1, 0), rng) for _ in range(3)]
    g = [random_form(ring, (1, 0), rng) for _ in range(3)]
    ys = [ring.variable(f"y{i}") for i in range(3)]

    def graph(coords):
        gens = []
        for i in range(3):
            for j in range(i + 1, 3):
                gens.append(ys[i] * coords[j] - ys[j] * coords[i])
        return saturate_irrelevant(Ideal(ring, gens))

    s = [f[i] + g[i] for i in range(3)]
    X = union_ideal([graph(f), graph(g), graph(s)])
    inv = curve_invariants(X)
    assert inv.degree[0] == 3
    scan = collinear_fiber_scan(X, rng=rng.split("scan"))
    assert len(scan.hits) + len(scan.short_fibers) == field.p + 1
    assert scan.fibers_checked == field.p + 1


def test_collinear_scan_rational_curve_sparse(ring, rng):
    # a (1,4) curve has single-point fibers: every fiber is short, no lines
    R = random_ci_rational_curve(ring, rng.split("scan14"))
    # restrict to a cheap subrange by using a small prime
    field = PrimeField(1009)
    small = RingSpec.p1xp2(field)
    rng2 = Rng(11)
    from liaisonlab.constructions import random_ci_rational_curve as rc

    R2 = rc(small, rng2)
    scan = collinear_fiber_scan(R2, rng=rng2.split("s"))
    assert scan.hits == []
    assert len(scan.short_fibers) == field.p + 1
