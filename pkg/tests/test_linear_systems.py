"""Adjoint series and re-embedding, checked on a small nodal quartic control."""

import pytest

from liaisonlab.algebra_core import MonomialOrder, PrimeField, RingSpec, parse_polynomial
from liaisonlab.constructions import Rng
from liaisonlab.errors import SpecialPositionError
from liaisonlab.geometry import nodal_plane_model_check
from liaisonlab.ideal_ops import Ideal, ring_map_kernel
from liaisonlab.invariants import curve_invariants
from liaisonlab.linear_systems import PlaneModel, adjoint_series, embed_by_series


@pytest.fixture(scope="module")
def nodal_quartic(plane):
    """A one-node quartic of geometric genus 2 through deterministic search.

    y2^2*q(y0,y1) + y2*c(y0,y1) + f(y0,y1) with a node placed at (0:0:1):
    take the quartic y2^2*y0*y1 + y2*y0^3 + y0^4 + y1^4 and verify.
    """
    rng = Rng(31)
    F = parse_polynomial("y0*y1*y2^2 + y0^3*y2 + y0^4 + y1^4", plane)
    rep = nodal_plane_model_check(F, 2, rng=rng.split("ctl"))
    assert rep.passed and rep.length == 1, "control quartic must have exactly one node"
    return F, rep.ideal


def test_adjoint_dimension_genus_two(nodal_quartic):
    F, nodes = nodal_quartic
    pm = PlaneModel(F, nodes, 2, ())
    adj = adjoint_series(pm, 0)
    assert len(adj) == 2  # canonical series of a genus-2 curve
    for a in adj:
        assert a.multidegree() == (1,)


def test_embed_canonical_genus_two(nodal_quartic):
    # the canonical map of a genus-2 curve is the 2:1 cover of P^1: kernel 0
    F, nodes = nodal_quartic
    pm = PlaneModel(F, nodes, 2, ())
    adj = adjoint_series(pm, 0)
    K, inv = embed_by_series(pm, adj)
    assert not K.generators
    assert inv.degree == 1 and inv.p_a == 0


def test_marked_point_series(nodal_quartic, plane):
    F, nodes = nodal_quartic
    p = plane.field.p
    # (1 : 0 : -1) satisfies y0^3*y2 + y0^4 = -1 + 1 = 0 and avoids the node
    pt = (1, 0, p - 1)
    assert F.evaluate(pt) == 0
    assert not all(g.evaluate(pt) == 0 for g in nodes.generators)
    pm = PlaneModel(F, nodes, 2, (pt,))
    adj = adjoint_series(pm, 1)
    assert len(adj) == 1
    assert adj[0].evaluate(pt) == 0


def test_marked_point_validation(nodal_quartic):
    F, nodes = nodal_quartic
    with pytest.raises(ValueError):
        PlaneModel(F, nodes, 2, ((1, 1, 1),))  # not on the quartic (generic point)


def test_ring_map_kernel_quadric_surface(field):
    # P^1 x P^1 -> P^3 Segre-style through a P^1 reparametrization:
    # the twisted cubic from (y0^3, y0^2 y1, y0 y1^2, y1^3)
    P1 = RingSpec.pn(field, 1, prefix="y")
    y0, y1 = P1.gens()
    K = ring_map_kernel(P1, None, [y0**3, y0**2 * y1, y0 * y1**2, y1**3])
    inv = curve_invariants(K)
    assert inv.degree == 3 and inv.p_a == 0
    assert len(K.minimal_generators()) == 3
