"""Quotient/intersection/saturation/elimination vs the combinatorial oracle,
plus the zero-dimensional tools on small fixtures."""

import random

import pytest

from liaisonlab.algebra_core import MonomialOrder, PrimeField, RingSpec, parse_polynomial
from liaisonlab.errors import DimensionError
from liaisonlab.ideal_ops import (
    Ideal,
    eliminate,
    ideal_sum,
    intersect,
    is_reduced_zero_dim,
    quotient,
    read_ideal_text,
    ring_map_kernel,
    saturate,
    saturate_irrelevant,
    write_ideal_text,
    zero_dim_degree,
)
from oracles import (
    exponents_from_ideal,
    ideal_from_exponents,
    mono_intersect,
    mono_member,
    mono_minimalize,
    mono_quotient,
    mono_saturate,
)


@pytest.fixture(scope="module")
def R3(field):
    return RingSpec.pn(field, 2)


def test_intersect_principal(R3):
    x0 = Ideal(R3, ["x0"])
    x1 = Ideal(R3, ["x1"])
    K = intersect(x0, x1)
    assert exponents_from_ideal(K) == ((1, 1, 0),)
    # I cap I = I
    I = Ideal(R3, ["x0^2 - x1*x2", "x0*x1"])
    assert intersect(I, I).same_ideal(I)


def test_quotient_examples(R3):
    I = Ideal(R3, ["x0*x1"])
    Q = quotient(I, Ideal(R3, ["x0"]))
    assert exponents_from_ideal(Q) == ((0, 1, 0),)
    J = Ideal(R3, ["x0^2 - x1*x2", "x1^3"])
    assert quotient(J, R3.one()).same_ideal(J)


def test_saturate_example(R3):
    I = Ideal(R3, ["x0^2", "x0*x1"])
    S = saturate(I, Ideal(R3, ["x0", "x1"]))
    assert exponents_from_ideal(S) == ((1, 0, 0),)
    # idempotence
    S2 = saturate(S, Ideal(R3, ["x0", "x1"]))
    assert S2.same_ideal(S)


def _random_monomial_ideal(rnd, nvars, max_deg=4, max_gens=4):
    gens = []
    for _ in range(rnd.randrange(1, max_gens + 1)):
        gens.append(tuple(rnd.randrange(max_deg) for _ in range(nvars)))
    gens = [g for g in gens if any(g)]
    return mono_minimalize(gens) if gens else ((1,) + (0,) * (nvars - 1),)


def test_monomial_oracle_agreement(field):
    """quotient / intersection / saturation vs the combinatorial monomial oracle."""
    rnd = random.Random(77)
    for trial in range(100):
        nv = rnd.randrange(2, 5)
        R = RingSpec.pn(field, nv - 1)
        A = _random_monomial_ideal(rnd, nv)
        B = _random_monomial_ideal(rnd, nv)
        IA = ideal_from_exponents(R, A)
        IB = ideal_from_exponents(R, B)
        assert exponents_from_ideal(intersect(IA, IB)) == mono_intersect(A, B)
        assert exponents_from_ideal(quotient(IA, IB)) == mono_quotient(A, B)
        assert exponents_from_ideal(saturate(IA, IB)) == mono_saturate(A, B)


def test_quotient_intersect_identities(field):
    rnd = random.Random(99)
    for _ in range(30):
        nv = rnd.randrange(2, 5)
        R = RingSpec.pn(field, nv - 1)
        A = _random_monomial_ideal(rnd, nv)
        B = _random_monomial_ideal(rnd, nv)
        IA = ideal_from_exponents(R, A)
        IB = ideal_from_exponents(R, B)
        Q = quotient(IA, IB)
        # I <= I : J
        assert Q.contains_ideal(IA)
        # (I : J) * J <= I
        for q in Q.generators:
            for b in IB.generators:
                assert IA.contains(q * b)
        # I cap J <= I
        K = intersect(IA, IB)
        assert IA.contains_ideal(K)


def test_eliminate_consistency(field, ring):
    # eliminate on the tag construction agrees with intersect (same machinery)
    R = RingSpec.pn(field, 2)
    I = intersect(Ideal(R, ["x0"]), Ideal(R, ["x1"]))
    assert exponents_from_ideal(I) == ((1, 1, 0),)
    # eliminate the x-block of a product line ideal {pt} x V(l)
    L = Ideal(ring, ["x0 - 2*x1", "y0 + 3*y1 - y2"])
    E = eliminate(L, ["x"])
    assert len(E.generators) == 1
    g = E.generators[0]
    assert g.multidegree() == (1,)


def test_double_quotient_round_trip_small(ring):
    # two coplanar fiber lines linked inside a (1,1)x(0,2)-style complete intersection
    C = Ideal(ring, ["x0 - x1", "y0"])  # a fiber line
    D = Ideal(ring, ["x0 + x1", "y1"])  # another fiber line
    Y = intersect(C, D)
    lhs = quotient(Y, quotient(Y, C))
    assert lhs.same_ideal(saturate_irrelevant(C))


def test_zero_dim_degree_points(plane):
    # two distinct points in P^2
    P1 = Ideal(plane, ["y0", "y1"])
    P2 = Ideal(plane, ["y0 - y2", "y1 - 2*y2"])
    I = intersect(P1, P2)
    I.saturated = True
    assert zero_dim_degree(I) == 2
    assert is_reduced_zero_dim(I)


def test_zero_dim_degree_union_of_k_points(plane):
    rnd = random.Random(5)
    p = plane.field.p
    pts = set()
    while len(pts) < 5:
        pts.add((1, rnd.randrange(p), rnd.randrange(p)))
    I = None
    for a, b, c in pts:
        # point (a:b:c) with a=1: ideal (y1 - b*y0, y2 - c*y0)
        J = Ideal(plane, [f"y1 - {b}*y0", f"y2 - {c}*y0"])
        I = J if I is None else intersect(I, J)
    I.saturated = True
    assert zero_dim_degree(I) == 5
    assert is_reduced_zero_dim(I)


def test_non_reduced_double_point(plane):
    I = Ideal(plane, ["y0^2", "y1"], saturated=True)
    assert zero_dim_degree(I) == 2
    assert not is_reduced_zero_dim(I)


def test_zero_dim_degree_dimension_error(plane):
    I = Ideal(plane, ["y0"], saturated=True)  # a line, dim 1
    with pytest.raises(DimensionError):
        zero_dim_degree(I)


def test_ring_map_kernel_veronese(field):
    P1 = RingSpec.pn(field, 1, prefix="y")
    y0, y1 = P1.gens()
    K = ring_map_kernel(P1, None, [y0 * y0, y0 * y1, y1 * y1])
    assert len(K.generators) == 1
    g = K.generators[0]
    T = K.ring
    assert g.monic(MonomialOrder.grevlex(T)) == parse_polynomial("w1^2 - w0*w2", T).monic(
        MonomialOrder.grevlex(T)
    )


def test_ring_map_kernel_identity(field):
    P2 = RingSpec.pn(field, 2, prefix="y")
    K = ring_map_kernel(P2, None, P2.gens())
    assert not K.generators


def test_ideal_text_roundtrip(ring):
    I = Ideal(ring, ["x0^2*y1 - 3*x0*x1*y2", "y0^3 + y1^3"], saturated=True)
    J = read_ideal_text(write_ideal_text(I))
    assert J.ring == ring
    assert J.generators == I.generators
    assert J.saturated
