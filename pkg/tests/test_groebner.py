"""Division, Buchberger, reduced-basis canonicity, and the Macaulay oracle."""

import random

import pytest

from liaisonlab.algebra_core import MonomialOrder, Polynomial, PrimeField, RingSpec, parse_polynomial
from liaisonlab.groebner import buchberger, is_member, normal_form, s_polynomial
from oracles import macaulay_membership


@pytest.fixture(scope="module")
def R3(field):
    return RingSpec.pn(field, 2)


def test_normal_form_trivial(ring):
    f = parse_polynomial("x0^2*y1 + x1^2*y0", ring)
    assert normal_form(f, [f]).is_zero()
    y0 = ring.variable("y0")
    x0 = ring.variable("x0")
    assert normal_form(y0, [x0]) == y0


def test_normal_form_membership_by_construction(ring):
    rnd = random.Random(23)
    f1 = parse_polynomial("x0*y0 + 2*x1*y1", ring)
    f2 = parse_polynomial("x0*y2 - x1*y0", ring)
    gb = buchberger([f1, f2])
    for _ in range(10):
        monos = ring.monomials_of_multidegree((1, 1))
        g = Polynomial(ring, {m: rnd.randrange(1, 10007) for m in monos})
        h = Polynomial(ring, {m: rnd.randrange(1, 10007) for m in monos})
        combo = g * f1 + h * f2
        assert gb.nf(combo).is_zero()


def test_buchberger_simple(field):
    R = RingSpec.pn(field, 1)
    x0, x1 = R.gens()
    gb = buchberger([x0, x0 + x1])
    assert set(gb.elements) == {x0, x1}


def test_buchberger_already_basis(ring):
    g = parse_polynomial("y0*y2 - y1^2", ring)
    gb = buchberger([g])
    assert gb.elements == (g.monic(gb.order),)
    assert buchberger(list(gb.elements)).elements == gb.elements


def test_reduced_basis_unique_and_order_independent(R3):
    f = parse_polynomial("x0^2 - x1*x2", R3)
    g = parse_polynomial("x0*x1 - x2^2", R3)
    h = parse_polynomial("x1^3 - x0*x2^2", R3)
    a = buchberger([f, g, h])
    b = buchberger([h, g, f])
    c = buchberger(list(a.elements))
    assert a.elements == b.elements == c.elements
    # every element monic, tails reduced, no leading monomial divides another
    order = a.order
    lms = [e.leading(order)[1] for e in a.elements]
    hm = R3.high_mask
    for i, l1 in enumerate(lms):
        for j, l2 in enumerate(lms):
            if i != j:
                assert ((l1 | hm) - l2) & hm != hm
    for e in a.elements:
        assert e.leading(order)[2] == 1


def test_spoly_reduces_to_zero_in_basis(R3):
    f = parse_polynomial("x0^2 - x1*x2", R3)
    g = parse_polynomial("x0*x1 - x2^2", R3)
    gb = buchberger([f, g])
    order = gb.order
    els = list(gb.elements)
    for i in range(len(els)):
        for j in range(i + 1, len(els)):
            s = s_polynomial(els[i], els[j], order)
            assert gb.nf(s).is_zero()


def test_membership(ring):
    f = parse_polynomial("x0*y0 + x1*y1", ring)
    g = parse_polynomial("x0*y2", ring)
    assert is_member(f, [f, g])
    x1 = ring.variable("x1")
    x0 = ring.variable("x0")
    assert not is_member(x1, [x0])


def _random_small_ideal(ring, rnd, max_gens=3, max_deg=3):
    gens = []
    for _ in range(rnd.randrange(1, max_gens + 1)):
        d = rnd.randrange(1, max_deg + 1)
        monos = ring.monomials_of_multidegree((d,))
        terms = {m: rnd.randrange(10007) for m in monos if rnd.random() < 0.4}
        terms = {m: c for m, c in terms.items() if c}
        if terms:
            gens.append(Polynomial(ring, terms))
    return gens


def test_macaulay_oracle_agreement(field):
    """GB membership vs Macaulay-matrix row reduction on random homogeneous ideals."""
    rnd = random.Random(101)
    checked = 0
    instances = 0
    while instances < 100:
        nv = rnd.randrange(2, 6)
        R = RingSpec.pn(field, nv - 1)
        gens = _random_small_ideal(R, rnd)
        if not gens:
            continue
        instances += 1
        gb = buchberger(gens)
        for _ in range(5):
            d = rnd.randrange(1, 7)
            monos = R.monomials_of_multidegree((d,))
            if rnd.random() < 0.5:
                # random homogeneous polynomial
                f = Polynomial(R, {m: rnd.randrange(10007) for m in monos if rnd.random() < 0.3})
            else:
                # random combination of generators, must be a member
                f = R.zero()
                for g in gens:
                    gd = g.multidegree()[0]
                    if gd <= d:
                        mult = R.monomials_of_multidegree((d - gd,))
                        mono = mult[rnd.randrange(len(mult))]
                        f = f + g.shift(mono).scale(rnd.randrange(10007))
            if not f.terms:
                continue
            if not f.is_homogeneous():
                continue
            assert gb.contains(f) == macaulay_membership(f, gens, R)
            checked += 1
    assert checked >= 300


def test_idempotence_on_pipeline_style_ideal(ring):
    gens = [
        parse_polynomial("x0*y0 - x1*y1", ring),
        parse_polynomial("x0^2*y2 + x1^2*y0", ring),
        parse_polynomial("x1^3*y1^2 - x0^3*y2^2", ring),
    ]
    gb = buchberger(gens)
    gb2 = buchberger(list(gb.elements))
    assert gb.elements == gb2.elements


def test_unit_ideal_detection(R3):
    one = R3.one()
    f = parse_polynomial("x0^2 - x1*x2", R3)
    gb = buchberger([f, one])
    assert gb.is_unit_ideal()


def test_degree_truncation(R3):
    # x0^2, x1^3: complete basis; cap below 3 must keep only the quadric
    f = parse_polynomial("x0^2", R3)
    g = parse_polynomial("x1^3", R3)
    full = buchberger([f, g])
    trunc = buchberger([f, g], degree_cap=2)
    assert f in set(trunc.elements)
    assert set(trunc.elements) <= set(full.elements)
