"""Syzygy computations through Groebner bases of free-module submodules.

A term of R^k is packed like a ring monomial with two extra trailing
fields holding (comp, CMAX - comp).  Divisibility of packed terms then
requires equality of components for free (both fields must be <=), so the
scalar reduction engine from groebner.py runs on module terms unchanged.
The order is position-over-term with component 0 largest, which makes the
leading free components an elimination block: a basis element whose lead
lies outside the relation components is a syzygy.

This is the fast path behind ideal quotients and big intersections: both
are kernels

    I : g      =  {v0 : v0*g + sum v_i f_i = 0}
    I cap J    =  {h  : h = sum a_i f_i = sum b_j g_j}

and syzygy generators project onto ideal generators.
"""

from __future__ import annotations

import heapq

from .algebra_core import EXP_BITS, MonomialOrder, Polynomial, RingSpec
from .errors import EngineLimitError
from .groebner import _merge_sub, _reduce_full

_CMAX = 0x7FFF
_PAIR_LIMIT = 600_000


class _ModuleContext:
    def __init__(self, ring: RingSpec, ncomp: int, shifts):
        self.ring = ring
        self.order = MonomialOrder.grevlex(ring)
        self.p = ring.field.p
        self.n = ring.nvars
        self.ncomp = ncomp
        self.shifts = list(shifts)
        self.lo_pos = EXP_BITS * self.n
        self.hi_pos = EXP_BITS * (self.n + 1)
        self.hm = ring.high_mask | (0x8000 << self.lo_pos) | (0x8000 << self.hi_pos)
        self.key_pos = self.order.key_bits
        self.wsum = tuple(sum(w) for w in ring.weights)

    def pack(self, comp: int, mono: int) -> int:
        return mono | (comp << self.lo_pos) | ((_CMAX - comp) << self.hi_pos)

    def comp_of(self, term: int) -> int:
        return (term >> self.lo_pos) & 0xFFFF

    def mono_of(self, term: int) -> int:
        return term & ((1 << self.lo_pos) - 1)

    def key(self, term: int) -> int:
        # position over term: smaller component wins, then the ring order
        c = (term >> self.lo_pos) & 0xFFFF
        return ((_CMAX - c) << self.key_pos) | self.order.key(self.mono_of(term))

    def wdeg(self, term: int) -> int:
        mono = self.mono_of(term)
        d = self.shifts[self.comp_of(term)]
        for i, w in enumerate(self.wsum):
            if w:
                d += w * ((mono >> (EXP_BITS * i)) & 0xFFFF)
        return d

    def to_terms(self, vector) -> list:
        """vector: dict comp -> Polynomial; returns descending packed term list."""
        out = []
        for comp, poly in vector.items():
            for m, c in poly.terms.items():
                t = self.pack(comp, m)
                out.append((self.key(t), t, c))
        out.sort(key=lambda t: t[0], reverse=True)
        return out

    def from_terms(self, terms) -> dict:
        comps: dict = {}
        for _, t, c in terms:
            comps.setdefault(self.comp_of(t), {})[self.mono_of(t)] = c
        return {comp: Polynomial(self.ring, d) for comp, d in comps.items()}


def _mono_lcm_mod(a: int, b: int, nfields: int) -> int:
    out = 0
    for i in range(nfields):
        sh = EXP_BITS * i
        ea = (a >> sh) & 0xFFFF
        eb = (b >> sh) & 0xFFFF
        out |= (ea if ea >= eb else eb) << sh
    return out


def module_groebner(ctx: _ModuleContext, vectors, pair_limit: int = _PAIR_LIMIT):
    """Reduced module Groebner basis of the given vectors (as term lists).

    The chain (lcm) criterion is applied through the Gebauer-Moeller update;
    the product criterion is unsound for modules and not used.
    """
    p, hm = ctx.p, ctx.hm
    nfields = ctx.n + 2
    seeds = []
    for v in vectors:
        t = ctx.to_terms(v)
        if t:
            seeds.append(_monic(t, p))
    seeds.sort(key=lambda t: (ctx.wdeg(t[0][1]), t[0][0]))
    lm_monos, lm_keys, tails, fulls = [], [], [], []

    def _append(terms):
        lm_keys.append(terms[0][0])
        lm_monos.append(terms[0][1])
        tails.append(terms[1:])
        fulls.append(terms)

    for t in seeds:
        red = _reduce_full(t, lm_monos, lm_keys, tails, p, hm)
        if red:
            _append(_monic(red, p))
    if not fulls:
        return []

    lcms = {}
    dead = set()
    heap = []

    def _update(h):
        lm_h = lm_monos[h]
        ch = ctx.comp_of(lm_h)
        cand = []
        for g in range(h):
            if ctx.comp_of(lm_monos[g]) != ch:
                continue
            T = _mono_lcm_mod(lm_h, lm_monos[g], nfields)
            cand.append((T, g))
        kept = []
        for idx, (T, g1) in enumerate(cand):
            dominated = False
            for T2, _ in cand[idx + 1 :]:
                if ((T | hm) - T2) & hm == hm:
                    dominated = True
                    break
            if not dominated:
                for T2, _ in kept:
                    if T2 != T and ((T | hm) - T2) & hm == hm:
                        dominated = True
                        break
            if not dominated:
                kept.append((T, g1))
        for (i, j), L in list(lcms.items()):
            if (i, j) in dead:
                continue
            if ctx.comp_of(lm_h) == ctx.comp_of(L) and ((L | hm) - lm_h) & hm == hm:
                if (
                    _mono_lcm_mod(lm_monos[i], lm_h, nfields) != L
                    and _mono_lcm_mod(lm_monos[j], lm_h, nfields) != L
                ):
                    dead.add((i, j))
        for T, g1 in kept:
            lcms[(g1, h)] = T
            heapq.heappush(heap, (ctx.wdeg(T), ctx.key(T), g1, h))

    for h in range(len(fulls)):
        _update(h)

    processed = 0
    while heap:
        _, _, i, j = heapq.heappop(heap)
        if (i, j) in dead:
            lcms.pop((i, j), None)
            continue
        lcms.pop((i, j), None)
        processed += 1
        if processed > pair_limit:
            raise EngineLimitError(f"module pair limit {pair_limit} exceeded")
        fi, fj = fulls[i], fulls[j]
        L = _mono_lcm_mod(fi[0][1], fj[0][1], nfields)
        kL = ctx.key(L)
        sub_i = [(tk + (kL - fi[0][0]), tm + (L - fi[0][1]), tc) for tk, tm, tc in fi[1:]]
        sub_j = [(tk + (kL - fj[0][0]), tm + (L - fj[0][1]), tc) for tk, tm, tc in fj[1:]]
        s = _merge_sub(sub_i, 0, sub_j, p)
        red = _reduce_full(s, lm_monos, lm_keys, tails, p, hm)
        if not red:
            continue
        _append(_monic(red, p))
        _update(len(fulls) - 1)

    return _interreduce_module(ctx, fulls)


def _monic(terms, p):
    lc = terms[0][2]
    if lc == 1:
        return list(terms)
    inv = pow(lc, p - 2, p)
    return [(k, m, c * inv % p) for k, m, c in terms]


def _interreduce_module(ctx, fulls):
    p, hm = ctx.p, ctx.hm
    by_key = sorted(fulls, key=lambda t: t[0][0])
    minimal = []
    for t in by_key:
        lm = t[0][1]
        if not any(((lm | hm) - s[0][1]) & hm == hm for s in minimal):
            minimal.append(t)
    out = []
    for idx, t in enumerate(minimal):
        lm_monos = [s[0][1] for k, s in enumerate(minimal) if k != idx]
        lm_keys = [s[0][0] for k, s in enumerate(minimal) if k != idx]
        tails = [s[1:] for k, s in enumerate(minimal) if k != idx]
        red = _reduce_full(list(t), lm_monos, lm_keys, tails, p, hm)
        out.append(_monic(red, p))
    out.sort(key=lambda t: t[0][0])
    return out


def syzygy_quotient(ring: RingSpec, I_gens, g: Polynomial):
    """Generators of (I_gens) : g, via syzygies of [g, f_1, ..., f_s].

    Relation component 0 carries the polynomial data; bookkeeping
    components 1 (for g) and 2..s+1 (for the f_i) carry the coefficients.
    Basis elements with lead outside component 0 are syzygies, and their
    g-coefficients generate the quotient.
    """
    fs = [f for f in I_gens if f.terms]
    degs = [_wdeg_poly(g)] + [_wdeg_poly(f) for f in fs]
    ctx = _ModuleContext(ring, 2 + len(fs), [0] + degs)
    vectors = [{0: g, 1: ring.one()}]
    for i, f in enumerate(fs):
        vectors.append({0: f, i + 2: ring.one()})
    basis = module_groebner(ctx, vectors)
    out = []
    for terms in basis:
        if ctx.comp_of(terms[0][1]) == 0:
            continue
        parts = ctx.from_terms(terms)
        v0 = parts.get(1)
        if v0 is not None and v0.terms:
            out.append(v0)
    return out


def syzygy_intersect(ring: RingSpec, I_gens, J_gens):
    """Generators of (I_gens) cap (J_gens) via the diagonal kernel
    {h : h = sum a_i f_i = sum b_j g_j}: relation components 0 and 1,
    bookkeeping component 2 carries h itself."""
    fs = [f for f in I_gens if f.terms]
    gs = [g for g in J_gens if g.terms]
    shifts = [0, 0, 0] + [_wdeg_poly(f) for f in fs] + [_wdeg_poly(g) for g in gs]
    ctx = _ModuleContext(ring, 3 + len(fs) + len(gs), shifts)
    vectors = [{0: ring.one(), 1: ring.one(), 2: ring.one()}]
    for i, f in enumerate(fs):
        vectors.append({0: f, 3 + i: ring.one()})
    for j, g in enumerate(gs):
        vectors.append({1: g, 3 + len(fs) + j: ring.one()})
    basis = module_groebner(ctx, vectors)
    out = []
    for terms in basis:
        if ctx.comp_of(terms[0][1]) <= 1:
            continue
        parts = ctx.from_terms(terms)
        h = parts.get(2)
        if h is not None and h.terms:
            out.append(h)
    return out


def _wdeg_poly(f: Polynomial) -> int:
    md = f.multidegree()
    return sum(md) if md is not None else (f.total_degree() or 0)
