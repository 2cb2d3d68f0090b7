"""Buchberger's algorithm with the classical pair criteria.

The engine works on term lists (key, mono, coeff) sorted descending by the
integer order key from algebra_core, so comparisons, monomial products and
divisibility tests are all single int operations.  Pair management follows
the Gebauer-Moeller formulation of the product (coprime leading term) and
chain (lcm) criteria; pair selection is the normal strategy, smallest
weighted lcm degree first, which for homogeneous input also enables sound
degree-truncated runs.
"""

from __future__ import annotations

import heapq

from .algebra_core import EXP_BITS, MonomialOrder, Polynomial, RingSpec
from .errors import EngineLimitError

_DEFAULT_PAIR_LIMIT = 600_000


def _mono_lcm(a: int, b: int, nvars: int) -> int:
    out = 0
    for i in range(nvars):
        sh = EXP_BITS * i
        ea = (a >> sh) & 0xFFFF
        eb = (b >> sh) & 0xFFFF
        out |= (ea if ea >= eb else eb) << sh
    return out


def _merge_sub(a, ai, b, p):
    """a[ai:] - b for descending term lists; b is consumed entirely."""
    out = []
    ap = out.append
    i, j = ai, 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        ta = a[i]
        tb = b[j]
        ka, kb = ta[0], tb[0]
        if ka > kb:
            ap(ta)
            i += 1
        elif ka < kb:
            ap((kb, tb[1], p - tb[2]))
            j += 1
        else:
            c = (ta[2] - tb[2]) % p
            if c:
                ap((ka, ta[1], c))
            i += 1
            j += 1
    if i < na:
        out.extend(a[i:])
    while j < nb:
        tb = b[j]
        ap((tb[0], tb[1], p - tb[2]))
        j += 1
    return out


def _reduce_full(terms, lm_monos, lm_keys, tails, p, hm):
    """Full normal form of a term list against monic reducers."""
    out = []
    work = terms
    wi = 0
    nred = len(lm_monos)
    while wi < len(work):
        k, m, c = work[wi]
        mh = m | hm
        gi = -1
        for ri in range(nred):
            if (mh - lm_monos[ri]) & hm == hm:
                gi = ri
                break
        if gi < 0:
            out.append(work[wi])
            wi += 1
            continue
        dk = k - lm_keys[gi]
        dm = m - lm_monos[gi]
        tail = tails[gi]
        if tail:
            sub = []
            sap = sub.append
            for tk, tm, tc in tail:
                tmm = tm + dm
                if tmm & hm:
                    raise OverflowError("monomial exponent overflow during reduction")
                sap((tk + dk, tmm, tc * c % p))
            work = _merge_sub(work, wi + 1, sub, p)
        elif wi + 1 < len(work):
            work = work[wi + 1 :]
        else:
            work = []
        wi = 0
    return out


class _Engine:
    """Shared conversion plumbing bound to one (ring, order)."""

    def __init__(self, ring: RingSpec, order: MonomialOrder):
        if order.ring != ring:
            raise ValueError("order belongs to a different ring")
        self.ring = ring
        self.order = order
        self.p = ring.field.p
        self.hm = ring.high_mask
        # scalar weight of each variable = sum of its multidegree vector
        self.wsum = tuple(sum(w) for w in ring.weights)

    def wdeg(self, mono: int) -> int:
        d = 0
        for i, w in enumerate(self.wsum):
            if w:
                d += w * ((mono >> (EXP_BITS * i)) & 0xFFFF)
        return d

    def to_terms(self, f: Polynomial):
        return f.terms_sorted(self.order)

    def from_terms(self, terms) -> Polynomial:
        return Polynomial(self.ring, {m: c for _, m, c in terms})

    def monic_terms(self, terms):
        lc = terms[0][2]
        if lc == 1:
            return list(terms)
        inv = pow(lc, self.p - 2, self.p)
        return [(k, m, c * inv % self.p) for k, m, c in terms]


def normal_form(f: Polynomial, gens, order: MonomialOrder | None = None) -> Polynomial:
    """Remainder of f on division by gens; deterministic for a fixed order.

    No term of the result is divisible by a leading monomial of gens, and
    f minus the result lies in the ideal generated by gens.
    """
    ring = f.ring
    gl = list(gens.elements) if isinstance(gens, GroebnerBasis) else list(gens)
    if order is None:
        order = gens.order if isinstance(gens, GroebnerBasis) else MonomialOrder.grevlex(ring)
    for g in gl:
        if g.ring != ring:
            raise ValueError("normal form across different rings")
    eng = _Engine(ring, order)
    if not f.terms:
        return f
    lm_monos, lm_keys, tails = [], [], []
    for g in gl:
        if not g.terms:
            continue
        terms = eng.monic_terms(eng.to_terms(g))
        lm_keys.append(terms[0][0])
        lm_monos.append(terms[0][1])
        tails.append(terms[1:])
    red = _reduce_full(list(eng.to_terms(f)), lm_monos, lm_keys, tails, eng.p, eng.hm)
    return eng.from_terms(red)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    eng = _Engine(f.ring, order)
    ft = eng.monic_terms(eng.to_terms(f))
    gt = eng.monic_terms(eng.to_terms(g))
    L = _mono_lcm(ft[0][1], gt[0][1], f.ring.nvars)
    kL = order.key(L)
    sub_f = [(tk + (kL - ft[0][0]), tm + (L - ft[0][1]), tc) for tk, tm, tc in ft[1:]]
    sub_g = [(tk + (kL - gt[0][0]), tm + (L - gt[0][1]), tc) for tk, tm, tc in gt[1:]]
    return eng.from_terms(_merge_sub(sub_f, 0, sub_g, eng.p))


class GroebnerBasis:
    """A reduced Groebner basis: monic, auto-reduced, sorted by leading key.

    For a fixed (ideal, order) the element tuple is unique, so equality of
    bases decides equality of ideals.  truncated_at is the degree cap of a
    truncated run (None for a complete basis).
    """

    def __init__(self, ring, order, elements, truncated_at=None, source=None):
        self.ring = ring
        self.order = order
        self.elements = tuple(elements)
        self.truncated_at = truncated_at
        self.source = source
        self._nf_data = None

    def leading_monomials(self):
        return tuple(g.leading(self.order)[1] for g in self.elements)

    def _reducers(self):
        if self._nf_data is None:
            eng = _Engine(self.ring, self.order)
            lm_monos, lm_keys, tails = [], [], []
            for g in self.elements:
                terms = eng.to_terms(g)
                lm_keys.append(terms[0][0])
                lm_monos.append(terms[0][1])
                tails.append(list(terms[1:]))
            self._nf_data = (eng, lm_monos, lm_keys, tails)
        return self._nf_data

    def nf(self, f: Polynomial) -> Polynomial:
        if not self.elements or not f.terms:
            return f
        eng, lm_monos, lm_keys, tails = self._reducers()
        red = _reduce_full(list(eng.to_terms(f)), lm_monos, lm_keys, tails, eng.p, eng.hm)
        return eng.from_terms(red)

    def contains(self, f: Polynomial) -> bool:
        if self.truncated_at is not None:
            raise ValueError("membership needs an untruncated basis")
        return not self.nf(f).terms

    def is_unit_ideal(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].terms == {0: 1}

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and other.ring == self.ring
            and other.order.tag == self.order.tag
            and other.elements == self.elements
        )

    def __repr__(self):
        t = f", truncated_at={self.truncated_at}" if self.truncated_at is not None else ""
        return f"GroebnerBasis({len(self.elements)} elements, {self.order.tag}{t})"


def buchberger(
    gens,
    order: MonomialOrder | None = None,
    degree_cap: int | None = None,
    pair_limit: int = _DEFAULT_PAIR_LIMIT,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by gens.

    degree_cap, for homogeneous input, stops after all S-pairs of weighted
    lcm degree <= cap; the result then contains exactly the reduced-basis
    elements of degree <= cap.
    """
    gl = [g for g in gens if g is not None]
    if not gl:
        raise ValueError("buchberger needs at least one polynomial to fix the ring")
    ring = gl[0].ring
    for g in gl:
        if g.ring != ring:
            raise ValueError("generators live in different rings")
    if order is None:
        order = MonomialOrder.grevlex(ring)
    eng = _Engine(ring, order)
    p, hm, nvars = eng.p, eng.hm, ring.nvars

    # interreduce the input: same ideal, much better starting basis
    seeds = sorted(
        (eng.monic_terms(eng.to_terms(g)) for g in gl if g.terms),
        key=lambda t: (eng.wdeg(t[0][1]), t[0][0]),
    )
    lm_monos, lm_keys, tails, fulls = [], [], [], []

    def _append(terms):
        lm_keys.append(terms[0][0])
        lm_monos.append(terms[0][1])
        tails.append(terms[1:])
        fulls.append(terms)

    for t in seeds:
        red = _reduce_full(t, lm_monos, lm_keys, tails, p, hm)
        if red:
            _append(eng.monic_terms(red))
    if not fulls:
        return GroebnerBasis(ring, order, (), None)

    lcms = {}
    dead = set()
    heap = []

    def _update(h):
        """Gebauer-Moeller pair update after basis element h was appended."""
        lm_h = lm_monos[h]
        cand = []
        for g in range(h):
            T = _mono_lcm(lm_h, lm_monos[g], nvars)
            cand.append((T, g))
        kept = []
        for idx, (T, g1) in enumerate(cand):
            coprime = T == lm_h + lm_monos[g1]
            if not coprime:
                dominated = False
                for T2, _ in cand[idx + 1 :]:
                    if ((T | hm) - T2) & hm == hm:
                        dominated = True
                        break
                if not dominated:
                    for T2, _, _ in kept:
                        if T2 != T and ((T | hm) - T2) & hm == hm:
                            dominated = True
                            break
                if dominated:
                    continue
            kept.append((T, g1, coprime))
        # chain criterion against pending old pairs
        for (i, j), L in list(lcms.items()):
            if (i, j) in dead:
                continue
            if ((L | hm) - lm_h) & hm == hm:
                if _mono_lcm(lm_monos[i], lm_h, nvars) != L and _mono_lcm(lm_monos[j], lm_h, nvars) != L:
                    dead.add((i, j))
        for T, g1, coprime in kept:
            if coprime:
                continue
            lcms[(g1, h)] = T
            heapq.heappush(heap, (eng.wdeg(T), order.key(T), g1, h))

    for h in range(len(fulls)):
        _update(h)

    truncated = None
    processed = 0
    unit = fulls[0][0][1] == 0  # constant generator
    while heap and not unit:
        d, _, i, j = heapq.heappop(heap)
        if (i, j) in dead:
            lcms.pop((i, j), None)
            continue
        lcms.pop((i, j), None)
        if degree_cap is not None and d > degree_cap:
            truncated = degree_cap
            break
        processed += 1
        if processed > pair_limit:
            raise EngineLimitError(f"pair limit {pair_limit} exceeded")
        fi, fj = fulls[i], fulls[j]
        L = _mono_lcm(fi[0][1], fj[0][1], nvars)
        kL = order.key(L)
        sub_i = [(tk + (kL - fi[0][0]), tm + (L - fi[0][1]), tc) for tk, tm, tc in fi[1:]]
        sub_j = [(tk + (kL - fj[0][0]), tm + (L - fj[0][1]), tc) for tk, tm, tc in fj[1:]]
        s = _merge_sub(sub_i, 0, sub_j, p)
        red = _reduce_full(s, lm_monos, lm_keys, tails, p, hm)
        if not red:
            continue
        red = eng.monic_terms(red)
        _append(red)
        if red[0][1] == 0:
            unit = True
            break
        _update(len(fulls) - 1)

    if unit:
        return GroebnerBasis(ring, order, (ring.one(),), None)

    basis = _interreduce(eng, fulls)
    return GroebnerBasis(ring, order, tuple(eng.from_terms(t) for t in basis), truncated)


def _interreduce(eng, fulls):
    """Minimalize leading terms, then tail-reduce: the reduced basis."""
    p, hm = eng.p, eng.hm
    order_sorted = sorted(fulls, key=lambda t: t[0][0])
    minimal = []
    for t in order_sorted:
        lm = t[0][1]
        keep = True
        for s in minimal:
            if ((lm | hm) - s[0][1]) & hm == hm:
                keep = False
                break
        if keep:
            minimal.append(t)
    out = []
    for idx, t in enumerate(minimal):
        lm_monos = [s[0][1] for k, s in enumerate(minimal) if k != idx]
        lm_keys = [s[0][0] for k, s in enumerate(minimal) if k != idx]
        tails = [s[1:] for k, s in enumerate(minimal) if k != idx]
        red = _reduce_full(list(t), lm_monos, lm_keys, tails, p, hm)
        out.append(eng.monic_terms(red))
    out.sort(key=lambda t: t[0][0])
    return out


def is_member(f: Polynomial, ideal_or_gens, order: MonomialOrder | None = None) -> bool:
    """True iff f reduces to zero against a Groebner basis of the ideal."""
    if hasattr(ideal_or_gens, "groebner"):
        gb = ideal_or_gens.groebner(order)
        return gb.contains(f)
    if isinstance(ideal_or_gens, GroebnerBasis):
        return ideal_or_gens.contains(f)
    gb = buchberger(list(ideal_or_gens), order)
    return gb.contains(f)
