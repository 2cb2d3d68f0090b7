"""Geometric certificate checks.

Smoothness goes through the Jacobian criterion.  In the bigraded ambient
the singular-locus ideal is assembled from random aggregates of the
codimension-sized minors (adjoined until saturation stabilizes, which is
replayable from the seed); in P^n the library certifies smoothness
chart-by-chart, where the unit ideal is detected early, and only smooth
verdicts are certified (a False return means "failed to certify smooth").

"Ordinary double points" is operationalized throughout as: the singular /
intersection scheme is zero-dimensional, reduced, and of the expected
length, which characterizes A_1 singularities without any primary
decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

import numpy as np

from . import _linalg
from .algebra_core import (
    EXP_BITS,
    Block,
    MonomialOrder,
    Polynomial,
    RingSpec,
    format_polynomial,
)
from .constructions import Rng
from .errors import (
    DimensionError,
    ProjectionError,
    SpecialityError,
)
from .groebner import buchberger
from .ideal_ops import (
    Ideal,
    eliminate,
    ideal_sum,
    is_reduced_zero_dim,
    saturate_irrelevant,
    zero_dim_degree,
)
from .invariants import curve_invariants, h0_ideal


@dataclass
class NodalLocusReport:
    """Outcome of a nodal-locus check: pass means zero-dimensional, reduced,
    and of exactly the expected length."""

    ideal: Ideal | None
    zero_dimensional: bool
    length: int | None
    reduced: bool | None
    expected_length: int
    details: dict = dfield(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.zero_dimensional and self.reduced and self.length == self.expected_length)


def _codim_of_curve(ring: RingSpec) -> int:
    if ring.ambient == "P1xP2":
        return 2
    if ring.is_pn():
        return ring.ambient[1] - 1
    raise ValueError(f"no smoothness convention for ambient {ring.ambient}")


def _jacobian(gens, ring):
    return [[g.derivative(j) for j in range(ring.nvars)] for g in gens]


def _poly_det(M, ring):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    out = ring.zero()
    sign = 1
    for j in range(n):
        if M[0][j].terms:
            minor = [[M[i][k] for k in range(n) if k != j] for i in range(1, n)]
            term = M[0][j] * _poly_det(minor, ring)
            out = out + (term if sign > 0 else -term)
        sign = -sign
    return out


def _aggregate_minor(J, ring, k, rng: Rng):
    """det(A * J * B) for random A (k x rows), B (cols x k).

    By Cauchy-Binet this is a random coefficient aggregate of all k x k
    minors of J, so it vanishes wherever the Jacobian rank drops below k.
    A and B are each drawn once for the whole product; per-entry draws
    would not be an aggregate of minors at all.  Only meaningful in affine
    charts where homogeneity does not matter.
    """
    p = ring.field.p
    rows, cols = len(J), ring.nvars
    A = [[rng.randmod(p) for _ in range(rows)] for _ in range(k)]
    B = [[rng.randmod(p) for _ in range(k)] for _ in range(cols)]
    AJ = [[_combine(J, A[r], j, ring) for j in range(cols)] for r in range(k)]
    M = []
    for r in range(k):
        row = []
        for c in range(k):
            acc = ring.zero()
            for j in range(cols):
                if B[j][c]:
                    acc = acc + AJ[r][j].scale(B[j][c])
            row.append(acc)
        M.append(row)
    return _poly_det(M, ring)


def _combine(J, coeffs, col, ring):
    acc = ring.zero()
    for i, c in enumerate(coeffs):
        if c:
            acc = acc + J[i][col].scale(c)
    return acc


def _minor_aggregates(J, ring, k, rng: Rng, exact: bool, sample_cap: int = 400):
    """Random per-multidegree aggregates of the k x k minors of the Jacobian.

    Every individual minor is homogeneous; aggregating inside one
    multidegree group keeps the output homogeneous, which the bigraded
    saturation machinery requires.  exact=True returns every minor
    unaggregated (deterministic fallback).
    """
    from itertools import combinations

    p = ring.field.p
    rows = list(range(len(J)))
    cols = list(range(ring.nvars))
    row_subsets = list(combinations(rows, k))
    col_subsets = list(combinations(cols, k))
    total = len(row_subsets) * len(col_subsets)
    pairs = []
    if total <= sample_cap or exact:
        pairs = [(rs, cs) for rs in row_subsets for cs in col_subsets]
    else:
        seen = set()
        while len(pairs) < sample_cap:
            rs = row_subsets[rng.randmod(len(row_subsets))]
            cs = col_subsets[rng.randmod(len(col_subsets))]
            if (rs, cs) not in seen:
                seen.add((rs, cs))
                pairs.append((rs, cs))
    groups: dict = {}
    for rs, cs in pairs:
        sub = [[J[i][j] for j in cs] for i in rs]
        d = _poly_det(sub, ring)
        if not d.terms:
            continue
        groups.setdefault(d.multidegree(), []).append(d)
    if exact:
        return [m for grp in groups.values() for m in grp]
    out = []
    for md in sorted(groups):
        grp = groups[md]
        for _ in range(2):
            acc = ring.zero()
            for m in grp:
                c = rng.randmod(p)
                if c:
                    acc = acc + m.scale(c)
            if acc.terms:
                out.append(acc)
    return out


def singular_locus(I: Ideal, rng: Rng | None = None, max_batches: int = 3, exact: bool = False) -> Ideal:
    """Saturated ideal of the singular locus of the scheme cut out by I.

    For hypersurfaces (plane curves) the full set of partials is used; in
    codimension >= 2 random per-degree aggregates of the codimension-sized
    Jacobian minors are adjoined batch by batch until the saturated ideal
    stabilizes or becomes the unit ideal.  exact=True adjoins every minor.
    """
    ring = I.ring
    S = I if I.saturated else saturate_irrelevant(I)
    gb = S.groebner()
    gens = list(gb.elements)
    if not gens:
        raise ValueError("singular locus of the zero ideal")
    k = _codim_of_curve(ring)
    J = _jacobian(gens, ring)
    if k == 1:
        partials = [J[i][j] for i in range(len(gens)) for j in range(ring.nvars) if J[i][j].terms]
        return saturate_irrelevant(Ideal(ring, list(S.generators) + partials))
    if rng is None:
        rng = Rng(0x51A6)
    if exact:
        minors = _minor_aggregates(J, ring, k, rng, exact=True)
        return saturate_irrelevant(Ideal(ring, list(S.generators) + minors))
    adjoined = []
    prev = None
    for _ in range(max_batches):
        adjoined += _minor_aggregates(J, ring, k, rng, exact=False)
        cur = saturate_irrelevant(Ideal(ring, list(S.generators) + adjoined))
        if cur.is_unit():
            return cur
        if prev is not None and prev.same_ideal(cur):
            return cur
        prev = cur
    return prev


def is_smooth_curve(I: Ideal, rng: Rng | None = None) -> bool:
    """Smoothness certificate for a curve, chart by chart.

    Every affine chart of the ambient is checked with the Jacobian
    criterion: the chart ideal plus random aggregates of the
    codimension-sized minors must be the unit ideal, which the Groebner
    engine detects early.  Only the smooth verdict is certified (False
    means "failed to certify smooth"; certificates treat it as a failed
    open condition and resample).
    """
    ring = I.ring
    if rng is None:
        rng = Rng(0x51A6)
    return _smooth_by_charts(I, rng)


def _chart_list(ring: RingSpec):
    """Variable index tuples whose chart opens cover the ambient."""
    if ring.ambient == "P1xP2":
        xs = ring.block_var_indices("x")
        ys = ring.block_var_indices("y")
        return [(i, j) for i in xs for j in ys]
    if ring.is_pn():
        return [(i,) for i in range(ring.nvars)]
    raise ValueError(f"no chart convention for ambient {ring.ambient}")


def _smooth_by_charts(I: Ideal, rng: Rng, aggregates: int = 3) -> bool:
    ring = I.ring
    k = _codim_of_curve(ring)
    S = I if I.saturated else saturate_irrelevant(I)
    gens = list(S.groebner().elements)
    for chart in _chart_list(ring):
        aff, remap = _affine_chart(ring, chart)
        agens = [g.map_ring(aff, remap) for g in gens]
        agens = [g for g in agens if g.terms]
        J = _jacobian(agens, aff)
        dets = []
        for _ in range(aggregates):
            d = _aggregate_minor(J, aff, k, rng)
            if d.terms:
                dets.append(d)
        if not dets:
            return False
        gb = buchberger(agens + dets)
        if not gb.is_unit_ideal():
            return False
    return True


def _affine_chart(ring: RingSpec, chart):
    """Affine ring with the chart variables set to 1."""
    drop = set(chart)
    names = tuple(v for i, v in enumerate(ring.var_names) if i not in drop)
    aff = RingSpec(ring.field, [Block("a", names, (1,))], ("Aff", ring.ambient))
    keep = [i for i in range(ring.nvars) if i not in drop]

    def remap(mono: int, _keep=tuple(keep)) -> int:
        out = 0
        for newi, oldi in enumerate(_keep):
            e = (mono >> (EXP_BITS * oldi)) & 0xFFFF
            out |= e << (EXP_BITS * newi)
        return out

    return aff, remap


def transverse_nodal_intersection(I_C: Ideal, I_D: Ideal, expected: int, rng: Rng | None = None) -> NodalLocusReport:
    """The two curves must meet in a reduced zero-dimensional scheme of the
    expected length (that is, transversally, in ordinary double points of
    the union).

    The sum ideal is probed without saturating it: every
    irrelevant-supported component vanishes in high bidegrees, so the
    stabilized Hilbert window of the raw sum carries exactly the saturated
    scheme's length and multiplication structure.
    """
    Z = ideal_sum(I_C, I_D)
    Z.saturated = True  # probing happens on the stabilized window only
    if Z.is_unit():
        return NodalLocusReport(Z, True, 0, True, expected)
    try:
        length = zero_dim_degree(Z)
    except DimensionError:
        return NodalLocusReport(Z, False, None, None, expected, {"failure": "common component"})
    details: dict = {}
    reduced = is_reduced_zero_dim(Z, rng=rng, details=details)
    return NodalLocusReport(Z, True, length, reduced, expected, details)


def plane_model(I: Ideal, expected_degree: int | None = None, method: str = "piece") -> Polynomial:
    """Generator of the x-eliminated principal ideal: the plane model of a
    curve in P^1 x P^2 under projection to P^2.

    The x-free part of the ideal is its (0,*)-graded pieces, so the model
    is the unique form in the first nonzero piece (0, d); method
    "eliminate" recomputes it through the block-order elimination instead.
    Both routes check principality: no x-free forms below the degree found,
    exactly one at it.
    """
    ring = I.ring
    if ring.ambient != "P1xP2":
        raise ValueError("plane_model needs a curve in P^1 x P^2")
    plane = RingSpec.plane(ring.field)
    if method == "eliminate":
        E = eliminate(I, ["x"], target_ring=plane)
        if len(E.generators) != 1:
            raise ProjectionError(f"x-elimination is not principal ({len(E.generators)} generators)")
        F = E.generators[0].monic(MonomialOrder.grevlex(plane))
        d = F.multidegree()[0]
    else:
        cap = expected_degree if expected_degree is not None else 20
        F = None
        for b in range(1, cap + 1):
            piece = I.graded_piece((0, b))
            if piece:
                if len(piece) != 1:
                    raise ProjectionError(f"{len(piece)} independent x-free forms of degree {b}")
                ys = ring.block_var_indices("y")

                def to_plane(m, _sh=EXP_BITS * ys[0]):
                    return m >> _sh

                F = piece[0].map_ring(plane, to_plane).monic(MonomialOrder.grevlex(plane))
                d = b
                break
        if F is None:
            raise ProjectionError(f"no x-free form of degree <= {cap}")
    if expected_degree is not None and d != expected_degree:
        raise ProjectionError(f"plane model has degree {d}, expected {expected_degree}")
    return F


def nodal_plane_model_check(F: Polynomial, g: int, rng: Rng | None = None) -> NodalLocusReport:
    """A degree-d plane model of a genus-g curve must have exactly
    delta = (d-1)(d-2)/2 - g singular points, all ordinary double points."""
    ring = F.ring
    d = F.multidegree()[0]
    delta = (d - 1) * (d - 2) // 2 - g
    N = singular_locus(Ideal(ring, [F]), rng=rng)
    if N.is_unit():
        return NodalLocusReport(N, True, 0, True, delta)
    try:
        length = zero_dim_degree(N)
    except DimensionError:
        return NodalLocusReport(N, False, None, None, delta, {"failure": "singular locus not finite"})
    details: dict = {}
    reduced = is_reduced_zero_dim(N, rng=rng, details=details)
    return NodalLocusReport(N, True, length, reduced, delta, details)


def maximal_rank_check(I: Ideal, b: int, a_range, inv=None):
    """Restriction maps H^0(O(a,b)) -> H^0(O_C(a,b)) have maximal rank iff
    h^0(I(a,b)) = max(0, ambient - chi(O_C(a,b))); returns ({a: (computed,
    expected)}, all_match).  Twists must be non-special (degree >= 2g-1)."""
    if inv is None:
        inv = curve_invariants(I)
    d1, d2 = inv.degree
    g = inv.p_a
    table = {}
    ok = True
    for a in a_range:
        tw = a * d1 + b * d2
        if tw < 2 * g - 1:
            raise SpecialityError(f"twist ({a},{b}) has degree {tw} < 2g-1 = {2 * g - 1}")
        ambient = I.ring.count_monomials((a, b))
        chi = tw + 1 - g
        expected = max(0, ambient - chi)
        computed = h0_ideal(I, (a, b))
        table[a] = (computed, expected)
        ok = ok and computed == expected
    return table, ok


def nondegeneracy_check(I: Ideal) -> bool:
    """No hyperplane (P^n) resp. no (1,0)- or (0,1)-form (P^1 x P^2) contains
    the scheme."""
    ring = I.ring
    if ring.ambient == "P1xP2":
        return h0_ideal(I, (1, 0)) == 0 and h0_ideal(I, (0, 1)) == 0
    return h0_ideal(I, (1,)) == 0


# -- distinguished-fiber scan ----------------------------------------------------


@dataclass
class FiberScanResult:
    hits: list
    short_fibers: list
    inconclusive: list
    fibers_checked: int
    crosschecked: int

    def hit_set(self):
        return {tuple(h) for h in self.hits}


def collinear_fiber_scan(
    I: Ideal,
    extension_cap: int = 1,
    rng: Rng | None = None,
    jobs: int = 1,
    crosscheck: int = 12,
) -> FiberScanResult:
    """All fibers of a (3,*) curve over P^1(F_{p^j}), j <= extension_cap,
    whose three points are collinear (the saturated fiber ideal contains a
    linear form); fibers of length < 3 are flagged separately.

    The rational scan decides each fiber exactly: the generator spans in two
    consecutive degrees either certify the fiber piece (Hilbert value 3
    twice, which persists by Macaulay growth), or the fiber is handed to
    the honest Groebner/saturation path.  A deterministic sample of fibers
    is double-checked on both paths.  Extension fibers (j >= 2) reuse the
    span test over F_{p^j} through restriction of scalars; span-inconclusive
    extension fibers are reported as such rather than decided.
    """
    ring = I.ring
    if ring.ambient != "P1xP2":
        raise ValueError("fiber scan needs a curve in P^1 x P^2")
    if not 1 <= extension_cap <= 3:
        raise ValueError("extension_cap must be 1, 2 or 3")
    if rng is None:
        rng = Rng(0xF1BE)
    p = ring.field.p
    gens = list(I.minimal_generators())
    hits, short, inconclusive = [], [], []
    checked = 0
    scanner = _FiberScanner(ring, gens)
    lambdas = [(1, a) for a in range(p)] + [(0, 1)]
    if jobs > 1:
        results = _scan_parallel(scanner, lambdas, jobs)
    else:
        results = [scanner.classify(lam) for lam in lambdas]
    for lam, verdict in zip(lambdas, results):
        checked += 1
        if verdict == "line":
            hits.append(lam)
        elif verdict == "short":
            short.append(lam)
    # deterministic crosscheck of the fast path against the honest path
    agree = 0
    sample = {lambdas[rng.randmod(len(lambdas))] for _ in range(crosscheck)} | set(hits)
    for lam in sorted(sample):
        fast = scanner.classify(lam)
        honest = scanner.classify_honest(lam)
        if fast != honest:
            raise AssertionError(f"fiber scan fast/honest disagreement at {lam}: {fast} vs {honest}")
        agree += 1
    for j in range(2, extension_cap + 1):
        ext_hits, ext_short, ext_unknown = _scan_extension(scanner, j)
        hits += ext_hits
        short += ext_short
        inconclusive += ext_unknown
        checked += p ** j + 1
    return FiberScanResult(hits, short, inconclusive, checked, agree)


class _FiberScanner:
    """Per-fiber collinearity decision for one curve."""

    def __init__(self, ring: RingSpec, gens):
        self.ring = ring
        self.p = ring.field.p
        self.plane = RingSpec.plane(ring.field)
        # generator data: (x-coeff vectors per y-monomial) for fast specialization
        self.gens = gens
        self.bdegs = [g.multidegree()[1] for g in gens]
        self.t = max(3, max(self.bdegs) + 1)
        self.monos_t = self.plane.monomials_of_multidegree((self.t,))
        self.monos_t1 = self.plane.monomials_of_multidegree((self.t + 1,))
        self.col_t = {m: i for i, m in enumerate(self.monos_t)}
        self.col_t1 = {m: i for i, m in enumerate(self.monos_t1)}
        self.maxxdeg = max(g.multidegree()[0] for g in gens)
        # per generator: list of (y-mono, [(e0, coeff)]) with e0 the x0-exponent
        self.layout = []
        for g in gens:
            per_y: dict = {}
            a = g.multidegree()[0]
            for m, c in g.terms.items():
                e0 = m & 0xFFFF
                ym = m >> (2 * EXP_BITS)
                per_y.setdefault(ym, []).append((e0, c))
            self.layout.append((a, per_y))

    def specialize(self, lam):
        """Specialized generators as {y-mono: coeff} dicts (over F_p)."""
        p = self.p
        lam0, lam1 = lam
        pow0 = [1] * (self.maxxdeg + 1)
        pow1 = [1] * (self.maxxdeg + 1)
        for i in range(1, self.maxxdeg + 1):
            pow0[i] = pow0[i - 1] * lam0 % p
            pow1[i] = pow1[i - 1] * lam1 % p
        out = []
        for a, per_y in self.layout:
            terms = {}
            for ym, entries in per_y.items():
                v = 0
                for e0, c in entries:
                    v += c * pow0[e0] * pow1[a - e0]
                v %= p
                if v:
                    terms[ym] = v
            out.append(terms)
        return out

    def _span_rows(self, fibers, deg, col):
        rows = []
        for terms, b in zip(fibers, self.bdegs):
            if not terms or b > deg:
                continue
            for mult in self.plane.monomials_of_multidegree((deg - b,)):
                row = [0] * len(col)
                for ym, c in terms.items():
                    row[col[ym + mult]] = c
                rows.append(row)
        return rows

    def classify(self, lam):
        """'line' / 'plain' / 'short' for a rational fiber, exactly."""
        fibers = self.specialize(lam)
        if not any(fibers):
            return "short"
        p = self.p
        rows_t = self._span_rows(fibers, self.t, self.col_t)
        rows_t1 = self._span_rows(fibers, self.t + 1, self.col_t1)
        R_t, piv_t = _linalg.rref(np.array(rows_t, dtype=np.int64), p) if rows_t else (None, [])
        R_t1, piv_t1 = _linalg.rref(np.array(rows_t1, dtype=np.int64), p) if rows_t1 else (None, [])
        hf_t = len(self.monos_t) - len(piv_t)
        hf_t1 = len(self.monos_t1) - len(piv_t1)
        if hf_t != 3 or hf_t1 != 3:
            return self.classify_honest(lam)
        # the degree-(t+1) piece is exact: test for a linear form l with l*R_t inside it
        cond = []
        y_steps = [1, 1 << EXP_BITS, 1 << (2 * EXP_BITS)]
        for mu in self.monos_t:
            block = np.zeros((3, len(self.monos_t1)), dtype=np.int64)
            for i, step in enumerate(y_steps):
                block[i, self.col_t1[mu + step]] = 1
            red = block.copy()
            if R_t1 is not None and len(piv_t1):
                red = (block - block[:, piv_t1] @ R_t1) % p
            cond.append(red)
        sys = np.concatenate(cond, axis=1)
        if _linalg.nullspace(sys.T, p):
            return "line"
        return "plain"

    def classify_honest(self, lam):
        """Groebner + saturation route for one fiber."""
        fibers = self.specialize(lam)
        gens = [Polynomial(self.plane, t) for t in fibers if t]
        if not gens:
            return "short"
        F = Ideal(self.plane, gens)
        S = saturate_irrelevant(F)
        if S.is_unit():
            return "short"
        try:
            length = zero_dim_degree(S)
        except DimensionError:
            return "short"
        if length < 3:
            return "short"
        linear = 3 - S.hilbert_function((1,))
        return "line" if linear > 0 else "plain"


def _scan_parallel(scanner, lambdas, jobs):
    from concurrent.futures import ProcessPoolExecutor

    chunks = [lambdas[i::jobs] for i in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        futures = [ex.submit(_scan_chunk, scanner.ring.field.p, _gens_text(scanner), ch) for ch in chunks]
        results_by_chunk = [f.result() for f in futures]
    pos = {lam: i for i, lam in enumerate(lambdas)}
    out = [None] * len(lambdas)
    for ci, ch in enumerate(chunks):
        for k, lam in enumerate(ch):
            out[pos[lam]] = results_by_chunk[ci][k]
    return out


def _gens_text(scanner):
    return [format_polynomial(g) for g in scanner.gens]


def _scan_chunk(p, gens_text, lambdas):
    from .algebra_core import PrimeField, parse_polynomial

    ring = RingSpec.p1xp2(PrimeField(p))
    gens = [parse_polynomial(t, ring) for t in gens_text]
    sc = _FiberScanner(ring, gens)
    return [sc.classify(lam) for lam in lambdas]


# -- extension-field scan (restriction of scalars) --------------------------------


def _irreducible_poly(p: int, j: int):
    """Monic irreducible of degree j over F_p, deterministic smallest."""
    if j == 2:
        for n in range(2, p):
            if pow(n, (p - 1) // 2, p) == p - 1:
                return [(-n) % p, 0, 1]  # t^2 - n
        raise ValueError("no quadratic non-residue found")
    if j == 3:
        for c0 in range(1, p):
            for c1 in range(p):
                f = [c0, c1, 0, 1]
                if not _has_root(f, p):
                    return f
        raise ValueError("no irreducible cubic found")
    raise ValueError("j must be 2 or 3")


def _has_root(coeffs, p):
    for x in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % p
        if acc == 0:
            return True
    return False


class _ExtField:
    """F_{p^j} as F_p[t]/(m); elements are j-tuples, matrices blow up to F_p."""

    def __init__(self, p, j):
        self.p, self.j = p, j
        self.modulus = _irreducible_poly(p, j)
        C = np.zeros((j, j), dtype=np.int64)
        for i in range(1, j):
            C[i, i - 1] = 1
        for i in range(j):
            C[i, j - 1] = (-self.modulus[i]) % p
        self.companion = C
        self.powers = [np.eye(j, dtype=np.int64)]
        for _ in range(1, 2 * j):
            self.powers.append(self.powers[-1] @ C % p)

    def elements(self):
        p, j = self.p, self.j
        total = p ** j
        for k in range(total):
            v = []
            kk = k
            for _ in range(j):
                v.append(kk % p)
                kk //= p
            yield tuple(v)

    def mul(self, a, b):
        p, j = self.p, self.j
        raw = [0] * (2 * j - 1)
        for i, x in enumerate(a):
            if x:
                for k, y in enumerate(b):
                    raw[i + k] = (raw[i + k] + x * y) % p
        # reduce t^e with the companion matrix (its first column is t^e's coords)
        out = [0] * j
        for e, c in enumerate(raw):
            if c:
                M = self.powers[e]
                for r in range(j):
                    out[r] = (out[r] + c * int(M[r, 0])) % p
        return tuple(out)

    def pow_scalar(self, a, e):
        out = tuple([1] + [0] * (self.j - 1))
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            e >>= 1
            base = self.mul(base, base)
        return out

    def blow(self, a):
        """j x j F_p-matrix of multiplication by a."""
        M = np.zeros((self.j, self.j), dtype=np.int64)
        for e, c in enumerate(a):
            if c:
                M = (M + c * self.powers[e]) % self.p
        return M


def _scan_extension(scanner: _FiberScanner, j: int):
    p = scanner.p
    if p ** j > 1 << 20:
        raise ValueError(f"extension scan over F_p^{j} needs p^{j} <= 2^20")
    K = _ExtField(p, j)
    one = tuple([1] + [0] * (j - 1))
    zero = tuple([0] * j)
    hits, short, unknown = [], [], []
    lambdas = [(one, a) for a in K.elements()] + [(zero, one)]
    for lam in lambdas:
        verdict = _classify_ext(scanner, K, lam)
        tag = ("F_p^%d" % j, lam)
        if verdict == "line":
            hits.append(tag)
        elif verdict == "short":
            short.append(tag)
        elif verdict == "unknown":
            unknown.append(tag)
    return hits, short, unknown


def _classify_ext(scanner: _FiberScanner, K: _ExtField, lam):
    p, j = K.p, K.j
    lam0, lam1 = lam
    pow0 = [tuple([1] + [0] * (j - 1))]
    pow1 = [tuple([1] + [0] * (j - 1))]
    for _ in range(scanner.maxxdeg):
        pow0.append(K.mul(pow0[-1], lam0))
        pow1.append(K.mul(pow1[-1], lam1))
    fibers = []
    for a, per_y in scanner.layout:
        terms = {}
        for ym, entries in per_y.items():
            acc = tuple([0] * j)
            for e0, c in entries:
                contrib = K.mul(pow0[e0], pow1[a - e0])
                acc = tuple((x + c * y) % p for x, y in zip(acc, contrib))
            if any(acc):
                terms[ym] = acc
        fibers.append(terms)
    if not any(fibers):
        return "short"

    def span_rank(deg, monos, col):
        rows = []
        for terms, b in zip(fibers, scanner.bdegs):
            if not terms or b > deg:
                continue
            for mult in scanner.plane.monomials_of_multidegree((deg - b,)):
                row = np.zeros((j, len(col) * j), dtype=np.int64)
                for ym, c in terms.items():
                    ci = col[ym + mult]
                    row[:, ci * j : (ci + 1) * j] = K.blow(c).T
                rows.append(row)
        if not rows:
            return None, [], 0
        mat = np.concatenate(rows, axis=0)
        R, piv = _linalg.rref(mat, p)
        return R, piv, len(piv) // j

    R1, piv1, rk_t = span_rank(scanner.t, scanner.monos_t, scanner.col_t)
    R2, piv2, rk_t1 = span_rank(scanner.t + 1, scanner.monos_t1, scanner.col_t1)
    hf_t = len(scanner.monos_t) - rk_t
    hf_t1 = len(scanner.monos_t1) - rk_t1
    if hf_t != 3 or hf_t1 != 3:
        return "unknown"
    y_steps = [1, 1 << EXP_BITS, 1 << (2 * EXP_BITS)]
    cond = []
    for mu in scanner.monos_t:
        block = np.zeros((3 * j, len(scanner.monos_t1) * j), dtype=np.int64)
        for i, step in enumerate(y_steps):
            ci = scanner.col_t1[mu + step]
            for r in range(j):
                block[i * j + r, ci * j + r] = 1
        if R2 is not None and len(piv2):
            block = (block - block[:, piv2] @ R2) % p
        cond.append(block)
    sys = np.concatenate(cond, axis=1)
    return "line" if _linalg.nullspace(sys.T, p) else "plain"
