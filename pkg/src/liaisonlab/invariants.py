"""Numeric invariants of curves and the closed-form liaison predictors.

A curve in P^1 x P^2 has Hilbert function d1*a + d2*b + 1 - p_a on a
stabilized grid, and a curve in P^n has d*t + 1 - p_a; fitting those
linear shapes on a verification window (never assuming stabilization,
always checking it) is how degree, bidegree and arithmetic genus are
read off ideals.  The predictors compute what a complete-intersection
link must produce, so every computed residual can be checked against
its forecast.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

from .errors import (
    DimensionError,
    InconsistentLinkError,
    InfeasibleLinkError,
    RegularityError,
)
from .ideal_ops import Ideal, _PROBE_CAP


@dataclass(frozen=True)
class CurveInvariants:
    """Degree data of a 1-dimensional scheme; bidegree for P1xP2, degree for P^n."""

    ambient: object
    dimension: int
    degree: tuple | int
    p_a: int
    h0_table: dict = dfield(default_factory=dict, compare=False)

    def degree_pair(self):
        return self.degree if isinstance(self.degree, tuple) else (self.degree,)


@dataclass
class LinkStep:
    """One liaison step: the complete intersection used, forecast and outcome."""

    ambient: object
    ci_degrees: tuple
    input_invariants: CurveInvariants
    predicted: CurveInvariants
    predicted_intersection_length: int
    computed: CurveInvariants | None = None

    @property
    def matches(self) -> bool:
        return (
            self.computed is not None
            and self.computed.degree == self.predicted.degree
            and self.computed.p_a == self.predicted.p_a
        )


def hilbert_function(I: Ideal, multidegree) -> int:
    """Dimension of the multidegree piece of R/I (I saturated for geometric meaning)."""
    md = multidegree if isinstance(multidegree, tuple) else (multidegree,)
    return I.hilbert_function(md)


def h0_ideal(I: Ideal, multidegree) -> int:
    """Dimension of the multidegree piece of the ideal itself."""
    md = multidegree if isinstance(multidegree, tuple) else (multidegree,)
    return I.ring.count_monomials(md) - I.hilbert_function(md)


def _probe_start(I: Ideal) -> int:
    start = 1
    for g in I.generators:
        start = max(start, max(g.multidegree()) + 2)
    return start


def curve_invariants(I: Ideal) -> CurveInvariants:
    """Dimension, (bi)degree and arithmetic genus from the Hilbert function.

    Fits the linear Hilbert polynomial on a 3x3 grid (bigraded) or three
    consecutive degrees (P^n), verifying exact linearity rather than
    assuming a regularity bound.
    """
    if not I.saturated:
        raise ValueError("curve_invariants needs a saturated ideal")
    ring = I.ring
    if I.is_unit():
        raise DimensionError("empty scheme")
    if ring.grading_dim == 2:
        return _fit_bigraded(I)
    return _fit_single(I)


def _fit_bigraded(I: Ideal) -> CurveInvariants:
    s = _probe_start(I)
    last_window = None
    while s + 2 <= _PROBE_CAP:
        H = {}
        for da in range(3):
            for db in range(3):
                H[(da, db)] = I.hilbert_function((s + da, s + db))
        d1 = H[(1, 0)] - H[(0, 0)]
        d2 = H[(0, 1)] - H[(0, 0)]
        c = H[(0, 0)] - d1 * s - d2 * s
        if all(H[(da, db)] == d1 * (s + da) + d2 * (s + db) + c for da in range(3) for db in range(3)):
            if d1 == 0 and d2 == 0:
                raise DimensionError(f"scheme is zero-dimensional (length {c})")
            if d1 < 0 or d2 < 0:
                raise RegularityError("Hilbert values decreasing; window not stabilized")
            return CurveInvariants(I.ring.ambient, 1, (d1, d2), 1 - c)
        last_window = H
        s += 1
    if last_window is not None and _looks_superlinear(list(last_window.values())):
        raise DimensionError("Hilbert function grows superlinearly (dimension >= 2)")
    raise RegularityError(f"no linear window below the probe cap {_PROBE_CAP}")


def _fit_single(I: Ideal) -> CurveInvariants:
    s = _probe_start(I)
    vals = None
    while s + 2 <= _PROBE_CAP:
        vals = [I.hilbert_function((s + k,)) for k in range(3)]
        d = vals[1] - vals[0]
        if vals[2] - vals[1] == d:
            if d == 0:
                raise DimensionError(f"scheme is zero-dimensional (length {vals[0]})")
            if d < 0:
                raise RegularityError("Hilbert values decreasing; window not stabilized")
            c = vals[0] - d * s
            return CurveInvariants(I.ring.ambient, 1, d, 1 - c)
        s += 1
    if vals is not None and vals[2] - vals[1] > vals[1] - vals[0]:
        raise DimensionError("Hilbert function grows superlinearly (dimension >= 2)")
    raise RegularityError(f"no linear window below the probe cap {_PROBE_CAP}")


def _looks_superlinear(vals) -> bool:
    return len(vals) >= 3 and vals[-1] - vals[-2] > vals[-2] - vals[-3]


# -- closed-form predictors ------------------------------------------------------


def predict_link_p1p2(inv: CurveInvariants, ci1, ci2) -> CurveInvariants:
    """Forecast the residual of a curve of bidegree (d1,d2) inside the complete
    intersection of hypersurfaces of bidegrees (a1,b1), (a2,b2):

        (d1', d2') = (b1*b2 - d1,  a1*b2 + a2*b1 - d2)
        p_a'       = p_a - ((a1+a2-2)*(d1-d1') + (b1+b2-3)*(d2-d2')) / 2
    """
    (a1, b1), (a2, b2) = tuple(ci1), tuple(ci2)
    d1, d2 = inv.degree
    d1p = b1 * b2 - d1
    d2p = a1 * b2 + a2 * b1 - d2
    if d1p < 0 or d2p < 0 or (d1p == 0 and d2p == 0):
        raise InfeasibleLinkError(f"residual bidegree ({d1p},{d2p}) is not a curve")
    two_pap = 2 * inv.p_a - ((a1 + a2 - 2) * (d1 - d1p) + (b1 + b2 - 3) * (d2 - d2p))
    if two_pap % 2:
        raise InconsistentLinkError("genus prediction is not an integer")
    return CurveInvariants(inv.ambient, 1, (d1p, d2p), two_pap // 2)


def predict_link_pn(r: int, d: int, g: int, degrees) -> tuple[int, int]:
    """Forecast (d', g') for linkage of a degree-d genus-g curve in P^r inside
    a complete intersection of r-1 hypersurfaces of the given degrees:

        d' = prod(degrees) - d
        g' = g - (sum(degrees) - (r+1)) * (d - d') / 2
    """
    degrees = list(degrees)
    if r < 3 or len(degrees) != r - 1:
        raise ValueError("need r >= 3 and exactly r-1 hypersurface degrees")
    prod = 1
    for x in degrees:
        prod *= x
    dp = prod - d
    if dp <= 0:
        raise InfeasibleLinkError(f"residual degree {dp} <= 0")
    two_gp = 2 * g - (sum(degrees) - (r + 1)) * (d - dp)
    if two_gp % 2:
        raise InconsistentLinkError("genus prediction is not an integer")
    return dp, two_gp // 2


def predict_intersection_length(invC: CurveInvariants, invCp: CurveInvariants, ci_degrees) -> int:
    """Number of intersection points of geometrically linked curves, computed
    from both curves (they must agree):

        #(C cap C') = deg(omega_X(sum Y_i)|_C) - (2 p_a(C) - 2).
    """

    def one_side(inv):
        if isinstance(inv.degree, tuple) and len(inv.degree) == 2:
            alpha = sum(a for a, _ in ci_degrees) - 2
            beta = sum(b for _, b in ci_degrees) - 3
            d1, d2 = inv.degree
            tw = alpha * d1 + beta * d2
        else:
            deg = inv.degree if isinstance(inv.degree, int) else inv.degree[0]
            r = inv.ambient[1]
            tw = (sum(ci_degrees) - r - 1) * deg
        return tw - (2 * inv.p_a - 2)

    a = one_side(invC)
    b = one_side(invCp)
    if a != b:
        raise InconsistentLinkError(f"intersection length disagrees: {a} vs {b}")
    return a


def brill_noether_rho(g: int, r: int, d: int) -> int:
    """rho = g - (r+1)(g+r-d).

    Keyword use is encouraged: the literature writes the same number with
    several argument orders, so callers should spell out g=, r=, d=.
    """
    return g - (r + 1) * (g + r - d)


def serre_residual(g: int, d: int, r: int) -> tuple[int, int]:
    """Degree and dimension of the residual series |K - D| of a g^r_d:
    (2g - 2 - d, r - d + g - 1)."""
    return 2 * g - 2 - d, r - d + g - 1
