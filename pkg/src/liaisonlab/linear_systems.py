"""Linear systems on nodal plane models.

The canonical series of a nodal plane curve of degree d is cut by its
adjoints: forms of degree d-3 through all nodes.  Imposing k general
marked points on top cuts the canonical series down to a series of
dimension g-k that maps the curve into P^(g-k-1); for the nonic models
built here that is how the abstract curve gets re-embedded into P^6 or
P^4 for the projective-space liaison stage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _linalg
from .algebra_core import Polynomial, RingSpec
from .errors import NotEmbeddingError, SpecialPositionError
from .ideal_ops import Ideal, ring_map_kernel
from .invariants import CurveInvariants, curve_invariants


@dataclass
class PlaneModel:
    """A nodal plane model: the form, its node scheme, the geometric genus
    (d-1)(d-2)/2 - #nodes, and marked smooth points."""

    form: Polynomial
    nodes: Ideal
    genus: int
    marked: tuple

    def __post_init__(self):
        self.marked = tuple(tuple(int(c) for c in pt) for pt in self.marked)
        for pt in self.marked:
            if self.form.evaluate(pt) != 0:
                raise ValueError(f"marked point {pt} is not on the plane model")
            if all(g.evaluate(pt) == 0 for g in self.nodes.generators):
                raise ValueError(f"marked point {pt} sits on a node")

    @property
    def degree(self) -> int:
        return self.form.multidegree()[0]


def adjoint_series(pm: PlaneModel, k: int):
    """Basis of the degree-(d-3) forms through all nodes and the first k
    marked points: the series |K - P| on the normalization.

    The dimension must come out as genus - k (nodes, then marked points,
    each imposing independent conditions); anything else means special
    position and the caller should resample.
    """
    if k > len(pm.marked):
        raise ValueError(f"only {len(pm.marked)} marked points available")
    d = pm.degree
    if d < 4:
        raise ValueError("adjoint series needs degree >= 4")
    basis = pm.nodes.graded_piece((d - 3,))
    if len(basis) != pm.genus:
        raise SpecialPositionError(
            f"adjoint system has dimension {len(basis)}, expected genus {pm.genus}"
        )
    if k == 0:
        return basis
    p = pm.form.ring.field.p
    rows = [[b.evaluate(pt) for b in basis] for pt in pm.marked[:k]]
    kernel = _linalg.nullspace(np.array(rows, dtype=np.int64), p)
    out = []
    for v in kernel:
        f = pm.form.ring.zero()
        for i, c in enumerate(v):
            if c:
                f = f + basis[i].scale(int(c))
        out.append(f)
    if len(out) != pm.genus - k:
        raise SpecialPositionError(
            f"marked points impose dependent conditions: dim {len(out)} != {pm.genus - k}"
        )
    return out


def embed_by_series(pm: PlaneModel, forms, kernel_degree_cap: int = 4):
    """Image of the plane curve under the linear series, as an ideal in
    P^(len(forms)-1), with its computed invariants.

    The image ideal is the kernel of the ring map sending the target
    coordinates to the forms modulo the plane model.  Geometric genus
    equal to the arithmetic genus of the image certifies that the series
    embedded the normalization (nodes separated, no new identifications);
    p_a above the source genus raises NotEmbeddingError so callers can
    resample the marked points.
    """
    forms = list(forms)
    if len(forms) < 2:
        raise ValueError("need at least two forms")
    ring = pm.form.ring
    K = ring_map_kernel(ring, Ideal(ring, [pm.form]), forms, degree_cap=kernel_degree_cap)
    inv = curve_invariants(K)
    if inv.p_a > pm.genus:
        raise NotEmbeddingError(
            f"image has arithmetic genus {inv.p_a} > geometric genus {pm.genus}"
        )
    return K, inv
