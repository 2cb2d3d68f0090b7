"""Exact multivariate polynomial arithmetic over prime fields.

Coefficients are least non-negative residues mod p, held in plain Python
ints.  A monomial is a single Python int with 16 bits per variable
(variable i occupies bits [16*i, 16*i+16)); exponents are limited to
15 bits so the top bit of each field can serve as a guard bit, which
makes divisibility testing a two-op integer computation:

    m divides u  <=>  ((u | HIGH) - m) & HIGH == HIGH

where HIGH has the guard bit set in every field.  Monomial products are
integer additions.  Term comparison inside the Groebner engine works on
precomputed integer sort keys (see MonomialOrder.key) so the whole hot
path runs on machine-word-friendly int operations.

Rings carry a block structure: each block is a named group of variables
sharing one multidegree vector, which realizes the bigraded coordinate
ring of P^1 x P^2, standard graded P^n, and the weighted extension rings
used for elimination.
"""

from __future__ import annotations

import re
from .errors import HomogeneityError

EXP_BITS = 16
EXP_LIMIT = 0x7FFF  # 15 usable bits per exponent; bit 15 is the guard bit
DEG_BITS = 24  # block-degree fields inside sort keys


def _is_probable_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 3,215,031,751 (covers the 2^32 range we allow)
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The field F_p for an odd prime p.  Elements are ints in [0, p)."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int) or p <= 2 or p >= 1 << 32:
            raise ValueError(f"modulus must be an odd prime below 2^32, got {p!r}")
        if not _is_probable_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


def fp_inv(a: int, field: PrimeField) -> int:
    """Multiplicative inverse of a nonzero residue."""
    return field.inv(a)


class Block:
    """A named group of variables sharing one multidegree vector."""

    __slots__ = ("name", "variables", "weight")

    def __init__(self, name: str, variables, weight):
        self.name = name
        self.variables = tuple(variables)
        self.weight = tuple(weight)
        if not self.variables:
            raise ValueError("block needs at least one variable")

    def __eq__(self, other):
        return (
            isinstance(other, Block)
            and other.name == self.name
            and other.variables == self.variables
            and other.weight == self.weight
        )

    def __hash__(self):
        return hash((self.name, self.variables, self.weight))

    def __repr__(self):
        return f"Block({self.name!r}, {self.variables}, weight={self.weight})"


class RingSpec:
    """A multigraded polynomial ring over F_p with named variable blocks."""

    def __init__(self, field: PrimeField, blocks, ambient):
        self.field = field
        self.blocks = tuple(blocks)
        self.ambient = ambient
        names = [b.name for b in self.blocks]
        if len(set(names)) != len(names):
            raise ValueError("block names must be distinct")
        self.var_names = tuple(v for b in self.blocks for v in b.variables)
        if len(set(self.var_names)) != len(self.var_names):
            raise ValueError("variable names must be distinct")
        self.nvars = len(self.var_names)
        self.var_index = {v: i for i, v in enumerate(self.var_names)}
        self.grading_dim = len(self.blocks[0].weight)
        for b in self.blocks:
            if len(b.weight) != self.grading_dim:
                raise ValueError("all blocks must grade into the same number of components")
        self.weights = tuple(b.weight for b in self.blocks for _ in b.variables)
        # var index ranges per block, in ring order
        self.block_ranges = []
        lo = 0
        for b in self.blocks:
            self.block_ranges.append((b.name, range(lo, lo + len(b.variables))))
            lo += len(b.variables)
        self.high_mask = 0
        for i in range(self.nvars):
            self.high_mask |= (EXP_LIMIT + 1) << (EXP_BITS * i)

    # -- constructors ------------------------------------------------------

    @classmethod
    def p1xp2(cls, field: PrimeField) -> "RingSpec":
        """Bigraded coordinate ring of P^1 x P^2: x0,x1 of degree (1,0), y0,y1,y2 of degree (0,1)."""
        return cls(
            field,
            [Block("x", ("x0", "x1"), (1, 0)), Block("y", ("y0", "y1", "y2"), (0, 1))],
            "P1xP2",
        )

    @classmethod
    def pn(cls, field: PrimeField, n: int, prefix: str = "x") -> "RingSpec":
        """Standard graded coordinate ring of P^n."""
        if n < 1:
            raise ValueError("need n >= 1")
        names = tuple(f"{prefix}{i}" for i in range(n + 1))
        return cls(field, [Block(prefix, names, (1,))], ("Pn", n))

    @classmethod
    def plane(cls, field: PrimeField) -> "RingSpec":
        """The P^2 ring in y-variables that fiber specialization lands in."""
        return cls.pn(field, 2, prefix="y")

    def extended(self, extra_blocks, ambient=None) -> "RingSpec":
        """Ring with extra trailing blocks; existing monomials keep their packing."""
        return RingSpec(
            self.field,
            self.blocks + tuple(extra_blocks),
            ambient if ambient is not None else ("Elim", self.ambient),
        )

    def block_named(self, name: str) -> Block:
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(name)

    def block_var_indices(self, name: str):
        for bname, rng in self.block_ranges:
            if bname == name:
                return tuple(rng)
        raise KeyError(name)

    def is_pn(self) -> bool:
        return isinstance(self.ambient, tuple) and self.ambient[0] == "Pn"

    # -- monomial packing --------------------------------------------------

    def pack(self, exponents) -> int:
        m = 0
        for i, e in enumerate(exponents):
            if e < 0 or e > EXP_LIMIT:
                raise OverflowError(f"exponent {e} out of range [0, {EXP_LIMIT}]")
            m |= e << (EXP_BITS * i)
        return m

    def unpack(self, mono: int):
        return tuple((mono >> (EXP_BITS * i)) & 0xFFFF for i in range(self.nvars))

    def mono_multidegree(self, mono: int):
        deg = [0] * self.grading_dim
        for i in range(self.nvars):
            e = (mono >> (EXP_BITS * i)) & 0xFFFF
            if e:
                w = self.weights[i]
                for j in range(self.grading_dim):
                    deg[j] += e * w[j]
        return tuple(deg)

    def mono_divides(self, m: int, u: int) -> bool:
        return ((u | self.high_mask) - m) & self.high_mask == self.high_mask

    def format_mono(self, mono: int) -> str:
        parts = []
        for i, e in enumerate(self.unpack(mono)):
            if e == 1:
                parts.append(self.var_names[i])
            elif e > 1:
                parts.append(f"{self.var_names[i]}^{e}")
        return "*".join(parts) if parts else "1"

    # -- element builders ----------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {0: 1})

    def constant(self, c: int) -> "Polynomial":
        c %= self.field.p
        return Polynomial(self, {0: c} if c else {})

    def variable(self, name: str) -> "Polynomial":
        i = self.var_index[name]
        return Polynomial(self, {1 << (EXP_BITS * i): 1})

    def gens(self):
        return [self.variable(v) for v in self.var_names]

    def monomial(self, exponents, coeff: int = 1) -> "Polynomial":
        c = coeff % self.field.p
        return Polynomial(self, {self.pack(exponents): c} if c else {})

    def from_terms(self, pairs) -> "Polynomial":
        """Build from (exponent tuple, coeff) pairs, merging duplicates."""
        p = self.field.p
        acc = {}
        for exps, c in pairs:
            m = self.pack(exps)
            v = (acc.get(m, 0) + c) % p
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return Polynomial(self, acc)

    # -- monomial enumeration ------------------------------------------------

    def monomials_of_multidegree(self, multidegree):
        """All packed monomials of the given multidegree.

        Requires every block weight to be expressible as block_total * weight,
        which holds for all ambients used here (unit weights and scalar
        weighted blocks).
        """
        md = tuple(multidegree)
        if len(md) != self.grading_dim:
            raise ValueError("multidegree has wrong length")
        return list(self._enum_blocks(0, md))

    def _enum_blocks(self, bi: int, remaining):
        if bi == len(self.blocks):
            if all(r == 0 for r in remaining):
                yield 0
            return
        block = self.blocks[bi]
        lo = self.block_ranges[bi][1].start
        w = block.weight
        # feasible block totals k with k*w <= remaining componentwise and exact on w's support
        totals = None
        for j, wj in enumerate(w):
            if wj:
                if remaining[j] % wj == 0:
                    k = remaining[j] // wj
                    totals = k if totals is None else (totals if totals == k else -1)
                else:
                    totals = -1
        if totals is None:
            totals = 0  # degree-0 block (tag variables): only exponent 0 in graded enumeration
        if totals < 0:
            return
        rest = tuple(remaining[j] - totals * w[j] for j in range(len(remaining)))
        if any(r < 0 for r in rest):
            return
        for tail in self._enum_blocks(bi + 1, rest):
            for comp in _compositions(totals, len(block.variables)):
                m = tail
                for off, e in enumerate(comp):
                    if e:
                        m |= e << (EXP_BITS * (lo + off))
                yield m

    def count_monomials(self, multidegree) -> int:
        md = tuple(multidegree)
        total = 1
        for bi, block in enumerate(self.blocks):
            w = block.weight
            k = None
            for j, wj in enumerate(w):
                if wj:
                    if md[j] % wj:
                        return 0
                    kk = md[j] // wj
                    if k is None:
                        k = kk
                    elif k != kk:
                        return 0
            if k is None:
                k = 0
            if k < 0:
                return 0
            total *= _binom(k + len(block.variables) - 1, len(block.variables) - 1)
        return total

    # -- structural equality ---------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, RingSpec)
            and other.field == self.field
            and other.blocks == self.blocks
            and other.ambient == self.ambient
        )

    def __hash__(self):
        return hash((self.field, self.blocks, str(self.ambient)))

    def __repr__(self):
        bl = ", ".join(f"{b.name}[{len(b.variables)}]{b.weight}" for b in self.blocks)
        return f"RingSpec(p={self.field.p}, {bl}, ambient={self.ambient})"


def _binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def _compositions(total: int, parts: int):
    """Weak compositions of `total` into `parts` parts."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


class MonomialOrder:
    """A monomial order realized as an integer sort key.

    kind "grevlex": graded reverse lexicographic over all variables.
    kind "block":  the ring's blocks compared in a given sequence, each
    by block-wise grevlex; putting a block first makes the order
    eliminate it.
    """

    def __init__(self, ring: RingSpec, block_sequence=None):
        self.ring = ring
        if block_sequence is None:
            self.kind = "grevlex"
            groups = [tuple(range(ring.nvars))]
            self.tag = "grevlex"
        else:
            self.kind = "block"
            seen = []
            groups = []
            for name in block_sequence:
                groups.append(ring.block_var_indices(name))
                seen.append(name)
            if set(seen) != {b.name for b in ring.blocks}:
                raise ValueError("block sequence must mention every block exactly once")
            self.tag = "block:" + ">".join(seen)
        self.groups = tuple(tuple(g) for g in groups)
        # precomputed (shift, field-position) plan for key()
        plan = []
        pos = 0
        for g in reversed(self.groups):
            for i in g:  # reversed twice: grevlex ties look at the last variable first
                plan.append((i, pos, False))
                pos += EXP_BITS
            plan.append((g, pos, True))
            pos += DEG_BITS
        self._plan = plan
        self.key_bits = pos
        self.key_one = self.key(0)

    @classmethod
    def grevlex(cls, ring: RingSpec) -> "MonomialOrder":
        return cls(ring)

    @classmethod
    def eliminating(cls, ring: RingSpec, first_blocks) -> "MonomialOrder":
        """Block order with `first_blocks` leading, remaining blocks following in ring order."""
        first = list(first_blocks)
        rest = [b.name for b in ring.blocks if b.name not in first]
        return cls(ring, first + rest)

    def key(self, mono: int) -> int:
        acc = 0
        for item, pos, is_deg in self._plan:
            if is_deg:
                d = 0
                for i in item:
                    d += (mono >> (EXP_BITS * i)) & 0xFFFF
                acc |= d << pos
            else:
                e = (mono >> (EXP_BITS * item)) & 0xFFFF
                acc |= (0xFFFF - e) << pos
        return acc

    def sort_terms(self, terms):
        """terms: iterable of (mono, coeff) -> list of (key, mono, coeff), descending."""
        out = [(self.key(m), m, c) for m, c in terms]
        out.sort(key=lambda t: t[0], reverse=True)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and other.ring == self.ring
            and other.tag == self.tag
        )

    def __hash__(self):
        return hash((self.ring, self.tag))

    def __repr__(self):
        return f"MonomialOrder({self.tag})"


class Polynomial:
    """An element of a RingSpec, stored as {packed monomial: nonzero residue}.

    Values are treated as immutable after construction; arithmetic always
    allocates.  Sorted term views per monomial order are cached.
    """

    __slots__ = ("ring", "terms", "_views", "_multideg")

    def __init__(self, ring: RingSpec, terms: dict):
        self.ring = ring
        self.terms = terms
        self._views = {}
        self._multideg = False  # not yet computed

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def multidegree(self):
        """Common multidegree of all terms; None for 0; HomogeneityError if mixed."""
        if self._multideg is False:
            md = None
            for m in self.terms:
                d = self.ring.mono_multidegree(m)
                if md is None:
                    md = d
                elif md != d:
                    self._multideg = None
                    raise HomogeneityError(f"terms of multidegree {md} and {d} in one polynomial")
            self._multideg = md
        if self._multideg is None and self.terms:
            raise HomogeneityError("inhomogeneous polynomial")
        return self._multideg

    def is_homogeneous(self) -> bool:
        try:
            self.multidegree()
            return True
        except HomogeneityError:
            return False

    def total_degree(self):
        """Max over terms of the exponent sum (grading-independent)."""
        if not self.terms:
            return None
        n = self.ring.nvars
        best = -1
        for m in self.terms:
            s = 0
            for i in range(n):
                s += (m >> (EXP_BITS * i)) & 0xFFFF
            if s > best:
                best = s
        return best

    # -- arithmetic -----------------------------------------------------------

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other):
        self._check_ring(other)
        p = self.ring.field.p
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        acc = dict(a)
        for m, c in b.items():
            v = acc.get(m)
            if v is None:
                acc[m] = c
            else:
                v = (v + c) % p
                if v:
                    acc[m] = v
                else:
                    del acc[m]
        return Polynomial(self.ring, acc)

    def __neg__(self):
        p = self.ring.field.p
        return Polynomial(self.ring, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check_ring(other)
        p = self.ring.field.p
        hm = self.ring.high_mask
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        acc = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = m1 + m2
                if m & hm:
                    raise OverflowError("monomial exponent overflow in product")
                v = (acc.get(m, 0) + c1 * c2) % p
                if v:
                    acc[m] = v
                else:
                    acc.pop(m, None)
        return Polynomial(self.ring, acc)

    __rmul__ = __mul__

    def scale(self, c: int):
        p = self.ring.field.p
        c %= p
        if c == 0:
            return self.ring.zero()
        if c == 1:
            return self
        return Polynomial(self.ring, {m: cc * c % p for m, cc in self.terms.items()})

    def shift(self, mono: int):
        """Multiply by a single monomial."""
        hm = self.ring.high_mask
        acc = {}
        for m, c in self.terms.items():
            mm = m + mono
            if mm & hm:
                raise OverflowError("monomial exponent overflow in shift")
            acc[mm] = c
        return Polynomial(self.ring, acc)

    def __pow__(self, n: int):
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    # -- views ---------------------------------------------------------------

    def terms_sorted(self, order: MonomialOrder):
        view = self._views.get(order.tag)
        if view is None:
            view = order.sort_terms(self.terms.items())
            self._views[order.tag] = view
        return view

    def leading(self, order: MonomialOrder):
        """(key, mono, coeff) of the leading term."""
        return self.terms_sorted(order)[0]

    def monic(self, order: MonomialOrder):
        lc = self.terms_sorted(order)[0][2]
        if lc == 1:
            return self
        return self.scale(self.ring.field.inv(lc))

    # -- evaluation / calculus -------------------------------------------------

    def evaluate(self, point) -> int:
        """Value at a full coordinate tuple (mod p)."""
        p = self.ring.field.p
        n = self.ring.nvars
        total = 0
        for m, c in self.terms.items():
            v = c
            for i in range(n):
                e = (m >> (EXP_BITS * i)) & 0xFFFF
                if e:
                    v = v * pow(point[i] % p, e, p) % p
            total = (total + v) % p
        return total

    def derivative(self, var_index: int):
        p = self.ring.field.p
        step = 1 << (EXP_BITS * var_index)
        acc = {}
        for m, c in self.terms.items():
            e = (m >> (EXP_BITS * var_index)) & 0xFFFF
            if e:
                v = c * e % p
                if v:
                    acc[m - step] = v
        return Polynomial(self.ring, acc)

    def map_ring(self, target: RingSpec, mono_map=None):
        """Reinterpret terms in another ring; mono_map transforms packed monomials."""
        if mono_map is None:
            acc = dict(self.terms)
        else:
            acc = {mono_map(m): c for m, c in self.terms.items()}
        return Polynomial(target, acc)

    # -- equality / display ------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and other.ring == self.ring
            and other.terms == self.terms
        )

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return format_polynomial(self)


# -- text format ----------------------------------------------------------------
#
# poly   := "0" | term (("+" | "-") term)*
# term   := coeff | [coeff "*"] factor ("*" factor)*
# factor := varname ["^" exponent]
#
# Coefficients print as symmetric residues (between -(p-1)/2 and (p-1)/2) so
# small integers read naturally; any integer is accepted on input.  Terms print
# in descending grevlex order, which makes the format canonical per ring.

_TOKEN = re.compile(r"\s*([+-]|\*|\^|[A-Za-z_][A-Za-z_0-9]*|\d+)")


def format_polynomial(f: Polynomial, order: MonomialOrder | None = None) -> str:
    if not f.terms:
        return "0"
    if order is None:
        order = MonomialOrder.grevlex(f.ring)
    p = f.ring.field.p
    half = p // 2
    out = []
    for _, m, c in f.terms_sorted(order):
        neg = c > half
        mag = p - c if neg else c
        mono = f.ring.format_mono(m)
        if mono == "1":
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out)


def parse_polynomial(text: str, ring: RingSpec) -> Polynomial:
    """Inverse of format_polynomial; accepts any +/- separated monomial list."""
    p = ring.field.p
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"cannot tokenize polynomial text at {text[pos:]!r}")
            break
        toks.append(m.group(1))
        pos = m.end()
    if toks == ["0"] or not toks:
        return ring.zero()
    acc = {}
    i = 0
    sign = 1
    while i < len(toks):
        if toks[i] == "+":
            sign, i = 1, i + 1
        elif toks[i] == "-":
            sign, i = -1, i + 1
        coeff = 1
        exps = [0] * ring.nvars
        saw_factor = False
        expect_factor = True
        while i < len(toks) and toks[i] not in ("+", "-"):
            tok = toks[i]
            if tok == "*":
                i += 1
                expect_factor = True
                continue
            if not expect_factor:
                raise ValueError(f"missing operator before {tok!r}")
            if tok.isdigit():
                coeff = coeff * int(tok)
                i += 1
            else:
                if tok not in ring.var_index:
                    raise ValueError(f"unknown variable {tok!r}")
                e = 1
                if i + 1 < len(toks) and toks[i + 1] == "^":
                    if i + 2 >= len(toks) or not toks[i + 2].isdigit():
                        raise ValueError("malformed exponent")
                    e = int(toks[i + 2])
                    i += 3
                else:
                    i += 1
                exps[ring.var_index[tok]] += e
            saw_factor = True
            expect_factor = False
        if not saw_factor:
            raise ValueError("empty term")
        c = (sign * coeff) % p
        mono = ring.pack(exps)
        v = (acc.get(mono, 0) + c) % p
        if v:
            acc[mono] = v
        else:
            acc.pop(mono, None)
        sign = 1
    return Polynomial(ring, acc)


def multidegree(f: Polynomial):
    """Common multidegree of a homogeneous polynomial (None for the zero polynomial)."""
    return f.multidegree()


def specialize_fiber(f: Polynomial, lam, target: RingSpec | None = None) -> Polynomial:
    """Restrict a P^1 x P^2 polynomial to the fiber over lam = (lam0 : lam1).

    Substitutes the x-block by the point coordinates; the result lives in
    the 3-variable y-ring graded by the second degree component.
    """
    ring = f.ring
    if ring.ambient != "P1xP2":
        raise ValueError("fiber specialization needs the P1xP2 ring")
    lam0, lam1 = (int(v) % ring.field.p for v in lam)
    if lam0 == 0 and lam1 == 0:
        raise ValueError("(0:0) is not a point of P^1")
    if target is None:
        target = RingSpec.plane(ring.field)
    p = ring.field.p
    acc = {}
    for m, c in f.terms.items():
        e0 = m & 0xFFFF
        e1 = (m >> EXP_BITS) & 0xFFFF
        v = c
        if e0:
            v = v * pow(lam0, e0, p) % p
        if e1:
            v = v * pow(lam1, e1, p) % p
        if not v:
            continue
        ym = m >> (2 * EXP_BITS)
        w = (acc.get(ym, 0) + v) % p
        if w:
            acc[ym] = w
        else:
            acc.pop(ym, None)
    return Polynomial(target, acc)
