"""Concrete Galois-representation descriptors and their local data.

Four descriptor variants: the trivial representation, power-residue
characters chi_g^i of order dividing d, the Tate module of a
non-isotrivial elliptic curve y^2 = x^3 + A(t)x + B(t) with p > 3, and
twists (elliptic or trivial base) by a power-residue character.

Local data at a place of P^1 consists of the conductor exponent, the
local Euler factor (a polynomial in T^{deg v} with exact cyclotomic
coefficients) and, for elliptic curves, the reduction type from Tate's
algorithm (short-form version, valid for p > 3).  Everything is tame
here: characters have order prime to p and elliptic conductor exponents
are at most 2.

The tame inertia action is tracked as a list of Jordan blocks
(eigenvalue in Q/Z on a topological generator, block size); twisting by
a character shifts every eigenvalue, and conductor exponents are
dim minus the number of blocks with eigenvalue 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .algebra import Fq, FqElem, Poly, RingCtx, ScalarExt, gcd, lcm
from .errors import (BadReduction, BudgetExceeded, DomainMismatch,
                     InternalInconsistency, TamenessViolation, Unsupported,
                     UnsupportedCharacteristic)
from .fastfield import TABLE_LIMIT, TableField
from .places import (Place, RatFunc, ResidueField, enumerate_places,
                     residue_unit, symbol_class, valuation)

EXHAUSTIVE_COUNT_LIMIT = 10 ** 4


# ----------------------------------------------------------------------
# Descriptors
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Trivial:
    """The trivial one-dimensional representation."""

    @property
    def dim(self) -> int:
        return 1

    @property
    def weight(self) -> int:
        return 0

    @property
    def selfdual(self) -> str:
        return "orthogonal"


@dataclass(frozen=True)
class PowerResidueChar:
    """The character chi_g^i attached to the degree-d Kummer layer of g.

    Its order is d/gcd(d, i).  Self-dual (orthogonally) iff 2i = 0 mod d.
    """

    g: RatFunc
    i: int
    d: int

    def __post_init__(self):
        if self.d < 1 or gcd(self.d, self.g.field.p) != 1:
            raise TamenessViolation("character order must be positive and prime to p")

    @property
    def dim(self) -> int:
        return 1

    @property
    def weight(self) -> int:
        return 0

    @property
    def selfdual(self) -> str:
        return "orthogonal" if (2 * self.i) % self.d == 0 else "none"

    @property
    def order(self) -> int:
        return self.d // gcd(self.d, self.i)

    @property
    def field(self) -> Fq:
        return self.g.field


@dataclass(frozen=True)
class EllipticTate:
    """Tate module of y^2 = x^3 + A(t) x + B(t), p > 3, j non-constant."""

    A: RatFunc
    B: RatFunc

    def __post_init__(self):
        f = self.A.field
        if f is not self.B.field:
            raise DomainMismatch("A and B over different constants")
        if f.p <= 3:
            raise UnsupportedCharacteristic("elliptic descriptors require p > 3")
        if self.discriminant().is_zero():
            raise ValueError("singular Weierstrass equation")
        if self._j_is_constant():
            raise ValueError("isotrivial curve (constant j) is out of scope")

    def discriminant(self) -> RatFunc:
        A, B = self.A, self.B
        num = (Poly.constant(A.field, 4) * A.num ** 3 * B.den ** 2
               + Poly.constant(A.field, 27) * B.num ** 2 * A.den ** 3)
        num = Poly.constant(A.field, -16) * num
        return RatFunc(num, A.den ** 3 * B.den ** 2)

    def _j_is_constant(self) -> bool:
        A, B = self.A, self.B
        # j = 1728 * 4A^3 / (4A^3 + 27B^2); constant iff the ratio reduces to constants
        num = Poly.constant(A.field, 4) * A.num ** 3 * B.den ** 2
        den = (Poly.constant(A.field, 4) * A.num ** 3 * B.den ** 2
               + Poly.constant(A.field, 27) * B.num ** 2 * A.den ** 3)
        if num.is_zero():
            return True
        r = RatFunc(num, den)
        return r.num.degree <= 0 and r.den.degree <= 0

    @property
    def dim(self) -> int:
        return 2

    @property
    def weight(self) -> int:
        return 1

    @property
    def selfdual(self) -> str:
        return "symplectic"

    @property
    def field(self) -> Fq:
        return self.A.field

    def quadratic_twist(self, h: RatFunc) -> "EllipticTate":
        """The twisted curve y^2 = x^3 + h^2 A x + h^3 B."""
        return EllipticTate(RatFunc(self.A.num * h.num ** 2, self.A.den * h.den ** 2),
                            RatFunc(self.B.num * h.num ** 3, self.B.den * h.den ** 3))


@dataclass(frozen=True)
class TwistProduct:
    """base tensor chi, for chi a power-residue character."""

    base: Union[Trivial, EllipticTate, PowerResidueChar, "TwistProduct"]
    char: PowerResidueChar

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def weight(self) -> int:
        return self.base.weight

    @property
    def selfdual(self) -> str:
        base_sd = self.base.selfdual
        char_sd = self.char.selfdual
        if char_sd == "none":
            return "none"
        return base_sd

    @property
    def field(self) -> Fq:
        return self.char.field


RepDescriptor = Union[Trivial, PowerResidueChar, EllipticTate, TwistProduct]


def canonicalize(rep: RepDescriptor) -> RepDescriptor:
    """Flatten twist products over trivial/character bases."""
    if isinstance(rep, TwistProduct):
        base = canonicalize(rep.base)
        ch = rep.char
        if isinstance(base, Trivial):
            return ch
        if isinstance(base, PowerResidueChar):
            if base.d != ch.d:
                raise Unsupported("character product with mismatched d")
            # chi_g^i * chi_h^j = chi_{g^i h^j}
            gnum = base.g.num ** (base.i % base.d) * ch.g.num ** (ch.i % ch.d)
            gden = base.g.den ** (base.i % base.d) * ch.g.den ** (ch.i % ch.d)
            return PowerResidueChar(RatFunc(gnum, gden), 1, base.d)
        if isinstance(base, TwistProduct):
            if base.char.d != ch.d:
                raise Unsupported("nested twists with mismatched d")
            gnum = base.char.g.num ** (base.char.i % ch.d) * ch.g.num ** (ch.i % ch.d)
            gden = base.char.g.den ** (base.char.i % ch.d) * ch.g.den ** (ch.i % ch.d)
            return TwistProduct(base.base, PowerResidueChar(RatFunc(gnum, gden), 1, ch.d))
        return TwistProduct(base, ch)
    return rep


def base_field(rep: RepDescriptor) -> Fq | None:
    if isinstance(rep, Trivial):
        return None
    return rep.field


def base_change(rep: RepDescriptor, field: Fq) -> RepDescriptor:
    """View the descriptor over a constant-field extension."""
    from .algebra import embedding

    def lift_rf(rf: RatFunc) -> RatFunc:
        if rf.field is field:
            return rf
        emb = embedding(rf.field, field)
        return RatFunc(rf.num.map_coeffs(emb), rf.den.map_coeffs(emb))

    if isinstance(rep, Trivial):
        return rep
    if isinstance(rep, PowerResidueChar):
        return PowerResidueChar(lift_rf(rep.g), rep.i, rep.d)
    if isinstance(rep, EllipticTate):
        return EllipticTate(lift_rf(rep.A), lift_rf(rep.B))
    if isinstance(rep, TwistProduct):
        return TwistProduct(base_change(rep.base, field),
                            base_change(rep.char, field))
    raise TypeError(f"not a descriptor: {rep!r}")


# ----------------------------------------------------------------------
# Reduction types (Tate's algorithm, short form, p > 3)
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ReductionData:
    """Local reduction data of an elliptic curve at a place."""

    label: str            # good | split_mult | nonsplit_mult | II | III | IV |
                          # I0* | In* | IV* | III* | II*
    cond_exp: int         # 0, 1 or 2
    vdelta: int           # valuation of the minimal discriminant
    kodaira_n: int        # n for I_n / I_n*, else 0
    m_class: int          # 12 / gcd(vdelta, 12)
    defect: int           # order of tame inertia image (1 = unramified)
    minimal_shift: int    # r with A_min = A / pi^{4r}, B_min = B / pi^{6r}

    @property
    def is_multiplicative(self) -> bool:
        return self.label in ("split_mult", "nonsplit_mult")

    @property
    def is_additive(self) -> bool:
        return self.cond_exp == 2


def reduction_type(E: EllipticTate, v: Place) -> ReductionData:
    """Reduction label, conductor exponent and minimal-model data at v."""
    if E.field.p <= 3:
        raise UnsupportedCharacteristic("p > 3 required")
    A, B = _local_pair(E, v)
    vA = valuation(A, v)
    vB = valuation(B, v)
    # largest r with vA >= 4r and vB >= 6r (floor division handles poles)
    shift = min(vA // 4, vB // 6)
    vA -= 4 * shift
    vB -= 6 * shift
    w = v if not v.is_infinite else _infinity_place_of_model(E.field)
    delta = _local_delta(E, v)
    vD = valuation(delta, w if v.is_infinite else v) - 12 * shift
    if vD < 0:
        raise InternalInconsistency("negative minimal discriminant valuation")
    if vD == 0:
        return ReductionData("good", 0, 0, 0, 1, 1, shift)
    vj = 3 * vA - vD  # = v(j) since v(c4) = v(A) for p > 3
    if vA == 0:
        # multiplicative; split iff 3r is a square, r the double root
        split = _is_split_mult(E, v, shift)
        label = "split_mult" if split else "nonsplit_mult"
        return ReductionData(label, 1, vD, vD, 12 // gcd(vD, 12), 1, shift)
    if vj < 0:
        n = -vj
        return ReductionData("In*", 2, vD, n, 12 // gcd(vD, 12), 2, shift)
    table = {2: ("II", 6), 3: ("III", 4), 4: ("IV", 3), 6: ("I0*", 2),
             8: ("IV*", 3), 9: ("III*", 4), 10: ("II*", 6)}
    if vD not in table:
        raise InternalInconsistency(f"non-minimal potentially good model (v(Delta)={vD})")
    label, defect = table[vD]
    return ReductionData(label, 2, vD, 0, 12 // gcd(vD, 12), defect, shift)


def _local_pair(E: EllipticTate, v: Place) -> tuple[RatFunc, RatFunc]:
    """(A, B) rewritten in a coordinate where v is a finite place."""
    if not v.is_infinite:
        return E.A, E.B
    return _at_infinity(E.A), _at_infinity(E.B)


def _at_infinity(rf: RatFunc) -> RatFunc:
    """Rewrite f(t) as a rational function of s = 1/t."""
    fld = rf.field
    num_r = Poly(fld, list(reversed(rf.num.coeffs)))
    den_r = Poly(fld, list(reversed(rf.den.coeffs)))
    shift = rf.den.degree - rf.num.degree
    s = Poly.x(fld)
    if shift >= 0:
        return RatFunc(num_r * s ** shift, den_r)
    return RatFunc(num_r, den_r * s ** (-shift))


def _infinity_place_of_model(field: Fq) -> Place:
    return Place.linear(field, 0)


def _local_delta(E: EllipticTate, v: Place) -> RatFunc:
    delta = E.discriminant()
    if v.is_infinite:
        return _at_infinity(delta)
    return delta


def _shifted_minimal(E: EllipticTate, v: Place) -> tuple[Poly, Poly, Place]:
    """Residues (Abar, Bbar) of the minimal model at v, in k_v."""
    A, B = _local_pair(E, v)
    w = v if not v.is_infinite else _infinity_place_of_model(E.field)
    rd = reduction_type(E, v)
    pi = w.prime
    r = rd.minimal_shift
    # A_min = A / pi^{4r}, B_min = B / pi^{6r}; residues need v(A_min) >= 0
    Amin = RatFunc(A.num, A.den * pi ** (4 * r)) if r >= 0 else \
        RatFunc(A.num * pi ** (-4 * r), A.den)
    Bmin = RatFunc(B.num, B.den * pi ** (6 * r)) if r >= 0 else \
        RatFunc(B.num * pi ** (-6 * r), B.den)
    Abar = _integral_residue(Amin, w)
    Bbar = _integral_residue(Bmin, w)
    return Abar, Bbar, w


def _integral_residue(f: RatFunc, w: Place) -> Poly:
    if f.is_zero():
        return Poly(w.field, [])
    if valuation(f, w) > 0:
        return Poly(w.field, [])
    return residue_unit(f, w)


def _is_split_mult(E: EllipticTate, v: Place, shift: int) -> bool:
    """Tangent slopes of the node: split iff 3*r0 is a square in k_v,
    where r0 = -3 Bbar / (2 Abar) is the double root of the reduction."""
    Abar, Bbar, w = _shifted_minimal(E, v)
    fld = w.field
    rf = ResidueField.get(w)
    two = Poly.constant(fld, 2)
    three = Poly.constant(fld, 3)
    if Abar.is_zero():
        raise InternalInconsistency("multiplicative reduction with v(A) > 0")
    from .places import _inv_mod
    inv2A = _inv_mod((two * Abar) % w.prime, w.prime)
    r0 = (-(three * Bbar) * inv2A) % w.prime
    s = (three * r0) % w.prime
    if s.is_zero():
        raise InternalInconsistency("vanishing tangent-cone discriminant at a node")
    return rf.is_one(rf.pow(s, (w.q_v - 1) // 2))


# ----------------------------------------------------------------------
# Traces of Frobenius
# ----------------------------------------------------------------------

_av_cache: dict[tuple, int] = {}


def a_v(E: EllipticTate, v: Place, budget: int = 10 ** 8) -> int:
    """Trace of Frobenius at a place of good reduction.

    q_v + 1 - #E(k_v); exhaustive count for q_v <= 1e4, baby-step
    giant-step group-order search above.  The Hasse bound is asserted.
    """
    rd = reduction_type(E, v)
    if rd.label != "good":
        raise BadReduction(f"bad reduction ({rd.label}) at {v}")
    key = (id(E.A.field), E.A.num.coeffs, E.A.den.coeffs, E.B.num.coeffs,
           E.B.den.coeffs, None if v.prime is None else v.prime.coeffs)
    if key in _av_cache:
        return _av_cache[key]
    Abar, Bbar, w = _shifted_minimal(E, v)
    q_v = w.q_v
    fld = w.field
    if fld.p ** (fld.k * w.deg) > TABLE_LIMIT:
        raise BudgetExceeded("residue field exceeds table limit")
    tf = TableField.get(fld.p, fld.k * w.deg)
    a_code, b_code = _residue_codes(Abar, Bbar, w, tf)
    if q_v <= EXHAUSTIVE_COUNT_LIMIT:
        npoints = _count_affine(tf, a_code, b_code) + 1
    else:
        npoints = _bsgs_group_order(tf, a_code, b_code)
    a = q_v + 1 - npoints
    if a * a > 4 * q_v:
        raise InternalInconsistency(f"Hasse bound violated: a={a}, q_v={q_v}")
    _av_cache[key] = a
    return a


def _residue_codes(Abar: Poly, Bbar: Poly, w: Place, tf: TableField) -> tuple[int, int]:
    """Codes of the residues under t -> least root of pi_v in the table field."""
    if w.deg == 1:
        # residue field is the constants; Abar, Bbar are constants
        ac = tf.embed_code(Abar.coeffs[0]) if not Abar.is_zero() else 0
        bc = tf.embed_code(Bbar.coeffs[0]) if not Bbar.is_zero() else 0
        return ac, bc
    pic = tf.embed_poly_codes(w.prime)
    xs = np.arange(tf.q, dtype=np.int64)
    vals = tf.horner(pic, xs)
    roots = xs[vals == 0]
    theta = np.int64(int(roots.min()))
    ac = int(tf.horner(tf.embed_poly_codes(Abar), theta[None])[0]) if not Abar.is_zero() else 0
    bc = int(tf.horner(tf.embed_poly_codes(Bbar), theta[None])[0]) if not Bbar.is_zero() else 0
    return ac, bc


def _count_affine(tf: TableField, a_code: int, b_code: int) -> int:
    """#{(x, y): y^2 = x^3 + a x + b} by a vectorized character sum."""
    xs = np.arange(tf.q, dtype=np.int64)
    rhs = tf.mul(tf.mul(xs, xs), xs)
    if a_code:
        rhs = tf.add(rhs, tf.mul(xs, np.int64(a_code)))
    if b_code:
        rhs = tf.add(rhs, np.int64(b_code))
    logs = tf.log[rhs]
    nonzero = logs >= 0
    squares = nonzero & (logs % 2 == 0)
    return int(2 * np.count_nonzero(squares) + np.count_nonzero(~nonzero))


class _ECGroup:
    """Affine short-Weierstrass arithmetic in table-field codes."""

    def __init__(self, tf: TableField, a_code: int, b_code: int):
        self.tf = tf
        self.a = np.int64(a_code)
        self.b = np.int64(b_code)

    def is_on(self, P) -> bool:
        if P is None:
            return True
        x, y = P
        tf = self.tf
        lhs = tf.mul(y, y)
        rhs = tf.add(tf.add(tf.mul(tf.mul(x, x), x), tf.mul(self.a, x)), self.b)
        return int(lhs) == int(rhs)

    def neg(self, P):
        if P is None:
            return None
        x, y = P
        return (x, self.tf.neg(y))

    def add(self, P, Q):
        tf = self.tf
        if P is None:
            return Q
        if Q is None:
            return P
        x1, y1 = P
        x2, y2 = Q
        if int(x1) == int(x2):
            if int(tf.add(y1, y2)) == 0:
                return None
            # doubling
            num = tf.add(tf.mul(np.int64(3), tf.mul(x1, x1)), self.a)
            den = tf.mul(np.int64(2), y1)
        else:
            num = tf.add(y2, tf.neg(y1))
            den = tf.add(x2, tf.neg(x1))
        lam = tf.mul(num, tf.inv(den))
        x3 = tf.add(tf.mul(lam, lam), tf.neg(tf.add(x1, x2)))
        y3 = tf.add(tf.mul(lam, tf.add(x1, tf.neg(x3))), tf.neg(y1))
        return (x3, y3)

    def mul(self, k: int, P):
        if k < 0:
            return self.mul(-k, self.neg(P))
        R = None
        Q = P
        while k:
            if k & 1:
                R = self.add(R, Q)
            Q = self.add(Q, Q)
            k >>= 1
        return R

    def random_point(self, rng: random.Random):
        tf = self.tf
        while True:
            x = np.int64(rng.randrange(tf.q))
            rhs = tf.add(tf.add(tf.mul(tf.mul(x, x), x), tf.mul(self.a, x)), self.b)
            lr = int(tf.log[rhs])
            if lr < 0:
                return (x, np.int64(0))
            if lr % 2 == 0:
                y = tf.exp[lr // 2]
                return (x, np.int64(y))


def _point_order_multiple(G: _ECGroup, P, q: int) -> int:
    """Some positive m <= q+1+2*sqrt(q) with m*P = O (BSGS in the Hasse interval)."""
    import math
    w = int(2 * math.isqrt(q)) + 1
    M = q + 1
    B = int(math.isqrt(2 * w)) + 1
    # baby steps: j*P for j = 0..B-1
    baby = {}
    R = None
    for j in range(B):
        key = None if R is None else (int(R[0]), int(R[1]))
        baby.setdefault(key, j)
        R = G.add(R, P)
    # giant steps: (M + w0 + k*B) P  for k = 0.., covering [M-w, M+w]
    start = M - w
    Q = G.mul(start, P)
    step = G.mul(B, P)
    k = 0
    while start + k * B <= M + w + B:
        key = None if Q is None else (int(Q[0]), int(Q[1]))
        if key in baby:
            m = start + k * B - baby[key]
            if m > 0 and G.mul(m, P) is None:
                return m
        nkey = None if Q is None else (int(Q[0]), int(G.tf.neg(Q[1])))
        if nkey in baby:
            m = start + k * B + baby[nkey]
            if m > 0 and G.mul(m, P) is None:
                return m
        Q = G.add(Q, step)
        k += 1
    raise InternalInconsistency("BSGS failed to find a point-order multiple")


def _exact_point_order(G: _ECGroup, P, m: int) -> int:
    from .algebra import _prime_divisors
    order = m
    for r in _prime_divisors(m):
        while order % r == 0 and G.mul(order // r, P) is None:
            order //= r
    return order


def _bsgs_group_order(tf: TableField, a_code: int, b_code: int) -> int:
    """Group order via lcm of point orders, disambiguated in the Hasse interval."""
    import math
    q = tf.q
    G = _ECGroup(tf, a_code, b_code)
    rng = random.Random((q, a_code, b_code, 0xEC))
    w = int(2 * math.isqrt(q))
    lo, hi = q + 1 - w, q + 1 + w
    L = 1
    for trial in range(60):
        P = G.random_point(rng)
        m = _point_order_multiple(G, P, q)
        L = L * _exact_point_order(G, P, m) // gcd(L, _exact_point_order(G, P, m))
        first = (lo + L - 1) // L * L
        candidates = list(range(first, hi + 1, L))
        if len(candidates) == 1:
            return candidates[0]
    # twist fallback: N + N_twist = 2q + 2
    c = 1
    while True:
        lc = int(tf.log[c])
        if lc >= 0 and lc % 2 == 1:
            break
        c += 1
    a2 = int(tf.mul(np.int64(a_code), tf.pow_int(np.int64(c), 2)))
    b2 = int(tf.mul(np.int64(b_code), tf.pow_int(np.int64(c), 3)))
    Gt = _ECGroup(tf, a2, b2)
    Lt = 1
    for trial in range(60):
        P = Gt.random_point(rng)
        m = _point_order_multiple(Gt, P, q)
        Lt = Lt * _exact_point_order(Gt, P, m) // gcd(Lt, _exact_point_order(Gt, P, m))
        # N in Hasse interval, L | N, and Lt | (2q + 2 - N)
        cands = [N for N in range(((lo + L - 1) // L) * L, hi + 1, L)
                 if (2 * q + 2 - N) % Lt == 0]
        if len(cands) == 1:
            return cands[0]
    raise InternalInconsistency("group order ambiguous after twist disambiguation")


# ----------------------------------------------------------------------
# Inertia structure and conductor exponents
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class InertiaBlock:
    eigenvalue: Fraction  # in Q/Z, the tame-generator eigenvalue exponent
    size: int


def inertia_blocks(rep: RepDescriptor, v: Place) -> tuple[InertiaBlock, ...]:
    """Jordan blocks of the tame inertia action at v."""
    rep = canonicalize(rep)
    if isinstance(rep, Trivial):
        return (InertiaBlock(Fraction(0), 1),)
    if isinstance(rep, PowerResidueChar):
        ev = Fraction(rep.i * valuation(rep.g, v), rep.d) % 1
        return (InertiaBlock(ev, 1),)
    if isinstance(rep, EllipticTate):
        return _elliptic_inertia(rep, v)
    if isinstance(rep, TwistProduct):
        shift = Fraction(rep.char.i * valuation(rep.char.g, v), rep.char.d) % 1
        return tuple(InertiaBlock((b.eigenvalue + shift) % 1, b.size)
                     for b in inertia_blocks(rep.base, v))
    raise TypeError(f"not a descriptor: {rep!r}")


def _elliptic_inertia(E: EllipticTate, v: Place) -> tuple[InertiaBlock, ...]:
    rd = reduction_type(E, v)
    half = Fraction(1, 2)
    if rd.label == "good":
        return (InertiaBlock(Fraction(0), 1), InertiaBlock(Fraction(0), 1))
    if rd.is_multiplicative:
        return (InertiaBlock(Fraction(0), 2),)
    if rd.label == "In*":
        return (InertiaBlock(half, 2),)
    if rd.label == "I0*":
        return (InertiaBlock(half, 1), InertiaBlock(half, 1))
    e = rd.defect
    return (InertiaBlock(Fraction(1, e), 1), InertiaBlock(Fraction(e - 1, e), 1))


def tame_cond_exp(blocks: tuple[InertiaBlock, ...]) -> int:
    dim = sum(b.size for b in blocks)
    invariants = sum(1 for b in blocks if b.eigenvalue == 0)
    return dim - invariants


def cond_exp(rep: RepDescriptor, v: Place) -> int:
    """Conductor exponent at v (tame formula)."""
    return tame_cond_exp(inertia_blocks(rep, v))


def twisted_cond_exp_by_local_char(rep: RepDescriptor, v: Place,
                                   eigenvalue: Fraction) -> int:
    """cond_v(rep tensor chi_v) for a local character with the given
    tame-generator eigenvalue (exact root-of-unity exponent in Q/Z)."""
    blocks = inertia_blocks(rep, v)
    shifted = tuple(InertiaBlock((b.eigenvalue + eigenvalue) % 1, b.size)
                    for b in blocks)
    return tame_cond_exp(shifted)


def conductor_divisor(rep: RepDescriptor, field: Fq | None = None,
                      ) -> tuple[dict[Place, int], int]:
    """Global Artin conductor as a finite-support map, plus its degree."""
    rep = canonicalize(rep)
    if field is not None:
        rep = base_change(rep, field)
    support = _candidate_bad_places(rep)
    div = {}
    for v in support:
        e = cond_exp(rep, v)
        if e > 0:
            div[v] = e
    degree = sum(e * v.deg for v, e in div.items())
    return div, degree


def _candidate_bad_places(rep: RepDescriptor) -> list[Place]:
    rep = canonicalize(rep)
    if isinstance(rep, Trivial):
        return []
    fld = rep.field
    places: dict = {}

    def add_support(rf: RatFunc):
        for poly in (rf.num, rf.den):
            if poly.degree >= 1:
                for irr, _ in poly.factor():
                    w = Place(fld, irr, irr.degree)
                    places[w] = w
        w = Place.infinite(fld)
        places[w] = w

    if isinstance(rep, PowerResidueChar):
        add_support(rep.g)
    elif isinstance(rep, EllipticTate):
        add_support(rep.discriminant())
        add_support(rep.A)
        add_support(rep.B)
    elif isinstance(rep, TwistProduct):
        for w in _candidate_bad_places(rep.base):
            places[w] = w
        add_support(rep.char.g)
    return list(places.values())


def bad_places(rep: RepDescriptor) -> list[Place]:
    """Support of the conductor (the set |n|)."""
    div, _ = conductor_divisor(rep)
    return sorted(div.keys(), key=lambda w: (w.deg, () if w.is_infinite
                                             else tuple(c.code for c in w.prime.coeffs)))


# ----------------------------------------------------------------------
# Local Euler factors
# ----------------------------------------------------------------------

def local_factor(rep: RepDescriptor, v: Place, ring: RingCtx,
                 ) -> list[ScalarExt]:
    """det(1 - Fr_v S | invariants) as coefficients in S = T^{deg v}.

    Exact coefficients in the given ring; the constant term is always 1.
    """
    rep = canonicalize(rep)
    one = ring.one()
    if isinstance(rep, Trivial):
        return [one, -one]
    if isinstance(rep, PowerResidueChar):
        if _char_inertia_order(rep, v) > 1:
            return [one]
        chi = _char_frobenius_value(rep, v, ring)
        return [one, -chi]
    if isinstance(rep, EllipticTate):
        return _elliptic_local_factor(rep, v, ring)
    if isinstance(rep, TwistProduct):
        return _twist_local_factor(rep, v, ring)
    raise TypeError(f"not a descriptor: {rep!r}")


def _zeta_power(ring: RingCtx, j: int, d: int) -> ScalarExt:
    if ring.m % d != 0:
        raise DomainMismatch(f"ring m={ring.m} cannot hold zeta_{d}")
    return ring.zeta((j % d) * (ring.m // d))


def _char_inertia_order(ch: PowerResidueChar, v: Place) -> int:
    """Order of chi_g^i on the inertia at v."""
    return ch.d // gcd(ch.d, ch.i * valuation(ch.g, v))


def _char_frobenius_value(ch: PowerResidueChar, v: Place, ring: RingCtx) -> ScalarExt:
    """chi_g^i(Fr_v) at an unramified place, as an exact root of unity.

    chi_g^i at the d-Kummer level equals chi_{g^(i')} at the d_o-level,
    i' = i/gcd(d,i); the symbol is then taken at level d_o, which only
    needs mu_{d_o} in the residue field.
    """
    d_o = ch.order
    if d_o == 1:
        return ring.one()
    i_prime = (ch.i // gcd(ch.d, ch.i)) % d_o
    j = _unit_symbol_class(ch.g, v, d_o)
    return _zeta_power(ring, (j * i_prime) % d_o, d_o)


def _unit_symbol_class(g: RatFunc, v: Place, d: int) -> int:
    """Symbol class of the unit part of g at v; requires d | v(g)."""
    val = valuation(g, v)
    if val % d != 0:
        raise InternalInconsistency("unit symbol requested at a ramified place")
    if val == 0:
        return symbol_class(g, v, d)
    # strip the place: g * pi^{-val} (for infinity, g * t^{val})
    if v.is_infinite:
        fld = g.field
        t = Poly.x(fld)
        if val > 0:
            g2 = RatFunc(g.num * t ** val, g.den)
        else:
            g2 = RatFunc(g.num, g.den * t ** (-val))
    else:
        pi = v.prime
        if val > 0:
            g2 = RatFunc(g.num, g.den * pi ** val)
        else:
            g2 = RatFunc(g.num * pi ** (-val), g.den)
    return symbol_class(g2, v, d)


def _elliptic_local_factor(E: EllipticTate, v: Place, ring: RingCtx,
                           ) -> list[ScalarExt]:
    rd = reduction_type(E, v)
    one = ring.one()
    if rd.label == "good":
        a = a_v(E, v)
        return [one, ring.from_int(-a), ring.from_int(v.q_v)]
    if rd.label == "split_mult":
        return [one, -one]
    if rd.label == "nonsplit_mult":
        return [one, one]
    return [one]


def _twist_local_factor(rep: TwistProduct, v: Place, ring: RingCtx,
                        ) -> list[ScalarExt]:
    ch = rep.char
    base = rep.base
    order_at_v = _char_inertia_order(ch, v)
    if order_at_v == 1:
        # unramified character: scale S by chi(v)
        chi = _char_frobenius_value(ch, v, ring)
        basef = local_factor(base, v, ring)
        out = []
        power = ring.one()
        for c in basef:
            out.append(c * power)
            power = power * chi
        return out
    # ramified character
    if not isinstance(base, EllipticTate):
        raise Unsupported("ramified twist of a non-elliptic base")
    rd = reduction_type(base, v)
    if rd.label == "good":
        return [ring.one()]
    if order_at_v == 2:
        # quadratic twist: delegate to the honest twisted curve
        h = _power_ratfunc(ch.g, ch.i)
        return _elliptic_local_factor(base.quadratic_twist(h), v, ring)
    # higher-order ramified twist of a ramified base: supported only when
    # the inertia invariants vanish (conductor-driven cases)
    ev = Fraction(ch.i * valuation(ch.g, v), ch.d) % 1
    blocks = inertia_blocks(base, v)
    if any((b.eigenvalue + ev) % 1 == 0 for b in blocks):
        raise Unsupported(
            "ramified higher-order twist with surviving inertia invariants")
    return [ring.one()]


def _power_ratfunc(g: RatFunc, i: int) -> RatFunc:
    if i < 0:
        return RatFunc(g.den ** (-i), g.num ** (-i))
    return RatFunc(g.num ** i, g.den ** i)


# ----------------------------------------------------------------------
# Descriptor parsing (textual config form)
# ----------------------------------------------------------------------

def parse_poly(text: str, field: Fq, var: str | None = None) -> Poly:
    """Parse an integer-coefficient polynomial expression like 't^2+3*t+1'."""
    tokens = _tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def take():
        t = peek()
        pos[0] += 1
        return t

    varname = [var]

    def parse_expr() -> Poly:
        node = parse_term()
        while peek() in ("+", "-"):
            op = take()
            rhs = parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term() -> Poly:
        node = parse_power()
        while peek() == "*":
            take()
            node = node * parse_power()
        return node

    def parse_power() -> Poly:
        node = parse_atom()
        if peek() == "^":
            take()
            e = take()
            if not isinstance(e, int):
                raise ValueError("exponent must be an integer literal")
            node = node ** e
        return node

    def parse_atom() -> Poly:
        t = take()
        if t == "(":
            node = parse_expr()
            if take() != ")":
                raise ValueError("unbalanced parentheses")
            return node
        if t == "-":
            return -parse_atom()
        if t == "+":
            return parse_atom()
        if isinstance(t, int):
            return Poly.constant(field, t)
        if isinstance(t, str) and t.isalpha():
            if varname[0] is None:
                varname[0] = t
            if t != varname[0]:
                raise ValueError(f"unexpected symbol {t!r}")
            return Poly.x(field)
        raise ValueError(f"cannot parse token {t!r}")

    out = parse_expr()
    if pos[0] != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return out


def _tokenize(text: str):
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(int(text[i:j]))
            i = j
        elif c.isalpha():
            out.append(c)
            i += 1
        elif c in "+-*^()":
            out.append(c)
            i += 1
        elif c == "/":
            out.append("/")
            i += 1
        else:
            raise ValueError(f"bad character {c!r}")
    return out


def parse_ratfunc(text: str, field: Fq) -> RatFunc:
    if "/" in text:
        numtext, dentext = text.split("/", 1)
        return RatFunc(parse_poly(numtext.strip().strip("()"), field),
                       parse_poly(dentext.strip().strip("()"), field))
    return RatFunc(parse_poly(text, field))


def parse_rep(spec_map: dict[str, str], field: Fq) -> RepDescriptor:
    """Build a descriptor from a textual key-value form.

    elliptic: keys A, B.  char: keys g, d, i.  twist: elliptic keys plus
    char keys.  trivial: no extra keys.
    """
    kind = spec_map.get("rep", "trivial").strip()
    if kind == "trivial":
        return Trivial()
    if kind == "char":
        g = parse_ratfunc(spec_map["g"].strip('"'), field)
        return PowerResidueChar(g, int(spec_map.get("i", 1)), int(spec_map["d"]))
    if kind == "elliptic":
        A = parse_ratfunc(spec_map["A"].strip('"'), field)
        B = parse_ratfunc(spec_map["B"].strip('"'), field)
        return EllipticTate(A, B)
    if kind == "twist":
        A = parse_ratfunc(spec_map["A"].strip('"'), field)
        B = parse_ratfunc(spec_map["B"].strip('"'), field)
        g = parse_ratfunc(spec_map["g"].strip('"'), field)
        return TwistProduct(EllipticTate(A, B),
                            PowerResidueChar(g, int(spec_map.get("i", 1)),
                                             int(spec_map["d"])))
    raise ValueError(f"unknown rep kind {kind!r}")
