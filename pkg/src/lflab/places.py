"""Closed points of the projective line over F_{q^n}.

A finite place is a monic irreducible polynomial over the constants; the
infinite place is the degree valuation.  This module provides exact
enumeration, valuations of rational functions, d-th power-residue
symbols with a fixed identification of roots of unity, and the
split/inert/ramified classification of a place in the Kummer extension
obtained by adjoining a d-th root.

Identification convention.  When mu_d lies in the constants (d | q^n-1,
the case used by every L-function computation) the d-torsion of each
residue field is canonically the d-torsion of the constants, and we map
g^((q^n-1)/d) -> zeta_d for g the least primitive root of the constants.
Otherwise (standalone symbols at places whose residue field is larger)
we use the least primitive root of the residue field itself.  Orbit-level
products are independent of these choices; single symbol values at such
places are convention-dependent and tests treat them accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .algebra import Fq, FqElem, Poly, RingCtx, ScalarExt, gcd, lcm
from .errors import (DomainMismatch, NotIntegral, SymbolUndefined,
                     UndefinedValuation)
from .fastfield import PlaceCensus, TABLE_LIMIT, place_count


@dataclass(frozen=True)
class Place:
    """A closed point of P^1 over the constants `field`."""

    field: Fq
    prime: Optional[Poly]  # monic irreducible, or None for infinity
    deg: int

    @staticmethod
    def finite(prime: Poly) -> "Place":
        prime = prime.monic()
        if not prime.is_irreducible():
            raise ValueError(f"{prime} is not irreducible")
        return Place(prime.field, prime, prime.degree)

    @staticmethod
    def infinite(field: Fq) -> "Place":
        return Place(field, None, 1)

    @staticmethod
    def linear(field: Fq, root) -> "Place":
        return Place(field, Poly(field, [-field(root), field.one]), 1)

    @property
    def is_infinite(self) -> bool:
        return self.prime is None

    @property
    def q_v(self) -> int:
        return self.field.q ** self.deg

    def __repr__(self):
        if self.is_infinite:
            return f"Place(oo/{self.field})"
        return f"Place({self.prime}/{self.field})"

    def __hash__(self):
        return hash((id(self.field), None if self.prime is None else self.prime.coeffs))

    def __eq__(self, other):
        if not isinstance(other, Place):
            return NotImplemented
        return self.field is other.field and (
            (self.prime is None and other.prime is None)
            or (self.prime is not None and other.prime is not None
                and self.prime.coeffs == other.prime.coeffs))


class RatFunc:
    """Rational function num/den over a fixed constants field, reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.constant(num.field, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.field is not den.field:
            raise DomainMismatch("numerator and denominator over different fields")
        g = num.gcd(den)
        if g.degree > 0:
            num, den = num // g, den // g
        # normalize: monic denominator
        if not den.is_zero() and not den.is_monic():
            c = den.leading().inverse()
            num, den = num * c, den * c
        self.num = num
        self.den = den

    @property
    def field(self) -> Fq:
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.num, self.den * other.den)

    def __repr__(self):
        if self.den.degree == 0:
            return f"RatFunc({self.num})"
        return f"RatFunc(({self.num})/({self.den}))"

    @staticmethod
    def of(poly_or_pair) -> "RatFunc":
        if isinstance(poly_or_pair, RatFunc):
            return poly_or_pair
        if isinstance(poly_or_pair, Poly):
            return RatFunc(poly_or_pair)
        num, den = poly_or_pair
        return RatFunc(num, den)


def enumerate_places(field: Fq, max_deg: int, include_infinite: bool = False,
                     ) -> Iterable[Place]:
    """All places of P^1/F_{q^n} of degree <= max_deg, each exactly once.

    Finite places are yielded in (degree, coefficient-code) order;
    infinity, if requested, comes first.
    """
    if max_deg < 1:
        raise ValueError("max_deg must be >= 1")
    if include_infinite:
        yield Place.infinite(field)
    for m in range(1, max_deg + 1):
        yield from _places_of_degree(field, m)


def _places_of_degree(field: Fq, m: int) -> Iterable[Place]:
    if m == 1:
        for e in field.elements():
            yield Place(field, Poly(field, [-e, field.one]), 1)
        return
    if field.q ** m <= TABLE_LIMIT:
        yield from _places_via_census(field, m)
        return
    for code in range(field.q ** m):
        coeffs = []
        c = code
        for _ in range(m):
            coeffs.append(field.from_code(c % field.q))
            c //= field.q
        f = Poly(field, coeffs + [field.one])
        if f.is_irreducible():
            yield Place(field, f, m)


def _places_via_census(field: Fq, m: int) -> Iterable[Place]:
    """Minimal polynomials of Frobenius-orbit representatives."""
    census = PlaceCensus.get(field.p, field.k, m)
    tf = census.field
    out = []
    for code in census.reps:
        orbit = []
        c = int(code)
        for _ in range(m):
            orbit.append(c)
            c = int(tf.pow_int(np.int64(c), field.q))
        # expand prod (x - theta_j), coefficients as big-field codes
        coeffs = [1]
        for theta in orbit:
            nt = int(tf.neg(np.int64(theta)))
            new = [0] * (len(coeffs) + 1)
            for i, ci in enumerate(coeffs):
                new[i + 1] = int(tf.add(np.int64(new[i + 1]), np.int64(ci)))
                prod = int(tf.mul(np.int64(ci), np.int64(nt)))
                new[i] = int(tf.add(np.int64(new[i]), np.int64(prod)))
            coeffs = new
        down = [tf.subfield_element(c, field) for c in coeffs]
        assert all(e is not None for e in down), "minpoly not over the base field"
        out.append(Place(field, Poly(field, down), m))
    out.sort(key=lambda v: tuple(c.code for c in v.prime.coeffs))
    yield from out


def valuation(f, v: Place) -> int:
    """v-adic valuation of a nonzero rational function."""
    f = RatFunc.of(f)
    if f.is_zero():
        raise UndefinedValuation("valuation of the zero function")
    if v.field is not f.field:
        raise DomainMismatch("place and function over different constants")
    if v.is_infinite:
        return f.den.degree - f.num.degree
    return _poly_val(f.num, v.prime) - _poly_val(f.den, v.prime)


def _poly_val(g: Poly, prime: Poly) -> int:
    if g.is_zero():
        raise UndefinedValuation("valuation of zero polynomial")
    n = 0
    while True:
        q, r = divmod(g, prime)
        if not r.is_zero():
            return n
        g = q
        n += 1


def residue_unit(f, v: Place) -> Poly:
    """Residue of the unit part f * pi^(-v(f)) in k_v.

    For a finite place the result is a polynomial of degree < deg v
    representing the class in F_{q^n}[t]/(pi_v); at infinity it is the
    (constant) ratio of leading coefficients.
    """
    f = RatFunc.of(f)
    if f.is_zero():
        raise UndefinedValuation("residue of zero")
    if v.is_infinite:
        c = f.num.leading() * f.den.leading().inverse()
        return Poly.constant(f.field, c)
    pi = v.prime
    a, b = _strip(f.num, pi), _strip(f.den, pi)
    num_r = a % pi
    den_r = b % pi
    inv = _inv_mod(den_r, pi)
    return (num_r * inv) % pi


def _strip(g: Poly, pi: Poly) -> Poly:
    while True:
        q, r = divmod(g, pi)
        if not r.is_zero():
            return g
        g = q


def _inv_mod(a: Poly, mod: Poly) -> Poly:
    """Inverse of a modulo mod (coprime)."""
    f = a.field
    r0, r1 = mod, a % mod
    s0, s1 = Poly(f, []), Poly.constant(f, 1)
    while not r1.is_zero():
        q, r2 = divmod(r0, r1)
        r0, r1 = r1, r2
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise ZeroDivisionError("element not invertible modulo the place")
    return (s0 * r0.leading().inverse()) % mod


class ResidueField:
    """Arithmetic in k_v = F_{q^n}[t]/(pi_v) for a finite place."""

    _cache: dict[tuple[int, tuple], "ResidueField"] = {}

    def __init__(self, v: Place):
        self.place = v
        self.q_v = v.q_v

    @staticmethod
    def get(v: Place) -> "ResidueField":
        key = (id(v.field), None if v.prime is None else v.prime.coeffs)
        rf = ResidueField._cache.get(key)
        if rf is None:
            rf = ResidueField(v)
            ResidueField._cache[key] = rf
        return rf

    def pow(self, r: Poly, e: int) -> Poly:
        if self.place.is_infinite:
            return Poly.constant(r.field, r(0) ** e) if r.degree <= 0 else r ** e
        return r.powmod(e, self.place.prime)

    def mul(self, a: Poly, b: Poly) -> Poly:
        if self.place.is_infinite:
            return a * b
        return (a * b) % self.place.prime

    def one(self) -> Poly:
        return Poly.constant(self.place.field, 1)

    def is_one(self, r: Poly) -> bool:
        return r.degree == 0 and r.coeffs[0] == self.place.field.one

    def constants_image(self, c: FqElem) -> Poly:
        return Poly.constant(self.place.field, c)

    def least_primitive_root(self) -> Poly:
        if getattr(self, "_prim", None) is not None:
            return self._prim
        from .algebra import _prime_divisors
        n1 = self.q_v - 1
        primes = _prime_divisors(n1)
        v = self.place
        if v.is_infinite or v.deg == 1:
            g = v.field.multiplicative_generator()
            self._prim = Poly.constant(v.field, g)
            return self._prim
        # iterate residue polynomials in code order
        q = v.field.q
        for code in range(1, self.q_v):
            coeffs = []
            c = code
            for _ in range(v.deg):
                coeffs.append(v.field.from_code(c % q))
                c //= q
            r = Poly(v.field, coeffs)
            if all(not self.is_one(self.pow(r, n1 // p)) for p in primes):
                self._prim = r
                return r
        raise AssertionError("no primitive root (unreachable)")


def symbol_class(f, v: Place, d: int) -> int:
    """Exponent j in {0..d-1} with symbol = zeta_d^j, or -1 for symbol 0.

    Raises SymbolUndefined when d does not divide q_v - 1 and NotIntegral
    when f has a pole at v.
    """
    f = RatFunc.of(f)
    if d < 1:
        raise ValueError("d must be positive")
    if (v.q_v - 1) % d != 0:
        raise SymbolUndefined(f"d={d} does not divide q_v-1={v.q_v - 1}")
    val = valuation(f, v)
    if val < 0:
        raise NotIntegral(f"pole of order {-val} at {v}")
    if val > 0:
        return -1
    if d == 1:
        return 0
    rf = ResidueField.get(v)
    r = residue_unit(f, v)
    s = rf.pow(r, (v.q_v - 1) // d)
    zeta = _mu_reference(v, d)
    cur = rf.one()
    for j in range(d):
        if cur == s:
            return j
        cur = rf.mul(cur, zeta)
    raise AssertionError("symbol not a d-th root of unity (unreachable)")


def _mu_reference(v: Place, d: int) -> Poly:
    """Reference generator of mu_d(k_v); constants-based when possible."""
    rf = ResidueField.get(v)
    base = v.field
    if (base.q - 1) % d == 0:
        zeta_c = base.mu_generator(d)
        return rf.constants_image(zeta_c)
    g = rf.least_primitive_root()
    return rf.pow(g, (v.q_v - 1) // d)


def power_residue_symbol(f, v: Place, d: int, ring: RingCtx | None = None) -> ScalarExt:
    """The d-th power-residue symbol of f at v as an exact ring element.

    Returns the zeta_d power matching residue(f,v)^((q_v-1)/d), or 0 when
    v(f) > 0.  Multiplicative in f.
    """
    if ring is None:
        ring = RingCtx(lcm(d, 2), v.field.q)
    j = symbol_class(f, v, d)
    if j < 0:
        return ring.zero()
    if ring.m % d != 0:
        raise DomainMismatch(f"ring of order m={ring.m} cannot hold zeta_{d}")
    return ring.zeta(j * (ring.m // d))


@dataclass(frozen=True)
class SplittingClass:
    """Behaviour of a place in the degree-d Kummer extension."""

    label: str                      # split | inert_max | ramified | unramified_other
    residue_degree: Optional[int] = None
    ramification_index: Optional[int] = None

    @property
    def totally_ramified(self) -> bool:
        return self.label == "ramified" and self.ramification_index is not None

    def __repr__(self):
        if self.label == "ramified":
            return f"SplittingClass(ramified, e={self.ramification_index})"
        if self.label == "split":
            return "SplittingClass(split)"
        if self.label == "inert_max":
            return f"SplittingClass(inert_max, f={self.residue_degree})"
        return f"SplittingClass(unramified_other, f={self.residue_degree})"


def splitting_class(f, v: Place, d: int) -> SplittingClass:
    """Classify v in F_{q^n}(f^(1/d)) per the local-condition taxonomy.

    Totally ramified iff gcd(v(f), d) = 1 (the only 'ramified' label we
    emit; partial ramification is tagged with its index e < d).
    Unramified iff d | v(f); then the residue degree is the order of the
    unit-part class in k_v^x/(k_v^x)^d: 1 = split, gcd(d, q_v-1) =
    inert_max, anything else = unramified_other.
    """
    f = RatFunc.of(f)
    val = valuation(f, v)
    if val % d != 0:
        e = d // gcd(abs(val), d)
        return SplittingClass("ramified", ramification_index=e)
    # unramified: order of the unit class in k_v^x/(k_v^x)^d, a cyclic
    # group of order d_max; the class has order m iff r^(m (q_v-1)/d_max) = 1
    d_max = gcd(d, v.q_v - 1)
    rf = ResidueField.get(v)
    r = residue_unit(f, v)
    order = d_max
    from .algebra import _prime_divisors
    for p in _prime_divisors(d_max):
        while order % p == 0 and rf.is_one(rf.pow(r, (order // p) * ((v.q_v - 1) // d_max))):
            order //= p
    if order == 1:
        return SplittingClass("split", residue_degree=1)
    if order == d_max:
        return SplittingClass("inert_max", residue_degree=d_max)
    return SplittingClass("unramified_other", residue_degree=order)


import numpy as np  # noqa: E402  (used by the census-based enumerator)
