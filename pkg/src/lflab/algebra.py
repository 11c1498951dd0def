"""Exact arithmetic foundations.

Three layers live here:

* prime-power finite fields F_{p^k}, realized as F_p[x] modulo a fixed,
  deterministically chosen irreducible (the lexicographically least monic
  irreducible of degree k, coefficients ordered constant-term first);
* dense univariate polynomials over such fields, with full factorization
  (squarefree part, distinct degree, seeded Cantor-Zassenhaus);
* the coefficient ring Z[zeta_m][u] with u^2 = q, used for L-polynomial
  coefficients, root numbers and forced-zero roots.  Elements are pairs of
  integer vectors modulo the m-th cyclotomic polynomial, so all ring
  operations are exact; a complex embedding (zeta_m -> exp(2*pi*i/m),
  u -> +sqrt(q)) is provided for numeric cross-checks only.

Field towers are built over the prime field directly.  Embeddings
F_{q^a} -> F_{q^{ab}} are computed once by root-finding the smaller
modulus in the bigger field (least root, so the choice is reproducible)
and cached.

Everything here is immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import cmath
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainMismatch, EmptyFactorization


# ----------------------------------------------------------------------
# F_p[x] bootstrap arithmetic (plain int lists, low degree first)
# ----------------------------------------------------------------------

def _ptrim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    return _prem(res, mod, p)


def _prem(a: list[int], mod: list[int], p: int) -> list[int]:
    a = a[:]
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        a = _ptrim(a)
        if len(a) - 1 < dm:
            break
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(mod):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _ptrim(a)
    return _ptrim(a)


def _ppowmod(a: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _prem(a, mod, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _ptrim(a[:]), _ptrim(b[:])
    while b:
        a = _prem(a, b, p)
        a, b = b, a
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _is_irreducible_modp(f: list[int], p: int) -> bool:
    """Rabin test for a monic polynomial over F_p."""
    n = len(f) - 1
    if n <= 0:
        return False
    x = [0, 1]
    # x^(p^n) == x mod f
    h = x[:]
    for _ in range(n):
        h = _ppowmod(h, p, f, p)
    diff = _ptrim([(hi - xi) % p for hi, xi in
                   zip(h + [0] * 2, x + [0] * max(0, len(h) - 2))])
    if diff:
        return False
    # for each prime r | n: gcd(x^(p^(n/r)) - x, f) == 1
    for r in _prime_divisors(n):
        h = x[:]
        for _ in range(n // r):
            h = _ppowmod(h, p, f, p)
        diff = [(c - (x[i] if i < 2 else 0)) % p for i, c in enumerate(h + [0, 0])]
        if len(_pgcd(diff, f, p)) > 1:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % d == 0:
            return n == d
    # deterministic Miller-Rabin for 64-bit range
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
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


@lru_cache(maxsize=None)
def _default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Least monic irreducible of degree k over F_p.

    Candidates are ordered by their coefficient vector read as a base-p
    integer, constant term least significant.  This fixes the field tower
    reproducibly without external tables.
    """
    if k == 1:
        return (0, 1)
    for code in range(p ** k):
        coeffs = []
        c = code
        for _ in range(k):
            coeffs.append(c % p)
            c //= p
        f = coeffs + [1]
        if _is_irreducible_modp(f, p):
            return tuple(f)
    raise AssertionError("no irreducible found (unreachable)")


# ----------------------------------------------------------------------
# Finite fields
# ----------------------------------------------------------------------

class Fq:
    """The finite field F_{p^k} = F_p[x]/(modulus).

    Instances are interned by (p, k): GF(p, k) always returns the same
    object, so field identity comparisons are cheap and meaningful.
    """

    _cache: dict[tuple[int, int], "Fq"] = {}

    def __init__(self, p: int, k: int, _token=None):
        if _token is not Fq._cache:
            raise TypeError("use GF(p, k) to construct fields")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = _default_modulus(p, k)
        self.zero = FqElem(self, (0,) * k)
        self.one = FqElem(self, (1,) + (0,) * (k - 1))
        self._gen_cache: FqElem | None = None

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __call__(self, value) -> "FqElem":
        if isinstance(value, FqElem):
            if value.field is self:
                return value
            if value.field.p == self.p and value.field.k == 1:
                return self.from_int(value.coeffs[0])
            raise DomainMismatch(f"cannot coerce {value.field} into {self}")
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, (tuple, list)):
            c = list(value) + [0] * (self.k - len(value))
            return FqElem(self, tuple(ci % self.p for ci in c[: self.k]))
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def from_int(self, n: int) -> "FqElem":
        return FqElem(self, (n % self.p,) + (0,) * (self.k - 1))

    def gen(self) -> "FqElem":
        """Image of x, a root of the defining modulus (k > 1)."""
        if self.k == 1:
            return self.one
        return FqElem(self, (0, 1) + (0,) * (self.k - 2))

    def elements(self) -> Iterable["FqElem"]:
        for code in range(self.q):
            coeffs, c = [], code
            for _ in range(self.k):
                coeffs.append(c % self.p)
                c //= self.p
            yield FqElem(self, tuple(coeffs))

    def from_code(self, code: int) -> "FqElem":
        coeffs = []
        for _ in range(self.k):
            coeffs.append(code % self.p)
            code //= self.p
        return FqElem(self, tuple(coeffs))

    def random_element(self, rng: random.Random) -> "FqElem":
        return self.from_code(rng.randrange(self.q))

    def multiplicative_generator(self) -> "FqElem":
        """Least primitive root of F_q^x (by element code)."""
        if self._gen_cache is not None:
            return self._gen_cache
        order = self.q - 1
        primes = _prime_divisors(order)
        for code in range(1, self.q):
            g = self.from_code(code)
            if all(g ** (order // r) != self.one for r in primes):
                self._gen_cache = g
                return g
        raise AssertionError("no primitive root (unreachable)")

    def mu_generator(self, d: int) -> "FqElem":
        """Canonical generator of the d-torsion of F_q^x.

        Defined as g^((q-1)/d) for g the least primitive root, so that
        mu_e-generators for e | d are compatible powers of each other.
        """
        if (self.q - 1) % d != 0:
            raise DomainMismatch(f"mu_{d} not contained in {self}")
        return self.multiplicative_generator() ** ((self.q - 1) // d)


def GF(p: int, k: int = 1) -> Fq:
    key = (p, k)
    f = Fq._cache.get(key)
    if f is None:
        f = Fq(p, k, _token=Fq._cache)
        Fq._cache[key] = f
    return f


class FqElem:
    """Element of F_{p^k}, a length-k residue vector mod the field modulus."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: Fq, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    # -- helpers ------------------------------------------------------
    def _check(self, other: "FqElem") -> "FqElem":
        if isinstance(other, int):
            return self.field.from_int(other)
        if not isinstance(other, FqElem):
            return NotImplemented
        if other.field is not self.field:
            raise DomainMismatch(f"{self.field} vs {other.field}")
        return other

    @property
    def code(self) -> int:
        """Base-p integer encoding of the coefficient vector."""
        n = 0
        for c in reversed(self.coeffs):
            n = n * self.field.p + c
        return n

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.field.p
        return FqElem(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FqElem(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.field.p
        return FqElem(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        f = self.field
        if f.k == 1:
            return FqElem(f, ((self.coeffs[0] * other.coeffs[0]) % f.p,))
        prod = _pmulmod(list(self.coeffs), list(other.coeffs), list(f.modulus), f.p)
        prod += [0] * (f.k - len(prod))
        return FqElem(f, tuple(prod))

    __rmul__ = __mul__

    def inverse(self) -> "FqElem":
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero field element")
        f = self.field
        if f.k == 1:
            return FqElem(f, (pow(self.coeffs[0], f.p - 2, f.p),))
        # extended Euclid in F_p[x]
        p = f.p
        a, b = list(f.modulus), _ptrim(list(self.coeffs))
        s0, s1 = [], [1]
        while b:
            q, r = _pdivmod(a, b, p)
            a, b = b, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        inv_lead = pow(a[-1], p - 2, p)
        inv = [(c * inv_lead) % p for c in s0]
        inv = _prem(inv, list(f.modulus), p)
        inv += [0] * (f.k - len(inv))
        return FqElem(f, tuple(inv))

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frobenius(self, times: int = 1) -> "FqElem":
        """x -> x^(p^times)."""
        return self ** (self.field.p ** times)

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise ZeroDivisionError("order of zero")
        n = self.field.q - 1
        order = n
        for r in _prime_divisors(n):
            while order % r == 0 and self ** (order // r) == self.field.one:
                order //= r
        return order

    def is_dth_power(self, d: int) -> bool:
        """Whether the element is a d-th power in F_q^x (zero counts as yes)."""
        if self.is_zero():
            return True
        g = gcd(d, self.field.q - 1)
        return self ** ((self.field.q - 1) // g) == self.field.one

    # -- comparisons ----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        if not isinstance(other, FqElem):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.field), self.coeffs))
        return self._hash

    def __repr__(self):
        if self.field.k == 1:
            return str(self.coeffs[0])
        return f"{self.field}({list(self.coeffs)})"


def _pdivmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = _ptrim(a[:])
    b = _ptrim(b[:])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _ptrim(a)
    return _ptrim(q), a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    return _ptrim(res)


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _ptrim([(x - y) % p for x, y in zip(a, b)])


def gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# ----------------------------------------------------------------------
# Field embeddings (towers)
# ----------------------------------------------------------------------

_embed_cache: dict[tuple[int, int, int], "FieldEmbedding"] = {}


class FieldEmbedding:
    """The embedding F_{p^a} -> F_{p^b} (a | b) sending the small
    generator to the least root of the small modulus in the big field."""

    def __init__(self, small: Fq, big: Fq):
        if small.p != big.p or big.k % small.k != 0:
            raise DomainMismatch(f"no embedding {small} -> {big}")
        self.small = small
        self.big = big
        if small.k == 1:
            self.root = big.one
        else:
            modulus_big = Poly(big, [big.from_int(c) for c in small.modulus])
            rts = sorted(modulus_big.roots(), key=lambda r: r.code)
            self.root = rts[0]
        # powers of the root for linear evaluation
        self._powers = [big.one]
        for _ in range(small.k - 1):
            self._powers.append(self._powers[-1] * self.root)

    def __call__(self, elt: FqElem) -> FqElem:
        if elt.field is not self.small:
            raise DomainMismatch("element not in the source field")
        acc = self.big.zero
        for c, rp in zip(elt.coeffs, self._powers):
            if c:
                acc = acc + self.big.from_int(c) * rp
        return acc


def embedding(small: Fq, big: Fq) -> FieldEmbedding:
    key = (small.p, small.k, big.k)
    emb = _embed_cache.get(key)
    if emb is None:
        emb = FieldEmbedding(small, big)
        _embed_cache[key] = emb
    return emb


# ----------------------------------------------------------------------
# Polynomials over F_q
# ----------------------------------------------------------------------

class Poly:
    """Dense univariate polynomial over a fixed F_q, low degree first.

    The zero polynomial has degree -1 (the distinguished flag).
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Fq, coeffs: Sequence[FqElem] | Sequence[int]):
        self.field = field
        cs = [field(c) if not isinstance(c, FqElem) else c for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors ---------------------------------------------------
    @staticmethod
    def x(field: Fq) -> "Poly":
        return Poly(field, [field.zero, field.one])

    @staticmethod
    def constant(field: Fq, c) -> "Poly":
        return Poly(field, [field(c)])

    @staticmethod
    def from_roots(field: Fq, roots) -> "Poly":
        f = Poly.constant(field, 1)
        for r in roots:
            f = f * Poly(field, [-field(r), field.one])
        return f

    def map_coeffs(self, emb: FieldEmbedding) -> "Poly":
        return Poly(emb.big, [emb(c) for c in self.coeffs])

    # -- structure ------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def leading(self) -> FqElem:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = self.leading().inverse()
        return Poly(self.field, [c * inv for c in self.coeffs])

    def __getitem__(self, i: int) -> FqElem:
        return self.coeffs[i] if 0 <= i <= self.degree else self.field.zero

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if isinstance(other, (int, FqElem)):
            return Poly.constant(self.field, other)
        if isinstance(other, Poly):
            if other.field is not self.field:
                raise DomainMismatch(f"{self.field} vs {other.field}")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field, [self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly(self.field, [])
        f = self.field
        res = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a.is_zero():
                for j, b in enumerate(other.coeffs):
                    res[i + j] = res[i + j] + a * b
        return Poly(f, res)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        result = Poly.constant(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        db, dq = other.degree, self.degree - other.degree
        if dq < 0:
            return Poly(f, []), self
        quo = [f.zero] * (dq + 1)
        inv = other.leading().inverse()
        for shift in range(dq, -1, -1):
            c = rem[shift + db] * inv
            if not c.is_zero():
                quo[shift] = c
                for i, bi in enumerate(other.coeffs):
                    rem[shift + i] = rem[shift + i] - c * bi
        return Poly(f, quo), Poly(f, rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, (int, FqElem)):
            other = Poly.constant(self.field, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __call__(self, x) -> FqElem:
        """Evaluate; accepts elements of the base field or an extension."""
        fld = x.field if isinstance(x, FqElem) else self.field
        if isinstance(x, FqElem) and x.field is not self.field:
            emb = embedding(self.field, x.field)
            acc = fld.zero
            for c in reversed(self.coeffs):
                acc = acc * x + emb(c)
            return acc
        x = self.field(x)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        f = self.field
        return Poly(f, [f.from_int(i) * c for i, c in enumerate(self.coeffs)][1:])

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def powmod(self, e: int, mod: "Poly") -> "Poly":
        result = Poly.constant(self.field, 1)
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result

    # -- factorization ----------------------------------------------------
    def is_irreducible(self) -> bool:
        n = self.degree
        if n <= 0:
            return False
        if n == 1:
            return True
        f = self.monic()
        q = self.field.q
        x = Poly.x(self.field)
        h = x.powmod(q ** n, f)
        if h != x % f:
            return False
        for r in _prime_divisors(n):
            h = x.powmod(q ** (n // r), f)
            if f.gcd(h - x).degree > 0:
                return False
        return True

    def pth_root(self) -> "Poly":
        """For f with f' = 0, the g with g(x)^p = f(x^p) ... = f."""
        p, fld = self.field.p, self.field
        cs = [self.coeffs[i] ** (fld.q // p) for i in range(0, len(self.coeffs), p)]
        return Poly(fld, cs)

    def squarefree_part_and_mults(self) -> list[tuple["Poly", int]]:
        """Yun-style squarefree decomposition, valid in characteristic p."""
        return [(g, m) for g, m in _squarefree_decompose(self.monic())]

    def factor(self, seed: int = 0) -> list[tuple["Poly", int]]:
        """Full factorization into monic irreducibles with multiplicities.

        Deterministic for a fixed seed (Cantor-Zassenhaus randomness is
        drawn from a private seeded generator).  The leading unit is
        dropped; multiply factors and the leading coefficient to recover
        the input.
        """
        if self.is_zero():
            raise EmptyFactorization("cannot factor the zero polynomial")
        if self.degree == 0:
            return []
        rng = random.Random((seed, self.field.q, self.coeffs and self.coeffs[0].code))
        out: dict[Poly, int] = {}
        for sqfree, mult in _squarefree_decompose(self.monic()):
            for d, prod in _distinct_degree(sqfree):
                for irr in _equal_degree_split(prod, d, rng):
                    out[irr] = out.get(irr, 0) + mult
        items = sorted(out.items(), key=lambda t: (t[0].degree, [c.code for c in t[0].coeffs]))
        return items

    def roots(self) -> list[FqElem]:
        """Roots in the coefficient field, without multiplicity."""
        if self.is_zero():
            raise EmptyFactorization("roots of the zero polynomial")
        q = self.field.q
        x = Poly.x(self.field)
        f = self.monic()
        # gcd with x^q - x isolates the split part
        xq = x.powmod(q, f)
        split = f.gcd(xq - x)
        out = []
        for g, _ in split.factor():
            if g.degree == 1:
                out.append(-g.coeffs[0])
        return out

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            cs = repr(c)
            if i == 0:
                terms.append(cs)
            elif i == 1:
                terms.append(f"{cs}*x" if cs != "1" else "x")
            else:
                terms.append(f"{cs}*x^{i}" if cs != "1" else f"x^{i}")
        return " + ".join(reversed(terms))


def _squarefree_decompose(f: Poly) -> list[tuple[Poly, int]]:
    """Monic f -> [(g_i, m_i)] with f = prod g_i^{m_i}, g_i squarefree coprime."""
    out: list[tuple[Poly, int]] = []
    p = f.field.p

    def rec(f: Poly, mult: int):
        if f.degree <= 0:
            return
        d = f.derivative()
        if d.is_zero():
            rec(f.pth_root(), mult * p)
            return
        w = f.gcd(d)
        sqfree = f // w  # product of factors to the first power
        i = 1
        while sqfree.degree > 0:
            y = sqfree.gcd(w)
            piece = sqfree // y
            if piece.degree > 0:
                out.append((piece, mult * i))
            sqfree = y
            w = w // y
            i += 1
        if w.degree > 0:
            rec(w.pth_root(), mult * p)

    rec(f, 1)
    return out


def _distinct_degree(f: Poly) -> list[tuple[int, Poly]]:
    """Squarefree monic f -> [(d, product of irreducibles of degree d)]."""
    out = []
    q = f.field.q
    x = Poly.x(f.field)
    h = x
    rest = f
    d = 0
    while rest.degree > 2 * (d + 1) - 1 and rest.degree > 0:
        d += 1
        h = h.powmod(q, rest)
        g = rest.gcd(h - x)
        if g.degree > 0:
            out.append((d, g))
            rest = rest // g
            h = h % rest
    if rest.degree > 0:
        out.append((rest.degree, rest))
    return out


def _equal_degree_split(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus: factor a product of degree-d irreducibles."""
    n = f.degree
    if n == d:
        return [f.monic()]
    fld = f.field
    q = fld.q
    while True:
        a = Poly(fld, [fld.random_element(rng) for _ in range(n)])
        if a.degree <= 0:
            continue
        g = f.gcd(a)
        if 0 < g.degree < n:
            break
        if q % 2 == 1:
            b = a.powmod((q ** d - 1) // 2, f) - 1
        else:
            # char 2: trace map over F_{2^(k*d)}
            b = a
            t = a
            for _ in range(fld.k * d - 1):
                t = t.powmod(2, f)
                b = (b + t) % f
        g = f.gcd(b)
        if 0 < g.degree < n:
            break
    return _equal_degree_split(g, d, rng) + _equal_degree_split(f // g, d, rng)


# ----------------------------------------------------------------------
# Spec operation surfaces
# ----------------------------------------------------------------------

def ff_arith(a: FqElem, b: FqElem | int | None, op: str) -> FqElem:
    """Named field operation dispatcher: add, mul, inv, pow."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown op {op!r}")


def poly_factor(f: Poly, seed: int = 0) -> list[tuple[Poly, int]]:
    """Factor into monic irreducibles; raises on the zero polynomial."""
    return f.factor(seed=seed)


def is_dth_power_free(f: Poly, d: int) -> bool:
    """True iff adjoining a d-th root of f gives a degree-d extension.

    For every prime e | d the polynomial must not be (a constant e-th
    power times) an e-th power; when 4 | d the classical extra clause
    excludes f = -4 g^4.
    """
    if f.is_zero():
        raise EmptyFactorization("zero polynomial")
    if d < 1:
        raise ValueError("d must be >= 1")
    if f.degree == 0:
        return not any(f.leading().is_dth_power(e) for e in _prime_divisors(d)) if d > 1 else True
    factors = f.factor()
    lead = f.leading()
    for e in _prime_divisors(d):
        if all(m % e == 0 for _, m in factors) and lead.is_dth_power(e):
            return False
    if d % 4 == 0:
        # f = -4 g^4 makes x^4 - f reducible even when f is 4th-power free
        if all(m % 4 == 0 for _, m in factors):
            c = lead * f.field.from_int(-4).inverse()
            if c.is_dth_power(4):
                return False
    return True


# ----------------------------------------------------------------------
# Cyclotomic integers extended by a square root of q
# ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients of the m-th cyclotomic polynomial."""
    if m == 1:
        return (-1, 1)
    # x^m - 1 divided by all proper cyclotomic factors
    num = [0] * (m + 1)
    num[0], num[m] = -1, 1
    for d in range(1, m):
        if m % d == 0:
            phi_d = cyclotomic_poly(d)
            num = _int_poly_exact_div(num, list(phi_d))
    return tuple(num)


def _int_poly_exact_div(a: list[int], b: list[int]) -> list[int]:
    a = a[:]
    out = [0] * (len(a) - len(b) + 1)
    for shift in range(len(a) - len(b), -1, -1):
        c = a[shift + len(b) - 1] // b[-1]
        out[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
    assert all(x == 0 for x in a), "non-exact integer division"
    return out


def euler_phi(m: int) -> int:
    out = m
    for r in _prime_divisors(m):
        out = out // r * (r - 1)
    return out


@lru_cache(maxsize=None)
def _zeta_power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """x^j mod Phi_m for j = 0..m-1 as integer vectors of length phi(m)."""
    phi = euler_phi(m)
    phim = list(cyclotomic_poly(m))
    table = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(m):
        table.append(tuple(cur))
        # multiply by x
        nxt = [0] + cur[:]
        if len(nxt) > phi:
            lead = nxt[phi]
            nxt = [c - lead * phim[i] for i, c in enumerate(nxt[:phi])]
        else:
            nxt += [0] * (phi - len(nxt))
        cur = nxt
    return tuple(table)


class RingCtx:
    """Context (m, q) for the coefficient ring Z[zeta_m][u]/(u^2 - q)."""

    _cache: dict[tuple[int, int], "RingCtx"] = {}

    def __new__(cls, m: int, q: int):
        key = (m, q)
        obj = cls._cache.get(key)
        if obj is None:
            obj = super().__new__(cls)
            obj.m = m
            obj.q = q
            obj.phi = euler_phi(m)
            cls._cache[key] = obj
        return obj

    def zero(self) -> "ScalarExt":
        z = (0,) * self.phi
        return ScalarExt(self, z, z)

    def one(self) -> "ScalarExt":
        return self.from_int(1)

    def from_int(self, n: int) -> "ScalarExt":
        a = (n,) + (0,) * (self.phi - 1)
        return ScalarExt(self, a, (0,) * self.phi)

    def zeta(self, j: int = 1) -> "ScalarExt":
        """zeta_m^j."""
        vec = _zeta_power_table(self.m)[j % self.m]
        return ScalarExt(self, vec, (0,) * self.phi)

    def u(self) -> "ScalarExt":
        """The formal square root of q (positive under the embedding)."""
        a = (0,) * self.phi
        b = (1,) + (0,) * (self.phi - 1)
        return ScalarExt(self, a, b)

    def u_power(self, j: int) -> "ScalarExt":
        """u^j, i.e. q^(j/2) exactly."""
        qpow = self.from_int(self.q ** (j // 2))
        return qpow * self.u() if j % 2 else qpow

    def root_of_unity_times_q_half(self, j: int, halfpow: int) -> "ScalarExt":
        """zeta_m^j * q^(halfpow/2): the exact shape of all target values."""
        return self.zeta(j) * self.u_power(halfpow)

    def lift_into(self, other: "RingCtx"):
        """Coefficient-ring inclusion zeta_m -> zeta_M^(M/m); q must agree."""
        if other.q != self.q or other.m % self.m != 0:
            raise DomainMismatch(f"no lift RingCtx({self.m},{self.q}) -> RingCtx({other.m},{other.q})")
        step = other.m // self.m

        def lift(x: "ScalarExt") -> "ScalarExt":
            acc = other.zero()
            # reconstruct from zeta-powers: x = sum a_i zeta_m^i (+ u part)
            for i in range(self.phi):
                if x.a[i] or x.b[i]:
                    z = other.zeta(step * i)
                    term_a = other.from_int(x.a[i]) * z
                    term_b = other.from_int(x.b[i]) * z * other.u()
                    acc = acc + term_a + term_b
            return acc

        return lift

    def __repr__(self):
        return f"RingCtx(m={self.m}, q={self.q})"


class ScalarExt:
    """Element a + b*u of Z[zeta_m][u], u^2 = q.

    a and b are length-phi(m) integer vectors in the power basis of
    Z[zeta_m] = Z[x]/(Phi_m).  All operations are exact; `embed` maps to
    complex numbers for numeric cross-checks.
    """

    __slots__ = ("ctx", "a", "b", "_hash")

    def __init__(self, ctx: RingCtx, a: tuple[int, ...], b: tuple[int, ...]):
        self.ctx = ctx
        self.a = tuple(a)
        self.b = tuple(b)
        self._hash = None

    # -- helpers --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, int):
            return self.ctx.from_int(other)
        if not isinstance(other, ScalarExt):
            return NotImplemented
        if other.ctx is not self.ctx:
            raise DomainMismatch(f"{self.ctx} vs {other.ctx}")
        return other

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.a) and all(c == 0 for c in self.b)

    def is_rational_int(self) -> bool:
        return all(c == 0 for c in self.a[1:]) and all(c == 0 for c in self.b)

    def as_int(self) -> int:
        if not self.is_rational_int():
            raise ValueError(f"{self} is not a rational integer")
        return self.a[0]

    # -- ring ops ---------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ScalarExt(self.ctx,
                         tuple(x + y for x, y in zip(self.a, other.a)),
                         tuple(x + y for x, y in zip(self.b, other.b)))

    __radd__ = __add__

    def __neg__(self):
        return ScalarExt(self.ctx, tuple(-x for x in self.a), tuple(-x for x in self.b))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        q = self.ctx.q
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        # (a1 + b1 u)(a2 + b2 u) = (a1 a2 + q b1 b2) + (a1 b2 + b1 a2) u
        aa = _cyc_mul(a1, a2, self.ctx.m)
        bb = _cyc_mul(b1, b2, self.ctx.m)
        ab = _cyc_mul(a1, b2, self.ctx.m)
        ba = _cyc_mul(b1, a2, self.ctx.m)
        new_a = tuple(x + q * y for x, y in zip(aa, bb))
        new_b = tuple(x + y for x, y in zip(ab, ba))
        return ScalarExt(self.ctx, new_a, new_b)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "ScalarExt":
        if e < 0:
            raise ValueError("negative powers are not ring elements")
        result = self.ctx.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> "ScalarExt":
        """Complex conjugation: zeta -> zeta^(-1), u -> u."""
        return ScalarExt(self.ctx, _cyc_conj(self.a, self.ctx.m), _cyc_conj(self.b, self.ctx.m))

    def embed(self) -> complex:
        """Complex value under zeta_m -> exp(2 pi i/m), u -> +sqrt(q)."""
        m = self.ctx.m
        z = cmath.exp(2j * cmath.pi / m)
        za = sum(c * z ** i for i, c in enumerate(self.a))
        zb = sum(c * z ** i for i, c in enumerate(self.b))
        return za + zb * (self.ctx.q ** 0.5)

    # -- comparisons --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.from_int(other)
        if not isinstance(other, ScalarExt):
            return NotImplemented
        return self.ctx is other.ctx and self.a == other.a and self.b == other.b

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.ctx), self.a, self.b))
        return self._hash

    def __repr__(self):
        return f"ScalarExt(m={self.ctx.m}, q={self.ctx.q}, a={list(self.a)}, b={list(self.b)})"


def _cyc_mul(a: tuple[int, ...], b: tuple[int, ...], m: int) -> tuple[int, ...]:
    phi = len(a)
    if all(c == 0 for c in a) or all(c == 0 for c in b):
        return (0,) * phi
    res = [0] * (2 * phi - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    res[i + j] += ai * bj
    phim = cyclotomic_poly(m)
    # reduce mod Phi_m (monic)
    for k in range(len(res) - 1, phi - 1, -1):
        c = res[k]
        if c:
            res[k] = 0
            for i in range(phi):
                res[k - phi + i] -= c * phim[i]
    return tuple(res[:phi])


def _cyc_conj(a: tuple[int, ...], m: int) -> tuple[int, ...]:
    table = _zeta_power_table(m)
    phi = len(a)
    out = [0] * phi
    for i, ai in enumerate(a):
        if ai:
            vec = table[(m - i) % m]
            for k in range(phi):
                out[k] += ai * vec[k]
    return tuple(out)


def scalar_ops(x: ScalarExt, y: ScalarExt | None, op: str):
    """Named ring operation dispatcher: add, mul, conj, embed."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "conj":
        return x.conj()
    if op == "embed":
        c = x.embed()
        return (c.real, c.imag)
    raise ValueError(f"unknown op {op!r}")


@dataclass(frozen=True)
class FieldSpec:
    """Descriptor of a finite field in the tower: p, exponent k, q = p^k."""
    p: int
    k: int

    @property
    def q(self) -> int:
        return self.p ** self.k

    @property
    def modulus(self) -> tuple[int, ...]:
        return _default_modulus(self.p, self.k)

    def build(self) -> Fq:
        return GF(self.p, self.k)
