"""Brute-force oracle for superelliptic covers y^d = f(x).

Point counts go over every x in P^1(F_{q^nm}); the number of points of
the smooth projective model above x depends only on gcd(d, v_x(f)) and
on whether the unit part of f at x is an appropriate power in the
residue field.  The zeta numerator is then recovered exactly from the
counts N_1..N_{2g} by exponentiating the log series with rational
arithmetic.

This module is deliberately independent of the Euler-product machinery
in `lfunc`: the two sides are compared against each other in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import Fq, Poly, gcd
from .errors import BudgetExceeded, InternalInconsistency
from .fastfield import TABLE_LIMIT, TableField
from .places import Place, RatFunc, residue_unit, valuation

COUNT_BUDGET = 10 ** 7


@dataclass(frozen=True)
class CoverCurve:
    """Smooth projective model of y^d = f(x) over the constants of f.

    Requires gcd(d, p) = 1 and geometric irreducibility (the multiplicity
    pattern of f must not be divisible by any prime factor of d).  The
    genus comes from the ramification count: 2g - 2 = -2d +
    sum over branch places of deg(v) (d - gcd(d, v(f))).
    """

    f: RatFunc
    d: int
    genus: int

    @staticmethod
    def make(f, d: int) -> "CoverCurve":
        f = RatFunc.of(f)
        field = f.field
        if d < 1:
            raise ValueError("d must be positive")
        if gcd(d, field.p) != 1:
            raise ValueError("wild cover: p divides d")
        support = _support_places(f)
        mults = [valuation(f, v) for v in support]
        g_all = 0
        for mval in mults:
            g_all = gcd(g_all, abs(mval))
        if d > 1 and gcd(g_all, d) != 1 and support:
            raise ValueError("cover is geometrically disconnected: "
                             "multiplicity pattern divisible by a factor of d")
        two_g_minus_2 = -2 * d
        for v, mval in zip(support, mults):
            two_g_minus_2 += v.deg * (d - gcd(d, mval))
        if two_g_minus_2 % 2 != 0:
            raise InternalInconsistency("odd ramification total")
        genus = (two_g_minus_2 + 2) // 2
        if genus < 0:
            raise InternalInconsistency("negative genus")
        return CoverCurve(f, d, genus)

    @property
    def field(self) -> Fq:
        return self.f.field


def _support_places(f: RatFunc) -> list[Place]:
    """Places where f has a zero or pole, including infinity when v != 0."""
    out = []
    seen = set()
    for poly in (f.num, f.den):
        if poly.degree >= 1:
            for irr, _ in poly.factor():
                if irr.coeffs not in seen:
                    seen.add(irr.coeffs)
                    out.append(Place(poly.field, irr, irr.degree))
    if f.den.degree != f.num.degree:
        out.append(Place.infinite(f.field))
    return out


def count_points(C: CoverCurve, m: int, budget: int = COUNT_BUDGET) -> int:
    """Points of the smooth model over F_{q^nm}.

    Above a place w with e0 = gcd(d, v_w(f)) and mu = gcd(e0, q_K - 1)
    there are mu rational points if the unit part of f at w is a mu-th
    power in the residue field, none otherwise; for generic x this is the
    usual d-th-power test on f(x).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    field = C.field
    qK = field.q ** m
    if qK > budget:
        raise BudgetExceeded(f"count over field of size {qK} exceeds budget {budget}")
    if qK > TABLE_LIMIT:
        raise BudgetExceeded(f"count over field of size {qK} exceeds table limit")
    tf = TableField.get(field.p, field.k * m)
    d = C.d
    mu = gcd(d, qK - 1)

    support = _support_places(C.f)
    finite_support_codes = set()
    total = 0
    for w in support:
        if w.deg > m or m % w.deg != 0:
            # place contributes no F_{q^nm}-points unless its degree divides m
            if not w.is_infinite:
                continue
        total += _points_above(C, w, m, tf, finite_support_codes)
    if not any(w.is_infinite for w in support):
        # infinity is an ordinary point: v = 0, unit part = leading ratio
        total += _points_above(C, Place.infinite(field), m, tf, finite_support_codes)

    # generic x: all of A^1(F_{q^nm}) minus the support points
    xs = np.arange(qK, dtype=np.int64)
    num_c = tf.horner(tf.embed_poly_codes(C.f.num), xs)
    if C.f.den.degree >= 1 or C.f.den.coeffs[0] != field.one:
        den_c = tf.horner(tf.embed_poly_codes(C.f.den), xs)
        logs = tf.log[num_c] - tf.log[den_c]
    else:
        logs = tf.log[num_c].copy()
    good = np.ones(qK, dtype=bool)
    if finite_support_codes:
        good[np.fromiter(finite_support_codes, dtype=np.int64)] = False
    lg = logs[good]
    nz = tf.log[num_c[good]] >= 0  # f(x) == 0 only on support, but be safe
    if mu == 1:
        total += int(np.count_nonzero(nz))
    else:
        total += mu * int(np.count_nonzero(nz & (lg % mu == 0)))
    return total


def _points_above(C: CoverCurve, w: Place, m: int, tf: TableField,
                  finite_support_codes: set) -> int:
    """Rational points of the smooth model above a support place."""
    field = C.field
    qK = field.q ** m
    if not w.is_infinite:
        if m % w.deg != 0:
            # still need to exclude nothing: w has no F_{q^nm}-points
            return 0
        # mark the conjugate x-coordinates as non-generic
        roots = _place_root_codes(w, tf)
        finite_support_codes.update(roots)
    val = valuation(C.f, w)
    e0 = gcd(C.d, abs(val)) if val != 0 else C.d
    mu = gcd(e0, qK - 1)
    u = residue_unit(C.f, w)  # polynomial of degree < deg w
    q_w = w.q_v
    exp = ((qK - 1) // mu) % (q_w - 1) if q_w > 2 else ((qK - 1) // mu) % max(q_w - 1, 1)
    if w.is_infinite:
        ok = (u.coeffs[0] ** exp) == field.one if exp else True
        pts_per_x = mu if ok else 0
        return pts_per_x
    from .places import ResidueField
    rf = ResidueField.get(w)
    ok = rf.is_one(rf.pow(u, exp)) if exp else True
    pts_per_x = mu if ok else 0
    return w.deg * pts_per_x


def _place_root_codes(w: Place, tf: TableField) -> list[int]:
    """Codes in the table field of the roots of the place's polynomial."""
    coeffs = tf.embed_poly_codes(w.prime)
    xs = np.arange(tf.q, dtype=np.int64)
    vals = tf.horner(coeffs, xs)
    return [int(c) for c in xs[vals == 0]]


@dataclass(frozen=True)
class ZetaNumerator:
    """Integer numerator P(T) of Z(C,T), with P(0)=1 and deg P = 2g."""

    coeffs: tuple[int, ...]
    genus: int
    qn: int  # size of the constants field

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def zeta_numerator(C: CoverCurve, budget: int = COUNT_BUDGET,
                   extra_checks: bool = True) -> ZetaNumerator:
    """Exact zeta numerator from the counts N_1..N_{2g}.

    P(T) = exp(sum N_m T^m / m) (1-T)(1-qT), verified to be an integer
    polynomial of degree 2g with the Weil symmetry a_{2g-i} = q^{g-i} a_i.
    When the budget allows, two further counts are recomputed from the
    inverse-root power sums as an overdetermined consistency check.
    """
    g = C.genus
    q = C.field.q
    counts = [count_points(C, m, budget=budget) for m in range(1, 2 * g + 1)]
    # exp of the log-series, term by term: e_k = (1/k) sum N_j e_{k-j}
    e = [Fraction(1)]
    for k in range(1, 2 * g + 1):
        s = Fraction(0)
        for j in range(1, k + 1):
            s += Fraction(counts[j - 1]) * e[k - j]
        e.append(s / k)
    # multiply by (1 - T)(1 - qT) = 1 - (q+1)T + qT^2
    poly = [Fraction(0)] * (2 * g + 1)
    for k in range(2 * g + 1):
        val = e[k]
        if k >= 1:
            val -= (q + 1) * e[k - 1]
        if k >= 2:
            val += q * e[k - 2]
        poly[k] = val
    ints = []
    for c in poly:
        if c.denominator != 1:
            raise InternalInconsistency(f"non-integer zeta coefficient {c}")
        ints.append(int(c))
    if ints[0] != 1:
        raise InternalInconsistency("zeta numerator constant term is not 1")
    if g > 0 and ints[-1] == 0:
        raise InternalInconsistency("zeta numerator degree too small")
    for i in range(2 * g + 1):
        if ints[2 * g - i] != q ** (g - i) * ints[i]:
            raise InternalInconsistency("zeta numerator fails Weil symmetry")
    if extra_checks:
        _overdetermined_check(ints, counts, C, budget)
    return ZetaNumerator(tuple(ints), g, q)


def _overdetermined_check(coeffs: list[int], counts: list[int],
                          C: CoverCurve, budget: int):
    """Recompute N_m for two extra m from the Newton power sums."""
    g, q = C.genus, C.field.q
    # power sums p_m of inverse roots from the coefficients, Newton's identity
    neg_e = coeffs  # P(T) = sum a_i T^i = prod (1 - beta T): a_i = (-1)^i e_i
    esym = [(-1) ** i * neg_e[i] for i in range(len(neg_e))]
    maxm = 2 * g + 2
    p = [0] * (maxm + 1)
    for mm in range(1, maxm + 1):
        acc = 0
        for i in range(1, min(mm, 2 * g) + 1):
            acc += (-1) ** (i - 1) * esym[i] * (p[mm - i] if mm - i >= 1 else 0)
        if mm <= 2 * g:
            acc += (-1) ** (mm - 1) * mm * esym[mm]
        p[mm] = acc
    for mm in (2 * g + 1, 2 * g + 2):
        if C.field.q ** mm > min(budget, TABLE_LIMIT):
            return
        expected = q ** mm + 1 - p[mm]
        actual = count_points(C, mm, budget=budget)
        if actual != expected:
            raise InternalInconsistency(
                f"count N_{mm} = {actual} disagrees with zeta prediction {expected}")
