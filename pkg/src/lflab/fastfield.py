"""Table-backed finite fields for bulk work.

The exact layer in `algebra` is the source of truth; this module builds
discrete-log/exponential tables for the *same* fields (same modulus, same
least-primitive-root generator) so that point counts, place censuses and
character evaluations over fields up to a few million elements become
numpy array passes.

Elements are represented by their integer code (base-p digit encoding of
the coefficient vector, matching FqElem.code).  Multiplication goes
through log/exp tables; addition through digit arithmetic.  Everything
here is deterministic.
"""

from __future__ import annotations

import numpy as np

from .algebra import Fq, GF, embedding, gcd
from .errors import BudgetExceeded, DomainMismatch

TABLE_LIMIT = 1 << 22  # largest field size we are willing to tabulate


class TableField:
    """F_{p^k} with exp/log tables keyed to the canonical GF(p, k)."""

    _cache: dict[tuple[int, int], "TableField"] = {}

    def __init__(self, p: int, k: int):
        self.exact = GF(p, k)
        self.p = p
        self.k = k
        self.q = p ** k
        if self.q > TABLE_LIMIT:
            raise BudgetExceeded(f"field of size {self.q} exceeds table limit")
        self.gen = self.exact.multiplicative_generator()
        self._build_tables()

    @staticmethod
    def get(p: int, k: int) -> "TableField":
        key = (p, k)
        tf = TableField._cache.get(key)
        if tf is None:
            tf = TableField(p, k)
            TableField._cache[key] = tf
        return tf

    # -- table construction ------------------------------------------------
    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        n1 = q - 1
        # baby-step/giant-step table build: powers of g in digit space
        B = int(n1 ** 0.5) + 1
        baby = self._successive_powers(self.gen, B)            # (B, k) digits
        gB = self.gen ** B
        giant = self._successive_powers(gB, (n1 // B) + 2)     # (G, k)
        G = giant.shape[0]
        # all products baby[i] * giant[j] -> exponent i + B*j
        prod = _digit_mul_outer(baby, giant, self.exact)       # (B, G, k)
        codes = _digits_to_codes(prod.reshape(-1, k), p)       # B*G codes
        exps = (np.arange(B)[:, None] + B * np.arange(G)[None, :]).reshape(-1)
        keep = exps < n1
        exp = np.zeros(n1, dtype=np.int64)
        exp[exps[keep]] = codes[keep]
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(n1)
        self.exp = exp
        self.log = log
        # digit decompose/compose helpers
        self._pow_p = p ** np.arange(k, dtype=np.int64)

    def _successive_powers(self, g, count: int) -> np.ndarray:
        """Digit matrix of 1, g, g^2, ..., g^(count-1)."""
        k = self.k
        out = np.zeros((count, k), dtype=np.int64)
        cur = self.exact.one
        for i in range(count):
            out[i, :] = cur.coeffs
            cur = cur * g
        return out

    # -- scalar/array code operations --------------------------------------
    def codes_to_digits(self, a: np.ndarray) -> np.ndarray:
        return (a[..., None] // self._pow_p) % self.p

    def digits_to_codes(self, d: np.ndarray) -> np.ndarray:
        return (d * self._pow_p).sum(axis=-1)

    def add(self, a, b):
        d = self.codes_to_digits(np.asarray(a, dtype=np.int64)) + \
            self.codes_to_digits(np.asarray(b, dtype=np.int64))
        return self.digits_to_codes(d % self.p)

    def neg(self, a):
        d = (-self.codes_to_digits(np.asarray(a, dtype=np.int64))) % self.p
        return self.digits_to_codes(d)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = self.log[a], self.log[b]
        out = self.exp[(la + lb) % (self.q - 1)]
        zero = (la < 0) | (lb < 0)
        return np.where(zero, 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        la = self.log[a]
        if np.any(la < 0):
            raise ZeroDivisionError("inversion of zero code")
        return self.exp[(-la) % (self.q - 1)]

    def pow_int(self, a, e: int):
        """a^e elementwise for nonneg integer e (0^0 = 1)."""
        a = np.asarray(a, dtype=np.int64)
        la = self.log[a]
        out = self.exp[(la * (e % (self.q - 1))) % (self.q - 1)]
        if e == 0:
            return np.ones_like(a)
        return np.where(la < 0, 0, out)

    def horner(self, coeff_codes: list[int], xs: np.ndarray) -> np.ndarray:
        """Evaluate sum coeff[i] x^i (low degree first) at an array of codes."""
        acc = np.full(xs.shape, coeff_codes[-1], dtype=np.int64)
        for c in reversed(coeff_codes[:-1]):
            acc = self.mul(acc, xs)
            if c:
                acc = self.add(acc, np.int64(c))
        return acc

    # -- embeddings ----------------------------------------------------------
    def embed_code(self, elt) -> int:
        """Code of the image of an exact element of a subfield."""
        if elt.field is self.exact:
            return elt.code
        emb = embedding(elt.field, self.exact)
        return emb(elt).code

    def embed_poly_codes(self, poly) -> list[int]:
        """Coefficient codes of an exact Poly with coefficients in a subfield."""
        if poly.is_zero():
            return [0]
        return [self.embed_code(c) for c in poly.coeffs]

    def subfield_element(self, code: int, sub: Fq):
        """Exact subfield element whose image has the given code (or None)."""
        emb = embedding(sub, self.exact)
        table = getattr(emb, "_code_lookup", None)
        if table is None:
            table = {emb(e).code: e for e in sub.elements()}
            emb._code_lookup = table
        return table.get(int(code))


# ----------------------------------------------------------------------
# helpers for table construction
# ----------------------------------------------------------------------

def _digit_mul_outer(A: np.ndarray, B: np.ndarray, field: Fq) -> np.ndarray:
    """All pairwise products of digit-rows of A and B, reduced mod modulus."""
    p, k = field.p, field.k
    nA, nB = A.shape[0], B.shape[0]
    conv = np.zeros((nA, nB, 2 * k - 1), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            conv[:, :, i + j] += A[:, None, i] * B[None, :, j]
    conv %= p
    # reduce powers x^s (s >= k) using precomputed x^s mod modulus
    red = _reduction_rows(field)
    out = conv[:, :, :k].copy()
    for s in range(k, 2 * k - 1):
        out += conv[:, :, s, None] * red[s - k][None, None, :]
    return out % p


def _reduction_rows(field: Fq) -> np.ndarray:
    """Row r = digits of x^(k+r) mod modulus, r = 0..k-2."""
    p, k = field.p, field.k
    rows = np.zeros((max(k - 1, 1), k), dtype=np.int64)
    cur = [(-c) % p for c in field.modulus[:k]]  # x^k
    for r in range(k - 1):
        rows[r, :] = cur
        lead = cur[-1]
        cur = [0] + cur[:-1]
        if lead:
            cur = [(c - lead * m) % p for c, m in zip(cur, field.modulus[:k])]
    return rows


def _digits_to_codes(d: np.ndarray, p: int) -> np.ndarray:
    k = d.shape[-1]
    pows = p ** np.arange(k, dtype=np.int64)
    return (d * pows).sum(axis=-1)


# ----------------------------------------------------------------------
# Frobenius-orbit census over a base field
# ----------------------------------------------------------------------

class PlaceCensus:
    """Degree-m places of the affine line over F_Q, Q = p^kq.

    A degree-m place corresponds to a Frobenius orbit {theta^(Q^j)} of
    size m in F_{Q^m}; we keep one representative per orbit (the one of
    least discrete log).  The census carries the table field of F_{Q^m}
    so callers can evaluate polynomials and characters at all
    representatives in bulk.
    """

    _cache: dict[tuple[int, int, int], "PlaceCensus"] = {}

    def __init__(self, p: int, kq: int, m: int):
        self.p = p
        self.kq = kq
        self.m = m
        self.Q = p ** kq
        self.field = TableField.get(p, kq * m)
        q = self.field.q
        n1 = q - 1
        if m == 1:
            self.reps = np.arange(q, dtype=np.int64)
            return
        logs = np.arange(n1, dtype=np.int64)
        rot = logs.copy()
        is_min = np.ones(n1, dtype=bool)
        period = np.zeros(n1, dtype=np.int64)
        Qmod = self.Q % n1
        for j in range(1, m):
            rot = (rot * Qmod) % n1
            first = (rot == logs) & (period == 0)
            period[first] = j
            is_min &= logs <= rot
        period[period == 0] = m
        keep = (period == m) & is_min
        self.reps = self.field.exp[logs[keep]]

    @staticmethod
    def get(p: int, kq: int, m: int) -> "PlaceCensus":
        key = (p, kq, m)
        c = PlaceCensus._cache.get(key)
        if c is None:
            c = PlaceCensus(p, kq, m)
            PlaceCensus._cache[key] = c
        return c

    def count(self) -> int:
        return len(self.reps)


def place_count(Q: int, m: int) -> int:
    """Number of monic irreducibles of degree m over F_Q (necklace formula)."""
    total = 0
    for e in _divisors(m):
        total += _moebius(e) * Q ** (m // e)
    return total // m


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def _moebius(n: int) -> int:
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


# ----------------------------------------------------------------------
# character / class machinery over a census
# ----------------------------------------------------------------------

class MuIdentification:
    """Identification of mu_d(F_{Q^m}) with abstract d-th roots of unity.

    The reference generator is g_Q^((Q-1)/d) in the base F_Q (least
    primitive root), embedded into F_{Q^m} along the deterministic tower
    map; classes are exponents relative to that generator.  Requires
    d | Q - 1 so that the identification is canonical (mu_d lies in the
    constants).
    """

    def __init__(self, base: Fq, census_field: TableField, d: int):
        if (base.q - 1) % d != 0:
            raise DomainMismatch(f"mu_{d} not in the constants of {base}")
        self.d = d
        self.field = census_field
        q = census_field.q
        if d == 1:
            self.cofactor_inv = 0
            return
        zeta_base = base.mu_generator(d)
        zeta_code = census_field.embed_code(zeta_base)
        lz = int(census_field.log[zeta_code])
        step = (q - 1) // d
        assert lz % step == 0, "mu_d generator has wrong order"
        c = (lz // step) % d
        self.cofactor_inv = pow(c, -1, d)

    def classes(self, values: np.ndarray) -> np.ndarray:
        """Exponent j with value^((q-1)/d) = zeta^j; -1 where value = 0."""
        if self.d == 1:
            return np.where(np.asarray(values) == 0, -1, 0)
        lv = self.field.log[np.asarray(values, dtype=np.int64)]
        cls = (lv % self.d) * self.cofactor_inv % self.d
        return np.where(lv < 0, -1, cls)
