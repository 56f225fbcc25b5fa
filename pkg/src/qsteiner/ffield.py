"""Exponent (discrete-log) arithmetic in GF(q^n) for prime q.

Nonzero field elements are stored as exponents ``e`` of a fixed primitive
element alpha, so ``e`` stands for ``alpha**e`` with ``0 <= e < q**n - 1``.
The additive identity is the sentinel :data:`ZERO`, never an exponent.

Vectors of GF(q)^n are encoded as integers ("codes") by reading the
polynomial coordinates as base-q digits, constant term first::

    code = c_0 + c_1*q + ... + c_{n-1}*q^(n-1)
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

import numpy as np

ZERO = -1
DEFAULT_TABLE_CAP = 1 << 26


class FieldError(ValueError):
    pass


class NotIrreducible(FieldError):
    pass


class NotPrimitive(FieldError):
    pass


class UnsupportedSize(FieldError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def prime_factors(m: int) -> list[int]:
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


# --- polynomials over GF(q), coefficient lists with the constant term first


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: list[int], f: list[int], q: int) -> list[int]:
    a = _trim([c % q for c in a])
    inv_lead = pow(f[-1], q - 2, q)
    while len(a) >= len(f):
        c = a[-1] * inv_lead % q
        shift = len(a) - len(f)
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % q
        _trim(a)
    return a


def _polymulmod(a: list[int], b: list[int], f: list[int], q: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _polymod(out, f, q)


def _polypowmod(base: list[int], e: int, f: list[int], q: int) -> list[int]:
    result = [1]
    base = _polymod(base, f, q)
    while e:
        if e & 1:
            result = _polymulmod(result, base, f, q)
        base = _polymulmod(base, base, f, q)
        e >>= 1
    return result


def _polygcd(a: list[int], b: list[int], q: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _polymod(a, b, q)
    return a


def _polysub(a: list[int], b: list[int], q: int) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _trim([c % q for c in out])


@dataclass(frozen=True)
class PrimePolynomial:
    """Monic polynomial of degree ``n`` over GF(q); ``coeffs[i]`` multiplies x^i."""

    q: int
    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.q):
            raise FieldError(f"q={self.q} is not prime")
        coeffs = tuple(c % self.q for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) != self.n + 1 or coeffs[-1] != 1:
            raise FieldError(f"expected a monic polynomial of degree {self.n}")

    @classmethod
    def from_exponents(cls, q: int, exps, coeff: int = 1) -> "PrimePolynomial":
        exps = [int(e) for e in exps]
        n = max(exps)
        coeffs = [0] * (n + 1)
        for e in exps:
            coeffs[e] = (coeffs[e] + coeff) % q
        coeffs[n] = 1
        return cls(q, n, tuple(coeffs))

    @classmethod
    def parse(cls, text: str, q: int, n: int | None = None) -> "PrimePolynomial":
        """Parse ``x^13+x^12+x^10+x^9+1``, an exponent list ``13,12,10,9,0``
        or a coefficient list (constant term first) ``1,0,...,1``."""
        text = text.strip().replace(" ", "")
        if "x" in text:
            coeffs: dict[int, int] = {}
            for sign, term in re.findall(r"([+-]?)([^+-]+)", text):
                m = re.fullmatch(r"(\d*)\*?(x(?:\^(\d+))?)?", term)
                if not m:
                    raise FieldError(f"cannot parse term {term!r}")
                c = int(m.group(1)) if m.group(1) else 1
                e = (int(m.group(3)) if m.group(3) else 1) if m.group(2) else 0
                c = -c if sign == "-" else c
                coeffs[e] = coeffs.get(e, 0) + c
            deg = max(coeffs)
            return cls(q, deg, tuple(coeffs.get(i, 0) for i in range(deg + 1)))
        vals = [int(v) for v in text.split(",") if v]
        looks_like_coeffs = (
            n is not None
            and len(vals) == n + 1
            and vals[-1] == 1
            and all(0 <= v < q for v in vals)
            and max(vals) < n
        )
        if looks_like_coeffs:
            return cls(q, n, tuple(vals))
        poly = cls.from_exponents(q, vals)
        if n is not None and poly.n != n:
            raise FieldError(f"polynomial has degree {poly.n}, expected {n}")
        return poly

    def exponents(self) -> list[int]:
        return [i for i in range(self.n, -1, -1) if self.coeffs[i]]

    def __str__(self) -> str:
        terms = []
        for i in range(self.n, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if c != 1:
                mono = str(c) if i == 0 else f"{c}*{mono}"
            terms.append(mono)
        return "+".join(terms)

    def is_irreducible(self) -> bool:
        f, q = list(self.coeffs), self.q
        if f[0] == 0:
            return self.n == 1
        x = [0, 1]
        xp = x
        for _ in range(1, self.n // 2 + 1):
            xp = _polypowmod(xp, q, f, q)
            if len(_polygcd(f, _polysub(xp, x, q), q)) > 1:
                return False
        return True

    def is_primitive(self) -> bool:
        if not self.is_irreducible():
            return False
        f, q = list(self.coeffs), self.q
        M = q**self.n - 1
        return all(_polypowmod([0, 1], M // p, f, q) != [1] for p in prime_factors(M))


def find_primitive_poly(q: int, n: int) -> PrimePolynomial:
    """Smallest primitive polynomial of degree n, ordering by coefficient code."""
    for code in range(q**n):
        coeffs, c = [], code
        for _ in range(n):
            coeffs.append(c % q)
            c //= q
        if coeffs[0] == 0:
            continue
        poly = PrimePolynomial(q, n, tuple(coeffs) + (1,))
        if poly.is_primitive():
            return poly
    raise NotPrimitive(f"no primitive polynomial of degree {n} over GF({q})")


def table_cap() -> int:
    return int(float(os.environ.get("QSF_TABLE_CAP", DEFAULT_TABLE_CAP)))


@dataclass(frozen=True, eq=False)
class FieldTable:
    """Immutable log/antilog/Zech tables for GF(q^n)."""

    poly: PrimePolynomial
    antilog: np.ndarray = field(repr=False)  # exponent -> code
    log: np.ndarray = field(repr=False)  # code -> exponent, ZERO at code 0
    zech: np.ndarray = field(repr=False)  # e -> log(1 + alpha^e)

    @property
    def q(self) -> int:
        return self.poly.q

    @property
    def n(self) -> int:
        return self.poly.n

    @property
    def M(self) -> int:
        return len(self.antilog)

    @property
    def size(self) -> int:
        return self.M + 1

    # scalar operations

    def add(self, a: int, b: int) -> int:
        if a == ZERO:
            return b
        if b == ZERO:
            return a
        z = int(self.zech[(b - a) % self.M])
        if z == ZERO:
            return ZERO
        return (a + z) % self.M

    def add_many(self, a, b) -> np.ndarray:
        """Broadcasting version of :meth:`add` on exponent arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        z = self.zech[(b - a) % self.M]
        out = np.where(z == ZERO, ZERO, (a + z) % self.M)
        out = np.where(a == ZERO, b, out)
        return np.where(b == ZERO, a, out)

    def neg(self, a: int) -> int:
        if a == ZERO or self.q == 2:
            return a
        return (a + self.M // 2) % self.M

    def mul(self, a: int, b: int) -> int:
        if a == ZERO or b == ZERO:
            return ZERO
        return (a + b) % self.M

    def frobenius(self, a: int, i: int = 1) -> int:
        if a == ZERO:
            return ZERO
        return a * pow(self.q, i, self.M) % self.M

    def scalar_exponents(self) -> list[int]:
        """Exponents of the nonzero elements of the prime subfield GF(q)."""
        step = self.M // (self.q - 1)
        return [i * step for i in range(self.q - 1)]

    # vector (code) operations, all numpy-broadcasting

    def digits(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        powers = self.q ** np.arange(self.n, dtype=np.int64)
        return (codes[..., None] // powers) % self.q

    def from_digits(self, digits) -> np.ndarray:
        powers = self.q ** np.arange(self.n, dtype=np.int64)
        return (np.asarray(digits, dtype=np.int64) % self.q) @ powers

    def add_codes(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.q == 2:
            return a ^ b
        return self.from_digits(self.digits(a) + self.digits(b))

    def to_codes(self, exps) -> np.ndarray:
        exps = np.asarray(exps, dtype=np.int64)
        return np.where(exps == ZERO, 0, self.antilog[np.where(exps == ZERO, 0, exps)])

    def to_exps(self, codes) -> np.ndarray:
        return self.log[np.asarray(codes, dtype=np.int64)]


def build_field(q: int, n: int, poly: PrimePolynomial | str | None = None,
                cap: int | None = None) -> FieldTable:
    """Build tables for GF(q^n) from a primitive polynomial.

    Raises NotIrreducible / NotPrimitive for a bad polynomial and
    UnsupportedSize when q^n exceeds the table cap (``QSF_TABLE_CAP``).
    """
    if not is_prime(q):
        raise FieldError(f"q={q} is not prime")
    cap = table_cap() if cap is None else cap
    if q**n > cap:
        raise UnsupportedSize(f"{q}^{n} exceeds the table cap {cap}")
    if poly is None:
        from .presets import default_poly

        poly = default_poly(q, n)
    elif isinstance(poly, str):
        poly = PrimePolynomial.parse(poly, q, n)
    if poly.q != q or poly.n != n:
        raise FieldError(f"polynomial {poly} is not of degree {n} over GF({q})")
    if not poly.is_irreducible():
        raise NotIrreducible(f"{poly} is reducible over GF({q})")
    if not poly.is_primitive():
        raise NotPrimitive(f"{poly} is irreducible but its root is not primitive")

    M = q**n - 1
    # x^n = -(c_0 + ... + c_{n-1} x^{n-1})
    reduction = [(-c) % q for c in poly.coeffs[:n]]
    antilog = np.empty(M, dtype=np.int64)
    digits = [1] + [0] * (n - 1)
    code = 1
    for e in range(M):
        antilog[e] = code
        carry = digits[-1]
        digits = [0] + digits[:-1]
        if carry:
            digits = [(d + carry * r) % q for d, r in zip(digits, reduction)]
        code = sum(d * q**i for i, d in enumerate(digits)) if q != 2 else _bits(digits)
    if code != 1:
        raise NotPrimitive(f"alpha^{M} != 1 for {poly}")
    log = np.full(q**n, ZERO, dtype=np.int64)
    log[antilog] = np.arange(M)
    if np.count_nonzero(log[1:] == ZERO):
        raise NotPrimitive(f"antilog table of {poly} is not a bijection")
    table = FieldTable(poly, antilog, log, np.empty(0, dtype=np.int64))
    zech = table.to_exps(table.add_codes(1, antilog))
    object.__setattr__(table, "zech", zech)
    for arr in (antilog, log, zech):
        arr.setflags(write=False)
    return table


def _bits(digits: list[int]) -> int:
    code = 0
    for i, d in enumerate(digits):
        if d:
            code |= 1 << i
    return code


def element_order(field: FieldTable, e: int) -> int:
    """Multiplicative order of alpha^e."""
    if e == ZERO:
        raise FieldError("zero has no multiplicative order")
    M = field.M
    order = M
    for p in prime_factors(M):
        while order % p == 0 and (e * (order // p)) % M == 0:
            order //= p
    return order
