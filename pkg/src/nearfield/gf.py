"""Finite field arithmetic F_{p^m} in polynomial basis, backed by lookup tables.

Element representation: an element with coefficient vector (c_0, ..., c_{m-1})
(ascending powers of x) is the integer index c_0 + c_1*p + ... + c_{m-1}*p^(m-1).
Index 0 is the zero element and index 1 is the unit.  All arithmetic after
build time is table/index work, so exhaustive sweeps over the whole field are
cheap and elements hash as plain ints.

Canonical text form of an element: polynomial in x with ascending powers,
e.g. "2+3x+x^2".  Canonical JSON form: the coefficient list [c_0, ..., c_k].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numth import factorize, is_prime

DEFAULT_SIZE_CAP = 8192


class FieldError(Exception):
    """Base class for field construction failures."""


class ReducibleModulusError(FieldError):
    """Supplied modulus polynomial is not irreducible (or not monic of the right degree)."""


class NotAGeneratorError(FieldError):
    """Supplied generator does not have full multiplicative order."""


class SizeCapError(FieldError):
    """Requested field exceeds the configured size cap."""


class DomainError(ValueError):
    """Operation applied outside its domain (e.g. dlog of zero)."""


@dataclass(frozen=True)
class Poly:
    """Polynomial over F_p, coefficients ascending, no trailing zeros."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        cs = [int(c) % self.p for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __add__(self, other: Poly) -> Poly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % self.p
        return Poly(self.p, tuple(out))

    def __sub__(self, other: Poly) -> Poly:
        out = list(self.coeffs) + [0] * max(0, len(other.coeffs) - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            out[i] = (out[i] - c) % self.p
        return Poly(self.p, tuple(out))

    def __mul__(self, other: Poly) -> Poly:
        if self.is_zero or other.is_zero:
            return Poly(self.p, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = (out[i + j] + a * b) % self.p
        return Poly(self.p, tuple(out))

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        d = other.degree
        lead_inv = pow(other.coeffs[-1], -1, p)
        quot = [0] * max(0, len(rem) - d)
        while len(rem) - 1 >= d and rem:
            c = rem[-1] * lead_inv % p
            k = len(rem) - 1 - d
            quot[k] = c
            for j, b in enumerate(other.coeffs):
                rem[k + j] = (rem[k + j] - c * b) % p
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(p, tuple(quot)), Poly(p, tuple(rem))

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def __str__(self) -> str:
        return coeffs_to_str(self.coeffs)

    @classmethod
    def x(cls, p: int) -> Poly:
        return cls(p, (0, 1))


def coeffs_to_str(coeffs: tuple[int, ...] | list[int]) -> str:
    """Canonical text form with ascending powers, e.g. "2+3x+x^2"."""
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            var = "x" if i == 1 else f"x^{i}"
            terms.append(var if c == 1 else f"{c}{var}")
    return "+".join(terms) if terms else "0"


def _monic_polys(p: int, d: int):
    """Monic degree-d polynomials over F_p, lexicographic by coefficient vector
    read from the constant term upward."""
    for lows in itertools.product(range(p), repeat=d):
        yield Poly(p, lows + (1,))


@lru_cache(maxsize=None)
def _irreducibles_of_degree(p: int, d: int) -> tuple[Poly, ...]:
    return tuple(f for f in _monic_polys(p, d) if poly_is_irreducible(f))


def poly_is_irreducible(f: Poly) -> bool:
    """Exact irreducibility test by trial division.

    Divides by every monic irreducible of degree at most deg(f)/2, which is
    equivalent to dividing by every monic polynomial of those degrees.
    """
    if not f.is_monic:
        raise ValueError("irreducibility test expects a monic polynomial")
    if f.degree < 1:
        raise ValueError("irreducibility test expects degree >= 1")
    if f.degree == 1:
        return True
    for d in range(1, f.degree // 2 + 1):
        for g in _irreducibles_of_degree(f.p, d):
            if (f % g).is_zero:
                return False
    return True


def find_irreducible(p: int, m: int) -> Poly:
    """The lexicographically smallest monic irreducible of degree m over F_p
    (coefficient vectors compared from the constant term upward)."""
    if m < 1:
        raise ValueError("degree must be >= 1")
    for f in _monic_polys(p, m):
        if poly_is_irreducible(f):
            return f
    raise AssertionError("unreachable: an irreducible of every degree exists")


class Field:
    """A concrete F_{p^m} with full add/mul/neg/inv tables, a fixed generator,
    the complete discrete-log table and all Frobenius power maps.

    Built through :func:`field_build`; immutable afterwards, safe to share
    across threads and processes.
    """

    def __init__(self, p: int, m: int, modulus: Poly, generator: int, exp: np.ndarray, dlog: np.ndarray):
        self.p = p
        self.m = m
        self.size = p**m
        self.modulus = modulus
        self.generator = generator
        self.exp = exp    # exponent -> element index of g**e, length size-1
        self.dlog = dlog  # element index -> exponent, -1 at index 0
        self._pows = np.array([p**i for i in range(m)], dtype=np.int64)
        idx = np.arange(self.size, dtype=np.int64)
        self.digits = ((idx[:, None] // self._pows[None, :]) % p).astype(np.uint8)
        self.add_table = self._build_add_table()
        self.mul_table = self._build_mul_table()
        self.neg_table = (((p - self.digits.astype(np.int64)) % p) @ self._pows).astype(np.uint16)
        self.inv_table = self._build_inv_table()
        self.frob = self._build_frob()

    # -- table construction ------------------------------------------------

    def _build_add_table(self) -> np.ndarray:
        size, p = self.size, self.p
        table = np.empty((size, size), dtype=np.uint16)
        digits = self.digits.astype(np.int16)
        block = max(1, (1 << 22) // max(1, size * self.m))
        for lo in range(0, size, block):
            hi = min(size, lo + block)
            chunk = (digits[lo:hi, None, :] + digits[None, :, :]) % p
            table[lo:hi] = (chunk.astype(np.int64) @ self._pows).astype(np.uint16)
        return table

    def _build_mul_table(self) -> np.ndarray:
        size = self.size
        n1 = size - 1
        table = np.zeros((size, size), dtype=np.uint16)
        dl = self.dlog[1:].astype(np.int64)
        block = max(1, (1 << 22) // max(1, size))
        for lo in range(0, n1, block):
            hi = min(n1, lo + block)
            e = (dl[lo:hi, None] + dl[None, :]) % n1
            table[lo + 1 : hi + 1, 1:] = self.exp[e]
        return table

    def _build_inv_table(self) -> np.ndarray:
        n1 = self.size - 1
        inv = np.zeros(self.size, dtype=np.uint16)
        inv[self.exp] = self.exp[(n1 - np.arange(n1)) % n1]
        return inv

    def _build_frob(self) -> np.ndarray:
        n1 = self.size - 1
        frob = np.zeros((self.m, self.size), dtype=np.uint16)
        dl = self.dlog[1:].astype(np.int64)
        for i in range(self.m):
            frob[i, 1:] = self.exp[(dl * pow(self.p, i, n1)) % n1]
        return frob

    # -- element encoding ----------------------------------------------------

    def element_from_coeffs(self, coeffs) -> int:
        cs = list(coeffs)
        if len(cs) > self.m:
            raise ValueError(f"coefficient vector longer than degree {self.m}")
        out = 0
        for i, c in enumerate(cs):
            c = int(c)
            if not 0 <= c < self.p:
                raise ValueError(f"coefficient {c} is not a residue mod {self.p}")
            out += c * self.p**i
        return out

    def element_coeffs(self, a: int) -> tuple[int, ...]:
        self._check(a)
        cs = self.digits[a].tolist()
        while cs and cs[-1] == 0:
            cs.pop()
        return tuple(cs)

    def element_str(self, a: int) -> str:
        return coeffs_to_str(self.element_coeffs(a))

    def _check(self, a: int) -> None:
        if not 0 <= a < self.size:
            raise ValueError(f"element index {a} outside [0, {self.size})")

    # -- arithmetic ------------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        self._check(a)
        return int(self.inv_table[a])

    def power(self, a: int, e: int) -> int:
        """a**e under field multiplication; 0**0 = 1 by convention."""
        if e < 0:
            return self.power(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        n1 = self.size - 1
        return int(self.exp[(int(self.dlog[a]) * e) % n1])

    def frobenius(self, a: int, i: int) -> int:
        """a**(p**i); row i of the Frobenius table, periodic in i with period m."""
        self._check(a)
        return int(self.frob[i % self.m, a])

    def discrete_log(self, a: int) -> int:
        if a == 0:
            raise DomainError("discrete log of zero")
        self._check(a)
        return int(self.dlog[a])

    def frobenius_fixed(self, k: int) -> np.ndarray:
        """Sorted indices of the solution set of a**(p**k) = a (a subfield)."""
        row = self.frob[k % self.m]
        return np.flatnonzero(row == np.arange(self.size, dtype=row.dtype))

    def descriptor(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "size": self.size,
            "modulus": list(self.modulus.coeffs),
            "generator": list(self.element_coeffs(self.generator)),
        }


def _reduction_rows(modulus: Poly) -> list[tuple[int, ...]]:
    """Coefficient vectors of x^(m+j) mod modulus for j = 0 .. m-2."""
    p, m = modulus.p, modulus.degree
    rows = []
    cur = [(-c) % p for c in modulus.coeffs[:m]]  # x^m = -(lower part), modulus monic
    rows.append(tuple(cur))
    for _ in range(m - 2):
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(m):
                cur[i] = (cur[i] + top * rows[0][i]) % p
        rows.append(tuple(cur))
    return rows


class _PolyModArith:
    """Scalar modular polynomial arithmetic on index-encoded elements (build time only)."""

    def __init__(self, p: int, m: int, modulus: Poly):
        self.p = p
        self.m = m
        self.red = _reduction_rows(modulus) if m > 1 else []
        self.pows = [p**i for i in range(m)]

    def decode(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return out

    def encode(self, cs: list[int]) -> int:
        return sum(c * w for c, w in zip(cs, self.pows))

    def mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da, db = self.decode(a), self.decode(b)
        conv = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    conv[i + j] = (conv[i + j] + x * y) % p
        out = conv[:m]
        for j in range(m - 1):
            t = conv[m + j]
            if t:
                row = self.red[j]
                for i in range(m):
                    out[i] = (out[i] + t * row[i]) % p
        return self.encode(out)

    def pow(self, a: int, e: int) -> int:
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result


def _has_full_order(arith: _PolyModArith, a: int, n1: int, prime_divisors: tuple[int, ...]) -> bool:
    if a == 0:
        return False
    if arith.pow(a, n1) != 1:
        return False
    return all(arith.pow(a, n1 // r) != 1 for r in prime_divisors)


def field_build(
    p: int,
    m: int,
    modulus: Poly | None = None,
    generator: int | None = None,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> Field:
    """Construct F_{p^m} with all tables.

    The modulus defaults to the lexicographically smallest monic irreducible of
    degree m; the generator defaults to the element of smallest index with
    multiplicative order p^m - 1.  Both choices are deterministic, so builds
    reproduce exactly across runs.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if m < 1:
        raise FieldError(f"extension degree must be >= 1, got {m}")
    size = p**m
    if size > size_cap:
        raise SizeCapError(f"field size {size} exceeds cap {size_cap}")
    if size > 1 << 16:
        raise SizeCapError(f"field size {size} exceeds the uint16 table limit {1 << 16}")

    if modulus is None:
        modulus = find_irreducible(p, m)
    else:
        if modulus.p != p:
            raise ReducibleModulusError(f"modulus is over F_{modulus.p}, expected F_{p}")
        if modulus.degree != m or not modulus.is_monic:
            raise ReducibleModulusError(f"modulus must be monic of degree {m}, got {modulus}")
        if not poly_is_irreducible(modulus):
            raise ReducibleModulusError(f"modulus {modulus} is reducible over F_{p}")

    arith = _PolyModArith(p, m, modulus)
    n1 = size - 1
    divisors = factorize(n1).primes() if n1 > 1 else ()

    if generator is None:
        g = next(a for a in range(1, size) if _has_full_order(arith, a, n1, divisors))
    else:
        g = int(generator)
        if not 0 <= g < size:
            raise NotAGeneratorError(f"generator index {g} outside [0, {size})")
        if not _has_full_order(arith, g, n1, divisors):
            raise NotAGeneratorError(f"element {g} does not generate the multiplicative group")

    exp = np.empty(n1, dtype=np.uint16)
    dlog = np.full(size, -1, dtype=np.int32)
    cur = 1
    for e in range(n1):
        exp[e] = cur
        dlog[cur] = e
        cur = arith.mul(cur, g)
    if cur != 1 or (dlog[1:] < 0).any():
        raise NotAGeneratorError(f"element {g} does not generate the multiplicative group")

    return Field(p, m, modulus, g, exp, dlog)
