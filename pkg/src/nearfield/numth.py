"""Integer number theory behind Dickson-pair validation and coset labelling."""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

FACTOR_LIMIT = 1 << 40
BRACKET_MAX_INDEX = 64


class NotBijectiveError(RuntimeError):
    """Coset labels failed to cover every residue class mod n.

    This cannot happen for a valid Dickson pair; seeing it means an invalid
    pair slipped past validation upstream.
    """


class NotADicksonPairError(ValueError):
    """The pair (q, n) violates one of the Dickson-pair conditions."""


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as (prime, exponent) pairs, primes strictly increasing."""

    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3):
        if n % p == 0:
            return n == p
    f = 5
    r = isqrt(n)
    while f <= r:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def factorize(m: int) -> Factorization:
    """Factor m by trial division; accepts 1 <= m <= 2**40."""
    if not 1 <= m <= FACTOR_LIMIT:
        raise ValueError(f"factorize expects 1 <= m <= 2**40, got {m}")
    factors: list[tuple[int, int]] = []
    rest = m
    d = 2
    while d * d <= rest:
        if rest % d == 0:
            e = 0
            while rest % d == 0:
                rest //= d
                e += 1
            factors.append((d, e))
        d += 1 if d == 2 else 2
    if rest > 1:
        factors.append((rest, 1))
    return Factorization(tuple(factors))


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, l) with p prime and p**l == q, or None if q is not a prime power."""
    if q < 2:
        raise ValueError(f"prime_power expects q >= 2, got {q}")
    fac = factorize(q).factors
    if len(fac) != 1:
        return None
    return fac[0]


@dataclass(frozen=True)
class PairVerdict:
    """Outcome of the Dickson-pair test; `violated` names the first failing condition."""

    ok: bool
    violated: str | None = None  # "i", "ii" or "iii"
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_dickson_pair(q: int, n: int) -> PairVerdict:
    """Check the three Dickson-pair conditions for (q, n).

    (i)   q = p**l for a prime p,
    (ii)  every prime divisor of n divides q - 1,
    (iii) q = 3 (mod 4) implies 4 does not divide n.

    n = 1 is accepted: condition (ii) is vacuous and the construction
    degenerates to the field F_q itself.
    """
    if q < 2 or n < 1:
        raise ValueError(f"expected q >= 2 and n >= 1, got ({q}, {n})")
    if prime_power(q) is None:
        return PairVerdict(False, "i", f"{q} is not a prime power")
    for r in factorize(n).primes():
        if (q - 1) % r != 0:
            return PairVerdict(False, "ii", f"prime divisor {r} of n={n} does not divide q-1={q - 1}")
    if q % 4 == 3 and n % 4 == 0:
        return PairVerdict(False, "iii", f"q={q} = 3 (mod 4) but 4 divides n={n}")
    return PairVerdict(True)


@dataclass(frozen=True)
class DicksonPair:
    """A validated Dickson pair, with q split as p**l."""

    p: int
    l: int
    n: int

    @property
    def q(self) -> int:
        return self.p**self.l

    @classmethod
    def from_qn(cls, q: int, n: int) -> DicksonPair:
        verdict = is_dickson_pair(q, n)
        if not verdict:
            raise NotADicksonPairError(f"({q}, {n}) is not a Dickson pair: condition ({verdict.violated}) fails; {verdict.reason}")
        p, l = prime_power(q)  # type: ignore[misc]
        return cls(p, l, n)


def bracket_number(q: int, k: int) -> int:
    """The bracket number [k]_q = (q**k - 1) / (q - 1) = 1 + q + ... + q**(k-1)."""
    if q < 2:
        raise ValueError(f"bracket_number expects q >= 2, got {q}")
    if not 0 <= k <= BRACKET_MAX_INDEX:
        raise ValueError(f"bracket_number expects 0 <= k <= {BRACKET_MAX_INDEX}, got {k}")
    return (q**k - 1) // (q - 1)


@dataclass(frozen=True)
class CosetLabelMap:
    """The bijection k -> [k]_q mod n on {0, ..., n-1} and its inverse."""

    n: int
    label: tuple[int, ...]    # k -> [k]_q mod n
    inverse: tuple[int, ...]  # residue -> k


def coset_label_map(q: int, n: int) -> CosetLabelMap:
    """Map each k in {0, ..., n-1} to [k]_q mod n, with the inverse table.

    For a valid Dickson pair this is a bijection and [n]_q = 0 (mod n); both
    facts are checked and a failure raises NotBijectiveError.
    """
    label = tuple(bracket_number(q, k) % n for k in range(n))
    if sorted(label) != list(range(n)):
        raise NotBijectiveError(f"k -> [k]_q mod n is not a bijection for (q, n) = ({q}, {n}): {label}")
    if bracket_number(q, n) % n != 0:
        raise NotBijectiveError(f"[n]_q is not divisible by n for (q, n) = ({q}, {n})")
    inverse = [0] * n
    for k, r in enumerate(label):
        inverse[r] = k
    return CosetLabelMap(n, label, tuple(inverse))
