"""Finite Dickson nearfields: coset-twisted multiplication over a finite field.

Take F_{q^n} with generator g and the subgroup H = <g^n> of the multiplicative
group.  Each nonzero element a lies in exactly one coset g^{[k]_q} H, where
[k]_q = 1 + q + ... + q^(k-1); the coset index k of the left operand selects a
Frobenius twist of the right operand:

    a o b = a * b^(q^k)     for a != 0, k = coset index of a
    0 o b = 0

Frobenius maps are additive, so the left distributive law a o (b+c) =
a o b + a o c holds exactly, while right distributivity fails whenever n > 1:
(R, +, o) is a proper left nearfield of order q^n.  For n = 1 the twist is
trivial and the construction degenerates to the field itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import DEFAULT_SIZE_CAP, DomainError, Field, Poly, field_build
from .numth import DicksonPair, NotADicksonPairError, coset_label_map

__all__ = [
    "AxiomReport",
    "Nearfield",
    "NotADicksonPairError",
    "PresentationReport",
    "build_nearfield",
]

EXHAUSTIVE_LIMIT = 128

# Fixed pre-filter seed for the distributive-element scan; any survivor is
# still confirmed against every pair, so the choice only affects speed.
_PREFILTER_SEED = 41
_PREFILTER_PAIRS = 256
_SAMPLE_CHUNK = 1 << 18


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of the left-nearfield axiom sweep.

    `right_counterexample` is a triple (a, b, c) with (b+c) o a != b o a + c o a;
    it is present and re-verified whenever right_distributive is False.
    """

    additive_abelian: bool
    multiplicative_group: bool
    left_distributive: bool
    right_distributive: bool
    right_counterexample: tuple[int, int, int] | None
    mode: str
    seed: int | None = None
    trials: int | None = None

    def as_dict(self, nf: Nearfield | None = None) -> dict:
        cx = None
        if self.right_counterexample is not None:
            a, b, c = self.right_counterexample
            cx = {"a": a, "b": b, "c": c}
            if nf is not None:
                cx = {k: nf.element_str(v) for k, v in cx.items()}
        return {
            "additive_abelian": self.additive_abelian,
            "multiplicative_group": self.multiplicative_group,
            "left_distributive": self.left_distributive,
            "right_distributive": self.right_distributive,
            "right_counterexample": cx,
            "mode": self.mode,
            "seed": self.seed,
            "trials": self.trials,
        }


@dataclass(frozen=True)
class PresentationReport:
    """Metacyclic relations of (R*, o), checked on a = g^n and b = g.

    With m = (q^n - 1)/n and t = m/(q - 1) the required relations are
    a^m = 1, b^n = a^t and b o a = a^q o b (powers taken under o,
    left-associated).  `alt_power_relation_holds` records whether the variant
    b^m = a^t happens to hold as well; it is reported, not required.
    """

    m_exp: int
    t_exp: int
    order_relation_holds: bool
    power_relation_holds: bool
    twist_relation_holds: bool
    alt_power_relation_holds: bool

    @property
    def relations_hold(self) -> bool:
        return self.order_relation_holds and self.power_relation_holds and self.twist_relation_holds

    def as_dict(self) -> dict:
        return {
            "m_exp": self.m_exp,
            "t_exp": self.t_exp,
            "order_relation_holds": self.order_relation_holds,
            "power_relation_holds": self.power_relation_holds,
            "twist_relation_holds": self.twist_relation_holds,
            "alt_power_relation_holds": self.alt_power_relation_holds,
            "relations_hold": self.relations_hold,
        }


class Nearfield:
    """A finite Dickson nearfield DN_g(q, n) built through :func:`build_nearfield`.

    Immutable after construction; every verification sweep below is read-only.
    """

    def __init__(self, field: Field, pair: DicksonPair):
        self.field = field
        self.p = pair.p
        self.l = pair.l
        self.n = pair.n
        self.q = pair.q
        self.size = field.size

        labels = coset_label_map(self.q, self.n)
        self.coset = np.full(self.size, -1, dtype=np.int8)
        inverse = np.asarray(labels.inverse, dtype=np.int8)
        self.coset[1:] = inverse[field.dlog[1:] % self.n]

        counts = np.bincount(self.coset[1:], minlength=self.n)
        if not (counts == (self.size - 1) // self.n).all():
            raise AssertionError("coset classes are not equal-sized; build is inconsistent")
        if self.n > 1 and self.coset[field.generator] != 1:
            raise AssertionError("generator did not land in coset 1; build is inconsistent")

        # Twist table: row k maps b -> b^(q^k); row selection clamps the coset
        # of zero to 0, which is harmless because row 0 of mul_table is zero.
        self.twist = np.stack([field.frob[(self.l * k) % field.m] for k in range(self.n)])
        coset0 = np.where(self.coset < 0, 0, self.coset)
        idx = np.arange(self.size, dtype=np.int64)
        self.circ_table = field.mul_table[idx[:, None], self.twist[coset0]]
        self._distributive: np.ndarray | None = None

    # -- basic operations -----------------------------------------------------

    def circ(self, a: int, b: int) -> int:
        """The twisted product a o b."""
        return int(self.circ_table[a, b])

    def circ_pow(self, a: int, e: int) -> int:
        """Left-associated e-th power of a under o; e = 0 gives 1."""
        if e < 0:
            raise ValueError("negative twisted powers are not defined here")
        acc = 1
        for _ in range(e):
            acc = int(self.circ_table[acc, a])
        return acc

    def circ_inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("twisted inverse of zero")
        hits = np.flatnonzero(self.circ_table[a] == 1)
        return int(hits[0])

    def coset_of(self, a: int) -> int:
        if a == 0:
            raise DomainError("zero belongs to no multiplicative coset")
        return int(self.coset[a])

    def element_str(self, a: int) -> str:
        return self.field.element_str(a)

    def descriptor(self) -> dict:
        f = self.field
        return {
            "schema": "nearfield/1",
            "p": self.p,
            "l": self.l,
            "n": self.n,
            "q": self.q,
            "size": self.size,
            "modulus": list(f.modulus.coeffs),
            "generator": list(f.element_coeffs(f.generator)),
        }

    # -- axiom verification -------------------------------------------------

    def verify_left_nearfield(self, mode: str = "auto", seed: int = 0, trials: int = 1_000_000) -> AxiomReport:
        """Check the left-nearfield axioms.

        Exhaustive mode scans all size^3 triples and is limited to size <= 128;
        sampled mode checks the O(size^2) identities exactly and draws `trials`
        seeded triples for the associativity and distributivity scans.
        """
        size = self.size
        if mode == "auto":
            mode = "exhaustive" if size <= EXHAUSTIVE_LIMIT else "sampled"
        if mode not in ("exhaustive", "sampled"):
            raise ValueError(f"unknown mode {mode!r}")
        if mode == "exhaustive" and size > EXHAUSTIVE_LIMIT:
            raise ValueError(f"exhaustive mode is limited to size <= {EXHAUSTIVE_LIMIT}")

        add_t = self.field.add_table
        circ_t = self.circ_table
        idx = np.arange(size)

        abelian = bool((add_t == add_t.T).all())
        add_identity = bool((add_t[0] == idx).all())
        add_inverses = bool((add_t[idx, self.field.neg_table] == 0).all())

        nz = circ_t[1:, 1:]
        closure = bool((nz != 0).all())
        one_identity = bool((circ_t[1] == idx).all() and (circ_t[:, 1] == idx).all())
        inverses = bool((nz == 1).any(axis=1).all() and (nz == 1).any(axis=0).all())

        if mode == "exhaustive":
            add_assoc = _assoc_holds(add_t)
            mul_assoc = _assoc_holds(circ_t)
            left_dist = _left_dist_exhaustive(circ_t, add_t)
            seed_out: int | None = None
            trials_out: int | None = None
        else:
            rng = np.random.Generator(np.random.PCG64(seed))
            add_assoc = _assoc_sampled(add_t, rng, trials, size)
            mul_assoc = _assoc_sampled(circ_t, rng, trials, size)
            left_dist = _left_dist_sampled(circ_t, add_t, rng, trials, size)
            seed_out = seed
            trials_out = trials

        right_ok, counterexample = self._right_distributive_scan(mode, seed, trials)
        if counterexample is not None:
            a, b, c = counterexample
            lhs = self.circ(self.field.add(b, c), a)
            rhs = self.field.add(self.circ(b, a), self.circ(c, a))
            if lhs == rhs:
                raise AssertionError("right-distributivity counterexample failed re-verification")

        return AxiomReport(
            additive_abelian=abelian and add_identity and add_inverses and add_assoc,
            multiplicative_group=closure and one_identity and inverses and mul_assoc,
            left_distributive=left_dist,
            right_distributive=right_ok,
            right_counterexample=counterexample,
            mode=mode,
            seed=seed_out,
            trials=trials_out,
        )

    def _right_distributive_scan(self, mode: str, seed: int, trials: int) -> tuple[bool, tuple[int, int, int] | None]:
        add_t = self.field.add_table
        circ_t = self.circ_table
        size = self.size
        if mode == "exhaustive":
            for a in range(1, size):
                col = circ_t[:, a]
                lhs = col[add_t]
                rhs = add_t[col[:, None], col[None, :]]
                bad = np.argwhere(lhs != rhs)
                if bad.size:
                    b, c = (int(v) for v in bad[0])
                    return False, (a, b, c)
            return True, None
        rng = np.random.Generator(np.random.PCG64(seed ^ 0x5D))
        remaining = trials
        while remaining > 0:
            k = min(_SAMPLE_CHUNK, remaining)
            a, b, c = rng.integers(0, size, size=(3, k), dtype=np.int64)
            lhs = circ_t[add_t[b, c], a]
            rhs = add_t[circ_t[b, a], circ_t[c, a]]
            bad = np.flatnonzero(lhs != rhs)
            if bad.size:
                i = int(bad[0])
                return False, (int(a[i]), int(b[i]), int(c[i]))
            remaining -= k
        if self.n == 1:
            return True, None
        # A proper nearfield always has a violation; hunt deterministically.
        for a in range(1, size):
            col = circ_t[:, a]
            lhs = col[add_t]
            rhs = add_t[col[:, None], col[None, :]]
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                b, c = (int(v) for v in bad[0])
                return False, (a, b, c)
        return True, None

    # -- distributive structure ------------------------------------------------

    def distributive_elements(self) -> np.ndarray:
        """All elements d with (y+z) o d = y o d + z o d for every y, z.

        Brute force with early exit: a seeded pre-filter discards candidates
        that already fail on some sampled pair (each rejection carries a
        concrete witness), then every surviving candidate is confirmed against
        the complete pair grid.  The result is exact at any size.
        """
        if self._distributive is not None:
            return self._distributive
        add_t = self.field.add_table
        circ_t = self.circ_table
        size = self.size

        mask = np.ones(size, dtype=bool)
        rng = np.random.Generator(np.random.PCG64(_PREFILTER_SEED))
        pairs = rng.integers(0, size, size=(_PREFILTER_PAIRS, 2), dtype=np.int64)
        for y, z in pairs:
            mask &= circ_t[add_t[y, z]] == add_t[circ_t[y], circ_t[z]]

        members = []
        for d in np.flatnonzero(mask):
            col = circ_t[:, d]
            if (col[add_t] == add_t[col[:, None], col[None, :]]).all():
                members.append(int(d))
        self._distributive = np.array(members, dtype=np.int64)
        return self._distributive

    def center(self) -> np.ndarray:
        """Elements commuting with the whole carrier under o."""
        return np.flatnonzero((self.circ_table == self.circ_table.T).all(axis=1))

    def generalized_center(self) -> np.ndarray:
        """Elements commuting with every distributive element under o."""
        d = self.distributive_elements()
        return np.flatnonzero((self.circ_table[:, d] == self.circ_table[d, :].T).all(axis=1))

    def verify_distributor_skewfield(self) -> bool:
        """The distributive elements form a skewfield inside (R, +, o):
        closed under +, negation, o and twisted inverses, with both
        distributive laws holding on the subset."""
        d = self.distributive_elements()
        mask = np.zeros(self.size, dtype=bool)
        mask[d] = True
        add_t = self.field.add_table
        circ_t = self.circ_table
        grid = np.ix_(d, d)
        if not (mask[0] and mask[1]):
            return False
        if not mask[add_t[grid]].all() or not mask[self.field.neg_table[d]].all():
            return False
        if not mask[circ_t[grid]].all():
            return False
        if not all(mask[self.circ_inv(int(a))] for a in d if a != 0):
            return False
        da = d[:, None, None]
        db = d[None, :, None]
        dc = d[None, None, :]
        left = (circ_t[da, add_t[db, dc]] == add_t[circ_t[da, db], circ_t[da, dc]]).all()
        right = (circ_t[add_t[da, db], dc] == add_t[circ_t[da, dc], circ_t[db, dc]]).all()
        return bool(left and right)

    def verify_vector_space(self) -> bool:
        """The carrier is a left vector space over its distributive elements,
        with scalars acting through o.  All four axioms checked exhaustively:
        scalar distributes over vector sums, scalar sums distribute over
        vectors, scalar products associate with the action, and 1 acts as
        identity."""
        d = self.distributive_elements()
        add_t = self.field.add_table
        circ_t = self.circ_table
        for a in d:
            row = circ_t[a]
            if not (row[add_t] == add_t[row[:, None], row[None, :]]).all():
                return False
        scalar_rows = circ_t[d]  # (|D|, size): row i is v -> d_i o v
        da = d[:, None]
        db = d[None, :]
        if not (circ_t[add_t[da, db]] == add_t[scalar_rows[:, None, :], scalar_rows[None, :, :]]).all():
            return False
        if not (circ_t[circ_t[da, db]] == circ_t[da[:, :, None], scalar_rows[None, :, :]]).all():
            return False
        return bool((circ_t[1] == np.arange(self.size)).all())

    def verify_presentation(self) -> PresentationReport:
        size1 = self.size - 1
        m_exp = size1 // self.n
        t_exp = m_exp // (self.q - 1)
        if m_exp * self.n != size1 or t_exp * (self.q - 1) != m_exp:
            raise AssertionError("presentation exponents are not integral; build is inconsistent")
        g = self.field.generator
        a = self.field.power(g, self.n)
        b = g
        a_t = self.circ_pow(a, t_exp)
        order_ok = self.circ_pow(a, m_exp) == 1
        power_ok = self.circ_pow(b, self.n) == a_t
        twist_ok = self.circ(b, a) == self.circ(self.circ_pow(a, self.q), b)
        alt_ok = self.circ_pow(b, m_exp) == a_t
        return PresentationReport(m_exp, t_exp, order_ok, power_ok, twist_ok, alt_ok)


def _assoc_holds(t: np.ndarray) -> bool:
    size = t.shape[0]
    idx = np.arange(size)
    lhs = t[t[:, :, None], idx[None, None, :]]
    rhs = t[idx[:, None, None], t[None, :, :]]
    return bool((lhs == rhs).all())


def _assoc_sampled(t: np.ndarray, rng: np.random.Generator, trials: int, size: int) -> bool:
    remaining = trials
    while remaining > 0:
        k = min(_SAMPLE_CHUNK, remaining)
        a, b, c = rng.integers(0, size, size=(3, k), dtype=np.int64)
        if not (t[t[a, b], c] == t[a, t[b, c]]).all():
            return False
        remaining -= k
    return True


def _left_dist_exhaustive(circ_t: np.ndarray, add_t: np.ndarray) -> bool:
    size = circ_t.shape[0]
    idx = np.arange(size)
    lhs = circ_t[idx[:, None, None], add_t[None, :, :]]
    rhs = add_t[circ_t[:, :, None], circ_t[:, None, :]]
    return bool((lhs == rhs).all())


def _left_dist_sampled(circ_t: np.ndarray, add_t: np.ndarray, rng: np.random.Generator, trials: int, size: int) -> bool:
    remaining = trials
    while remaining > 0:
        k = min(_SAMPLE_CHUNK, remaining)
        a, b, c = rng.integers(0, size, size=(3, k), dtype=np.int64)
        if not (circ_t[a, add_t[b, c]] == add_t[circ_t[a, b], circ_t[a, c]]).all():
            return False
        remaining -= k
    return True


def build_nearfield(
    q: int,
    n: int,
    modulus: Poly | None = None,
    generator: int | None = None,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> Nearfield:
    """Build DN_g(q, n) on F_{q^n}.

    Raises NotADicksonPairError when (q, n) fails validation; modulus and
    generator defaults follow :func:`nearfield.gf.field_build`.
    """
    pair = DicksonPair.from_qn(q, n)
    field = field_build(pair.p, pair.l * n, modulus=modulus, generator=generator, size_cap=size_cap)
    return Nearfield(field, pair)
