"""The near-ring M(G) of all self-maps of a finite group, and its
distributive elements.

Maps are written on the right: (x)(f o g) = ((x)f)g, so composition applies
the left operand first.  Addition is pointwise through the Cayley table.
With these conventions M(G) is a left near-ring: composition distributes over
sums from the left, while constant maps break the right distributive law on
any group with more than one element.  A map distributes from the right
exactly when it is an endomorphism of (G, +).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Group",
    "InvalidGroupError",
    "NearringReport",
    "TooLargeError",
    "all_maps",
    "builtin_group",
    "constant_map",
    "distributive_maps",
    "endomorphisms",
    "identity_map",
    "load_group",
    "map_add",
    "map_compose",
    "verify_left_nearring",
    "zero_map",
]

GMap = tuple[int, ...]

MAX_MAPS = 100_000
_SAMPLE_CHUNK = 1 << 18
_EXHAUSTIVE_GROUP_ORDER = 4


class TooLargeError(ValueError):
    """Enumerating all of M(G) would exceed the map-count limit."""


class InvalidGroupError(ValueError):
    """Cayley table fails the group axioms."""


class Group:
    """A small finite group given by its Cayley table.

    The table is validated on construction: associativity, a unique identity
    and two-sided inverses.  `zero` is the identity index and `neg` the
    inverse table.
    """

    def __init__(self, name: str, table) -> None:
        add = np.asarray(table, dtype=np.int64)
        if add.ndim != 2 or add.shape[0] != add.shape[1]:
            raise InvalidGroupError("Cayley table must be square")
        order = add.shape[0]
        if order < 1 or add.min() < 0 or add.max() >= order:
            raise InvalidGroupError("Cayley table entries must index group elements")
        idx = np.arange(order)
        lhs = add[add[:, :, None], idx[None, None, :]]
        rhs = add[idx[:, None, None], add[None, :, :]]
        if not (lhs == rhs).all():
            raise InvalidGroupError("Cayley table is not associative")
        ident = [e for e in range(order) if (add[e] == idx).all() and (add[:, e] == idx).all()]
        if len(ident) != 1:
            raise InvalidGroupError("Cayley table has no unique identity")
        zero = ident[0]
        neg = np.full(order, -1, dtype=np.int64)
        for a in range(order):
            hits = np.flatnonzero(add[a] == zero)
            if hits.size != 1 or add[hits[0], a] != zero:
                raise InvalidGroupError(f"element {a} has no two-sided inverse")
            neg[a] = hits[0]
        self.name = name
        self.order = order
        self.add = add
        self.zero = int(zero)
        self.neg = neg
        self.abelian = bool((add == add.T).all())

    def __repr__(self) -> str:
        return f"Group({self.name!r}, order={self.order})"


def builtin_group(name: str) -> Group:
    """Built-in tables: Z2, Z3, Z4, Z5 and the Klein four-group V4."""
    key = name.upper()
    if key in ("Z2", "Z3", "Z4", "Z5"):
        n = int(key[1])
        table = [[(i + j) % n for j in range(n)] for i in range(n)]
        return Group(key, table)
    if key == "V4":
        table = [[i ^ j for j in range(4)] for i in range(4)]
        return Group(key, table)
    raise ValueError(f"unknown builtin group {name!r} (choose from Z2, Z3, Z4, Z5, V4)")


def load_group(source) -> Group:
    """Load a group from a JSON file path or a parsed dict {order, add, name?}."""
    if isinstance(source, (str, bytes)):
        with open(source, encoding="utf-8") as fh:
            source = json.load(fh)
    name = source.get("name", "custom")
    add = source["add"]
    if int(source.get("order", len(add))) != len(add):
        raise InvalidGroupError("declared order does not match table size")
    return Group(name, add)


def all_maps(g: Group) -> list[GMap]:
    """Every map G -> G as an image tuple, in lexicographic order."""
    count = g.order**g.order
    if count > MAX_MAPS:
        raise TooLargeError(f"|M(G)| = {count} exceeds the enumeration limit {MAX_MAPS}")
    return [images for images in itertools.product(range(g.order), repeat=g.order)]


def zero_map(g: Group) -> GMap:
    return (g.zero,) * g.order


def identity_map(g: Group) -> GMap:
    return tuple(range(g.order))


def constant_map(g: Group, c: int) -> GMap:
    return (c,) * g.order


def map_add(g: Group, f: GMap, h: GMap) -> GMap:
    return tuple(int(g.add[a, b]) for a, b in zip(f, h))


def map_compose(g: Group, f: GMap, h: GMap) -> GMap:
    """(x)(f o h) = ((x)f)h: apply f first, then h."""
    return tuple(h[a] for a in f)


@dataclass(frozen=True)
class NearringReport:
    group: str
    order: int
    map_count: int
    plus_is_group: bool
    plus_abelian: bool
    compose_is_semigroup: bool
    left_distributive: bool
    right_distributive: bool
    right_counterexample: tuple[GMap, GMap, GMap] | None
    mode: str
    seed: int | None = None
    trials: int | None = None

    def as_dict(self) -> dict:
        cx = None
        if self.right_counterexample is not None:
            f, h, k = self.right_counterexample
            cx = {"f": list(f), "g": list(h), "h": list(k)}
        return {
            "group": self.group,
            "order": self.order,
            "map_count": self.map_count,
            "plus_is_group": self.plus_is_group,
            "plus_abelian": self.plus_abelian,
            "compose_is_semigroup": self.compose_is_semigroup,
            "left_distributive": self.left_distributive,
            "right_distributive": self.right_distributive,
            "right_counterexample": cx,
            "mode": self.mode,
            "seed": self.seed,
            "trials": self.trials,
        }


class _MapTables:
    """Index-encoded M(G): Cayley tables for pointwise + and composition."""

    def __init__(self, g: Group):
        self.group = g
        maps = np.array(all_maps(g), dtype=np.int64)
        self.maps = maps
        m = maps.shape[0]
        self.count = m
        weights = g.order ** np.arange(g.order - 1, -1, -1, dtype=np.int64)
        if not (maps @ weights == np.arange(m)).all():
            raise AssertionError("map enumeration is not in index order")
        self.addm = np.empty((m, m), dtype=np.uint16)  # ids < MAX_MAPS < 2**16
        block = max(1, (1 << 22) // max(1, m * g.order))
        for lo in range(0, m, block):
            hi = min(m, lo + block)
            rows = g.add[maps[lo:hi, None, :], maps[None, :, :]]
            self.addm[lo:hi] = (rows @ weights).astype(np.uint16)
        self.compm = np.empty((m, m), dtype=np.uint16)
        for fi in range(m):
            self.compm[fi] = (maps[:, maps[fi]] @ weights).astype(np.uint16)

    def zero_id(self) -> int:
        return int(np.array(zero_map(self.group)) @ self.group.order ** np.arange(self.group.order - 1, -1, -1))


def _table_assoc(t: np.ndarray, rng: np.random.Generator | None, trials: int) -> bool:
    m = t.shape[0]
    if rng is None:
        idx = np.arange(m)
        lhs = t[t[:, :, None], idx[None, None, :]]
        rhs = t[idx[:, None, None], t[None, :, :]]
        return bool((lhs == rhs).all())
    remaining = trials
    while remaining > 0:
        k = min(_SAMPLE_CHUNK, remaining)
        a, b, c = rng.integers(0, m, size=(3, k), dtype=np.int64)
        if not (t[t[a, b], c] == t[a, t[b, c]]).all():
            return False
        remaining -= k
    return True


def verify_left_nearring(g: Group, seed: int = 0, trials: int = 1_000_000) -> NearringReport:
    """Check the left near-ring axioms for M(G).

    Exhaustive over all map triples for |G| <= 4; |G| = 5 checks the
    O(|M|^2) identities exactly and samples seeded triples for the cubic
    scans.  The right-distributivity counterexample is built from constant
    maps and re-verified before being reported.
    """
    t = _MapTables(g)
    m = t.count
    mode = "exhaustive" if g.order <= _EXHAUSTIVE_GROUP_ORDER else "sampled"
    rng = np.random.Generator(np.random.PCG64(seed)) if mode == "sampled" else None

    zid = t.zero_id()
    idx = np.arange(m)
    plus_identity = bool((t.addm[zid] == idx).all() and (t.addm[:, zid] == idx).all())
    neg_ids = t.group.neg[t.maps] @ t.group.order ** np.arange(g.order - 1, -1, -1, dtype=np.int64)
    plus_inverses = bool((t.addm[idx, neg_ids] == zid).all())
    plus_abelian = bool((t.addm == t.addm.T).all())
    plus_assoc = _table_assoc(t.addm, rng, trials)
    comp_assoc = _table_assoc(t.compm, rng, trials)

    if mode == "exhaustive":
        lhs = t.compm[idx[:, None, None], t.addm[None, :, :]]
        rhs = t.addm[t.compm[:, :, None], t.compm[:, None, :]]
        left_dist = bool((lhs == rhs).all())
    else:
        left_dist = True
        remaining = trials
        while remaining > 0 and left_dist:
            k = min(_SAMPLE_CHUNK, remaining)
            a, b, c = rng.integers(0, m, size=(3, k), dtype=np.int64)
            left_dist = bool((t.compm[a, t.addm[b, c]] == t.addm[t.compm[a, b], t.compm[a, c]]).all())
            remaining -= k

    right_dist = True
    counterexample = None
    if g.order > 1:
        c = next(e for e in range(g.order) if e != g.zero)
        f = constant_map(g, c)
        lhs_map = map_compose(g, map_add(g, f, f), f)
        rhs_map = map_add(g, map_compose(g, f, f), map_compose(g, f, f))
        if lhs_map != rhs_map:
            right_dist = False
            counterexample = (f, f, f)
        else:
            raise AssertionError("constant maps failed to break right distributivity")

    return NearringReport(
        group=g.name,
        order=g.order,
        map_count=m,
        plus_is_group=plus_identity and plus_inverses and plus_assoc,
        plus_abelian=plus_abelian,
        compose_is_semigroup=comp_assoc,
        left_distributive=left_dist,
        right_distributive=right_dist,
        right_counterexample=counterexample,
        mode=mode,
        seed=seed if mode == "sampled" else None,
        trials=trials if mode == "sampled" else None,
    )


def distributive_maps(g: Group) -> list[GMap]:
    """All h with (f+g) o h = f o h + g o h for every f, g, by brute force.

    Groups of order <= 4 test every (f, g) pair for every candidate h
    directly; order 5 first filters candidates with constant-map pairs (which
    probe exactly the pointwise sums) and then confirms each survivor against
    the complete pair grid.
    """
    t = _MapTables(g)
    m = t.count
    if g.order <= _EXHAUSTIVE_GROUP_ORDER:
        candidates = range(m)
    else:
        maps = t.maps
        cond = np.ones(m, dtype=bool)
        for u in range(g.order):
            for v in range(g.order):
                cond &= maps[:, g.add[u, v]] == g.add[maps[:, u], maps[:, v]]
        candidates = np.flatnonzero(cond)
    out = []
    for h in candidates:
        col = t.compm[:, h]
        if (col[t.addm] == t.addm[col[:, None], col[None, :]]).all():
            out.append(tuple(int(v) for v in t.maps[h]))
    return out


def endomorphisms(g: Group) -> list[GMap]:
    """All maps with h(u+v) = h(u) + h(v), enumerated directly."""
    out = []
    for h in all_maps(g):
        if all(h[g.add[u, v]] == g.add[h[u], h[v]] for u in range(g.order) for v in range(g.order)):
            out.append(h)
    return out
