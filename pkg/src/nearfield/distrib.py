"""Distributor sets D(a, b) of a Dickson nearfield: brute force, coset
classification, structure prediction and the exhaustive sweep engine.

For a fixed pair (a, b) the distributor set is

    D(a, b) = { d : (a+b) o d = a o d + b o d }.

Each side is an additive map of d (Frobenius twists are additive), so the set
is always an additive subgroup containing 0, 1 and every globally
distributive element.  The coset pattern of a, b and a+b decides the rest:

  * all three in one coset           -> the whole carrier,
  * exactly two sharing a coset      -> the subfield of order p^gamma with
                                        gamma = l * gcd(t - s, n), where s is
                                        the shared coset and t the odd one,
  * a + b = 0                        -> the whole carrier (the defining
                                        equation collapses to 0 = 0),
  * a = 0 or b = 0                   -> the whole carrier,
  * three pairwise distinct cosets   -> no prediction; the sweep records what
                                        brute force finds.

Sweeps iterate ordered pairs of nonzero elements in index order, emit one CSV
row per pair and an aggregate summary, and are deterministic for a fixed
configuration regardless of worker count.
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass, field
from math import gcd
from multiprocessing import get_context

import numpy as np

from .dickson import Nearfield, build_nearfield
from .gf import Poly

__all__ = [
    "BudgetExceededError",
    "DistributorReport",
    "PairCase",
    "Prediction",
    "StructureInfo",
    "SweepSummary",
    "classify_pair",
    "detect_structure",
    "distributor_report",
    "distributor_set",
    "predicted_distributor",
    "sweep",
    "sweep_csv_header",
]

DEFAULT_OP_BUDGET = 10**9

CSV_SCHEMA_LINE = "# schema=nearfield-sweep/1"
CSV_COLUMNS = ("alpha", "beta", "case", "size", "is_subfield", "subfield_order", "predicted", "match")

ALL_SAME = "all_same_coset"
TWO_COINCIDE = "two_coincide"
ALL_DISTINCT = "all_distinct"
ZERO_OPERAND = "zero_operand"
SUM_ZERO = "sum_zero"

_CASE_LABELS = (ALL_SAME, TWO_COINCIDE, ALL_DISTINCT, SUM_ZERO)
_PAIR_LABELS = ("alpha_beta", "alpha_sum", "beta_sum")
_BLOCK_PAIRS = 8192
_MISMATCH_EXAMPLE_CAP = 20


class BudgetExceededError(RuntimeError):
    """A full sweep would exceed the operation budget; rerun with sampling."""


@dataclass(frozen=True)
class PairCase:
    """Coset pattern of (a, b, a+b); cosets are None where undefined (zero)."""

    tag: str
    k_alpha: int | None
    k_beta: int | None
    k_sum: int | None
    which_pair: str | None = None  # for two_coincide: which two operands share a coset

    def as_dict(self) -> dict:
        return {
            "tag": self.tag,
            "k_alpha": self.k_alpha,
            "k_beta": self.k_beta,
            "k_sum": self.k_sum,
            "which_pair": self.which_pair,
        }


@dataclass(frozen=True)
class Prediction:
    """Predicted distributor structure for a coset pattern."""

    kind: str  # "whole_field" | "subfield" | "unknown"
    order: int | None = None
    gamma: int | None = None

    def label(self) -> str:
        if self.kind == "subfield":
            return f"subfield:{self.order}"
        return self.kind


@dataclass(frozen=True)
class StructureInfo:
    is_additive_subgroup: bool
    is_subfield: bool
    order: int | None  # p^h when is_subfield


@dataclass(frozen=True)
class DistributorReport:
    alpha: int
    beta: int
    case: PairCase
    members: tuple[int, ...]
    size: int
    structure: StructureInfo
    predicted: Prediction
    match: bool

    @property
    def is_additive_subgroup(self) -> bool:
        return self.structure.is_additive_subgroup

    @property
    def is_subfield(self) -> bool:
        return self.structure.is_subfield

    @property
    def subfield_order(self) -> int | None:
        return self.structure.order

    def as_dict(self, nf: Nearfield | None = None) -> dict:
        text = (lambda i: nf.element_str(i)) if nf is not None else (lambda i: i)
        return {
            "schema": "nearfield-distributor-report/1",
            "alpha": text(self.alpha),
            "beta": text(self.beta),
            "case": self.case.as_dict(),
            "size": self.size,
            "members": [text(i) for i in self.members],
            "is_additive_subgroup": self.is_additive_subgroup,
            "is_subfield": self.is_subfield,
            "subfield_order": self.subfield_order,
            "predicted": self.predicted.label(),
            "match": self.match,
        }


@dataclass
class CaseStats:
    count: int = 0
    matched: int = 0
    mismatched: int = 0

    def as_dict(self) -> dict:
        return {"count": self.count, "matched": self.matched, "mismatched": self.mismatched}


@dataclass
class SweepSummary:
    pair: dict
    mode: str
    seed: int | None
    count: int | None
    total_pairs: int = 0
    cases: dict = field(default_factory=dict)
    mismatches: int = 0
    mismatch_examples: list = field(default_factory=list)
    missing_one: int = 0
    missing_base_field: int = 0
    not_additive_subgroup: int = 0
    bad_subfield_order: int = 0
    symmetry_ok: bool = True

    def as_dict(self) -> dict:
        return {
            "schema": "nearfield-sweep-summary/1",
            "pair": self.pair,
            "mode": self.mode,
            "seed": self.seed,
            "count": self.count,
            "total_pairs": self.total_pairs,
            "cases": {tag: st.as_dict() for tag, st in sorted(self.cases.items())},
            "mismatches": self.mismatches,
            "mismatch_examples": self.mismatch_examples,
            "universal_violations": {
                "missing_one": self.missing_one,
                "missing_base_field": self.missing_base_field,
                "not_additive_subgroup": self.not_additive_subgroup,
                "bad_subfield_order": self.bad_subfield_order,
            },
            "symmetry_ok": self.symmetry_ok,
        }


# -- single-pair operations ---------------------------------------------------


def classify_pair(nf: Nearfield, alpha: int, beta: int) -> PairCase:
    """Deterministic coset-pattern tag for an ordered pair."""
    if alpha == 0 or beta == 0:
        sigma = nf.field.add(alpha, beta)
        return PairCase(
            ZERO_OPERAND,
            nf.coset_of(alpha) if alpha else None,
            nf.coset_of(beta) if beta else None,
            nf.coset_of(sigma) if sigma else None,
        )
    ka = nf.coset_of(alpha)
    kb = nf.coset_of(beta)
    sigma = nf.field.add(alpha, beta)
    if sigma == 0:
        return PairCase(SUM_ZERO, ka, kb, None)
    ks = nf.coset_of(sigma)
    if ka == kb == ks:
        return PairCase(ALL_SAME, ka, kb, ks)
    if ka == kb:
        return PairCase(TWO_COINCIDE, ka, kb, ks, which_pair="alpha_beta")
    if ka == ks:
        return PairCase(TWO_COINCIDE, ka, kb, ks, which_pair="alpha_sum")
    if kb == ks:
        return PairCase(TWO_COINCIDE, ka, kb, ks, which_pair="beta_sum")
    return PairCase(ALL_DISTINCT, ka, kb, ks)


def distributor_set(nf: Nearfield, alpha: int, beta: int) -> np.ndarray:
    """Exact brute force of D(alpha, beta) over every element; sorted indices."""
    f = nf.field
    sigma = f.add(alpha, beta)
    circ_t = nf.circ_table
    members = circ_t[sigma] == f.add_table[circ_t[alpha], circ_t[beta]]
    return np.flatnonzero(members)


def _coset_offset(case: PairCase, n: int) -> int | None:
    """The coset difference d feeding the subfield-order formula, or None."""
    if case.tag in (ALL_SAME, ZERO_OPERAND):
        return 0
    if case.tag == SUM_ZERO:
        return (case.k_alpha - case.k_beta) % n  # type: ignore[operator]
    if case.tag == TWO_COINCIDE:
        if case.which_pair == "alpha_beta":
            s, t = case.k_alpha, case.k_sum
        elif case.which_pair == "alpha_sum":
            s, t = case.k_alpha, case.k_beta
        else:
            s, t = case.k_beta, case.k_alpha
        return (t - s) % n  # type: ignore[operator]
    return None


def predicted_distributor(nf: Nearfield, case: PairCase) -> Prediction:
    """Predict D(alpha, beta) from the coset pattern alone.

    One formula covers every decided case: with d the coset difference between
    the odd operand and the shared pair, gamma = gcd(l*d, l*n) and the
    distributor is the subfield of order p^gamma (d = 0 gives the whole
    carrier).  Three-way distinct patterns carry no prediction.
    """
    d = _coset_offset(case, nf.n)
    if d is None:
        return Prediction("unknown")
    gamma = gcd(nf.l * d, nf.l * nf.n)
    if gamma == nf.l * nf.n:
        return Prediction("whole_field", order=nf.size, gamma=gamma)
    return Prediction("subfield", order=nf.p**gamma, gamma=gamma)


def detect_structure(nf: Nearfield, members: np.ndarray) -> StructureInfo:
    """Closure checks on a set of element indices.

    Additive subgroup: contains 0, closed under negation and addition.
    Subfield: additionally contains 1 and is closed under field
    multiplication and inversion; the order is then p^h with h | l*n.
    """
    members = np.asarray(members, dtype=np.int64)
    if members.size == 0:
        raise ValueError("structure detection expects a nonempty set")
    f = nf.field
    mask = np.zeros(nf.size, dtype=bool)
    mask[members] = True
    grid = np.ix_(members, members)
    additive = bool(mask[0]) and bool(mask[f.neg_table[members]].all()) and bool(mask[f.add_table[grid]].all())
    subfield = False
    order = None
    if additive and mask[1]:
        nonzero = members[members != 0]
        subfield = bool(mask[f.mul_table[grid]].all()) and bool(mask[f.inv_table[nonzero]].all())
        if subfield:
            s = int(members.size)
            h = 0
            v = 1
            while v < s:
                v *= nf.p
                h += 1
            if v != s or (nf.l * nf.n) % h != 0:
                raise AssertionError(f"subfield of impossible order {s} inside F_{nf.p}^{nf.l * nf.n}")
            order = s
    return StructureInfo(additive, subfield, order)


def _match_against(nf: Nearfield, members: np.ndarray, prediction: Prediction) -> bool:
    if prediction.kind == "unknown":
        return True
    if prediction.kind == "whole_field":
        return members.size == nf.size
    expected = nf.field.frobenius_fixed(prediction.gamma)  # type: ignore[arg-type]
    return members.size == expected.size and bool((members == expected).all())


def distributor_report(nf: Nearfield, alpha: int, beta: int) -> DistributorReport:
    case = classify_pair(nf, alpha, beta)
    members = distributor_set(nf, alpha, beta)
    prediction = predicted_distributor(nf, case)
    structure = detect_structure(nf, members)
    match = _match_against(nf, members, prediction)
    return DistributorReport(
        alpha=alpha,
        beta=beta,
        case=case,
        members=tuple(int(i) for i in members),
        size=int(members.size),
        structure=structure,
        predicted=prediction,
        match=match,
    )


# -- sweep engine -----------------------------------------------------------


def sweep_csv_header() -> str:
    return CSV_SCHEMA_LINE + "\n" + ",".join(CSV_COLUMNS) + "\n"


class _SweepEngine:
    """Per-process sweep state: tables, packed subfield bitmaps, caches."""

    def __init__(self, nf: Nearfield):
        self.nf = nf
        f = nf.field
        size = nf.size
        self.add_t = f.add_table
        self.circ_t = nf.circ_table
        self.coset = nf.coset.astype(np.int64)
        self.text = [f.element_str(i) for i in range(size)]
        self.nbytes = (size + 7) // 8

        # gamma for coset offset d is l*gcd(d, n); index packed subfield
        # bitmaps by d so per-row matching is a byte compare.
        self.gamma_by_d = np.array([gcd(nf.l * d, nf.l * nf.n) for d in range(nf.n)], dtype=np.int64)
        packs = {}
        for d in range(nf.n):
            g = int(self.gamma_by_d[d])
            if g not in packs:
                fixed = f.frobenius_fixed(g) if g < nf.l * nf.n else np.arange(size)
                row = np.zeros(size, dtype=bool)
                row[fixed] = True
                packs[g] = np.packbits(row)
        self.pack_by_gamma = packs
        self.subfield_packed = np.stack([packs[int(self.gamma_by_d[d])] for d in range(nf.n)])
        self.base_field_packed = packs.get(nf.l)
        if self.base_field_packed is None:
            fixed = f.frobenius_fixed(nf.l)
            row = np.zeros(size, dtype=bool)
            row[fixed] = True
            self.base_field_packed = np.packbits(row)
        self.whole_packed = np.packbits(np.ones(size, dtype=bool))
        self.structure_cache: dict[bytes, StructureInfo] = {}

    def structure_for(self, packed_row: np.ndarray) -> StructureInfo:
        key = packed_row.tobytes()
        info = self.structure_cache.get(key)
        if info is None:
            members = np.flatnonzero(np.unpackbits(packed_row, count=self.nf.size))
            info = detect_structure(self.nf, members)
            self.structure_cache[key] = info
        return info

    def pair_block(self, alpha: np.ndarray, beta: np.ndarray):
        """Vectorized distributor computation for a block of ordered pairs.

        Returns packed membership bitmaps plus per-pair case codes, sizes,
        predictions and match/universal-property flags.
        """
        nf = self.nf
        add_t, circ_t = self.add_t, self.circ_t
        sigma = add_t[alpha, beta].astype(np.int64)
        members = circ_t[sigma] == add_t[circ_t[alpha], circ_t[beta]]
        packed = np.packbits(members, axis=1)
        sizes = members.sum(axis=1).astype(np.int64)

        ka = self.coset[alpha]
        kb = self.coset[beta]
        ks = self.coset[sigma]
        sum_zero = sigma == 0
        same_ab = (ka == kb) & ~sum_zero
        same_as = (ka == ks) & ~sum_zero
        same_bs = (kb == ks) & ~sum_zero
        all_same = same_ab & same_as
        two_ab = same_ab & ~all_same
        two_as = same_as & ~all_same
        two_bs = same_bs & ~all_same
        two = two_ab | two_as | two_bs
        distinct = ~(all_same | two | sum_zero)

        case_code = np.zeros(alpha.size, dtype=np.int64)
        case_code[two] = 1
        case_code[distinct] = 2
        case_code[sum_zero] = 3
        pair_code = np.full(alpha.size, -1, dtype=np.int64)
        pair_code[two_ab] = 0
        pair_code[two_as] = 1
        pair_code[two_bs] = 2

        d = np.zeros(alpha.size, dtype=np.int64)
        n = nf.n
        d[two_ab] = (ks[two_ab] - ka[two_ab]) % n
        d[two_as] = (kb[two_as] - ka[two_as]) % n
        d[two_bs] = (ka[two_bs] - kb[two_bs]) % n
        d[sum_zero] = (ka[sum_zero] - kb[sum_zero]) % n

        match = np.all(packed == self.subfield_packed[d], axis=1)
        match[distinct] = True
        gamma = self.gamma_by_d[d]

        has_one = (packed[:, 0] >> 6) & 1 == 1
        has_base = ~np.any(self.base_field_packed[None, :] & ~packed, axis=1)
        return packed, sizes, case_code, pair_code, d, gamma, match, has_one, has_base


def _predicted_label(nf: Nearfield, case_code: int, gamma: int) -> str:
    if case_code == 2:
        return "unknown"
    if gamma == nf.l * nf.n:
        return "whole_field"
    return f"subfield:{nf.p ** gamma}"


def _digest(packed_bytes: bytes) -> int:
    return int.from_bytes(hashlib.blake2b(packed_bytes, digest_size=8).digest(), "big")


def _pairs_for_mode(size: int, mode: str, seed: int | None, count: int | None):
    if mode == "all":
        n1 = size - 1
        total = n1 * n1

        def pair_arrays(lo: int, hi: int):
            flat = np.arange(lo, hi, dtype=np.int64)
            return 1 + flat // n1, 1 + flat % n1

        return total, pair_arrays
    rng = np.random.Generator(np.random.PCG64(seed))
    drawn = rng.integers(1, size, size=(int(count), 2), dtype=np.int64)

    def pair_arrays(lo: int, hi: int):
        return drawn[lo:hi, 0].copy(), drawn[lo:hi, 1].copy()

    return int(count), pair_arrays


def _run_chunk(engine: _SweepEngine, mode: str, seed: int | None, count: int | None, lo: int, hi: int):
    """Process pair indices [lo, hi); returns CSV text, stats and digests."""
    nf = engine.nf
    _, pair_arrays = _pairs_for_mode(nf.size, mode, seed, count)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    stats = {tag: CaseStats() for tag in _CASE_LABELS}
    examples: list[dict] = []
    missing_one = missing_base = not_subgroup = bad_order = 0
    digests = np.zeros(hi - lo, dtype=np.uint64)
    symmetry_ok = True

    for blo in range(lo, hi, _BLOCK_PAIRS):
        bhi = min(hi, blo + _BLOCK_PAIRS)
        alpha, beta = pair_arrays(blo, bhi)
        packed, sizes, case_code, pair_code, d, gamma, match, has_one, has_base = engine.pair_block(alpha, beta)
        if mode != "all":
            mirror_packed = engine.pair_block(beta, alpha)[0]
            if not (mirror_packed == packed).all():
                symmetry_ok = False
        labels = [_predicted_label(nf, int(c), int(g)) for c, g in zip(case_code, gamma)]
        for i in range(bhi - blo):
            a = int(alpha[i])
            b = int(beta[i])
            row_packed = packed[i]
            info = engine.structure_for(row_packed)
            tag = _CASE_LABELS[int(case_code[i])]
            ok = bool(match[i])
            st = stats[tag]
            st.count += 1
            if ok:
                st.matched += 1
            else:
                st.mismatched += 1
                if len(examples) < _MISMATCH_EXAMPLE_CAP:
                    examples.append(
                        {
                            "alpha": engine.text[a],
                            "beta": engine.text[b],
                            "case": tag,
                            "size": int(sizes[i]),
                            "predicted": labels[i],
                        }
                    )
            if not has_one[i]:
                missing_one += 1
            if not has_base[i]:
                missing_base += 1
            if not info.is_additive_subgroup:
                not_subgroup += 1
            if info.is_subfield and (nf.l * nf.n) % _log_order(info.order, nf.p) != 0:
                bad_order += 1
            digests[blo - lo + i] = _digest(row_packed.tobytes())
            writer.writerow(
                (
                    engine.text[a],
                    engine.text[b],
                    tag,
                    int(sizes[i]),
                    "true" if info.is_subfield else "false",
                    info.order if info.is_subfield else "",
                    labels[i],
                    "true" if ok else "false",
                )
            )
    return out.getvalue(), stats, examples, missing_one, missing_base, not_subgroup, bad_order, digests, symmetry_ok


def _log_order(order: int | None, p: int) -> int:
    h = 0
    v = 1
    while v < (order or 1):
        v *= p
        h += 1
    return max(h, 1)


_WORKER_ENGINE: _SweepEngine | None = None


def _worker_init(descriptor: dict, size_cap: int) -> None:
    global _WORKER_ENGINE
    nf = build_nearfield(
        descriptor["q"],
        descriptor["n"],
        modulus=Poly(descriptor["p"], tuple(descriptor["modulus"])),
        generator=_index_from_coeffs(descriptor["p"], descriptor["generator"]),
        size_cap=size_cap,
    )
    _WORKER_ENGINE = _SweepEngine(nf)


def _index_from_coeffs(p: int, coeffs) -> int:
    return sum(int(c) * p**i for i, c in enumerate(coeffs))


def _worker_run(args) -> tuple:
    chunk_id, mode, seed, count, lo, hi = args
    assert _WORKER_ENGINE is not None
    return (chunk_id, *_run_chunk(_WORKER_ENGINE, mode, seed, count, lo, hi))


def sweep(
    nf: Nearfield,
    sample: tuple[int, int] | None = None,
    op_budget: int = DEFAULT_OP_BUDGET,
    workers: int = 1,
    csv_out=None,
    size_cap: int | None = None,
) -> SweepSummary:
    """Sweep distributor sets over ordered pairs of nonzero elements.

    `sample=(seed, count)` draws pairs with a seeded PCG64 generator instead of
    the full grid; a full sweep must fit the operation budget (size^3 table
    lookups) or BudgetExceededError tells the caller to sample.  CSV rows are
    streamed to `csv_out` (header included) in pair order, independent of the
    worker count, so two identical runs produce byte-identical output.
    """
    size = nf.size
    if sample is None:
        mode, seed, count = "all", None, None
        if size**3 > op_budget:
            raise BudgetExceededError(
                f"full sweep needs ~{size**3} operations, over the budget {op_budget}; rerun with sampling (sample=(seed, count))"
            )
        total = (size - 1) * (size - 1)
    else:
        mode = "sample"
        seed, count = int(sample[0]), int(sample[1])
        total = count

    summary = SweepSummary(pair=nf.descriptor(), mode=mode, seed=seed, count=count, total_pairs=total)
    chunk = max(_BLOCK_PAIRS, -(-total // max(1, workers * 4)))
    bounds = [(i, lo, min(total, lo + chunk)) for i, lo in enumerate(range(0, total, chunk))]

    if workers <= 1 or len(bounds) <= 1:
        engine = _SweepEngine(nf)
        results = [(cid, *_run_chunk(engine, mode, seed, count, lo, hi)) for cid, lo, hi in bounds]
    else:
        ctx = get_context("spawn")
        cap = size_cap if size_cap is not None else size
        with ctx.Pool(workers, initializer=_worker_init, initargs=(nf.descriptor(), cap)) as pool:
            tasks = [(cid, mode, seed, count, lo, hi) for cid, lo, hi in bounds]
            results = pool.map(_worker_run, tasks)
        results.sort(key=lambda r: r[0])

    if csv_out is not None:
        csv_out.write(sweep_csv_header())
    digests = np.zeros(total, dtype=np.uint64)
    pos = 0
    for _, text, stats, examples, m1, mb, ns, bo, dg, sym in results:
        if csv_out is not None:
            csv_out.write(text)
        for tag, st in stats.items():
            agg = summary.cases.setdefault(tag, CaseStats())
            agg.count += st.count
            agg.matched += st.matched
            agg.mismatched += st.mismatched
        if len(summary.mismatch_examples) < _MISMATCH_EXAMPLE_CAP:
            summary.mismatch_examples.extend(examples[: _MISMATCH_EXAMPLE_CAP - len(summary.mismatch_examples)])
        summary.missing_one += m1
        summary.missing_base_field += mb
        summary.not_additive_subgroup += ns
        summary.bad_subfield_order += bo
        summary.symmetry_ok = summary.symmetry_ok and sym
        digests[pos : pos + dg.size] = dg
        pos += dg.size

    summary.cases = {tag: st for tag, st in summary.cases.items() if st.count}
    summary.mismatches = sum(st.mismatched for st in summary.cases.values())
    if mode == "all":
        grid = digests.reshape(size - 1, size - 1)
        summary.symmetry_ok = bool((grid == grid.T).all())
    return summary
