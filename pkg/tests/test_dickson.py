import numpy as np
import pytest

from nearfield import NotADicksonPairError, Poly, build_nearfield
from nearfield.gf import DomainError

from .oracles import (
    TinyField,
    TinyNearfield,
    brute_center,
    brute_distributive,
    brute_generalized_center,
)

REF_MODULUS = Poly(5, (2, 0, 0, 0, 1))
REF_GENERATOR = 7  # x + 2


@pytest.fixture(scope="module")
def nf32():
    return build_nearfield(3, 2)


@pytest.fixture(scope="module")
def nf54():
    return build_nearfield(5, 4, modulus=REF_MODULUS, generator=REF_GENERATOR)


@pytest.fixture(scope="module")
def tiny32(nf32):
    field = TinyField(3, 2, nf32.field.modulus.coeffs, nf32.field.generator)
    return TinyNearfield(field, 3, 2)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def test_build_rejects_invalid_pairs():
    with pytest.raises(NotADicksonPairError):
        build_nearfield(6, 2)
    with pytest.raises(NotADicksonPairError):
        build_nearfield(3, 4)


def test_nf32_coset_partition(nf32):
    counts = [int((nf32.coset == k).sum()) for k in range(2)]
    assert counts == [4, 4]
    assert nf32.coset_of(nf32.field.generator) == 1
    assert nf32.coset_of(1) == 0


def test_nf54_coset_partition(nf54):
    counts = [int((nf54.coset == k).sum()) for k in range(4)]
    assert counts == [156] * 4
    # H contains exactly the powers of g^4
    f = nf54.field
    h_members = {f.power(f.generator, 4 * e) for e in range(156)}
    assert {a for a in range(1, 625) if nf54.coset_of(a) == 0} == h_members


def test_degenerate_n1_is_the_field():
    nf = build_nearfield(5, 1)
    assert nf.size == 5
    assert (nf.circ_table == nf.field.mul_table).all()


def test_descriptor_roundtrip(nf54):
    d = nf54.descriptor()
    assert d["size"] == 625 and d["q"] == 5 and d["n"] == 4 and d["l"] == 1
    again = build_nearfield(d["q"], d["n"], modulus=Poly(d["p"], tuple(d["modulus"])), generator=REF_GENERATOR)
    assert (again.circ_table == nf54.circ_table).all()


# ---------------------------------------------------------------------------
# twisted multiplication
# ---------------------------------------------------------------------------


def test_circ_zero_and_identity_laws(nf32, nf54):
    for nf in (nf32, nf54):
        size = nf.size
        assert (nf.circ_table[0] == 0).all()
        assert (nf.circ_table[:, 0] == 0).all()
        assert (nf.circ_table[1] == np.arange(size)).all()
        assert (nf.circ_table[:, 1] == np.arange(size)).all()


def test_circ_agrees_with_oracle_everywhere(nf32, tiny32):
    for a in range(9):
        for b in range(9):
            assert nf32.circ(a, b) == tiny32.circ(a, b)


def test_twist_rule_per_coset(nf54):
    f = nf54.field
    x2 = f.element_from_coeffs((0, 0, 1))
    lam = f.element_from_coeffs((1, 0, 1))
    assert nf54.coset_of(x2) == 2
    assert nf54.coset_of(lam) == 2
    # left operand in g^2 H twists by the 25th power
    assert nf54.circ(x2, lam) == f.mul(x2, f.frobenius(lam, 2))
    assert f.element_str(nf54.circ(x2, lam)) == "3+x^2"
    # one row per coset: a in g^k H multiplies by b^(5^k)
    rng = np.random.default_rng(5)
    for a in rng.integers(1, 625, size=12):
        k = nf54.coset_of(int(a))
        for b in rng.integers(0, 625, size=8):
            assert nf54.circ(int(a), int(b)) == f.mul(int(a), f.frobenius(int(b), k))


def test_circ_pow_left_associated(nf54):
    g = nf54.field.generator
    acc = 1
    for e in range(1, 6):
        acc = nf54.circ(acc, g)
        assert nf54.circ_pow(g, e) == acc
    assert nf54.circ_pow(g, 0) == 1


# ---------------------------------------------------------------------------
# axiom verification
# ---------------------------------------------------------------------------


def test_axiom_report_nf32_exhaustive(nf32):
    rep = nf32.verify_left_nearfield(mode="exhaustive")
    assert rep.additive_abelian
    assert rep.multiplicative_group
    assert rep.left_distributive
    assert not rep.right_distributive
    a, b, c = rep.right_counterexample
    f = nf32.field
    assert nf32.circ(f.add(b, c), a) != f.add(nf32.circ(b, a), nf32.circ(c, a))


def test_axiom_report_field_case_right_distributive():
    nf = build_nearfield(5, 1)
    rep = nf.verify_left_nearfield(mode="exhaustive")
    assert rep.right_distributive and rep.right_counterexample is None


def test_axiom_report_sampled(nf54):
    rep = nf54.verify_left_nearfield(mode="sampled", seed=7, trials=200_000)
    assert rep.additive_abelian and rep.multiplicative_group and rep.left_distributive
    assert not rep.right_distributive
    assert rep.mode == "sampled" and rep.seed == 7 and rep.trials == 200_000
    again = nf54.verify_left_nearfield(mode="sampled", seed=7, trials=200_000)
    assert again.right_counterexample == rep.right_counterexample


def test_exhaustive_mode_rejected_for_large_fields(nf54):
    with pytest.raises(ValueError):
        nf54.verify_left_nearfield(mode="exhaustive")


def test_left_distributivity_holds_on_all_triples_nf32(nf32):
    f = nf32.field
    for a in range(9):
        for b in range(9):
            for c in range(9):
                assert nf32.circ(a, f.add(b, c)) == f.add(nf32.circ(a, b), nf32.circ(a, c))


# ---------------------------------------------------------------------------
# distributive elements, center
# ---------------------------------------------------------------------------


def test_distributive_elements_nf32(nf32, tiny32):
    got = nf32.distributive_elements().tolist()
    assert got == brute_distributive(tiny32)
    assert got == [0, 1, 2]


def test_distributive_elements_nf54(nf54):
    got = nf54.distributive_elements()
    assert got.tolist() == [0, 1, 2, 3, 4]
    assert (got == nf54.field.frobenius_fixed(nf54.l)).all()


def test_distributive_elements_sizes():
    for q, n in ((7, 2), (4, 3)):
        nf = build_nearfield(q, n)
        got = nf.distributive_elements()
        assert got.size == q
        assert (got == nf.field.frobenius_fixed(nf.l)).all()


def test_distributive_elements_field_case_is_everything():
    nf = build_nearfield(5, 1)
    assert nf.distributive_elements().tolist() == list(range(5))


def test_center_nf32(nf32, tiny32):
    got = nf32.center().tolist()
    assert got == brute_center(tiny32)
    assert got == [0, 1, 2]


def test_generalized_center_nf32(nf32, tiny32):
    dset = brute_distributive(tiny32)
    assert nf32.generalized_center().tolist() == brute_generalized_center(tiny32, dset)


def test_center_contained_in_distributor_and_gc(nf32, nf54):
    for nf in (nf32, nf54):
        c = set(nf.center().tolist())
        d = set(nf.distributive_elements().tolist())
        gc = set(nf.generalized_center().tolist())
        assert c <= d
        assert c <= gc


# ---------------------------------------------------------------------------
# skewfield / vector space / presentation
# ---------------------------------------------------------------------------


def test_distributor_skewfield(nf32, nf54):
    assert nf32.verify_distributor_skewfield()
    assert nf54.verify_distributor_skewfield()
    nf72 = build_nearfield(7, 2)
    assert nf72.distributive_elements().size == 7
    assert nf72.verify_distributor_skewfield()


def test_distributor_is_commutative(nf54):
    d = nf54.distributive_elements()
    sub = nf54.circ_table[np.ix_(d, d)]
    assert (sub == sub.T).all()


def test_vector_space(nf32, nf54):
    assert nf32.verify_vector_space()
    assert nf54.verify_vector_space()


def test_dimension_counts(nf32, nf54):
    for nf in (nf32, nf54):
        assert nf.size == nf.distributive_elements().size ** nf.n


def test_presentation_nf54(nf54):
    rep = nf54.verify_presentation()
    assert rep.m_exp == 156
    assert rep.t_exp == 39
    assert rep.relations_hold


def test_presentation_nf32(nf32):
    rep = nf32.verify_presentation()
    assert rep.m_exp == 4
    assert rep.t_exp == 2
    assert rep.relations_hold


def test_presentation_degenerate_field():
    nf = build_nearfield(5, 1)
    rep = nf.verify_presentation()
    assert rep.m_exp == 4 and rep.t_exp == 1
    assert rep.relations_hold


# ---------------------------------------------------------------------------
# misc surface
# ---------------------------------------------------------------------------


def test_coset_of_zero_raises(nf32):
    with pytest.raises(DomainError):
        nf32.coset_of(0)


def test_axiom_report_serializes(nf32):
    rep = nf32.verify_left_nearfield()
    d = rep.as_dict(nf32)
    assert set(d["right_counterexample"]) == {"a", "b", "c"}
    assert isinstance(d["right_counterexample"]["a"], str)
