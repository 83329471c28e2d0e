import itertools

import pytest

from nearfield.mapnr import (
    Group,
    InvalidGroupError,
    TooLargeError,
    all_maps,
    builtin_group,
    constant_map,
    distributive_maps,
    endomorphisms,
    identity_map,
    load_group,
    map_add,
    map_compose,
    verify_left_nearring,
    zero_map,
)


def cyclic_table(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------


def test_builtin_groups_validate():
    for name, order, abelian in (("Z2", 2, True), ("Z3", 3, True), ("Z4", 4, True), ("Z5", 5, True), ("V4", 4, True)):
        g = builtin_group(name)
        assert g.order == order
        assert g.abelian == abelian
        assert g.zero == 0


def test_unknown_builtin_rejected():
    with pytest.raises(ValueError):
        builtin_group("Q8")


def test_invalid_tables_rejected():
    with pytest.raises(InvalidGroupError):
        Group("bad", [[0, 1], [0, 1]])  # no inverse for 1
    with pytest.raises(InvalidGroupError):
        Group("bad", [[0, 1, 2], [1, 2, 0]])  # not square


def test_load_group_from_dict_and_file(tmp_path):
    g = load_group({"order": 3, "add": cyclic_table(3), "name": "C3"})
    assert g.order == 3 and g.name == "C3"
    path = tmp_path / "group.json"
    path.write_text('{"order": 2, "add": [[0, 1], [1, 0]]}')
    assert load_group(str(path)).order == 2


def test_nonabelian_group_gives_nonabelian_map_addition():
    # S3 as permutation composition: pointwise map addition inherits it
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(q[p[k]] for k in range(3))] for q in perms] for p in perms]
    s3 = Group("S3", table)
    assert not s3.abelian
    a = next(i for i in range(6) if table[i][1] != table[1][i])
    f, g = constant_map(s3, a), constant_map(s3, 1)
    assert map_add(s3, f, g) != map_add(s3, g, f)


# ---------------------------------------------------------------------------
# map enumeration and operations
# ---------------------------------------------------------------------------


def test_all_maps_counts():
    assert len(all_maps(builtin_group("Z2"))) == 4
    assert len(all_maps(builtin_group("Z3"))) == 27
    assert len(all_maps(builtin_group("Z4"))) == 256


def test_all_maps_too_large():
    z7 = Group("Z7", cyclic_table(7))
    with pytest.raises(TooLargeError):
        all_maps(z7)


def test_map_add_zero_is_identity():
    g = builtin_group("Z3")
    z = zero_map(g)
    for f in all_maps(g):
        assert map_add(g, f, z) == f
        assert map_add(g, z, f) == f


def test_compose_with_identity():
    g = builtin_group("Z4")
    ident = identity_map(g)
    for f in ((0, 0, 0, 0), (1, 2, 3, 0), (3, 3, 1, 2)):
        assert map_compose(g, f, ident) == f
        assert map_compose(g, ident, f) == f


def test_constant_maps_absorb_under_composition():
    g = builtin_group("Z3")
    for a in range(3):
        for c in range(3):
            assert map_compose(g, constant_map(g, a), constant_map(g, c)) == constant_map(g, c)


def test_right_action_composition_order():
    g = builtin_group("Z3")
    f = (0, 0, 1)
    h = (1, 2, 0)
    # (x)(f o h) = ((x)f)h: x=0 -> h[0]=1, x=1 -> h[0]=1, x=2 -> h[1]=2
    assert map_compose(g, f, h) == (1, 1, 2)


# ---------------------------------------------------------------------------
# near-ring verification
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z4", "V4"])
def test_left_nearring_exhaustive(name):
    g = builtin_group(name)
    rep = verify_left_nearring(g)
    assert rep.mode == "exhaustive"
    assert rep.plus_is_group and rep.plus_abelian
    assert rep.compose_is_semigroup
    assert rep.left_distributive
    assert not rep.right_distributive
    f, h, k = rep.right_counterexample
    lhs = map_compose(g, map_add(g, f, h), k)
    rhs = map_add(g, map_compose(g, f, k), map_compose(g, h, k))
    assert lhs != rhs


def test_constant_counterexample_structure():
    g = builtin_group("Z3")
    rep = verify_left_nearring(g)
    f, h, k = rep.right_counterexample
    assert len(set(f)) == len(set(h)) == len(set(k)) == 1  # constants
    c = k[0]
    assert c != 0
    lhs = map_compose(g, map_add(g, f, h), k)
    assert lhs == constant_map(g, c)
    rhs = map_add(g, map_compose(g, f, k), map_compose(g, h, k))
    assert rhs == constant_map(g, g.add[c, c])
    assert g.add[c, c] != c  # c + c != c because c != 0


def test_trivial_group_right_distributive():
    g = Group("Z1", [[0]])
    rep = verify_left_nearring(g)
    assert rep.right_distributive and rep.right_counterexample is None
    assert rep.map_count == 1


def test_z5_sampled_mode():
    g = builtin_group("Z5")
    rep = verify_left_nearring(g, seed=3, trials=200_000)
    assert rep.mode == "sampled"
    assert rep.plus_is_group and rep.left_distributive and not rep.right_distributive


# ---------------------------------------------------------------------------
# distributive maps
# ---------------------------------------------------------------------------


def test_distributive_maps_z2():
    g = builtin_group("Z2")
    assert distributive_maps(g) == [(0, 0), (0, 1)]  # zero map and identity


def test_distributive_maps_z3_are_scalings():
    g = builtin_group("Z3")
    assert distributive_maps(g) == [(0, 0, 0), (0, 1, 2), (0, 2, 1)]  # x -> k*x


def test_distributive_maps_equal_endomorphisms():
    for name, expected in (("Z2", 2), ("Z3", 3), ("Z4", 4), ("V4", 16), ("Z5", 5)):
        g = builtin_group(name)
        dmaps = distributive_maps(g)
        assert len(dmaps) == expected
        assert dmaps == endomorphisms(g)


def test_distributive_maps_closed_and_contain_zero():
    for name in ("Z3", "Z4", "V4"):
        g = builtin_group(name)
        dmaps = distributive_maps(g)
        dset = set(dmaps)
        assert zero_map(g) in dset
        for f in dmaps:
            for h in dmaps:
                assert map_add(g, f, h) in dset
                assert map_compose(g, f, h) in dset


def test_distributive_maps_are_pointwise_additive():
    g = builtin_group("Z4")
    for h in distributive_maps(g):
        for u in range(4):
            for v in range(4):
                assert h[g.add[u, v]] == g.add[h[u], h[v]]


def test_map_count_formula():
    for name in ("Z2", "Z3", "Z4", "V4"):
        g = builtin_group(name)
        assert len(all_maps(g)) == g.order**g.order
