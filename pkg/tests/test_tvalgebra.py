import pytest
from hypothesis import given, strategies as st

from conftest import omls
from omlogic.errors import (ArityMismatch, BadType, CarrierTooLarge, NonTotalTable,
                            NoTopElement, NotAProduct, OutputNotInCarrier, TypeMismatch)
from omlogic.oml import benzene, boolean_algebra, mo, one, two
from omlogic.poset import mk_poset
from omlogic.tvalgebra import (OML_TYPE, AlgType, AlgebraMap, find_isomorphism,
                               identity_map, is_homomorphism, is_irreducible_bruteforce,
                               is_isomorphism, mk_algebra, power, product, projection,
                               trivial)


def std_two_tables():
    return [
        {(x, y): str(min(int(x), int(y))) for x in "01" for y in "01"},
        {(x, y): str(max(int(x), int(y))) for x in "01" for y in "01"},
        {("0",): "1", ("1",): "0"},
    ]


def test_alg_type_must_be_non_increasing():
    AlgType((2, 2, 1))
    AlgType(())
    with pytest.raises(BadType):
        AlgType((1, 2))


def test_one_and_two_from_tables():
    p1 = mk_poset(["1"], [])
    a1 = mk_algebra(p1, OML_TYPE, [{("1", "1"): "1"}, {("1", "1"): "1"}, {("1",): "1"}],
                    ["meet", "join", "neg"])
    assert a1.size == 1
    a2 = mk_algebra(mk_poset(["0", "1"], [("0", "1")]), OML_TYPE, std_two_tables(),
                    ["meet", "join", "neg"])
    assert a2.top == "1"
    assert find_isomorphism(a2, two()) is not None
    assert find_isomorphism(a1, one()) is not None


def test_table_validation():
    p = mk_poset(["0", "1"], [("0", "1")])
    t = std_two_tables()
    t[2] = {("0",): "1"}
    with pytest.raises(NonTotalTable):
        mk_algebra(p, OML_TYPE, t)
    t = std_two_tables()
    t[2] = {("0",): "1", ("1",): "2"}
    with pytest.raises(OutputNotInCarrier):
        mk_algebra(p, OML_TYPE, t)
    with pytest.raises(ArityMismatch):
        mk_algebra(p, OML_TYPE, std_two_tables()[:2])
    with pytest.raises(NoTopElement):
        mk_algebra(mk_poset(["x", "y"], []), AlgType(()), [])


def test_trivial_types():
    assert trivial(OML_TYPE).size == 1
    empty = trivial(AlgType(()))
    assert empty.size == 1 and empty.typ.arities == ()


def test_product_basics():
    p = product(two(), two())
    assert p.size == 4
    assert p.top == "(1|1)"
    assert p.poset.meet_idx(p.index["(1|0)"], p.index["(0|1)"]) == p.index["(0|0)"]
    assert projection(p, 1)("(1|0)") == "1"
    assert projection(p, 2)("(1|0)") == "0"
    with pytest.raises(TypeMismatch):
        product(two(), trivial(AlgType(())))
    with pytest.raises(NotAProduct):
        projection(mo(2), 1)


def test_product_with_one_is_isomorphic():
    for a in (two(), mo(2), boolean_algebra(2)):
        assert find_isomorphism(product(a, one()), a) is not None
        assert find_isomorphism(product(one(), a), a) is not None


def test_projections_of_mo2_times_two():
    p = product(mo(2), two())
    for i in (1, 2):
        assert is_homomorphism(projection(p, i))
        assert is_homomorphism(projection(p, i), "subsets")


def test_homomorphism_examples():
    for a in (two(), mo(2), benzene()):
        assert is_homomorphism(identity_map(a))
    t = two()
    assert not is_homomorphism(AlgebraMap(t, t, {"0": "1", "1": "0"}))


def test_find_isomorphism_examples():
    square = mk_poset(["o", "p", "q", "t"], [("o", "p"), ("o", "q"), ("p", "t"), ("q", "t")])
    els = square.elements
    meet_t = {(x, y): els[square.meet_idx(square.idx(x), square.idx(y))] for x in els for y in els}
    join_t = {(x, y): els[square.join_idx(square.idx(x), square.idx(y))] for x in els for y in els}
    neg_t = {("o",): "t", ("t",): "o", ("p",): "q", ("q",): "p"}
    built = mk_algebra(square, OML_TYPE, [meet_t, join_t, neg_t], ["meet", "join", "neg"])
    g = find_isomorphism(product(two(), two()), built)
    assert g is not None and is_isomorphism(g)
    assert find_isomorphism(two(), one()) is None
    a = mo(2)
    g = find_isomorphism(a, a)
    assert g is not None and is_isomorphism(g)
    assert find_isomorphism(mo(2), boolean_algebra(2)) is None


def test_find_isomorphism_with_fixed_points():
    a = mo(2)
    g = find_isomorphism(a, a, {"a": "b"})
    assert g is not None and g("a") == "b" and g("a'") == "b'"
    assert find_isomorphism(a, a, {"a": "0"}) is None


def test_bruteforce_irreducibility_examples():
    assert is_irreducible_bruteforce(two())
    assert not is_irreducible_bruteforce(product(two(), two()))
    assert is_irreducible_bruteforce(one())
    assert is_irreducible_bruteforce(mo(2))
    assert not is_irreducible_bruteforce(product(mo(2), two()))
    with pytest.raises(CarrierTooLarge):
        is_irreducible_bruteforce(power(two(), 4))


def test_bruteforce_irreducibility_beyond_omls():
    # a 3-chain with min/max and a fixed-point-free-ish unary op is not a product of anything
    p = mk_poset(["0", "h", "1"], [("0", "h"), ("h", "1")])
    order = {"0": 0, "h": 1, "1": 2}
    els = list(order)
    tables = [{(x, y): min(x, y, key=order.get) for x in els for y in els},
              {(x, y): max(x, y, key=order.get) for x in els for y in els},
              {("0",): "1", ("h",): "h", ("1",): "0"}]
    kleene = mk_algebra(p, OML_TYPE, tables, ["meet", "join", "neg"])
    assert is_irreducible_bruteforce(kleene)
    assert not is_irreducible_bruteforce(product(kleene, two()))


pool = st.sampled_from([two(), mo(2), boolean_algebra(2), one(), benzene()])


@given(pool, pool)
def test_product_commutes(a, b):
    assert find_isomorphism(product(a, b), product(b, a)) is not None


@given(pool, pool)
def test_projections_are_homomorphisms(a, b):
    p = product(a, b)
    assert is_homomorphism(projection(p, 1))
    assert is_homomorphism(projection(p, 2))


@given(st.sampled_from(range(len(omls(8)))), st.sampled_from(range(len(omls(8)))))
def test_isomorphism_search_symmetric(i, j):
    a, b = omls(8)[i].algebra, omls(8)[j].algebra
    assert (find_isomorphism(a, b) is None) == (find_isomorphism(b, a) is None)
    assert (find_isomorphism(a, b) is not None) == (i == j)
