import pytest

from conftest import omls
from omlogic.errors import CapExceeded, NotAnOml, NotCentral, TrivialCentralElement
from omlogic.oml import (benzene, boolean_algebra, boolean_checks, center,
                         check_boolean, check_oml, compatible, decompose,
                         enumerate_omls, enumerate_ortholattices, factor_by_central,
                         is_irreducible_oml, mo, one, oml_view, two)
from omlogic.poset import Poset
from omlogic.tvalgebra import (OML_TYPE, find_isomorphism, is_irreducible_bruteforce,
                               is_isomorphism, mk_algebra, product)
from oracles import naive_center, naive_compatible

# sizes of all OMLs with at most 10 elements, up to isomorphism
OML_SIZES_10 = [1, 2, 4, 6, 8, 8, 10, 10]
ORTHOLATTICES_10 = 25


def test_check_oml_examples():
    assert check_oml(two()).ok
    assert check_oml(mo(2)).ok
    r = check_oml(benzene())
    assert r.ortholattice and not r.ok
    assert r.axioms["v"].counterexample == ("a", "b")
    assert list(r.failures()) == ["v"]


def test_check_boolean_examples():
    assert check_boolean(product(two(), two()))
    assert not check_boolean(mo(2))
    assert check_boolean(one())
    with pytest.raises(NotAnOml):
        check_boolean(benzene())


def test_compatible_examples():
    m = oml_view(mo(2))
    assert compatible(m, "a", "a")
    assert not compatible(m, "a", "b")
    assert all(compatible(m, x, "1") for x in m.elements)


def test_center_examples():
    b = boolean_algebra(3)
    assert center(b) == list(b.elements)
    assert center(mo(2)) == ["0", "1"]
    p = product(mo(2), two())
    assert sorted(center(p)) == sorted(["(0|0)", "(0|1)", "(1|0)", "(1|1)"])


def test_irreducible_examples():
    assert is_irreducible_oml(mo(2))
    assert not is_irreducible_oml(product(two(), two()))
    assert is_irreducible_oml(two())
    assert is_irreducible_oml(one())


def test_factor_by_central():
    l1, l2, g = factor_by_central(product(two(), two()), "(1|0)")
    assert l1.size == l2.size == 2 and is_isomorphism(g)
    p = product(mo(2), two())
    l1, l2, g = factor_by_central(p, "(1|0)")
    assert find_isomorphism(l1.algebra, mo(2)) is not None
    assert find_isomorphism(l2.algebra, two()) is not None
    with pytest.raises(NotCentral):
        factor_by_central(mo(2), "a")
    with pytest.raises(TrivialCentralElement):
        factor_by_central(mo(2), "1")


def test_decompose_examples():
    factors, g = decompose(boolean_algebra(3))
    assert [f.size for f in factors] == [2, 2, 2] and is_isomorphism(g)
    factors, g = decompose(mo(2))
    assert [f.size for f in factors] == [6]
    factors, g = decompose(one())
    assert factors == [] and g.target.size == 1


def test_enumeration_examples():
    assert [v.size for v in enumerate_omls(2)] == [1, 2]
    four = enumerate_omls(4)
    assert any(find_isomorphism(v.algebra, boolean_algebra(2)) for v in four)
    assert all(check_boolean(v) for v in four)
    assert any(find_isomorphism(v.algebra, mo(2)) for v in enumerate_omls(6))
    with pytest.raises(CapExceeded):
        enumerate_omls(12)


def test_enumeration_counts():
    assert [v.size for v in omls(10)] == OML_SIZES_10
    assert len(enumerate_ortholattices(10)) == ORTHOLATTICES_10


def test_enumerated_are_pairwise_non_isomorphic():
    vs = omls(10)
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            assert find_isomorphism(vs[i].algebra, vs[j].algebra) is None


def test_compatibility_symmetric_and_matches_oracle():
    for v in omls(10):
        a = v.algebra
        for x in a.elements:
            for y in a.elements:
                c = compatible(v, x, y)
                assert c == compatible(v, y, x) == naive_compatible(a, x, y)


def test_center_is_boolean_subalgebra():
    for v in omls(10):
        a = v.algebra
        z = center(v)
        assert z == naive_center(a)
        assert v.bottom in z and v.top in z
        for x in z:
            assert v.neg(x) in z
            for y in z:
                assert v.meet(x, y) in z and v.join(x, y) in z
        sub = Poset(z, [(x, y) for x in z for y in z if a.leq(x, y)])
        tables = [{(x, y): v.meet(x, y) for x in z for y in z},
                  {(x, y): v.join(x, y) for x in z for y in z},
                  {(x,): v.neg(x) for x in z}]
        assert check_boolean(mk_algebra(sub, OML_TYPE, tables, a.names))


def test_center_criterion_matches_bruteforce_up_to_ten():
    for v in omls(10):
        assert is_irreducible_oml(v) == is_irreducible_bruteforce(v.algebra)


def test_boolean_checks_agree():
    for v in omls(10):
        compat, distrib = boolean_checks(v.algebra)
        assert compat == distrib


def test_decompose_independent_of_split_choice():
    a = product(product(mo(2), two()), two())
    sizes = sorted(f.size for f in decompose(a)[0])
    for c in center(a):
        if c in (a.top, "((0|0)|0)"):
            continue
        l1, l2, _ = factor_by_central(a, c)
        again = sorted(f.size for l in (l1, l2) for f in decompose(l)[0])
        assert again == sizes == [2, 2, 6]
