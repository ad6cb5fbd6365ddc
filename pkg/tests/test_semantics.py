import random
import warnings

import pytest
from hypothesis import given, strategies as st

from omlogic.errors import (MeetUndefined, NonSurjective, NotAProduct, NotASentence,
                            StructureError, TypeMismatch, VariableInGroundTerm)
from omlogic.oml import boolean_algebra, mo, two
from omlogic.poset import mk_poset
from omlogic.semantics import (Interpretation, Structure, eval_sentence, eval_term,
                               eval_wff, factor_structures, holds, is_irreducible_structure,
                               is_model, reachable_indices)
from omlogic.syntax import (Forall, Language, Var, App, free_vars, parse_wff,
                            random_wff, substitute)
from omlogic.tvalgebra import AlgType, mk_algebra, product
from oracles import naive_eval, naive_meet

L = Language({"P": 1, "Q": 1}, {"c": 0, "f": 1},
             (("and", 2), ("or", 2), ("not", 1)), negation="not")
L2 = Language({"P": 1, "R": 2}, {"c": 0},
              (("and", 2), ("or", 2), ("not", 1)), negation="not")


def structure(alg, p, q=None, universe=("m1", "m2"), f=None, c="m1", **kw):
    q = q or p
    fn = {"c": {(): c}, "f": f or {(m,): m for m in universe}}
    return Structure(L, Interpretation(list(universe), fn), alg,
                     {"P": {(m,): v for m, v in zip(universe, p)},
                      "Q": {(m,): v for m, v in zip(universe, q)}}, **kw)


def w(text, lang=L):
    return parse_wff(lang, text)


def test_eval_term():
    i = Interpretation(["m1", "m2"], {"c": {(): "m1"}, "f": {("m1",): "m2", ("m2",): "m1"}})
    assert eval_term(i, App("m2")) == "m2"
    assert eval_term(i, App("f", (App("c"),))) == "m2"
    with pytest.raises(VariableInGroundTerm):
        eval_term(i, App("f", (Var("x"),)))


def test_singleton_forall():
    s = structure(two(), ["1"], universe=("m",), c="m", allow_nonsurjective=True)
    assert eval_wff(s, w("forall x. P(x)")) == eval_sentence(s, w("P(m)", s.lang_m)) == "1"


def test_mo2_forall_is_meet():
    s = structure(mo(2), ["a", "a'"], ["b", "b'"])
    assert eval_sentence(s, w("forall x. P(x)")) == "0"
    assert eval_sentence(s, w("forall x. P(x) | Q(x)")) == "1"


def test_boolean_exists():
    s = structure(two(), ["0", "1"])
    assert eval_sentence(s, w("exists x. P(x)")) == "1"


def test_open_wff_is_closed_by_meet():
    s = structure(mo(2), ["a", "b"], ["a'", "b'"])
    assert eval_wff(s, w("P(x)")) == "0"
    assert eval_wff(s, w("P(c)")) == eval_sentence(s, w("P(c)")) == "a"
    with pytest.raises(NotASentence):
        eval_sentence(s, w("P(x)"))


def test_holds_examples():
    b = structure(two(), ["0", "1"])
    assert holds(b, w("P(c) | ~P(c)"))
    m = structure(mo(2), ["a", "b"], ["a'", "b'"])
    assert holds(m, w("P(c) | ~P(c)"))
    assert not holds(b, w("P(c)"))


def test_is_model_examples():
    s = structure(two(), ["1", "1"], ["0", "1"])
    assert is_model(s, [])
    assert is_model(s, [w("forall x. P(x)")])
    assert not is_model(s, [w("Q(x)")])


def test_structure_validation():
    with pytest.raises(NonSurjective):
        structure(mo(2), ["a", "a"])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        structure(mo(2), ["a", "a"], allow_nonsurjective=True)
    assert caught
    with pytest.raises(StructureError):
        Interpretation([], {})
    with pytest.raises(TypeMismatch):
        Structure(Language({"P": 0}, {}, (("not", 1),)), Interpretation(["m"], {}), two(),
                  {"P": {(): "1"}})
    with pytest.raises(StructureError):
        structure(two(), ["0", "1"], f={("m1",): "m1"})


def test_meet_undefined_in_non_lattice():
    # two maximal-ish middle points with no greatest common lower bound below a top
    p = mk_poset(["l1", "l2", "u1", "u2", "t"],
                 [("l1", "u1"), ("l2", "u1"), ("l1", "u2"), ("l2", "u2"), ("u1", "t"), ("u2", "t")])
    typ = AlgType((1,))
    lang = Language({"P": 1}, {}, (("id", 1),))
    alg = mk_algebra(p, typ, [{(e,): e for e in p.elements}], ["id"])
    base = {"P": {("m1",): "u1", ("m2",): "u2", ("m3",): "l1", ("m4",): "l2", ("m5",): "t"}}
    s = Structure(lang, Interpretation(["m1", "m2", "m3", "m4", "m5"], {}), alg, base)
    with pytest.raises(MeetUndefined):
        eval_wff(s, parse_wff(lang, "forall x. P(x)"))


def test_factor_structures():
    p = product(mo(2), two())
    s = structure(p, ["(a|1)", "(b|0)"], ["(a'|0)", "(1|1)"])
    f1, f2 = factor_structures(s)
    assert f1.atomic_base["P"][("m1",)] == "a"
    assert f2.atomic_base["P"][("m1",)] == "1"
    with pytest.raises(NotAProduct):
        factor_structures(structure(mo(2), ["a", "b"]))


def test_irreducible_structure():
    assert is_irreducible_structure(structure(mo(2), ["a", "b"]))
    assert not is_irreducible_structure(structure(boolean_algebra(2), ["(1|0)", "(0|1)"]))
    assert is_irreducible_structure(structure(two(), ["0", "1"]))


def random_structure(rng, alg, lang=L2, size=None):
    size = size or rng.randint(1, 3)
    universe = [f"m{i}" for i in range(1, size + 1)]
    els = list(alg.elements)
    base = {"P": {(m,): rng.choice(els) for m in universe},
            "R": {(a, b): rng.choice(els) for a in universe for b in universe}}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return Structure(lang, Interpretation(universe, {"c": {(): universe[0]}}), alg, base,
                         allow_nonsurjective=True)


ALGEBRAS = [two(), mo(2), boolean_algebra(2), product(mo(2), two())]


@given(st.integers(0, 10**6), st.sampled_from(range(len(ALGEBRAS))))
def test_evaluator_matches_naive_recursion(seed, k):
    rng = random.Random(seed)
    s = random_structure(rng, ALGEBRAS[k])
    for _ in range(10):
        phi = random_wff(L2, rng, 3, constants=["c"] + list(s.universe))
        env = {v: rng.choice(s.universe) for v in free_vars(phi)}
        closed = substitute(phi, env)
        assert eval_sentence(s, closed) == naive_eval(s, closed)


@given(st.integers(0, 10**6), st.sampled_from(range(len(ALGEBRAS))))
def test_forall_is_meet_of_instances(seed, k):
    rng = random.Random(seed)
    s = random_structure(rng, ALGEBRAS[k])
    rel = set(s.algebra.poset.relation())
    for _ in range(10):
        body = random_wff(L2, rng, 2, variables=("x",), constants=["c"])
        vals = {eval_sentence(s, substitute(body, {"x": m})) for m in s.universe}
        assert eval_sentence(s, Forall("x", body)) == naive_meet(rel, s.algebra.elements, vals)


@given(st.integers(0, 10**6), st.sampled_from(range(len(ALGEBRAS))))
def test_closure_order_irrelevant(seed, k):
    rng = random.Random(seed)
    s = random_structure(rng, ALGEBRAS[k])
    phi = random_wff(L2, rng, 3, constants=["c"])
    fv = sorted(free_vars(phi))
    forward, backward = phi, phi
    for v in fv:
        forward = Forall(v, forward)
    for v in reversed(fv):
        backward = Forall(v, backward)
    assert eval_sentence(s, forward) == eval_sentence(s, backward) == eval_wff(s, phi)


@given(st.integers(0, 10**6), st.sampled_from(range(len(ALGEBRAS))))
def test_surjectivity_certificate(seed, k):
    rng = random.Random(seed)
    s = random_structure(rng, ALGEBRAS[k])
    reach = reachable_indices(s)
    if len(reach) == s.algebra.size:
        Structure(s.lang, s.interp, s.algebra, s.atomic_base)
    else:
        with pytest.raises(NonSurjective):
            Structure(s.lang, s.interp, s.algebra, s.atomic_base)
    # every value a sentence takes is certified reachable
    for _ in range(10):
        phi = random_wff(L2, rng, 3, constants=["c"] + list(s.universe))
        assert s.algebra.index[eval_wff(s, phi)] in reach
