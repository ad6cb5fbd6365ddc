"""Acceptance suite: one PASS/FAIL line per criterion, each within its time budget.

Run with ``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
import warnings
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import DATA, omls
from omlogic import formats
from omlogic.deduction import check_proof
from omlogic.harness import (TrialConfig, algebra_pool, check_compositionality,
                             random_language, random_structure, run_trials)
from omlogic.oml import (boolean_algebra, center, check_boolean, decompose, enumerate_omls,
                         is_irreducible_oml, iterated_product, mo)
from omlogic.semantics import (check_transport, eval_wff, is_model, sample_sentences,
                               transport)
from omlogic.syntax import Language, parse_wff, print_wff, random_wff
from omlogic.tvalgebra import (find_isomorphism, is_homomorphism, is_irreducible_bruteforce,
                               product, projection)

RESULTS = []


@contextmanager
def criterion(name, budget):
    start = time.perf_counter()
    status, detail = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if elapsed > budget:
            detail = f" over budget of {budget:g}s"
        else:
            status = "PASS"
    except AssertionError as e:
        detail = f" {e}".rstrip()
        raise
    finally:
        elapsed = time.perf_counter() - start
        line = f"{status} {name} ({elapsed:.2f}s){detail}"
        RESULTS.append(line)
        print(line)
    assert elapsed <= budget, f"{name} took {elapsed:.1f}s"


def test_boolean_irreducibility():
    with criterion("boolean-irreducibility", 1):
        for k in range(4):
            assert is_irreducible_oml(boolean_algebra(k)) == (k <= 1), k


def test_center_criterion_cross_validation():
    with criterion("center-criterion", 300):
        for v in omls(8):
            assert is_irreducible_oml(v) == is_irreducible_bruteforce(v.algebra), v.elements


def test_factorization_round_trip():
    with criterion("factorization-round-trip", 300):
        for v in omls(8):
            factors, _ = decompose(v)
            rebuilt = iterated_product([f.algebra for f in factors], names=v.algebra.names)
            assert find_isomorphism(v.algebra, rebuilt) is not None, v.elements
            assert all(is_irreducible_oml(f) for f in factors)


def test_projections_are_homomorphisms():
    with criterion("projections-homomorphic", 120):
        small = [v.algebra for v in enumerate_omls(6)]
        checked = 0
        for a in small:
            for b in small:
                p = product(a, b)
                for i in (1, 2):
                    g = projection(p, i)
                    assert is_homomorphism(g, "closure"), (a.size, b.size, i)
                    if p.size <= 20:
                        assert is_homomorphism(g, "subsets"), (a.size, b.size, i)
                    checked += 1
        assert checked == 2 * len(small) ** 2


def _prop2_structures(count, seed=2024):
    cfg = TrialConfig(max_universe=2, max_predicates=2, max_arity=1)
    pool = [a for a in algebra_pool(cfg.algebra_cap) if a.factors is not None]
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        lang = random_language(rng, cfg)
        try:
            s = random_structure(rng, lang, pool, cfg)
        except ValueError:
            continue
        candidates = [random_wff(lang, rng, 3, constants=lang.constants) for _ in range(6)]
        # bias towards gammas that hold so that the implication is exercised
        if rng.random() < 0.6:
            candidates = [w for w in candidates if is_model(s, [w])]
        gamma = candidates[:rng.randint(0, 3)]
        out.append((s, gamma))
    return out


def test_models_project_to_models():
    with criterion("factor-models-and-compositionality", 300):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cases = _prop2_structures(500)
            models_seen = 0
            for s, gamma in cases:
                for i in (1, 2):
                    g = projection(s.algebra, i)
                    f = transport(s, g)
                    res = check_compositionality(s, g, f, depth=3)
                    assert res.ok, (print_wff(res.counterexample or res.eval_mismatch, s.lang))
                    bad = check_transport(s, g, f, sample_sentences(s, 10, 3))
                    assert bad is None, print_wff(bad, s.lang)
                    if is_model(s, gamma):
                        assert is_model(f, gamma)
                models_seen += is_model(s, gamma)
            assert models_seen >= 100, models_seen


def test_main_theorem_trials():
    with criterion("main-theorem-trials", 900):
        summary = run_trials(TrialConfig(seed=7, trials=1000))
        d = summary.to_dict()
        assert d["agree"] == 1000, d["disagreements"][:5]
        assert not d["bad_witnesses"], d["bad_witnesses"][:5]
        assert d["witnesses"] > 0


def test_parser_round_trip():
    with criterion("parser-round-trip", 30):
        infix = Language({"P": 1, "Q": 1, "R": 2, "S": 0}, {"c": 0, "d": 0, "f": 1, "g": 2},
                         (("and", 2), ("or", 2), ("not", 1)), negation="not")
        prefix = Language({"P": 1, "R": 2}, {"c": 0, "f": 1},
                          (("imp", 2), ("box", 1), ("falsum", 0)))
        rng = random.Random(3)
        n = 0
        for lang in (infix, prefix):
            for _ in range(5000):
                w = random_wff(lang, rng, rng.randint(0, 5), variables=("x", "y", "z"))
                assert parse_wff(lang, print_wff(w, lang)) == w, print_wff(w, lang)
                n += 1
        assert n >= 10000


def test_proof_corpus():
    with criterion("proof-corpus", 10):
        rows = [line.split() for line in (DATA / "corpus.txt").read_text().splitlines()
                if line.strip() and not line.startswith("#")]
        assert rows
        for sys_name, hyp_name, proof_name, verdict, step in rows:
            d = formats.read_system(DATA / sys_name)
            hyps = formats.read_wffs(DATA / hyp_name, d.lang)
            p = formats.read_proof(DATA / proof_name, d.lang)
            rep = check_proof(d, hyps, p)
            assert rep.accepted == (verdict == "accept"), (proof_name, rep.reason)
            if verdict == "reject":
                assert rep.failed_step == int(step), (proof_name, rep.failed_step)


def test_mo2_regression():
    with criterion("mo2-regression", 1):
        m = mo(2)
        assert center(m) == ["0", "1"]
        assert check_boolean(m) is False
        s = formats.read_structure(DATA / "mo2.str")
        p_c = parse_wff(s.lang, "P(c)")
        assert eval_wff(s, p_c) == "a"
        assert eval_wff(s, parse_wff(s.lang, "P(c) | ~P(c)")) == "1"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
