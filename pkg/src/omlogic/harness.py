"""
Finite semantics, factor-closure, and desk-scale verification that
irreducible models decide the same consequences as all models.

A *split* of a structure is a pair of surjective homomorphisms out of its
algebra whose combination is an isomorphism onto a product.  Literal
products contribute their projections; other orthomodular algebras
contribute ``x -> (x & c, x & ~c)`` for each central ``c``; anything else
falls back to the brute-force congruence search.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Optional, Sequence

import numpy as np

from .errors import CarrierTooLarge, NotFactorClosed, TypeMismatch
from .oml import central_splits, enumerate_omls, factor_by_central, oml_view
from .semantics import (Evaluation, Structure, algebra_irreducible,
                        algebra_is_oml, eval_wff, holds, is_model, transport)
from .syntax import (App, Atom, Conn, Forall, Language, Var, Wff, print_wff,
                     random_wff)
from .tvalgebra import (AlgebraMap, TVAlgebra, _fingerprints,
                        factorizations_bruteforce, find_isomorphism,
                        is_irreducible_bruteforce, product, projection)

log = logging.getLogger(__name__)


# splits -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Split:
    left: AlgebraMap
    right: AlgebraMap
    how: str

    @property
    def maps(self):
        return (self.left, self.right)

    @property
    def nontrivial(self) -> bool:
        return self.left.target.size > 1 and self.right.target.size > 1


def _kernel(g: AlgebraMap) -> tuple:
    seen = {}
    return tuple(seen.setdefault(g.mapping[x], len(seen)) for x in g.source.elements)


def splits(a: TVAlgebra) -> list[Split]:
    """Every way the algebra is presented as a product, up to isomorphism of factors."""
    cached = a._cache.get("splits")
    if cached is not None:
        return cached
    out = []
    kernels = set()
    if a.factors is not None:
        sp = Split(projection(a, 1), projection(a, 2), "product")
        out.append(sp)
        kernels.add(_kernel(sp.left))
    if algebra_is_oml(a):
        view = oml_view(a)
        for c in central_splits(view):
            l1, l2, g = factor_by_central(view, c)
            prod = g.target
            sp = Split(g.compose(projection(prod, 1)), g.compose(projection(prod, 2)),
                       f"central {c}")
            if _kernel(sp.left) in kernels or _kernel(sp.right) in kernels:
                continue
            kernels.add(_kernel(sp.left))
            out.append(sp)
    elif a.size > 1:
        try:
            found = factorizations_bruteforce(a)
        except CarrierTooLarge:
            found = []
            log.warning("algebra of size %d too large to search for factorizations", a.size)
        for q1, q2, g in found:
            sp = Split(g.compose(projection(g.target, 1)),
                       g.compose(projection(g.target, 2)), "congruence")
            if _kernel(sp.left) in kernels or _kernel(sp.right) in kernels:
                continue
            kernels.add(_kernel(sp.left))
            out.append(sp)
    a._cache["splits"] = out
    return out


# semantics families ---------------------------------------------------------

def _base_pattern(s: Structure):
    labels = {}
    out = []
    for p in sorted(s._base):
        row = s._base[p]
        for args in sorted(row):
            out.append(labels.setdefault(row[args], len(labels)))
    return tuple(out)


def structure_key(s: Structure):
    tables = tuple(sorted((f, tuple(sorted(t.items()))) for f, t in s.interp.fn_tables.items()))
    return (s.lang, s.interp.universe, tables, s.algebra.size,
            tuple(sorted(_fingerprints(s.algebra))), _base_pattern(s))


def same_structure(s: Structure, t: Structure) -> Optional[AlgebraMap]:
    """An algebra isomorphism carrying the atomic values of ``s`` onto those of ``t``."""
    if structure_key(s) != structure_key(t):
        return None
    fixed = {}
    back = {}
    sa, ta = s.algebra.elements, t.algebra.elements
    for p, row in s._base.items():
        trow = t._base[p]
        for args, v in row.items():
            x, y = sa[v], ta[trow[args]]
            if fixed.setdefault(x, y) != y or back.setdefault(y, x) != x:
                return None
    return find_isomorphism(s.algebra, t.algebra, fixed)


@dataclass
class FiniteSemantics:
    structures: list
    closure_mode: str = "declared"

    def __post_init__(self):
        self.structures = list(self.structures)
        if self.closure_mode not in ("declared", "auto-complete"):
            raise ValueError(f"unknown closure mode {self.closure_mode!r}")
        if self.structures:
            lang = self.structures[0].lang
            for s in self.structures[1:]:
                if s.lang != lang:
                    raise TypeMismatch("all structures must share one language")
        self._buckets = None

    def __len__(self):
        return len(self.structures)

    def __iter__(self):
        return iter(self.structures)

    def find(self, s: Structure) -> Optional[int]:
        if self._buckets is None:
            self._buckets = {}
            for i, t in enumerate(self.structures):
                self._buckets.setdefault(structure_key(t), []).append(i)
        for i in self._buckets.get(structure_key(s), ()):
            if same_structure(s, self.structures[i]) is not None:
                return i
        return None

    def add(self, s: Structure) -> int:
        self.structures.append(s)
        i = len(self.structures) - 1
        if self._buckets is not None:
            self._buckets.setdefault(structure_key(s), []).append(i)
        return i


@dataclass
class MissingFactor:
    index: int
    split: str
    side: int
    factor: Structure


@dataclass
class ClosureReport:
    missing: list = field(default_factory=list)

    @property
    def closed(self) -> bool:
        return not self.missing


def factor_structures_of(s: Structure, sp: Split):
    return tuple(transport(s, h) for h in sp.maps)


def check_factor_closed(t: FiniteSemantics) -> ClosureReport:
    report = ClosureReport()
    for i, s in enumerate(t.structures):
        for sp in splits(s.algebra):
            for side, f in enumerate(factor_structures_of(s, sp), 1):
                if t.find(f) is None:
                    report.missing.append(MissingFactor(i, sp.how, side, f))
    return report


def saturate(t: FiniteSemantics, force: bool = False) -> FiniteSemantics:
    """Smallest superset closed under taking factor structures."""
    if t.closure_mode != "auto-complete" and not force:
        raise ValueError("saturate needs closure_mode 'auto-complete'")
    out = FiniteSemantics(list(t.structures), "auto-complete")
    i = 0
    while i < len(out.structures):
        s = out.structures[i]
        for sp in splits(s.algebra):
            for f in factor_structures_of(s, sp):
                if out.find(f) is None:
                    out.add(f)
        i += 1
    return out


def models(t: FiniteSemantics, gamma) -> list[Structure]:
    return [s for s in t if is_model(s, gamma)]


def irreducible_models(t: FiniteSemantics, gamma) -> list[Structure]:
    return [s for s in models(t, gamma) if algebra_irreducible(s.algebra)]


@dataclass
class MainTheoremReport:
    gamma: list
    psi: Wff
    all_models_satisfy: bool
    all_irreducible_models_satisfy: bool
    models: int = 0
    irreducible_models: int = 0
    witness: Optional[tuple] = None
    chain: list = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return self.all_models_satisfy == self.all_irreducible_models_satisfy

    def to_dict(self, lang: Optional[Language] = None) -> dict:
        return {
            "gamma": [print_wff(g, lang) for g in self.gamma],
            "psi": print_wff(self.psi, lang),
            "all_models_satisfy": self.all_models_satisfy,
            "all_irreducible_models_satisfy": self.all_irreducible_models_satisfy,
            "models": self.models,
            "irreducible_models": self.irreducible_models,
            "agree": self.agree,
            "witness_chain": self.chain,
        }


def verify_main_theorem(t: FiniteSemantics, gamma: Sequence[Wff], psi: Wff) -> MainTheoremReport:
    """Compare "psi holds in every model of gamma" with the irreducible-only claim.

    When some model fails ``psi`` the failing model is split repeatedly,
    following a factor in which ``psi`` still fails, until an irreducible
    structure of ``t`` is reached; that pair is the witness and ``chain``
    lists the indices visited.
    """
    closure = check_factor_closed(t)
    if not closure.closed:
        raise NotFactorClosed(f"{len(closure.missing)} factor structure(s) missing",
                              closure.missing)
    gamma = list(gamma)
    ms = models(t, gamma)
    irr = [s for s in ms if algebra_irreducible(s.algebra)]
    failing = [s for s in ms if not holds(s, psi)]
    report = MainTheoremReport(
        gamma, psi,
        all_models_satisfy=not failing,
        all_irreducible_models_satisfy=all(holds(s, psi) for s in irr),
        models=len(ms), irreducible_models=len(irr))
    if failing:
        start = failing[0]
        cur = start
        chain = [t.structures.index(start)]
        while not algebra_irreducible(cur.algebra):
            nxt = None
            for sp in splits(cur.algebra):
                if not sp.nontrivial:
                    continue
                for f in factor_structures_of(cur, sp):
                    if not holds(f, psi):
                        nxt = f
                        break
                if nxt is not None:
                    break
            if nxt is None:
                raise RuntimeError("reducible failing model has no failing factor")
            j = t.find(nxt)
            if j is None:
                raise RuntimeError("factor structure missing from a closed semantics")
            cur = t.structures[j]
            chain.append(j)
        report.witness = (start, cur)
        report.chain = chain
    return report


def recheck_witness(t: FiniteSemantics, report: MainTheoremReport) -> dict:
    """Independent re-checks of the witness: membership, model, irreducible, fails psi."""
    _, w = report.witness
    alg = w.algebra
    try:
        irreducible = is_irreducible_bruteforce(alg)
    except CarrierTooLarge:
        irreducible = algebra_irreducible(alg)
    return {
        "in_semantics": any(x is w for x in t.structures),
        "is_model": is_model(w, report.gamma),
        "irreducible": irreducible,
        "fails_psi": eval_wff(w, report.psi) != alg.top,
    }


# random trials -------------------------------------------------------------------

@dataclass
class TrialConfig:
    seed: int = 7
    trials: int = 1000
    max_universe: int = 3
    algebra_cap: int = 8
    max_predicates: int = 2
    max_arity: int = 2
    max_gamma: int = 2
    depth: int = 3
    max_structures: int = 3


def _generators(a: TVAlgebra) -> list[int]:
    """A small set of elements whose closure under operations and meets is everything."""
    cached = a._cache.get("generators")
    if cached is not None:
        return cached
    gens = []
    closure = _closure(a, gens)
    while len(closure) < a.size:
        best = max((x for x in range(a.size) if x not in closure),
                   key=lambda x: (len(_closure(a, gens + [x])), -x))
        gens.append(best)
        closure = _closure(a, gens)
    a._cache["generators"] = gens
    return gens


def _closure(a, seeds):
    vals = set(seeds)
    p = a.poset
    for k, r in enumerate(a.typ.arities):
        if r == 0:
            vals.add(a.apply_idx(k, ()))
    while True:
        cur = sorted(vals)
        new = set()
        for k, r in enumerate(a.typ.arities):
            if r:
                for args in cartesian(cur, repeat=r):
                    new.add(a.apply_idx(k, args))
        for x in cur:
            for y in cur:
                m = p.meet_idx(x, y)
                if m is not None:
                    new.add(m)
        if new <= vals:
            return vals
        vals |= new


def algebra_pool(cap: int = 8, enumeration_size: int = 8) -> list[TVAlgebra]:
    """Enumerated orthomodular lattices plus their pairwise products of size <= cap."""
    base = [v.algebra for v in enumerate_omls(min(enumeration_size, 10))]
    pool = [a for a in base if a.size <= cap]
    for a in base:
        for b in base:
            if a.size * b.size <= cap:
                pool.append(product(a, b))
    return pool


def random_language(rng: random.Random, cfg: TrialConfig) -> Language:
    npred = rng.randint(1, cfg.max_predicates)
    preds = {}
    for name in ("P", "Q", "R")[:npred]:
        preds[name] = rng.randint(0, cfg.max_arity)
    if all(a == 0 for a in preds.values()):
        preds["P"] = 1
    funcs = {}
    if rng.random() < 0.5:
        funcs["c"] = 0
    if rng.random() < 0.25:
        funcs["f"] = 1
    return Language(preds, funcs, (("and", 2), ("or", 2), ("not", 1)), negation="not")


def random_structure(rng: random.Random, lang: Language, pool: Sequence[TVAlgebra],
                     cfg: TrialConfig, universe_names=("m1", "m2", "m3")) -> Structure:
    size = rng.randint(1, cfg.max_universe)
    while True:
        universe = list(universe_names[:size])
        slots = [(p, args) for p, a in sorted(lang.predicates.items())
                 for args in cartesian(universe, repeat=a)]
        fits = [a for a in pool if len(_generators(a)) <= len(slots)]
        if fits:
            break
        if size >= min(cfg.max_universe, len(universe_names)):
            raise ValueError("no algebra in the pool can be reached from this language")
        size += 1
    alg = rng.choice(fits)
    gens = _generators(alg)
    chosen = rng.sample(range(len(slots)), len(gens))
    values = [rng.randrange(alg.size) for _ in slots]
    for slot, g in zip(chosen, gens):
        values[slot] = g
    base = {p: {} for p in lang.predicates}
    for (p, args), v in zip(slots, values):
        base[p][args] = alg.elements[v]
    tables = {}
    for f, a in lang.functions.items():
        tables[f] = {args: rng.choice(universe) for args in cartesian(universe, repeat=a)}
    from .semantics import Interpretation
    return Structure(lang, Interpretation(universe, tables), alg, base)


@dataclass
class TrialOutcome:
    index: int
    agree: bool
    all_models: bool
    all_irreducible: bool
    models: int
    semantics_size: int
    witness_checks: Optional[dict] = None


@dataclass
class TrialSummary:
    outcomes: list = field(default_factory=list)

    @property
    def trials(self) -> int:
        return len(self.outcomes)

    @property
    def agreeing(self) -> int:
        return sum(o.agree for o in self.outcomes)

    @property
    def witnesses(self) -> int:
        return sum(o.witness_checks is not None for o in self.outcomes)

    @property
    def bad_witnesses(self) -> list:
        return [o for o in self.outcomes
                if o.witness_checks is not None and not all(o.witness_checks.values())]

    @property
    def ok(self) -> bool:
        return self.agreeing == self.trials and not self.bad_witnesses

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "agree": self.agreeing,
            "witnesses": self.witnesses,
            "bad_witnesses": [o.index for o in self.bad_witnesses],
            "disagreements": [o.index for o in self.outcomes if not o.agree],
            "models_fail_psi": sum(not o.all_models for o in self.outcomes),
        }


def random_trial(rng: random.Random, pool, cfg: TrialConfig):
    lang = random_language(rng, cfg)
    base = [random_structure(rng, lang, pool, cfg)
            for _ in range(rng.randint(1, cfg.max_structures))]
    t = saturate(FiniteSemantics(base, "auto-complete"))
    consts = lang.constants
    gamma = [random_wff(lang, rng, cfg.depth, constants=consts)
             for _ in range(rng.randint(0, cfg.max_gamma))]
    psi = random_wff(lang, rng, cfg.depth, constants=consts)
    return t, gamma, psi


def run_trials(cfg: TrialConfig, pool=None, progress=None) -> TrialSummary:
    rng = random.Random(cfg.seed)
    if pool is None:
        pool = algebra_pool(cfg.algebra_cap)
    summary = TrialSummary()
    for i in range(cfg.trials):
        t, gamma, psi = random_trial(rng, pool, cfg)
        rep = verify_main_theorem(t, gamma, psi)
        checks = recheck_witness(t, rep) if rep.witness is not None else None
        summary.outcomes.append(TrialOutcome(
            i, rep.agree, rep.all_models_satisfy, rep.all_irreducible_models_satisfy,
            rep.models, len(t), checks))
        if progress is not None:
            progress(i, rep)
    return summary


# exhaustive compositionality -------------------------------------------------------

@dataclass
class CompositionalityResult:
    classes: int
    counterexample: Optional[Wff] = None
    eval_mismatch: Optional[Wff] = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None and self.eval_mismatch is None


def _atoms_in_x(s: Structure, var: str) -> list[Wff]:
    terms = [Var(var)] + [App(c, ()) for c in s.lang.constants] + \
            [App(m, ()) for m in s.universe]
    for f, a in s.lang.functions.items():
        if a == 1:
            terms += [App(f, (t,)) for t in list(terms)]
    out = []
    for p, a in sorted(s.lang.predicates.items()):
        for args in cartesian(terms, repeat=a):
            out.append(Atom(p, tuple(args)))
    return out


def check_compositionality(s: Structure, hom: AlgebraMap, image: Structure,
                           depth: int = 3, var: str = "x") -> CompositionalityResult:
    """Check ``hom(v_s(w)) == v_image(w)`` for every wff of depth <= ``depth`` in one variable.

    Wffs are grouped by their value vectors over all assignments to ``var`` in
    both structures at once; compound vectors are computed from the operation
    tables and poset meets, and every new class representative is also
    evaluated by the structures' own evaluators and compared.
    """
    A, B = s.algebra, image.algebra
    universe = list(s.universe)
    nb = B.size
    hom_arr = np.array([B.index[hom.mapping[x]] for x in A.elements])
    ev_s, ev_i = Evaluation(s), Evaluation(image)

    def evaluate(w):
        sv = [ev_s.value_idx(w, {var: m}) for m in universe]
        iv = [ev_i.value_idx(w, {var: m}) for m in universe]
        return np.array(sv), np.array(iv)

    reps = []
    S_rows, I_rows = [], []
    known = set()

    def admit(w, sv, iv):
        if not np.array_equal(hom_arr[sv], iv):
            return "law"
        key = tuple(sv) + tuple(iv)
        if key in known:
            return None
        known.add(key)
        reps.append(w)
        S_rows.append(sv)
        I_rows.append(iv)
        return None

    for w in _atoms_in_x(s, var):
        sv, iv = evaluate(w)
        if admit(w, sv, iv):
            return CompositionalityResult(len(reps), counterexample=w)

    tabs = []
    for k, r in enumerate(s.lang.typ.arities):
        n_a, n_b = A.size, B.size
        ta = np.array(A._t[k]).reshape((n_a,) * r) if r else np.array(A._t[k][0])
        tb = np.array(B._t[k]).reshape((n_b,) * r) if r else np.array(B._t[k][0])
        tabs.append((k, r, ta, tb))
    names = s.lang.connective_names

    for _ in range(depth):
        S = np.array(S_rows)
        I = np.array(I_rows)
        K = len(reps)
        candidates = []  # (wff, predicted s-vector, predicted image-vector)
        for k, r, ta, tb in tabs:
            if r == 0:
                candidates.append((Conn(names[k], ()),
                                   np.full(len(universe), ta), np.full(len(universe), tb)))
            elif r == 1:
                for i in range(K):
                    candidates.append((Conn(names[k], (reps[i],)), ta[S[i]], tb[I[i]]))
            elif r == 2:
                SS = ta[S[:, None, :], S[None, :, :]]
                II = tb[I[:, None, :], I[None, :, :]]
                law = hom_arr[SS] == II
                if not law.all():
                    i, j, _ = np.argwhere(~law)[0]
                    return CompositionalityResult(K, counterexample=Conn(
                        names[k], (reps[i], reps[j])))
                flat = (SS * nb + II).reshape(K * K, -1)
                _, first = np.unique(flat, axis=0, return_index=True)
                for f in sorted(first):
                    i, j = divmod(int(f), K)
                    candidates.append((Conn(names[k], (reps[i], reps[j])),
                                       SS[i, j], II[i, j]))
            else:
                for args in cartesian(range(K), repeat=r):
                    sv = np.array([ta[tuple(S[a][m] for a in args)] for m in range(len(universe))])
                    iv = np.array([tb[tuple(I[a][m] for a in args)] for m in range(len(universe))])
                    candidates.append((Conn(names[k], tuple(reps[a] for a in args)), sv, iv))
        for i in range(K):
            ms = A.poset.meet_mask(sum(1 << int(v) for v in set(S[i].tolist())))
            mi = B.poset.meet_mask(sum(1 << int(v) for v in set(I[i].tolist())))
            if ms is None or mi is None:
                continue
            candidates.append((Forall(var, reps[i]), np.full(len(universe), ms),
                               np.full(len(universe), mi)))
        for w, sv, iv in candidates:
            key = tuple(sv.tolist()) + tuple(iv.tolist())
            if key in known:
                continue
            real_s, real_i = evaluate(w)
            if not (np.array_equal(real_s, sv) and np.array_equal(real_i, iv)):
                return CompositionalityResult(len(reps), eval_mismatch=w)
            if admit(w, sv, iv):
                return CompositionalityResult(len(reps), counterexample=w)
    return CompositionalityResult(len(reps))
