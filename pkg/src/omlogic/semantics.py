"""
Finite structures ``(M, A, v, F)`` and evaluation of wffs.

The truth valuation is never stored: it is induced from a table of atomic
values (one per predicate and tuple of universe elements) through the
operation tables for connectives and poset meets for the universal
quantifier.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Iterable, Mapping, Optional

from .errors import (MeetUndefined, NameCollision, NonSurjective,
                     NotAProduct, NotASentence, StructureError, TypeMismatch,
                     UnknownSymbol, VariableInGroundTerm)
from .oml import check_oml, is_irreducible_oml, oml_view
from .syntax import (App, Atom, Conn, Forall, Language, Var, Wff,
                     extend_with_constants, free_vars, random_wff, substitute,
                     universal_closure)
from .tvalgebra import (OML_TYPE, AlgebraMap, TVAlgebra,
                        is_irreducible_bruteforce, projection)


@dataclass(frozen=True)
class Interpretation:
    """A finite universe and a total table for every function symbol."""

    universe: tuple
    fn_tables: Mapping[str, Mapping[tuple, str]]

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "fn_tables",
                           {f: {tuple(k): v for k, v in t.items()}
                            for f, t in self.fn_tables.items()})
        if not self.universe:
            raise StructureError("the universe must not be empty")
        if len(set(self.universe)) != len(self.universe):
            raise StructureError("universe elements must be distinct")

    def validate(self, lang: Language):
        clash = set(self.universe) & lang.symbols()
        if clash:
            raise NameCollision(f"universe element {sorted(clash)[0]!r} is a language symbol")
        u = set(self.universe)
        for f, arity in lang.functions.items():
            table = self.fn_tables.get(f)
            if table is None:
                raise StructureError(f"no table for function {f!r}")
            for args in cartesian(self.universe, repeat=arity):
                if args not in table:
                    raise StructureError(f"{f}{args} is undefined")
                if table[args] not in u:
                    raise StructureError(f"{f}{args} = {table[args]!r} is outside the universe")
        extra = set(self.fn_tables) - set(lang.functions)
        if extra:
            raise UnknownSymbol(f"table for undeclared function {sorted(extra)[0]!r}")


def eval_term(i: Interpretation, t, env: Optional[Mapping[str, str]] = None) -> str:
    """Value in the universe of a term; constants from the universe denote themselves."""
    if isinstance(t, Var):
        if env is None or t.name not in env:
            raise VariableInGroundTerm(f"variable {t.name!r} in a ground term")
        return env[t.name]
    if isinstance(t, App):
        if not t.args and t.fn in i.universe and t.fn not in i.fn_tables:
            return t.fn
        table = i.fn_tables.get(t.fn)
        if table is None:
            raise UnknownSymbol(f"unknown function {t.fn!r}")
        return table[tuple(eval_term(i, a, env) for a in t.args)]
    raise VariableInGroundTerm(f"cannot evaluate {t!r}")


class Structure:
    """An ``L``-structure over a finite universe.

    ``atomic_base[P][(m1, ..., mn)]`` is the truth value of ``P(m1, ..., mn)``.
    Construction checks that the induced valuation reaches every element of
    the algebra; pass ``allow_nonsurjective=True`` to downgrade that to a
    warning.
    """

    def __init__(self, lang: Language, interp: Interpretation, algebra: TVAlgebra,
                 atomic_base: Mapping[str, Mapping[tuple, str]],
                 allow_nonsurjective: bool = False, name: Optional[str] = None):
        if algebra.typ != lang.typ:
            raise TypeMismatch(f"algebra type {algebra.typ} does not match "
                               f"connective arities {lang.typ}")
        interp.validate(lang)
        self.lang = lang
        self.interp = interp
        self.algebra = algebra
        self.name = name
        self.allow_nonsurjective = allow_nonsurjective
        self.lang_m = extend_with_constants(lang, interp.universe)
        idx = algebra.index
        base = {}
        for p, arity in lang.predicates.items():
            table = atomic_base.get(p)
            if table is None:
                raise StructureError(f"no atomic values for predicate {p!r}")
            table = {tuple(k): v for k, v in table.items()}
            row = {}
            for args in cartesian(interp.universe, repeat=arity):
                if args not in table:
                    raise StructureError(f"no value for {p}{args}")
                if table[args] not in idx:
                    raise StructureError(f"{p}{args} = {table[args]!r} is not a truth value")
                row[args] = idx[table[args]]
            base[p] = row
        extra = set(atomic_base) - set(lang.predicates)
        if extra:
            raise UnknownSymbol(f"values for undeclared predicate {sorted(extra)[0]!r}")
        self._base = base
        missing = set(range(algebra.size)) - reachable_indices(self)
        if missing:
            msg = (f"valuation misses {len(missing)} truth value(s), e.g. "
                   f"{algebra.elements[min(missing)]!r}")
            if not allow_nonsurjective:
                raise NonSurjective(msg)
            warnings.warn(msg, stacklevel=2)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return (f"<Structure{label} |M|={len(self.universe)} "
                f"|A|={self.algebra.size}>")

    @property
    def universe(self) -> tuple:
        return self.interp.universe

    @property
    def atomic_base(self) -> dict:
        els = self.algebra.elements
        return {p: {args: els[v] for args, v in row.items()} for p, row in self._base.items()}

    def base_idx(self, pred: str, args: tuple) -> int:
        return self._base[pred][args]

    def session(self) -> "Evaluation":
        return Evaluation(self)


def reachable_indices(s: Structure) -> set[int]:
    """Closure of the atomic values under every operation and every existing meet."""
    a = s.algebra
    p = a.poset
    vals = set()
    for row in s._base.values():
        vals.update(row.values())
    arities = a.typ.arities
    for k, r in enumerate(arities):
        if r == 0:
            vals.add(a.apply_idx(k, ()))
    while True:
        new = set()
        cur = sorted(vals)
        for k, r in enumerate(arities):
            if r == 0:
                continue
            for args in cartesian(cur, repeat=r):
                v = a.apply_idx(k, args)
                if v not in vals:
                    new.add(v)
        for x in cur:
            for y in cur:
                m = p.meet_idx(x, y)
                if m is not None and m not in vals:
                    new.add(m)
        if not new:
            return vals
        vals |= new


class Evaluation:
    """One evaluation session over a structure, with its own memo table."""

    def __init__(self, s: Structure):
        self.s = s
        self.cache = {}
        self._fv = {}

    def fv(self, w) -> frozenset:
        out = self._fv.get(w)
        if out is None:
            out = self._fv[w] = frozenset(free_vars(w))
        return out

    def value_idx(self, w: Wff, env: Mapping[str, str]) -> int:
        fv = self.fv(w)
        key = (w, tuple(sorted((v, env[v]) for v in fv if v in env)))
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        out = self._eval(w, env)
        self.cache[key] = out
        return out

    def _eval(self, w, env):
        s = self.s
        a = s.algebra
        if isinstance(w, Atom):
            row = s._base.get(w.pred)
            if row is None:
                raise UnknownSymbol(f"unknown predicate {w.pred!r}")
            return row[tuple(eval_term(s.interp, t, env) for t in w.args)]
        if isinstance(w, Conn):
            k = s.lang.conn_index(w.name)
            return a.apply_idx(k, [self.value_idx(x, env) for x in w.args])
        if isinstance(w, Forall):
            mask = 0
            inner = dict(env)
            for m in s.universe:
                inner[w.var] = m
                mask |= 1 << self.value_idx(w.body, inner)
            out = a.poset.meet_mask(mask)
            if out is None:
                vals = [a.elements[i] for i in range(a.size) if mask >> i & 1]
                raise MeetUndefined(f"no meet for {vals} under 'forall {w.var}'", vals)
            return out
        raise TypeError(f"cannot evaluate {w!r}")

    def sentence(self, w: Wff) -> str:
        if self.fv(w):
            raise NotASentence(f"free variables {sorted(self.fv(w))}")
        return self.s.algebra.elements[self.value_idx(w, {})]

    def wff(self, w: Wff) -> str:
        return self.sentence(universal_closure(w))


def eval_sentence(s: Structure, w: Wff) -> str:
    return s.session().sentence(w)


def eval_wff(s: Structure, w: Wff) -> str:
    """Value of the universal closure (variables quantified in lexicographic order)."""
    return s.session().wff(w)


def holds(s: Structure, w: Wff) -> bool:
    return eval_wff(s, w) == s.algebra.top


def _instances(s: Structure, w: Wff):
    fv = sorted(free_vars(w))
    for combo in cartesian(s.universe, repeat=len(fv)):
        yield substitute(w, dict(zip(fv, combo)))


def is_model(s: Structure, gamma: Iterable[Wff]) -> bool:
    """Every instance of every member of ``gamma`` evaluates to the top element.

    The per-instance check and the closure-based check are both computed and
    must agree.
    """
    ev = s.session()
    top = s.algebra.top
    for g in gamma:
        by_instances = all(ev.sentence(inst) == top for inst in _instances(s, g))
        by_closure = ev.wff(g) == top
        if by_instances != by_closure:
            raise RuntimeError(f"instance and closure checks disagree on {g!r}")
        if not by_instances:
            return False
    return True


def transport(s: Structure, hom: AlgebraMap, **kw) -> Structure:
    """The structure over ``hom.target`` whose atomic values are ``hom`` of those of ``s``."""
    if hom.source is not s.algebra:
        raise ValueError("the map must start at the structure's algebra")
    base = {p: {args: hom.mapping[v] for args, v in row.items()}
            for p, row in s.atomic_base.items()}
    return Structure(s.lang, s.interp, hom.target, base,
                     allow_nonsurjective=s.allow_nonsurjective, **kw)


def sample_sentences(s: Structure, count: int = 25, depth: int = 3, seed: int = 0):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        w = random_wff(s.lang, rng, depth, variables=("x", "y"),
                       constants=list(s.lang.constants) + list(s.universe))
        out.append(universal_closure(w))
    return out


def check_transport(s: Structure, hom: AlgebraMap, image: Structure,
                    sentences: Iterable[Wff]) -> Optional[Wff]:
    """First sentence where ``hom(value in s)`` differs from the value in ``image``."""
    e1, e2 = s.session(), image.session()
    for w in sentences:
        if hom.mapping[e1.sentence(w)] != e2.sentence(w):
            return w
    return None


def factor_structures(s: Structure, verify: int = 25):
    """The two structures over the factors of a product algebra.

    ``verify`` random sentences are evaluated in all three structures to
    confirm that each factor value is the projection of the product value.
    """
    if s.algebra.factors is None:
        raise NotAProduct("the structure's algebra was not built by product()")
    out = []
    for i in (1, 2):
        p = projection(s.algebra, i)
        f = transport(s, p)
        if verify:
            bad = check_transport(s, p, f, sample_sentences(s, verify))
            if bad is not None:
                raise RuntimeError(f"projection {i} is not compositional at {bad!r}")
        out.append(f)
    return tuple(out)


def algebra_is_oml(a: TVAlgebra) -> bool:
    key = "is_oml"
    if key not in a._cache:
        a._cache[key] = a.typ == OML_TYPE and check_oml(a).ok
    return a._cache[key]


def algebra_irreducible(a: TVAlgebra) -> bool:
    key = "irreducible"
    if key not in a._cache:
        if algebra_is_oml(a):
            a._cache[key] = is_irreducible_oml(oml_view(a))
        else:
            a._cache[key] = is_irreducible_bruteforce(a)
    return a._cache[key]


def is_irreducible_structure(s: Structure) -> bool:
    """Irreducibility of the truth-value algebra (center test for OMLs)."""
    return algebra_irreducible(s.algebra)
