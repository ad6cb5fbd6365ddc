"""Slow, obviously-correct reference computations used to cross-check the library."""

from itertools import combinations, product as cartesian

from omlogic.syntax import App, Atom, Conn, Forall, Var


def lower_bounds(relation, elements, subset):
    return [x for x in elements if all((x, s) in relation for s in subset)]


def naive_meet(relation, elements, subset):
    lbs = lower_bounds(relation, elements, subset)
    best = [m for m in lbs if all((l, m) in relation for l in lbs)]
    return best[0] if best else None


def naive_join(relation, elements, subset):
    ubs = [x for x in elements if all((s, x) in relation for s in subset)]
    best = [m for m in ubs if all((m, u) in relation for u in ubs)]
    return best[0] if best else None


def reflexive_transitive_closure(elements, pairs):
    rel = {(x, x) for x in elements} | set(pairs)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (c, d) in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return rel


def continuous_by_subsets(g):
    """Literal definition: every existing source meet maps onto the target meet."""
    src, tgt = g.source, g.target
    els = list(src.elements)
    srel, trel = set(src.relation()), set(tgt.relation())
    for r in range(len(els) + 1):
        for sub in combinations(els, r):
            m = naive_meet(srel, els, sub)
            if m is None:
                continue
            image = {g.mapping[x] for x in sub}
            if naive_meet(trel, list(tgt.elements), image) != g.mapping[m]:
                return False
    return True


def op(a, name, *args):
    return a.op(a.names.index(name), *args)


def naive_compatible(a, x, y):
    m = lambda u, v: op(a, "meet", u, v)
    j = lambda u, v: op(a, "join", u, v)
    n = lambda u: op(a, "neg", u)
    return x == j(m(x, y), m(x, n(y)))


def naive_center(a):
    return [c for c in a.elements if all(naive_compatible(a, c, x) for x in a.elements)]


def naive_eval(s, w, env=None):
    """Direct recursion over conditions (1)-(3), no caching, meets by scanning bounds."""
    env = env or {}
    a = s.algebra
    rel = set(a.poset.relation())

    def term(t):
        if isinstance(t, Var):
            return env[t.name]
        if not t.args and t.fn in s.universe:
            return t.fn
        return s.interp.fn_tables[t.fn][tuple(term(x) for x in t.args)]

    if isinstance(w, Atom):
        return s.atomic_base[w.pred][tuple(term(t) for t in w.args)]
    if isinstance(w, Conn):
        k = [c for c, _ in s.lang.connectives].index(w.name)
        return a.op(k, *[naive_eval(s, x, env) for x in w.args])
    if isinstance(w, Forall):
        vals = {naive_eval(s, w.body, {**env, w.var: m}) for m in s.universe}
        return naive_meet(rel, list(a.elements), vals)
    raise TypeError(w)


def all_maps(source, target):
    for image in cartesian(target, repeat=len(source)):
        yield dict(zip(source, image))


def ground_app(name):
    return App(name, ())
