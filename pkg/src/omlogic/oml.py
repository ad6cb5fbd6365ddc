"""
Orthomodular lattices over type (2,2,1): axiom checks, compatibility, the
center, factorization by central elements, and exhaustive enumeration.

Operation labels are positional: 0 is meet, 1 is join, 2 is negation,
whatever display names the algebra carries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Optional

from .errors import (CapExceeded, NotAnOml, NotCentral, TrivialCentralElement,
                     TypeMismatch)
from .poset import Poset, bits, mk_poset
from .tvalgebra import (OML_TYPE, AlgebraMap, TVAlgebra, _fingerprints,
                        find_isomorphism, is_isomorphism, mk_algebra, pair_id,
                        product, trivial)

MEET, JOIN, NEG = 0, 1, 2
ENUMERATION_CAP = 10
OML_NAMES = ("meet", "join", "neg")


@dataclass
class AxiomResult:
    ok: bool
    counterexample: Optional[tuple] = None


@dataclass
class OmlReport:
    """Per-axiom outcome of :func:`check_oml`.

    Keys are ``"i"``, ``"i'"`` (the join table is the poset join), ``"ii"``
    through ``"v"``.
    """

    axioms: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.axioms.values())

    @property
    def ortholattice(self) -> bool:
        return all(r.ok for k, r in self.axioms.items() if k != "v")

    def failures(self):
        return {k: r for k, r in self.axioms.items() if not r.ok}


AXIOM_TITLES = {
    "i": "meet is the poset meet",
    "i'": "join is the poset join",
    "ii": "negation is antitone",
    "iii": "negation is an involution",
    "iv": "excluded middle",
    "v": "orthomodularity",
}


def check_oml(a: TVAlgebra) -> OmlReport:
    if a.typ != OML_TYPE:
        raise TypeMismatch(f"orthomodular lattices have type (2,2,1), not {a.typ}")
    p = a.poset
    n = a.size
    els = a.elements
    top = a.top_idx
    res = {k: AxiomResult(True) for k in AXIOM_TITLES}

    def fail(key, *xs):
        if res[key].ok:
            res[key] = AxiomResult(False, tuple(els[x] for x in xs))

    for x in range(n):
        nx = a.apply_idx(NEG, (x,))
        if a.apply_idx(NEG, (nx,)) != x:
            fail("iii", x)
        if a.apply_idx(JOIN, (x, nx)) != top:
            fail("iv", x)
        for y in range(n):
            m = p.meet_idx(x, y)
            if m is None or a.apply_idx(MEET, (x, y)) != m:
                fail("i", x, y)
            j = p.join_idx(x, y)
            if j is None or a.apply_idx(JOIN, (x, y)) != j:
                fail("i'", x, y)
            if p.leq_idx(x, y):
                ny = a.apply_idx(NEG, (y,))
                if not p.leq_idx(ny, nx):
                    fail("ii", x, y)
                if a.apply_idx(JOIN, (x, a.apply_idx(MEET, (nx, y)))) != y:
                    fail("v", x, y)
    return OmlReport(res)


@dataclass(frozen=True, eq=False)
class OmlView:
    algebra: TVAlgebra
    bottom: str

    @property
    def top(self) -> str:
        return self.algebra.top

    @property
    def elements(self):
        return self.algebra.elements

    @property
    def size(self) -> int:
        return self.algebra.size

    def meet(self, x: str, y: str) -> str:
        return self.algebra.op(MEET, x, y)

    def join(self, x: str, y: str) -> str:
        return self.algebra.op(JOIN, x, y)

    def neg(self, x: str) -> str:
        return self.algebra.op(NEG, x)

    def __repr__(self):
        return f"<OmlView size={self.size}>"


def oml_view(a: TVAlgebra) -> OmlView:
    """Wrap ``a`` after confirming it is an orthomodular lattice."""
    if isinstance(a, OmlView):
        return a
    report = check_oml(a)
    if not report.ok:
        bad = ", ".join(f"({k})" for k in report.failures())
        raise NotAnOml(f"axioms {bad} fail")
    return OmlView(a, a.op(NEG, a.top))


def _as_view(l) -> OmlView:
    return l if isinstance(l, OmlView) else oml_view(l)


def _compatible_idx(a: TVAlgebra, x: int, y: int) -> bool:
    ny = a.apply_idx(NEG, (y,))
    return a.apply_idx(JOIN, (a.apply_idx(MEET, (x, y)), a.apply_idx(MEET, (x, ny)))) == x


def compatible(l, a: str, b: str) -> bool:
    """``a = (a & b) | (a & ~b)``."""
    alg = _as_view(l).algebra
    return _compatible_idx(alg, alg.poset.idx(a), alg.poset.idx(b))


def _all_compatible(a: TVAlgebra) -> bool:
    return all(_compatible_idx(a, x, y) for x in range(a.size) for y in range(a.size))


def _distributive(a: TVAlgebra) -> bool:
    n = a.size
    for x, y, z in cartesian(range(n), repeat=3):
        lhs = a.apply_idx(JOIN, (x, a.apply_idx(MEET, (y, z))))
        rhs = a.apply_idx(MEET, (a.apply_idx(JOIN, (x, y)), a.apply_idx(JOIN, (x, z))))
        if lhs != rhs:
            return False
    return True


def boolean_checks(a: TVAlgebra) -> tuple[bool, bool]:
    """(all pairs compatible, distributive) for an orthomodular lattice."""
    alg = _as_view(a).algebra
    return _all_compatible(alg), _distributive(alg)


def check_boolean(a: TVAlgebra) -> bool:
    compat, distrib = boolean_checks(a)
    if compat != distrib:
        raise RuntimeError(
            f"compatibility ({compat}) and distributivity ({distrib}) disagree")
    return compat


def center(l) -> list[str]:
    """Elements compatible with every element, in carrier order."""
    alg = _as_view(l).algebra
    n = alg.size
    return [alg.elements[c] for c in range(n)
            if all(_compatible_idx(alg, c, x) for x in range(n))]


def is_irreducible_oml(l) -> bool:
    """Center is ``{0, 1}``; the one-element lattice also counts as irreducible."""
    view = _as_view(l)
    z = center(view)
    if view.size == 1:
        return True
    return len(z) == 2


def central_splits(l) -> list[str]:
    """Central elements other than 0 and 1, one from each complementary pair."""
    view = _as_view(l)
    out = []
    for c in center(view):
        if c in (view.top, view.bottom):
            continue
        if view.neg(c) not in out:
            out.append(c)
    return out


def interval(l, c: str) -> OmlView:
    """The interval ``[0, c]`` with relative negation ``x -> ~x & c``."""
    view = _as_view(l)
    alg = view.algebra
    p = alg.poset
    keep = [x for x in alg.elements if p.leq(x, c)]
    sub = Poset(keep, [(x, y) for x in keep for y in keep if p.leq(x, y)])
    tables = [
        {(x, y): alg.op(MEET, x, y) for x in keep for y in keep},
        {(x, y): alg.op(JOIN, x, y) for x in keep for y in keep},
        {(x,): alg.op(MEET, alg.op(NEG, x), c) for x in keep},
    ]
    return oml_view(mk_algebra(sub, OML_TYPE, tables, alg.names))


def factor_by_central(l, c: str):
    """Split ``l`` as ``[0, c] x [0, ~c]``.

    Returns the two interval lattices and the isomorphism
    ``x -> (x & c, x & ~c)`` onto their product.
    """
    view = _as_view(l)
    if c in (view.top, view.bottom):
        raise TrivialCentralElement(f"{c!r} gives a trivial factorization")
    if c not in center(view):
        raise NotCentral(f"{c!r} is not in the center")
    nc = view.neg(c)
    l1, l2 = interval(view, c), interval(view, nc)
    prod = product(l1.algebra, l2.algebra)
    g = AlgebraMap(view.algebra, prod,
                   {x: pair_id(view.meet(x, c), view.meet(x, nc)) for x in view.elements})
    if not is_isomorphism(g):
        raise RuntimeError(f"factorization at {c!r} is not an isomorphism")
    return l1, l2, g


def nested_id(coords) -> str:
    out = coords[0]
    for y in coords[1:]:
        out = pair_id(out, y)
    return out


def iterated_product(factors: list[TVAlgebra], typ=OML_TYPE, names=OML_NAMES) -> TVAlgebra:
    if not factors:
        return trivial(typ, names)
    out = factors[0]
    for f in factors[1:]:
        out = product(out, f)
    return out


def _decompose_coords(view: OmlView):
    if view.size == 1:
        return [], {x: () for x in view.elements}
    splits = central_splits(view)
    if not splits:
        return [view], {x: (x,) for x in view.elements}
    c = splits[0]
    l1, l2, _ = factor_by_central(view, c)
    f1, m1 = _decompose_coords(l1)
    f2, m2 = _decompose_coords(l2)
    nc = view.neg(c)
    coords = {x: m1[view.meet(x, c)] + m2[view.meet(x, nc)] for x in view.elements}
    return f1 + f2, coords


def decompose(l):
    """Irreducible factors of ``l`` and an isomorphism onto their product.

    The product is left-nested; with no factors it is the one-element lattice.
    """
    view = _as_view(l)
    factors, coords = _decompose_coords(view)
    prod = iterated_product([f.algebra for f in factors], names=view.algebra.names)
    if factors:
        mapping = {x: nested_id(coords[x]) for x in view.elements}
    else:
        mapping = {x: prod.top for x in view.elements}
    g = AlgebraMap(view.algebra, prod, mapping)
    if not is_isomorphism(g):
        raise RuntimeError("reconstruction map is not an isomorphism")
    return factors, g


# standard lattices --------------------------------------------------------

def _ortho_from_order(elements, covers, neg, names=OML_NAMES) -> TVAlgebra:
    p = mk_poset(elements, covers)
    els = p.elements
    meet_t, join_t = {}, {}
    for x in els:
        for y in els:
            meet_t[x, y] = els[p.meet_idx(p.idx(x), p.idx(y))]
            join_t[x, y] = els[p.join_idx(p.idx(x), p.idx(y))]
    return mk_algebra(p, OML_TYPE, [meet_t, join_t, {(x,): neg[x] for x in els}], names)


def two() -> TVAlgebra:
    """The two-element Boolean algebra."""
    return _ortho_from_order(["0", "1"], [("0", "1")], {"0": "1", "1": "0"})


def one() -> TVAlgebra:
    return trivial(OML_TYPE, OML_NAMES)


def boolean_algebra(k: int) -> TVAlgebra:
    """``2**k`` as a left-nested product of copies of :func:`two`."""
    if k == 0:
        return one()
    out = two()
    for _ in range(k - 1):
        out = product(out, two())
    return out


def mo(n: int) -> TVAlgebra:
    """MO_n: 0 and 1 plus ``n`` incomparable complementary pairs."""
    letters = "abcdefghijklmnopqrstuvwxyz"
    mids = []
    neg = {"0": "1", "1": "0"}
    for i in range(n):
        x = letters[i]
        mids += [x, x + "'"]
        neg[x], neg[x + "'"] = x + "'", x
    covers = [("0", x) for x in mids] + [(x, "1") for x in mids]
    return _ortho_from_order(["0"] + mids + ["1"], covers, neg)


def benzene() -> TVAlgebra:
    """The hexagon O6: 0 < a < b < 1 and 0 < b' < a' < 1.  Not orthomodular."""
    covers = [("0", "a"), ("a", "b"), ("b", "1"), ("0", "b'"), ("b'", "a'"), ("a'", "1")]
    neg = {"0": "1", "1": "0", "a": "a'", "a'": "a", "b": "b'", "b'": "b"}
    return _ortho_from_order(["0", "a", "b", "b'", "a'", "1"], covers, neg)


# enumeration --------------------------------------------------------------

_UNK, _LT, _GT, _INC = 0, 1, 2, 3
_FLIP = {_LT: _GT, _GT: _LT, _INC: _INC}


def _ortho_orders(k: int):
    """Yield strict-order masks on ``2k`` middle points closed under ``i -> i ^ 1``.

    Point ``i ^ 1`` is the complement of ``i``.  Each yielded list ``lt`` has
    ``lt[u]`` = bitmask of points strictly above ``u``; the order reverses
    under complementation and complements are incomparable.
    """
    m = 2 * k
    rel = [[_UNK] * m for _ in range(m)]
    for i in range(m):
        rel[i][i ^ 1] = _INC
    orbits = []
    seen = set()
    for u in range(m):
        for v in range(u + 1, m):
            if v == u ^ 1 or (u, v) in seen:
                continue
            a, b = v ^ 1, u ^ 1
            seen.add((u, v))
            seen.add((min(a, b), max(a, b)))
            orbits.append((u, v))

    lt = [0] * m
    nlt = [1 << u for u in range(m)]
    for u in range(m):
        nlt[u] |= 1 << (u ^ 1)

    def put(u, v, r):
        rel[u][v] = r
        rel[v][u] = _FLIP[r]
        if r == _LT:
            lt[u] |= 1 << v
            nlt[v] |= 1 << u
        elif r == _GT:
            lt[v] |= 1 << u
            nlt[u] |= 1 << v
        else:
            nlt[u] |= 1 << v
            nlt[v] |= 1 << u

    def snapshot():
        return [row[:] for row in rel], lt[:], nlt[:]

    def restore(s):
        nonlocal rel
        r, l, nl = s
        rel = r
        lt[:] = l
        nlt[:] = nl

    def violates():
        for u in range(m):
            for w in bits(lt[u]):
                if lt[w] & nlt[u]:
                    return True
        return False

    def search(pos):
        if pos == len(orbits):
            yield lt[:]
            return
        u, v = orbits[pos]
        for r in (_LT, _GT, _INC):
            s = snapshot()
            put(u, v, r)
            put(v ^ 1, u ^ 1, r)
            if not violates():
                yield from search(pos + 1)
            restore(s)

    yield from search(0)


def _pair_names(k):
    letters = "abcdefghijklmnopqrstuvwxyz"
    out = []
    for i in range(k):
        out += [letters[i], letters[i] + "'"]
    return out


def _build_ortholattice(k: int, lt: list[int]) -> Optional[TVAlgebra]:
    m = 2 * k
    names = ["0"] + _pair_names(k) + ["1"]
    n = m + 2
    down = [0] * n
    full = (1 << n) - 1
    down[0] = 1
    down[n - 1] = full
    for v in range(m):
        d = 1 | (1 << (v + 1))
        for u in range(m):
            if lt[u] >> v & 1:
                d |= 1 << (u + 1)
        down[v + 1] = d
    p = Poset._from_masks(names, down)
    if not p.is_lattice():
        return None
    negi = [n - 1] + [((i ^ 1) + 1) for i in range(m)] + [0]
    for x in range(n):
        if p.join_idx(x, negi[x]) != n - 1:
            return None
    meet_t = [p.meet_idx(x, y) for x in range(n) for y in range(n)]
    join_t = [p.join_idx(x, y) for x in range(n) for y in range(n)]
    return TVAlgebra(p, OML_TYPE, [meet_t, join_t, negi], OML_NAMES)


def _dedup(algebras):
    buckets = {}
    out = []
    for a in algebras:
        key = tuple(sorted(_fingerprints(a)))
        bucket = buckets.setdefault(key, [])
        if any(find_isomorphism(a, b) is not None for b in bucket):
            continue
        bucket.append(a)
        out.append(a)
    return out


def enumerate_ortholattices(n: int, cap: int = ENUMERATION_CAP) -> list[TVAlgebra]:
    """All orthocomplemented lattices with at most ``n`` elements, up to isomorphism."""
    if n > cap:
        raise CapExceeded(f"enumeration is capped at {cap} elements")
    found = []
    if n >= 1:
        found.append(one())
    for size in range(2, n + 1, 2):
        k = (size - 2) // 2
        raw = []
        for lt in _ortho_orders(k):
            a = _build_ortholattice(k, lt)
            if a is not None:
                raw.append(a)
        found.extend(_dedup(raw))
    return found


def enumerate_omls(n: int, cap: int = ENUMERATION_CAP) -> list[OmlView]:
    """All orthomodular lattices with at most ``n`` elements, up to isomorphism.

    Ordered by size; within a size, by discovery order of the search.
    """
    out = []
    for a in enumerate_ortholattices(n, cap):
        if check_oml(a).ok:
            out.append(oml_view(a))
    return out
