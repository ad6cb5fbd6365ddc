"""
Truth-value algebras: a poset with a top element plus typed operation tables.

Operation tables are stored per label as flat lists indexed in mixed radix,
``table[sum(arg_k * n**(r-1-k))]``, with element indices rather than names.
Name-level access goes through :meth:`TVAlgebra.op`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian
from typing import Mapping, Optional, Sequence

from .errors import (ArityMismatch, OmlogicError, BadType, CarrierTooLarge, NonTotalTable,
                     NoTopElement, NotAProduct, OutputNotInCarrier,
                     TypeMismatch, UnknownElement)
from .poset import OrderMap, Poset, is_continuous, is_isotone, is_top_preserving

IRREDUCIBLE_CAP = 12


@dataclass(frozen=True)
class AlgType:
    """Arities of the operation labels 0, 1, ..., in non-increasing order."""

    arities: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "arities", tuple(int(a) for a in self.arities))
        if any(a < 0 for a in self.arities):
            raise BadType("arities must be non-negative")
        if any(a < b for a, b in zip(self.arities, self.arities[1:])):
            raise BadType(f"arities must be non-increasing: {self.arities}")

    def __len__(self):
        return len(self.arities)

    def __iter__(self):
        return iter(self.arities)

    def __str__(self):
        return "(" + ",".join(map(str, self.arities)) + ")"


OML_TYPE = AlgType((2, 2, 1))


def pair_id(x: str, y: str) -> str:
    return f"({x}|{y})"


class TVAlgebra:
    """A finite truth-value algebra ``(A, <=, O, label)``.

    Instances are immutable.  ``factors`` is set on algebras built by
    :func:`product` and records the pair structure of the carrier.
    """

    def __init__(self, poset: Poset, typ: AlgType, tables: Sequence[list[int]],
                 names: Sequence[str], factors=None, pairs=None):
        self.poset = poset
        self.typ = typ
        self._t = [list(t) for t in tables]
        self.names = tuple(names)
        self.factors = factors
        self.pairs = pairs
        self._name_index = {nm: k for k, nm in enumerate(self.names)}
        self._cache = {}

    def __repr__(self):
        return f"<TVAlgebra type={self.typ} size={self.size}>"

    @property
    def elements(self) -> tuple[str, ...]:
        return self.poset.elements

    @property
    def size(self) -> int:
        return self.poset.size

    @property
    def index(self):
        return self.poset.index

    @cached_property
    def top(self) -> str:
        return self.poset.elements[self.poset._top]

    @property
    def top_idx(self) -> int:
        return self.poset._top

    def label(self, op) -> int:
        if isinstance(op, int):
            if not 0 <= op < len(self.typ):
                raise ArityMismatch(f"no operation with label {op}")
            return op
        try:
            return self._name_index[op]
        except KeyError:
            raise ArityMismatch(f"no operation named {op!r}") from None

    def arity(self, op) -> int:
        return self.typ.arities[self.label(op)]

    def apply_idx(self, k: int, args: Sequence[int]) -> int:
        n = self.size
        pos = 0
        for a in args:
            pos = pos * n + a
        return self._t[k][pos]

    def op(self, op, *args: str) -> str:
        k = self.label(op)
        if len(args) != self.typ.arities[k]:
            raise ArityMismatch(
                f"{self.names[k]} takes {self.typ.arities[k]} arguments")
        return self.elements[self.apply_idx(k, [self.poset.idx(a) for a in args])]

    def table(self, op) -> dict[tuple[str, ...], str]:
        k = self.label(op)
        els = self.elements
        return {tuple(els[i] for i in args): els[self.apply_idx(k, args)]
                for args in cartesian(range(self.size), repeat=self.typ.arities[k])}

    def leq(self, a: str, b: str) -> bool:
        return self.poset.leq(a, b)


def _check_top(poset):
    if poset._top is None:
        raise NoTopElement("a truth-value algebra needs a top element")


def mk_algebra(poset: Poset, typ: AlgType, tables: Sequence[Mapping],
               names: Optional[Sequence[str]] = None) -> TVAlgebra:
    """Validate operation tables over ``poset`` and build the algebra.

    Each table maps argument tuples of element names to an element name.
    Unary tables may also be keyed by bare names.
    """
    if not isinstance(typ, AlgType):
        typ = AlgType(tuple(typ))
    _check_top(poset)
    if len(tables) != len(typ):
        raise ArityMismatch(f"type {typ} needs {len(typ)} tables, got {len(tables)}")
    if names is None:
        names = [f"f{k}" for k in range(len(typ))]
    names = list(names)
    if len(names) != len(typ):
        raise ArityMismatch("one name per operation is required")
    if len(set(names)) != len(names):
        raise ArityMismatch("operation names must be distinct")
    n = poset.size
    index = poset.index
    flat = []
    for k, (tab, r) in enumerate(zip(tables, typ.arities)):
        out = [None] * (n ** r)
        for key, val in tab.items():
            args = (key,) if r == 1 and isinstance(key, str) else tuple(key)
            if len(args) != r:
                raise ArityMismatch(
                    f"{names[k]}: entry {key!r} has {len(args)} arguments, expected {r}")
            pos = 0
            for a in args:
                if a not in index:
                    raise UnknownElement(f"{names[k]}: unknown argument {a!r}")
                pos = pos * n + index[a]
            if val not in index:
                raise OutputNotInCarrier(f"{names[k]}{args!r} = {val!r} is not an element")
            out[pos] = index[val]
        if any(v is None for v in out):
            raise NonTotalTable(f"table for {names[k]} is not total")
        flat.append(out)
    return TVAlgebra(poset, typ, flat, names)


def trivial(typ: AlgType, names: Optional[Sequence[str]] = None) -> TVAlgebra:
    """The one-element algebra of the given type, carrier ``{"1"}``."""
    if not isinstance(typ, AlgType):
        typ = AlgType(tuple(typ))
    poset = Poset(["1"], [("1", "1")])
    names = list(names) if names is not None else [f"f{k}" for k in range(len(typ))]
    return TVAlgebra(poset, typ, [[0] for _ in typ.arities], names)


def product(a1: TVAlgebra, a2: TVAlgebra) -> TVAlgebra:
    """Componentwise product with element identifiers ``"(x|y)"``."""
    if a1.typ != a2.typ:
        raise TypeMismatch(f"cannot multiply types {a1.typ} and {a2.typ}")
    n1, n2 = a1.size, a2.size
    elements = [pair_id(x, y) for x in a1.elements for y in a2.elements]
    down = [0] * (n1 * n2)
    for i in range(n1):
        for j in range(n2):
            d = 0
            for i2 in range(n1):
                if a1.poset.leq_idx(i2, i):
                    row = a2.poset._down[j]
                    d |= row << (i2 * n2)
            down[i * n2 + j] = d
    poset = Poset._from_masks(elements, down)
    tables = []
    n = n1 * n2
    for k, r in enumerate(a1.typ.arities):
        out = []
        for args in cartesian(range(n), repeat=r):
            x = a1.apply_idx(k, [a // n2 for a in args])
            y = a2.apply_idx(k, [a % n2 for a in args])
            out.append(x * n2 + y)
        tables.append(out)
    pairs = {pair_id(x, y): (x, y) for x in a1.elements for y in a2.elements}
    return TVAlgebra(poset, a1.typ, tables, a1.names, factors=(a1, a2), pairs=pairs)


def power(a: TVAlgebra, k: int) -> TVAlgebra:
    """Left-nested product ``((a x a) x a) ...``; ``k = 0`` gives the trivial algebra."""
    if k == 0:
        return trivial(a.typ, a.names)
    out = a
    for _ in range(k - 1):
        out = product(out, a)
    return out


@dataclass(frozen=True)
class AlgebraMap:
    source: TVAlgebra
    target: TVAlgebra
    mapping: Mapping[str, str]

    def __post_init__(self):
        if self.source.typ != self.target.typ:
            raise TypeMismatch("algebra maps need equal types on both sides")
        OrderMap(self.source.poset, self.target.poset, self.mapping)

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    @property
    def order_map(self) -> OrderMap:
        return OrderMap(self.source.poset, self.target.poset, self.mapping)

    def is_bijective(self) -> bool:
        return (self.source.size == self.target.size
                and len(set(self.mapping[x] for x in self.source.elements))
                == self.target.size)

    def inverse(self) -> "AlgebraMap":
        if not self.is_bijective():
            raise ValueError("only bijections have inverses")
        return AlgebraMap(self.target, self.source,
                          {v: k for k, v in self.mapping.items()
                           if k in self.source.index})

    def compose(self, other: "AlgebraMap") -> "AlgebraMap":
        """``other`` after ``self``."""
        return AlgebraMap(self.source, other.target,
                          {x: other.mapping[self.mapping[x]] for x in self.source.elements})


def projection(prod: TVAlgebra, i: int) -> AlgebraMap:
    if prod.factors is None:
        raise NotAProduct("algebra was not built by product()")
    if i not in (1, 2):
        raise ValueError("projection index must be 1 or 2")
    return AlgebraMap(prod, prod.factors[i - 1],
                      {e: prod.pairs[e][i - 1] for e in prod.elements})


def identity_map(a: TVAlgebra) -> AlgebraMap:
    return AlgebraMap(a, a, {x: x for x in a.elements})


def commutes_with_ops(g: AlgebraMap) -> bool:
    src, tgt = g.source, g.target
    t_index = tgt.index
    img = [t_index[g.mapping[x]] for x in src.elements]
    for k, r in enumerate(src.typ.arities):
        for args in cartesian(range(src.size), repeat=r):
            if img[src.apply_idx(k, args)] != tgt.apply_idx(k, [img[a] for a in args]):
                return False
    return True


def is_homomorphism(g: AlgebraMap, continuity: str = "closure") -> bool:
    """Algebra homomorphism that is also isotone, continuous and top-preserving."""
    if not commutes_with_ops(g):
        return False
    om = g.order_map
    if not is_isotone(om):
        return False
    if not is_top_preserving(om):
        return False
    return is_continuous(om, method=continuity)


def is_isomorphism(g: AlgebraMap) -> bool:
    return (g.is_bijective() and is_homomorphism(g)
            and is_homomorphism(g.inverse()))


# isomorphism search ------------------------------------------------------

def _fingerprints(a: TVAlgebra) -> list[tuple]:
    p = a.poset
    n = a.size
    out = []
    for i in range(n):
        fp = [bin(p._down[i]).count("1"), bin(p._up[i]).count("1")]
        for k, r in enumerate(a.typ.arities):
            if r == 0:
                fp.append(a.apply_idx(k, ()) == i)
            elif r == 1:
                j = a.apply_idx(k, (i,))
                fp.append((j == i, bin(p._down[j]).count("1")))
            else:
                fp.append(a.apply_idx(k, (i,) * r) == i)
                fp.append(sum(1 for j in range(n)
                              if a.apply_idx(k, (i,) + (j,) * (r - 1)) == i))
        out.append(tuple(fp))
    return out


def _preimages(a: TVAlgebra):
    """Per label, the argument tuples grouped by result."""
    n = a.size
    out = []
    for k, r in enumerate(a.typ.arities):
        by_result = [[] for _ in range(n)]
        for args in cartesian(range(n), repeat=r):
            by_result[a.apply_idx(k, args)].append(args)
        out.append(by_result)
    return out


def find_isomorphism(a1: TVAlgebra, a2: TVAlgebra,
                     fixed: Optional[Mapping[str, str]] = None) -> Optional[AlgebraMap]:
    """Search for an isomorphism ``a1 -> a2``, optionally extending ``fixed``.

    Backtracking over an order of elements sorted by candidate count; a
    partial assignment is rejected as soon as it breaks the order in either
    direction or an operation table whose arguments and result are assigned.
    """
    if a1.typ != a2.typ or a1.size != a2.size:
        return None
    n = a1.size
    f1, f2 = _fingerprints(a1), _fingerprints(a2)
    if sorted(f1) != sorted(f2):
        return None
    cand = [[j for j in range(n) if f2[j] == f1[i]] for i in range(n)]
    assign = [-1] * n
    used = [False] * n
    if fixed:
        for x, y in fixed.items():
            i, j = a1.poset.idx(x), a2.poset.idx(y)
            if j not in cand[i]:
                return None
            cand[i] = [j]
    pre1 = _preimages(a1)
    p1, p2 = a1.poset, a2.poset
    arities = a1.typ.arities
    order = sorted(range(n), key=lambda i: (len(cand[i]), -f1[i][1]))

    def consistent(i, j):
        for u in range(n):
            v = assign[u]
            if v < 0:
                continue
            if p1.leq_idx(u, i) != p2.leq_idx(v, j) or p1.leq_idx(i, u) != p2.leq_idx(j, v):
                return False
        for k, r in enumerate(arities):
            if r == 0:
                continue
            # tuples with i as an argument
            for args in _tuples_with(i, r, n):
                mapped = []
                for a in args:
                    if assign[a] < 0:
                        break
                    mapped.append(assign[a])
                else:
                    res = assign[a1.apply_idx(k, args)]
                    if res >= 0 and res != a2.apply_idx(k, mapped):
                        return False
            # tuples producing i
            for args in pre1[k][i]:
                if all(assign[a] >= 0 for a in args):
                    if a2.apply_idx(k, [assign[a] for a in args]) != j:
                        return False
        return True

    def search(pos):
        if pos == n:
            return True
        i = order[pos]
        for j in cand[i]:
            if used[j]:
                continue
            assign[i] = j
            if consistent(i, j):
                used[j] = True
                if search(pos + 1):
                    return True
                used[j] = False
            assign[i] = -1
        return False

    if not search(0):
        return None
    g = AlgebraMap(a1, a2, {a1.elements[i]: a2.elements[assign[i]] for i in range(n)})
    # order isomorphisms commuting with the operations are isomorphisms
    return g


def _tuples_with(i, r, n):
    for args in cartesian(range(n), repeat=r):
        if i in args:
            yield args


# congruences and brute-force factorization --------------------------------

class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True

    def labels(self):
        seen = {}
        return tuple(seen.setdefault(self.find(x), len(seen))
                     for x in range(len(self.parent)))


def _generate_congruence(a: TVAlgebra, pairs) -> tuple[int, ...]:
    n = a.size
    uf = _UnionFind(n)
    pending = list(pairs)
    arities = a.typ.arities
    while pending:
        u, v = pending.pop()
        if not uf.union(u, v):
            continue
        for k, r in enumerate(arities):
            for p in range(r):
                for rest in cartesian(range(n), repeat=r - 1):
                    au = rest[:p] + (u,) + rest[p:]
                    av = rest[:p] + (v,) + rest[p:]
                    x, y = a.apply_idx(k, au), a.apply_idx(k, av)
                    if uf.find(x) != uf.find(y):
                        pending.append((x, y))
    return uf.labels()


def _join_partitions(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    n = len(p)
    uf = _UnionFind(n)
    for part in (p, q):
        first = {}
        for x, c in enumerate(part):
            if c in first:
                uf.union(first[c], x)
            else:
                first[c] = x
    return uf.labels()


def congruences(a: TVAlgebra) -> list[tuple[int, ...]]:
    """All congruences of the operation structure, as canonical label tuples."""
    n = a.size
    key = "congruences"
    if key in a._cache:
        return a._cache[key]
    found = {tuple(range(n))}
    principal = set()
    for i in range(n):
        for j in range(i + 1, n):
            principal.add(_generate_congruence(a, [(i, j)]))
    found |= principal
    frontier = list(found)
    while frontier:
        new = []
        for p in frontier:
            for q in principal:
                r = _join_partitions(p, q)
                if r not in found:
                    found.add(r)
                    new.append(r)
        frontier = new
    out = sorted(found, key=lambda c: (-max(c, default=0), c))
    a._cache[key] = out
    return out


def _quotient(a: TVAlgebra, theta, other):
    """The quotient by ``theta`` ordered through classes of ``other``."""
    n = a.size
    k = max(theta) + 1
    reps = [None] * k
    for x in range(n):
        if reps[theta[x]] is None:
            reps[theta[x]] = x
    names = [a.elements[r] for r in reps]
    leq = set()
    for x in range(n):
        for y in range(n):
            if other[x] == other[y] and a.poset.leq_idx(x, y):
                leq.add((names[theta[x]], names[theta[y]]))
    poset = Poset(names, leq)
    if poset._top is None:
        raise NoTopElement("quotient has no top")
    tables = []
    for kk, r in enumerate(a.typ.arities):
        tables.append([theta[a.apply_idx(kk, [reps[c] for c in args])]
                       for args in cartesian(range(k), repeat=r)])
    return TVAlgebra(poset, a.typ, tables, a.names)


def factorizations_bruteforce(a: TVAlgebra, cap: int = IRREDUCIBLE_CAP,
                              first_only: bool = False):
    """Non-trivial factorizations ``a ~ q1 x q2`` found from congruence pairs.

    Yields ``(q1, q2, iso)`` where ``iso`` maps ``a`` onto ``product(q1, q2)``
    and has been checked to be an isomorphism.
    """
    n = a.size
    if n > cap:
        raise CarrierTooLarge(f"carrier of size {n} exceeds cap {cap}")
    cons = [c for c in congruences(a) if 2 <= max(c) + 1 <= n // 2]
    out = []
    for t1 in cons:
        k1 = max(t1) + 1
        if n % k1:
            continue
        for t2 in cons:
            k2 = max(t2) + 1
            if k1 * k2 != n or len(set(zip(t1, t2))) != n:
                continue
            try:
                q1 = _quotient(a, t1, t2)
                q2 = _quotient(a, t2, t1)
            except OmlogicError:
                continue
            prod = product(q1, q2)
            g = AlgebraMap(a, prod, {
                a.elements[x]: pair_id(q1.elements[t1[x]], q2.elements[t2[x]])
                for x in range(n)})
            if is_isomorphism(g):
                out.append((q1, q2, g))
                if first_only:
                    return out
    return out


def is_irreducible_bruteforce(a: TVAlgebra, cap: int = IRREDUCIBLE_CAP) -> bool:
    """No factorization into two algebras with at least two elements each."""
    if a.size > cap:
        raise CarrierTooLarge(f"carrier of size {a.size} exceeds cap {cap}")
    return not factorizations_bruteforce(a, cap, first_only=True)
