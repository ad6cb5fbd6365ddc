"""
Finite partial orders.

Elements are opaque string identifiers.  Internally every element gets an
index and the order is stored as two lists of bitmasks: ``_down[i]`` holds the
elements below ``i`` and ``_up[i]`` the elements above it.  Meets and joins of
arbitrary subsets are then a handful of integer operations.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Optional

from .errors import (CycleDetected, DuplicateElement, NoTopElement,
                     NotALattice, NotAPartialOrder, NotIsotone,
                     SubsetCapExceeded, UnknownElement)

SUBSET_CAP = 20


def bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """An immutable finite poset.

    Build one with :func:`mk_poset` (from a cover list) or directly from the
    full order relation::

        Poset(["0", "1"], [("0", "0"), ("0", "1"), ("1", "1")])
    """

    __slots__ = ("elements", "index", "size", "_down", "_up", "_full",
                 "_meet2", "_join2", "_top", "_bottom")

    def __init__(self, elements: Iterable[str], leq: Iterable[tuple[str, str]]):
        elements = list(elements)
        index = _index(elements)
        n = len(elements)
        down = [0] * n
        for a, b in leq:
            down[_lookup(index, b)] |= 1 << _lookup(index, a)
        for i in range(n):
            if not down[i] >> i & 1:
                raise NotAPartialOrder(f"not reflexive at {elements[i]!r}")
        for i in range(n):
            for j in bits(down[i]):
                if j != i and down[j] >> i & 1:
                    raise NotAPartialOrder(
                        f"not antisymmetric: {elements[i]!r}, {elements[j]!r}")
                if down[j] & ~down[i]:
                    raise NotAPartialOrder(
                        f"not transitive below {elements[i]!r}")
        self._setup(elements, index, down)

    @classmethod
    def _from_masks(cls, elements: list[str], down: list[int]) -> "Poset":
        p = cls.__new__(cls)
        p._setup(elements, _index(elements), down)
        return p

    def _setup(self, elements, index, down):
        n = len(elements)
        self.elements = tuple(elements)
        self.index = index
        self.size = n
        self._full = (1 << n) - 1
        self._down = list(down)
        up = [0] * n
        for i in range(n):
            for j in bits(down[i]):
                up[j] |= 1 << i
        self._up = up
        self._meet2 = [[self._greatest(down[i] & down[j]) for j in range(n)]
                       for i in range(n)]
        self._join2 = [[self._least(up[i] & up[j]) for j in range(n)]
                       for i in range(n)]
        self._top = self._greatest(self._full)
        self._bottom = self._least(self._full)

    def __repr__(self):
        return f"Poset({list(self.elements)!r}, size={self.size})"

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    # index-level helpers -------------------------------------------------

    def _greatest(self, mask: int) -> Optional[int]:
        for m in bits(mask):
            if mask & ~self._down[m] == 0:
                return m
        return None

    def _least(self, mask: int) -> Optional[int]:
        for m in bits(mask):
            if mask & ~self._up[m] == 0:
                return m
        return None

    def down_mask(self, x: str) -> int:
        return self._down[self.idx(x)]

    def up_mask(self, x: str) -> int:
        return self._up[self.idx(x)]

    def idx(self, x: str) -> int:
        return _lookup(self.index, x)

    def mask_of(self, subset: Iterable[str]) -> int:
        mask = 0
        for x in subset:
            mask |= 1 << self.idx(x)
        return mask

    def meet_mask(self, mask: int) -> Optional[int]:
        lower = self._full
        for i in bits(mask):
            lower &= self._down[i]
        return self._greatest(lower)

    def join_mask(self, mask: int) -> Optional[int]:
        upper = self._full
        for i in bits(mask):
            upper &= self._up[i]
        return self._least(upper)

    def meet_idx(self, i: int, j: int) -> Optional[int]:
        return self._meet2[i][j]

    def join_idx(self, i: int, j: int) -> Optional[int]:
        return self._join2[i][j]

    def leq_idx(self, i: int, j: int) -> bool:
        return bool(self._down[j] >> i & 1)

    # public, name-level --------------------------------------------------

    def leq(self, a: str, b: str) -> bool:
        return self.leq_idx(self.idx(a), self.idx(b))

    def lt(self, a: str, b: str) -> bool:
        return a != b and self.leq(a, b)

    def covers(self) -> list[tuple[str, str]]:
        """The Hasse diagram as ``(lower, upper)`` pairs."""
        out = []
        for j in range(self.size):
            strict = self._down[j] & ~(1 << j)
            for i in bits(strict):
                between = strict & self._up[i] & ~(1 << i)
                if not between:
                    out.append((self.elements[i], self.elements[j]))
        return out

    def relation(self) -> list[tuple[str, str]]:
        return [(self.elements[i], self.elements[j])
                for j in range(self.size) for i in bits(self._down[j])]

    def is_lattice(self) -> bool:
        if self.size == 0:
            return False
        n = self.size
        return all(self._meet2[i][j] is not None and self._join2[i][j] is not None
                   for i in range(n) for j in range(i + 1, n))

    def dual(self) -> "Poset":
        """The same carrier with the order reversed."""
        return Poset._from_masks(list(self.elements), list(self._up))


def _index(elements):
    index = {}
    for i, e in enumerate(elements):
        if e in index:
            raise DuplicateElement(f"duplicate element {e!r}")
        index[e] = i
    return index


def _lookup(index, x):
    try:
        return index[x]
    except KeyError:
        raise UnknownElement(f"unknown element {x!r}") from None


def mk_poset(elements: Iterable[str], covers: Iterable[tuple[str, str]]) -> Poset:
    """Build a poset from its elements and a list of ``(lower, upper)`` pairs.

    The order is the reflexive-transitive closure of the given pairs, which
    need not be a minimal cover list.
    """
    elements = list(elements)
    index = _index(elements)
    n = len(elements)
    above = [0] * n
    for a, b in covers:
        above[_lookup(index, a)] |= 1 << _lookup(index, b)
    # reachability by repeated relaxation; n is small
    reach = [above[i] | (1 << i) for i in range(n)]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            r = reach[i]
            for j in bits(r):
                r |= reach[j]
            if r != reach[i]:
                reach[i] = r
                changed = True
    for i in range(n):
        for j in bits(reach[i]):
            if j != i and reach[j] >> i & 1:
                raise CycleDetected(
                    f"cover list forces {elements[i]!r} = {elements[j]!r}")
    down = [0] * n
    for i in range(n):
        for j in bits(reach[i]):
            down[j] |= 1 << i
    return Poset._from_masks(elements, down)


def meet(p: Poset, subset: Iterable[str]) -> Optional[str]:
    """Greatest lower bound of ``subset`` or ``None`` when it does not exist.

    The meet of the empty set is the top element; asking for it in a poset
    without a top raises :class:`NoTopElement`.
    """
    mask = p.mask_of(subset)
    if mask == 0 and p._top is None:
        raise NoTopElement("meet of the empty set needs a top element")
    m = p.meet_mask(mask)
    return None if m is None else p.elements[m]


def join(p: Poset, subset: Iterable[str]) -> Optional[str]:
    mask = p.mask_of(subset)
    if mask == 0 and p._bottom is None:
        raise NoTopElement("join of the empty set needs a bottom element")
    m = p.join_mask(mask)
    return None if m is None else p.elements[m]


def top(p: Poset) -> Optional[str]:
    return None if p._top is None else p.elements[p._top]


def bottom(p: Poset) -> Optional[str]:
    return None if p._bottom is None else p.elements[p._bottom]


@dataclass(frozen=True)
class OrderMap:
    source: Poset
    target: Poset
    mapping: Mapping[str, str]

    def __post_init__(self):
        missing = [x for x in self.source.elements if x not in self.mapping]
        if missing:
            raise UnknownElement(f"map is undefined on {missing[0]!r}")
        for x in self.source.elements:
            if self.mapping[x] not in self.target.index:
                raise UnknownElement(
                    f"image {self.mapping[x]!r} of {x!r} is not in the target")

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    def index_map(self) -> list[int]:
        t = self.target.index
        return [t[self.mapping[x]] for x in self.source.elements]


def is_isotone(g: OrderMap) -> bool:
    src, tgt = g.source, g.target
    img = g.index_map()
    for j in range(src.size):
        for i in bits(src._down[j]):
            if not tgt.leq_idx(img[i], img[j]):
                return False
    return True


def is_continuous(g: OrderMap, method: str = "closure") -> bool:
    """Does ``g`` carry every existing meet to the meet of the images?

    ``method`` picks how the quantification over all subsets of the source
    is discharged; the three agree wherever all apply:

    ``"subsets"``
        literal enumeration of all ``2**n`` subsets, ``n <= SUBSET_CAP``.
    ``"closure"``
        exact for any source.  A subset only matters through its set of
        lower bounds and the set of lower bounds of its image, so a search
        over the reachable pairs of those masks covers every subset.
    ``"lattice"``
        pairwise meets plus the empty and full subsets; lattice sources only.
    """
    if not is_isotone(g):
        raise NotIsotone("continuity is only defined for isotone maps")
    if method == "closure":
        return _continuous_closure(g)
    if method == "subsets":
        return _continuous_subsets(g)
    if method == "lattice":
        return _continuous_lattice(g)
    raise ValueError(f"unknown continuity method {method!r}")


def _meets_agree(src, tgt, img, lower_src, lower_tgt):
    m = src._greatest(lower_src)
    if m is None:
        return True
    return tgt._greatest(lower_tgt) == img[m]


def _continuous_closure(g):
    src, tgt = g.source, g.target
    img = g.index_map()
    start = (src._full, tgt._full)
    seen = {start}
    queue = deque([start])
    while queue:
        ls, lt = queue.popleft()
        if not _meets_agree(src, tgt, img, ls, lt):
            return False
        for a in range(src.size):
            nxt = (ls & src._down[a], lt & tgt._down[img[a]])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return True


def _continuous_subsets(g):
    src, tgt = g.source, g.target
    n = src.size
    if n > SUBSET_CAP:
        raise SubsetCapExceeded(
            f"{n} elements exceeds the subset-enumeration cap of {SUBSET_CAP}; "
            "use method='lattice' or 'closure'")
    img = g.index_map()
    for mask in range(1 << n):
        ls, lt = src._full, tgt._full
        for a in bits(mask):
            ls &= src._down[a]
            lt &= tgt._down[img[a]]
        if not _meets_agree(src, tgt, img, ls, lt):
            return False
    return True


def _continuous_lattice(g):
    src, tgt = g.source, g.target
    if not src.is_lattice() or src._top is None:
        raise NotALattice("lattice-mode continuity needs a lattice source")
    img = g.index_map()
    if tgt._top != img[src._top]:
        return False
    every = 0
    for i in range(src.size):
        every |= 1 << img[i]
    if tgt.meet_mask(every) != img[src._bottom]:
        return False
    for i, j in combinations(range(src.size), 2):
        if tgt._meet2[img[i]][img[j]] != img[src._meet2[i][j]]:
            return False
    return True


def is_top_preserving(g: OrderMap) -> bool:
    s, t = top(g.source), top(g.target)
    if s is None or t is None:
        raise NoTopElement("top preservation needs tops on both sides")
    return g.mapping[s] == t
