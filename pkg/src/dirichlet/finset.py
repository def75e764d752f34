"""Skeletal finite sets and functions, with the (co)limits the rest of the
package is checked against.

A finite set is identified with ``{0, ..., n-1}``.  Functions are image
tables.  Everything here is immutable; isomorphisms are explicit
``FinFunction`` values rather than renamings.
"""
from __future__ import annotations

import contextlib
import itertools
import math
import os
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import (
    CodomainMismatch,
    DomainMismatch,
    EnumerationCapExceeded,
    IndexOutOfRange,
    ShapeMismatch,
    ValidationError,
)

DEFAULT_CAP = 10**6
CAP_ENV = "DIRICHLET_ENUM_CAP"


_cap_override: int | None = None


@contextlib.contextmanager
def enumeration_cap(cap: int):
    """Temporarily set the cap used when callers pass ``cap=None``."""
    global _cap_override
    if cap < 1:
        raise ValidationError(f"cap {cap} must be >= 1", "cap >= 1")
    saved, _cap_override = _cap_override, cap
    try:
        yield
    finally:
        _cap_override = saved


def get_cap(cap: int | None = None) -> int:
    """Resolve the enumeration cap: explicit value, override, env var, default."""
    if cap is not None:
        return cap
    if _cap_override is not None:
        return _cap_override
    raw = os.environ.get(CAP_ENV)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValidationError(f"{CAP_ENV}={raw!r} is not an integer", "cap >= 1")
        if value < 1:
            raise ValidationError(f"{CAP_ENV}={value} must be >= 1", "cap >= 1")
        return value
    return DEFAULT_CAP


def check_cap(needed: int, cap: int | None = None, what: str = "enumeration") -> None:
    limit = get_cap(cap)
    if needed > limit:
        raise EnumerationCapExceeded(needed, limit, what)


@dataclass(frozen=True, order=True)
class FinSet:
    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 0:
            raise ValidationError(f"set size must be a nonnegative int, got {self.size!r}",
                                  "size >= 0")

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.size))

    def __contains__(self, x) -> bool:
        return isinstance(x, int) and 0 <= x < self.size

    def __repr__(self) -> str:
        return f"FinSet({self.size})"


def as_finset(x: FinSet | int) -> FinSet:
    return x if isinstance(x, FinSet) else FinSet(x)


@dataclass(frozen=True)
class FinFunction:
    dom: FinSet
    cod: FinSet
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dom", as_finset(self.dom))
        object.__setattr__(self, "cod", as_finset(self.cod))
        object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != self.dom.size:
            raise ValidationError(
                f"table has length {len(self.table)} but dom has size {self.dom.size}",
                "len(table) == dom.size")
        n = self.cod.size
        for i, y in enumerate(self.table):
            if not (isinstance(y, int) and 0 <= y < n):
                raise ValidationError(f"table[{i}] = {y!r} is not < cod.size = {n}",
                                      "table entries < cod.size")

    def __call__(self, x: int) -> int:
        if not 0 <= x < self.dom.size:
            raise IndexOutOfRange(f"{x} not in dom of size {self.dom.size}")
        return self.table[x]

    def __repr__(self) -> str:
        return f"FinFunction({list(self.table)}: {self.dom.size}->{self.cod.size})"

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.cod.size

    def is_bijective(self) -> bool:
        return self.dom.size == self.cod.size and self.is_injective()

    def inverse(self) -> FinFunction:
        if not self.is_bijective():
            raise ValidationError(f"{self!r} is not a bijection", "bijective")
        inv = [0] * self.dom.size
        for i, y in enumerate(self.table):
            inv[y] = i
        return FinFunction(self.cod, self.dom, tuple(inv))

    def image(self) -> list[int]:
        return sorted(set(self.table))


def function(table: Sequence[int], cod: int | FinSet) -> FinFunction:
    """Shorthand: ``function([1, 0], 2)``."""
    return FinFunction(FinSet(len(table)), as_finset(cod), tuple(table))


def identity(a: FinSet | int) -> FinFunction:
    a = as_finset(a)
    return FinFunction(a, a, tuple(range(a.size)))


def compose(g: FinFunction, f: FinFunction) -> FinFunction:
    """``g . f``; f runs first."""
    if f.cod != g.dom:
        raise CodomainMismatch(f"cannot compose: f.cod={f.cod.size} but g.dom={g.dom.size}")
    gt = g.table
    return FinFunction(f.dom, g.cod, tuple(gt[y] for y in f.table))


def terminal_map(a: FinSet | int) -> FinFunction:
    """``!_A : A -> 1``."""
    a = as_finset(a)
    return FinFunction(a, FinSet(1), (0,) * a.size)


def initial_map(a: FinSet | int) -> FinFunction:
    """``!^A : 0 -> A``."""
    return FinFunction(FinSet(0), as_finset(a), ())


def constant(dom: FinSet | int, cod: FinSet | int, value: int) -> FinFunction:
    dom = as_finset(dom)
    return FinFunction(dom, as_finset(cod), (value,) * dom.size)


# -- mixed-radix codes for functions ----------------------------------------

def encode_function(table: Sequence[int], base: int) -> int:
    """Rank of ``table`` among all functions ``len(table) -> base``; position 0
    is the most significant digit."""
    code = 0
    for digit in table:
        code = code * base + digit
    return code


def decode_function(code: int, length: int, base: int) -> tuple[int, ...]:
    digits = [0] * length
    for i in range(length - 1, -1, -1):
        code, digits[i] = divmod(code, base)
    return tuple(digits)


def power(base: int, exp: int) -> int:
    return base ** exp


def exponential(base: FinSet | int, exp: FinSet | int) -> FinSet:
    """The set of functions ``exp -> base``, in mixed-radix order."""
    return FinSet(power(as_finset(base).size, as_finset(exp).size))


def all_functions(dom: FinSet | int, cod: FinSet | int,
                  cap: int | None = None) -> Iterator[FinFunction]:
    """Every function ``dom -> cod`` in mixed-radix order of its table."""
    dom, cod = as_finset(dom), as_finset(cod)
    check_cap(power(cod.size, dom.size), cap, f"functions {dom.size}->{cod.size}")
    for table in itertools.product(range(cod.size), repeat=dom.size):
        yield FinFunction(dom, cod, table)


def all_bijections(dom: FinSet | int, cod: FinSet | int,
                   cap: int | None = None) -> Iterator[FinFunction]:
    dom, cod = as_finset(dom), as_finset(cod)
    if dom.size != cod.size:
        return
    check_cap(math.factorial(dom.size), cap, f"bijections {dom.size}->{cod.size}")
    for table in itertools.permutations(range(cod.size)):
        yield FinFunction(dom, cod, table)


# -- products and coproducts ------------------------------------------------

def product(a: FinSet | int, b: FinSet | int) -> tuple[FinSet, FinFunction, FinFunction]:
    """``a x b`` with pairs ``(i, j)`` coded as ``i * |b| + j``."""
    a, b = as_finset(a), as_finset(b)
    p = FinSet(a.size * b.size)
    p1 = FinFunction(p, a, tuple(i for i in range(a.size) for _ in range(b.size)))
    p2 = FinFunction(p, b, tuple(j for _ in range(a.size) for j in range(b.size)))
    return p, p1, p2


def coproduct(a: FinSet | int, b: FinSet | int) -> tuple[FinSet, FinFunction, FinFunction]:
    a, b = as_finset(a), as_finset(b)
    s = FinSet(a.size + b.size)
    return (s, FinFunction(a, s, tuple(range(a.size))),
            FinFunction(b, s, tuple(range(a.size, a.size + b.size))))


# -- pullbacks and equalizers -----------------------------------------------

@dataclass(frozen=True)
class Pullback:
    apex: FinSet
    p1: FinFunction
    p2: FinFunction
    pairs: tuple[tuple[int, int], ...]
    _index: dict = field(compare=False, repr=False, hash=False)

    def __iter__(self):
        return iter((self.apex, self.p1, self.p2))

    def index_of(self, a: int, b: int) -> int | None:
        return self._index.get((a, b))

    def mediate(self, h: FinFunction, k: FinFunction) -> FinFunction:
        """The unique map into the apex for a commuting cone ``(h, k)``."""
        if h.dom != k.dom:
            raise DomainMismatch("cone legs must share a domain")
        table = []
        for a, b in zip(h.table, k.table):
            i = self._index.get((a, b))
            if i is None:
                raise ValidationError(f"cone does not commute at ({a}, {b})", "cone commutes")
            table.append(i)
        return FinFunction(h.dom, self.apex, tuple(table))


def pullback(f: FinFunction, g: FinFunction) -> Pullback:
    """Fiber product of ``f: A -> C`` and ``g: B' -> C``; pairs in lex order."""
    if f.cod != g.cod:
        raise CodomainMismatch(
            f"pullback needs a cospan: f.cod={f.cod.size}, g.cod={g.cod.size}")
    over: dict[int, list[int]] = {}
    for b, c in enumerate(g.table):
        over.setdefault(c, []).append(b)
    pairs = tuple((a, b) for a, c in enumerate(f.table) for b in over.get(c, ()))
    apex = FinSet(len(pairs))
    return Pullback(apex,
                    FinFunction(apex, f.dom, tuple(a for a, _ in pairs)),
                    FinFunction(apex, g.dom, tuple(b for _, b in pairs)),
                    pairs,
                    {pair: i for i, pair in enumerate(pairs)})


def equalizer(f: FinFunction, g: FinFunction) -> tuple[FinSet, FinFunction]:
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatch("equalizer needs a parallel pair")
    keep = tuple(x for x in range(f.dom.size) if f.table[x] == g.table[x])
    e = FinSet(len(keep))
    return e, FinFunction(e, f.dom, keep)


def is_pullback_square(top: FinFunction, left: FinFunction,
                       right: FinFunction, bottom: FinFunction) -> bool:
    """Is the commuting square ``right . top == bottom . left`` a pullback?

        P --top--> B
        |          |
      left       right
        v          v
        A -bottom-> C
    """
    if compose(right, top) != compose(bottom, left):
        return False
    pb = pullback(bottom, right)
    return pb.mediate(left, top).is_bijective()


# -- pushouts and coequalizers ----------------------------------------------

class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)

    def classes(self) -> tuple[int, list[int]]:
        """Class index of every node, numbered by first appearance."""
        label: dict[int, int] = {}
        out = []
        for x in range(len(self.parent)):
            out.append(label.setdefault(self.find(x), len(label)))
        return len(label), out


@dataclass(frozen=True)
class Pushout:
    apex: FinSet
    q1: FinFunction
    q2: FinFunction

    def __iter__(self):
        return iter((self.apex, self.q1, self.q2))

    def mediate(self, h: FinFunction, k: FinFunction) -> FinFunction | None:
        """The unique map out of the apex for a cocone, or None if ``(h, k)``
        does not factor (i.e. is not a cocone)."""
        if h.cod != k.cod:
            raise CodomainMismatch("cocone legs must share a codomain")
        table: list[int | None] = [None] * self.apex.size
        for q, leg in ((self.q1, h), (self.q2, k)):
            for x, cls in enumerate(q.table):
                if table[cls] is None:
                    table[cls] = leg.table[x]
                elif table[cls] != leg.table[x]:
                    return None
        if any(v is None for v in table):
            return None
        return FinFunction(self.apex, h.cod, tuple(table))


def pushout(f: FinFunction, g: FinFunction) -> Pushout:
    """Quotient of ``f.cod + g.cod`` by ``f(c) ~ g(c)``."""
    if f.dom != g.dom:
        raise DomainMismatch(f"pushout needs a span: f.dom={f.dom.size}, g.dom={g.dom.size}")
    n1 = f.cod.size
    uf = UnionFind(n1 + g.cod.size)
    for c in range(f.dom.size):
        uf.union(f.table[c], n1 + g.table[c])
    count, label = uf.classes()
    apex = FinSet(count)
    return Pushout(apex, FinFunction(f.cod, apex, tuple(label[:n1])),
                   FinFunction(g.cod, apex, tuple(label[n1:])))


@dataclass(frozen=True)
class Coequalizer:
    apex: FinSet
    q: FinFunction

    def __iter__(self):
        return iter((self.apex, self.q))

    def mediate(self, h: FinFunction) -> FinFunction | None:
        table: list[int | None] = [None] * self.apex.size
        for y, cls in enumerate(self.q.table):
            if table[cls] is None:
                table[cls] = h.table[y]
            elif table[cls] != h.table[y]:
                return None
        return FinFunction(self.apex, h.cod, tuple(table))


def coequalizer(f: FinFunction, g: FinFunction) -> Coequalizer:
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatch("coequalizer needs a parallel pair")
    uf = UnionFind(f.cod.size)
    for x in range(f.dom.size):
        uf.union(f.table[x], g.table[x])
    count, label = uf.classes()
    apex = FinSet(count)
    return Coequalizer(apex, FinFunction(f.cod, apex, tuple(label)))


# -- limits of quiver-shaped diagrams ---------------------------------------

@dataclass(frozen=True)
class QuiverDiagram:
    objects: tuple[FinSet, ...]
    edges: tuple[tuple[int, int, FinFunction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(as_finset(o) for o in self.objects))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        k = len(self.objects)
        for n, (s, t, u) in enumerate(self.edges):
            if not (0 <= s < k and 0 <= t < k):
                raise IndexOutOfRange(f"edge {n} refers to a missing object")
            if u.dom != self.objects[s] or u.cod != self.objects[t]:
                raise ShapeMismatch(
                    f"edge {n}: function {u.dom.size}->{u.cod.size} does not match "
                    f"objects {self.objects[s].size}->{self.objects[t].size}",
                    "edge dom/cod match objects")


@dataclass(frozen=True)
class Limit:
    apex: FinSet
    projections: tuple[FinFunction, ...]
    tuples: tuple[tuple[int, ...], ...]

    def index_of(self, t: Sequence[int]) -> int | None:
        try:
            return self.tuples.index(tuple(t))
        except ValueError:
            return None


def limit_of_quiver(d: QuiverDiagram, cap: int | None = None) -> Limit:
    """Compatible tuples, one coordinate per object, in lexicographic order."""
    check_cap(math.prod(o.size for o in d.objects), cap, "limit ambient product")
    k = len(d.objects)
    # edges checked as soon as both endpoints are assigned
    due: list[list[tuple[int, int, tuple[int, ...]]]] = [[] for _ in range(k)]
    for s, t, u in d.edges:
        due[max(s, t)].append((s, t, u.table))
    found: list[tuple[int, ...]] = []
    current = [0] * k

    def extend(i: int) -> None:
        if i == k:
            found.append(tuple(current))
            return
        for x in range(d.objects[i].size):
            current[i] = x
            if all(u[current[s]] == current[t] for s, t, u in due[i]):
                extend(i + 1)

    extend(0)
    apex = FinSet(len(found))
    projections = tuple(FinFunction(apex, o, tuple(t[j] for t in found))
                        for j, o in enumerate(d.objects))
    return Limit(apex, projections, tuple(found))
