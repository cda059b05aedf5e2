"""Finite sets with chosen products and exponentials.

Elements are flat tuples of scalars, so binary products concatenate and are
strictly associative; the empty tuple is the unit.  Exponentials pack a
function table into a single FnEl scalar.  Every constructor checks the
size cap and enumeration orders are canonical, so morphism indices are
stable across runs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

DEFAULT_CAP = 4096


class CapExceeded(Exception):
    pass


class CategoryError(Exception):
    pass


@dataclass(frozen=True)
class FnEl:
    """A finite function table usable as a tuple scalar."""

    pairs: tuple[tuple[tuple, tuple], ...]

    def __call__(self, arg: tuple) -> tuple:
        for a, v in self.pairs:
            if a == arg:
                return v
        raise CategoryError(f"argument {arg!r} outside the table")

    def __repr__(self):
        inner = ", ".join(f"{a}:{v}" for a, v in self.pairs)
        return f"{{{inner}}}"


class FinObj:
    """Finite set of tuple elements; equality ignores the display name."""

    __slots__ = ("name", "elements", "arity", "_index")

    def __init__(self, name: str, elements, arity: int | None = None):
        self.name = name
        self.elements = tuple(elements)
        for e in self.elements:
            if not isinstance(e, tuple):
                raise CategoryError(f"element {e!r} is not a tuple")
        if self.elements:
            arities = {len(e) for e in self.elements}
            if len(arities) != 1:
                raise CategoryError(f"mixed arities in {name}")
            self.arity = arities.pop()
        elif arity is None:
            raise CategoryError("empty object needs an explicit arity")
        else:
            self.arity = arity
        if len(set(self.elements)) != len(self.elements):
            raise CategoryError(f"duplicate elements in {name}")
        self._index = {e: i for i, e in enumerate(self.elements)}

    def index(self, el) -> int:
        return self._index[el]

    def __contains__(self, el):
        return el in self._index

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return isinstance(other, FinObj) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"FinObj({self.name}, {len(self.elements)} elements)"


def unit_obj() -> FinObj:
    return FinObj("1", ((),))


def fin_obj(name: str, labels) -> FinObj:
    return FinObj(name, tuple((l,) for l in labels))


class FinMor:
    """Map between finite objects, tabulated in domain enumeration order."""

    __slots__ = ("dom", "cod", "table")

    def __init__(self, dom: FinObj, cod: FinObj, table):
        self.dom = dom
        self.cod = cod
        self.table = tuple(table)
        if len(self.table) != len(dom):
            raise CategoryError("table length does not match the domain")
        for v in self.table:
            if v not in cod:
                raise CategoryError(f"value {v!r} outside the codomain")

    def __call__(self, el):
        return self.table[self.dom.index(el)]

    def __eq__(self, other):
        return (
            isinstance(other, FinMor)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.dom, self.cod, self.table))

    def __repr__(self):
        return f"FinMor({self.dom.name} -> {self.cod.name})"


def identity(a: FinObj) -> FinMor:
    return FinMor(a, a, a.elements)


def compose(g: FinMor, f: FinMor) -> FinMor:
    """g after f."""
    if f.cod != g.dom:
        raise CategoryError("morphisms do not compose")
    return FinMor(f.dom, g.cod, tuple(g(v) for v in f.table))


def terminal_map(a: FinObj) -> FinMor:
    return FinMor(a, unit_obj(), ((),) * len(a))


@dataclass(frozen=True)
class Product:
    obj: FinObj
    left: FinObj
    right: FinObj
    proj_left: FinMor
    proj_right: FinMor

    def pair(self, f: FinMor, g: FinMor) -> FinMor:
        if f.dom != g.dom:
            raise CategoryError("pairing needs a common domain")
        if f.cod != self.left or g.cod != self.right:
            raise CategoryError("pairing components target the wrong factors")
        return FinMor(f.dom, self.obj, tuple(f(c) + g(c) for c in f.dom))


def product(a: FinObj, b: FinObj, cap: int = DEFAULT_CAP) -> Product:
    """Cartesian product in enumeration order with `a` as the slow index."""
    n = len(a) * len(b)
    if n > cap:
        raise CapExceeded(f"product size {n} exceeds cap {cap}")
    obj = FinObj(
        f"{a.name}*{b.name}",
        tuple(x + y for x in a.elements for y in b.elements),
        arity=a.arity + b.arity,
    )
    pl = FinMor(obj, a, tuple(x for x in a.elements for _ in b.elements))
    pr = FinMor(obj, b, tuple(y for _ in a.elements for y in b.elements))
    return Product(obj, a, b, pl, pr)


def product_n(objs, cap: int = DEFAULT_CAP) -> tuple[FinObj, list[FinMor]]:
    """Iterated product with all projections; one factor returns identity."""
    objs = list(objs)
    if not objs:
        u = unit_obj()
        return u, []
    n = 1
    for o in objs:
        n *= len(o)
        if n > cap:
            raise CapExceeded(f"product size {n} exceeds cap {cap}")
    name = "*".join(o.name for o in objs)
    elements = tuple(
        sum(combo, ()) for combo in itertools.product(*(o.elements for o in objs))
    )
    obj = FinObj(name, elements, arity=sum(o.arity for o in objs))
    projs = []
    offset = 0
    for o in objs:
        lo = offset
        hi = offset + o.arity
        projs.append(FinMor(obj, o, tuple(e[lo:hi] for e in elements)))
        offset = hi
    return obj, projs


@dataclass(frozen=True)
class Exponential:
    obj: FinObj
    base: FinObj
    exponent: FinObj
    ev_dom: FinObj
    ev: FinMor

    def curry(self, g: FinMor, c: FinObj) -> FinMor:
        """Transpose g : C x A -> B to C -> B^A."""
        expected = product(c, self.exponent, cap=len(c) * len(self.exponent)).obj
        if g.dom != expected or g.cod != self.base:
            raise CategoryError("curry source has the wrong shape")
        table = []
        for x in c.elements:
            vals = tuple((a, g(x + a)) for a in self.exponent.elements)
            table.append((FnEl(vals),))
        return FinMor(c, self.obj, tuple(table))


def exponential(b: FinObj, a: FinObj, cap: int = DEFAULT_CAP) -> Exponential:
    """B^A, enumerated as a big-endian odometer over the elements of A."""
    n = len(b) ** len(a)
    if n > cap:
        raise CapExceeded(f"exponential size {n} exceeds cap {cap}")
    elements = tuple(
        (FnEl(tuple(zip(a.elements, vals))),)
        for vals in itertools.product(b.elements, repeat=len(a))
    )
    obj = FinObj(f"{b.name}^{a.name}", elements, arity=1)
    prod = product(obj, a, cap=max(cap, len(obj) * len(a)))
    ev = FinMor(prod.obj, b, tuple(e[0](e[1:]) for e in prod.obj.elements))
    return Exponential(obj, b, a, prod.obj, ev)


def enumerate_morphisms(a: FinObj, b: FinObj, cap: int = DEFAULT_CAP) -> list[FinMor]:
    """All maps A -> B in the canonical odometer order."""
    n = len(b) ** len(a) if len(a) else 1
    if n > cap:
        raise CapExceeded(f"{n} morphisms exceed cap {cap}")
    return [
        FinMor(a, b, table) for table in itertools.product(b.elements, repeat=len(a))
    ]


def morphism_index(f: FinMor) -> int:
    """Rank of f within enumerate_morphisms(f.dom, f.cod)."""
    idx = 0
    nb = len(f.cod)
    for v in f.table:
        idx = idx * nb + f.cod.index(v)
    return idx
