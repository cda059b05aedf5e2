"""Finite posetal doctrines over Kripke frames.

A doctrine here assigns to every finite carrier a poset of predicates,
with reindexing along maps and (where present) quantifier adjoints.  Two
implementations share one calling surface: `ConcreteDoctrine` computes
fibres of up-closed bitmask predicates in closed form, `TabularDoctrine`
replays fibres and reindexing tables loaded from data.  On top of both
sit a generic adjoint search with self-certifying witnesses, structural
audits, Beck-Chevalley checks, and a JSON exchange format.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import _kernels as K
from .fincat import (
    DEFAULT_CAP,
    CapExceeded,
    FinMor,
    FinObj,
    enumerate_morphisms,
    exponential,
    fin_obj,
    identity,
    morphism_index,
    product,
    unit_obj,
)
from .posets import FinitePoset, poset_violations

DEFAULT_FIBRE_CAP = 4096


class DoctrineError(Exception):
    pass


class DoctrineDataError(DoctrineError):
    pass


class AdjointMissing(DoctrineError):
    """A requested quantifier value does not exist in the fibre."""

    def __init__(self, direction: str, along: str, alpha):
        self.direction = direction
        self.along = along
        self.alpha = alpha
        super().__init__(f"no {direction} value along {along}")


def mor_key(f: FinMor) -> str:
    return f"{f.dom.name}->{f.cod.name}#{morphism_index(f)}"


def mor_from_key(key: str, objects: dict) -> FinMor:
    """Rebuild a morphism from its key against named objects."""
    try:
        names, idx_text = key.rsplit("#", 1)
        dom_name, cod_name = names.split("->", 1)
        idx = int(idx_text)
    except ValueError:
        raise DoctrineDataError(f"malformed morphism key {key!r}") from None
    if dom_name not in objects or cod_name not in objects:
        raise DoctrineDataError(f"morphism key {key!r} names unknown objects")
    dom, cod = objects[dom_name], objects[cod_name]
    na, nb = len(dom), len(cod)
    if nb == 0 and na > 0:
        raise DoctrineDataError(f"no morphisms {dom_name} -> {cod_name}")
    if idx < 0 or (na and idx >= nb**na) or (not na and idx):
        raise DoctrineDataError(f"morphism index out of range in {key!r}")
    digits = []
    for i in range(na):
        digits.append((idx // nb ** (na - 1 - i)) % nb)
    return FinMor(dom, cod, tuple(cod.elements[d] for d in digits))


def _el_label(e: tuple) -> str:
    if not e:
        return "*"
    return ".".join(str(x) for x in e)


class MaskFibre:
    """Up-closed predicates over one carrier, held as bitmask ints.

    Bit ``e * nw + w`` says element ``e`` satisfies the predicate at
    world ``w``.  Order is mask inclusion; the lattice operations are
    bitwise, with implication via the frame's up-sets.
    """

    has_heyting = True

    __slots__ = ("obj", "nw", "upmasks", "worlds", "full", "cap", "_elements", "_index")

    def __init__(self, obj: FinObj, nw: int, upmasks, worlds, cap: int):
        self.obj = obj
        self.nw = nw
        self.upmasks = tuple(upmasks)
        self.worlds = tuple(worlds)
        self.full = (1 << (len(obj) * nw)) - 1 if len(obj) else 0
        self.cap = cap
        self._elements = None
        self._index = None

    def elements(self) -> tuple:
        if self._elements is None:
            nw = self.nw
            cols = [m for m in range(1 << nw) if all(
                self.upmasks[w] & ~m == 0 for w in range(nw) if (m >> w) & 1
            )]
            count = len(cols) ** len(self.obj)
            if count > self.cap:
                raise CapExceeded(
                    f"fibre over {self.obj.name} has {count} predicates; cap {self.cap}"
                )
            out = []
            for combo in itertools.product(cols, repeat=len(self.obj)):
                mask = 0
                for e, col in enumerate(combo):
                    mask |= col << (e * nw)
                out.append(mask)
            self._elements = tuple(out)
            self._index = {m: i for i, m in enumerate(self._elements)}
        return self._elements

    def index(self, mask: int) -> int:
        self.elements()
        return self._index[mask]

    def is_element(self, mask: int) -> bool:
        if mask & ~self.full:
            return False
        colmask = (1 << self.nw) - 1
        for e in range(len(self.obj)):
            col = (mask >> (e * self.nw)) & colmask
            for w in range(self.nw):
                if (col >> w) & 1 and self.upmasks[w] & ~col:
                    return False
        return True

    def leq(self, a: int, b: int) -> bool:
        return a & ~b == 0

    def top(self) -> int:
        return self.full

    def bottom(self) -> int:
        return 0

    def meet(self, a: int, b: int) -> int:
        return a & b

    def join(self, a: int, b: int) -> int:
        return a | b

    def imp(self, a: int, b: int) -> int:
        return K.imp_mask(a, b, len(self.obj), self.nw, self.upmasks)

    def describe(self, mask: int) -> str:
        colmask = (1 << self.nw) - 1
        parts = []
        for e, el in enumerate(self.obj.elements):
            col = (mask >> (e * self.nw)) & colmask
            if col == 0:
                continue
            if col == colmask:
                parts.append(_el_label(el))
            else:
                ws = ",".join(self.worlds[w] for w in range(self.nw) if (col >> w) & 1)
                parts.append(f"{_el_label(el)}@{ws}")
        return "{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class HeytingTables:
    top: int
    bottom: int
    meet: tuple
    join: tuple
    imp: tuple


class PosetFibre:
    """Fibre given by an explicit order on labelled predicates."""

    __slots__ = ("obj", "labels", "up", "heyting")

    def __init__(self, obj: FinObj, labels, up, heyting: HeytingTables | None = None):
        self.obj = obj
        self.labels = tuple(labels)
        self.up = list(up)
        self.heyting = heyting
        if len(self.up) != len(self.labels):
            raise DoctrineDataError(f"fibre over {obj.name}: order rows do not match labels")

    @property
    def has_heyting(self) -> bool:
        return self.heyting is not None

    def elements(self) -> tuple:
        return tuple(range(len(self.labels)))

    def index(self, a: int) -> int:
        return a

    def leq(self, a: int, b: int) -> bool:
        return bool((self.up[a] >> b) & 1)

    def _need(self):
        if self.heyting is None:
            raise DoctrineDataError(f"fibre over {self.obj.name} carries no lattice tables")

    def top(self) -> int:
        self._need()
        return self.heyting.top

    def bottom(self) -> int:
        self._need()
        return self.heyting.bottom

    def meet(self, a: int, b: int) -> int:
        self._need()
        return self.heyting.meet[a][b]

    def join(self, a: int, b: int) -> int:
        self._need()
        return self.heyting.join[a][b]

    def imp(self, a: int, b: int) -> int:
        self._need()
        return self.heyting.imp[a][b]

    def describe(self, a: int) -> str:
        return self.labels[a]

    def order_violations(self) -> list[str]:
        return poset_violations(len(self.labels), self.up)


class ConcreteDoctrine:
    """Doctrine of up-closed predicates over a Kripke frame.

    Carriers are constant along the frame, so reindexing is preimage,
    the left adjoint along any map is direct image per world, and the
    right adjoint is intersection over fibres of the map.  Fibres exist
    for every finite carrier, not only the declared universe; the
    universe fixes what the audits quantify over.
    """

    kind = "concrete"

    def __init__(self, name: str, frame: FinitePoset, universe, cap: int = DEFAULT_CAP,
                 fibre_cap: int = DEFAULT_FIBRE_CAP, generator: dict | None = None):
        self.name = name
        self.frame = frame
        self.universe = tuple(universe)
        self.cap = cap
        self.fibre_cap = fibre_cap
        self.generator = generator
        self._fibres: dict[FinObj, MaskFibre] = {}
        self._fmaps: dict[FinMor, tuple] = {}
        self._fibs: dict[FinMor, list] = {}

    @property
    def nw(self) -> int:
        return len(self.frame)

    def fibre(self, obj: FinObj) -> MaskFibre:
        fib = self._fibres.get(obj)
        if fib is None:
            fib = MaskFibre(obj, self.nw, self.frame.up, self.frame.elements, self.fibre_cap)
            self._fibres[obj] = fib
        return fib

    def _fmap(self, f: FinMor) -> tuple:
        fm = self._fmaps.get(f)
        if fm is None:
            fm = tuple(f.cod.index(v) for v in f.table)
            self._fmaps[f] = fm
        return fm

    def _fibres_of(self, f: FinMor) -> list:
        fb = self._fibs.get(f)
        if fb is None:
            fb = [[] for _ in range(len(f.cod))]
            for d, c in enumerate(self._fmap(f)):
                fb[c].append(d)
            self._fibs[f] = fb
        return fb

    def reindex_el(self, f: FinMor, alpha: int) -> int:
        return K.reindex_mask(alpha, self._fmap(f), self.nw)

    def exists_along(self, f: FinMor, alpha: int) -> int:
        return K.exists_image(alpha, self._fibres_of(f), self.nw)

    def forall_along(self, f: FinMor, alpha: int) -> int:
        return K.forall_preimage(alpha, self._fibres_of(f), self.nw)

    def morphisms(self, a: FinObj, b: FinObj) -> list[FinMor]:
        return enumerate_morphisms(a, b, self.cap)


class TabularDoctrine:
    """Doctrine replayed from explicit fibre and reindexing tables.

    Quantifier values are found by search over the recorded order, so
    `exists_along`/`forall_along` raise `AdjointMissing` when the fibre
    has no least (greatest) admissible value.  Only the morphisms with
    recorded tables exist from this doctrine's point of view.
    """

    kind = "tabular"

    def __init__(self, name: str, universe, fibres: dict, reindex: dict,
                 generator: dict | None = None):
        self.name = name
        self.universe = tuple(universe)
        self.frame = None
        self.generator = generator
        self._fibres = dict(fibres)
        self._reindex = dict(reindex)
        self._adj_memo: dict = {}
        for f, table in self._reindex.items():
            nc = len(self.fibre(f.cod).elements())
            nd = len(self.fibre(f.dom).elements())
            if len(table) != nc or any(v < 0 or v >= nd for v in table):
                raise DoctrineDataError(f"reindex table for {mor_key(f)} is malformed")

    def fibre(self, obj: FinObj):
        fib = self._fibres.get(obj)
        if fib is None:
            raise DoctrineDataError(f"no fibre recorded over {obj.name}")
        return fib

    def reindex_el(self, f: FinMor, alpha: int) -> int:
        table = self._reindex.get(f)
        if table is None:
            raise DoctrineDataError(f"no reindex table for {mor_key(f)}")
        return table[alpha]

    def exists_along(self, f: FinMor, alpha: int) -> int:
        key = ("e", f, alpha)
        if key not in self._adj_memo:
            self._adj_memo[key] = least_exists_value(self, f, alpha)
        val = self._adj_memo[key]
        if val is None:
            raise AdjointMissing("exists", mor_key(f), alpha)
        return val

    def forall_along(self, f: FinMor, alpha: int) -> int:
        key = ("a", f, alpha)
        if key not in self._adj_memo:
            self._adj_memo[key] = greatest_forall_value(self, f, alpha)
        val = self._adj_memo[key]
        if val is None:
            raise AdjointMissing("forall", mor_key(f), alpha)
        return val

    def morphisms(self, a: FinObj, b: FinObj) -> list[FinMor]:
        out = [f for f in self._reindex if f.dom == a and f.cod == b]
        out.sort(key=morphism_index)
        return out


def powerset_doctrine(sizes=(2, 2), name: str | None = None, cap: int = DEFAULT_CAP,
                      fibre_cap: int = DEFAULT_FIBRE_CAP) -> ConcreteDoctrine:
    """Subset doctrine over finite carriers: one world, all predicates."""
    frame = FinitePoset(("w0",), [(0, 0)])
    universe = _lettered_universe(sizes)
    label = name or "powerset-" + "x".join(str(s) for s in sizes)
    return ConcreteDoctrine(label, frame, universe, cap, fibre_cap,
                            generator={"kind": "powerset", "sizes": list(sizes)})


def kripke_doctrine(frame: FinitePoset, sizes=(2, 2), name: str | None = None,
                    cap: int = DEFAULT_CAP, fibre_cap: int = DEFAULT_FIBRE_CAP) -> ConcreteDoctrine:
    """Doctrine of up-closed predicates over the given frame."""
    universe = _lettered_universe(sizes)
    label = name or f"kripke-{frame.shape_label()}-" + "x".join(str(s) for s in sizes)
    return ConcreteDoctrine(label, frame, universe, cap, fibre_cap,
                            generator={"kind": "kripke", "frame": frame.to_json(),
                                       "sizes": list(sizes)})


def _lettered_universe(sizes) -> tuple:
    objs = [unit_obj()]
    for k, sz in enumerate(sizes):
        if sz < 1:
            raise DoctrineDataError("carrier sizes must be positive")
        upper = chr(65 + k)
        objs.append(fin_obj(upper, [f"{upper.lower()}{i}" for i in range(sz)]))
    return tuple(objs)


def least_exists_value(D, f: FinMor, alpha):
    """Least b in the codomain fibre with alpha <= P_f(b), or None."""
    dom_fib = D.fibre(f.dom)
    cod_fib = D.fibre(f.cod)
    cands = [b for b in cod_fib.elements() if dom_fib.leq(alpha, D.reindex_el(f, b))]
    for b in cands:
        if all(cod_fib.leq(b, c) for c in cands):
            return b
    return None


def greatest_forall_value(D, f: FinMor, alpha):
    """Greatest b in the codomain fibre with P_f(b) <= alpha, or None."""
    dom_fib = D.fibre(f.dom)
    cod_fib = D.fibre(f.cod)
    cands = [b for b in cod_fib.elements() if dom_fib.leq(D.reindex_el(f, b), alpha)]
    for b in cands:
        if all(cod_fib.leq(c, b) for c in cands):
            return b
    return None


@dataclass
class AdjointWitness:
    direction: str
    along: str
    table: dict
    certified: bool
    monotone: bool
    pairs_checked: int


@dataclass
class AdjointFailure:
    direction: str
    along: str
    alpha: object
    reason: str


def adjoint_along(D, f: FinMor, direction: str, pair_cap: int = 4096):
    """Search the whole fibre for the quantifier along f and certify it.

    Returns an AdjointWitness whose table was re-checked against the
    adjunction law on every (predicate, candidate) pair, or an
    AdjointFailure naming the first predicate without a value.
    """
    if direction not in ("exists", "forall"):
        raise ValueError("direction must be 'exists' or 'forall'")
    key = mor_key(f)
    try:
        dom_fib = D.fibre(f.dom)
        cod_fib = D.fibre(f.cod)
        dom_els = dom_fib.elements()
        cod_els = cod_fib.elements()
    except (CapExceeded, DoctrineDataError) as exc:
        return AdjointFailure(direction, key, None, str(exc))
    search = least_exists_value if direction == "exists" else greatest_forall_value
    table = {}
    try:
        for alpha in dom_els:
            val = search(D, f, alpha)
            if val is None:
                return AdjointFailure(direction, key, alpha,
                                      f"no {direction} value for {dom_fib.describe(alpha)}")
            table[alpha] = val
    except DoctrineDataError as exc:
        return AdjointFailure(direction, key, None, str(exc))
    pairs = 0
    for alpha in dom_els:
        v = table[alpha]
        for b in cod_els:
            pairs += 1
            if direction == "exists":
                law = cod_fib.leq(v, b) == dom_fib.leq(alpha, D.reindex_el(f, b))
            else:
                law = cod_fib.leq(b, v) == dom_fib.leq(D.reindex_el(f, b), alpha)
            if not law:
                return AdjointFailure(direction, key, alpha,
                                      f"adjunction law fails against {cod_fib.describe(b)}")
    monotone = True
    checked = 0
    for alpha, beta in _sample_pairs(dom_els, pair_cap):
        if dom_fib.leq(alpha, beta):
            checked += 1
            if not cod_fib.leq(table[alpha], table[beta]):
                monotone = False
                break
    return AdjointWitness(direction, key, table, True, monotone, pairs)


def _sample(seq, cap: int):
    n = len(seq)
    if n <= cap:
        return list(seq)
    step = -(-n // cap)
    return list(seq[::step])


def _sample_pairs(seq, cap: int):
    n = len(seq)
    if n * n <= cap:
        return [(a, b) for a in seq for b in seq]
    side = _sample(seq, max(1, int(cap**0.5)))
    return [(a, b) for a in side for b in side]


@dataclass
class DoctrineReport:
    name: str
    passed: bool
    violations: list
    counts: dict
    notes: list


def check_doctrine(D, objects=None, poset_cap: int = 64, triple_cap: int = 24,
                   pair_cap: int = 256) -> DoctrineReport:
    """Audit the doctrine laws over the declared universe.

    Covers fibre order axioms, lattice laws with residuation where the
    fibre carries them, functoriality of reindexing, monotonicity, and
    preservation of the lattice operations.  Large fibres are sampled
    deterministically; every shortcut is recorded in the notes.
    """
    objs = tuple(objects or D.universe)
    violations: list[str] = []
    notes: list[str] = []
    counts = {"fibres": 0, "predicates": 0, "morphisms": 0,
              "compositions": 0, "triples": 0}
    fibre_els = {}
    for obj in objs:
        try:
            fib = D.fibre(obj)
            els = fib.elements()
        except (CapExceeded, DoctrineDataError) as exc:
            notes.append(f"fibre over {obj.name} skipped: {exc}")
            continue
        fibre_els[obj] = els
        counts["fibres"] += 1
        counts["predicates"] += len(els)
        _check_fibre_order(fib, obj, els, violations, notes, poset_cap, triple_cap)
        if fib.has_heyting:
            _check_heyting(fib, obj, els, violations, notes, poset_cap, triple_cap, counts)
    _check_reindex(D, objs, fibre_els, violations, notes, pair_cap, counts)
    return DoctrineReport(D.name, not violations, violations, counts, notes)


def _check_fibre_order(fib, obj, els, violations, notes, poset_cap, triple_cap):
    sample = _sample(els, poset_cap)
    if len(sample) < len(els):
        notes.append(f"fibre order over {obj.name} sampled at {len(sample)}/{len(els)}")
    for a in sample:
        if not fib.leq(a, a):
            violations.append(f"{obj.name}: order not reflexive at {fib.describe(a)}")
    for a in sample:
        for b in sample:
            if a != b and fib.leq(a, b) and fib.leq(b, a):
                violations.append(
                    f"{obj.name}: antisymmetry fails on {fib.describe(a)}, {fib.describe(b)}")
    tri = _sample(sample, triple_cap)
    for a in tri:
        for b in tri:
            if not fib.leq(a, b):
                continue
            for c in tri:
                if fib.leq(b, c) and not fib.leq(a, c):
                    violations.append(
                        f"{obj.name}: transitivity fails through {fib.describe(b)}")
    # dedupe symmetric antisymmetry reports
    seen = set()
    out = []
    for v in violations:
        if v not in seen:
            seen.add(v)
            out.append(v)
    violations[:] = out


def _check_heyting(fib, obj, els, violations, notes, poset_cap, triple_cap, counts):
    sample = _sample(els, poset_cap)
    try:
        top, bot = fib.top(), fib.bottom()
    except DoctrineDataError as exc:
        violations.append(f"{obj.name}: {exc}")
        return
    for a in sample:
        if not fib.leq(a, top):
            violations.append(f"{obj.name}: top is not above {fib.describe(a)}")
        if not fib.leq(bot, a):
            violations.append(f"{obj.name}: bottom is not below {fib.describe(a)}")
    tri = _sample(els, triple_cap)
    if len(tri) < len(els):
        notes.append(f"lattice laws over {obj.name} sampled at {len(tri)}/{len(els)}")
    for a in tri:
        for b in tri:
            m = fib.meet(a, b)
            if not (fib.leq(m, a) and fib.leq(m, b)):
                violations.append(
                    f"{obj.name}: meet({fib.describe(a)}, {fib.describe(b)}) is not a lower bound")
            j = fib.join(a, b)
            if not (fib.leq(a, j) and fib.leq(b, j)):
                violations.append(
                    f"{obj.name}: join({fib.describe(a)}, {fib.describe(b)}) is not an upper bound")
            for c in tri:
                counts["triples"] += 1
                if fib.leq(c, a) and fib.leq(c, b) and not fib.leq(c, m):
                    violations.append(
                        f"{obj.name}: meet({fib.describe(a)}, {fib.describe(b)}) is not greatest")
                if fib.leq(a, c) and fib.leq(b, c) and not fib.leq(j, c):
                    violations.append(
                        f"{obj.name}: join({fib.describe(a)}, {fib.describe(b)}) is not least")
                if fib.leq(fib.meet(a, b), c) != fib.leq(a, fib.imp(b, c)):
                    violations.append(
                        f"{obj.name}: residuation fails on {fib.describe(a)}, "
                        f"{fib.describe(b)}, {fib.describe(c)}")


def _available_morphisms(D, a, b):
    try:
        return D.morphisms(a, b)
    except CapExceeded:
        return None


def _check_reindex(D, objs, fibre_els, violations, notes, pair_cap, counts):
    for obj, els in fibre_els.items():
        ident = identity(obj)
        sample = _sample(els, pair_cap)
        try:
            for alpha in sample:
                if D.reindex_el(ident, alpha) != alpha:
                    fib = D.fibre(obj)
                    violations.append(
                        f"{obj.name}: identity reindex moves {fib.describe(alpha)}")
                    break
        except DoctrineDataError:
            notes.append(f"identity reindex over {obj.name} not recorded; skipped")
    mors = {}
    for a in objs:
        for b in objs:
            if a in fibre_els and b in fibre_els:
                found = _available_morphisms(D, a, b)
                if found is None:
                    notes.append(f"morphisms {a.name} -> {b.name} exceed cap; skipped")
                else:
                    mors[(a, b)] = found
                    counts["morphisms"] += len(found)
    for (a, b), fs in mors.items():
        fib_a = D.fibre(a)
        fib_b = D.fibre(b)
        pairs = [(x, y) for x, y in _sample_pairs(fibre_els[b], pair_cap) if fib_b.leq(x, y)]
        for f in fs:
            try:
                for x, y in pairs:
                    if not fib_a.leq(D.reindex_el(f, x), D.reindex_el(f, y)):
                        violations.append(
                            f"reindex along {mor_key(f)} is not monotone on "
                            f"{fib_b.describe(x)} <= {fib_b.describe(y)}")
                if fib_a.has_heyting and fib_b.has_heyting:
                    if D.reindex_el(f, fib_b.top()) != fib_a.top():
                        violations.append(f"reindex along {mor_key(f)} moves top")
                    if D.reindex_el(f, fib_b.bottom()) != fib_a.bottom():
                        violations.append(f"reindex along {mor_key(f)} moves bottom")
                    for x, y in _sample_pairs(fibre_els[b], pair_cap):
                        rx, ry = D.reindex_el(f, x), D.reindex_el(f, y)
                        if D.reindex_el(f, fib_b.meet(x, y)) != fib_a.meet(rx, ry):
                            violations.append(
                                f"reindex along {mor_key(f)} breaks meet on "
                                f"{fib_b.describe(x)}, {fib_b.describe(y)}")
                        if D.reindex_el(f, fib_b.join(x, y)) != fib_a.join(rx, ry):
                            violations.append(
                                f"reindex along {mor_key(f)} breaks join on "
                                f"{fib_b.describe(x)}, {fib_b.describe(y)}")
                        if D.reindex_el(f, fib_b.imp(x, y)) != fib_a.imp(rx, ry):
                            violations.append(
                                f"reindex along {mor_key(f)} breaks implication on "
                                f"{fib_b.describe(x)}, {fib_b.describe(y)}")
            except DoctrineDataError as exc:
                notes.append(f"{mor_key(f)}: {exc}; skipped")
    for (a, b), fs in mors.items():
        for (b2, c), gs in mors.items():
            if b2 != b:
                continue
            sample = _sample(fibre_els[c], pair_cap)
            for f in fs:
                for g in gs:
                    gf_table = tuple(g(v) for v in f.table)
                    gf = FinMor(a, c, gf_table)
                    counts["compositions"] += 1
                    try:
                        for alpha in sample:
                            via = D.reindex_el(f, D.reindex_el(g, alpha))
                            direct = D.reindex_el(gf, alpha)
                            if via != direct:
                                violations.append(
                                    f"functoriality fails: {mor_key(g)} after {mor_key(f)}")
                                break
                    except DoctrineDataError:
                        notes.append(
                            f"composite {mor_key(g)} after {mor_key(f)} not recorded; skipped")
                        break


def f_times_id(f: FinMor, b: FinObj, cap: int = DEFAULT_CAP) -> FinMor:
    """The map f x id_B between the evident products."""
    p_dom = product(f.dom, b, cap)
    p_cod = product(f.cod, b, cap)
    k = f.dom.arity
    table = tuple(f(e[:k]) + e[k:] for e in p_dom.obj.elements)
    return FinMor(p_dom.obj, p_cod.obj, table)


@dataclass
class BCReport:
    name: str
    direction: str
    squares: int
    predicates: int
    equality_failures: list
    inequality_failures: list
    skipped: list

    @property
    def passed(self) -> bool:
        return not self.equality_failures and not self.inequality_failures and not self.skipped


def beck_chevalley(D, objects=None, direction: str = "both", pred_cap: int = 4096,
                   cap: int = DEFAULT_CAP) -> BCReport:
    """Check the Beck-Chevalley condition on every pullback square of
    projections over the universe: for f: A2 -> A1 and the square formed
    with B, quantifying along the projections must commute with
    reindexing along f and f x id.  The lax inequality is checked
    separately from equality."""
    objs = tuple(objects or D.universe)
    dirs = ("exists", "forall") if direction == "both" else (direction,)
    eq_fail: list = []
    ineq_fail: list = []
    skipped: list = []
    squares = 0
    preds = 0
    for b in objs:
        for a1 in objs:
            for a2 in objs:
                fs = _available_morphisms(D, a2, a1)
                if fs is None:
                    skipped.append(f"morphisms {a2.name} -> {a1.name} exceed cap")
                    continue
                for f in fs:
                    try:
                        p1 = product(a1, b, cap)
                        p2 = product(a2, b, cap)
                        fp = f_times_id(f, b, cap)
                        fib1 = D.fibre(p1.obj)
                        fib_a2 = D.fibre(a2)
                        betas = _sample(fib1.elements(), pred_cap)
                    except (CapExceeded, DoctrineDataError) as exc:
                        skipped.append(f"square over {a2.name} -> {a1.name} with {b.name}: {exc}")
                        continue
                    squares += 1
                    square = f"{mor_key(f)} x {b.name}"
                    for beta in betas:
                        preds += 1
                        try:
                            for d in dirs:
                                if d == "exists":
                                    lhs = D.exists_along(p2.proj_left, D.reindex_el(fp, beta))
                                    rhs = D.reindex_el(f, D.exists_along(p1.proj_left, beta))
                                    low, high = lhs, rhs
                                else:
                                    lhs = D.forall_along(p2.proj_left, D.reindex_el(fp, beta))
                                    rhs = D.reindex_el(f, D.forall_along(p1.proj_left, beta))
                                    low, high = rhs, lhs
                                if lhs != rhs:
                                    eq_fail.append(
                                        f"{d} along {square} differs on {fib1.describe(beta)}")
                                if not fib_a2.leq(low, high):
                                    ineq_fail.append(
                                        f"{d} along {square} breaks the lax inequality on "
                                        f"{fib1.describe(beta)}")
                        except (AdjointMissing, DoctrineDataError) as exc:
                            skipped.append(f"{square}: {exc}")
                            break
    return BCReport(D.name, direction, squares, preds, eq_fail, ineq_fail, skipped)


@dataclass
class QuantifierStructureReport:
    name: str
    direction: str
    witnesses: list
    failures: list
    bc: BCReport
    closed_form_agrees: bool

    @property
    def passed(self) -> bool:
        return not self.failures and self.bc.passed


def quantifier_structure(D, direction: str, objects=None) -> QuantifierStructureReport:
    """Certify the quantifier structure of the doctrine in one direction:
    adjoints along both projections of every binary product over the
    universe, plus Beck-Chevalley for the corresponding squares."""
    objs = tuple(objects or D.universe)
    witnesses: list = []
    failures: list = []
    agrees = True
    for a1 in objs:
        for a2 in objs:
            try:
                p = product(a1, a2, getattr(D, "cap", DEFAULT_CAP))
            except CapExceeded as exc:
                failures.append(AdjointFailure(direction, f"{a1.name}*{a2.name}", None, str(exc)))
                continue
            for proj in (p.proj_left, p.proj_right):
                res = adjoint_along(D, proj, direction)
                if isinstance(res, AdjointFailure):
                    failures.append(res)
                    continue
                witnesses.append(res)
                closed = D.exists_along if direction == "exists" else D.forall_along
                try:
                    for alpha, val in res.table.items():
                        if closed(proj, alpha) != val:
                            agrees = False
                            failures.append(AdjointFailure(
                                direction, res.along, alpha,
                                "doctrine value disagrees with the certified search"))
                            break
                except (AdjointMissing, DoctrineDataError) as exc:
                    agrees = False
                    failures.append(AdjointFailure(direction, res.along, None, str(exc)))
    bc = beck_chevalley(D, objs, direction)
    return QuantifierStructureReport(D.name, direction, witnesses, failures, bc, agrees)


@dataclass
class ClosureReport:
    passed: bool
    missing_products: list
    missing_exponentials: list
    notes: list


def base_closure(D, cap: int = DEFAULT_CAP) -> ClosureReport:
    """Judge cartesian closure of the base over the declared universe.

    For concrete doctrines products and exponentials of finite carriers
    are constructed outright; for tabular doctrines closure is judged by
    carrier equality against the declared universe.
    """
    notes: list = []
    missing_p: list = []
    missing_e: list = []
    if isinstance(D, ConcreteDoctrine):
        for a in D.universe:
            for b in D.universe:
                try:
                    product(a, b, cap)
                    exponential(b, a, cap)
                except CapExceeded as exc:
                    notes.append(f"{a.name}, {b.name}: {exc}")
        notes.append("base is finite carriers; products and exponentials are constructed")
        return ClosureReport(not missing_p and not missing_e, missing_p, missing_e, notes)
    carriers = {obj.elements for obj in D.universe}
    for a in D.universe:
        for b in D.universe:
            try:
                p = product(a, b, cap)
                if p.obj.elements not in carriers:
                    missing_p.append(f"{a.name}*{b.name}")
                e = exponential(b, a, cap)
                if e.obj.elements not in carriers:
                    missing_e.append(f"{b.name}^{a.name}")
            except CapExceeded as exc:
                notes.append(f"{a.name}, {b.name}: {exc}")
    notes.append("closure judged by carrier equality against the declared universe")
    return ClosureReport(not missing_p and not missing_e, missing_p, missing_e, notes)


def universe_note(D) -> str:
    names = ", ".join(obj.name for obj in D.universe)
    return (f"verdicts quantify over the declared universe ({names}); "
            "carriers outside it are not examined")


def _encode_element(e: tuple) -> list:
    out = []
    for x in e:
        if isinstance(x, FinObj) or callable(x):
            raise DoctrineDataError("function carriers are not serialised")
        out.append(x)
    return out


def doctrine_to_json(D, heyting_cap: int = 64) -> dict:
    """Serialise the doctrine over its declared universe."""
    data: dict = {"name": D.name, "kind": D.kind}
    if D.generator:
        data["generator"] = D.generator
    if getattr(D, "frame", None) is not None:
        data["frame"] = D.frame.to_json()
    data["universe"] = [
        {"name": obj.name, "arity": obj.arity,
         "elements": [_encode_element(e) for e in obj.elements]}
        for obj in D.universe
    ]
    fibres = {}
    heyting = {}
    notes: list = []
    for obj in D.universe:
        fib = D.fibre(obj)
        els = fib.elements()
        n = len(els)
        fibres[obj.name] = {
            "elements": [fib.describe(a) for a in els],
            "leq": [[1 if fib.leq(els[i], els[j]) else 0 for j in range(n)]
                    for i in range(n)],
        }
        if fib.has_heyting:
            if n > heyting_cap:
                notes.append(f"lattice tables over {obj.name} omitted ({n} predicates)")
                continue
            idx = {a: i for i, a in enumerate(els)}
            heyting[obj.name] = {
                "top": idx[fib.top()],
                "bottom": idx[fib.bottom()],
                "meet": [[idx[fib.meet(a, b)] for b in els] for a in els],
                "join": [[idx[fib.join(a, b)] for b in els] for a in els],
                "imp": [[idx[fib.imp(a, b)] for b in els] for a in els],
            }
    data["fibres"] = fibres
    if heyting:
        data["heyting"] = heyting
    reindex = {}
    for a in D.universe:
        for b in D.universe:
            fs = _available_morphisms(D, a, b)
            if fs is None:
                notes.append(f"morphisms {a.name} -> {b.name} exceed cap; omitted")
                continue
            fib_a = D.fibre(a)
            fib_b = D.fibre(b)
            els_b = fib_b.elements()
            for f in fs:
                try:
                    reindex[mor_key(f)] = [
                        fib_a.index(D.reindex_el(f, beta)) for beta in els_b
                    ]
                except DoctrineDataError:
                    continue
    data["reindex"] = reindex
    if notes:
        data["notes"] = notes
    return data


def doctrine_from_json(data: dict, cap: int = DEFAULT_CAP,
                       fibre_cap: int = DEFAULT_FIBRE_CAP):
    """Rebuild a doctrine serialised by `doctrine_to_json`.

    A recorded generator wins: the doctrine is rebuilt in closed form
    and checked against the declared universe.  Otherwise the tables
    are replayed as a TabularDoctrine.
    """
    gen = data.get("generator")
    if gen:
        kind = gen.get("kind")
        if kind == "powerset":
            D = powerset_doctrine(tuple(gen["sizes"]), name=data.get("name"),
                                  cap=cap, fibre_cap=fibre_cap)
        elif kind == "kripke":
            frame = FinitePoset.from_json(gen["frame"])
            D = kripke_doctrine(frame, tuple(gen["sizes"]), name=data.get("name"),
                                cap=cap, fibre_cap=fibre_cap)
        else:
            raise DoctrineDataError(f"unknown generator kind {kind!r}")
        declared = data.get("universe")
        if declared is not None:
            got = [(o.name, len(o)) for o in D.universe]
            want = [(o["name"], len(o["elements"])) for o in declared]
            if got != want:
                raise DoctrineDataError("declared universe does not match the generator")
        return D
    universe = []
    by_name = {}
    for entry in data.get("universe", []):
        els = tuple(tuple(e) for e in entry["elements"])
        obj = FinObj(entry["name"], els, arity=entry.get("arity"))
        universe.append(obj)
        by_name[obj.name] = obj
    if not universe:
        raise DoctrineDataError("doctrine data declares no universe")
    heyting_data = data.get("heyting", {})
    fibres = {}
    for name, fd in data.get("fibres", {}).items():
        if name not in by_name:
            raise DoctrineDataError(f"fibre over unknown object {name!r}")
        labels = [str(x) for x in fd["elements"]]
        leq = fd["leq"]
        if len(leq) != len(labels) or any(len(row) != len(labels) for row in leq):
            raise DoctrineDataError(f"fibre over {name}: malformed order matrix")
        up = [sum(1 << j for j, v in enumerate(row) if v) for row in leq]
        tables = None
        if name in heyting_data:
            h = heyting_data[name]
            n = len(labels)
            for mat in (h["meet"], h["join"], h["imp"]):
                if len(mat) != n or any(len(r) != n for r in mat):
                    raise DoctrineDataError(f"lattice tables over {name} are malformed")
                if any(v < 0 or v >= n for r in mat for v in r):
                    raise DoctrineDataError(f"lattice tables over {name} point outside the fibre")
            tables = HeytingTables(
                h["top"], h["bottom"],
                tuple(tuple(r) for r in h["meet"]),
                tuple(tuple(r) for r in h["join"]),
                tuple(tuple(r) for r in h["imp"]),
            )
        fibres[by_name[name]] = PosetFibre(by_name[name], labels, up, tables)
    reindex = {}
    for key, table in data.get("reindex", {}).items():
        f = mor_from_key(key, by_name)
        reindex[f] = tuple(int(v) for v in table)
    return TabularDoctrine(data.get("name", "tabular"), universe, fibres, reindex)
