"""Dialectica completion of a finite doctrine.

Objects of the completed fibre over I are quadruples (I, U, X, alpha)
with alpha a predicate over I*U*X: U carries witnesses, X carries
counterexamples.  One quadruple is below another when a pair of maps
(f0: I*U -> V, f1: I*U*Y -> X) transports witnesses forward and
counterexamples backward:

    alpha(i, u, f1(i, u, y)) <= beta(i, f0(i, u), y)

Witness pairs found by the kernels are always revalidated through the
doctrine's own reindexing and order, so a returned pair is a checked
certificate, and None means the exhaustive search ran dry.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from . import _kernels as K
from .doctrine import ConcreteDoctrine, DoctrineError, mor_key
from .fincat import (
    CapExceeded,
    FinMor,
    FinObj,
    enumerate_morphisms,
    product,
    product_n,
)

DEFAULT_QUAD_CAP = 512


@dataclass(frozen=True)
class DialObject:
    """Quadruple (I, U, X, alpha) with alpha over I*U*X."""

    I: FinObj
    U: FinObj
    X: FinObj
    alpha: int

    def carrier(self) -> FinObj:
        return product_n((self.I, self.U, self.X))[0]

    def to_json(self, D) -> dict:
        fib = D.fibre(self.carrier())
        return {
            "I": self.I.name,
            "X": self.X.name,
            "U": self.U.name,
            "alpha": fib.describe(self.alpha),
        }


@dataclass(frozen=True)
class WitnessPair:
    """Maps certifying one quadruple below another."""

    f0: FinMor
    f1: FinMor

    def to_json(self) -> dict:
        return {
            "f0": {"mor": mor_key(self.f0),
                   "table": _index_table(self.f0)},
            "f1": {"mor": mor_key(self.f1),
                   "table": _index_table(self.f1)},
        }


def _index_table(f: FinMor) -> list:
    pos = {e: k for k, e in enumerate(f.cod.elements)}
    return [pos[f(e)] for e in f.dom.elements]


def _proj(dom: FinObj, cod: FinObj, pick) -> FinMor:
    return FinMor(dom, cod, tuple(pick(e) for e in dom.elements))


def _arities(q: DialObject) -> tuple[int, int]:
    return q.I.arity, q.U.arity


def pair_is_valid(D, a: DialObject, b: DialObject, p: WitnessPair) -> bool:
    """Re-check the defining inequality through the doctrine itself."""
    if a.I != b.I:
        return False
    ki = a.I.arity
    ku = a.U.arity
    iuy = product_n((a.I, a.U, b.X))[0]
    iux = product_n((a.I, a.U, a.X))[0]
    ivy = product_n((a.I, b.U, b.X))[0]
    if p.f0.dom != product(a.I, a.U).obj or p.f0.cod != b.U:
        return False
    if p.f1.dom != iuy or p.f1.cod != a.X:
        return False
    m1 = _proj(iuy, iux, lambda e: e[: ki + ku] + p.f1(e))
    m2 = _proj(iuy, ivy, lambda e: e[:ki] + p.f0(e[: ki + ku]) + e[ki + ku:])
    lhs = D.reindex_el(m1, a.alpha)
    rhs = D.reindex_el(m2, b.alpha)
    return D.fibre(iuy).leq(lhs, rhs)


def identity_pair(D, a: DialObject) -> WitnessPair:
    """The pair certifying a <= a: project the witness, project the
    counterexample."""
    iu = product(a.I, a.U)
    iux = product_n((a.I, a.U, a.X))[0]
    ki = a.I.arity
    ku = a.U.arity
    f0 = _proj(iu.obj, a.U, lambda e: e[ki:])
    f1 = _proj(iux, a.X, lambda e: e[ki + ku:])
    p = WitnessPair(f0, f1)
    if not pair_is_valid(D, a, a, p):
        raise DoctrineError("identity pair failed revalidation")
    return p


def dial_leq(D, a: DialObject, b: DialObject, method: str = "auto"):
    """Search for a witness pair; a returned pair is revalidated, None is
    the outcome of an exhaustive scan.

    method "auto" uses the kernels on concrete doctrines, "generic"
    forces the doctrine-level search over all candidate maps.
    """
    if a.I != b.I:
        raise DoctrineError("dialectica order compares quadruples over one base")
    if method == "auto" and isinstance(D, ConcreteDoctrine):
        found = K.witness_pair(
            a.alpha, b.alpha,
            len(a.I), len(a.U), len(a.X), len(b.U), len(b.X), D.nw,
        )
        if found is None:
            return None
        f0_idx, f1_idx = found
        iu = product(a.I, a.U).obj
        iuy = product_n((a.I, a.U, b.X))[0]
        f0 = FinMor(iu, b.U, tuple(b.U.elements[k] for k in f0_idx))
        f1 = FinMor(iuy, a.X, tuple(a.X.elements[k] for k in f1_idx))
        p = WitnessPair(f0, f1)
        if not pair_is_valid(D, a, b, p):
            raise DoctrineError("kernel witness pair failed revalidation")
        return p
    iu = product(a.I, a.U).obj
    iuy = product_n((a.I, a.U, b.X))[0]
    for f0 in enumerate_morphisms(iu, b.U):
        for f1 in enumerate_morphisms(iuy, a.X):
            p = WitnessPair(f0, f1)
            if pair_is_valid(D, a, b, p):
                return p
    return None


def compose_pairs(D, a: DialObject, b: DialObject, c: DialObject,
                  p: WitnessPair, q: WitnessPair) -> WitnessPair:
    """Compose certificates a <= b and b <= c into one for a <= c."""
    ki = a.I.arity
    ku = a.U.arity
    iu = product(a.I, a.U).obj
    iuz = product_n((a.I, a.U, c.X))[0]
    f0 = _proj(iu, c.U, lambda e: q.f0(e[:ki] + p.f0(e)))
    f1 = _proj(
        iuz, a.X,
        lambda e: p.f1(e[: ki + ku]
                       + q.f1(e[:ki] + p.f0(e[: ki + ku]) + e[ki + ku:])),
    )
    out = WitnessPair(f0, f1)
    if not pair_is_valid(D, a, c, out):
        raise DoctrineError("composed witness pair failed revalidation")
    return out


def dial_reindex(D, f: FinMor, q: DialObject) -> DialObject:
    """Pull a quadruple over I back along f: J -> I, keeping U and X."""
    if f.cod != q.I:
        raise DoctrineError("reindexing map must target the quadruple's base")
    jux = product_n((f.dom, q.U, q.X))[0]
    iux = product_n((q.I, q.U, q.X))[0]
    kj = f.dom.arity
    m = _proj(jux, iux, lambda e: f(e[:kj]) + e[kj:])
    return DialObject(f.dom, q.U, q.X, D.reindex_el(m, q.alpha))


# -- completed fibres ---------------------------------------------------


@dataclass
class DialFibre:
    """Bounded enumeration of one completed fibre with its order matrix."""

    I: FinObj
    quads: tuple
    rows: tuple
    total: int
    notes: tuple

    def leq(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def classes(self) -> tuple:
        """Partition into order-equivalence classes (the poset reflection)."""
        seen = {}
        for k in range(len(self.quads)):
            key = None
            for rep in seen:
                if self.leq(k, rep) and self.leq(rep, k):
                    key = rep
                    break
            seen.setdefault(key if key is not None else k, []).append(k)
        return tuple(tuple(v) for _, v in sorted(seen.items()))


@dataclass
class PreorderReport:
    fibre: str
    quads: int
    reflexive_failures: tuple
    transitive_failures: tuple
    compositions_checked: int
    composition_failures: tuple
    notes: tuple

    @property
    def passed(self) -> bool:
        return not (self.reflexive_failures or self.transitive_failures
                    or self.composition_failures)


def enumerate_quads(D, I: FinObj, matrices=None, quad_cap: int = DEFAULT_QUAD_CAP,
                    universe=None):
    """List quadruples (I, U, X, alpha) with U, X in the universe and
    alpha drawn from `matrices` (a filter on predicates; default all).

    Over the cap the list is stride-sampled and a note records the
    sampling; the returned triple is (quads, total, notes).
    """
    objs = tuple(universe) if universe is not None else tuple(D.universe)
    notes = []
    quads = []
    total = 0
    for U in objs:
        for X in objs:
            try:
                carrier = product_n((I, U, X))[0]
                alphas = D.fibre(carrier).elements()
            except CapExceeded as exc:
                notes.append(f"quads over {I.name}*{U.name}*{X.name} skipped: {exc}")
                continue
            for alpha in alphas:
                if matrices is not None and not matrices(carrier, alpha):
                    continue
                total += 1
                quads.append(DialObject(I, U, X, alpha))
    if len(quads) > quad_cap:
        step = -(-len(quads) // quad_cap)
        quads = quads[::step]
        notes.append(
            f"quadruple list sampled every {step}th of {total}")
    return quads, total, notes


def build_dial_fibre(D, I: FinObj, matrices=None, quad_cap: int = DEFAULT_QUAD_CAP,
                     universe=None) -> DialFibre:
    """Enumerate quadruples and tabulate the dialectica order exhaustively
    on the listed ones."""
    quads, total, notes = enumerate_quads(D, I, matrices, quad_cap, universe)
    rows = []
    for a in quads:
        row = 0
        for j, b in enumerate(quads):
            if dial_leq(D, a, b) is not None:
                row |= 1 << j
        rows.append(row)
    return DialFibre(I, tuple(quads), tuple(rows), total, tuple(notes))


def _random_bit(rng, mask: int) -> int:
    """A uniformly chosen set-bit position of a nonzero mask."""
    r = rng.randrange(mask.bit_count())
    base = 0
    word = (1 << 64) - 1
    while True:
        chunk = mask & word
        c = chunk.bit_count()
        if r < c:
            while r:
                chunk &= chunk - 1
                r -= 1
            return base + (chunk & -chunk).bit_length() - 1
        r -= c
        mask >>= 64
        base += 64


def check_preorder(D, fib: DialFibre, compositions: int = 64,
                   seed: int = 0) -> PreorderReport:
    """Reflexivity via explicit identity pairs, transitivity on the full
    matrix, and revalidated composition on sampled chains a <= b <= c."""
    refl = []
    for k, q in enumerate(fib.quads):
        try:
            identity_pair(D, q)
        except DoctrineError:
            refl.append(k)
        if not fib.leq(k, k):
            refl.append(k)
    trans = []
    n = len(fib.quads)
    for i in range(n):
        row = fib.rows[i]
        m = row
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            if fib.rows[j] & ~row:
                k = (fib.rows[j] & ~row).bit_length() - 1
                trans.append((i, j, k))
        if trans:
            break
    # Sample composable triples; dense fibres have far too many to
    # materialise, so only small ones are walked exhaustively.
    rng = random.Random(seed)
    chains = []
    pairs = sum(r.bit_count() for r in fib.rows)
    estimated = pairs * (pairs // n + 1) if n else 0
    if estimated <= 200_000:
        seen = 0
        for i in range(n):
            m = fib.rows[i]
            while m:
                j = (m & -m).bit_length() - 1
                m &= m - 1
                m2 = fib.rows[j]
                while m2:
                    k = (m2 & -m2).bit_length() - 1
                    m2 &= m2 - 1
                    if i == j or j == k:
                        continue
                    seen += 1
                    if len(chains) < compositions:
                        chains.append((i, j, k))
                    else:
                        slot = rng.randrange(seen)
                        if slot < compositions:
                            chains[slot] = (i, j, k)
    else:
        starts = [i for i in range(n) if fib.rows[i]]
        attempts = 0
        while len(chains) < compositions and attempts < compositions * 40:
            attempts += 1
            i = rng.choice(starts)
            j = _random_bit(rng, fib.rows[i])
            if i == j or not fib.rows[j]:
                continue
            k = _random_bit(rng, fib.rows[j])
            if j != k:
                chains.append((i, j, k))
    comp_fail = []
    for (i, j, k) in chains:
        a, b, c = fib.quads[i], fib.quads[j], fib.quads[k]
        p = dial_leq(D, a, b)
        q = dial_leq(D, b, c)
        try:
            compose_pairs(D, a, b, c, p, q)
        except DoctrineError as exc:
            comp_fail.append((i, j, k, str(exc)))
    return PreorderReport(fib.I.name, n, tuple(refl), tuple(trans),
                          len(chains), tuple(comp_fail), fib.notes)


# -- the two characterisation checks -----------------------------------


@dataclass
class Theorem2Report:
    """Seeded samples comparing the doctrine order on prenex forms with
    the witness-pair order."""

    doctrine: str
    base: str
    checked: int
    seed: int
    mismatches: tuple
    notes: tuple

    @property
    def passed(self) -> bool:
        return not self.mismatches


def _proj_iu(D, I, U, X):
    iux = product_n((I, U, X))[0]
    iu = product(I, U).obj
    k = I.arity + U.arity
    return _proj(iux, iu, lambda e: e[:k]), iu


def prenex_order(D, I, U, X, alpha):
    """The predicate over I presented by exists-u forall-x alpha."""
    p2, iu = _proj_iu(D, I, U, X)
    p1 = _proj(iu, I, lambda e: e[: I.arity])
    return D.exists_along(p1, D.forall_along(p2, alpha))


def check_theorem2(D, analyzer, I: FinObj, samples: int = 200,
                   seed: int = 0, universe=None) -> Theorem2Report:
    """On quantifier-free matrices the order between prenex forms in P(I)
    must coincide with the existence of a witness pair."""
    objs = tuple(universe) if universe is not None else tuple(D.universe)
    rng = random.Random(seed)
    pools = {}
    notes = []
    for U in objs:
        for X in objs:
            try:
                carrier = product_n((I, U, X))[0]
                qf = tuple(a for a in D.fibre(carrier).elements()
                           if analyzer.quantifier_free(carrier, a))
            except CapExceeded as exc:
                notes.append(f"{I.name}*{U.name}*{X.name} skipped: {exc}")
                continue
            if qf:
                pools[(U, X)] = qf
    keys = sorted(pools, key=lambda ux: (ux[0].name, ux[1].name))
    mismatches = []
    checked = 0
    for _ in range(samples):
        U, X = keys[rng.randrange(len(keys))]
        V, Y = keys[rng.randrange(len(keys))]
        psi = pools[(U, X)][rng.randrange(len(pools[(U, X)]))]
        phi = pools[(V, Y)][rng.randrange(len(pools[(V, Y)]))]
        a = DialObject(I, U, X, psi)
        b = DialObject(I, V, Y, phi)
        lhs = D.fibre(I).leq(prenex_order(D, I, U, X, psi),
                             prenex_order(D, I, V, Y, phi))
        pair = dial_leq(D, a, b)
        checked += 1
        if lhs != (pair is not None):
            mismatches.append({
                "psi": a.to_json(D), "phi": b.to_json(D),
                "prenexOrder": lhs, "witnessPair": pair is not None,
            })
    return Theorem2Report(D.name, I.name, checked, seed,
                          tuple(mismatches), tuple(notes))


@dataclass
class Theorem4Report:
    """Per-fibre comparison of P(I) with the completed fibre over the
    quantifier-free subdoctrine, along alpha -> (I, U, X, alpha_D)."""

    doctrine: str
    base: str
    embedding_checked: int
    embedding_failures: tuple
    surjectivity_checked: int
    surjectivity_failures: tuple
    prenex_missing: tuple
    notes: tuple

    @property
    def passed(self) -> bool:
        return not (self.embedding_failures or self.surjectivity_failures
                    or self.prenex_missing)


def check_theorem4(D, analyzer, I: FinObj, quad_cap: int = DEFAULT_QUAD_CAP,
                   universe=None) -> Theorem4Report:
    """The prenex presentation must embed P(I) into the completed fibre
    order-exactly, and every quantifier-free quadruple must collapse back
    to the predicate its prenex form presents."""
    objs = tuple(universe) if universe is not None else tuple(D.universe)
    alphas = D.fibre(I).elements()
    quads = {}
    missing = []
    for alpha in alphas:
        w = analyzer.prenex(I, alpha)
        if w is None:
            missing.append(D.fibre(I).describe(alpha))
            continue
        quads[alpha] = DialObject(I, w.u_obj, w.x_obj, w.beta)
    emb_fail = []
    emb_checked = 0
    pairs = [(a, b) for a in quads for b in quads]
    for a, b in pairs:
        lhs = D.fibre(I).leq(a, b)
        rhs = dial_leq(D, quads[a], quads[b]) is not None
        emb_checked += 1
        if lhs != rhs:
            emb_fail.append({
                "alpha": D.fibre(I).describe(a),
                "beta": D.fibre(I).describe(b),
                "fibreOrder": lhs, "witnessPair": rhs,
            })
    qf_quads, _, notes = enumerate_quads(D, I, matrices=analyzer.quantifier_free,
                                         quad_cap=quad_cap, universe=objs)
    sur_fail = []
    sur_checked = 0
    for q in qf_quads:
        back = prenex_order(D, q.I, q.U, q.X, q.alpha)
        sur_checked += 1
        if back not in quads:
            sur_fail.append({"quad": q.to_json(D),
                             "reason": "prenex form missing for presented predicate"})
            continue
        qa = quads[back]
        if dial_leq(D, q, qa) is None or dial_leq(D, qa, q) is None:
            sur_fail.append({"quad": q.to_json(D),
                             "alpha": D.fibre(I).describe(back),
                             "reason": "not order-equivalent to its collapse"})
    return Theorem4Report(D.name, I.name, emb_checked, tuple(emb_fail),
                          sur_checked, tuple(sur_fail), tuple(missing),
                          tuple(notes))
