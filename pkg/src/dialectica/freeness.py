"""Splitting and freeness analysis of doctrine predicates.

A predicate splits existentially when every way of covering it by a
quantified predicate over a product admits a choice map realising the
cover; it is existential-free when all of its reindexings split.  Dual
notions hold for the universal quantifier.  These verdicts, relative to
a declared universe of carriers, drive the layered characterisation
checked by `godel_report`: closure of the base, quantifier structure,
enough existential-free predicates, stability of freeness under the
universal quantifier, and enough universal-free predicates inside the
existential-free part.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import _kernels as K
from .doctrine import (
    ConcreteDoctrine,
    DoctrineError,
    base_closure,
    mor_key,
    quantifier_structure,
    universe_note,
)
from .fincat import CapExceeded, FinMor, enumerate_morphisms, product


@dataclass
class SplitWitness:
    partner: str
    beta: object
    g: FinMor


@dataclass
class SplittingReport:
    kind: str
    obj: str
    alpha: object
    passed: bool
    witnesses: list
    failure: tuple | None
    checked: int
    scope: str


@dataclass
class FreeReport:
    kind: str
    obj: str
    alpha: object
    passed: bool
    failing: tuple | None


@dataclass
class EnoughReport:
    kind: str
    passed: bool
    witnesses: list
    failures: list
    notes: list


@dataclass
class StabilityReport:
    passed: bool
    failures: list
    checked: int
    notes: list


@dataclass
class PrenexWitness:
    obj: object
    alpha: object
    u_obj: object
    x_obj: object
    beta: object
    gamma: object


@dataclass
class GodelReport:
    name: str
    passed: bool
    closure: object
    exists_structure: object
    forall_structure: object
    enough_existential_free: EnoughReport
    stability: StabilityReport
    enough_universal_free: EnoughReport | None
    note: str

    def parts(self) -> dict:
        out = {
            "cartesian_closed": self.closure.passed,
            "existential_universal": (self.exists_structure.passed
                                      and self.forall_structure.passed),
            "enough_existential_free": self.enough_existential_free.passed,
            "existential_free_stable_under_forall": self.stability.passed,
        }
        if self.enough_universal_free is not None:
            out["subdoctrine_enough_universal_free"] = self.enough_universal_free.passed
        return out


class FreenessAnalyzer:
    """Memoised splitting, freeness and presentation search over one
    doctrine.  All quantification over carriers and maps ranges over the
    declared universe; reports carry that caveat."""

    def __init__(self, D, objects=None):
        self.D = D
        self.objects = tuple(objects or D.universe)
        self._split: dict = {}
        self._free: dict = {}
        self._free_elements: dict = {}

    # -- splitting ---------------------------------------------------

    def existential_splitting(self, A, alpha, scope: str = "all") -> SplittingReport:
        return self._splitting("existential", A, alpha, scope)

    def universal_splitting(self, A, alpha, scope: str = "all") -> SplittingReport:
        return self._splitting("universal", A, alpha, scope)

    def _splitting(self, kind, A, alpha, scope) -> SplittingReport:
        key = (kind, A.name, A.elements, alpha, scope)
        hit = self._split.get(key)
        if hit is not None:
            return hit
        D = self.D
        fib_a = D.fibre(A)
        witnesses: list = []
        failure = None
        checked = 0
        for B in self.objects:
            p = product(A, B, getattr(D, "cap", 4096))
            betas = self._scope_elements(p.obj, scope)
            for beta in betas:
                if kind == "existential":
                    if not fib_a.leq(alpha, D.exists_along(p.proj_left, beta)):
                        continue
                else:
                    if not fib_a.leq(D.forall_along(p.proj_left, beta), alpha):
                        continue
                checked += 1
                g = self._choice_map(kind, A, B, p, alpha, beta)
                if g is None:
                    failure = (B.name, beta)
                    break
                witnesses.append(SplitWitness(B.name, beta, g))
            if failure:
                break
        report = SplittingReport(kind, A.name, alpha, failure is None,
                                 witnesses, failure, checked, scope)
        self._split[key] = report
        return report

    def _choice_map(self, kind, A, B, p, alpha, beta):
        D = self.D
        g_table = None
        if isinstance(D, ConcreteDoctrine):
            search = K.exists_gap_g if kind == "existential" else K.forall_gap_g
            g_idx = search(alpha, beta, len(A), len(B), D.nw)
            if g_idx is not None:
                g_table = tuple(B.elements[j] for j in g_idx)
        else:
            for cand in enumerate_morphisms(A, B, getattr(D, "cap", 4096)):
                if self._graph_ok(kind, A, p, alpha, beta, cand.table):
                    g_table = cand.table
                    break
        if g_table is None:
            return None
        if not self._graph_ok(kind, A, p, alpha, beta, g_table):
            raise DoctrineError("choice map failed revalidation")
        return FinMor(A, B, g_table)

    def _graph_ok(self, kind, A, p, alpha, beta, g_table) -> bool:
        D = self.D
        graph = FinMor(A, p.obj, tuple(e + g_table[i] for i, e in enumerate(A.elements)))
        pulled = D.reindex_el(graph, beta)
        fib_a = D.fibre(A)
        if kind == "existential":
            return fib_a.leq(alpha, pulled)
        return fib_a.leq(pulled, alpha)

    def _scope_elements(self, obj, scope):
        if scope == "all":
            return self.D.fibre(obj).elements()
        if scope == "exfree":
            return self.exfree_elements(obj)
        raise ValueError(f"unknown scope {scope!r}")

    # -- freeness ----------------------------------------------------

    def is_existential_free(self, I, alpha) -> bool:
        return self.existential_free_report(I, alpha).passed

    def is_universal_free(self, I, alpha, scope: str = "all") -> bool:
        return self.universal_free_report(I, alpha, scope).passed

    def existential_free_report(self, I, alpha) -> FreeReport:
        return self._free_report("existential", I, alpha, "all")

    def universal_free_report(self, I, alpha, scope: str = "all") -> FreeReport:
        return self._free_report("universal", I, alpha, scope)

    def _free_report(self, kind, I, alpha, scope) -> FreeReport:
        key = (kind, I.name, I.elements, alpha, scope)
        hit = self._free.get(key)
        if hit is not None:
            return hit
        D = self.D
        failing = None
        for A in self.objects:
            for f in D.morphisms(A, I):
                pulled = D.reindex_el(f, alpha)
                rep = self._splitting(kind, A, pulled, scope)
                if not rep.passed:
                    failing = (A.name, mor_key(f), pulled, rep)
                    break
            if failing:
                break
        report = FreeReport(kind, I.name, alpha, failing is None, failing)
        self._free[key] = report
        return report

    def exfree_elements(self, obj) -> tuple:
        key = obj.elements
        hit = self._free_elements.get(key)
        if hit is None:
            hit = tuple(a for a in self.D.fibre(obj).elements()
                        if self.is_existential_free(obj, a))
            self._free_elements[key] = hit
        return hit

    def quantifier_free(self, I, alpha) -> bool:
        """Existential-free, and universal-free within the subdoctrine of
        existential-free predicates."""
        return (self.is_existential_free(I, alpha)
                and self.is_universal_free(I, alpha, scope="exfree"))

    # -- enough free predicates ---------------------------------------

    def enough_existential_free(self) -> EnoughReport:
        """Every predicate must be a quantified image of an
        existential-free predicate over some product with the universe."""
        D = self.D
        witnesses: list = []
        failures: list = []
        notes: list = []
        for I in self.objects:
            try:
                alphas = D.fibre(I).elements()
            except CapExceeded as exc:
                notes.append(f"fibre over {I.name} skipped: {exc}")
                continue
            for alpha in alphas:
                found = None
                for A in sorted(self.objects, key=lambda o: (len(o), o.name)):
                    try:
                        p = product(I, A, getattr(D, "cap", 4096))
                        for beta in self.exfree_elements(p.obj):
                            if D.exists_along(p.proj_left, beta) == alpha:
                                found = (I.name, alpha, A.name, beta)
                                break
                    except CapExceeded as exc:
                        notes.append(f"{I.name} x {A.name} skipped: {exc}")
                    if found:
                        break
                if found:
                    witnesses.append(found)
                else:
                    failures.append((I.name, alpha))
        return EnoughReport("existential", not failures, witnesses, failures, notes)

    def enough_universal_free_sub(self) -> EnoughReport:
        """Inside the existential-free part, every predicate must be a
        universally quantified image of a universal-free one."""
        D = self.D
        witnesses: list = []
        failures: list = []
        notes: list = []
        for I in self.objects:
            try:
                alphas = self.exfree_elements(I)
            except CapExceeded as exc:
                notes.append(f"fibre over {I.name} skipped: {exc}")
                continue
            for alpha in alphas:
                found = None
                for A in sorted(self.objects, key=lambda o: (len(o), o.name)):
                    try:
                        p = product(I, A, getattr(D, "cap", 4096))
                        for beta in self.exfree_elements(p.obj):
                            if D.forall_along(p.proj_left, beta) != alpha:
                                continue
                            if self.is_universal_free(p.obj, beta, scope="exfree"):
                                found = (I.name, alpha, A.name, beta)
                                break
                    except CapExceeded as exc:
                        notes.append(f"{I.name} x {A.name} skipped: {exc}")
                    if found:
                        break
                if found:
                    witnesses.append(found)
                else:
                    failures.append((I.name, alpha))
        return EnoughReport("universal", not failures, witnesses, failures, notes)

    def stability_under_forall(self) -> StabilityReport:
        """Quantifying an existential-free predicate universally along a
        projection must land on an existential-free predicate."""
        D = self.D
        failures: list = []
        notes: list = []
        checked = 0
        for A in self.objects:
            for B in self.objects:
                try:
                    p = product(A, B, getattr(D, "cap", 4096))
                    betas = self.exfree_elements(p.obj)
                except CapExceeded as exc:
                    notes.append(f"{A.name} x {B.name} skipped: {exc}")
                    continue
                for beta in betas:
                    checked += 1
                    gamma = D.forall_along(p.proj_left, beta)
                    if not self.is_existential_free(A, gamma):
                        failures.append((A.name, B.name, beta, gamma))
        return StabilityReport(not failures, failures, checked, notes)

    # -- presentations -------------------------------------------------

    def prenex(self, I, alpha):
        """Smallest presentation of alpha as an existential image of a
        universal image of a predicate free for both quantifiers.
        Partners are searched through the universe in size order."""
        D = self.D
        ordered = sorted(self.objects, key=lambda o: (len(o), o.name))
        skipped: list = []
        for U in ordered:
            try:
                p_iu = product(I, U, getattr(D, "cap", 4096))
                gammas = [g for g in self.exfree_elements(p_iu.obj)
                          if D.exists_along(p_iu.proj_left, g) == alpha]
            except CapExceeded as exc:
                skipped.append(str(exc))
                continue
            if not gammas:
                continue
            for X in ordered:
                try:
                    p3 = product(p_iu.obj, X, getattr(D, "cap", 4096))
                    betas = self.exfree_elements(p3.obj)
                except CapExceeded as exc:
                    skipped.append(str(exc))
                    continue
                for gamma in gammas:
                    for beta in betas:
                        if D.forall_along(p3.proj_left, beta) != gamma:
                            continue
                        if self.is_universal_free(p3.obj, beta, scope="exfree"):
                            return PrenexWitness(I, alpha, U, X,
                                                 beta, gamma)
        return None

    # -- the characterisation ------------------------------------------

    def godel_report(self, skolem_only: bool = False) -> GodelReport:
        D = self.D
        closure = base_closure(D, getattr(D, "cap", 4096))
        ex_struct = quantifier_structure(D, "exists", self.objects)
        fa_struct = quantifier_structure(D, "forall", self.objects)
        enough_ex = self.enough_existential_free()
        stab = self.stability_under_forall()
        enough_un = None if skolem_only else self.enough_universal_free_sub()
        passed = (closure.passed and ex_struct.passed and fa_struct.passed
                  and enough_ex.passed and stab.passed
                  and (enough_un is None or enough_un.passed))
        return GodelReport(D.name, passed, closure, ex_struct, fa_struct,
                           enough_ex, stab, enough_un, universe_note(D))

    def skolem_report(self) -> GodelReport:
        return self.godel_report(skolem_only=True)
