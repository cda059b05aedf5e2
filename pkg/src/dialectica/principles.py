"""Rule checkers for the logical principles a doctrine may validate.

Each checker scans fibres over the declared universe exhaustively and
returns a self-certifying report: every positive witness is re-validated
through the doctrine's own reindexing and order before it is recorded,
and every violation carries enough data to re-check it.

Strict mode enforces each rule's stated preconditions (freeness of the
predicates involved, and for the corollary rules a doctrine-level
hypothesis such as bottom being quantifier-free); diagnostic mode drops
the preconditions to exhibit where unrestricted rules genuinely fail.
A sequent "top entails phi" is evaluated as top <= phi in the Heyting
fibre; the deduction step (top <= alpha -> beta iff alpha <= beta) is
residuation in those fibres.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import _kernels as K
from .doctrine import DoctrineError, mor_key
from .fincat import CapExceeded, FinMor, exponential, product, product_n
from .freeness import FreenessAnalyzer

WITNESS_CAP = 6


@dataclass
class RuleReport:
    """Outcome of scanning one rule over a doctrine's universe."""

    rule: str
    doctrine: str
    mode: str
    verdict: str
    scanned: tuple
    instances: int
    vacuous: int
    skipped: int
    witnesses: tuple
    violations: tuple
    hypothesis: dict | None
    notes: tuple

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "doctrine": self.doctrine,
            "mode": self.mode,
            "verdict": self.verdict,
            "scanned": list(self.scanned),
            "instances": self.instances,
            "vacuous": self.vacuous,
            "skipped": self.skipped,
            "witnesses": [dict(w) for w in self.witnesses],
            "violations": [dict(v) for v in self.violations],
            "hypothesis": self.hypothesis,
            "notes": list(self.notes),
        }


def _graph(A, B, p, table):
    """The map <1, t>: A -> A x B from an index table for t."""
    return FinMor(A, p.obj, tuple(A.elements[i] + B.elements[table[i]]
                                  for i in range(len(A))))


def _mor_json(f: FinMor) -> dict:
    pos = {e: k for k, e in enumerate(f.cod.elements)}
    return {"mor": mor_key(f), "table": [pos[f(e)] for e in f.dom.elements]}


def _verdict(strict_gate_ok, mode, violations) -> str:
    if mode == "strict" and not strict_gate_ok:
        return "hypothesis-failed"
    return "fail" if violations else "pass"


def _scan_pairs(D, objects):
    objs = tuple(objects) if objects is not None else tuple(D.universe)
    for A in objs:
        for B in objs:
            yield A, B, product(A, B)


def _fibres(D, A, p, notes):
    try:
        return D.fibre(A).elements(), D.fibre(p.obj).elements()
    except CapExceeded as exc:
        notes.append(f"{A.name} with partner fibre skipped: {exc}")
        return None, None


def check_ip_rule(D, analyzer: FreenessAnalyzer | None = None,
                  mode: str = "strict", objects=None,
                  witness_cap: int = WITNESS_CAP) -> RuleReport:
    """Independence of premise: when top entails alpha -> exists-b beta
    for existential-free alpha, some t: A -> B makes top entail
    alpha -> beta(a, t(a)), and the existential sequent follows."""
    fa = analyzer or FreenessAnalyzer(D, objects)
    notes: list = []
    witnesses: list = []
    violations: list = []
    scanned: list = []
    instances = vacuous = skipped = 0
    for A, B, p in _scan_pairs(D, objects):
        alphas, betas = _fibres(D, A, p, notes)
        if alphas is None:
            continue
        scanned.append(f"{A.name}|{B.name}")
        fibA = D.fibre(A)
        fibAB = D.fibre(p.obj)
        topA = fibA.top()
        exfree = set(fa.exfree_elements(A))
        for alpha in alphas:
            qualifies = alpha in exfree
            if mode == "strict" and not qualifies:
                skipped += len(betas)
                continue
            for beta in betas:
                premise = fibA.leq(topA, fibA.imp(
                    alpha, D.exists_along(p.proj_left, beta)))
                if not premise:
                    vacuous += 1
                    continue
                instances += 1
                seq = fibA.leq(topA, D.exists_along(p.proj_left, fibAB.imp(
                    D.reindex_el(p.proj_left, alpha), beta)))
                t = K.exists_gap_g(alpha, beta, len(A), len(B), D.nw)
                entry = {
                    "base": A.name, "partner": B.name,
                    "alpha": fibA.describe(alpha),
                    "beta": fibAB.describe(beta),
                    "preconditionsHold": qualifies,
                }
                if t is None or not seq:
                    entry["kind"] = ("sequent-fails" if not seq
                                     else "no-term-witness")
                    violations.append(entry)
                    continue
                g = _graph(A, B, p, t)
                if not fibA.leq(topA, fibA.imp(alpha, D.reindex_el(g, beta))):
                    raise DoctrineError("term witness failed revalidation")
                if len(witnesses) < witness_cap:
                    entry["t"] = _mor_json(FinMor(
                        A, B, tuple(B.elements[i] for i in t)))
                    witnesses.append(entry)
    return RuleReport("independence-of-premise", D.name, mode,
                      _verdict(True, mode, violations), tuple(scanned),
                      instances, vacuous, skipped, tuple(witnesses),
                      tuple(violations), None, tuple(notes))


def _markov_scan(D, fa, mode, objects, witness_cap, bottom_only: bool,
                 rule_name: str):
    """Shared scan for the modified Markov rule and its bottom instance.

    With bottom_only the target is pinned to bottom and alpha must be
    quantifier-free in strict mode (the corollary's shape); otherwise
    targets range over quantifier-free predicates and alpha must be
    existential-free.
    """
    notes: list = []
    witnesses: list = []
    violations: list = []
    scanned: list = []
    instances = vacuous = skipped = 0
    gates = {}
    for A, B, p in _scan_pairs(D, objects):
        alphas, _ = _fibres(D, A, p, notes)
        if alphas is None:
            continue
        fibA = D.fibre(A)
        fibAB = D.fibre(p.obj)
        alphas = fibAB.elements()
        scanned.append(f"{A.name}|{B.name}")
        topA = fibA.top()
        botA = fibA.bottom()
        if bottom_only and A.name not in gates:
            gates[A.name] = fa.quantifier_free(A, botA)
        targets = [botA] if bottom_only else list(fibA.elements())
        exfree = set(fa.exfree_elements(p.obj))
        for alpha in alphas:
            if mode == "strict":
                ok = (fa.quantifier_free(p.obj, alpha) if bottom_only
                      else alpha in exfree)
                if not ok:
                    skipped += len(targets)
                    continue
            fal = D.forall_along(p.proj_left, alpha)
            for betaD in targets:
                if mode == "strict" and not bottom_only \
                        and not fa.quantifier_free(A, betaD):
                    skipped += 1
                    continue
                premise = fibA.leq(topA, fibA.imp(fal, betaD))
                if not premise:
                    vacuous += 1
                    continue
                instances += 1
                seq = fibA.leq(topA, D.exists_along(p.proj_left, fibAB.imp(
                    alpha, D.reindex_el(p.proj_left, betaD))))
                t = K.forall_gap_g(betaD, alpha, len(A), len(B), D.nw)
                entry = {
                    "base": A.name, "partner": B.name,
                    "alpha": fibAB.describe(alpha),
                    "betaD": fibA.describe(betaD),
                }
                if t is None or not seq:
                    entry["kind"] = ("sequent-fails" if not seq
                                     else "no-term-witness")
                    violations.append(entry)
                    continue
                g = _graph(A, B, p, t)
                if not fibA.leq(D.reindex_el(g, alpha), betaD):
                    raise DoctrineError("term witness failed revalidation")
                if len(witnesses) < witness_cap:
                    entry["t"] = _mor_json(FinMor(
                        A, B, tuple(B.elements[i] for i in t)))
                    witnesses.append(entry)
    hypothesis = None
    gate_ok = True
    if bottom_only:
        gate_ok = all(gates.values())
        hypothesis = {"bottomQuantifierFree": gates, "holds": gate_ok}
        if mode == "strict" and not gate_ok:
            notes.append("corollary hypothesis fails; instances not judged")
            return RuleReport(rule_name, D.name, mode, "hypothesis-failed",
                              tuple(scanned), 0, vacuous,
                              skipped + instances, (), (),
                              hypothesis, tuple(notes))
    return RuleReport(rule_name, D.name, mode,
                      _verdict(gate_ok, mode, violations), tuple(scanned),
                      instances, vacuous, skipped, tuple(witnesses),
                      tuple(violations), hypothesis, tuple(notes))


def check_modified_markov(D, analyzer: FreenessAnalyzer | None = None,
                          mode: str = "strict", objects=None,
                          witness_cap: int = WITNESS_CAP) -> RuleReport:
    """Modified Markov rule: when top entails (forall-b alpha) -> betaD
    for existential-free alpha and quantifier-free betaD, some t: A -> B
    makes alpha(a, t(a)) entail betaD(a)."""
    fa = analyzer or FreenessAnalyzer(D, objects)
    return _markov_scan(D, fa, mode, objects, witness_cap, False,
                        "modified-markov")


def check_markov(D, analyzer: FreenessAnalyzer | None = None,
                 mode: str = "strict", objects=None,
                 witness_cap: int = WITNESS_CAP) -> RuleReport:
    """Markov rule: the modified rule instantiated at betaD = bottom,
    guarded by the hypothesis that bottom is quantifier-free."""
    fa = analyzer or FreenessAnalyzer(D, objects)
    return _markov_scan(D, fa, mode, objects, witness_cap, True, "markov")


def check_counterexample_property(D, analyzer: FreenessAnalyzer | None = None,
                                  mode: str = "strict", objects=None,
                                  witness_cap: int = WITNESS_CAP) -> RuleReport:
    """When forall-b alpha entails bottom, some g: A -> B makes
    alpha(a, g(a)) entail bottom; guarded by bottom being
    quantifier-free."""
    fa = analyzer or FreenessAnalyzer(D, objects)
    notes: list = []
    witnesses: list = []
    violations: list = []
    scanned: list = []
    instances = vacuous = 0
    gates = {}
    for A, B, p in _scan_pairs(D, objects):
        alphas, betas = _fibres(D, A, p, notes)
        if alphas is None:
            continue
        scanned.append(f"{A.name}|{B.name}")
        fibA = D.fibre(A)
        fibAB = D.fibre(p.obj)
        botA = fibA.bottom()
        if A.name not in gates:
            gates[A.name] = fa.quantifier_free(A, botA)
        for alpha in betas:
            if not fibA.leq(D.forall_along(p.proj_left, alpha), botA):
                vacuous += 1
                continue
            instances += 1
            g = K.forall_gap_g(botA, alpha, len(A), len(B), D.nw)
            entry = {
                "base": A.name, "partner": B.name,
                "alpha": fibAB.describe(alpha),
            }
            if g is None:
                entry["kind"] = "no-term-witness"
                violations.append(entry)
                continue
            gm = _graph(A, B, p, g)
            if not fibA.leq(D.reindex_el(gm, alpha), botA):
                raise DoctrineError("term witness failed revalidation")
            if len(witnesses) < witness_cap:
                entry["g"] = _mor_json(FinMor(
                    A, B, tuple(B.elements[i] for i in g)))
                witnesses.append(entry)
    gate_ok = all(gates.values())
    hypothesis = {"bottomQuantifierFree": gates, "holds": gate_ok}
    if mode == "strict" and not gate_ok:
        notes.append("corollary hypothesis fails; instances not judged")
        return RuleReport("counterexample-property", D.name, mode,
                          "hypothesis-failed", tuple(scanned), 0,
                          vacuous, instances, (), (), hypothesis,
                          tuple(notes))
    return RuleReport("counterexample-property", D.name, mode,
                      _verdict(gate_ok, mode, violations), tuple(scanned),
                      instances, vacuous, 0, tuple(witnesses),
                      tuple(violations), hypothesis, tuple(notes))


def check_rule_of_choice(D, analyzer: FreenessAnalyzer | None = None,
                         mode: str = "strict", objects=None,
                         witness_cap: int = WITNESS_CAP) -> RuleReport:
    """When top entails exists-b alpha for existential-free alpha, some
    g: A -> B makes top entail alpha(a, g(a)); guarded by top being
    existential-free."""
    fa = analyzer or FreenessAnalyzer(D, objects)
    notes: list = []
    witnesses: list = []
    violations: list = []
    scanned: list = []
    instances = vacuous = skipped = 0
    gates = {}
    for A, B, p in _scan_pairs(D, objects):
        alphas, betas = _fibres(D, A, p, notes)
        if alphas is None:
            continue
        scanned.append(f"{A.name}|{B.name}")
        fibA = D.fibre(A)
        fibAB = D.fibre(p.obj)
        topA = fibA.top()
        if A.name not in gates:
            gates[A.name] = fa.is_existential_free(A, topA)
        exfree = set(fa.exfree_elements(p.obj))
        for alpha in betas:
            qualifies = alpha in exfree
            if mode == "strict" and not qualifies:
                skipped += 1
                continue
            if not fibA.leq(topA, D.exists_along(p.proj_left, alpha)):
                vacuous += 1
                continue
            instances += 1
            g = K.exists_gap_g(topA, alpha, len(A), len(B), D.nw)
            entry = {
                "base": A.name, "partner": B.name,
                "alpha": fibAB.describe(alpha),
                "preconditionsHold": qualifies,
            }
            if g is None:
                entry["kind"] = "no-term-witness"
                violations.append(entry)
                continue
            gm = _graph(A, B, p, g)
            if not fibA.leq(topA, D.reindex_el(gm, alpha)):
                raise DoctrineError("term witness failed revalidation")
            if len(witnesses) < witness_cap:
                entry["g"] = _mor_json(FinMor(
                    A, B, tuple(B.elements[i] for i in g)))
                witnesses.append(entry)
    gate_ok = all(gates.values())
    hypothesis = {"topExistentialFree": gates, "holds": gate_ok}
    if mode == "strict" and not gate_ok:
        notes.append("corollary hypothesis fails; instances not judged")
        return RuleReport("rule-of-choice", D.name, mode,
                          "hypothesis-failed", tuple(scanned), 0,
                          vacuous, skipped + instances, (), (),
                          hypothesis, tuple(notes))
    return RuleReport("rule-of-choice", D.name, mode,
                      _verdict(gate_ok, mode, violations), tuple(scanned),
                      instances, vacuous, skipped, tuple(witnesses),
                      tuple(violations), hypothesis, tuple(notes))


def check_skolemisation(D, analyzer: FreenessAnalyzer | None = None,
                        mode: str = "strict", objects=None,
                        witness_cap: int = WITNESS_CAP,
                        exp_cap: int = 64) -> RuleReport:
    """Equality of forall-a2 exists-b alpha with exists-f forall-a2 of
    alpha(a1, a2, f a2), computed through the exponential B^A2 and its
    evaluation, for every predicate over A1 x A2 x B."""
    del analyzer  # no freeness preconditions; kept for a uniform signature
    notes: list = []
    witnesses: list = []
    violations: list = []
    scanned: list = []
    instances = 0
    objs = tuple(objects) if objects is not None else tuple(D.universe)
    for A1 in objs:
        for A2 in objs:
            for B in objs:
                try:
                    E = exponential(B, A2, exp_cap)
                    tri, projs = product_n((A1, A2, B))
                    alphas = D.fibre(tri).elements()
                    fe, fe_projs = product_n((A1, E.obj, A2))
                except CapExceeded as exc:
                    notes.append(
                        f"{A1.name},{A2.name},{B.name} skipped: {exc}")
                    continue
                scanned.append(f"{A1.name},{A2.name},{B.name}")
                k1 = A1.arity
                p12 = FinMor(tri, product(A1, A2).obj,
                             tuple(e[: k1 + A2.arity] for e in tri.elements))
                p1 = FinMor(product(A1, A2).obj, A1,
                            tuple(e[:k1]
                                  for e in product(A1, A2).obj.elements))
                subst = FinMor(fe, tri, tuple(
                    e[:k1] + e[k1 + 1:] + e[k1](e[k1 + 1:])
                    for e in fe.elements))
                q = FinMor(fe, product(A1, E.obj).obj,
                           tuple(e[: k1 + 1] for e in fe.elements))
                r = FinMor(product(A1, E.obj).obj, A1,
                           tuple(e[:k1]
                                 for e in product(A1, E.obj).obj.elements))
                fibA1 = D.fibre(A1)
                for alpha in alphas:
                    instances += 1
                    lhs = D.forall_along(p1, D.exists_along(p12, alpha))
                    rhs = D.exists_along(r, D.forall_along(
                        q, D.reindex_el(subst, alpha)))
                    entry = {
                        "carriers": [A1.name, A2.name, B.name],
                        "alpha": D.fibre(tri).describe(alpha),
                        "bothSides": fibA1.describe(lhs),
                    }
                    if lhs != rhs:
                        entry["kind"] = "sides-differ"
                        entry["prenexSide"] = fibA1.describe(lhs)
                        entry["skolemSide"] = fibA1.describe(rhs)
                        violations.append(entry)
                    elif len(witnesses) < witness_cap:
                        witnesses.append(entry)
    return RuleReport("skolemisation", D.name, mode,
                      "fail" if violations else "pass", tuple(scanned),
                      instances, 0, 0, tuple(witnesses), tuple(violations),
                      None, tuple(notes))


RULES = {
    "skolem": check_skolemisation,
    "ip": check_ip_rule,
    "mmr": check_modified_markov,
    "markov": check_markov,
    "cex": check_counterexample_property,
    "choice": check_rule_of_choice,
}


def run_suite(D, analyzer: FreenessAnalyzer | None = None,
              mode: str = "strict", objects=None, rules=None) -> list:
    """Run the named rules (default all) with one shared analyzer."""
    fa = analyzer or FreenessAnalyzer(D, objects)
    picked = rules if rules is not None else list(RULES)
    return [RULES[r](D, fa, mode=mode, objects=objects) for r in picked]
