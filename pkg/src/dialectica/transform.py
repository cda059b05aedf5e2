"""Dialectica translation of formulas and the chain of equivalences behind it.

translate() sends a formula phi to a prenex package: witness variables u,
counter variables x and a quantifier-free matrix phi_D, read as
exists u. forall x. phi_D.  implication_chain() derives the implication
clause from the translated sides in six recorded formulas, each move
labelled with the logical principle that justifies it, and each label can
be replayed as a rewrite on the previous formula.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .fol import (
    And,
    Atom,
    BIT,
    Bottom,
    Ev,
    Exists,
    FolError,
    Forall,
    Formula,
    FunSort,
    Implies,
    Not,
    Or,
    Pair,
    Signature,
    Sort,
    SyntacticClass,
    Term,
    Top,
    Var,
    check_formula,
    classify_syntactic,
    free_vars,
    prod_sort,
    substitute_many,
)

JUSTIFICATIONS = ("Adjunction", "ClassicalEquiv", "IPStar", "IntuitionisticEquiv", "MP", "AC")


class SideConditionError(FolError):
    pass


@dataclass(frozen=True)
class DialecticaForm:
    witnesses: tuple[Var, ...]
    counters: tuple[Var, ...]
    matrix: Formula

    def as_formula(self) -> Formula:
        f = self.matrix
        for v in reversed(self.counters):
            f = Forall(v, f)
        for v in reversed(self.witnesses):
            f = Exists(v, f)
        return f


def _exists_block(vs, body):
    for v in reversed(vs):
        body = Exists(v, body)
    return body


def _forall_block(vs, body):
    for v in reversed(vs):
        body = Forall(v, body)
    return body


class _Translator:
    def __init__(self):
        self._n = itertools.count()

    def fresh(self, sort: Sort) -> Var:
        return Var(f"\x00t{next(self._n)}", sort)

    def funvar(self, domain: list[Var], target: Sort) -> tuple[Var, Term]:
        """Witness functionalised over `domain`; returns the new variable and
        the term that replaces the old one."""
        if not domain:
            v = self.fresh(target)
            return v, v
        if len(domain) == 1:
            f = self.fresh(FunSort(domain[0].sort, target))
            return f, Ev(f, domain[0])
        f = self.fresh(FunSort(prod_sort([d.sort for d in domain]), target))
        return f, Ev(f, Pair(tuple(domain)))

    def run(self, phi: Formula) -> tuple[list[Var], list[Var], Formula]:
        if isinstance(phi, (Atom, Top, Bottom)):
            return [], [], phi
        if isinstance(phi, And):
            u, x, a = self.run(phi.left)
            v, y, b = self.run(phi.right)
            return u + v, x + y, And(a, b)
        if isinstance(phi, Or):
            u, x, a = self.run(phi.left)
            v, y, b = self.run(phi.right)
            z = self.fresh(BIT)
            zbit = Atom("bit0", (z,))
            return [z] + u + v, x + y, And(Implies(zbit, a), Implies(Not(zbit), b))
        if isinstance(phi, Exists):
            nv = self.fresh(phi.var.sort)
            u, x, a = self.run(substitute_many(phi.body, {phi.var: nv}))
            return [nv] + u, x, a
        if isinstance(phi, Forall):
            nv = self.fresh(phi.var.sort)
            u, x, a = self.run(substitute_many(phi.body, {phi.var: nv}))
            sub: dict[Var, Term] = {}
            wit = []
            for uj in u:
                fj, app = self.funvar([nv], uj.sort)
                wit.append(fj)
                sub[uj] = app
            return wit, [nv] + x, substitute_many(a, sub)
        if isinstance(phi, Implies):
            u, x, a = self.run(phi.left)
            v, y, b = self.run(phi.right)
            sub_r: dict[Var, Term] = {}
            wit = []
            for vj in v:
                fj, app = self.funvar(u, vj.sort)
                wit.append(fj)
                sub_r[vj] = app
            sub_l: dict[Var, Term] = {}
            for xi in x:
                fj, app = self.funvar(u + y, xi.sort)
                wit.append(fj)
                sub_l[xi] = app
            mat = Implies(substitute_many(a, sub_l), substitute_many(b, sub_r))
            return wit, u + y, mat
        raise TypeError(f"not a formula: {phi!r}")


def _canonical_names(witnesses, counters, matrix, avoid):
    sub: dict[Var, Term] = {}
    taken = set(avoid)
    out_w, out_c = [], []
    for prefix, block, out in (("u", witnesses, out_w), ("x", counters, out_c)):
        for k, v in enumerate(block):
            name = f"{prefix}{k}"
            while name in taken:
                name += "'"
            taken.add(name)
            nv = Var(name, v.sort)
            sub[v] = nv
            out.append(nv)
    return tuple(out_w), tuple(out_c), substitute_many(matrix, sub)


def translate(phi: Formula, sig: Signature | None = None) -> DialecticaForm:
    """Goedel's Dialectica interpretation: phi maps to exists u. forall x. phi_D."""
    if sig is not None:
        check_formula(phi, sig)
    u, x, mat = _Translator().run(phi)
    avoid = {v.name for v in free_vars(phi)}
    w, c, m = _canonical_names(u, x, mat, avoid)
    return DialecticaForm(w, c, m)


# ---------------------------------------------------------------------------
# The implication chain


@dataclass(frozen=True)
class ChainStep:
    index: int
    formula: Formula
    justification: tuple[str, ...]
    direction: str = "iff"


def _rename_apart(form: DialecticaForm, wprefix: str, cprefix: str, taken: set[str]):
    sub: dict[Var, Term] = {}
    ws, cs = [], []
    for prefix, block, out in ((wprefix, form.witnesses, ws), (cprefix, form.counters, cs)):
        for k, v in enumerate(block):
            name = f"{prefix}{k}"
            while name in taken:
                name += "'"
            taken.add(name)
            nv = Var(name, v.sort)
            sub[v] = nv
            out.append(nv)
    return ws, cs, substitute_many(form.matrix, sub)


def implication_chain(psi_d: DialecticaForm, phi_d: DialecticaForm) -> list[ChainStep]:
    """Six formulas from (psi)^D -> (phi)^D to its Skolemised Dialectica form.

    Step 0 is the starting implication; each later step records the
    principles that produce it from its predecessor.  The final step is
    reached by applying AC once per witness block, so it carries two labels.
    """
    taken = {v.name for v in free_vars(psi_d.as_formula()) | free_vars(phi_d.as_formula())}
    u, x, psi_m = _rename_apart(psi_d, "u", "x", taken)
    v, y, phi_m = _rename_apart(phi_d, "v", "y", taken)

    f1 = Implies(
        _exists_block(u, _forall_block(x, psi_m)),
        _exists_block(v, _forall_block(y, phi_m)),
    )
    lhs_core = _forall_block(x, psi_m)
    f2 = _forall_block(u, Implies(lhs_core, _exists_block(v, _forall_block(y, phi_m))))
    f3 = _forall_block(u, _exists_block(v, Implies(lhs_core, _forall_block(y, phi_m))))
    f4 = _forall_block(u, _exists_block(v, _forall_block(y, Implies(lhs_core, phi_m))))
    f5 = _forall_block(u, _exists_block(v, _forall_block(y, _exists_block(x, Implies(psi_m, phi_m)))))

    tr = _Translator()
    sub_v: dict[Var, Term] = {}
    wit = []
    for k, vj in enumerate(v):
        fj, app = tr.funvar(u, vj.sort)
        wit.append((f"V{k}", fj))
        sub_v[vj] = app
    sub_x: dict[Var, Term] = {}
    for k, xi in enumerate(x):
        fj, app = tr.funvar(u + y, xi.sort)
        wit.append((f"X{k}", fj))
        sub_x[xi] = app
    mat = Implies(substitute_many(psi_m, sub_x), substitute_many(phi_m, sub_v))
    ren: dict[Var, Term] = {}
    named = []
    for name, fj in wit:
        while name in taken:
            name += "'"
        taken.add(name)
        nv = Var(name, fj.sort)
        ren[fj] = nv
        named.append(nv)
    f6 = _exists_block(named, _forall_block(u + y, substitute_many(mat, ren)))

    return [
        ChainStep(0, f1, ()),
        ChainStep(1, f2, ("ClassicalEquiv",)),
        ChainStep(2, f3, ("IPStar",)),
        ChainStep(3, f4, ("IntuitionisticEquiv",)),
        ChainStep(4, f5, ("MP",)),
        ChainStep(5, f6, ("AC", "AC")),
    ]


def _strip_exists(f: Formula):
    block = []
    while isinstance(f, Exists):
        block.append(f.var)
        f = f.body
    return block, f


def _strip_forall(f: Formula):
    block = []
    while isinstance(f, Forall):
        block.append(f.var)
        f = f.body
    return block, f


def rewrite_classical_equiv(f: Formula) -> Formula:
    """(exists u. p) -> q  becomes  forall u. (p -> q)."""
    if not isinstance(f, Implies):
        return f
    block, core = _strip_exists(f.left)
    if not block:
        return f
    return _forall_block(block, Implies(core, f.right))


def rewrite_ip_star(f: Formula) -> Formula:
    """Under leading foralls: p -> exists v. q  becomes  exists v. (p -> q)."""
    outer, core = _strip_forall(f)
    if not isinstance(core, Implies):
        return f
    block, inner = _strip_exists(core.right)
    if not block:
        return f
    return _forall_block(outer, _exists_block(block, Implies(core.left, inner)))


def rewrite_intuitionistic(f: Formula) -> Formula:
    """Under leading foralls and existses: p -> forall y. q  becomes  forall y. (p -> q)."""
    outer_a, rest = _strip_forall(f)
    outer_e, core = _strip_exists(rest)
    if not isinstance(core, Implies):
        return f
    block, inner = _strip_forall(core.right)
    if not block:
        return f
    return _forall_block(
        outer_a, _exists_block(outer_e, _forall_block(block, Implies(core.left, inner)))
    )


def rewrite_mp(f: Formula) -> Formula:
    """Under the prenex prefix: (forall x. p) -> q  becomes  exists x. (p -> q)."""
    outer_a, rest = _strip_forall(f)
    outer_e, rest2 = _strip_exists(rest)
    outer_a2, core = _strip_forall(rest2)
    if not isinstance(core, Implies):
        return f
    block, inner = _strip_forall(core.left)
    if not block:
        return f
    return _forall_block(
        outer_a,
        _exists_block(
            outer_e,
            _forall_block(outer_a2, _exists_block(block, Implies(inner, core.right))),
        ),
    )


def rewrite_ac(f: Formula) -> Formula:
    """Skolemise the leftmost exists block lying under a forall block."""
    outer_e, rest = _strip_exists(f)
    outer_a, rest2 = _strip_forall(rest)
    block, core = _strip_exists(rest2)
    if not block or not outer_a:
        return f
    tr = _Translator()
    sub: dict[Var, Term] = {}
    wit = []
    for b in block:
        fj, app = tr.funvar(outer_a, b.sort)
        wit.append(fj)
        sub[b] = app
    core2 = substitute_many(core, sub)
    taken = (
        {v.name for v in free_vars(f)}
        | {v.name for v in outer_e}
        | {v.name for v in outer_a}
    )
    ren: dict[Var, Term] = {}
    out = []
    for k, w in enumerate(wit):
        name = f"F{k}"
        while name in taken:
            name += "'"
        taken.add(name)
        nv = Var(name, w.sort)
        ren[w] = nv
        out.append(nv)
    return _exists_block(
        outer_e, _exists_block(out, _forall_block(outer_a, substitute_many(core2, ren)))
    )


_REWRITES = {
    "ClassicalEquiv": rewrite_classical_equiv,
    "IPStar": rewrite_ip_star,
    "IntuitionisticEquiv": rewrite_intuitionistic,
    "MP": rewrite_mp,
    "AC": rewrite_ac,
}


def replay_step(formula: Formula, justification: tuple[str, ...]) -> Formula:
    for name in justification:
        formula = _REWRITES[name](formula)
    return formula


# ---------------------------------------------------------------------------
# Principle schemas


@dataclass(frozen=True)
class Rule:
    premise: Formula
    conclusion: Formula


def _require_exists_free(theta: Formula, who: str) -> None:
    if classify_syntactic(theta) == SyntacticClass.NEITHER:
        raise SideConditionError(f"{who} requires an exists-free premise")


def _require_quantifier_free(theta: Formula, who: str) -> None:
    if classify_syntactic(theta) != SyntacticClass.QUANTIFIER_FREE:
        raise SideConditionError(f"{who} requires a quantifier-free matrix")


def _require_not_free(v: Var, theta: Formula, who: str) -> None:
    if v in free_vars(theta):
        raise SideConditionError(f"{who} requires {v.name} not free in the premise")


def ip_star(theta: Formula, x: Var, eta: Formula, v: Var, y: Var) -> Formula:
    """(forall x. theta -> exists v. forall y. eta) -> exists v. (forall x. theta -> forall y. eta)"""
    _require_not_free(v, Forall(x, theta), "IP*")
    lhs = Implies(Forall(x, theta), Exists(v, Forall(y, eta)))
    rhs = Exists(v, Implies(Forall(x, theta), Forall(y, eta)))
    return Implies(lhs, rhs)


def ip(theta: Formula, v: Var, eta: Formula) -> Formula:
    _require_exists_free(theta, "IP")
    _require_not_free(v, theta, "IP")
    return Implies(
        Implies(theta, Exists(v, eta)), Exists(v, Implies(theta, eta))
    )


def ip_rule(theta: Formula, v: Var, eta: Formula) -> Rule:
    _require_exists_free(theta, "IPR")
    _require_not_free(v, theta, "IPR")
    return Rule(Implies(theta, Exists(v, eta)), Exists(v, Implies(theta, eta)))


def markov_principle(theta: Formula, x: Var) -> Formula:
    _require_quantifier_free(theta, "MP")
    return Implies(Not(Forall(x, theta)), Exists(x, Not(theta)))


def markov_rule(theta: Formula, x: Var) -> Rule:
    _require_quantifier_free(theta, "MR")
    return Rule(Not(Forall(x, theta)), Exists(x, Not(theta)))


def axiom_of_choice(theta: Formula, y: Var, x: Var) -> Formula:
    taken = {v.name for v in free_vars(theta)} | {y.name, x.name}
    name = "V"
    while name in taken:
        name += "'"
    fv = Var(name, FunSort(y.sort, x.sort))
    chosen = substitute_many(theta, {x: Ev(fv, y)})
    return Implies(
        Forall(y, Exists(x, theta)), Exists(fv, Forall(y, chosen))
    )


_PRINCIPLES = {
    "IP*": ip_star,
    "IPStar": ip_star,
    "IP": ip,
    "IPR": ip_rule,
    "MP": markov_principle,
    "MR": markov_rule,
    "AC": axiom_of_choice,
}


def state_principle(name: str, **parts):
    """Build the named principle instance; raises SideConditionError when the
    side conditions on the parts fail, KeyError for an unknown name."""
    return _PRINCIPLES[name](**parts)
