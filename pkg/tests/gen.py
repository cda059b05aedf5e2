"""Seeded random generators shared by the syntax test modules."""
from __future__ import annotations

import random

from dialectica.fol import (
    App,
    And,
    Atom,
    BaseSort,
    Bottom,
    Ev,
    Exists,
    Forall,
    FunSort,
    Implies,
    Not,
    Or,
    Signature,
    Top,
    Var,
)

U = BaseSort("U")
V = BaseSort("V")

SIG = Signature(
    sorts=("U", "V"),
    predicates={"p": (U,), "q": (V,), "r": (U, V), "s0": ()},
    functions={
        "cU": ((), U),
        "cV": ((), V),
        "fUV": ((U,), V),
        "hUU": ((U,), U),
        "FF": ((), FunSort(U, V)),
    },
)


def random_term(rng: random.Random, sort, ctx, depth=2):
    vars_here = [v for v in ctx if v.sort == sort]
    choices = []
    if vars_here:
        choices.append("var")
    if sort == U:
        choices.append("cU")
        if depth > 0:
            choices.append("hUU")
    if sort == V:
        choices.append("cV")
        if depth > 0:
            choices.extend(["fUV", "ev"])
    pick = rng.choice(choices)
    if pick == "var":
        return rng.choice(vars_here)
    if pick == "cU":
        return App("cU", (), U)
    if pick == "cV":
        return App("cV", (), V)
    if pick == "hUU":
        return App("hUU", (random_term(rng, U, ctx, depth - 1),), U)
    if pick == "fUV":
        return App("fUV", (random_term(rng, U, ctx, depth - 1),), V)
    return Ev(App("FF", (), FunSort(U, V)), random_term(rng, U, ctx, depth - 1))


def random_formula(rng: random.Random, ctx=(), depth=3, counter=None):
    counter = counter if counter is not None else [0]
    atoms = ["p", "q", "r", "s0", "top", "bot"]
    if depth <= 0:
        pick = rng.choice(atoms)
    else:
        pick = rng.choice(atoms + ["and", "or", "imp", "not", "exists", "forall"] * 2)
    if pick == "p":
        return Atom("p", (random_term(rng, U, ctx),))
    if pick == "q":
        return Atom("q", (random_term(rng, V, ctx),))
    if pick == "r":
        return Atom("r", (random_term(rng, U, ctx), random_term(rng, V, ctx)))
    if pick == "s0":
        return Atom("s0", ())
    if pick == "top":
        return Top()
    if pick == "bot":
        return Bottom()
    if pick == "not":
        return Not(random_formula(rng, ctx, depth - 1, counter))
    if pick in ("and", "or", "imp"):
        cls = {"and": And, "or": Or, "imp": Implies}[pick]
        return cls(
            random_formula(rng, ctx, depth - 1, counter),
            random_formula(rng, ctx, depth - 1, counter),
        )
    sort = rng.choice([U, V])
    var = Var(f"v{counter[0]}", sort)
    counter[0] += 1
    body = random_formula(rng, ctx + (var,), depth - 1, counter)
    return (Exists if pick == "exists" else Forall)(var, body)
