import pytest

from dialectica.dial import (
    DialObject,
    WitnessPair,
    build_dial_fibre,
    check_preorder,
    check_theorem2,
    check_theorem4,
    compose_pairs,
    dial_leq,
    dial_reindex,
    enumerate_quads,
    identity_pair,
    pair_is_valid,
    prenex_order,
)
from dialectica.doctrine import DoctrineError, kripke_doctrine, powerset_doctrine
from dialectica.fincat import FinMor, compose, enumerate_morphisms, identity, product
from dialectica.freeness import FreenessAnalyzer
from dialectica.posets import antichain_poset, chain_poset

POW = powerset_doctrine((2, 2))
CHAIN = kripke_doctrine(chain_poset(2), (2, 2))
ANTI = kripke_doctrine(antichain_poset(2), (2, 2))


def quads_over(D, I, cap=64):
    quads, _, _ = enumerate_quads(D, I, quad_cap=cap)
    return quads


class TestWitnessPairs:
    def test_identity_pair_validates(self):
        for D in (POW, CHAIN, ANTI):
            for q in quads_over(D, D.universe[0], cap=24):
                p = identity_pair(D, q)
                assert pair_is_valid(D, q, q, p)

    def test_search_methods_agree(self):
        quads = quads_over(POW, POW.universe[0], cap=16)
        for a in quads:
            for b in quads:
                fast = dial_leq(POW, a, b)
                slow = dial_leq(POW, a, b, method="generic")
                assert (fast is None) == (slow is None)
                if fast is not None:
                    assert pair_is_valid(POW, a, b, fast)
                    assert pair_is_valid(POW, a, b, slow)

    def test_invalid_candidates_are_rejected(self):
        """A quadruple whose matrix has a full (u, .) row is not below
        the empty one: no counterexample map can dodge the row."""
        one, A = POW.universe[0], POW.universe[1]
        carrier = product(product(one, A).obj, A).obj
        fib = POW.fibre(carrier)
        fullrow = next(m for m in fib.elements()
                       if fib.describe(m) == "{a0.a0, a0.a1, a1.a1}")
        a = DialObject(one, A, A, fullrow)
        b = DialObject(one, A, A, 0)
        assert dial_leq(POW, a, b) is None
        iu = product(one, A).obj
        iuy = product(iu, A).obj
        candidates = [
            WitnessPair(f0, f1)
            for f0 in enumerate_morphisms(iu, A)
            for f1 in enumerate_morphisms(iuy, A)
        ]
        assert candidates and all(
            not pair_is_valid(POW, a, b, p) for p in candidates)

    def test_composition_revalidates(self):
        quads = quads_over(POW, POW.universe[0], cap=16)
        composed = 0
        for a in quads:
            for b in quads:
                p = dial_leq(POW, a, b)
                if p is None:
                    continue
                for c in quads:
                    q = dial_leq(POW, b, c)
                    if q is None:
                        continue
                    r = compose_pairs(POW, a, b, c, p, q)
                    assert pair_is_valid(POW, a, c, r)
                    composed += 1
                    break
                break
        assert composed > 0

    def test_composition_rejects_a_wrong_pair(self):
        one, A = POW.universe[0], POW.universe[1]
        carrier = product(product(one, A).obj, A).obj
        fib = POW.fibre(carrier)
        fullrow = next(m for m in fib.elements()
                       if fib.describe(m) == "{a0.a0, a0.a1, a1.a1}")
        a = DialObject(one, A, A, fib.top())
        b = DialObject(one, A, A, fullrow)
        c = DialObject(one, A, A, 0)
        p = dial_leq(POW, a, b)
        assert p is not None and dial_leq(POW, b, c) is None
        bad = identity_pair(POW, b)
        assert not pair_is_valid(POW, b, c, bad)
        with pytest.raises(DoctrineError):
            compose_pairs(POW, a, b, c, p, bad)


class TestReindexing:
    def test_identity_reindex_is_identity(self):
        A = POW.universe[1]
        for q in quads_over(POW, A, cap=24):
            assert dial_reindex(POW, identity(A), q) == q

    def test_contravariant_functoriality(self):
        A, B = POW.universe[1], POW.universe[2]
        f = FinMor(A, B, (("b1",), ("b0",)))
        g = FinMor(B, A, (("a0",), ("a0",)))
        fg = compose(f, g)
        for q in quads_over(POW, B, cap=24):
            via = dial_reindex(POW, g, dial_reindex(POW, f, q))
            assert dial_reindex(POW, fg, q) == via

    def test_reindexing_preserves_the_order(self):
        A, B = POW.universe[1], POW.universe[2]
        f = FinMor(A, B, (("b1",), ("b0",)))
        quads = quads_over(POW, B, cap=12)
        for a in quads:
            for b in quads:
                if dial_leq(POW, a, b) is None:
                    continue
                ra, rb = dial_reindex(POW, f, a), dial_reindex(POW, f, b)
                assert dial_leq(POW, ra, rb) is not None


class TestCompletedFibres:
    @pytest.mark.parametrize("D", (POW, CHAIN, ANTI), ids=lambda d: d.name)
    def test_preorder_over_the_terminal_object(self, D):
        fib = build_dial_fibre(D, D.universe[0], quad_cap=128)
        rep = check_preorder(D, fib, seed=0)
        assert rep.passed
        assert rep.compositions_checked > 0

    def test_sampling_is_recorded(self):
        quads, total, notes = enumerate_quads(POW, POW.universe[1], quad_cap=50)
        assert total == 1092 and len(quads) <= 50
        assert any("sampled" in n for n in notes)

    def test_quad_json_key_order(self):
        q = quads_over(POW, POW.universe[0], cap=4)[1]
        data = q.to_json(POW)
        assert list(data) == ["I", "X", "U", "alpha"]

    def test_pair_json_tables_replay(self):
        quads = quads_over(POW, POW.universe[0], cap=16)
        a = next(q for q in quads if q.alpha == 0)
        b = quads[-1]
        p = dial_leq(POW, a, b)
        data = p.to_json()
        assert set(data) == {"f0", "f1"}
        assert data["f0"]["table"] == [
            b.U.elements.index(p.f0(e)) for e in p.f0.dom.elements]

    def test_classes_collapse_to_the_base_order(self):
        fib = build_dial_fibre(POW, POW.universe[0], quad_cap=128)
        assert len(fib.classes()) == 2


class TestPrenexOrder:
    def test_golden_exists_forall(self):
        one, A = POW.universe[0], POW.universe[1]
        carrier = product(product(one, A).obj, A).obj
        fib = POW.fibre(carrier)
        graph = next(m for m in fib.elements()
                     if fib.describe(m) == "{a0.a0, a1.a1}")
        assert prenex_order(POW, one, A, A, graph) == 0
        assert prenex_order(POW, one, A, A, fib.top()) == \
            POW.fibre(one).top()


class TestTheorem2:
    @pytest.mark.parametrize("D", (POW, CHAIN, ANTI), ids=lambda d: d.name)
    def test_seeded_samples_agree(self, D):
        rep = check_theorem2(D, FreenessAnalyzer(D), D.universe[0],
                             samples=60, seed=1)
        assert rep.passed and rep.checked == 60
        assert rep.mismatches == ()

    def test_reports_are_reproducible(self):
        fa = FreenessAnalyzer(POW)
        one = POW.universe[0]
        r1 = check_theorem2(POW, fa, one, samples=40, seed=7)
        r2 = check_theorem2(POW, fa, one, samples=40, seed=7)
        assert r1.checked == r2.checked and r1.mismatches == r2.mismatches


class TestTheorem4:
    def test_powerset_all_fibres(self):
        fa = FreenessAnalyzer(POW)
        expected = {"1": (4, 82), "A": (16, 1092), "B": (16, 1092)}
        for I in POW.universe:
            rep = check_theorem4(POW, fa, I, quad_cap=4096)
            assert rep.passed, (I.name, rep.embedding_failures,
                                rep.surjectivity_failures)
            assert (rep.embedding_checked,
                    rep.surjectivity_checked) == expected[I.name]
            assert rep.prenex_missing == ()

    @pytest.mark.parametrize("D,emb,sur", ((CHAIN, 9, 363), (ANTI, 16, 82)),
                             ids=("chain", "antichain"))
    def test_kripke_over_the_terminal_object(self, D, emb, sur):
        rep = check_theorem4(D, FreenessAnalyzer(D), D.universe[0],
                             quad_cap=4096)
        assert rep.passed
        assert (rep.embedding_checked, rep.surjectivity_checked) == (emb, sur)

    def test_antichain_missing_presentations_are_reported(self):
        rep = check_theorem4(ANTI, FreenessAnalyzer(ANTI), ANTI.universe[1],
                             quad_cap=4096)
        assert not rep.passed
        assert sorted(rep.prenex_missing) == ["{a0}", "{a1}"]
        assert rep.embedding_failures == ()
        assert rep.embedding_checked == 196

    def test_embedding_agrees_with_the_order_comparison_path(self):
        """Cross-check the two characterisation code paths on every pair:
        the direct fibre order, the order between reconstructed prenex
        presentations, and witness-pair existence must coincide."""
        fa = FreenessAnalyzer(POW)
        A = POW.universe[1]
        fib = POW.fibre(A)
        quads = {}
        for alpha in fib.elements():
            w = fa.prenex(A, alpha)
            quads[alpha] = DialObject(A, w.u_obj, w.x_obj, w.beta)
        for a, qa in quads.items():
            assert prenex_order(POW, qa.I, qa.U, qa.X, qa.alpha) == a
            for b, qb in quads.items():
                direct = fib.leq(a, b)
                rebuilt = fib.leq(
                    prenex_order(POW, qa.I, qa.U, qa.X, qa.alpha),
                    prenex_order(POW, qb.I, qb.U, qb.X, qb.alpha))
                witnessed = dial_leq(POW, qa, qb) is not None
                assert direct == rebuilt == witnessed
