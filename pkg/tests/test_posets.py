import itertools

import pytest

from dialectica.posets import (
    FinitePoset,
    MonotoneMap,
    PosetError,
    antichain_poset,
    chain_poset,
    poset_violations,
)


class TestConstruction:
    def test_chain(self):
        p = chain_poset(3)
        assert p.elements == ("w0", "w1", "w2")
        assert p.leq("w0", "w2") and not p.leq("w2", "w0")
        assert p.violations() == []

    def test_antichain(self):
        p = antichain_poset(3)
        for a, b in itertools.product(p, p):
            assert p.leq(a, b) == (a == b)

    def test_pairs_by_label_or_index(self):
        by_label = FinitePoset("ab", [("a", "a"), ("b", "b"), ("a", "b")])
        by_index = FinitePoset("ab", [(0, 0), (1, 1), (0, 1)])
        assert by_label == by_index

    def test_duplicates_rejected(self):
        with pytest.raises(PosetError):
            FinitePoset(["w", "w"], [])

    def test_missing_reflexivity_rejected(self):
        with pytest.raises(PosetError):
            FinitePoset("ab", [("a", "b")])

    def test_antisymmetry_rejected(self):
        with pytest.raises(PosetError):
            FinitePoset("ab", [(0, 0), (1, 1), (0, 1), (1, 0)])

    def test_transitivity_rejected_but_representable(self):
        pairs = [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]
        with pytest.raises(PosetError):
            FinitePoset("abc", pairs)
        broken = FinitePoset("abc", pairs, validate=False)
        assert any("transitivity" in v for v in broken.violations())

    def test_violation_listing_names_indices(self):
        up = [0b001, 0b010, 0b100]
        assert poset_violations(3, [0, 0b010, 0b100])[0] == "not reflexive at 0"
        assert poset_violations(3, up) == []


class TestShapeLabel:
    def test_named_shapes(self):
        assert chain_poset(2).shape_label() == "chain2"
        assert antichain_poset(2).shape_label() == "antichain2"
        assert chain_poset(1).shape_label() == "antichain1"

    def test_vee_is_neither(self):
        vee = FinitePoset("abc", [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2)])
        assert vee.shape_label() == "poset3-2e"


class TestJson:
    def test_round_trip(self):
        for p in (chain_poset(3), antichain_poset(2),
                  FinitePoset("abc", [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2)])):
            assert FinitePoset.from_json(p.to_json()) == p

    def test_round_trip_preserves_violations(self):
        broken = FinitePoset("ab", [(0, 0), (1, 1), (0, 1), (1, 0)], validate=False)
        back = FinitePoset.from_json(broken.to_json(), validate=False)
        assert back.violations() == broken.violations()


class TestMonotoneMap:
    def test_application(self):
        f = MonotoneMap(chain_poset(2), chain_poset(3), (0, 2))
        assert f("w0") == "w0" and f("w1") == "w2"

    def test_monotonicity_enforced(self):
        with pytest.raises(PosetError):
            MonotoneMap(chain_poset(2), chain_poset(2), (1, 0))
        broken = MonotoneMap(chain_poset(2), chain_poset(2), (1, 0), validate=False)
        assert broken.violations() == ["not monotone on 0 <= 1"]

    def test_table_length_checked(self):
        with pytest.raises(PosetError):
            MonotoneMap(chain_poset(2), chain_poset(2), (0,))

    def test_any_map_from_antichain_is_monotone(self):
        dom, cod = antichain_poset(2), chain_poset(2)
        tables = list(itertools.product(range(2), repeat=2))
        assert all(not MonotoneMap(dom, cod, t).violations() for t in tables)
