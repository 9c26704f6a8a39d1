import itertools

import pytest
from hypothesis import given, strategies as st

from gridhom import partitions as pt


compositions = st.integers(1, 8).flatmap(
    lambda n: st.lists(st.integers(1, 4), min_size=1).filter(lambda l: sum(l) == n).map(tuple)
) | st.just(())


def test_counts():
    for n in range(13):
        count = sum(1 for _ in pt.all_compositions(n))
        assert count == (1 if n == 0 else 2 ** (n - 1))


class TestEpsilon:
    def test_example(self):
        assert pt.epsilon((2, 3, 1)) == (0, 1, 0, 0, 1)

    def test_whole_is_zeros(self):
        for n in range(1, 8):
            assert pt.epsilon((n,)) == (0,) * (n - 1)

    def test_all_ones(self):
        for n in range(1, 8):
            assert pt.epsilon((1,) * n) == (1,) * (n - 1)

    def test_empty_raises(self):
        with pytest.raises(pt.EmptyPartition):
            pt.epsilon(())

    def test_bijection(self):
        for n in range(1, 9):
            seen = set()
            for lam in pt.all_compositions(n):
                bits = pt.epsilon(lam)
                assert pt.from_epsilon(bits) == lam
                seen.add(bits)
            assert len(seen) == 2 ** (n - 1)

    def test_order_reversal(self):
        # refinement order is anti-isomorphic to the product order on bits
        for n in range(1, 8):
            for lam in pt.all_compositions(n):
                for mu in pt.all_compositions(n):
                    bitwise = all(a >= b for a, b in zip(pt.epsilon(lam), pt.epsilon(mu)))
                    assert pt.refines(lam, mu) == bitwise


class TestElementaryCoarsenings:
    def test_example(self):
        assert pt.elementary_coarsenings((2, 3, 1)) == [((5, 1), -1), ((2, 4), 1)]

    def test_whole(self):
        assert pt.elementary_coarsenings((6,)) == []

    def test_count(self):
        for lam in pt.all_compositions(6):
            assert len(pt.elementary_coarsenings(lam)) == max(len(lam) - 1, 0)

    def test_square_cancellation(self):
        # two-step coarsenings cancel in pairs with opposite sign products
        for n in range(2, 7):
            for lam in pt.all_compositions(n):
                acc = {}
                for mid, s1 in pt.elementary_coarsenings(lam):
                    for out, s2 in pt.elementary_coarsenings(mid):
                        acc[out] = acc.get(out, 0) + s1 * s2
                assert not any(acc.values()), (lam, acc)


class TestUnitEnlargements:
    def test_empty(self):
        assert pt.unit_enlargements(()) == [((1,), 1)]

    def test_example(self):
        assert pt.unit_enlargements((2,)) == [((1, 2), 1), ((2, 1), -1)]

    def test_count_includes_last_slot(self):
        for lam in pt.all_compositions(5):
            assert len(pt.unit_enlargements(lam)) == len(lam) + 1

    def test_first_insertion_then_initial_reduction_is_identity(self):
        for lam in pt.all_compositions(5):
            enlarged, sign = pt.unit_enlargements(lam)[0]
            assert sign == 1
            red, dropped = pt.reductions(enlarged)["initial"]
            assert red == lam and dropped == 1


class TestReductions:
    def test_example(self):
        r = pt.reductions((2, 3, 1))
        assert r["initial"] == ((3, 1), 2)
        assert r["final"] == ((2, 3), 1)

    def test_whole(self):
        r = pt.reductions((6,))
        assert r["initial"] == ((), 6)
        assert r["final"] == ((), 6)

    def test_empty(self):
        assert pt.reductions(()) == {"initial": None, "final": None}


class TestRefines:
    @given(compositions)
    def test_reflexive(self, lam):
        assert pt.refines(lam, lam)

    def test_merge_chain(self):
        assert pt.refines((1, 1, 1), (2, 1))
        assert pt.refines((2, 1), (3,))
        assert pt.refines((1, 1, 1), (3,))
        assert not pt.refines((3,), (1, 1, 1))

    def test_generalized_totals(self):
        # smaller total vs larger: parts bounded by the coarser ones
        assert pt.refines((1,), (2,))
        assert pt.refines((1, 1), (2, 3))
        assert not pt.refines((4,), (2, 3))
        assert not pt.refines((2, 3), (1,))

    def test_coarsenings_of(self):
        out = pt.coarsenings_of((1, 1, 1))
        assert out == {(1, 1, 1), (2, 1), (1, 2), (3,)}
