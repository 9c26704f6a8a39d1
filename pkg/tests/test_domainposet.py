import itertools
import random

import pytest

from gridhom import domainposet as dp
from gridhom.gridcore import GridDiagram


def subword_bruhat_oracle(sigma, tau):
    """sigma <= tau iff some subword of a reduced word of tau is reduced for
    sigma; exhaustive over subwords (small n only)."""
    words = dp.reduced_words(tau)
    if not words:
        return not dp.inversions(sigma)
    word = words[0]
    target_len = dp.inversions(sigma)
    n = len(sigma)
    for picks in itertools.combinations(range(len(word)), target_len):
        perm = tuple(range(n))
        ok = True
        for idx in picks:
            p = word[idx]
            perm = perm[:p] + (perm[p + 1], perm[p]) + perm[p + 2 :]
        if perm == sigma:
            return True
    return False


class TestBruhat:
    def test_identity_below_everything(self):
        for n in (2, 3, 4):
            ident = tuple(range(n))
            for sigma in itertools.permutations(range(n)):
                assert dp.bruhat_leq(ident, sigma)

    def test_length_is_inversions(self):
        for sigma in itertools.permutations(range(4)):
            words = dp.reduced_words(sigma)
            assert {len(w) for w in words} == {dp.inversions(sigma)}

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_against_subword_oracle(self, n):
        perms = list(itertools.permutations(range(n)))
        for sigma in perms:
            for tau in perms:
                assert dp.bruhat_leq(sigma, tau) == subword_bruhat_oracle(sigma, tau)

    def test_canonical_word_is_lex_least(self):
        for sigma in itertools.permutations(range(4)):
            assert dp.canonical_reduced_word(sigma) == min(dp.reduced_words(sigma))


class TestGeneratorOrder:
    def test_opposite_bruhat(self, grid4):
        gens = list(grid4.generators())
        for x in gens:
            for y in gens:
                assert dp.generator_leq(grid4, y, x) == dp.bruhat_leq(x.sigma, y.sigma)

    def test_maximum(self, grid4):
        x_id = grid4.generator((0, 1, 2, 3))
        for x in grid4.generators():
            assert dp.generator_leq(grid4, x, x_id)

    def test_antisymmetry(self, grid4):
        gens = list(grid4.generators())
        for x in gens:
            for y in gens:
                if x.sigma != y.sigma:
                    assert not (
                        dp.generator_leq(grid4, y, x) and dp.generator_leq(grid4, x, y)
                    )


class TestReducedWordDecompositions:
    def test_words_give_width_one_decompositions(self, grid4):
        # P-3: reduced words correspond to width-one rectangle decompositions
        g = grid4
        x_id = g.generator((0, 1, 2, 3))
        for sigma in itertools.permutations(range(4)):
            d_sigma = g.unique_domain(x_id, g.generator(sigma), (0, 0, 0), (0, 0, 0))
            if not d_sigma.is_positive():
                continue
            for word in dp.reduced_words(sigma):
                current = (0, 1, 2, 3)
                total = g.trivial_domain(x_id)
                ok = True
                for p in word:
                    info = next(
                        (
                            i
                            for i in g.rectangle_infos(current)
                            if i.pair == (p, p + 1) and i.width == 1
                        ),
                        None,
                    )
                    if info is None:
                        ok = False
                        break
                    rect = info.domain(g)
                    assert not any(rect.a_vec()) and not any(rect.b_vec())
                    total = total.compose(rect)
                    current = info.to_sigma
                assert ok
                assert total.mult == d_sigma.mult and total.to_sigma == sigma

    def test_p6_geometric_criterion(self, grid4):
        for sigma in itertools.permutations(range(4)):
            words = dp.reduced_words(sigma)
            for p in range(3):
                brute = any(w and w[-1] == p for w in words)
                assert brute == dp.has_word_ending_in(sigma, p)


class TestWitnesses:
    def test_zero_triple_has_no_witness(self, unknot3):
        for y in unknot3.generators():
            assert dp.minimal_witness(unknot3, (0, 0), (0, 0), y) is None

    def test_minimizer_unique(self, grid4):
        rng = random.Random(2)
        gens = list(grid4.generators())
        for _ in range(60):
            y = rng.choice(gens)
            a = tuple(rng.randint(0, 2) for _ in range(3))
            b = tuple(rng.randint(0, 2) for _ in range(3))
            ws = dp._witnesses(grid4, a, b, y)
            for kind in ("A", "B"):
                pool = sorted(
                    ((w.omega, w.tau) for w in ws if w.kind == kind)
                )
                if pool:
                    assert pool.count(pool[0]) == 1

    def test_witness_bounds(self, grid4):
        rng = random.Random(6)
        gens = list(grid4.generators())
        for _ in range(40):
            y = rng.choice(gens)
            a = tuple(rng.randint(0, 2) for _ in range(3))
            b = tuple(rng.randint(0, 2) for _ in range(3))
            w = dp.minimal_witness(grid4, a, b, y)
            if w is None:
                continue
            vec = w.domain.a_vec() if w.kind == "A" else w.domain.b_vec()
            bound = a if w.kind == "A" else b
            assert any(vec)
            assert all(v <= m for v, m in zip(vec, bound))
            assert w.omega >= 0 and w.tau >= 1


class TestMinimum:
    def test_base_case(self, unknot3):
        for y in unknot3.generators():
            assert dp.g_minimum(unknot3, (0, 0), (0, 0), y).sigma == y.sigma

    def test_equals_identity_iff_trivial_triple(self, unknot3):
        x_id = (0, 1, 2)
        for y in unknot3.generators():
            for a in itertools.product(range(2), repeat=2):
                for b in itertools.product(range(2), repeat=2):
                    m = dp.g_minimum(unknot3, a, b, y)
                    trivial = not any(a) and not any(b) and y.sigma == x_id
                    assert (m.sigma == x_id) == trivial

    def test_interval_law_exhaustive_n3(self, unknot3):
        x_id = unknot3.generator((0, 1, 2))
        for y in unknot3.generators():
            for a in itertools.product(range(3), repeat=2):
                for b in itertools.product(range(3), repeat=2):
                    m = dp.g_minimum(unknot3, a, b, y)
                    assert dp.g_set(unknot3, a, b, y) == dp.interval(unknot3, m, x_id)

    def test_upward_closed(self, unknot3):
        rng = random.Random(10)
        gens = list(unknot3.generators())
        for _ in range(40):
            y = rng.choice(gens)
            a = tuple(rng.randint(0, 2) for _ in range(2))
            b = tuple(rng.randint(0, 2) for _ in range(2))
            members = dp.g_set(unknot3, a, b, y)
            for sig in members:
                x = unknot3.generator(sig)
                for z in gens:
                    if dp.generator_leq(unknot3, x, z):
                        assert z.sigma in members
