import itertools
import json
import random

import pytest

from gridhom.gridcore import (
    GridDiagram,
    GridDomain,
    InvalidGrid,
    EndpointMismatch,
    NotPositive,
    PeriodicDomain,
    canonicalize,
    parse_grid_json,
    parse_grid_text,
)


def brute_force_rectangles(g, sigma):
    """Independent oracle: scan all torus rectangles by corner intervals."""
    n = g.n
    out = []
    for c0 in range(n):
        for w in range(1, n):
            for r0 in range(n):
                for h in range(1, n):
                    cols = [(c0 + dc) % n for dc in range(w)]
                    rows = [(r0 + dr) % n for dr in range(h)]
                    bl = (c0, r0)
                    tr = ((c0 + w) % n, (r0 + h) % n)
                    pts = {(i, sigma[i]) for i in range(n)}
                    if bl not in pts or tr not in pts:
                        continue
                    if bl[0] == tr[0]:
                        continue
                    # interior must avoid the other coordinates
                    bad = False
                    for i in range(n):
                        if (i, sigma[i]) in (bl, tr):
                            continue
                        if 0 < (i - c0) % n < w and 0 < (sigma[i] - r0) % n < h:
                            bad = True
                    if bad:
                        continue
                    if (n - 1) in cols and (n - 1) in rows:
                        continue
                    out.append((c0, w, r0, h))
    return sorted(set(out))


class TestCanonicalize:
    def test_already_canonical(self):
        g = GridDiagram(2, (1, 0), (0, 1))
        assert canonicalize(g) == g

    def test_single_shift(self):
        g = GridDiagram(2, (0, 1), (1, 0))
        c = canonicalize(g)
        assert c.is_canonical
        assert c == GridDiagram(2, (1, 0), (0, 1))

    def test_trefoil_fixture(self, trefoil5):
        assert trefoil5.is_canonical
        assert sorted(trefoil5.o_row) == list(range(5))
        recanon = canonicalize(trefoil5)
        assert recanon == trefoil5

    def test_invalid_grids(self):
        with pytest.raises(InvalidGrid):
            GridDiagram(2, (0, 0), (1, 0))
        with pytest.raises(InvalidGrid):
            GridDiagram(2, (0, 1), (0, 1))


class TestRectangles:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_matches_brute_force(self, n):
        g = GridDiagram(n, tuple((i + 1) % n for i in range(n)), tuple(range(n)))
        for sigma in itertools.permutations(range(n)):
            got = sorted((i.col0, i.width, i.row0, i.height) for i in g.rectangle_infos(sigma))
            assert got == brute_force_rectangles(g, sigma)

    def test_unknot_counts(self, unknot2):
        counts = {s: len(unknot2.rectangle_infos(s)) for s in [(0, 1), (1, 0)]}
        # the rectangle through the forbidden corner is excluded
        assert counts == {(0, 1): 1, (1, 0): 2}

    def test_total_count_n3(self, unknot3):
        total = sum(len(unknot3.rectangle_infos(s)) for s in itertools.permutations(range(3)))
        oracle = sum(
            len(brute_force_rectangles(unknot3, s)) for s in itertools.permutations(range(3))
        )
        assert total == oracle

    def test_rectangles_have_index_one(self, unknot3):
        for x in unknot3.generators():
            for rect, y in unknot3.rectangles_from(x):
                assert rect.maslov_index() == 1
                assert rect.is_positive()
                assert rect.satisfies_boundary_condition()

    def test_rectangles_into_inverts_from(self, unknot3):
        seen = set()
        for x in unknot3.generators():
            for rect, y in unknot3.rectangles_from(x):
                seen.add((rect.from_sigma, rect.to_sigma, rect.mult))
        seen_into = set()
        for y in unknot3.generators():
            for rect, z in unknot3.rectangles_into(y):
                seen_into.add((rect.from_sigma, rect.to_sigma, rect.mult))
        assert seen == seen_into


class TestGradings:
    def test_maslov_unknot_values(self, unknot2):
        # the generator with both coordinates next to the O markings
        assert unknot2.generator((1, 0)).maslov == 0
        assert unknot2.generator((0, 1)).maslov == 1

    def test_maslov_pointcount_diagonal_o(self):
        # n=3 with O on the diagonal: hand count gives -2 for the identity
        g = GridDiagram(3, (0, 1, 2), (1, 2, 0))
        marks = [(2 * c + 1, 2 * c + 1) for c in range(3)]
        assert g.maslov_pointcount((0, 1, 2), marks) == -2

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_relative_maslov_law(self, n):
        g = GridDiagram(n, tuple((i + 1) % n for i in range(n)), tuple(range(n)))
        for x in g.generators():
            for rect, y in g.rectangles_from(x):
                assert x.maslov - y.maslov == 1 - 2 * sum(rect.o_vec())

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_relative_alexander_law(self, n):
        g = GridDiagram(n, tuple((i + 1) % n for i in range(n)), tuple(range(n)))
        for x in g.generators():
            for rect, y in g.rectangles_from(x):
                diff = sum(rect.x_vec()) - sum(rect.o_vec())
                assert sum(x.alexander2) - sum(y.alexander2) == 2 * diff

    def test_alexander_component_law(self, hopf4):
        comp = hopf4.component_of_o
        x_col = {hopf4.x_row[c]: c for c in range(4)}
        comp_of_x = [comp[hopf4.o_row.index(hopf4.x_row[c])] for c in range(4)]
        for x in hopf4.generators():
            for rect, y in hopf4.rectangles_from(x):
                for k in range(hopf4.num_components):
                    xs = sum(v for c, v in enumerate(rect.x_vec()) if comp_of_x[c] == k)
                    os = sum(v for c, v in enumerate(rect.o_vec()) if comp[c] == k)
                    assert x.alexander2[k] - y.alexander2[k] == 2 * (xs - os)

    def test_alexander_parity_constant(self, trefoil5, hopf4):
        for g in (trefoil5, hopf4):
            pars = {tuple(v % 2 for v in x.alexander2) for x in g.generators()}
            assert len(pars) == 1

    def test_empty_rectangle_preserves_alexander(self, unknot3):
        for x in unknot3.generators():
            for info in unknot3.rectangle_infos(x.sigma):
                if any(info.x_vec) or any(info.o_vec):
                    continue
                y = unknot3.generator(info.to_sigma)
                assert x.alexander2 == y.alexander2


class TestDomains:
    def test_trivial_domain_index_zero(self, unknot3):
        x = unknot3.generator((0, 1, 2))
        assert unknot3.trivial_domain(x).maslov_index() == 0

    def test_annulus_index_two(self, unknot3):
        x = unknot3.generator((0, 1, 2))
        assert unknot3.marking_annulus("H", 0, x).maslov_index() == 2
        assert unknot3.marking_annulus("V", 0, x).maslov_index() == 2

    def test_compose_identity(self, unknot3):
        x = unknot3.generator((1, 0, 2))
        rect, y = unknot3.rectangles_from(x)[0]
        assert rect.compose(unknot3.trivial_domain(y)).mult == rect.mult

    def test_compose_mismatch(self, unknot3):
        x = unknot3.generator((0, 1, 2))
        z = unknot3.generator((1, 0, 2))
        with pytest.raises(EndpointMismatch):
            unknot3.trivial_domain(x).compose(unknot3.trivial_domain(z))

    def test_l_shape_two_decompositions_same_chain(self, unknot3):
        # every index-2 non-annulus has exactly two rectangle decompositions
        g = unknot3
        chains = {}
        for x in g.generators():
            for r1, y in g.rectangles_from(x):
                for r2, z in g.rectangles_from(y):
                    d = r1.compose(r2)
                    chains.setdefault((d.from_sigma, d.to_sigma, d.mult), []).append((r1, r2))
        for (fs, ts, mult), decomps in chains.items():
            d = GridDomain(g, fs, ts, mult)
            rows = {r for c in range(3) for r in range(3) if mult[c][r]}
            cols = {c for c in range(3) for r in range(3) if mult[c][r]}
            h_ann = len(cols) == 3 and all(all(mult[c][r] for c in range(3)) for r in rows)
            v_ann = len(rows) == 3 and all(all(mult[c][r] for r in range(3)) for c in cols)
            assert len(decomps) == (1 if h_ann or v_ann else 2)

    def test_mu_additive_random(self, grid4):
        rng = random.Random(11)
        gens = list(grid4.generators())
        for _ in range(60):
            x = rng.choice(gens)
            d = grid4.trivial_domain(x)
            for _ in range(rng.randint(1, 4)):
                rects = grid4.rectangles_from(grid4.generator(d.to_sigma))
                rect, y = rng.choice(rects)
                d = d.compose(rect)
            rects = grid4.rectangles_from(grid4.generator(d.to_sigma))
            rect, y = rng.choice(rects)
            assert d.compose(rect).maslov_index() == d.maslov_index() + 1

    def test_positive_mu_nonnegative_and_zero_iff_trivial(self, unknot3):
        # downward closures of random positive domains
        rng = random.Random(5)
        gens = list(unknot3.generators())
        for _ in range(25):
            x = rng.choice(gens)
            d = unknot3.trivial_domain(x)
            for _ in range(3):
                rect, y = rng.choice(unknot3.rectangles_from(unknot3.generator(d.to_sigma)))
                d = d.compose(rect)
            stack = [d]
            seen = set()
            while stack:
                cur = stack.pop()
                key = (cur.from_sigma, cur.to_sigma, cur.mult)
                if key in seen:
                    continue
                seen.add(key)
                mu = cur.maslov_index()
                assert mu >= 0
                assert (mu == 0) == cur.is_trivial()
                for info in unknot3.rectangle_infos(cur.from_sigma):
                    rest = cur.subtract(info.domain(unknot3))
                    if rest.is_positive():
                        stack.append(rest)


class TestDecompose:
    def test_rectangle_decomposes_to_itself(self, unknot3):
        x = unknot3.generator((1, 0, 2))
        rect, y = unknot3.rectangles_from(x)[0]
        assert [r.mult for r in rect.decompose_into_rectangles()] == [rect.mult]

    def test_annulus_two_pieces(self, unknot3):
        x = unknot3.generator((0, 1, 2))
        ann = unknot3.marking_annulus("H", 0, x)
        pieces = ann.decompose_into_rectangles()
        assert len(pieces) == 2

    def test_roundtrip_and_count(self, grid4):
        rng = random.Random(3)
        gens = list(grid4.generators())
        for _ in range(40):
            x = rng.choice(gens)
            d = grid4.trivial_domain(x)
            for _ in range(3):
                rect, y = rng.choice(grid4.rectangles_from(grid4.generator(d.to_sigma)))
                d = d.compose(rect)
            pieces = d.decompose_into_rectangles()
            assert len(pieces) == d.maslov_index()
            total = pieces[0]
            for p in pieces[1:]:
                total = total.compose(p)
            assert total.mult == d.mult and total.to_sigma == d.to_sigma

    def test_requires_positive(self, unknot3):
        x = unknot3.generator((0, 1, 2))
        neg = GridDomain(
            unknot3, x.sigma, x.sigma, tuple(tuple(-1 for _ in range(3)) for _ in range(3))
        )
        with pytest.raises(NotPositive):
            neg.decompose_into_rectangles()

    def test_deterministic(self, grid4):
        x = grid4.generator((1, 0, 3, 2))
        d = grid4.marking_annulus("V", 0, x)
        a = [r.mult for r in d.decompose_into_rectangles()]
        b = [r.mult for r in d.decompose_into_rectangles()]
        assert a == b


class TestUniqueDomain:
    def test_trivial(self, unknot3):
        x = unknot3.generator((0, 1, 2))
        d = unknot3.unique_domain(x, x, (0, 0), (0, 0))
        assert d.is_trivial()

    def test_d_sigma_positive(self, grid4):
        # P-2: a unique positive domain from the maximum to any generator
        x_id = grid4.generator((0, 1, 2, 3))
        for y in grid4.generators():
            d = grid4.unique_domain(x_id, y, (0, 0, 0), (0, 0, 0))
            assert d.is_positive()
            assert d.maslov_index() == sum(
                1
                for i in range(4)
                for j in range(i + 1, 4)
                if y.sigma[i] > y.sigma[j]
            )

    def test_roundtrip_ab(self, unknot3):
        rng = random.Random(9)
        gens = list(unknot3.generators())
        for _ in range(30):
            x, y = rng.choice(gens), rng.choice(gens)
            a = tuple(rng.randint(0, 2) for _ in range(2))
            b = tuple(rng.randint(0, 2) for _ in range(2))
            d = unknot3.unique_domain(x, y, a, b)
            assert d.a_vec() == a and d.b_vec() == b
            assert d.satisfies_boundary_condition()
            assert d.mult[2][2] == 0


class TestPeriodicDomains:
    def test_roundtrip(self, grid4):
        rng = random.Random(1)
        x = grid4.generator((0, 1, 2, 3))
        for _ in range(20):
            h = tuple(rng.randint(0, 3) for _ in range(3))
            v = tuple(rng.randint(0, 3) for _ in range(3))
            p = PeriodicDomain(h, v)
            d = p.to_domain(grid4, x)
            assert PeriodicDomain.from_domain(d) == p
            assert d.satisfies_boundary_condition()


class TestParsing:
    def test_text_roundtrip(self, tmp_path):
        text = "n=2\nX: 1 2\nO: 2 1\n"
        g = parse_grid_text(text)
        assert g == GridDiagram(2, (1, 0), (0, 1))

    def test_json(self):
        g = parse_grid_json(json.dumps({"n": 2, "x_row": [1, 2], "o_row": [2, 1]}))
        assert g == GridDiagram(2, (1, 0), (0, 1))

    def test_bad_file(self):
        with pytest.raises(InvalidGrid):
            parse_grid_text("n=2\nX: 1 1\nO: 2 1\n")
