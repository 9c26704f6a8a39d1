"""Complexes of positive domains, with and without partition decorations.

``CD`` is generated by positive domains avoiding the top-right X marking,
graded by Maslov index, with the differential splitting a rectangle off the
front or (with sign ``(-1)^mu``) off the back.  ``CDP`` decorates a domain
with a vector of bubble counts ``N`` and compositions ``lambda_j`` of each
``N_j``; its differential has four kinds of terms:

* type I   -- split off a rectangle (as in CD);
* type II  -- extract a full row H_j or column V_j and unit-enlarge lambda_j;
* type III -- elementary coarsening of one lambda_j;
* type IV  -- initial/final reduction of one lambda_j, dropping the removed
              part from N_j.

Both complexes are infinitely generated; computations happen on finite
downward closures of seed sets, or on the associated-graded pieces that the
acyclicity argument actually uses.
"""

from __future__ import annotations

from dataclasses import dataclass

from gridhom import partitions as pt
from gridhom.domainposet import g_minimum, g_set
from gridhom.gridcore import Generator, GridDiagram, GridDomain
from gridhom.homalg import HomologyTable, IntegerChainComplex
from gridhom.signs import SignAssignment


@dataclass(frozen=True)
class PartitionedDomain:
    """A positive domain with bubble counts and height partitions."""

    domain: GridDomain
    n_vec: tuple[int, ...]
    lambdas: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = self.domain.diagram.n
        assert len(self.n_vec) == n and len(self.lambdas) == n
        for nj, lam in zip(self.n_vec, self.lambdas):
            assert sum(lam) == nj, "partition totals must match the bubble counts"

    @property
    def gr(self) -> int:
        return self.domain.maslov_index() + sum(len(lam) for lam in self.lambdas)

    @property
    def key(self):
        d = self.domain
        return (d.from_sigma, d.to_sigma, d.mult, self.n_vec, self.lambdas)


def trivial_decoration(g: GridDiagram) -> tuple[tuple[int, ...], tuple]:
    return (0,) * g.n, ((),) * g.n


# -- CD differential -----------------------------------------------------------


def cd_splittings(s: SignAssignment, D: GridDomain):
    """Prefix and suffix rectangle splittings of a positive domain.

    Yields ("prefix"|"suffix", sign of the rectangle, complement domain).
    """
    g = D.diagram
    for info in g.rectangle_infos(D.from_sigma):
        rest = D.subtract(info.domain(g))
        if rest.is_positive():
            yield "prefix", s.of(info), rest
    for info in g.rectangle_infos_into(D.to_sigma):
        # E * R = D with R from z to y; E runs from D.from to z
        diffm = D.subtract(info.domain(g))
        E = GridDomain(g, D.from_sigma, info.from_sigma, diffm.mult)
        if E.is_positive():
            yield "suffix", s.of(info), E


def cd_differential(s: SignAssignment, D: GridDomain) -> list[tuple[int, GridDomain]]:
    sign_suffix = -1 if D.maslov_index() % 2 else 1
    out: dict = {}
    for kind, sgn, E in cd_splittings(s, D):
        coeff = sgn if kind == "prefix" else sign_suffix * sgn
        key = (E.from_sigma, E.to_sigma, E.mult)
        cur, _ = out.get(key, (0, E))
        out[key] = (cur + coeff, E)
    return [(c, E) for c, E in out.values() if c]


# -- CDP differential -----------------------------------------------------------


def _with_lambda(t: PartitionedDomain, j: int, lam, n_vec=None) -> PartitionedDomain:
    lambdas = t.lambdas[:j] + (tuple(lam),) + t.lambdas[j + 1 :]
    return PartitionedDomain(t.domain, n_vec if n_vec is not None else t.n_vec, lambdas)


def delta_I(s: SignAssignment, t: PartitionedDomain) -> list[tuple[int, PartitionedDomain]]:
    return [
        (c, PartitionedDomain(E, t.n_vec, t.lambdas)) for c, E in cd_differential(s, t.domain)
    ]


def delta_II(s: SignAssignment, t: PartitionedDomain) -> list[tuple[int, PartitionedDomain]]:
    g = t.domain.diagram
    mu_sign = -1 if t.domain.maslov_index() % 2 else 1
    out = []
    x = g.generator(t.domain.from_sigma)
    for j in range(g.n):
        prefix = sum(len(t.lambdas[k]) for k in range(j))
        pre_sign = -1 if prefix % 2 else 1
        for kind in ("H", "V"):
            if kind == "H" and g.o_row[j] == g.n - 1:
                continue  # the top row is not allowable
            if kind == "V" and j == g.n - 1:
                continue
            ann = g.marking_annulus(kind, j, x)
            rest = t.domain.subtract(ann)
            E = GridDomain(g, t.domain.from_sigma, t.domain.to_sigma, rest.mult)
            if not E.is_positive():
                continue
            n_vec = tuple(v + 1 if k == j else v for k, v in enumerate(t.n_vec))
            for lam2, ue_sign in pt.unit_enlargements(t.lambdas[j]):
                coeff = mu_sign * pre_sign * ue_sign
                out.append(
                    (coeff, _with_lambda(PartitionedDomain(E, t.n_vec, t.lambdas), j, lam2, n_vec))
                )
    return out


def delta_III(s: SignAssignment, t: PartitionedDomain) -> list[tuple[int, PartitionedDomain]]:
    mu_sign = -1 if t.domain.maslov_index() % 2 else 1
    out = []
    for j, lam in enumerate(t.lambdas):
        prefix = sum(len(t.lambdas[k]) for k in range(j))
        pre_sign = -1 if prefix % 2 else 1
        for lam2, ec_sign in pt.elementary_coarsenings(lam):
            out.append((mu_sign * pre_sign * ec_sign, _with_lambda(t, j, lam2)))
    return out


def delta_IV(s: SignAssignment, t: PartitionedDomain) -> list[tuple[int, PartitionedDomain]]:
    mu_sign = -1 if t.domain.maslov_index() % 2 else 1
    out = []
    for j, lam in enumerate(t.lambdas):
        if not lam:
            continue
        prefix = sum(len(t.lambdas[k]) for k in range(j))
        pre_sign = -1 if prefix % 2 else 1
        n_ini = tuple(v - lam[0] if k == j else v for k, v in enumerate(t.n_vec))
        out.append((mu_sign * pre_sign, _with_lambda(t, j, lam[1:], n_ini)))
        fin_sign = pre_sign * (-1 if len(lam) % 2 else 1)
        n_fin = tuple(v - lam[-1] if k == j else v for k, v in enumerate(t.n_vec))
        out.append((mu_sign * fin_sign, _with_lambda(t, j, lam[:-1], n_fin)))
    return out


DELTAS = {"I": delta_I, "II": delta_II, "III": delta_III, "IV": delta_IV}


def differential_events(s: SignAssignment, t: PartitionedDomain) -> list[tuple[str, tuple]]:
    """Labeled raw differential terms, before any cancellation.

    Labels: "prefix"/"suffix" (type I), "row"/"col" (type II), "coarsen"
    (type III), "initial"/"final" (type IV).  Each event carries the key of
    the surviving triple; the multiset matches the codimension-one boundary
    census of the moduli space.
    """
    g = t.domain.diagram
    out = []
    for kind, _, E in cd_splittings(s, t.domain):
        out.append((kind, PartitionedDomain(E, t.n_vec, t.lambdas).key))
    x = g.generator(t.domain.from_sigma)
    for j in range(g.n):
        for kind, label in (("H", "row"), ("V", "col")):
            if kind == "H" and g.o_row[j] == g.n - 1:
                continue
            if kind == "V" and j == g.n - 1:
                continue
            rest = t.domain.subtract(g.marking_annulus(kind, j, x))
            E = GridDomain(g, t.domain.from_sigma, t.domain.to_sigma, rest.mult)
            if not E.is_positive():
                continue
            n_vec = tuple(v + 1 if k == j else v for k, v in enumerate(t.n_vec))
            for lam2, _ in pt.unit_enlargements(t.lambdas[j]):
                out.append(
                    (label, _with_lambda(PartitionedDomain(E, t.n_vec, t.lambdas), j, lam2, n_vec).key)
                )
    for j, lam in enumerate(t.lambdas):
        for lam2, _ in pt.elementary_coarsenings(lam):
            out.append(("coarsen", _with_lambda(t, j, lam2).key))
        if lam:
            n_ini = tuple(v - lam[0] if k == j else v for k, v in enumerate(t.n_vec))
            out.append(("initial", _with_lambda(t, j, lam[1:], n_ini).key))
            n_fin = tuple(v - lam[-1] if k == j else v for k, v in enumerate(t.n_vec))
            out.append(("final", _with_lambda(t, j, lam[:-1], n_fin).key))
    return out


def cdp_differential(s: SignAssignment, t: PartitionedDomain) -> list[tuple[int, PartitionedDomain]]:
    """The full differential, with coefficients summed per target."""
    acc: dict = {}
    for part in DELTAS.values():
        for c, u in part(s, t):
            cur = acc.get(u.key)
            acc[u.key] = (cur[0] + c if cur else c, u)
    return [(c, u) for c, u in acc.values() if c]


# -- closures ------------------------------------------------------------------


@dataclass
class ClosureComplex:
    """A finite downward-closed family of triples with the CDP differential."""

    seeds: list[PartitionedDomain]
    elements: dict  # key -> PartitionedDomain
    complex: IntegerChainComplex
    parts: dict  # type name -> {key: {key2: coeff}}

    @staticmethod
    def build(s: SignAssignment, seeds) -> "ClosureComplex":
        elements = {}
        frontier = [t for t in seeds]
        for t in frontier:
            elements[t.key] = t
        while frontier:
            t = frontier.pop()
            for part in DELTAS.values():
                acc: dict = {}
                for c, u in part(s, t):
                    acc[u.key] = (acc.get(u.key, (0, u))[0] + c, u)
                for key, (c, u) in acc.items():
                    if c and key not in elements:
                        elements[key] = u
                        frontier.append(u)
        grading = {key: t.gr for key, t in elements.items()}
        parts = {name: {} for name in DELTAS}
        diff: dict = {}
        for key, t in elements.items():
            col: dict = {}
            for name, part in DELTAS.items():
                pcol: dict = {}
                for c, u in part(s, t):
                    pcol[u.key] = pcol.get(u.key, 0) + c
                pcol = {k: v for k, v in pcol.items() if v}
                if pcol:
                    parts[name][key] = pcol
                for k, v in pcol.items():
                    col[k] = col.get(k, 0) + v
            col = {k: v for k, v in col.items() if v}
            if col:
                diff[key] = col
        cx = IntegerChainComplex(grading, diff)
        return ClosureComplex(list(seeds), elements, cx, parts)

    def compose_parts(self, first: str, then: str) -> dict:
        """Matrix of delta_then . delta_first on the closure."""
        out: dict = {}
        cols_first = self.parts.get(first, {})
        cols_then = self.parts.get(then, {})
        for key, col in cols_first.items():
            acc: dict = {}
            for mid, c in col.items():
                for tgt, c2 in cols_then.get(mid, {}).items():
                    acc[tgt] = acc.get(tgt, 0) + c * c2
            acc = {k: v for k, v in acc.items() if v}
            if acc:
                out[key] = acc
        return out

    def anticommutator_vanishes(self, a: str, b: str) -> bool:
        ab = self.compose_parts(a, b)
        ba = self.compose_parts(b, a)
        keys = set(ab) | set(ba)
        for key in keys:
            col: dict = {}
            for src in (ab.get(key, {}), ba.get(key, {})):
                for k, v in src.items():
                    col[k] = col.get(k, 0) + v
            if any(col.values()):
                return False
        return True

    def square_vanishes(self, a: str) -> bool:
        sq = self.compose_parts(a, a)
        return not any(any(col.values()) for col in sq.values())

    def d4_identity_holds(self) -> bool:
        """(delta_IV)^2 + delta_III delta_IV + delta_IV delta_III = 0."""
        terms = [
            self.compose_parts("IV", "IV"),
            self.compose_parts("IV", "III"),
            self.compose_parts("III", "IV"),
        ]
        keys = set().union(*terms)
        for key in keys:
            col: dict = {}
            for t in terms:
                for k, v in t.get(key, {}).items():
                    col[k] = col.get(k, 0) + v
            if any(col.values()):
                return False
        return True

    def identity_ledger(self) -> dict:
        """The nine identities whose sum gives d^2 = 0."""
        return {
            "I.I": self.square_vanishes("I"),
            "II.II": self.square_vanishes("II"),
            "III.III": self.square_vanishes("III"),
            "I.II+II.I": self.anticommutator_vanishes("I", "II"),
            "I.III+III.I": self.anticommutator_vanishes("I", "III"),
            "I.IV+IV.I": self.anticommutator_vanishes("I", "IV"),
            "II.III+III.II": self.anticommutator_vanishes("II", "III"),
            "II.IV+IV.II": self.anticommutator_vanishes("II", "IV"),
            "IV.IV+III.IV+IV.III": self.d4_identity_holds(),
        }


# -- distinguished subcomplexes ---------------------------------------------------


def build_cdp_dagger(g: GridDiagram, s: SignAssignment | None = None) -> IntegerChainComplex:
    """The subcomplex on (trivial domain at x^Id, N in {0,1}^n, unit parts).

    Its differential has only type IV terms, and the initial/final reductions
    cancel in pairs, so it vanishes; the homology in degree k is free of rank
    C(n, k).  When a sign assignment is supplied the vanishing is recomputed
    from the full differential instead of assumed.
    """
    import itertools

    x_id = g.generator(tuple(range(g.n)))
    triples = []
    for n_vec in itertools.product((0, 1), repeat=g.n):
        lambdas = tuple((1,) if v else () for v in n_vec)
        triples.append(PartitionedDomain(g.trivial_domain(x_id), n_vec, lambdas))
    grading = {t.key: t.gr for t in triples}
    diff: dict = {}
    if s is not None:
        keys = set(grading)
        for t in triples:
            col: dict = {}
            for c, u in cdp_differential(s, t):
                if u.key not in keys:
                    raise AssertionError("dagger subcomplex is not closed")
                col[u.key] = col.get(u.key, 0) + c
            col = {k: v for k, v in col.items() if v}
            if col:
                diff[t.key] = col
    return IntegerChainComplex(grading, diff)


def hypercube_piece(n_j: int) -> IntegerChainComplex:
    """Compositions of N_j with the signed elementary-coarsening differential."""
    grading = {lam: len(lam) for lam in pt.all_compositions(n_j)}
    diff: dict = {}
    for lam in grading:
        col: dict = {}
        for lam2, sgn in pt.elementary_coarsenings(lam):
            col[lam2] = col.get(lam2, 0) + sgn
        col = {k: v for k, v in col.items() if v}
        if col:
            diff[lam] = col
    return IntegerChainComplex(grading, diff)


# -- associated graded pieces of CD ----------------------------------------------


@dataclass
class GradedPieceReport:
    a: tuple
    b: tuple
    y_sigma: tuple
    size: int
    homology: HomologyTable
    expected_acyclic: bool

    @property
    def ok(self) -> bool:
        nz = self.homology.nonzero()
        if self.expected_acyclic:
            return not nz
        return nz == {0: (1, ())} or nz == {0: (1, tuple())}


def graded_piece_complex(
    g: GridDiagram, s: SignAssignment, a, b, y: Generator
) -> IntegerChainComplex:
    """The associated-graded piece CD^{a,b,y} on the interval [m^{a,b,y}, Id].

    Generators are the x in G^{a,b,y} (each carrying its unique positive
    domain); the differential splits off front rectangles avoiding the last
    row and column.
    """
    a, b = tuple(a), tuple(b)
    members = g_set(g, a, b, y)
    grading = {}
    for sigma in members:
        D = g.unique_domain(g.generator(sigma), y, a, b)
        grading[sigma] = D.maslov_index()
    diff: dict = {}
    for sigma in members:
        col: dict = {}
        for info in g.rectangle_infos(sigma):
            if info.to_sigma not in members:
                continue
            rect = info.domain(g)
            if any(rect.a_vec()) or any(rect.b_vec()):
                continue
            col[info.to_sigma] = col.get(info.to_sigma, 0) + s.of(info)
        col = {k: v for k, v in col.items() if v}
        if col:
            diff[sigma] = col
    return IntegerChainComplex(grading, diff)


def graded_piece_acyclicity(
    g: GridDiagram, s: SignAssignment, a, b, y: Generator
) -> GradedPieceReport:
    a, b = tuple(a), tuple(b)
    cx = graded_piece_complex(g, s, a, b, y)
    x_id = tuple(range(g.n))
    expected_acyclic = not (
        all(v == 0 for v in a) and all(v == 0 for v in b) and y.sigma == x_id
    )
    return GradedPieceReport(a, b, y.sigma, len(cx.grading), cx.homology(), expected_acyclic)
