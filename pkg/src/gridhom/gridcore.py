"""Grid diagram data model.

A grid diagram of index ``n`` lives on the torus obtained from ``[0,n]^2``.
Internally everything is 0-indexed:

* columns ``c`` and rows ``r`` run over ``0..n-1``; the square cell ``(c, r)``
  is ``[c, c+1] x [r, r+1]``;
* ``o_row[c]`` / ``x_row[c]`` give the row of the O / X marking in column ``c``;
* a generator is a permutation ``sigma`` with one coordinate ``(i, sigma[i])``
  on each vertical circle ``x = i``.

The file format and all public examples are 1-indexed; translation happens at
the parsing layer.

Markings are indexed by their column: ``O_j`` is the O in column ``j``, and the
annuli ``H_j`` / ``V_j`` are the row and column through ``O_j``.  The marking
``X_{n-1}`` (0-indexed column ``n-1``) sits in the top-right cell
``(n-1, n-1)`` after canonicalization, and every domain handled by this
package has coefficient zero there.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property

Perm = tuple[int, ...]


class GridError(Exception):
    """Base class for errors raised by this package."""


class InvalidGrid(GridError):
    """Marking data does not describe a grid diagram."""


class EndpointMismatch(GridError):
    """Attempt to compose domains whose endpoints do not match."""


class NotPositive(GridError):
    """Operation requires a positive domain."""


def _count_below_left(a: list[tuple[int, int]], b: list[tuple[int, int]]) -> int:
    """Number of pairs (p, q) in a x b with p strictly below-left of q."""
    return sum(1 for (px, py) in a for (qx, qy) in b if px < qx and py < qy)


def _point_count(points: list[tuple[int, int]], marks: list[tuple[int, int]]) -> int:
    """I(x,x) - I(x,P) - I(P,x) + I(P,P) + 1 in doubled coordinates."""
    return (
        _count_below_left(points, points)
        - _count_below_left(points, marks)
        - _count_below_left(marks, points)
        + _count_below_left(marks, marks)
        + 1
    )


@dataclass(frozen=True)
class Generator:
    """A generator x^sigma with its cached gradings.

    ``alexander2`` stores the doubled Alexander multi-grading (one entry per
    link component), so half-integers stay exact.
    """

    sigma: Perm
    maslov: int
    alexander2: tuple[int, ...]

    @property
    def alexander_total2(self) -> int:
        return sum(self.alexander2)


@dataclass(frozen=True)
class GridDiagram:
    """A toroidal grid diagram with one O and one X in each row and column."""

    n: int
    o_row: Perm
    x_row: Perm

    def __post_init__(self) -> None:
        n = self.n
        if n < 1:
            raise InvalidGrid(f"grid index must be >= 1, got {n}")
        for name, perm in (("o_row", self.o_row), ("x_row", self.x_row)):
            if sorted(perm) != list(range(n)):
                raise InvalidGrid(f"{name} is not a permutation of 0..{n - 1}: {perm}")
        if n > 1 and any(self.o_row[c] == self.x_row[c] for c in range(n)):
            raise InvalidGrid("an O and an X occupy the same cell")

    # -- canonical position -------------------------------------------------

    @property
    def is_canonical(self) -> bool:
        return self.x_row[self.n - 1] == self.n - 1

    def _require_canonical(self) -> None:
        if not self.is_canonical:
            raise InvalidGrid("operation requires a canonicalized diagram")

    def shifted(self, row_shift: int, col_shift: int) -> "GridDiagram":
        """Cyclically shift rows and columns of the torus."""
        n = self.n
        o = tuple((self.o_row[(c + col_shift) % n] + row_shift) % n for c in range(n))
        x = tuple((self.x_row[(c + col_shift) % n] + row_shift) % n for c in range(n))
        return GridDiagram(n, o, x)

    # -- link components ----------------------------------------------------

    @cached_property
    def component_of_o(self) -> tuple[int, ...]:
        """Component id of each O marking, tracing O -> X along rows/columns.

        The permutation traced is c -> x_row^{-1}(o_row(c)); its orbits are the
        link components, numbered by their smallest column.
        """
        n = self.n
        x_col = [0] * n
        for c in range(n):
            x_col[self.x_row[c]] = c
        comp = [-1] * n
        next_id = 0
        for start in range(n):
            if comp[start] >= 0:
                continue
            c = start
            while comp[c] < 0:
                comp[c] = next_id
                c = x_col[self.o_row[c]]
            next_id += 1
        return tuple(comp)

    @property
    def num_components(self) -> int:
        return max(self.component_of_o) + 1

    @cached_property
    def markings_per_component(self) -> tuple[int, ...]:
        counts = [0] * self.num_components
        for comp in self.component_of_o:
            counts[comp] += 1
        return tuple(counts)

    # -- marking positions (doubled coordinates) -----------------------------

    @cached_property
    def _o_points2(self) -> list[tuple[int, int]]:
        return [(2 * c + 1, 2 * self.o_row[c] + 1) for c in range(self.n)]

    @cached_property
    def _x_points2(self) -> list[tuple[int, int]]:
        return [(2 * c + 1, 2 * self.x_row[c] + 1) for c in range(self.n)]

    def _o_column_in_row(self, row: int) -> int:
        return self.o_row.index(row)

    # -- generators and gradings --------------------------------------------

    def generators(self):
        """Iterate over all n! generators."""
        for sigma in itertools.permutations(range(self.n)):
            yield self.generator(sigma)

    def generator(self, sigma: Perm) -> Generator:
        sigma = tuple(sigma)
        cache = self.__dict__.setdefault("_gen_cache", {})
        gen = cache.get(sigma)
        if gen is None:
            gen = Generator(sigma, self._maslov(sigma), self._alexander2(sigma))
            cache[sigma] = gen
        return gen

    def _points2(self, sigma: Perm) -> list[tuple[int, int]]:
        return [(2 * i, 2 * sigma[i]) for i in range(self.n)]

    def _maslov(self, sigma: Perm) -> int:
        """Maslov grading, normalized so grid homology is a link invariant.

        The point-count formula is computed in the fundamental domain
        ``[0,n)^2``; the extra ``n - l`` (markings minus components) corrects
        for index 0/3 stabilizations, pinning the unknot's hat homology at
        Maslov 0 on every grid presentation.
        """
        pts = self._points2(sigma)
        return _point_count(pts, self._o_points2) + (self.n - self.num_components)

    def maslov_pointcount(self, sigma: Perm, marks2: list[tuple[int, int]]) -> int:
        """Unnormalized point-count grading with respect to a marking set."""
        return _point_count(self._points2(sigma), marks2)

    def _alexander2(self, sigma: Perm) -> tuple[int, ...]:
        """Doubled Alexander multi-grading.

        Per component k: 2*A_k = M_{O_k} - M_{X_k} + (n_k - 1), with M_P the
        point count against the component's own markings.  The ``n_k - 1``
        offset matches the Maslov normalization above.
        """
        pts = self._points2(sigma)
        out = []
        for comp in range(self.num_components):
            os = [p for c, p in enumerate(self._o_points2) if self.component_of_o[c] == comp]
            xs = [
                p
                for c, p in enumerate(self._x_points2)
                if self.component_of_o[self._o_column_in_row(self.x_row[c])] == comp
            ]
            nk = len(os)
            out.append(_point_count(pts, os) - _point_count(pts, xs) + (nk - 1))
        return tuple(out)

    # -- rectangles -----------------------------------------------------------

    @cached_property
    def _forbidden_cell(self) -> tuple[int, int]:
        """The cell holding the top-right X marking; no domain may cover it."""
        self._require_canonical()
        return (self.n - 1, self.n - 1)

    def rectangle_infos(self, sigma: Perm) -> list["RectInfo"]:
        """All rectangles leaving x^sigma, as lightweight records (cached)."""
        sigma = tuple(sigma)
        cache = self.__dict__.setdefault("_rect_cache", {})
        infos = cache.get(sigma)
        if infos is None:
            infos = self._build_rect_infos(sigma)
            cache[sigma] = infos
        return infos

    def _build_rect_infos(self, sigma: Perm) -> list["RectInfo"]:
        n = self.n
        fc, fr = self._forbidden_cell
        infos = []
        for i in range(n):
            for j in range(i + 1, n):
                for role in (0, 1):
                    if role == 0:
                        c0, w = i, j - i
                        r0, h = sigma[i], (sigma[j] - sigma[i]) % n
                    else:
                        c0, w = j, n - (j - i)
                        r0, h = sigma[j], (sigma[i] - sigma[j]) % n
                    cols = [(c0 + dc) % n for dc in range(w)]
                    rows = [(r0 + dr) % n for dr in range(h)]
                    if fc in cols and fr in rows:
                        continue
                    # interior must avoid the other coordinates
                    if any(
                        0 < (k - c0) % n < w and 0 < (sigma[k] - r0) % n < h
                        for k in range(n)
                        if k != i and k != j
                    ):
                        continue
                    rowset = set(rows)
                    o_vec = tuple(1 if c in cols and self.o_row[c] in rowset else 0 for c in range(n))
                    x_vec = tuple(1 if c in cols and self.x_row[c] in rowset else 0 for c in range(n))
                    tau = list(sigma)
                    tau[i], tau[j] = tau[j], tau[i]
                    infos.append(
                        RectInfo(
                            from_sigma=sigma,
                            to_sigma=tuple(tau),
                            pair=(i, j),
                            role=role,
                            col0=c0,
                            width=w,
                            row0=r0,
                            height=h,
                            o_vec=o_vec,
                            x_vec=x_vec,
                        )
                    )
        return infos

    def rectangles_from(self, x: Generator) -> list[tuple["GridDomain", Generator]]:
        """All rectangles in R(x, y), over all y, as full domain objects."""
        out = []
        for info in self.rectangle_infos(x.sigma):
            out.append((info.domain(self), self.generator(info.to_sigma)))
        return out

    def rectangle_infos_into(self, y_sigma: Perm) -> list["RectInfo"]:
        """All rectangles in R(z, y), over all z, as records."""
        out = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                tau = list(y_sigma)
                tau[i], tau[j] = tau[j], tau[i]
                for info in self.rectangle_infos(tuple(tau)):
                    if info.pair == (i, j):
                        out.append(info)
        return out

    def rectangles_into(self, y: Generator) -> list[tuple["GridDomain", Generator]]:
        """All rectangles in R(z, y), over all z."""
        return [
            (info.domain(self), self.generator(info.from_sigma))
            for info in self.rectangle_infos_into(y.sigma)
        ]

    # -- domains ---------------------------------------------------------------

    def zero_mult(self) -> tuple[tuple[int, ...], ...]:
        return tuple((0,) * self.n for _ in range(self.n))

    def trivial_domain(self, x: Generator) -> "GridDomain":
        return GridDomain(self, x.sigma, x.sigma, self.zero_mult())

    def annulus_mult(self, kind: str, index: int) -> tuple[tuple[int, ...], ...]:
        """Multiplicity matrix of the positional annulus H_(index) or V_(index)."""
        n = self.n
        if kind == "row":
            return tuple(tuple(1 if r == index else 0 for r in range(n)) for _ in range(n))
        if kind == "col":
            return tuple(tuple(1 for _ in range(n)) if c == index else (0,) * n for c in range(n))
        raise ValueError(f"kind must be 'row' or 'col', got {kind!r}")

    def marking_annulus(self, kind: str, j: int, x: Generator) -> "GridDomain":
        """H_j (row through O_j) or V_j (column through O_j) as a domain x -> x.

        The last row and column are not allowable (they cover the top-right
        X marking) and are rejected.
        """
        if kind == "H":
            if self.o_row[j] == self.n - 1:
                raise InvalidGrid(f"row through O_{j} is the top row; not allowable")
            mult = self.annulus_mult("row", self.o_row[j])
        elif kind == "V":
            if j == self.n - 1:
                raise InvalidGrid(f"column through O_{j} is the last column; not allowable")
            mult = self.annulus_mult("col", j)
        else:
            raise ValueError(f"kind must be 'H' or 'V', got {kind!r}")
        return GridDomain(self, x.sigma, x.sigma, mult)

    def unique_domain(self, x: Generator, y: Generator, a: tuple[int, ...], b: tuple[int, ...]) -> "GridDomain":
        """The unique 2-chain from x to y with last-column/last-row data (a, b).

        ``a[r]`` is the multiplicity in the rightmost column at row ``r`` and
        ``b[c]`` the multiplicity in the topmost row at column ``c``
        (``r, c < n-1``; the top-right cell is pinned to 0).  Entries may come
        out negative; callers test positivity.
        """
        n = self.n
        if len(a) != n - 1 or len(b) != n - 1:
            raise ValueError("a and b must have length n-1")
        xs, ys = set(self._points2_int(x.sigma)), set(self._points2_int(y.sigma))

        def defect(u: int, v: int) -> int:
            return (1 if (u, v) in xs else 0) - (1 if (u, v) in ys else 0)

        m = [[0] * n for _ in range(n)]
        for r in range(n - 1):
            m[n - 1][r] = a[r]
        for c in range(n - 1):
            m[c][n - 1] = b[c]
        m[n - 1][n - 1] = 0
        for c in range(n - 2, -1, -1):
            for r in range(n - 2, -1, -1):
                m[c][r] = defect(c + 1, r + 1) - m[c + 1][r + 1] + m[c][r + 1] + m[c + 1][r]
        dom = GridDomain(self, x.sigma, y.sigma, tuple(tuple(col) for col in m))
        if not dom.satisfies_boundary_condition():
            raise GridError("inconsistent boundary data in unique_domain")
        return dom

    def _points2_int(self, sigma: Perm) -> list[tuple[int, int]]:
        return [(i, sigma[i]) for i in range(self.n)]


@dataclass(frozen=True)
class RectInfo:
    """A rectangle leaving a fixed generator, in compact form.

    ``pair = (i, j)`` are the two columns carrying the moving coordinates and
    ``role`` selects which of them is the bottom-left corner (0: column i).
    The cells covered are ``col0..col0+width-1 x row0..row0+height-1`` mod n.
    """

    from_sigma: Perm
    to_sigma: Perm
    pair: tuple[int, int]
    role: int
    col0: int
    width: int
    row0: int
    height: int
    o_vec: tuple[int, ...]
    x_vec: tuple[int, ...]

    @property
    def key(self) -> tuple:
        """Identifier used by sign assignments."""
        return (self.from_sigma, self.pair, self.role)

    @property
    def wraps_vertically(self) -> bool:
        return self.row0 + self.height > len(self.from_sigma)

    def covers_cell(self, c: int, r: int) -> bool:
        n = len(self.from_sigma)
        return (c - self.col0) % n < self.width and (r - self.row0) % n < self.height

    def domain(self, g: GridDiagram) -> "GridDomain":
        n = g.n
        mult = tuple(
            tuple(1 if self.covers_cell(c, r) else 0 for r in range(n)) for c in range(n)
        )
        return GridDomain(g, self.from_sigma, self.to_sigma, mult)


@dataclass(frozen=True)
class GridDomain:
    """An integer 2-chain between two generators; ``mult[c][r]`` per cell."""

    diagram: GridDiagram
    from_sigma: Perm
    to_sigma: Perm
    mult: tuple[tuple[int, ...], ...]

    @property
    def from_gen(self) -> Generator:
        return self.diagram.generator(self.from_sigma)

    @property
    def to_gen(self) -> Generator:
        return self.diagram.generator(self.to_sigma)

    def is_positive(self) -> bool:
        return all(v >= 0 for col in self.mult for v in col)

    def is_trivial(self) -> bool:
        return self.from_sigma == self.to_sigma and all(v == 0 for col in self.mult for v in col)

    # -- coefficient vectors -------------------------------------------------

    def o_vec(self) -> tuple[int, ...]:
        g = self.diagram
        return tuple(self.mult[c][g.o_row[c]] for c in range(g.n))

    def x_vec(self) -> tuple[int, ...]:
        g = self.diagram
        return tuple(self.mult[c][g.x_row[c]] for c in range(g.n))

    def a_vec(self) -> tuple[int, ...]:
        """Multiplicities in the rightmost column, rows 0..n-2."""
        n = self.diagram.n
        return tuple(self.mult[n - 1][r] for r in range(n - 1))

    def b_vec(self) -> tuple[int, ...]:
        """Multiplicities in the topmost row, columns 0..n-2."""
        n = self.diagram.n
        return tuple(self.mult[c][n - 1] for c in range(n - 1))

    # -- structure -------------------------------------------------------------

    def maslov_index(self) -> int:
        """mu(D) = M(x) - M(y) + 2|O(D)|."""
        return self.from_gen.maslov - self.to_gen.maslov + 2 * sum(self.o_vec())

    def compose(self, other: "GridDomain") -> "GridDomain":
        if self.to_sigma != other.from_sigma:
            raise EndpointMismatch(f"cannot compose: {self.to_sigma} != {other.from_sigma}")
        n = self.diagram.n
        mult = tuple(
            tuple(self.mult[c][r] + other.mult[c][r] for r in range(n)) for c in range(n)
        )
        return GridDomain(self.diagram, self.from_sigma, other.to_sigma, mult)

    def subtract(self, other: "GridDomain") -> "GridDomain":
        """2-chain difference; endpoints become (self.from -> precomposed)."""
        n = self.diagram.n
        mult = tuple(
            tuple(self.mult[c][r] - other.mult[c][r] for r in range(n)) for c in range(n)
        )
        return GridDomain(self.diagram, other.to_sigma, self.to_sigma, mult)

    def satisfies_boundary_condition(self) -> bool:
        """Corner defects must be +1 at x-coordinates, -1 at y, 0 elsewhere."""
        g, n = self.diagram, self.diagram.n
        xs = set(g._points2_int(self.from_sigma))
        ys = set(g._points2_int(self.to_sigma))
        for u in range(n):
            for v in range(n):
                d = (
                    self.mult[u][v]
                    + self.mult[u - 1][v - 1]
                    - self.mult[u - 1][v]
                    - self.mult[u][v - 1]
                )
                want = (1 if (u, v) in xs else 0) - (1 if (u, v) in ys else 0)
                if d != want:
                    return False
        return True

    def decompose_into_rectangles(self) -> list["GridDomain"]:
        """One decomposition D = R_1 * ... * R_k with k = mu(D).

        Greedy: repeatedly split a rectangle off the front, preferring the
        rightmost/topmost bottom-left corner, ties broken lexicographically on
        the rectangle identifier.  Deterministic.
        """
        if not self.is_positive():
            raise NotPositive("decompose_into_rectangles requires a positive domain")
        g = self.diagram
        out: list[GridDomain] = []
        current = self
        while not current.is_trivial():
            candidates = []
            for info in g.rectangle_infos(current.from_sigma):
                rect = info.domain(g)
                rest = current.subtract(rect)
                if rest.is_positive():
                    candidates.append((info, rect, rest))
            if not candidates:
                raise GridError("positive domain with mu > 0 admits no rectangle split")
            candidates.sort(key=lambda t: (-t[0].col0, -t[0].row0, t[0].pair, t[0].role))
            _, rect, rest = candidates[0]
            out.append(rect)
            current = GridDomain(g, rest.from_sigma, rest.to_sigma, rest.mult)
        return out


@dataclass(frozen=True)
class PeriodicDomain:
    """A periodic 2-chain, recorded by its row/column annulus coefficients."""

    h_coeffs: tuple[int, ...]
    v_coeffs: tuple[int, ...]

    @staticmethod
    def from_domain(d: GridDomain) -> "PeriodicDomain":
        if d.from_sigma != d.to_sigma:
            raise EndpointMismatch("periodic domains have equal endpoints")
        n = d.diagram.n
        h = tuple(d.mult[n - 1][i] for i in range(n - 1))
        v = tuple(d.mult[i][n - 1] for i in range(n - 1))
        return PeriodicDomain(h, v)

    def to_domain(self, g: GridDiagram, x: Generator) -> GridDomain:
        n = g.n
        m = [[0] * n for _ in range(n)]
        for i, coeff in enumerate(self.h_coeffs):
            for c in range(n):
                m[c][i] += coeff
        for i, coeff in enumerate(self.v_coeffs):
            for r in range(n):
                m[i][r] += coeff
        return GridDomain(g, x.sigma, x.sigma, tuple(tuple(col) for col in m))


# -- canonicalization and parsing ---------------------------------------------


def canonicalize(g: GridDiagram) -> GridDiagram:
    """Shift the torus so an X occupies the top-right cell.

    Among the ``n`` valid (row_shift, col_shift) pairs (one per X marking),
    the lexicographically smallest is chosen.
    """
    n = g.n
    if n == 1:
        return g
    x_col = [0] * n
    for c in range(n):
        x_col[g.x_row[c]] = c
    # For each row shift there is exactly one valid column shift, so the
    # lexicographically smallest valid pair is (0, cs) with cs moving the X
    # of the top row into the last column.
    cs = (x_col[n - 1] - (n - 1)) % n
    shifted = g.shifted(0, cs)
    assert shifted.is_canonical
    return shifted


def parse_grid_text(text: str) -> GridDiagram:
    """Parse the plain-text grid format (1-indexed rows per column)."""
    n = None
    x_rows = o_rows = None
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.lower().startswith("n"):
            n = int(line.split("=", 1)[1])
        elif line.upper().startswith("X"):
            x_rows = [int(t) for t in line.split(":", 1)[1].split()]
        elif line.upper().startswith("O"):
            o_rows = [int(t) for t in line.split(":", 1)[1].split()]
    if n is None or x_rows is None or o_rows is None:
        raise InvalidGrid("grid file needs lines 'n=', 'X:' and 'O:'")
    if len(x_rows) != n or len(o_rows) != n:
        raise InvalidGrid("marking rows must list one entry per column")
    return GridDiagram(n, tuple(r - 1 for r in o_rows), tuple(r - 1 for r in x_rows))


def parse_grid_json(text: str) -> GridDiagram:
    data = json.loads(text)
    try:
        n = int(data["n"])
        x = tuple(int(r) - 1 for r in data["x_row"])
        o = tuple(int(r) - 1 for r in data["o_row"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidGrid(f"bad JSON grid: {exc}") from exc
    if len(x) != n or len(o) != n:
        raise InvalidGrid("x_row and o_row must have length n")
    return GridDiagram(n, o, x)


def load_grid(path: str) -> GridDiagram:
    """Load a grid file (text or JSON) and canonicalize it."""
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        g = parse_grid_json(text)
    else:
        g = parse_grid_text(text)
    return canonicalize(g)
