"""Finitely generated free integer chain complexes.

A complex is a basis (opaque hashable keys, each with an integer grading) and
a sparse differential lowering the grading by one.  Homology is computed by
first cancelling unit-coefficient pairs (algebraic Morse reduction, which
keeps integer homology on the nose and shrinks the grid complexes by orders
of magnitude) and then running Smith normal form on what is left.

The reduction can optionally track the homotopy equivalence (``iota`` into the
original complex, ``pi`` back onto the reduced one) so chain maps can be
pushed down to homology.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field

Chain = dict  # key -> int coefficient


class NotAComplex(Exception):
    pass


class NotAFiltration(Exception):
    pass


def chain_add(a: Chain, b: Chain, scale: int = 1) -> Chain:
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) + scale * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


@dataclass
class IntegerChainComplex:
    """Graded free Z-complex with sparse differential ``diff[key] = chain``."""

    grading: dict  # key -> int
    diff: dict  # key -> Chain (keys absent mean zero differential)

    def basis_at(self, k: int) -> list:
        return [key for key, g in self.grading.items() if g == k]

    def gradings(self) -> list[int]:
        return sorted(set(self.grading.values()))

    def apply(self, chain: Chain) -> Chain:
        out: Chain = {}
        for k, c in chain.items():
            for k2, c2 in self.diff.get(k, {}).items():
                w = out.get(k2, 0) + c * c2
                if w:
                    out[k2] = w
                else:
                    del out[k2]
        return out

    def check_d_squared(self) -> bool:
        for key in self.diff:
            if self.apply(self.diff[key]):
                return False
        return True

    def validate_grading(self) -> None:
        for key, col in self.diff.items():
            gk = self.grading[key]
            for key2 in col:
                if self.grading[key2] != gk - 1:
                    raise NotAComplex(f"differential does not lower grading by 1 at {key!r}")

    def homology(self) -> "HomologyTable":
        reduced, _, _ = reduce_complex(self)
        return _homology_snf(reduced)

    def associated_graded(self, filtration, leq=None) -> list["IntegerChainComplex"]:
        """Split into filtration-level pieces.

        ``filtration`` maps basis keys to values; the differential must not
        raise the value (``leq`` compares values, default scalar <=).  The
        returned complexes keep only the level-preserving part of ``diff``.
        """
        if leq is None:
            leq = lambda a, b: a <= b
        levels: dict = {}
        for key in self.grading:
            levels.setdefault(filtration(key), []).append(key)
        for key, col in self.diff.items():
            fv = filtration(key)
            for key2 in col:
                if not leq(filtration(key2), fv):
                    raise NotAFiltration(f"differential raises filtration at {key!r} -> {key2!r}")
        out = []
        for value, keys in sorted(levels.items(), key=lambda kv: repr(kv[0])):
            grading = {k: self.grading[k] for k in keys}
            diff = {}
            for k in keys:
                col = {k2: c for k2, c in self.diff.get(k, {}).items() if filtration(k2) == value}
                if col:
                    diff[k] = col
            out.append(IntegerChainComplex(grading, diff))
        return out


@dataclass
class HomologyTable:
    """Per grading: free rank and invariant torsion factors d1 | d2 | ..."""

    groups: dict  # grading -> (rank, tuple of torsion factors > 1)

    def rank(self, k: int) -> int:
        return self.groups.get(k, (0, ()))[0]

    def torsion(self, k: int) -> tuple:
        return self.groups.get(k, (0, ()))[1]

    def is_torsion_free(self) -> bool:
        return all(not t for _, t in self.groups.values())

    def nonzero(self) -> dict:
        return {k: v for k, v in self.groups.items() if v[0] or v[1]}

    def total_rank(self) -> int:
        return sum(r for r, _ in self.groups.values())

    def to_json(self) -> str:
        return json.dumps(
            {str(k): {"rank": r, "torsion": list(t)} for k, (r, t) in sorted(self.groups.items())}
        )

    @staticmethod
    def from_pairs(pairs) -> "HomologyTable":
        return HomologyTable({k: (r, ()) for k, r in pairs})


# -- Morse reduction -----------------------------------------------------------


def reduce_complex(
    cx: IntegerChainComplex, track_iota: bool = False, track_pi: bool = False
) -> tuple[IntegerChainComplex, dict | None, dict | None]:
    """Cancel unit pivots; returns (reduced, iota, pi).

    ``iota`` maps reduced basis keys to chains in the original complex,
    ``pi`` maps original basis keys to chains in the reduced one; both are
    chain homotopy equivalences.  They are None unless requested.
    """
    cols: dict = {k: dict(v) for k, v in cx.diff.items() if v}
    rows: dict = {}
    for c, col in cols.items():
        for r in col:
            rows.setdefault(r, set()).add(c)
    alive = set(cx.grading)

    iota = {k: {k: 1} for k in cx.grading} if track_iota else None
    pi = {k: {k: 1} for k in cx.grading} if track_pi else None
    pi_rows: dict = {k: {k} for k in cx.grading} if track_pi else None

    heap: list = []
    tick = 0
    for c, col in cols.items():
        for r, v in col.items():
            if v in (1, -1):
                tick += 1
                heapq.heappush(heap, (len(col) * len(rows.get(r, ())), tick, c, r))

    def col_entry(c, r):
        col = cols.get(c)
        return col.get(r, 0) if col else 0

    while heap:
        _, _, b, a = heapq.heappop(heap)
        if b not in alive or a not in alive:
            continue
        u = col_entry(b, a)
        if u not in (1, -1):
            continue
        db = cols.get(b, {})
        # cancel the pair (a, b): d(b) = u*a + ...
        affected = [c for c in rows.get(a, set()) if c != b and c in alive]
        for c in affected:
            lam = cols[c].pop(a)
            rows[a].discard(c)
            factor = -lam * u
            col = cols[c]
            for r, v in db.items():
                if r == a:
                    continue
                w = col.get(r, 0) + factor * v
                if w:
                    col[r] = w
                    rows.setdefault(r, set()).add(c)
                    if w in (1, -1) and r in alive:
                        tick += 1
                        heapq.heappush(heap, (len(col) * len(rows.get(r, ())), tick, c, r))
                else:
                    col.pop(r, None)
                    rows.get(r, set()).discard(c)
            if track_iota:
                iota[c] = chain_add(iota[c], iota[b], factor)
            if not col:
                del cols[c]
        if track_pi:
            # pi(a) = -u * (d b without the a term), pi(b) = 0
            sub: Chain = {}
            for r, v in db.items():
                if r != a and r in alive:
                    sub[r] = -u * v
            for orig in list(pi_rows.get(a, ())):
                mu = pi[orig].pop(a, 0)
                if mu:
                    for r, v in sub.items():
                        w = pi[orig].get(r, 0) + mu * v
                        if w:
                            pi[orig][r] = w
                            pi_rows.setdefault(r, set()).add(orig)
                        else:
                            pi[orig].pop(r, None)
                            pi_rows.get(r, set()).discard(orig)
            pi_rows.pop(a, None)
            for orig in list(pi_rows.get(b, ())):
                pi[orig].pop(b, None)
            pi_rows.pop(b, None)
        # remove a and b
        alive.discard(a)
        alive.discard(b)
        cols.pop(b, None)
        cols.pop(a, None)
        for c in rows.pop(b, set()):
            if c in cols:
                cols[c].pop(b, None)
        rows.pop(a, None)
        if track_iota:
            iota.pop(a, None)
            iota.pop(b, None)

    grading = {k: cx.grading[k] for k in alive}
    diff = {}
    for c in alive:
        col = {r: v for r, v in cols.get(c, {}).items() if r in alive}
        if col:
            diff[c] = col
    reduced = IntegerChainComplex(grading, diff)
    return reduced, iota, pi


# -- Smith normal form -----------------------------------------------------------


def smith_normal_form(mat: list[list[int]], transforms: bool = False):
    """Diagonalize an integer matrix: S = L * mat * R.

    Returns (diag, L, Linv, R, Rinv); the transform matrices are None unless
    requested.  ``diag`` lists the invariant factors (non-negative, each
    dividing the next, zeros trailing implicitly for the full rank profile).
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    a = [row[:] for row in mat]
    if transforms:
        L = [[int(i == j) for j in range(m)] for i in range(m)]
        Linv = [[int(i == j) for j in range(m)] for i in range(m)]
        R = [[int(i == j) for j in range(n)] for i in range(n)]
        Rinv = [[int(i == j) for j in range(n)] for i in range(n)]
    else:
        L = Linv = R = Rinv = None

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        if transforms:
            L[i] = [x - q * y for x, y in zip(L[i], L[j])]
            for r in range(m):  # Linv column op: col_j += q * col_i
                Linv[r][j] += q * Linv[r][i]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(m):
            a[r][i] -= q * a[r][j]
        if transforms:
            for r in range(n):
                R[r][i] -= q * R[r][j]
            Rinv[j] = [x + q * y for x, y in zip(Rinv[j], Rinv[i])]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        if transforms:
            L[i], L[j] = L[j], L[i]
            for r in range(m):
                Linv[r][i], Linv[r][j] = Linv[r][j], Linv[r][i]

    def col_swap(i, j):
        for r in range(m):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        if transforms:
            for r in range(n):
                R[r][i], R[r][j] = R[r][j], R[r][i]
            Rinv[i], Rinv[j] = Rinv[j], Rinv[i]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        if transforms:
            L[i] = [-x for x in L[i]]
            for r in range(m):
                Linv[r][i] = -Linv[r][i]

    diag = []
    s = 0
    while True:
        pivot = None
        best = None
        for i in range(s, m):
            for j in range(s, n):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
                    if v == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        row_swap(s, pivot[0])
        col_swap(s, pivot[1])
        if a[s][s] < 0:
            row_negate(s)
        while True:
            done = True
            for i in range(s + 1, m):
                if a[i][s]:
                    q = a[i][s] // a[s][s]
                    row_op(i, s, q)
                    if a[i][s]:
                        row_swap(s, i)
                        if a[s][s] < 0:
                            row_negate(s)
                        done = False
            for j in range(s + 1, n):
                if a[s][j]:
                    q = a[s][j] // a[s][s]
                    col_op(j, s, q)
                    if a[s][j]:
                        col_swap(s, j)
                        if a[s][s] < 0:
                            row_negate(s)
                        done = False
            if not done:
                continue
            # pivot must divide the remaining block for d1 | d2 | ...
            offender = None
            for i in range(s + 1, m):
                for j in range(s + 1, n):
                    if a[i][j] % a[s][s]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_op(s, offender, -1)  # fold the offending row in and redo
        diag.append(a[s][s])
        s += 1
    return diag, L, Linv, R, Rinv


def _homology_snf(cx: IntegerChainComplex) -> HomologyTable:
    gradings = cx.gradings()
    if not gradings:
        return HomologyTable({})
    basis = {k: cx.basis_at(k) for k in range(min(gradings), max(gradings) + 1)}
    ranks: dict[int, int] = {}
    torsion: dict[int, tuple] = {}
    for k in basis:
        lower = basis.get(k - 1, [])
        if not lower or not basis[k]:
            ranks[k] = 0
            torsion[k] = ()
            continue
        idx = {key: i for i, key in enumerate(lower)}
        mat = [[0] * len(basis[k]) for _ in lower]
        for j, key in enumerate(basis[k]):
            for key2, v in cx.diff.get(key, {}).items():
                mat[idx[key2]][j] = v
        diag, *_ = smith_normal_form(mat)
        ranks[k] = sum(1 for d in diag if d)
        torsion[k] = tuple(d for d in diag if d > 1)
    groups = {}
    for k in basis:
        free = len(basis[k]) - ranks.get(k, 0) - ranks.get(k + 1, 0)
        tors = torsion.get(k + 1, ())
        if free or tors:
            groups[k] = (free, tors)
    return HomologyTable(groups)


# -- homology with distinguished bases ------------------------------------------


@dataclass
class GradedHomologyBasis:
    """Homology of one grading with cycle representatives.

    ``free_reps`` are cycles spanning the free part; ``express`` writes any
    cycle as coordinates over them modulo boundaries and torsion.
    """

    keys: list
    free_reps: list[Chain]
    torsion: tuple
    _kernel: list[list[int]] = field(repr=False, default_factory=list)
    _rinv: list[list[int]] = field(repr=False, default_factory=list)
    _rank: int = 0
    _l2: list[list[int]] | None = field(repr=False, default=None)
    _d2: list[int] = field(repr=False, default_factory=list)
    _free_idx: list[int] = field(repr=False, default_factory=list)

    def express(self, chain: Chain) -> list[int]:
        """Coordinates of a cycle over the free basis (mod torsion/boundary)."""
        v = [chain.get(k, 0) for k in self.keys]
        if not self.keys:
            if chain:
                raise ValueError("chain not supported on this grading")
            return []
        coords = [sum(self._rinv[i][j] * v[j] for j in range(len(v))) for i in range(len(v))]
        for i in range(self._rank):
            if coords[i]:
                raise ValueError("chain is not a cycle")
        z = coords[self._rank :]
        if self._l2 is None:
            q = z
        else:
            q = [sum(self._l2[i][j] * z[j] for j in range(len(z))) for i in range(len(z))]
        # entries with d2 == 1 are boundaries; entries with d2 > 1 are torsion
        return [q[i] for i in self._free_idx]


def homology_with_bases(cx: IntegerChainComplex) -> dict[int, GradedHomologyBasis]:
    """Per-grading homology with explicit free-part cycle representatives."""
    cx.validate_grading()
    out: dict[int, GradedHomologyBasis] = {}
    gradings = cx.gradings()
    if not gradings:
        return out
    for k in range(min(gradings), max(gradings) + 1):
        keys = cx.basis_at(k)
        below = cx.basis_at(k - 1)
        above = cx.basis_at(k + 1)
        nk = len(keys)
        if nk == 0:
            out[k] = GradedHomologyBasis([], [], ())
            continue
        idx = {key: i for i, key in enumerate(keys)}
        if below:
            bidx = {key: i for i, key in enumerate(below)}
            A = [[0] * nk for _ in below]
            for j, key in enumerate(keys):
                for key2, v in cx.diff.get(key, {}).items():
                    A[bidx[key2]][j] = v
        else:
            A = [[0] * nk]  # zero map
        diag, _, _, R, Rinv = smith_normal_form(A, transforms=True)
        rank = sum(1 for d in diag if d)
        kernel_cols = [[R[r][c] for r in range(nk)] for c in range(rank, nk)]
        m = len(kernel_cols)
        if above:
            B = []
            for key in above:
                col = cx.diff.get(key, {})
                v = [col.get(kk, 0) for kk in keys]
                w = [sum(Rinv[i][j] * v[j] for j in range(nk)) for i in range(nk)]
                B.append(w[rank:])
            Y = [[B[c][r] for c in range(len(above))] for r in range(m)]
        else:
            Y = [[0] for _ in range(m)] if m else []
        if m == 0:
            out[k] = GradedHomologyBasis(keys, [], (), [], Rinv, rank, None, [], [])
            continue
        d2, L2, L2inv, _, _ = smith_normal_form(Y, transforms=True)
        d2_full = list(d2) + [0] * (m - len(d2))
        free_idx = [i for i in range(m) if d2_full[i] == 0]
        tors = tuple(d for d in d2 if d > 1)
        # representative of quotient basis element i: kernel * L2inv[:, i]
        free_reps = []
        for i in free_idx:
            vec = [sum(kernel_cols[c][r] * L2inv[c][i] for c in range(m)) for r in range(nk)]
            rep = {keys[r]: vec[r] for r in range(nk) if vec[r]}
            free_reps.append(rep)
        out[k] = GradedHomologyBasis(keys, free_reps, tors, kernel_cols, Rinv, rank, L2, d2_full, free_idx)
    return out
