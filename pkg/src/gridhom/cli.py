"""Command line front end.

Exit codes: 0 on success, 1 when a verification fails, 2 on input errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from gridhom import cdp, domainposet, spectra, strata
from gridhom.gridcore import GridDiagram, GridError, canonicalize, load_grid
from gridhom.gridcomplex import FlavorSpec, stable_homology, u_map
from gridhom.homalg import HomologyTable
from gridhom.signs import SignAssignment, build_sign_assignment, verify_axioms

_WORKER_STATE: dict = {}


def _worker_init(n, o_row, x_row):
    g = GridDiagram(n, tuple(o_row), tuple(x_row))
    _WORKER_STATE["g"] = g
    _WORKER_STATE["s"] = build_sign_assignment(g)


def _worker_slice(args):
    flavor, hat_markings, a2, cap = args
    g, s = _WORKER_STATE["g"], _WORKER_STATE["s"]
    spec = FlavorSpec.make(g, flavor, hat_markings if flavor == "hat" else None)
    if cap is None:
        table = stable_homology(g, s, spec, a2 if flavor == "plus_prime" else tuple(a2))
    else:
        from gridhom.gridcomplex import build_complex

        cx = build_complex(g, s, spec, a2 if flavor == "plus_prime" else tuple(a2), cap)
        table = HomologyTable({k: v for k, v in cx.homology().groups.items() if k <= cap - 2})
    return a2, table.groups


def _load(path: str) -> GridDiagram:
    try:
        return load_grid(path)
    except (OSError, GridError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2)


def _sign_assignment(g: GridDiagram, cache: str | None) -> SignAssignment:
    if cache and os.path.exists(cache):
        try:
            return SignAssignment.load(cache, g)
        except GridError:
            pass
    s = build_sign_assignment(g)
    if cache:
        s.dump(cache)
    return s


def _emit(args, obj, text_lines):
    if args.json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _table_obj(table: HomologyTable) -> dict:
    return {str(k): {"rank": r, "torsion": list(t)} for k, (r, t) in sorted(table.nonzero().items())}


def _write_csvs(outdir: str, name: str, tables: dict) -> None:
    os.makedirs(outdir, exist_ok=True)
    for a2, groups in sorted(tables.items()):
        label = a2 if isinstance(a2, int) else "_".join(str(v) for v in a2)
        path = os.path.join(outdir, f"{name}_A2_{label}.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["maslov", "rank", "torsion"])
            for k, (r, t) in sorted(groups.items()):
                writer.writerow([k, r, ";".join(map(str, t))])


def cmd_validate(args) -> int:
    try:
        g = load_grid(args.grid)
    except (OSError, GridError, ValueError) as exc:
        print(f"invalid grid: {exc}", file=sys.stderr)
        return 2
    obj = {
        "n": g.n,
        "o_row": [r + 1 for r in g.o_row],
        "x_row": [r + 1 for r in g.x_row],
        "components": g.num_components,
        "canonical": g.is_canonical,
    }
    _emit(args, obj, [f"valid grid, n={g.n}, components={g.num_components}"])
    return 0


def cmd_generators(args) -> int:
    g = _load(args.grid)
    rows = []
    for x in g.generators():
        rows.append(
            {
                "sigma": [v + 1 for v in x.sigma],
                "maslov": x.maslov,
                "alexander2": list(x.alexander2),
            }
        )
    _emit(
        args,
        {"count": len(rows), "generators": rows},
        [f"{len(rows)} generators"]
        + [f"  sigma={r['sigma']} M={r['maslov']} 2A={r['alexander2']}" for r in rows[:40]],
    )
    return 0


def _alexander_values(args, g: GridDiagram, flavor: str):
    if args.alexander:
        vals = []
        for spec in args.alexander:
            parts = tuple(int(v) for v in spec.split(","))
            if flavor == "plus_prime":
                vals.append(parts[0])
            else:
                vals.append(parts)
        return vals
    gen_vals = [x.alexander2 for x in g.generators()]
    if flavor == "plus_prime" or g.num_components == 1:
        lo = min(v[0] for v in gen_vals)
        hi = max(v[0] for v in gen_vals)
        rng = range(lo, hi + 1, 2)
        return [a2 if flavor == "plus_prime" else (a2,) for a2 in rng]
    print("error: links need explicit --alexander slices", file=sys.stderr)
    raise SystemExit(2)


def cmd_homology(args) -> int:
    g = _load(args.grid)
    flavor = args.flavor.replace("-", "_")
    values = _alexander_values(args, g, flavor)
    cap = args.cap
    tables: dict = {}
    if args.jobs and args.jobs > 1:
        spec = FlavorSpec.make(g, flavor)
        hats = spec.hat_markings if flavor == "hat" else None
        with ProcessPoolExecutor(
            max_workers=args.jobs,
            initializer=_worker_init,
            initargs=(g.n, g.o_row, g.x_row),
        ) as pool:
            for a2, groups in pool.map(
                _worker_slice, [(flavor, hats, a2, cap) for a2 in values]
            ):
                tables[a2 if isinstance(a2, int) else tuple(a2)] = groups
    else:
        s = _sign_assignment(g, args.sign_cache)
        spec = FlavorSpec.make(g, flavor)
        for a2 in values:
            if cap is None:
                t = stable_homology(g, s, spec, a2)
            else:
                from gridhom.gridcomplex import build_complex

                cx = build_complex(g, s, spec, a2, cap)
                t = HomologyTable(
                    {k: v for k, v in cx.homology().groups.items() if k <= cap - 2}
                )
            tables[a2 if isinstance(a2, int) else tuple(a2)] = t.groups
    obj = {
        "flavor": args.flavor,
        "tables": {str(k): _table_obj(HomologyTable(v)) for k, v in sorted(tables.items())},
    }
    lines = [f"{args.flavor} homology of {args.grid}"]
    for a2, groups in sorted(tables.items()):
        nz = HomologyTable(groups).nonzero()
        lines.append(f"  2A={a2}: " + (str(nz) if nz else "0"))
    _emit(args, obj, lines)
    if args.out:
        _write_csvs(args.out, args.flavor, tables)
    return 0


def cmd_u_map(args) -> int:
    g = _load(args.grid)
    s = _sign_assignment(g, args.sign_cache)
    spec = FlavorSpec.make(g, "plus")
    a2 = tuple(int(v) for v in args.alexander.split(","))
    res = u_map(g, s, spec, args.marking, a2, args.cap)
    gradings = sorted(res.matrices)
    obj = {
        "marking": args.marking,
        "alexander2": list(a2),
        "matrices": {str(k): res.matrices[k] for k in gradings},
        "isomorphism": all(res.is_isomorphism_at(k) for k in gradings) if gradings else True,
    }
    _emit(
        args,
        obj,
        [f"U_{args.marking} on slice 2A={a2}"]
        + [f"  gr {k}: {res.matrices[k]}" for k in gradings]
        + [f"  isomorphism: {obj['isomorphism']}"],
    )
    return 0


def cmd_signs_verify(args) -> int:
    g = _load(args.grid)
    s = _sign_assignment(g, args.sign_cache)
    rep = verify_axioms(g, s)
    obj = {
        "checked": rep.checked,
        "shapes": rep.shape_counts,
        "violations": [str(v) for v in rep.violations],
    }
    _emit(
        args,
        obj,
        [f"checked {rep.checked} index-2 domains", f"shape census: {rep.shape_counts}"]
        + ([f"VIOLATIONS: {len(rep.violations)}"] if rep.violations else ["all axioms hold"]),
    )
    return 0 if rep.ok else 1


def cmd_poset_verify(args) -> int:
    g = _load(args.grid)
    gens = list(g.generators())
    mismatches = 0
    for x in gens:
        for y in gens:
            if domainposet.generator_leq(g, y, x) != domainposet.bruhat_leq(x.sigma, y.sigma):
                mismatches += 1
    import itertools as it

    bound = args.bound
    interval_failures = 0
    checks = 0
    for y in gens:
        for a in it.product(range(bound + 1), repeat=g.n - 1):
            for b in it.product(range(bound + 1), repeat=g.n - 1):
                m = domainposet.g_minimum(g, a, b, y)
                G = domainposet.g_set(g, a, b, y)
                I = domainposet.interval(g, m, g.generator(tuple(range(g.n))))
                checks += 1
                if G != I:
                    interval_failures += 1
    obj = {
        "bruhat_mismatches": mismatches,
        "interval_checks": checks,
        "interval_failures": interval_failures,
    }
    ok = mismatches == 0 and interval_failures == 0
    _emit(
        args,
        obj,
        [
            f"generator order vs opposite Bruhat: {'OK' if mismatches == 0 else f'{mismatches} mismatches'}",
            f"interval law on {checks} triples: {'OK' if interval_failures == 0 else f'{interval_failures} failures'}",
        ],
    )
    return 0 if ok else 1


def _default_seeds(g: GridDiagram):
    x_id = g.generator(tuple(range(g.n)))
    other = g.generator(tuple(range(1, g.n)) + (0,))
    zero_n, zero_lam = cdp.trivial_decoration(g)
    row_j = next(j for j in range(g.n) if g.o_row[j] != g.n - 1)
    col_j = next(j for j in range(g.n - 1))
    seeds = [
        cdp.PartitionedDomain(g.marking_annulus("H", row_j, x_id), zero_n, zero_lam),
        cdp.PartitionedDomain(g.marking_annulus("V", col_j, other), zero_n, zero_lam),
        cdp.PartitionedDomain(
            g.trivial_domain(x_id),
            (2,) + (0,) * (g.n - 1),
            ((1, 1),) + ((),) * (g.n - 1),
        ),
        cdp.PartitionedDomain(
            g.trivial_domain(other),
            (0, 2) + (0,) * (g.n - 2),
            ((), (2,)) + ((),) * (g.n - 2),
        ),
    ]
    if g.n >= 2:
        infos = g.rectangle_infos(x_id.sigma)
        if infos:
            rect = infos[0].domain(g)
            seeds.append(
                cdp.PartitionedDomain(
                    rect, (0, 1) + (0,) * (g.n - 2), ((), (1,)) + ((),) * (g.n - 2)
                )
            )
    return seeds


def cmd_cdp_verify(args) -> int:
    if args.grid:
        g = _load(args.grid)
    else:
        n = args.n
        g = canonicalize(GridDiagram(n, tuple((i + 1) % n for i in range(n)), tuple(range(n))))
    s = build_sign_assignment(g)
    cc = cdp.ClosureComplex.build(s, _default_seeds(g))
    ledger = cc.identity_ledger()
    d2 = cc.complex.check_d_squared()
    obj = {"closure_size": len(cc.elements), "d_squared_zero": d2, "identities": ledger}
    ok = d2 and all(ledger.values())
    _emit(
        args,
        obj,
        [f"closure of {len(cc.seeds)} seeds: {len(cc.elements)} triples", f"d^2 = 0: {d2}"]
        + [f"  {name}: {'OK' if good else 'FAIL'}" for name, good in ledger.items()],
    )
    return 0 if ok else 1


def _parse_seed(g: GridDiagram, text: str) -> cdp.PartitionedDomain:
    data = json.loads(text)
    x = g.generator(tuple(v - 1 for v in data.get("from", list(range(1, g.n + 1)))))
    dom_spec = data.get("domain", "trivial")
    if dom_spec == "trivial":
        dom = g.trivial_domain(x)
    elif dom_spec[0] in "HV":
        dom = g.marking_annulus(dom_spec[0], int(dom_spec[1:]), x)
    else:
        raise ValueError(f"unknown domain spec {dom_spec!r}")
    n_vec = tuple(data.get("n_vec", [0] * g.n))
    lambdas = tuple(tuple(lam) for lam in data.get("lambdas", [[]] * g.n))
    return cdp.PartitionedDomain(dom, n_vec, lambdas)


def cmd_strata(args) -> int:
    g = _load(args.grid)
    s = build_sign_assignment(g)
    if args.seed is None:
        row_j = next(j for j in range(g.n) if g.o_row[j] != g.n - 1)
        args.seed = json.dumps({"domain": f"H{row_j}"})
    seed = _parse_seed(g, args.seed)
    descs = strata.enumerate_strata(s, seed.domain, seed.n_vec, seed.lambdas, args.max_codim)
    obj = {"count": len(descs), "strata": []}
    lines = [f"{len(descs)} strata up to codim {args.max_codim}"]
    for desc in descs:
        entry = {
            "codim": desc.codim,
            "pieces": [
                {
                    "from": [v + 1 for v in p.domain.from_sigma],
                    "to": [v + 1 for v in p.domain.to_sigma],
                    "mu": p.domain.maslov_index(),
                    "rows_out": list(p.e_rows),
                    "cols_out": list(p.f_cols),
                    "n_vec": list(p.n_vec),
                    "lambdas": [list(l) for l in p.lambdas],
                }
                for p in desc.pieces
            ],
        }
        if desc.codim == 1:
            entry["type"] = strata.classify_codim1(desc)
        obj["strata"].append(entry)
        label = entry.get("type", "")
        lines.append(f"  codim {desc.codim} {label}: r={desc.r}")
    _emit(args, obj, lines)
    return 0


def cmd_zn(args) -> int:
    sts = strata.zn_strata(args.n)
    edges = []
    if args.edges:
        for a in sts:
            for b in sts:
                if a != b and strata.zn_leq(a, b):
                    edges.append((a, b))
    obj = {
        "count": len(sts),
        "strata": [
            {"p": [st.p_minus, st.p_zero, st.p_plus], "lambda": list(st.lam), "dim": st.dim}
            for st in sts
        ],
    }
    lines = [f"Z_{args.n}: {len(sts)} strata"]
    for st in sts:
        lines.append(f"  Z({st.p_minus},{st.p_zero},{st.p_plus}; {st.lam}) dim {st.dim}")
    if args.edges:
        obj["closure_pairs"] = len(edges)
        lines.append(f"closure pairs: {len(edges)}")
    if args.dot:
        dot = ["digraph zn {"]
        for a, b in edges:
            dot.append(f'  "{a.p_minus},{a.p_zero},{a.p_plus};{a.lam}" -> "{b.p_minus},{b.p_zero},{b.p_plus};{b.lam}";')
        dot.append("}")
        with open(args.dot, "w") as fh:
            fh.write("\n".join(dot))
        lines.append(f"wrote {args.dot}")
    _emit(args, obj, lines)
    return 0


def cmd_permutohedron(args) -> int:
    n = args.n
    fs = strata.facets(n)
    coherent = strata.check_facet_coherence(n) if n <= 6 else None
    halfspaces = strata.check_half_space_description(n) if n <= 6 else None
    obj = {
        "n": n,
        "facets": len(fs),
        "expected_facets": 2**n - 2,
        "coherent": coherent,
        "half_spaces_ok": halfspaces,
    }
    ok = len(fs) == 2**n - 2 and coherent is not False and halfspaces is not False
    _emit(
        args,
        obj,
        [
            f"Pi_{n}: {len(fs)} facets (expected {2**n - 2})",
            f"product identifications coherent: {coherent}",
            f"half-space description: {halfspaces}",
        ],
    )
    return 0 if ok else 1


def cmd_spectrum(args) -> int:
    g = _load(args.grid)
    s = _sign_assignment(g, args.sign_cache)
    rng = None
    if args.alexander:
        rng = [int(v) for v in args.alexander]
    report = spectra.spectrum_report(g, s, rng)
    obj = spectra.report_to_json_obj(report)
    lines = [f"spectrum report for {args.grid}"]
    for a2, rep in sorted(report.items()):
        a_label = a2 // 2 if a2 % 2 == 0 else f"{a2}/2"
        for flavor in rep.wedges:
            lines.append(f"  A={a_label} {flavor}: {rep.wedges[flavor].describe()}")
        for m, data in rep.u_maps.items():
            lines.append(f"  A={a_label} U_{m} iso: {data['iso']}")
    _emit(args, obj, lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gridhom", description=__doc__)
    p.add_argument("--json", action="store_true", help="machine readable output")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, help="check a grid file")
    sp.add_argument("grid")

    sp = add("generators", cmd_generators, help="list generators with gradings")
    sp.add_argument("grid")

    sp = add("homology", cmd_homology, help="grid homology tables")
    sp.add_argument("grid")
    sp.add_argument("--flavor", default="hat", choices=["plus", "hat", "tilde", "plus-prime"])
    sp.add_argument("--alexander", action="append", help="doubled Alexander slice, comma separated per component (use --alexander=-2,0 for negatives; repeatable)")
    sp.add_argument("--cap", type=int, default=None, help="Maslov cap (needed for plus-prime on links)")
    sp.add_argument("--jobs", type=int, default=1, help="parallel slice workers")
    sp.add_argument("--out", help="directory for per-grading CSVs")
    sp.add_argument("--sign-cache", help="JSON file caching the sign table")

    sp = add("u-map", cmd_u_map, help="the U_i map on homology")
    sp.add_argument("grid")
    sp.add_argument("--marking", type=int, default=0)
    sp.add_argument("--alexander", required=True, help="doubled source slice, comma separated")
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--sign-cache")

    sp = add("signs-verify", cmd_signs_verify, help="verify the sign axioms exhaustively")
    sp.add_argument("grid")
    sp.add_argument("--sign-cache")

    sp = add("poset-verify", cmd_poset_verify, help="generator order vs Bruhat; interval law")
    sp.add_argument("grid")
    sp.add_argument("--bound", type=int, default=1, help="max entry of the (a, b) vectors")

    sp = add("cdp-verify", cmd_cdp_verify, help="d^2=0 and the nine sign identities")
    sp.add_argument("--grid")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--seeds", default="default", choices=["default"])

    sp = add("strata", cmd_strata, help="enumerate moduli strata of a configuration")
    sp.add_argument("grid")
    sp.add_argument("--seed", default=None, help="JSON configuration, e.g. {\"domain\": \"H0\"}")
    sp.add_argument("--max-codim", type=int, default=2)

    sp = add("zn", cmd_zn, help="the stratification poset of Sym^N(C)/R")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--edges", action="store_true")
    sp.add_argument("--dot", help="write the closure order as DOT")

    sp = add("permutohedron", cmd_permutohedron, help="face lattice checks")
    sp.add_argument("--n", type=int, required=True)

    sp = add("spectrum", cmd_spectrum, help="per-Alexander wedge report")
    sp.add_argument("grid")
    sp.add_argument("--alexander", action="append", help="doubled grading to include (repeatable)")
    sp.add_argument("--sign-cache")

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit:
        raise
    except GridError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
