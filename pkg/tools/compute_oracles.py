#!/usr/bin/env python3
"""Standalone brute-force oracles, intentionally independent of the package.

Works directly on hard-coded multiplication tables and writes
src/relmon/data/oracles.json.  Re-run only when the corpus definitions
change; the committed file is the ground truth the test suite compares
against.
"""

import itertools
import json
from pathlib import Path

BZ2 = {("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "s", ("s", "s"): "e"}
BM3 = {}
for x in ("e", "a", "b"):
    BM3[(x, "e")] = x
    BM3[(x, "a")] = "a"
    BM3[(x, "b")] = "b"


def monoid_elements(table):
    return sorted({a for (a, _) in table})


def relative_monads_over_point(table):
    """(eta, dagger) pairs over the one-object delooping, root = the point.

    Laws: dagger(eta) = unit, eta.dagger(f) = f, and
    dagger(f.dagger(g)) = dagger(f).dagger(g) with . read diagrammatically.
    """

    els = monoid_elements(table)
    unit = next(e for e in els if all(table[(e, a)] == a == table[(a, e)] for a in els))
    found = []
    for eta in els:
        for values in itertools.product(els, repeat=len(els)):
            dag = dict(zip(els, values))
            if dag[eta] != unit:
                continue
            if any(table[(eta, dag[f])] != f for f in els):
                continue
            if any(dag[table[(f, dag[g])]] != table[(dag[f], dag[g])]
                   for f in els for g in els):
                continue
            found.append({"eta": eta, "dagger": dag})
    return found


def algebras_over_point(table, monad):
    """alpha maps for a point-rooted monad: unit + compatibility laws."""

    els = monoid_elements(table)
    eta, dag = monad["eta"], monad["dagger"]
    found = []
    for values in itertools.product(els, repeat=len(els)):
        alpha = dict(zip(els, values))
        if any(table[(eta, alpha[f])] != f for f in els):
            continue
        if any(alpha[table[(g, alpha[f])]] != table[(dag[g], alpha[f])]
               for g in els for f in els):
            continue
        found.append(alpha)
    return found


def natural_endo_transformations(table):
    """Components v with v central: v.m = m.v for all m (identity functor)."""

    els = monoid_elements(table)
    return [v for v in els if all(table[(v, m)] == table[(m, v)] for m in els)]


def hom_graded_cells(table):
    """Maps phi with phi(m.u) = m.phi(u) and phi(u.k) = phi(u).k."""

    els = monoid_elements(table)
    out = []
    for values in itertools.product(els, repeat=len(els)):
        phi = dict(zip(els, values))
        ok = all(
            phi[table[(m, u)]] == table[(m, phi[u])]
            and phi[table[(u, k)]] == table[(phi[u], k)]
            for m in els for u in els for k in els
        )
        if ok:
            out.append(phi)
    return out


def nerve_module_maps(table):
    """phi with phi(v.u) = v.phi(u): transformations of the point nerve."""

    els = monoid_elements(table)
    out = []
    for values in itertools.product(els, repeat=len(els)):
        phi = dict(zip(els, values))
        if all(phi[table[(v, u)]] == table[(v, phi[u])] for v in els for u in els):
            out.append(phi)
    return out


def main():
    oracles = {}
    for name, table in (("bz2", BZ2), ("bm3", BM3)):
        monads = relative_monads_over_point(table)
        oracles[f"point_{name}"] = {
            "relative_monads": len(monads),
            "monad_etas": sorted(m["eta"] for m in monads),
            "algebras_per_monad": {
                m["eta"]: len(algebras_over_point(table, m)) for m in monads
            },
        }
    oracles["nat_trans_bz2_identity"] = len(natural_endo_transformations(BZ2))
    oracles["nat_trans_bm3_identity"] = len(natural_endo_transformations(BM3))
    oracles["graded_cells_bz2_hom_n1"] = len(hom_graded_cells(BZ2))
    oracles["nerve_module_maps_bz2"] = len(nerve_module_maps(BZ2))
    oracles["nerve_module_maps_bm3"] = len(nerve_module_maps(BM3))

    out = Path(__file__).resolve().parents[1] / "src" / "relmon" / "data" / "oracles.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(oracles, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    print(json.dumps(oracles, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
