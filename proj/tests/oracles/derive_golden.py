#!/usr/bin/env python3
"""Independent oracles for the frozen golden values in tests/golden/golden.json.

Run from the repository root:  python3 tests/oracles/derive_golden.py
Nothing here shares code with the C++ library: normal forms use sympy or a
plain elimination written below, point counts use sympy polynomials over
brute-force enumeration, and the elliptic fragment is written out by hand.
"""

import itertools
import json
import pathlib

import sympy
from sympy import ZZ, Matrix
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

ROOT = pathlib.Path(__file__).resolve().parents[2]


def row_hnf(rows):
    """Row-style HNF: echelon, positive pivots, entries above a pivot reduced into [0, pivot), zero rows last."""
    m = [list(r) for r in rows]
    nrows, ncols = len(m), len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, nrows) if m[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[p] = m[p], m[r]
            done = True
            for i in range(r + 1, nrows):
                q = m[i][c] // m[r][c]
                m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                if m[i][c] != 0:
                    done = False
            if done:
                break
        if r < nrows and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-a for a in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                m[i] = [a - q * b for a, b in zip(m[i], m[r])]
            r += 1
    return m


def invariants(rows, ncols):
    """(torsion > 1, free rank) of Z^ncols / rowspan(rows)."""
    if not rows:
        return [], ncols
    dm = DomainMatrix.from_Matrix(Matrix(rows)).convert_to(ZZ)
    factors = [int(f) for f in invariant_factors(dm)]
    nonzero = [f for f in factors if f != 0]
    return [f for f in nonzero if f != 1], ncols - len(nonzero)


def inv_string(torsion, free):
    return "Z^%d" % free + "".join(" + Z/%d" % t for t in torsion)


def left_kernel(rows, cols):
    """Integer basis of {x : x * M[:, cols] == 0}, by unimodular row reduction of [M | I]."""
    n = len(rows)
    aug = [[rows[i][c] for c in cols] + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    k = len(cols)
    red = row_hnf(aug)
    return [row[k:] for row in red if all(v == 0 for v in row[:k])]


# -- normal forms ---------------------------------------------------------------

HNF_CASES = [
    [[2, 4], [6, 8]],
    [[3, 0], [0, 5]],
    [[0, 0, 4], [6, 9, 3], [2, 3, 1]],
    [[4, 6, 8], [2, 3, 4]],
    [[-5, 10, 0], [3, -6, 7], [1, 1, 1], [0, 0, 2]],
    [[12, 18, -6, 4], [8, 12, 10, 2], [-4, 0, 2, 6]],
]

SNF_CASES = HNF_CASES + [
    [[2, 0, 0], [0, 3, 0], [0, 0, 4]],
    [[6, 4], [4, 6]],
    [[1, 2, 3], [4, 5, 6], [7, 8, 9]],
    [[0, 0], [0, 0]],
]


# -- point counts ----------------------------------------------------------------

def parse_models(text):
    models = {}
    cur = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        if word == "model":
            cur = {"name": rest.strip(), "ambient": [], "eq": [], "open": []}
        elif word == "ambient":
            cur["ambient"] = [(b[0] == "P", int(b[1:])) for b in rest.split()]
        elif word in ("eq", "open"):
            cur[word].append(rest.strip())
        elif word == "end":
            models[cur["name"]] = cur
            cur = None
    return models


def block_points(projective, dim, q):
    if not projective:
        yield from itertools.product(range(q), repeat=dim)
        return
    for lead in range(dim + 1):
        for tail in itertools.product(range(q), repeat=dim - lead):
            yield (0,) * lead + (1,) + tail


def count(model, q):
    nvars = sum(d + 1 if p else d for p, d in model["ambient"])
    xs = sympy.symbols("x0:%d" % max(nvars, 1))
    env = {"x%d" % i: xs[i] for i in range(len(xs))}
    eqs = [sympy.Poly(sympy.sympify(e.replace("^", "**"), locals=env), *xs) for e in model["eq"]]
    opens = [sympy.Poly(sympy.sympify(e.replace("^", "**"), locals=env), *xs) for e in model["open"]]
    blocks = [list(block_points(p, d, q)) for p, d in model["ambient"]]
    n = 0
    for combo in itertools.product(*blocks):
        point = [v for part in combo for v in part] or [0]
        if any(e.eval(tuple(point)) % q for e in eqs):
            continue
        if opens and all(o.eval(tuple(point)) % q == 0 for o in opens):
            continue
        n += 1
    return n


BUILTIN_MODELS = """
model Q3split
ambient P4
eq x0*x1 + x2*x3 - x4^2
end
model Q3hyp
ambient P4
eq x0
eq x0*x1 + x2*x3 - x4^2
end
"""


# -- elliptic fragment -------------------------------------------------------------

def elliptic_fragment():
    """Classes and cut-and-paste relations of the link Q3 <- T -> P3 through C, C'."""
    dims = {
        "pt": 0, "C": 1, "C'": 1, "P1": 1, "A1": 1,
        "Q3nH": 2, "A2": 2, "P2": 2, "P1xC": 2, "P1xC'": 2, "A1xC": 2, "A1xC'": 2,
        "Q3": 3, "A3": 3, "P3": 3, "T": 3, "Q3-C": 3, "P3-C'": 3,
    }
    # total = open + closed
    rels = [
        ("Q3", "Q3-C", ["C"]),
        ("T", "Q3-C", ["P1xC"]),
        ("P3", "P3-C'", ["C'"]),
        ("T", "P3-C'", ["P1xC'"]),
        ("Q3", "A3", ["Q3nH"]),
        ("P3", "A3", ["P2"]),
        ("Q3nH", "A2", ["P1"]),
        ("P2", "A2", ["P1"]),
        ("P1", "A1", ["pt"]),
        ("P1xC", "A1xC", ["C"]),
        ("P1xC'", "A1xC'", ["C'"]),
    ]
    names = sorted(dims)
    col = {c: i for i, c in enumerate(names)}

    def row(r):
        v = [0] * len(names)
        total, open_, closed = r
        v[col[total]] += 1
        v[col[open_]] -= 1
        for c in closed:
            v[col[c]] -= 1
        return v

    upper_rows = [row(r) for r in rels]
    lower_names = [c for c in names if dims[c] <= 2]
    lower_rows = [row(r) for r in rels if all(dims[c] <= 2 for c in [r[0], r[1]] + r[2])]
    lower_cols = [col[c] for c in lower_names]
    upper_only = [col[c] for c in names if dims[c] == 3]

    up = invariants(upper_rows, len(names))
    lo = invariants([[r[c] for c in lower_cols] for r in lower_rows], len(lower_names))

    # Ker(iota) = (R_upper restricted to lower columns) / R_lower.
    combos = left_kernel(upper_rows, upper_only)
    k_vectors = []
    for x in combos:
        v = [sum(x[i] * upper_rows[i][c] for i in range(len(upper_rows))) for c in lower_cols]
        k_vectors.append(v)
    k_basis = [r for r in row_hnf(k_vectors) if any(r)]
    # Coordinates of lower relators in the basis of K.
    kb = Matrix(k_basis).T
    coords = []
    for r in lower_rows:
        v = Matrix([r[c] for c in lower_cols])
        sol, params = kb.gauss_jordan_solve(v)
        assert not params.free_symbols and kb * sol == v and all(s.is_integer for s in sol)
        coords.append([int(s) for s in sol])
    ker = invariants(coords, len(k_basis))
    return {"lower": inv_string(*lo), "upper": inv_string(*up), "kernel": inv_string(*ker)}


def main():
    golden = {"hnf": [], "snf": [], "counts": [], "elliptic_fragment": elliptic_fragment()}
    for m in HNF_CASES:
        golden["hnf"].append({"input": m, "output": row_hnf(m)})
    for m in SNF_CASES:
        t, f = invariants(m, len(m[0]))
        dm = DomainMatrix.from_Matrix(Matrix(m)).convert_to(ZZ)
        golden["snf"].append({"input": m, "diagonal": [int(x) for x in invariant_factors(dm)] +
                              [0] * (min(len(m), len(m[0])) - len(invariant_factors(dm))),
                              "torsion": t, "free_rank": f})
    models = parse_models(BUILTIN_MODELS)
    for path in ["data/models/standard.models", "data/models/plane.models"]:
        models.update(parse_models((ROOT / path).read_text()))
    for name in ["ptstd", "P1std", "P2std", "P3std", "Q3split", "Q3hyp", "BlP2pt", "P2minuspt"]:
        for q in (2, 3, 5):
            golden["counts"].append({"model": name, "q": q, "count": count(models[name], q)})
    out = ROOT / "tests" / "golden" / "golden.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(golden, indent=1) + "\n")
    print("wrote", out)


if __name__ == "__main__":
    main()
