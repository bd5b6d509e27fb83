"""Independent oracle for the derived reference values used by the test suite.

Everything here is rebuilt from scratch with sympy (exact rationals,
symbolic unknowns, ``linear_eq_to_matrix`` and ``Matrix.rank``).  It does
not import ``alglab``.  Run it to regenerate ``oracle_values.json``:

    python3 tests/oracles/compute_oracles.py

The tests only read the frozen JSON, so sympy is not a test dependency.
"""

from __future__ import annotations

import itertools
import json
from pathlib import Path

import sympy as sp

OUT = Path(__file__).with_name("oracle_values.json")


# -- Lie algebras as bracket tables ----------------------------------------

def table(n, brackets):
    c = [[[sp.Integer(0)] * n for _ in range(n)] for _ in range(n)]
    for (i, j), v in brackets.items():
        for k, x in enumerate(v):
            c[i][j][k] = sp.Rational(x)
            c[j][i][k] = -sp.Rational(x)
    return c


SL2 = table(3, {(0, 1): [0, 2, 0], (0, 2): [0, 0, -2], (1, 2): [1, 0, 0]})  # h, e, f
SO3 = table(3, {(0, 1): [0, 0, 1], (1, 2): [1, 0, 0], (0, 2): [0, -1, 0]})
HEIS = table(3, {(0, 1): [0, 0, 1]})  # x, y, z
AB1 = table(1, {})


def ad(c, i):
    n = len(c)
    return sp.Matrix(n, n, lambda k, j: c[i][j][k])


def adjoint(c):
    return [ad(c, i) for i in range(len(c))]


def trivial(c, m):
    return [sp.zeros(m, m) for _ in range(len(c))]


def wedge2(action):
    """Induced action on the exterior square, basis e_a ^ e_b with a < b."""
    m = action[0].rows
    pairs = list(itertools.combinations(range(m), 2))
    idx = {p: k for k, p in enumerate(pairs)}

    def put(vec, a, b, coef):
        if a == b:
            return
        if a < b:
            vec[idx[(a, b)]] += coef
        else:
            vec[idx[(b, a)]] -= coef

    out = []
    for X in action:
        M = sp.zeros(len(pairs), len(pairs))
        for col, (a, b) in enumerate(pairs):
            vec = [sp.Integer(0)] * len(pairs)
            for k in range(m):
                put(vec, k, b, X[k, a])
                put(vec, a, k, X[k, b])
            for r, v in enumerate(vec):
                M[r, col] = v
        out.append(M)
    return out


def so3_standard():
    # L_i v = e_i x v in the basis with [e_i, e_j] = eps_ijk e_k
    eps = lambda i, j, k: sp.LeviCivita(i, j, k)
    return [sp.Matrix(3, 3, lambda r, s: eps(i, s, r)) for i in range(3)]


# -- Chevalley-Eilenberg in degrees 0 and 1 --------------------------------

def ce_h0_h1(c, action):
    n, m = len(c), action[0].rows if action else 0
    # D0: v -> (u_i . v)_i
    d0 = sp.Matrix.vstack(*action) if n else sp.zeros(0, m)
    # D1 on delta (n columns of V): (D delta)(u_i, u_j) = u_i.delta_j - u_j.delta_i - delta([u_i,u_j])
    syms = sp.symbols(f"d0:{n * m}")
    delta = [sp.Matrix(syms[i * m:(i + 1) * m]) for i in range(n)]
    eqs = []
    for i, j in itertools.combinations(range(n), 2):
        br = sum((c[i][j][k] * delta[k] for k in range(n)), sp.zeros(m, 1))
        eqs.extend(list(action[i] * delta[j] - action[j] * delta[i] - br))
    eqs = [e for e in eqs if e != 0]
    rank1 = sp.linear_eq_to_matrix(eqs, syms)[0].rank() if eqs else 0
    z1 = n * m - rank1
    b1 = d0.rank()
    h0 = m - b1
    return h0, z1 - b1, z1, b1


# -- local systems on presentation complexes ---------------------------------

def word_value(edges, word, T, theta, m):
    """Fox-calculus value of a crossed homomorphism along a word (read left to right)."""
    acc = sp.zeros(m, 1)
    for step in word:
        sign, e = (1 if step[0] == "+" else -1), int(step[1:])
        if sign > 0:
            acc = T[e] * acc + theta[e]
        else:
            acc = T[e].inv() * (acc - theta[e])
    return acc


def local_h(nv, edges, cells, T, m):
    """(h0, h1) of the cellular complex with local coefficients."""
    mus = [sp.Matrix(sp.symbols(f"mu{x}_0:{m}")) for x in range(nv)]
    musyms = [s for mu in mus for s in mu]
    d0_rows = []
    for e, (a, b) in enumerate(edges):
        d0_rows.extend(list(T[e] * mus[a] - mus[b]))
    d0_rows = [r for r in d0_rows if r != 0]
    rank0 = sp.linear_eq_to_matrix(d0_rows, musyms)[0].rank() if d0_rows and musyms else 0
    ths = [sp.Matrix(sp.symbols(f"th{e}_0:{m}")) for e in range(len(edges))]
    thsyms = [s for t in ths for s in t]
    rows = []
    for w in cells:
        rows.extend(list(word_value(edges, w, T, ths, m)))
    rows = [r for r in rows if r != 0]
    rank1 = sp.linear_eq_to_matrix(rows, thsyms)[0].rank() if rows and thsyms else 0
    h0 = nv * m - rank0
    h1 = len(edges) * m - rank1 - rank0
    return h0, h1


# -- mixed cochain complex of a discrete algebroid model --------------------

def algebroid_dims(nv, edges, cells, c, action, maps, x=0):
    """h1 and dim Ker(localization at x) for a model with the same fiber at every vertex.

    ``maps`` is a list of (A_e, T_e).  Unknowns: delta_v (n vectors in V per
    vertex) and theta_e in V.  Equations are written symbolically.
    """
    n, m = len(c), action[0].rows
    delta = [[sp.Matrix(sp.symbols(f"dl{v}_{i}_0:{m}")) for i in range(n)] for v in range(nv)]
    theta = [sp.Matrix(sp.symbols(f"tt{e}_0:{m}")) for e in range(len(edges))]
    unknowns = [s for dv in delta for col in dv for s in col] + [s for t in theta for s in t]
    N = len(unknowns)

    def rho(vec_u):
        return sum((vec_u[k] * action[k] for k in range(n)), sp.zeros(m, m))

    eqs = []
    for v in range(nv):
        d = delta[v]
        for i, j in itertools.combinations(range(n), 2):
            br = sum((c[i][j][k] * d[k] for k in range(n)), sp.zeros(m, 1))
            eqs.extend(list(action[i] * d[j] - action[j] * d[i] - br))
    for e, (a, b) in enumerate(edges):
        A, T = maps[e]
        for i in range(n):
            Au = A[:, i]
            dy_Au = sum((Au[j] * delta[b][j] for j in range(n)), sp.zeros(m, 1))
            eqs.extend(list(T * delta[a][i] - dy_Au - rho(Au) * theta[e]))
    Ts = [T for _, T in maps]
    for w in cells:
        eqs.extend(list(word_value(edges, w, Ts, theta, m)))
    eqs = [q for q in eqs if q != 0]
    M = sp.linear_eq_to_matrix(eqs, unknowns)[0] if eqs else sp.zeros(0, N)
    z1 = N - M.rank()

    mus = [sp.Matrix(sp.symbols(f"nu{v}_0:{m}")) for v in range(nv)]
    musyms = [s for mu in mus for s in mu]
    cob = []
    for v in range(nv):
        for i in range(n):
            cob.extend(list(action[i] * mus[v]))
    for e, (a, b) in enumerate(edges):
        cob.extend(list(Ts[e] * mus[a] - mus[b]))
    B = sp.linear_eq_to_matrix(cob, musyms)[0] if musyms else sp.zeros(N, 0)
    b1 = B.rank()

    # cocycles whose delta_x equals D0 of some nu: solve jointly, then drop nu with D0 nu = 0
    nu = sp.Matrix(sp.symbols(f"kk0:{m}"))
    extra = []
    for i in range(n):
        extra.extend(list(delta[x][i] - action[i] * nu))
    allsyms = unknowns + list(nu)
    M2 = sp.linear_eq_to_matrix(eqs + extra, allsyms)[0]
    sol = len(allsyms) - M2.rank()
    v0 = m - (sp.Matrix.vstack(*action).rank() if n else 0)
    ker_cocycles = sol - v0
    return {"z1": z1, "b1": b1, "h1": z1 - b1, "ker": ker_cocycles - b1, "v0": v0}


def invariant_split(action):
    """Basis change P = [V0 basis | complement] and the blocks of the action and transports."""
    m = action[0].rows
    stack = sp.Matrix.vstack(*action)
    v0 = stack.nullspace()
    cols = list(v0)
    for k in range(m):
        e = sp.zeros(m, 1)
        e[k] = 1
        if sp.Matrix.hstack(*(cols + [e])).rank() > len(cols):
            cols.append(e)
    return sp.Matrix.hstack(*cols), len(v0)


def les_dims(nv, edges, cells, c, action, maps):
    P, k = invariant_split(action)
    Pi = P.inv()
    m = action[0].rows
    act_new = [Pi * X * P for X in action]
    maps_new = [(A, Pi * T * P) for A, T in maps]
    sub = lambda M, r0, r1: M[r0:r1, r0:r1]
    f0 = [sub(X, 0, k) for X in act_new]
    fb = [sub(X, k, m) for X in act_new]
    out = {}
    if k:
        out["h1_f0"] = algebroid_dims(nv, edges, cells, c, f0, [(A, sub(T, 0, k)) for A, T in maps_new])["h1"]
    else:
        out["h1_f0"] = 0
    out["h1_f"] = algebroid_dims(nv, edges, cells, c, action, maps)["h1"]
    if m - k:
        out["h1_fbar"] = algebroid_dims(nv, edges, cells, c, fb, [(A, sub(T, k, m)) for A, T in maps_new])["h1"]
    else:
        out["h1_fbar"] = 0
    # H0 of the quotient system: flat sections with values in the fiber invariants
    if m - k:
        mus = [sp.Matrix(sp.symbols(f"q{v}_0:{m - k}")) for v in range(nv)]
        syms = [s for mu in mus for s in mu]
        eqs = []
        for v in range(nv):
            for X in fb:
                eqs.extend(list(X * mus[v]))
        for e, (a, b) in enumerate(edges):
            eqs.extend(list(sub(maps_new[e][1], k, m) * mus[a] - mus[b]))
        eqs = [q for q in eqs if q != 0]
        r = sp.linear_eq_to_matrix(eqs, syms)[0].rank() if eqs else 0
        out["h0_fbar"] = len(syms) - r
    else:
        out["h0_fbar"] = 0
    return out


# -- exterior algebra for the bialgebra checks -------------------------------

def wedge_terms(*vecs):
    """Product of basis-index dicts {tuple: coef} in the exterior algebra."""
    out = {(): sp.Integer(1)}
    for v in vecs:
        new = {}
        for t, a in out.items():
            for (i,), b in v.items():
                if i in t:
                    continue
                seq = t + (i,)
                perm = sorted(range(len(seq)), key=lambda p: seq[p])
                sign = sp.combinatorics.Permutation(perm).signature()
                key = tuple(sorted(seq))
                new[key] = new.get(key, 0) + sign * a * b
        out = new
    return {k: v for k, v in out.items() if v != 0}


def lie(c, i, j):
    return {(k,): c[i][j][k] for k in range(len(c)) if c[i][j][k] != 0}


def schouten_bivectors(c, p, q):
    """[a^b, c^d] expanded with the graded biderivation rule; p, q lists of (a, b, coef)."""
    out = {}
    for a, b, s in p:
        for cc, d, t in q:
            u, v = [a, b], [cc, d]
            for i in range(2):
                for j in range(2):
                    sign = (-1) ** (i + j)
                    br = lie(c, u[i], v[j])
                    if not br:
                        continue
                    rest = [{(u[1 - i],): 1}, {(v[1 - j],): 1}]
                    for key, val in wedge_terms(br, *rest).items():
                        out[key] = out.get(key, 0) + sign * s * t * val
    return {k: v for k, v in out.items() if v != 0}


# -- assemble ---------------------------------------------------------------

def main():
    I1 = sp.eye(1)
    I3 = sp.eye(3)
    vals = {}

    # exact linear algebra
    R, piv = sp.Matrix([[1, 2], [3, 4]]).rref()
    vals["rref_1234"] = {"rref": [[str(x) for x in R.row(i)] for i in range(2)], "pivots": list(piv)}
    ns = sp.Matrix([[1, 1, 0]]).nullspace()
    vals["kernel_110"] = {"dim": len(ns), "span": [[str(x) for x in v] for v in ns]}
    M = sp.Matrix([[1, 0], [0, 0]])
    # preimage of span{(1,0)}: v with M v in span{(1,0)}, i.e. second coordinate of M v is 0
    vals["preimage_example_dim"] = 2 - sp.Matrix([[0, 0]]).rank()

    # Lie algebra facts
    vals["sl2_ad_h_eigenvalues"] = sorted(int(k) for k in ad(SL2, 0).eigenvals())
    heis_x = ad(HEIS, 0)
    vals["heis_ad_x_nonzero"] = [[i, j, str(heis_x[i, j])] for i in range(3) for j in range(3) if heis_x[i, j] != 0]
    killing = lambda c: sp.Matrix(len(c), len(c), lambda i, j: (ad(c, i) * ad(c, j)).trace())
    vals["killing_rank"] = {"sl2": killing(SL2).rank(), "heisenberg": killing(HEIS).rank(), "so3": killing(SO3).rank()}
    inv_dim = lambda act: act[0].rows - sp.Matrix.vstack(*act).rank()
    vals["invariants_dim"] = {
        "sl2_adjoint": inv_dim(adjoint(SL2)),
        "heisenberg_adjoint": inv_dim(adjoint(HEIS)),
        "sl2_wedge2_adjoint": inv_dim(wedge2(adjoint(SL2))),
    }
    heis_null = sp.Matrix.vstack(*adjoint(HEIS)).nullspace()
    vals["heisenberg_center"] = [[str(x) for x in v] for v in heis_null]

    # Chevalley-Eilenberg
    ce = {}
    for name, c, act in [
        ("sl2_adjoint", SL2, adjoint(SL2)),
        ("sl2_wedge2_adjoint", SL2, wedge2(adjoint(SL2))),
        ("so3_standard", SO3, so3_standard()),
        ("so3_adjoint", SO3, adjoint(SO3)),
        ("heisenberg_trivial1", HEIS, trivial(HEIS, 1)),
        ("heisenberg_adjoint", HEIS, adjoint(HEIS)),
        ("abelian1_trivial1", AB1, trivial(AB1, 1)),
    ]:
        h0, h1, z1, b1 = ce_h0_h1(c, act)
        ce[name] = {"h0": h0, "h1": h1, "z1": z1, "b1": b1}
    vals["ce"] = ce

    # local systems
    torus = (1, [(0, 0), (0, 0)], [["+0", "+1", "-0", "-1"]])
    swap = sp.Matrix([[0, 1], [1, 0]])
    vals["local"] = {
        "circle_id_Q1": local_h(1, [(0, 0)], [], [I1], 1),
        "circle_2_Q1": local_h(1, [(0, 0)], [], [2 * I1], 1),
        "circle_id_Q2": local_h(1, [(0, 0)], [], [sp.eye(2)], 2),
        "circle_swap_Q2": local_h(1, [(0, 0)], [], [swap], 2),
        "torus_trivial_Q1": local_h(*torus, [I1, I1], 1),
        "point_Q3": local_h(1, [], [], [], 3),
        "two_vertex_circle_Q1": local_h(2, [(0, 1), (1, 0)], [], [I1, I1], 1),
        "klein_swap_Q2": local_h(1, [(0, 0), (0, 0)], [["+0", "+1", "-0", "+1"]], [swap, sp.eye(2)], 2),
    }

    # algebroid models
    triv = trivial(AB1, 1)
    alg = {
        "circle_trivial": algebroid_dims(1, [(0, 0)], [], AB1, triv, [(I1, I1)]),
        "circle_scaled": algebroid_dims(1, [(0, 0)], [], AB1, triv, [(I1, 2 * I1)]),
        "point_sl2_adjoint": algebroid_dims(1, [], [], SL2, adjoint(SL2), []),
        "torus_sl2_adjoint": algebroid_dims(*torus, SL2, adjoint(SL2), [(I3, I3), (I3, I3)]),
        "torus_trivial": algebroid_dims(*torus, AB1, triv, [(I1, I1), (I1, I1)]),
        "two_vertex_circle_trivial": algebroid_dims(2, [(0, 1), (1, 0)], [], AB1, triv, [(I1, I1), (I1, I1)]),
        "circle_heisenberg_adjoint": algebroid_dims(1, [(0, 0)], [], HEIS, adjoint(HEIS), [(I3, I3)]),
    }
    vals["algebroid"] = alg
    vals["les"] = {
        "circle_heisenberg_adjoint": les_dims(1, [(0, 0)], [], HEIS, adjoint(HEIS), [(I3, I3)]),
        "circle_trivial": les_dims(1, [(0, 0)], [], AB1, triv, [(I1, I1)]),
        "torus_sl2_adjoint": les_dims(*torus, SL2, adjoint(SL2), [(I3, I3), (I3, I3)]),
    }

    # bialgebra: [e^f, e^f] on sl2 (basis h=0, e=1, f=2)
    ll = schouten_bivectors(SL2, [(1, 2, 1)], [(1, 2, 1)])
    vals["schouten_ef_ef"] = {",".join(map(str, k)): str(v) for k, v in ll.items()}
    # invariance of [e^f, e^f]: ad_u acts on the top exterior power by the trace of ad_u
    vals["sl2_ad_traces"] = [str(ad(SL2, i).trace()) for i in range(3)]

    OUT.write_text(json.dumps(vals, indent=2, sort_keys=True, default=str) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
