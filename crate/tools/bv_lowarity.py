#!/usr/bin/env python3
"""Generates the low-arity tables of the framed little 2-disks homology operad.

BV(k) is realised as the span of natural multilinear operations on a
concrete BV algebra: polynomials in even q_1..q_n and odd theta_1..theta_n
(degree -1) with Delta = sum d/dq_i d/dtheta_i. The basis of BV(k) is the
free-BV one: graded-commutative products of left-normed Lie words in the
letters x_i and Dx_i. Compositions are found by evaluating on random inputs
and solving exactly; the rank check guarantees the evaluation is faithful.
The rotation is propagated from tau(e) = e, tau(mu) = mu and tau(D) = eps*D
through the cyclic compatibility axioms.

Usage: bv_lowarity.py OUTPUT.json [--eps 1|-1]
"""

import argparse
import itertools
import json
import random
import sys
from fractions import Fraction

NVARS = 4
CAP = 3

# ---- the polynomial superalgebra ----
# An element is {(qexp, thetas): coeff} with thetas a sorted tuple.


def mono_mul(a, b):
    (qa, sa), (qb, sb) = a, b
    if set(sa) & set(sb):
        return None, 0
    word = sa + sb
    inv = sum(1 for i in range(len(word)) for j in range(i + 1, len(word)) if word[i] > word[j])
    q = tuple(x + y for x, y in zip(qa, qb))
    return (q, tuple(sorted(word))), (-1) ** inv


def mul(x, y):
    out = {}
    for ma, ca in x.items():
        for mb, cb in y.items():
            m, s = mono_mul(ma, mb)
            if s:
                out[m] = out.get(m, 0) + s * ca * cb
    return {m: c for m, c in out.items() if c}


def delta(x):
    out = {}
    for (q, s), c in x.items():
        for p, i in enumerate(s):
            if q[i] == 0:
                continue
            q2 = q[:i] + (q[i] - 1,) + q[i + 1 :]
            m = (q2, s[:p] + s[p + 1 :])
            out[m] = out.get(m, 0) + (-1) ** p * q[i] * c
    return {m: c for m, c in out.items() if c}


def add(x, y, scale=1):
    out = dict(x)
    for m, c in y.items():
        out[m] = out.get(m, 0) + scale * c
    return {m: c for m, c in out.items() if c}


ONE = {((0,) * NVARS, ()): 1}

# ---- operations: (arity, degree, f) with f taking [(degree, element)] ----


def op_id():
    return (1, 0, lambda a: a[0][1])


def op_mu():
    return (2, 0, lambda a: mul(a[0][1], a[1][1]))


def op_delta():
    return (1, 1, lambda a: delta(a[0][1]))


def op_unit():
    return (0, 0, lambda a: ONE)


def compose(f, i, g):
    """(f o_i g)(a) = (-1)^{|g|(|a_1|+...+|a_{i-1}|)} f(a_1, ..., g(a_i, ...), ...)."""
    (l, df, ff), (m, dg, fg) = f, g

    def h(a):
        inner = a[i - 1 : i - 1 + m]
        val = fg(inner)
        deg = dg + sum(d for d, _ in inner)
        passed = sum(d for d, _ in a[: i - 1])
        out = ff(a[: i - 1] + [(deg, val)] + a[i - 1 + m :])
        return {k: -c for k, c in out.items()} if (dg * passed) % 2 else out

    return (l + m - 1, df + dg, h)


def linear(terms):
    """sum c * op for ops of equal arity and degree."""
    arity, deg = terms[0][1][0], terms[0][1][1]

    def h(a):
        out = {}
        for c, (_, _, f) in terms:
            out = add(out, f(a), c)
        return out

    return (arity, deg, h)


MU, D, ID, E = op_mu(), op_delta(), op_id(), op_unit()
# [a, b] = D(ab) - D(a)b - (-1)^|a| a D(b)
BR = linear([(1, compose(D, 1, MU)), (-1, compose(MU, 1, D)), (-1, compose(MU, 2, D))])


def binary(node, left, right):
    """node(left(...), right(...)) on consecutive inputs."""
    return compose(compose(node, 1, left), left[0] + 1, right)


def permuted(p, order):
    """(p . order)(a_1..a_k) = koszul * p(a_{order[0]}, ..., a_{order[k-1]})."""
    arity, deg, fp = p

    def h(a):
        b = [a[j] for j in order]
        e = 0
        for s in range(len(order)):
            for t in range(s + 1, len(order)):
                if order[s] > order[t]:
                    e += a[order[s]][0] * a[order[t]][0]
        out = fp(b)
        return {k: -c for k, c in out.items()} if e % 2 else out

    return (arity, deg, h)


# ---- the free-BV basis ----


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def basis(k):
    """[(name, grading, operation)] for BV(k)."""
    if k == 0:
        return [("1", 0, E)]
    out = []
    for decor in itertools.product([0, 1], repeat=k):
        letter = lambda j: ("D" if decor[j] else "") + f"x{j + 1}"
        for part in set_partitions(list(range(k))):
            blocks = sorted((sorted(b) for b in part), key=lambda b: b[0])
            for perms in itertools.product(*[itertools.permutations(b[1:]) for b in blocks]):
                words = [[b[0], *p] for b, p in zip(blocks, perms)]
                names, ops, order = [], [], []
                for w in words:
                    name = letter(w[0])
                    op = D if decor[w[0]] else ID
                    for j in w[1:]:
                        name = f"[{name},{letter(j)}]"
                        op = binary(BR, op, D if decor[j] else ID)
                    names.append(name)
                    ops.append(op)
                    order.extend(w)
                op = ops[0]
                for o in ops[1:]:
                    op = binary(MU, op, o)
                grading = sum(decor) + sum(len(w) - 1 for w in words)
                out.append((".".join(names), grading, permuted(op, order)))
    out.sort(key=lambda t: t[0])
    return out


# ---- exact linear algebra ----


def random_input(rng, deg):
    x = {}
    for _ in range(3):
        q = tuple(rng.randint(0, 2) for _ in range(NVARS))
        s = tuple(sorted(rng.sample(range(NVARS), -deg)))
        x = add(x, {(q, s): rng.randint(-3, 3)})
    return (deg, x or {((1,) * NVARS, tuple(range(-deg))): 1})


class Evaluator:
    def __init__(self, k, ops, rng):
        patterns = list(itertools.product([0, -1, -2], repeat=k)) or [()]
        self.tuples = [[random_input(rng, d) for d in pat] for pat in patterns for _ in range(2 if k else 1)]
        cols = [self.evaluate(op) for op in ops]
        self.rows = sorted({r for c in cols for r in c}, key=repr)
        self.index = {r: i for i, r in enumerate(self.rows)}
        self.n = len(ops)
        mat = [[Fraction(c.get(r, 0)) for c in cols] for r in self.rows]
        # Pick rows forming an invertible square submatrix.
        self.pivots, echelon = [], []
        for r, row in enumerate(mat):
            v = row[:]
            for lead, e in echelon:
                if v[lead]:
                    f = v[lead] / e[lead]
                    v = [a - f * b for a, b in zip(v, e)]
            lead = next((c for c, a in enumerate(v) if a), None)
            if lead is not None:
                echelon.append((lead, v))
                self.pivots.append(r)
                if len(self.pivots) == self.n:
                    break
        if len(self.pivots) < self.n:
            raise SystemExit(f"arity {k}: evaluation is not faithful (rank {len(self.pivots)} < {self.n})")
        sq = [[mat[p][c] for c in range(self.n)] for p in self.pivots]
        self.inverse = invert(sq)
        self.mat = mat

    def evaluate(self, op):
        out = {}
        for t, a in enumerate(self.tuples):
            for m, c in op[2](a).items():
                out[(t, m)] = c
        return out

    def coordinates(self, op):
        v = self.evaluate(op)
        if any(r not in self.index for r in v):
            raise SystemExit("composite leaves the span of the basis")
        b = [Fraction(v.get(self.rows[p], 0)) for p in self.pivots]
        x = [sum(self.inverse[i][j] * b[j] for j in range(self.n)) for i in range(self.n)]
        for r, row in zip(self.rows, self.mat):
            if sum(a * c for a, c in zip(row, x) if a) != v.get(r, 0):
                raise SystemExit("composite leaves the span of the basis")
        return x


def invert(a):
    n = len(a)
    m = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        p = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [v / piv for v in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def solve(a, b):
    """Solves a x = b (a: list of rows) for x; returns None if inconsistent."""
    rows, cols = len(a), len(a[0])
    m = [list(map(Fraction, a[r])) + [Fraction(b[r])] for r in range(rows)]
    piv_cols, r = [], 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    if any(m[i][cols] != 0 for i in range(r, rows)):
        return None, None
    x = [Fraction(0)] * cols
    for i, c in enumerate(piv_cols):
        x[c] = m[i][cols]
    free = [c for c in range(cols) if c not in piv_cols]
    return x, free


# ---- assembling the operad ----


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("output")
    ap.add_argument("--eps", type=int, default=1, choices=[1, -1])
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    bases = [basis(k) for k in range(CAP + 1)]
    ranks = [len(b) for b in bases]
    print("ranks", ranks, file=sys.stderr)
    evals = [Evaluator(k, [op for _, _, op in bases[k]], rng) for k in range(CAP + 1)]
    names = [[n for n, _, _ in b] for b in bases]
    grading = [[g for _, g, _ in b] for b in bases]

    comp = {}
    for l in range(1, CAP + 1):
        for m in range(0, CAP + 2 - l):
            for x, (_, _, fx) in enumerate(bases[l]):
                for y, (_, _, fy) in enumerate(bases[m]):
                    for i in range(1, l + 1):
                        comp[(l, x, i, m, y)] = evals[l + m - 1].coordinates(compose(fx, i, fy))
    print("compositions", len(comp), file=sys.stderr)

    def compose_vec(l, u, i, m, v):
        out = [Fraction(0)] * ranks[l + m - 1]
        for x, cu in enumerate(u):
            if cu == 0:
                continue
            for y, cv in enumerate(v):
                if cv == 0:
                    continue
                for t, c in enumerate(comp[(l, x, i, m, y)]):
                    if c:
                        out[t] += cu * cv * c
        return out

    def unit_vec(k, j):
        return [Fraction(int(t == j)) for t in range(ranks[k])]

    # tau[k][j] = image of basis element j, as a coordinate vector.
    tau = {0: [unit_vec(0, 0)]}
    i_id, i_d = names[1].index("x1"), names[1].index("Dx1")
    tau[1] = [None, None]
    tau[1][i_id] = unit_vec(1, i_id)
    tau[1][i_d] = [Fraction(args.eps) * c for c in unit_vec(1, i_d)]

    def apply_tau(k, v):
        out = [Fraction(0)] * ranks[k]
        for j, c in enumerate(v):
            if c:
                for t, w in enumerate(tau[k][j]):
                    out[t] += c * w
        return out

    # tau_2: the compatibility axioms with arity-1 pieces are linear in the
    # unknown matrix; together with tau(mu) = mu they pin it down.
    n2 = ranks[2]
    unknown = lambda r, c: r * n2 + c  # entry (row r, column c)
    rows, rhs = [], []

    def equation(lhs_terms, rhs_vec):
        # lhs_terms: list of (coef, column vector v) meaning coef * T2 v; rhs
        # given as (known vector, list of (coef, v, post)) where post maps T2 v.
        pass

    # Encode each instance as sum over unknowns: T2 applied to vectors and
    # then mapped linearly. Build the linear map of an expression in T2 by
    # probing it on elementary matrices.
    def lin_system(instances):
        for build in instances:
            # build(T) returns (lhs_vec - rhs_vec) for a concrete T (list of columns)
            base = build([[Fraction(0)] * n2 for _ in range(n2)])
            cols = []
            for c in range(n2):
                for r in range(n2):
                    T = [[Fraction(0)] * n2 for _ in range(n2)]
                    T[c][r] = Fraction(1)
                    val = build(T)
                    cols.append((unknown(r, c), [a - b for a, b in zip(val, base)]))
            for t in range(len(base)):
                row = [Fraction(0)] * (n2 * n2)
                for idx, vec in cols:
                    row[idx] = vec[t]
                rows.append(row)
                rhs.append(-base[t])

    def t2(T, v):
        out = [Fraction(0)] * n2
        for j, c in enumerate(v):
            if c:
                for t in range(n2):
                    out[t] += c * T[j][t]
        return out

    instances = []
    mu = names[2].index("x1.x2")
    instances.append(lambda T: [a - b for a, b in zip(t2(T, unit_vec(2, mu)), unit_vec(2, mu))])
    for x in range(n2):
        for y in range(ranks[1]):
            a, b = grading[2][x], grading[1][y]

            def inst2(T, x=x, y=y):
                lhs = t2(T, comp[(2, x, 2, 1, y)])
                rhs = compose_vec(2, t2(T, unit_vec(2, x)), 1, 1, unit_vec(1, y))
                return [p - q for p, q in zip(lhs, rhs)]

            def inst1(T, x=x, y=y, a=a, b=b):
                lhs = t2(T, comp[(2, x, 1, 1, y)])
                rhs = compose_vec(1, tau[1][y], 1, 2, t2(T, unit_vec(2, x)))
                s = (-1) ** (a * b)
                return [p - s * q for p, q in zip(lhs, rhs)]

            instances += [inst2, inst1]
    for x in range(ranks[1]):
        for y in range(n2):
            a, b = grading[1][x], grading[2][y]

            def inst(T, x=x, y=y, a=a, b=b):
                lhs = t2(T, comp[(1, x, 1, 2, y)])
                rhs = compose_vec(2, t2(T, unit_vec(2, y)), 2, 1, tau[1][x])
                s = (-1) ** (a * b)
                return [p - s * q for p, q in zip(lhs, rhs)]

            instances.append(inst)
    lin_system(instances)
    sol, free = solve(rows, rhs)
    if sol is None:
        raise SystemExit("no rotation on arity 2 satisfies the axioms")
    if free:
        raise SystemExit(f"rotation on arity 2 underdetermined ({len(free)} free entries)")
    tau[2] = [[sol[unknown(r, c)] for r in range(n2)] for c in range(n2)]

    # tau_3 from compositions of two arity-2 elements, which span BV(3).
    n3 = ranks[3]
    src, dst = [], []
    for x in range(n2):
        for y in range(n2):
            a, b = grading[2][x], grading[2][y]
            src.append(comp[(2, x, 2, 2, y)])
            dst.append(compose_vec(2, tau[2][x], 1, 2, unit_vec(2, y)))
            src.append(comp[(2, x, 1, 2, y)])
            s = (-1) ** (a * b)
            dst.append([s * c for c in compose_vec(2, tau[2][y], 2, 2, tau[2][x])])
    # Solve T3 src_j = dst_j row by row: for each output coordinate t,
    # sum_c T3[t][c] src_j[c] = dst_j[t].
    a_mat = src
    tau3_rows = []
    for t in range(n3):
        sol, free = solve(a_mat, [d[t] for d in dst])
        if sol is None:
            raise SystemExit("no rotation on arity 3 satisfies the axioms")
        if free:
            raise SystemExit("compositions of arity-2 elements do not span arity 3")
        tau3_rows.append(sol)
    tau[3] = [[tau3_rows[t][c] for t in range(n3)] for c in range(n3)]

    # ---- write ----
    def coef(c):
        c = Fraction(c)
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"

    def combo(k, v):
        return [[coef(c), names[k][t]] for t, c in enumerate(v) if c]

    compose_entries = []
    for (l, x, i, m, y), v in sorted(comp.items()):
        if any(v):
            compose_entries.append({"x": names[l][x], "i": i, "y": names[m][y], "out": combo(l + m - 1, v)})
    tau_entries = []
    for k in range(CAP + 1):
        entries = [[t, c, coef(w)] for c in range(ranks[k]) for t, w in enumerate(tau[k][c]) if w]
        tau_entries.append({"arity": k, "entries": entries})
    integral = all(
        Fraction(e[0]).denominator == 1 for ce in compose_entries for e in ce["out"]
    ) and all(Fraction(e[2]).denominator == 1 for te in tau_entries for e in te["entries"])
    doc = {
        "name": "bv-lowarity",
        "ring": "integers" if integral else "rationals",
        "arities": [
            {"arity": k, "generators": [{"name": n, "grading": g} for n, g in zip(names[k], grading[k])]}
            for k in range(CAP + 1)
        ],
        "id": [["1", "x1"]],
        "e": [["1", "1"]],
        "mu": [["1", "x1.x2"]],
        "compose": compose_entries,
        "tau": tau_entries,
        "sparse": True,
        "metadata": {
            "provenance": "derived data, validated",
            "source": "homology of the framed little 2-disks operad (the BV operad), arities 0 to 3",
            "basis": "products of left-normed Lie words in x_i and Dx_i; D has grading 1, the bracket grading 1",
            "model": f"natural operations on the BV algebra Q[q_1..q_{NVARS}, theta_1..theta_{NVARS}], "
            "Delta = sum d/dq_i d/dtheta_i",
            "tau": f"propagated from tau(e) = e, tau(mu) = mu, tau(D) = {args.eps}*D by the cyclic axioms",
        },
    }
    with open(args.output, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")
    print("written", args.output, file=sys.stderr)


if __name__ == "__main__":
    main()
