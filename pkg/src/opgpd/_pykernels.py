"""Pure-Python (numpy) versions of the exhaustive scans.

Every function yields failing index tuples in lexicographic order of its
loop variables, stopping after ``limit``. The compiled module ``_kernels``
has the same signatures and must produce identical output.
"""

import numpy as np


def _first(mask, limit):
    idx = np.argwhere(mask)
    return [tuple(int(v) for v in row) for row in idx[:limit]]


def assoc_failures(t, limit):
    # (a+b)+c vs a+(b+c), indexed [a, b, c]
    lhs = t[t[:, :, None], np.arange(t.shape[0])[None, None, :]]
    rhs = t[np.arange(t.shape[0])[:, None, None], t[None, :, :]]
    return _first(lhs != rhs, limit)


def distrib_failures(star, add, limit):
    # a*(b+c) vs a*b + a*c, indexed [a, b, c]
    lhs = star[:, add]
    rhs = add[star[:, :, None], star[:, None, :]]
    return _first(lhs != rhs, limit)


def hom_failures(f, s, t, limit):
    # f(s(a, b)) vs t(f(a), f(b))
    lhs = f[s]
    rhs = t[f[:, None], f[None, :]]
    return _first(lhs != rhs, limit)


def partial_assoc_failures(comp, limit):
    out = []
    m = comp.shape[0]
    for a in range(m):
        row = comp[a]
        for b in np.flatnonzero(row >= 0):
            ab = row[b]
            cs = np.flatnonzero(comp[b] >= 0)
            if cs.size == 0:
                continue
            bc = comp[b, cs]
            lhs = comp[ab, cs]
            rhs = comp[a, bc]
            bad = (lhs < 0) | (rhs < 0) | (lhs != rhs)
            for c in cs[bad]:
                out.append((a, int(b), int(c)))
                if len(out) >= limit:
                    return out
    return out


def interchange_failures(comp, op, limit):
    # (a*b)o(c*d) vs (aoc)*(bod) for composable (a,c) and (b,d)
    pairs = np.argwhere(comp >= 0)
    if pairs.size == 0:
        return []
    b, d = pairs[:, 0], pairs[:, 1]
    bd = comp[b, d]
    out = []
    for a, c in pairs:
        lhs = comp[op[a, b], op[c, d]]
        rhs = op[comp[a, c], bd]
        bad = np.flatnonzero((lhs < 0) | (lhs != rhs))
        for j in bad:
            out.append((int(a), int(b[j]), int(c), int(d[j])))
            if len(out) >= limit:
                return out
    return out


def action_interchange_failures(phi, xop, gop, limit):
    # (x*y)(a*b) vs (xa)*(yb) wherever xa and yb are defined
    pairs = np.argwhere(phi >= 0)
    if pairs.size == 0:
        return []
    y, b = pairs[:, 0], pairs[:, 1]
    yb = phi[y, b]
    out = []
    for x, a in pairs:
        lhs = phi[xop[x, y], gop[a, b]]
        rhs = xop[phi[x, a], yb]
        bad = np.flatnonzero((lhs < 0) | (lhs != rhs))
        for j in bad:
            out.append((int(x), int(y[j]), int(a), int(b[j])))
            if len(out) >= limit:
                return out
    return out
