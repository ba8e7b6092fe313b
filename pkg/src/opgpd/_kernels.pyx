# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exhaustive scans. Mirrors ``_pykernels`` exactly."""

cimport numpy as cnp

ctypedef cnp.int64_t idx_t


def assoc_failures(const idx_t[:, ::1] t, Py_ssize_t limit):
    cdef Py_ssize_t n = t.shape[0], a, b, c
    out = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if t[t[a, b], c] != t[a, t[b, c]]:
                    out.append((a, b, c))
                    if len(out) >= limit:
                        return out
    return out


def distrib_failures(const idx_t[:, ::1] star, const idx_t[:, ::1] add, Py_ssize_t limit):
    cdef Py_ssize_t n = star.shape[0], a, b, c
    out = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if star[a, add[b, c]] != add[star[a, b], star[a, c]]:
                    out.append((a, b, c))
                    if len(out) >= limit:
                        return out
    return out


def hom_failures(const idx_t[::1] f, const idx_t[:, ::1] s, const idx_t[:, ::1] t,
                 Py_ssize_t limit):
    cdef Py_ssize_t n = s.shape[0], a, b
    out = []
    for a in range(n):
        for b in range(n):
            if f[s[a, b]] != t[f[a], f[b]]:
                out.append((a, b))
                if len(out) >= limit:
                    return out
    return out


def partial_assoc_failures(const idx_t[:, ::1] comp, Py_ssize_t limit):
    cdef Py_ssize_t m = comp.shape[0], a, b, c
    cdef idx_t ab, bc, lhs, rhs
    out = []
    for a in range(m):
        for b in range(m):
            ab = comp[a, b]
            if ab < 0:
                continue
            for c in range(m):
                bc = comp[b, c]
                if bc < 0:
                    continue
                lhs = comp[ab, c]
                rhs = comp[a, bc]
                if lhs < 0 or rhs < 0 or lhs != rhs:
                    out.append((a, b, c))
                    if len(out) >= limit:
                        return out
    return out


def interchange_failures(const idx_t[:, ::1] comp, const idx_t[:, ::1] op, Py_ssize_t limit):
    cdef Py_ssize_t m = comp.shape[0], a, b, c, d
    cdef idx_t ac, bd, lhs
    out = []
    for a in range(m):
        for c in range(m):
            ac = comp[a, c]
            if ac < 0:
                continue
            for b in range(m):
                for d in range(m):
                    bd = comp[b, d]
                    if bd < 0:
                        continue
                    lhs = comp[op[a, b], op[c, d]]
                    if lhs < 0 or lhs != op[ac, bd]:
                        out.append((a, b, c, d))
                        if len(out) >= limit:
                            return out
    return out


def action_interchange_failures(const idx_t[:, ::1] phi, const idx_t[:, ::1] xop,
                                const idx_t[:, ::1] gop, Py_ssize_t limit):
    cdef Py_ssize_t nx = phi.shape[0], ng = phi.shape[1], x, y, a, b
    cdef idx_t xa, yb, lhs
    out = []
    for x in range(nx):
        for a in range(ng):
            xa = phi[x, a]
            if xa < 0:
                continue
            for y in range(nx):
                for b in range(ng):
                    yb = phi[y, b]
                    if yb < 0:
                        continue
                    lhs = phi[xop[x, y], gop[a, b]]
                    if lhs < 0 or lhs != xop[xa, yb]:
                        out.append((x, y, a, b))
                        if len(out) >= limit:
                            return out
    return out
