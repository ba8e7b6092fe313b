"""Independent brute-force verifiers and isomorphism search.

Everything here works on plain Python lists pulled out of the structures and
re-derives the axioms from scratch; none of the validators, kernels or
constructions of the main modules are called. Only the identity parser is
shared, the evaluation of identities is separate.

The isomorphism search treats every structure as a multi-sorted algebra of
(possibly partial) functions and backtracks over bijections, most
constrained element first, propagating every value forced by the functions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product as cartesian

from .errors import SearchBudgetExceeded
from .terms import parse_identity

ALGEBRA_CAP = 12
GROUPOID_CAP = 16
XMOD_CAP = 8
ACTION_CAP = 16
COVER_CAP = 64


@dataclass(frozen=True)
class IsoWitness:
    """Per-sort bijections realising an isomorphism, or ``None`` if none exists.

    ``explored`` counts the candidate assignments tried by the search.
    """

    maps: dict | None
    explored: int

    @property
    def found(self) -> bool:
        return self.maps is not None


# ---------------------------------------------------------------- raw views


def _l(arr):
    return [int(v) for v in arr]


def _ll(arr):
    return [[int(v) for v in row] for row in arr]


class _Alg:
    def __init__(self, alg):
        self.n = int(alg.size)
        self.add = _ll(alg.add)
        self.neg = _l(alg.neg)
        self.ops = {k: _ll(v) for k, v in alg.binary_ops.items()}
        self.unary = {k: _l(v) for k, v in alg.unary_ops.items()}
        self.opp = dict(alg.opposites)
        self.identities = tuple(alg.identities)

    def sig(self):
        return (sorted(self.ops), sorted(self.unary))

    def key(self):
        return (self.n, self.add, self.neg, sorted(self.ops.items()), sorted(self.unary.items()))


class _Gpd:
    def __init__(self, G):
        self.k = int(G.num_objects)
        self.src = _l(G.src)
        self.tgt = _l(G.tgt)
        self.ident = _l(G.identity)
        self.comp = {(int(a), int(b)): int(c) for (a, b), c in G.comp.items()}
        self.m = len(self.src)

    def key(self):
        return (self.k, self.src, self.tgt, self.ident, sorted(self.comp.items()))


def _semidirect(B: _Alg, A: _Alg, dot, stars) -> _Alg:
    """B x A with ``(b, a)`` read as ``s(b) + a``, at index ``b*|A| + a``."""
    na, nb = A.n, B.n
    out = _Alg.__new__(_Alg)
    out.n = na * nb
    pairs = [(b, a) for b in range(nb) for a in range(na)]
    out.add = [
        [B.add[b1][b2] * na + A.add[dot[B.neg[b2]][a1]][a2] for (b2, a2) in pairs]
        for (b1, a1) in pairs
    ]
    out.neg = [B.neg[b] * na + A.neg[dot[b][a]] for (b, a) in pairs]
    out.ops = {}
    for op in B.ops:
        st, so = stars[op], stars[B.opp[op]]
        out.ops[op] = [
            [
                B.ops[op][b1][b2] * na
                + A.add[A.add[st[b1][a2]][so[b2][a1]]][A.ops[op][a1][a2]]
                for (b2, a2) in pairs
            ]
            for (b1, a1) in pairs
        ]
    out.unary = {w: [B.unary[w][b] * na + A.unary[w][a] for (b, a) in pairs] for w in B.unary}
    out.opp = dict(A.opp)
    out.identities = tuple(dict.fromkeys(A.identities + B.identities))
    return out


# ---------------------------------------------------------------- checks
#
# A check is (domain, violated): ``domain()`` enumerates every instance in the
# order the main validators use, ``violated(*elements)`` decides one instance.


def _rng(n, k):
    return lambda: cartesian(range(n), repeat=k)


def _evaluate(node, R: _Alg, env):
    kind = node[0]
    if kind == "var":
        return env[node[1]]
    if kind == "zero":
        return 0
    if kind == "neg":
        return R.neg[_evaluate(node[1], R, env)]
    if kind == "add":
        return R.add[_evaluate(node[1], R, env)][_evaluate(node[2], R, env)]
    if kind == "bin":
        return R.ops[node[1]][_evaluate(node[2], R, env)][_evaluate(node[3], R, env)]
    return R.unary[node[1]][_evaluate(node[2], R, env)]


def _algebra_checks(R: _Alg) -> dict:
    n, add, neg = R.n, R.add, R.neg
    out = {
        "group.left_zero": (_rng(n, 1), lambda a: add[0][a] != a),
        "group.right_zero": (_rng(n, 1), lambda a: add[a][0] != a),
        "group.left_neg": (_rng(n, 1), lambda a: add[neg[a]][a] != 0),
        "group.right_neg": (_rng(n, 1), lambda a: add[a][neg[a]] != 0),
        "group.assoc": (_rng(n, 3), lambda a, b, c: add[add[a][b]][c] != add[a][add[b][c]]),
    }
    for op, t in R.ops.items():
        o = R.ops[R.opp[op]]
        out[f"distrib[{op}]"] = (
            _rng(n, 3),
            lambda a, b, c, t=t: t[a][add[b][c]] != add[t[a][b]][t[a][c]],
        )
        out[f"opposite[{op}]"] = (_rng(n, 2), lambda a, b, t=t, o=o: t[a][b] != o[b][a])
    for w, f in R.unary.items():
        out[f"unary_add[{w}]"] = (
            _rng(n, 2),
            lambda a, b, f=f: f[add[a][b]] != add[f[a]][f[b]],
        )
        for op, t in R.ops.items():
            out[f"unary_star[{w},{op}]"] = (
                _rng(n, 2),
                lambda a, b, f=f, t=t: t[f[a]][b] != f[t[a][b]],
            )
    for k, text in enumerate(R.identities):
        ident = parse_identity(text)
        names = ident.variables

        def bad(*vals, ident=ident, names=names):
            env = dict(zip(names, vals))
            return _evaluate(ident.lhs, R, env) != _evaluate(ident.rhs, R, env)

        out[f"identity[{k}]"] = (_rng(n, len(names)), bad)
    return out


def _hom_checks(S: _Alg, T: _Alg, f) -> dict:
    n = S.n
    out = {
        "hom.add": (_rng(n, 2), lambda a, b: f[S.add[a][b]] != T.add[f[a]][f[b]]),
    }
    for op in S.ops:
        s, t = S.ops[op], T.ops.get(op)
        out[f"hom[{op}]"] = (_rng(n, 2), lambda a, b, s=s, t=t: f[s[a][b]] != t[f[a]][f[b]])
    for w in S.unary:
        s, t = S.unary[w], T.unary.get(w)
        out[f"hom.unary[{w}]"] = (_rng(n, 1), lambda a, s=s, t=t: f[s[a]] != t[f[a]])
    return out


def _groupoid_checks(G: _Gpd) -> dict:
    comp, src, tgt, ident = G.comp, G.src, G.tgt, G.ident

    def in_comp():
        return iter(sorted(comp))

    def composable_triples():
        for a in range(G.m):
            for b in range(G.m):
                if (a, b) in comp:
                    for c in range(G.m):
                        if (b, c) in comp:
                            yield (a, b, c)

    def assoc_bad(a, b, c):
        ab, bc = comp.get((a, b)), comp.get((b, c))
        if ab is None or bc is None:
            return False
        lhs, rhs = comp.get((ab, c)), comp.get((a, bc))
        return lhs is None or rhs is None or lhs != rhs

    def has_inverse(a):
        for b in range(G.m):
            if comp.get((a, b)) == ident[src[a]] and comp.get((b, a)) == ident[tgt[a]]:
                return True
        return False

    return {
        "gpd.identity_src": (_rng(G.k, 1), lambda x: src[ident[x]] != x),
        "gpd.identity_tgt": (_rng(G.k, 1), lambda x: tgt[ident[x]] != x),
        "gpd.comp_domain": (
            _rng(G.m, 2),
            lambda a, b: (tgt[a] == src[b]) != ((a, b) in comp),
        ),
        "gpd.comp_src": (in_comp, lambda a, b: (a, b) in comp and src[comp[(a, b)]] != src[a]),
        "gpd.comp_tgt": (in_comp, lambda a, b: (a, b) in comp and tgt[comp[(a, b)]] != tgt[b]),
        "gpd.assoc": (composable_triples, assoc_bad),
        "gpd.left_unit": (_rng(G.m, 1), lambda a: comp.get((ident[src[a]], a)) != a),
        "gpd.right_unit": (_rng(G.m, 1), lambda a: comp.get((a, ident[tgt[a]])) != a),
        "gpd.inverse": (_rng(G.m, 1), lambda a: not has_inverse(a)),
    }


def _morphism_checks(S: _Gpd, T: _Gpd, am, om) -> dict:
    return {
        "morph.src": (_rng(S.m, 1), lambda a: T.src[am[a]] != om[S.src[a]]),
        "morph.tgt": (_rng(S.m, 1), lambda a: T.tgt[am[a]] != om[S.tgt[a]]),
        "morph.identity": (_rng(S.k, 1), lambda x: am[S.ident[x]] != T.ident[om[x]]),
        "morph.comp": (
            lambda: iter(sorted(S.comp)),
            lambda a, b: (a, b) in S.comp and T.comp.get((am[a], am[b])) != am[S.comp[(a, b)]],
        ),
    }


def _internal_checks(G: _Gpd, A: _Alg, O: _Alg) -> dict:
    comp = G.comp
    out = {}
    for name, (S, T, f) in {
        "d0": (A, O, G.src),
        "d1": (A, O, G.tgt),
        "eps": (O, A, G.ident),
    }.items():
        for k, v in _hom_checks(S, T, f).items():
            out[f"{name}/{k}"] = v
    out["eps.zero"] = (lambda: iter([()]), lambda: G.ident[0] != 0)

    def quads():
        pairs = sorted(comp)
        for a, c in pairs:
            for b, d in pairs:
                yield (a, b, c, d)

    for op in ("+",) + tuple(A.ops):
        t = A.add if op == "+" else A.ops[op]

        def bad(a, b, c, d, t=t):
            if (a, c) not in comp or (b, d) not in comp:
                return False
            lhs = comp.get((t[a][b], t[c][d]))
            return lhs is None or lhs != t[comp[(a, c)]][comp[(b, d)]]

        out[f"interchange[{op}]"] = (quads, bad)
    for w, f in A.unary.items():
        out[f"interchange[{w}]"] = (
            lambda: iter(sorted(comp)),
            lambda a, c, f=f: (a, c) in comp and comp.get((f[a], f[c])) != f[comp[(a, c)]],
        )

    def inverse_of(a):
        for b in range(G.m):
            if comp.get((a, b)) == G.ident[G.src[a]] and comp.get((b, a)) == G.ident[G.tgt[a]]:
                return b
        return -1

    def formula_bad(a):
        e0, e1 = G.ident[G.src[a]], G.ident[G.tgt[a]]
        return A.add[A.add[e1][A.neg[a]]][e0] != inverse_of(a)

    out["inverse_formula"] = (_rng(G.m, 1), formula_bad)
    return out


def _action_checks(G: _Gpd, size, theta, phi) -> dict:
    comp = G.comp

    def defined_pairs():
        return ((x, a) for x in range(size) for a in range(G.m) if phi[x][a] >= 0)

    def comp_bad(x, a, b):
        xa = phi[x][a]
        if xa < 0 or G.tgt[a] != G.src[b]:
            return False
        ab = comp.get((a, b))
        lhs = phi[x][ab] if ab is not None else -1
        return lhs < 0 or lhs != phi[xa][b]

    def comp_domain():
        for x, a in defined_pairs():
            for b in range(G.m):
                if G.src[b] == G.tgt[a]:
                    yield (x, a, b)

    return {
        "action.domain": (
            lambda: cartesian(range(size), range(G.m)),
            lambda x, a: (theta[x] == G.src[a]) != (phi[x][a] >= 0),
        ),
        "action.target": (
            defined_pairs,
            lambda x, a: phi[x][a] >= 0 and theta[phi[x][a]] != G.tgt[a],
        ),
        "action.comp": (comp_domain, comp_bad),
        "action.unit": (_rng(size, 1), lambda x: phi[x][G.ident[theta[x]]] != x),
    }


def _internal_action_checks(G: _Gpd, A: _Alg, O: _Alg, X: _Alg, theta, phi) -> dict:
    out = {f"theta/{k}": v for k, v in _hom_checks(X, O, theta).items()}

    def pairs():
        return [(x, a) for x in range(X.n) for a in range(G.m) if phi[x][a] >= 0]

    def quads():
        ps = pairs()
        for x, a in ps:
            for y, b in ps:
                yield (x, y, a, b)

    for op in ("+",) + tuple(A.ops):
        xt = X.add if op == "+" else X.ops[op]
        gt = A.add if op == "+" else A.ops[op]

        def bad(x, y, a, b, xt=xt, gt=gt):
            if phi[x][a] < 0 or phi[y][b] < 0:
                return False
            lhs = phi[xt[x][y]][gt[a][b]]
            return lhs < 0 or lhs != xt[phi[x][a]][phi[y][b]]

        out[f"action_interchange[{op}]"] = (quads, bad)
    for w in A.unary:
        fx, fa = X.unary[w], A.unary[w]

        def ubad(x, a, fx=fx, fa=fa):
            if phi[x][a] < 0:
                return False
            lhs = phi[fx[x]][fa[a]]
            return lhs < 0 or lhs != fx[phi[x][a]]

        out[f"action_unary[{w}]"] = (lambda: iter(pairs()), ubad)
    return out


def _xmod_checks(A: _Alg, B: _Alg, alpha, dot, stars) -> dict:
    out = {f"alpha/{k}": v for k, v in _hom_checks(A, B, alpha).items()}
    for k, v in _algebra_checks(_semidirect(B, A, dot, stars)).items():
        out[f"derived/{k}"] = v
    out["CM1"] = (
        lambda: cartesian(range(B.n), range(A.n)),
        lambda b, a: alpha[dot[b][a]] != B.add[B.add[b][alpha[a]]][B.neg[b]],
    )
    out["CM2"] = (
        _rng(A.n, 2),
        lambda a, c: dot[alpha[a]][c] != A.add[A.add[a][c]][A.neg[a]],
    )
    for op in A.ops:
        st, so = stars[op], stars[A.opp[op]]
        out[f"CM3[{op}]"] = (
            _rng(A.n, 2),
            lambda a, c, st=st, op=op: st[alpha[a]][c] != A.ops[op][a][c],
        )
        out[f"CM4.left[{op}]"] = (
            lambda: cartesian(range(B.n), range(A.n)),
            lambda b, a, st=st, op=op: alpha[st[b][a]] != B.ops[op][b][alpha[a]],
        )
        out[f"CM4.right[{op}]"] = (
            lambda: cartesian(range(A.n), range(B.n)),
            lambda a, b, so=so, op=op: alpha[so[b][a]] != B.ops[op][alpha[a]][b],
        )
    return out


def _xmor_checks(S, T, f1, f2) -> dict:
    SA, SB, s_alpha, s_dot, s_st = S
    TA, TB, t_alpha, t_dot, t_st = T
    out = {f"f1/{k}": v for k, v in _hom_checks(SA, TA, f1).items()}
    out.update({f"f2/{k}": v for k, v in _hom_checks(SB, TB, f2).items()})
    out["xmor.alpha"] = (_rng(SA.n, 1), lambda a: f2[s_alpha[a]] != t_alpha[f1[a]])
    ba = lambda: cartesian(range(SB.n), range(SA.n))  # noqa: E731
    out["xmor.dot"] = (ba, lambda b, a: f1[s_dot[b][a]] != t_dot[f2[b]][f1[a]])
    for op in s_st:
        out[f"xmor.star[{op}]"] = (
            ba,
            lambda b, a, op=op: f1[s_st[op][b][a]] != t_st[op][f2[b]][f1[a]],
        )
    return out


def _prefixed(prefix, checks):
    return {f"{prefix}/{k}": v for k, v in checks.items()}


def _xmod_raw(X):
    return (
        _Alg(X.A),
        _Alg(X.B),
        _l(X.alpha),
        _ll(X.dot),
        {k: _ll(v) for k, v in X.star_actions.items()},
    )


def _all_checks(value) -> dict:
    comp, main = _checks_for(value)
    return {**comp, **main}


def _parts(**parts) -> dict:
    out = {}
    for prefix, part in parts.items():
        out.update(_prefixed(prefix, _all_checks(part)))
    return out


def _checks_for(value) -> tuple[dict, dict]:
    """``(component checks, main checks)`` for any supported structure.

    A structure is valid when neither group has a failing instance. The main
    validators refuse to evaluate a structure whose parts are invalid; the
    component group mirrors that (morphisms include their source and target,
    actions their base).
    """
    from .algebra import AlgebraHom, DerivedActionData, OpAlgebra
    from .groupoid import FinGroupoid, GpdAction, GpdMorphism
    from .internal import InternalAction, InternalGroupoid, InternalMorphism
    from .xmod import CrossedModule, XModMorphism

    if isinstance(value, OpAlgebra):
        return {}, _algebra_checks(_Alg(value))
    if isinstance(value, DerivedActionData):
        A, B = _Alg(value.acted), _Alg(value.actor)
        sd = _semidirect(B, A, _ll(value.dot), {k: _ll(v) for k, v in value.star_actions.items()})
        return {}, _algebra_checks(sd)
    if isinstance(value, AlgebraHom):
        return {}, _hom_checks(_Alg(value.source), _Alg(value.target), _l(value.map))
    if isinstance(value, FinGroupoid):
        return {}, _groupoid_checks(_Gpd(value))
    if isinstance(value, GpdMorphism):
        comp = _parts(source=value.source, target=value.target)
        return comp, _morphism_checks(
            _Gpd(value.source), _Gpd(value.target), _l(value.arrow_map), _l(value.object_map)
        )
    if isinstance(value, InternalGroupoid):
        G, A, O = _Gpd(value.gpd), _Alg(value.arrow_alg), _Alg(value.object_alg)
        comp = _prefixed("groupoid", _groupoid_checks(G))
        comp.update(_prefixed("arrow_alg", _algebra_checks(A)))
        comp.update(_prefixed("object_alg", _algebra_checks(O)))
        return comp, _internal_checks(G, A, O)
    if isinstance(value, InternalMorphism):
        S, T = value.source, value.target
        am, om = _l(value.arrow_map), _l(value.object_map)
        comp = _parts(source=S, target=T)
        main = _morphism_checks(_Gpd(S.gpd), _Gpd(T.gpd), am, om)
        main.update(_prefixed("arrow_hom", _hom_checks(_Alg(S.arrow_alg), _Alg(T.arrow_alg), am)))
        main.update(_prefixed("object_hom", _hom_checks(_Alg(S.object_alg), _Alg(T.object_alg), om)))
        return comp, main
    if isinstance(value, GpdAction):
        comp = _parts(base=value.groupoid)
        return comp, _action_checks(
            _Gpd(value.groupoid), value.size, _l(value.theta), _ll(value.phi)
        )
    if isinstance(value, InternalAction):
        G = _Gpd(value.G.gpd)
        theta, phi = _l(value.theta), _ll(value.phi)
        comp = _parts(base=value.G, X=value.X)
        comp.update(_prefixed("gpd_action", _action_checks(G, value.X.size, theta, phi)))
        main = _internal_action_checks(
            G, _Alg(value.G.arrow_alg), _Alg(value.G.object_alg), _Alg(value.X), theta, phi
        )
        return comp, main
    if isinstance(value, CrossedModule):
        A, B, alpha, dot, stars = _xmod_raw(value)
        comp = _prefixed("A", _algebra_checks(A))
        comp.update(_prefixed("B", _algebra_checks(B)))
        return comp, _xmod_checks(A, B, alpha, dot, stars)
    if isinstance(value, XModMorphism):
        comp = _parts(source=value.source, target=value.target)
        return comp, _xmor_checks(
            _xmod_raw(value.source), _xmod_raw(value.target), _l(value.f1), _l(value.f2)
        )
    raise TypeError(f"no brute-force checks for {type(value).__name__}")


def brute_failures(value, limit: int = 1) -> dict[str, list[tuple]]:
    """Exhaustively evaluate every axiom; up to ``limit`` failures per check.

    Component axioms (the underlying groupoid or algebras) are evaluated
    first; if any fails, the structure-level axioms are not evaluated, just
    as the main validators refuse to continue on an invalid component.
    """
    comp, main = _checks_for(value)
    out: dict[str, list[tuple]] = {}
    for group in (comp, main):
        for name, (domain, bad) in group.items():
            found = []
            for inst in domain():
                try:
                    failed = bad(*inst)
                except (IndexError, KeyError, TypeError):
                    failed = True
                if failed:
                    found.append(tuple(inst))
                    if len(found) >= limit:
                        break
            if found:
                out[name] = found
        if out:
            break
    return out


def brute_is_valid(value) -> bool:
    return not brute_failures(value)


def recheck(value, counterexample) -> bool:
    """True iff ``counterexample`` is a genuine violation of its named axiom.

    Accepts a :class:`~opgpd.report.Counterexample` or ``(check, elements)``.
    Unknown check names are never genuine.
    """
    if isinstance(counterexample, tuple):
        name, elements = counterexample
    else:
        name, elements = counterexample.check, counterexample.elements
    comp, main = _checks_for(value)
    entry = main.get(name) or comp.get(name)
    if entry is None:
        return False
    try:
        return bool(entry[1](*elements))
    except (IndexError, KeyError, TypeError):
        return True


def known_checks(value) -> set[str]:
    comp, main = _checks_for(value)
    return set(comp) | set(main)


# ---------------------------------------------------------------- specific brute checks


def brute_is_derived_action(act) -> bool:
    """Semidirect product rebuilt from scratch, then every axiom evaluated."""
    return brute_is_valid(act)


def brute_check_covering(p) -> bool:
    """Morphism laws, then each star paired explicitly with the star below."""
    from .internal import InternalMorphism

    if isinstance(p, InternalMorphism):
        p = p.gpd_morphism
    if brute_failures(p):
        return False
    S, T = _Gpd(p.source), _Gpd(p.target)
    am, om = _l(p.arrow_map), _l(p.object_map)
    for x in range(S.k):
        upstairs = [a for a in range(S.m) if S.src[a] == x]
        downstairs = [b for b in range(T.m) if T.src[b] == om[x]]
        pairing = {}
        for a in upstairs:
            if am[a] in pairing:
                return False
            pairing[am[a]] = a
        if sorted(pairing) != downstairs:
            return False
    return True


def brute_characteristic_group(p, x: int) -> frozenset[int]:
    from .internal import InternalMorphism

    if isinstance(p, InternalMorphism):
        p = p.gpd_morphism
    S = _Gpd(p.source)
    am = _l(p.arrow_map)
    return frozenset(am[a] for a in range(S.m) if S.src[a] == x and S.tgt[a] == x)


def brute_is_ideal(alg, members) -> bool:
    """Normal subgroup absorbing every binary operation on both sides."""
    R = _Alg(alg)
    M = set(int(m) for m in members)
    if 0 not in M:
        return False
    for a in M:
        if R.neg[a] not in M:
            return False
        for b in M:
            if R.add[a][b] not in M:
                return False
    for g in range(R.n):
        for a in M:
            if R.add[R.add[g][a]][R.neg[g]] not in M:
                return False
            for t in R.ops.values():
                if t[g][a] not in M or t[a][g] not in M:
                    return False
    for f in R.unary.values():
        if any(f[a] not in M for a in M):
            return False
    return True


# ---------------------------------------------------------------- isomorphism search


class _Sorted:
    """A multi-sorted structure: carrier sizes, functions and element colours."""

    def __init__(self):
        self.sizes: dict[str, int] = {}
        self.funcs: dict[str, tuple[tuple[str, ...], str, dict]] = {}
        self.colors: dict[str, list] = {}

    def sort(self, name, n, colors=None):
        self.sizes[name] = n
        self.colors[name] = list(colors) if colors is not None else [None] * n

    def func(self, name, ins, out, table):
        self.funcs[name] = (tuple(ins), out, table)

    def algebra(self, R: _Alg, sort: str, tag: str):
        n = R.n
        self.func(f"{tag}0", (), sort, {(): 0})
        self.func(f"{tag}+", (sort, sort), sort, {(a, b): R.add[a][b] for a in range(n) for b in range(n)})
        self.func(f"{tag}-", (sort,), sort, {(a,): R.neg[a] for a in range(n)})
        for k, t in R.ops.items():
            self.func(f"{tag}*{k}", (sort, sort), sort, {(a, b): t[a][b] for a in range(n) for b in range(n)})
        for k, f in R.unary.items():
            self.func(f"{tag}w{k}", (sort,), sort, {(a,): f[a] for a in range(n)})

    def profiles(self):
        prof = {s: [[c] for c in self.colors[s]] for s in self.sizes}
        for name in sorted(self.funcs):
            ins, out, tab = self.funcs[name]
            counts = {s: [[0] * (len(ins) + 1) for _ in range(n)] for s, n in self.sizes.items()}
            for inp, val in tab.items():
                counts[out][val][0] += 1
                for pos, (s, i) in enumerate(zip(ins, inp)):
                    counts[s][i][pos + 1] += 1
            for s in self.sizes:
                for x in range(self.sizes[s]):
                    prof[s][x].append(tuple(counts[s][x]))
            if len(ins) == 2 and ins[0] == ins[1] == out:
                # length of the power sequence x, x.x, (x.x).x, ... back to x
                for x in range(self.sizes[out]):
                    y, k = x, 1
                    while k <= self.sizes[out] + 1:
                        y = tab.get((y, x))
                        if y is None or y == x:
                            break
                        k += 1
                    prof[out][x].append(k if y is not None else -k)
        return {s: [repr(p) for p in ps] for s, ps in prof.items()}


def _search(S: _Sorted, T: _Sorted) -> IsoWitness:
    if S.sizes != T.sizes or set(S.funcs) != set(T.funcs):
        return IsoWitness(None, 0)
    for name, (ins, out, tab) in S.funcs.items():
        tins, tout, ttab = T.funcs[name]
        if (ins, out) != (tins, tout) or len(tab) != len(ttab):
            return IsoWitness(None, 0)
    ps, pt = S.profiles(), T.profiles()
    for s in S.sizes:
        if Counter(ps[s]) != Counter(pt[s]):
            return IsoWitness(None, 0)
    cands = {
        s: [[y for y in range(n) if pt[s][y] == ps[s][x]] for x in range(n)]
        for s, n in S.sizes.items()
    }
    funcs = [(S.funcs[k][0], S.funcs[k][1], S.funcs[k][2], T.funcs[k][2]) for k in sorted(S.funcs)]
    explored = 0

    def assign(m, inv, s, x, y):
        cur = m[s][x]
        if cur == y:
            return 0
        if cur != -1 or inv[s][y] != -1 or ps[s][x] != pt[s][y]:
            return -1
        m[s][x] = y
        inv[s][y] = x
        return 1

    def propagate(m, inv):
        changed = True
        while changed:
            changed = False
            for ins, out, tab, ttab in funcs:
                for inp, val in tab.items():
                    img = tuple(m[s][i] for s, i in zip(ins, inp))
                    if -1 in img:
                        continue
                    tv = ttab.get(img)
                    if tv is None:
                        return False
                    r = assign(m, inv, out, val, tv)
                    if r < 0:
                        return False
                    changed = changed or r > 0
        return True

    def solve(m, inv):
        nonlocal explored
        best = None
        for s, n in S.sizes.items():
            for x in range(n):
                if m[s][x] == -1:
                    free = [y for y in cands[s][x] if inv[s][y] == -1]
                    if best is None or len(free) < len(best[2]):
                        best = (s, x, free)
                        if not free:
                            return None
        if best is None:
            return m
        s, x, free = best
        for y in free:
            explored += 1
            m2 = {k: v[:] for k, v in m.items()}
            inv2 = {k: v[:] for k, v in inv.items()}
            assign(m2, inv2, s, x, y)
            if propagate(m2, inv2):
                found = solve(m2, inv2)
                if found is not None:
                    return found
        return None

    m = {s: [-1] * n for s, n in S.sizes.items()}
    inv = {s: [-1] * n for s, n in S.sizes.items()}
    result = solve(m, inv) if propagate(m, inv) else None
    if result is None:
        return IsoWitness(None, explored)
    for ins, out, tab, ttab in funcs:  # re-validate the witness on both sides
        for inp, val in tab.items():
            img = tuple(result[s][i] for s, i in zip(ins, inp))
            if ttab.get(img) != result[out][val]:
                return IsoWitness(None, explored)
    return IsoWitness({s: tuple(v) for s, v in result.items()}, explored)


def _cap(n, cap, what):
    if n > cap:
        raise SearchBudgetExceeded(f"{what} of size {n} exceeds the search cap {cap}")


def _alg_struct(alg, colors=None):
    R = _Alg(alg)
    st = _Sorted()
    st.sort("elements", R.n, colors)
    st.algebra(R, "elements", "")
    return st, R


def find_algebra_iso(A, B) -> IsoWitness:
    """Isomorphism of groups with operations (complete for up to 12 elements)."""
    _cap(max(A.size, B.size), ALGEBRA_CAP, "algebra")
    sa, ra = _alg_struct(A)
    sb, rb = _alg_struct(B)
    if A.size != B.size or ra.sig() != rb.sig():
        return IsoWitness(None, 0)
    return _search(sa, sb)


def _gpd_struct(G, obj_colors=None, arr_colors=None):
    R = _Gpd(G)
    st = _Sorted()
    st.sort("objects", R.k, obj_colors)
    st.sort("arrows", R.m, arr_colors)
    st.func("src", ("arrows",), "objects", {(a,): R.src[a] for a in range(R.m)})
    st.func("tgt", ("arrows",), "objects", {(a,): R.tgt[a] for a in range(R.m)})
    st.func("id", ("objects",), "arrows", {(x,): R.ident[x] for x in range(R.k)})
    st.func("comp", ("arrows", "arrows"), "arrows", dict(R.comp))
    return st, R


def find_groupoid_iso(G, H) -> IsoWitness:
    """Isomorphism of finite groupoids (up to 16 arrows)."""
    _cap(max(G.num_arrows, H.num_arrows), GROUPOID_CAP, "groupoid")
    if (G.num_arrows, G.num_objects) != (H.num_arrows, H.num_objects):
        return IsoWitness(None, 0)
    return _search(_gpd_struct(G)[0], _gpd_struct(H)[0])


def _internal_struct(G, obj_colors=None, arr_colors=None):
    st, _ = _gpd_struct(G.gpd, obj_colors, arr_colors)
    st.algebra(_Alg(G.arrow_alg), "arrows", "A")
    st.algebra(_Alg(G.object_alg), "objects", "O")
    return st


def find_internal_iso(G, H) -> IsoWitness:
    """Isomorphism of internal groupoids: groupoid iso that is also an algebra iso."""
    _cap(max(G.gpd.num_arrows, H.gpd.num_arrows), GROUPOID_CAP, "internal groupoid")
    if _Alg(G.arrow_alg).sig() != _Alg(H.arrow_alg).sig():
        return IsoWitness(None, 0)
    return _search(_internal_struct(G), _internal_struct(H))


def _xmod_struct(X):
    A, B, alpha, dot, stars = _xmod_raw(X)
    st = _Sorted()
    st.sort("A", A.n)
    st.sort("B", B.n)
    st.algebra(A, "A", "A")
    st.algebra(B, "B", "B")
    st.func("alpha", ("A",), "B", {(a,): alpha[a] for a in range(A.n)})
    pairs = [(b, a) for b in range(B.n) for a in range(A.n)]
    st.func("dot", ("B", "A"), "A", {(b, a): dot[b][a] for b, a in pairs})
    for k, t in stars.items():
        st.func(f"star{k}", ("B", "A"), "A", {(b, a): t[b][a] for b, a in pairs})
    return st, A


def find_xmod_iso(X, Y) -> IsoWitness:
    """Pair of algebra isomorphisms commuting with alpha and the actions."""
    for Z in (X, Y):
        _cap(max(Z.A.size, Z.B.size), XMOD_CAP, "crossed module algebra")
    sx, ax = _xmod_struct(X)
    sy, ay = _xmod_struct(Y)
    if ax.sig() != ay.sig():
        return IsoWitness(None, 0)
    return _search(sx, sy)


def _same_base(G, H) -> bool:
    return _Gpd(G).key() == _Gpd(H).key()


def find_cover_iso(p, q) -> IsoWitness:
    """Isomorphism ``r`` of covers over one base with ``q r = p``.

    Objects are searched fibre by fibre; once an object is placed, every arrow
    out of it is forced through the lifting functions.
    """
    from .internal import InternalMorphism

    internal = isinstance(p, InternalMorphism)
    if internal != isinstance(q, InternalMorphism):
        return IsoWitness(None, 0)
    gp = p.gpd_morphism if internal else p
    gq = q.gpd_morphism if internal else q
    _cap(max(gp.source.num_arrows, gq.source.num_arrows), COVER_CAP, "cover")
    if not _same_base(gp.target, gq.target):
        return IsoWitness(None, 0)
    if internal and _Alg(p.target.arrow_alg).key() != _Alg(q.target.arrow_alg).key():
        return IsoWitness(None, 0)

    def build(f, G_int):
        S = _Gpd(f.source)
        am, om = _l(f.arrow_map), _l(f.object_map)
        if G_int is not None:
            st = _internal_struct(G_int, om, am)
        else:
            st, _ = _gpd_struct(f.source, om, am)
        base = _Gpd(f.target)
        for g in range(base.m):
            st.func(
                f"lift{g}",
                ("objects",),
                "arrows",
                {(S.src[a],): a for a in range(S.m) if am[a] == g},
            )
        return st

    return _search(build(gp, p.source if internal else None), build(gq, q.source if internal else None))


def find_action_iso(act1, act2) -> IsoWitness:
    """Bijection of acted sets over the same groupoid respecting theta and phi
    (and the algebra operations, for internal actions)."""
    from .internal import InternalAction

    internal = isinstance(act1, InternalAction)
    if internal != isinstance(act2, InternalAction):
        return IsoWitness(None, 0)
    g1 = act1.gpd_action if internal else act1
    g2 = act2.gpd_action if internal else act2
    _cap(max(g1.size, g2.size), ACTION_CAP, "action")
    if not _same_base(g1.groupoid, g2.groupoid):
        return IsoWitness(None, 0)

    def build(act, X):
        st = _Sorted()
        st.sort("elements", act.size, _l(act.theta))
        phi = _ll(act.phi)
        for a in range(act.groupoid.num_arrows):
            st.func(
                f"phi{a}",
                ("elements",),
                "elements",
                {(x,): phi[x][a] for x in range(act.size) if phi[x][a] >= 0},
            )
        if X is not None:
            st.algebra(_Alg(X), "elements", "X")
        return st

    return _search(
        build(g1, act1.X if internal else None), build(g2, act2.X if internal else None)
    )
