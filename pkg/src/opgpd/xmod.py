"""Crossed modules, their morphisms and covers, and the passage to and from
internal groupoids.

Conventions for :func:`xmod_to_internal`: the arrow algebra is the
semidirect product of B acting on A, arrow ``(b, a)`` (stored at
``b*|A| + a``) runs from ``b`` to ``b + alpha(a)``, and
``(b, a)∘(b + alpha(a), a') = (b, a + a')``.
"""

from __future__ import annotations

import numpy as np

from .algebra import (
    AlgebraHom,
    DerivedActionData,
    OpAlgebra,
    SubSet,
    derived_action_report,
    homomorphism_report,
    require_same_signature,
    semidirect_product,
    subalgebra,
    validate_algebra,
)
from .errors import ComponentInvalid, InvalidMorphism, MalformedTable
from .groupoid import FinGroupoid
from .internal import (
    InternalGroupoid,
    InternalMorphism,
    _require_valid,
    ker_d0_component,
)
from .report import MAX_COUNTEREXAMPLES, ValidationReport
from .algebra import _table


class CrossedModule:
    """``alpha: A -> B`` together with derived actions of B on A."""

    def __init__(self, A: OpAlgebra, B: OpAlgebra, alpha, action: DerivedActionData):
        require_same_signature(A, B, "A and B")
        if action.actor is not B and action.actor != B:
            raise MalformedTable("action: actor must be B")
        if action.acted is not A and action.acted != A:
            raise MalformedTable("action: acted algebra must be A")
        self.A = A
        self.B = B
        self.alpha = _table(alpha, (A.size,), B.size, "alpha")
        self.action = action

    @property
    def dot(self):
        return self.action.dot

    @property
    def star_actions(self):
        return self.action.star_actions

    def alpha_hom(self) -> AlgebraHom:
        return AlgebraHom(self.A, self.B, self.alpha)

    @classmethod
    def make(cls, A, B, alpha, dot=None, star_actions=None):
        """Build from raw tables; omitted actions default to the trivial ones."""
        if dot is None and star_actions is None:
            act = DerivedActionData.trivial(B, A)
        else:
            base = DerivedActionData.trivial(B, A)
            act = DerivedActionData(
                B, A,
                base.dot if dot is None else dot,
                base.star_actions if star_actions is None else star_actions,
            )
        return cls(A, B, alpha, act)

    def __repr__(self):
        return f"<CrossedModule |A|={self.A.size} |B|={self.B.size}>"


def validate_xmod(X: CrossedModule) -> ValidationReport:
    """Derived-action validity, alpha a homomorphism, and CM1 to CM4."""
    comp = ValidationReport()
    comp.merge(validate_algebra(X.A), "A")
    comp.merge(validate_algebra(X.B), "B")
    if not comp.ok:
        raise ComponentInvalid("A or B is not a valid algebra", comp)
    A, B, alpha, dot = X.A, X.B, X.alpha, X.dot
    rep = ValidationReport()
    rep.merge(homomorphism_report(X.alpha_hom()), "alpha")
    rep.merge(derived_action_report(X.action), "derived")
    b = np.arange(B.size)[:, None]
    a = np.arange(A.size)[None, :]
    # CM1: alpha(b.a) = b + alpha(a) - b, indexed [b, a]
    cm1 = alpha[dot] != B.add[B.add[b, alpha[a]], B.neg[b]]
    rep.record("CM1", np.argwhere(cm1)[:MAX_COUNTEREXAMPLES])
    # CM2: alpha(a).a' = a + a' - a, indexed [a, a']
    a1 = np.arange(A.size)[:, None]
    cm2 = dot[alpha[a1], a] != A.add[A.add[a1, a], A.neg[a1]]
    rep.record("CM2", np.argwhere(cm2)[:MAX_COUNTEREXAMPLES])
    for op, tab in A.binary_ops.items():
        star = X.star_actions[op]
        opp = X.star_actions[A.opposites[op]]
        rep.record(f"CM3[{op}]", np.argwhere(star[alpha[a1], a] != tab)[:MAX_COUNTEREXAMPLES])
        left = alpha[star] != B.binary_ops[op][b, alpha[a]]          # [b, a]
        rep.record(f"CM4.left[{op}]", np.argwhere(left)[:MAX_COUNTEREXAMPLES])
        right = alpha[opp.T] != B.binary_ops[op][alpha[:, None], b.T]  # [a, b]
        rep.record(f"CM4.right[{op}]", np.argwhere(right)[:MAX_COUNTEREXAMPLES])
    return rep


def is_xmod(X: CrossedModule) -> bool:
    try:
        return validate_xmod(X).ok
    except ComponentInvalid:
        return False


class XModMorphism:
    def __init__(self, source: CrossedModule, target: CrossedModule, f1, f2):
        self.source = source
        self.target = target
        self.f1 = _table(f1, (source.A.size,), target.A.size, "f1")
        self.f2 = _table(f2, (source.B.size,), target.B.size, "f2")


def identity_xmod_morphism(X: CrossedModule) -> XModMorphism:
    return XModMorphism(X, X, np.arange(X.A.size), np.arange(X.B.size))


def xmod_morphism_report(m: XModMorphism) -> ValidationReport:
    for X in (m.source, m.target):
        if not is_xmod(X):
            raise ComponentInvalid("source or target is not a crossed module")
    S, T, f1, f2 = m.source, m.target, m.f1, m.f2
    rep = ValidationReport()
    rep.merge(homomorphism_report(AlgebraHom(S.A, T.A, f1)), "f1")
    rep.merge(homomorphism_report(AlgebraHom(S.B, T.B, f2)), "f2")
    rep.record("xmor.alpha", [(a,) for a in np.flatnonzero(f2[S.alpha] != T.alpha[f1])])
    b = np.arange(S.B.size)[:, None]
    a = np.arange(S.A.size)[None, :]
    rep.record("xmor.dot", np.argwhere(f1[S.dot] != T.dot[f2[b], f1[a]])[:MAX_COUNTEREXAMPLES])
    for op, tab in S.star_actions.items():
        bad = f1[tab] != T.star_actions[op][f2[b], f1[a]]
        rep.record(f"xmor.star[{op}]", np.argwhere(bad)[:MAX_COUNTEREXAMPLES])
    return rep


def is_xmod_morphism(m: XModMorphism) -> bool:
    return xmod_morphism_report(m).ok


def is_xmod_cover(m: XModMorphism) -> bool:
    """A morphism whose A-component is an isomorphism."""
    if not is_xmod_morphism(m):
        raise InvalidMorphism("not a crossed module morphism")
    return m.source.A.size == m.target.A.size and len(set(m.f1.tolist())) == m.source.A.size


# ---------------------------------------------------------------- translations


def internal_to_xmod(G: InternalGroupoid) -> CrossedModule:
    """A = kernel of the source map, B = objects, alpha = target map on A.

    ``b.a = eps(b) + a - eps(b)`` and ``b*a = eps(b)*a``.
    """
    _require_valid(G)
    K = ker_d0_component(G)
    A, emb = subalgebra(K)
    emb = np.array(emb, dtype=np.int64)
    back = np.full(G.gpd.num_arrows, -1, dtype=np.int64)
    back[emb] = np.arange(len(emb))
    B = G.object_alg
    arr = G.arrow_alg
    eps = G.gpd.identity
    e = eps[:, None]
    k = emb[None, :]
    dot = back[arr.add[arr.add[e, k], arr.neg[e]]]
    stars = {op: back[tab[e, k]] for op, tab in arr.binary_ops.items()}
    if (dot < 0).any() or any((s < 0).any() for s in stars.values()):
        raise ComponentInvalid("induced action leaves the kernel of the source map")
    return CrossedModule(A, B, G.gpd.tgt[emb], DerivedActionData(B, A, dot, stars))


def xmod_to_internal(X: CrossedModule) -> InternalGroupoid:
    rep = validate_xmod(X)
    if not rep.ok:
        raise ComponentInvalid(f"not a crossed module: {rep.failed_checks()}", rep)
    A, B = X.A, X.B
    na, nb = A.size, B.size
    arrows = semidirect_product(X.action)
    bs = np.repeat(np.arange(nb), na)
    as_ = np.tile(np.arange(na), nb)
    src = bs
    tgt = B.add[bs, X.alpha[as_]]
    comp = {}
    for i in range(nb * na):
        b, a, t = int(bs[i]), int(as_[i]), int(tgt[i])
        for a2 in range(na):
            comp[(i, t * na + a2)] = b * na + int(A.add[a, a2])
    gpd = FinGroupoid(
        nb, src, tgt, np.arange(nb) * na, comp,
        arrow_labels=[f"({b},{a})" for b in range(nb) for a in range(na)],
    )
    G = InternalGroupoid(gpd, arrows, B)
    _require_valid(G)
    return G


def cover_correspondence(p: InternalMorphism) -> XModMorphism:
    """The crossed-module morphism ``(f1, f2)`` induced by ``p``.

    ``f1`` is ``p`` on the kernels of the source maps, ``f2`` is ``p`` on objects.
    """
    from .internal import internal_morphism_report

    rep = internal_morphism_report(p)
    if not rep.ok:
        raise ComponentInvalid(f"not an internal morphism: {rep.failed_checks()}", rep)
    S, T = internal_to_xmod(p.source), internal_to_xmod(p.target)
    ks = np.flatnonzero(p.source.gpd.src == 0)
    kt = np.flatnonzero(p.target.gpd.src == 0)
    back = np.full(p.target.gpd.num_arrows, -1, dtype=np.int64)
    back[kt] = np.arange(len(kt))
    f1 = back[p.arrow_map[ks]]
    if (f1 < 0).any():
        raise ComponentInvalid("morphism does not preserve the kernel of the source map")
    return XModMorphism(S, T, f1, p.object_map)
