"""Shared builders for the test modules: relabelings and small batteries."""

from __future__ import annotations

import random

import numpy as np

from opgpd import catalog as cat
from opgpd.algebra import OpAlgebra
from opgpd.groupoid import FinGroupoid, GpdMorphism, group_times_pair, one_object, pair_groupoid
from opgpd.internal import InternalAction, InternalGroupoid, InternalMorphism


def relabel_algebra(A: OpAlgebra, perm) -> OpAlgebra:
    """Copy of ``A`` with element ``a`` renamed ``perm[a]`` (``perm[0]`` must be 0)."""
    perm = np.asarray(perm)
    inv = np.argsort(perm)

    def bin_(t):
        return perm[t[np.ix_(inv, inv)]]

    return OpAlgebra(
        bin_(A.add),
        perm[A.neg[inv]],
        {k: bin_(t) for k, t in A.binary_ops.items()},
        {k: perm[t[inv]] for k, t in A.unary_ops.items()},
        opposites=A.opposites,
        identities=A.identities,
    )


def zero_fixing_perm(n: int, rng: random.Random):
    rest = list(range(1, n))
    rng.shuffle(rest)
    return [0] + rest


def relabel_groupoid(G: FinGroupoid, arrow_perm, object_perm) -> FinGroupoid:
    ap, op = np.asarray(arrow_perm), np.asarray(object_perm)
    ainv, oinv = np.argsort(ap), np.argsort(op)
    comp = {(int(ap[a]), int(ap[b])): int(ap[c]) for (a, b), c in G.comp.items()}
    return FinGroupoid(
        G.num_objects,
        op[G.src[ainv]],
        op[G.tgt[ainv]],
        ap[G.identity[oinv]],
        comp,
    )


def relabel_cover(p: GpdMorphism, rng: random.Random) -> GpdMorphism:
    """The same cover with its source's arrows and objects shuffled."""
    S = p.source
    ap = list(range(S.num_arrows))
    op = list(range(S.num_objects))
    rng.shuffle(ap)
    rng.shuffle(op)
    S2 = relabel_groupoid(S, ap, op)
    ainv, oinv = np.argsort(ap), np.argsort(op)
    return GpdMorphism(S2, p.target, p.arrow_map[ainv], p.object_map[oinv])


def relabel_internal_cover(p: InternalMorphism, rng: random.Random) -> InternalMorphism:
    """Internal cover with both the arrow and object algebras renamed (zero kept)."""
    S = p.source
    ap = zero_fixing_perm(S.gpd.num_arrows, rng)
    op = zero_fixing_perm(S.gpd.num_objects, rng)
    S2 = InternalGroupoid(
        relabel_groupoid(S.gpd, ap, op),
        relabel_algebra(S.arrow_alg, ap),
        relabel_algebra(S.object_alg, op),
    )
    ainv, oinv = np.argsort(ap), np.argsort(op)
    return InternalMorphism(S2, p.target, p.arrow_map[ainv], p.object_map[oinv])


def relabel_internal_action(act: InternalAction, rng: random.Random) -> InternalAction:
    perm = zero_fixing_perm(act.X.size, rng)
    inv = np.argsort(perm)
    phi = act.phi[inv]
    phi = np.where(phi >= 0, np.asarray(perm)[np.maximum(phi, 0)], -1)
    return InternalAction(act.G, relabel_algebra(act.X, perm), act.theta[inv], phi)


def transitive_groupoids() -> dict[str, FinGroupoid]:
    """Transitive test groupoids with at most 16 arrows."""
    return {
        "Z4": one_object(cat.cyclic(4)),
        "V4": one_object(cat.klein()),
        "S3": one_object(cat.s3()),
        "Z6": one_object(cat.cyclic(6)),
        "pair3": pair_groupoid(3),
        "Z2xpair2": group_times_pair(cat.cyclic(2), 2),
        "Z4xpair2": group_times_pair(cat.cyclic(4), 2),
        "V4xpair2": group_times_pair(cat.klein(), 2),
    }


def brute_subgroups(G: FinGroupoid, x: int) -> list[frozenset[int]]:
    """Every subset of the object group at ``x`` closed under composition and inverses."""
    group = list(G.object_group(x))
    e = int(G.identity[x])
    others = [g for g in group if g != e]
    out = []
    for mask in range(1 << len(others)):
        S = {e} | {others[i] for i in range(len(others)) if mask >> i & 1}
        if all(G.comp[(a, b)] in S for a in S for b in S):
            out.append(frozenset(S))
    return out
