"""Finite groupoids, covering morphisms, lifting and groupoid actions.

Composition is written in diagrammatic order: ``a∘b`` is defined when
``tgt(a) == src(b)`` and runs from ``src(a)`` to ``tgt(b)``.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .algebra import OpAlgebra, _table
from .errors import (
    CharacteristicGroupNotContained,
    InvalidAction,
    InvalidMorphism,
    MalformedTable,
    NotACovering,
    NotASubgroup,
    NotTransitive,
    UnknownObject,
)
from .report import MAX_COUNTEREXAMPLES, ValidationReport


def _comp_dict(comp, m):
    if isinstance(comp, Mapping):
        items = [(k[0], k[1], v) for k, v in comp.items()]
    else:
        items = [tuple(t) for t in comp]
    out = {}
    for t in items:
        if len(t) != 3:
            raise MalformedTable(f"comp: entries must be (a, b, a∘b) triples, got {t!r}")
        a, b, c = (int(v) for v in t)
        if not (0 <= a < m and 0 <= b < m and 0 <= c < m):
            raise MalformedTable(f"comp: arrow index out of range in {t!r}")
        if (a, b) in out:
            raise MalformedTable(f"comp: pair ({a}, {b}) listed twice")
        out[(a, b)] = c
    return out


class FinGroupoid:
    """A finite groupoid with a sparse composition table."""

    def __init__(
        self,
        num_objects: int,
        src,
        tgt,
        identity,
        comp,
        object_labels=None,
        arrow_labels=None,
    ):
        if num_objects < 1:
            raise MalformedTable("objects: a groupoid needs at least one object")
        src = np.asarray(src, dtype=np.int64)
        m = src.shape[0] if src.ndim == 1 else -1
        if m < 1:
            raise MalformedTable("src: expected a non-empty list")
        self.src = _table(src, (m,), num_objects, "src")
        self.tgt = _table(tgt, (m,), num_objects, "tgt")
        self.identity = _table(identity, (num_objects,), m, "identity")
        self.comp = _comp_dict(comp, m)
        self.object_labels = tuple(object_labels) if object_labels is not None else tuple(
            str(i) for i in range(num_objects)
        )
        self.arrow_labels = tuple(arrow_labels) if arrow_labels is not None else tuple(
            str(i) for i in range(m)
        )
        if len(self.object_labels) != num_objects:
            raise MalformedTable("objects: label count differs from object count")
        if len(self.arrow_labels) != m:
            raise MalformedTable("arrows: label count differs from arrow count")

    @property
    def num_objects(self) -> int:
        return self.identity.shape[0]

    @property
    def num_arrows(self) -> int:
        return self.src.shape[0]

    @cached_property
    def comp_table(self) -> np.ndarray:
        """Dense composition table, ``-1`` where undefined."""
        m = self.num_arrows
        t = np.full((m, m), -1, dtype=np.int64)
        for (a, b), c in self.comp.items():
            t[a, b] = c
        t.flags.writeable = False
        return t

    def compose(self, a: int, b: int) -> int | None:
        return self.comp.get((a, b))

    def _check_object(self, x):
        if not (0 <= x < self.num_objects):
            raise UnknownObject(f"no object {x} (groupoid has {self.num_objects})")

    def star(self, x: int) -> tuple[int, ...]:
        self._check_object(x)
        return tuple(np.flatnonzero(self.src == x).tolist())

    def hom(self, x: int, y: int) -> tuple[int, ...]:
        self._check_object(x)
        self._check_object(y)
        return tuple(np.flatnonzero((self.src == x) & (self.tgt == y)).tolist())

    def object_group(self, x: int) -> tuple[int, ...]:
        return self.hom(x, x)

    @cached_property
    def hom_counts(self) -> np.ndarray:
        k = self.num_objects
        counts = np.zeros((k, k), dtype=np.int64)
        np.add.at(counts, (self.src, self.tgt), 1)
        return counts

    @cached_property
    def inverse(self) -> np.ndarray:
        """Inverse of each arrow, ``-1`` if it has none."""
        inv = np.full(self.num_arrows, -1, dtype=np.int64)
        for a in range(self.num_arrows):
            for b in np.flatnonzero((self.src == self.tgt[a]) & (self.tgt == self.src[a])):
                if (
                    self.comp.get((a, int(b))) == self.identity[self.src[a]]
                    and self.comp.get((int(b), a)) == self.identity[self.tgt[a]]
                ):
                    inv[a] = b
                    break
        return inv

    def __eq__(self, other):
        if not isinstance(other, FinGroupoid):
            return NotImplemented
        return (
            self.num_objects == other.num_objects
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.tgt, other.tgt)
            and np.array_equal(self.identity, other.identity)
            and self.comp == other.comp
        )

    __hash__ = None

    def __repr__(self):
        return f"<FinGroupoid objects={self.num_objects} arrows={self.num_arrows}>"


# ---------------------------------------------------------------- constructors


def one_object(alg_or_table, labels=None) -> FinGroupoid:
    """The one-object groupoid of a group (composition is the group addition)."""
    table = alg_or_table.add if isinstance(alg_or_table, OpAlgebra) else np.asarray(alg_or_table)
    n = table.shape[0]
    comp = {(a, b): int(table[a, b]) for a in range(n) for b in range(n)}
    return FinGroupoid(1, [0] * n, [0] * n, [0], comp, arrow_labels=labels)


def discrete(k: int) -> FinGroupoid:
    return FinGroupoid(k, range(k), range(k), range(k), {(i, i): i for i in range(k)})


def pair_groupoid(k: int) -> FinGroupoid:
    """Exactly one arrow ``i -> j`` for every pair; arrow ``(i, j)`` is ``i*k + j``."""
    comp = {(i * k + j, j * k + l): i * k + l for i in range(k) for j in range(k) for l in range(k)}
    return FinGroupoid(
        k,
        [i for i in range(k) for _ in range(k)],
        [j for _ in range(k) for j in range(k)],
        [i * k + i for i in range(k)],
        comp,
        arrow_labels=[f"{i}>{j}" for i in range(k) for j in range(k)],
    )


def group_times_pair(alg: OpAlgebra, k: int) -> FinGroupoid:
    """Arrows ``(i, j, g)`` at ``(i*k + j)*n + g``; every object group is the group."""
    n = alg.size

    def idx(i, j, g):
        return (i * k + j) * n + g

    comp = {
        (idx(i, j, g), idx(j, l, h)): idx(i, l, int(alg.add[g, h]))
        for i in range(k) for j in range(k) for l in range(k)
        for g in range(n) for h in range(n)
    }
    src = [i for i in range(k) for j in range(k) for g in range(n)]
    tgt = [j for i in range(k) for j in range(k) for g in range(n)]
    return FinGroupoid(k, src, tgt, [idx(i, i, 0) for i in range(k)], comp)


# ---------------------------------------------------------------- validation


def validate_groupoid(G: FinGroupoid) -> ValidationReport:
    """Check the groupoid axioms exhaustively; failures carry arrow/object tuples."""
    rep = ValidationReport()
    objs = np.arange(G.num_objects)
    ident = G.identity
    rep.record("gpd.identity_src", [(x,) for x in np.flatnonzero(G.src[ident] != objs)])
    rep.record("gpd.identity_tgt", [(x,) for x in np.flatnonzero(G.tgt[ident] != objs)])
    comp = G.comp_table
    composable = G.tgt[:, None] == G.src[None, :]
    defined = comp >= 0
    rep.record("gpd.comp_domain", np.argwhere(composable != defined)[:MAX_COUNTEREXAMPLES])
    a_idx, b_idx = np.nonzero(defined)
    c_idx = comp[a_idx, b_idx]
    bad_src = np.flatnonzero(G.src[c_idx] != G.src[a_idx])
    bad_tgt = np.flatnonzero(G.tgt[c_idx] != G.tgt[b_idx])
    rep.record("gpd.comp_src", [(a_idx[i], b_idx[i]) for i in bad_src[:MAX_COUNTEREXAMPLES]])
    rep.record("gpd.comp_tgt", [(a_idx[i], b_idx[i]) for i in bad_tgt[:MAX_COUNTEREXAMPLES]])
    rep.record("gpd.assoc", kernels.partial_assoc_failures(comp, MAX_COUNTEREXAMPLES))
    arrows = np.arange(G.num_arrows)
    left = comp[ident[G.src], arrows]
    right = comp[arrows, ident[G.tgt]]
    rep.record("gpd.left_unit", [(a,) for a in np.flatnonzero(left != arrows)])
    rep.record("gpd.right_unit", [(a,) for a in np.flatnonzero(right != arrows)])
    rep.record("gpd.inverse", [(a,) for a in np.flatnonzero(G.inverse < 0)])
    return rep


def is_transitive(G: FinGroupoid) -> bool:
    return bool((G.hom_counts > 0).all())


def star(G: FinGroupoid, x: int):
    return G.star(x)


def object_group(G: FinGroupoid, x: int):
    return G.object_group(x)


# ---------------------------------------------------------------- morphisms


class GpdMorphism:
    def __init__(self, source: FinGroupoid, target: FinGroupoid, arrow_map, object_map):
        self.source = source
        self.target = target
        self.arrow_map = _table(arrow_map, (source.num_arrows,), target.num_arrows, "arrow_map")
        self.object_map = _table(object_map, (source.num_objects,), target.num_objects, "object_map")

    def __repr__(self):
        return f"<GpdMorphism {self.source!r} -> {self.target!r}>"


def identity_morphism(G: FinGroupoid) -> GpdMorphism:
    return GpdMorphism(G, G, np.arange(G.num_arrows), np.arange(G.num_objects))


def after(q: GpdMorphism, r: GpdMorphism) -> GpdMorphism:
    """The composite ``q r``: apply ``r`` first."""
    if r.target != q.source:
        raise InvalidMorphism("composite: target of the first map is not the source of the second")
    return GpdMorphism(r.source, q.target, q.arrow_map[r.arrow_map], q.object_map[r.object_map])


def morphism_report(f: GpdMorphism) -> ValidationReport:
    S, T = f.source, f.target
    am, om = f.arrow_map, f.object_map
    rep = ValidationReport()
    rep.record("morph.src", [(a,) for a in np.flatnonzero(T.src[am] != om[S.src])])
    rep.record("morph.tgt", [(a,) for a in np.flatnonzero(T.tgt[am] != om[S.tgt])])
    rep.record("morph.identity", [(x,) for x in np.flatnonzero(am[S.identity] != T.identity[om])])
    bad = ((a, b) for (a, b), c in sorted(S.comp.items()) if T.comp.get((int(am[a]), int(am[b]))) != am[c])
    rep.record("morph.comp", bad)
    return rep


def is_morphism(f: GpdMorphism) -> bool:
    return morphism_report(f).ok


def is_isomorphism(f: GpdMorphism) -> bool:
    return (
        f.source.num_arrows == f.target.num_arrows
        and f.source.num_objects == f.target.num_objects
        and len(set(f.arrow_map.tolist())) == f.source.num_arrows
        and len(set(f.object_map.tolist())) == f.source.num_objects
        and is_morphism(f)
    )


def _require_morphism(f: GpdMorphism):
    rep = morphism_report(f)
    if not rep.ok:
        raise InvalidMorphism(f"not a groupoid morphism: {rep.failed_checks()}")


def covering_failures(f: GpdMorphism) -> list[int]:
    """Objects of the source whose star does not map bijectively."""
    S, T = f.source, f.target
    out = []
    for x in range(S.num_objects):
        images = np.sort(f.arrow_map[S.src == x])
        expected = np.flatnonzero(T.src == f.object_map[x])
        if images.shape != expected.shape or not np.array_equal(images, expected):
            out.append(x)
    return out


def is_covering(p: GpdMorphism) -> bool:
    """True iff ``p`` restricts to a bijection on every star."""
    _require_morphism(p)
    return not covering_failures(p)


def _require_covering(p: GpdMorphism):
    if not is_covering(p):
        raise NotACovering("morphism is not a covering")


def is_universal_cover(p: GpdMorphism) -> bool:
    _require_covering(p)
    return (
        is_transitive(p.source)
        and is_transitive(p.target)
        and bool((p.source.hom_counts <= 1).all())
    )


def characteristic_group(p: GpdMorphism, x: int) -> frozenset[int]:
    """Image under ``p`` of the object group of the source at ``x``."""
    return frozenset(int(p.arrow_map[a]) for a in p.source.object_group(x))


def _star_lifts(p: GpdMorphism) -> dict[tuple[int, int], int]:
    # (source object, target arrow) -> the unique source arrow over it
    return {
        (int(p.source.src[a]), int(p.arrow_map[a])): a for a in range(p.source.num_arrows)
    }


def lift_morphism(p: GpdMorphism, f: GpdMorphism, z: int, x_tilde: int) -> GpdMorphism:
    """The unique ``f~: (H, z) -> (G~, x~)`` with ``p f~ = f``.

    Objects of ``H`` are lifted along a chosen arrow from ``z``; every arrow is
    then lifted through the star bijection at the lift of its source. If some
    lifted arrow ends at the wrong object the characteristic group of ``f`` is
    not contained in that of ``p`` and the lift does not exist.
    """
    _require_covering(p)
    _require_morphism(f)
    if f.target != p.target:
        raise InvalidMorphism("f and p have different targets")
    H = f.source
    H._check_object(z)
    p.source._check_object(x_tilde)
    if not is_transitive(H):
        raise NotTransitive("the source of f must be transitive")
    if f.object_map[z] != p.object_map[x_tilde]:
        raise InvalidMorphism("base points do not lie over the same object")
    lifts = _star_lifts(p)
    obj = np.empty(H.num_objects, dtype=np.int64)
    for y in range(H.num_objects):
        path = H.identity[z] if y == z else H.hom(z, y)[0]
        obj[y] = p.source.tgt[lifts[(x_tilde, int(f.arrow_map[path]))]]
    arrows = np.empty(H.num_arrows, dtype=np.int64)
    for h in range(H.num_arrows):
        lifted = lifts[(int(obj[H.src[h]]), int(f.arrow_map[h]))]
        if p.source.tgt[lifted] != obj[H.tgt[h]]:
            raise CharacteristicGroupNotContained(
                f"arrow {h} of H lifts to an arrow ending off the lifted object; "
                f"characteristic group of f is not contained in that of p"
            )
        arrows[h] = lifted
    return GpdMorphism(H, p.source, arrows, obj)


def cover_between_covers(p: GpdMorphism, q: GpdMorphism, base_p: int, base_q: int) -> GpdMorphism:
    """The unique covering ``r`` with ``q r = p`` between transitive pointed covers."""
    _require_covering(p)
    _require_covering(q)
    if not (is_transitive(p.source) and is_transitive(q.source)):
        raise NotTransitive("both coverings must be transitive")
    r = lift_morphism(q, p, base_p, base_q)
    if covering_failures(r):  # cannot happen for valid inputs
        raise NotACovering("induced map between covers is not a covering")
    return r


# ---------------------------------------------------------------- actions


class GpdAction:
    """An action of a groupoid on the set ``0..size-1``.

    ``phi[x, a]`` is ``xa`` where defined and ``-1`` elsewhere.
    """

    def __init__(self, groupoid: FinGroupoid, size: int, theta, phi):
        if size < 1:
            raise MalformedTable("action: the acted set must be non-empty")
        self.groupoid = groupoid
        self.size = size
        self.theta = _table(theta, (size,), groupoid.num_objects, "theta")
        m = groupoid.num_arrows
        if isinstance(phi, Mapping):
            dense = np.full((size, m), -1, dtype=np.int64)
            for (x, a), y in phi.items():
                if not (0 <= x < size and 0 <= a < m):
                    raise MalformedTable(f"phi: pair ({x}, {a}) out of range")
                dense[x, a] = y
            phi = dense
        phi = np.array(phi, dtype=np.int64)
        if phi.shape != (size, m):
            raise MalformedTable(f"phi: expected shape {(size, m)}, got {phi.shape}")
        if phi.size and (phi.min() < -1 or phi.max() >= size):
            raise MalformedTable(f"phi: entries must be -1 or lie in 0..{size - 1}")
        phi.flags.writeable = False
        self.phi = phi

    def __eq__(self, other):
        if not isinstance(other, GpdAction):
            return NotImplemented
        return (
            self.groupoid == other.groupoid
            and self.size == other.size
            and np.array_equal(self.theta, other.theta)
            and np.array_equal(self.phi, other.phi)
        )

    __hash__ = None


def validate_action(act: GpdAction) -> ValidationReport:
    G, theta, phi = act.groupoid, act.theta, act.phi
    rep = ValidationReport()
    should = theta[:, None] == G.src[None, :]
    rep.record("action.domain", np.argwhere(should != (phi >= 0))[:MAX_COUNTEREXAMPLES])
    xs, as_ = np.nonzero(phi >= 0)
    bad = np.flatnonzero(theta[phi[xs, as_]] != G.tgt[as_])
    rep.record("action.target", [(xs[i], as_[i]) for i in bad[:MAX_COUNTEREXAMPLES]])

    def comp_failures():
        for x, a in zip(xs.tolist(), as_.tolist()):
            xa = int(phi[x, a])
            for b in np.flatnonzero(G.src == G.tgt[a]).tolist():
                ab = G.comp.get((a, b))
                lhs = phi[x, ab] if ab is not None else -1
                if lhs < 0 or lhs != phi[xa, b]:
                    yield (x, a, b)

    rep.record("action.comp", comp_failures())
    unit = phi[np.arange(act.size), G.identity[theta]]
    rep.record("action.unit", [(x,) for x in np.flatnonzero(unit != np.arange(act.size))])
    return rep


def canonical_action(G: FinGroupoid) -> GpdAction:
    """``G`` acting on its own objects: ``theta`` the identity, ``xa = tgt(a)``."""
    k = G.num_objects
    phi = np.full((k, G.num_arrows), -1, dtype=np.int64)
    phi[G.src, np.arange(G.num_arrows)] = G.tgt
    return GpdAction(G, k, np.arange(k), phi)


def action_pairs(act: GpdAction) -> list[tuple[int, int]]:
    """Arrows ``(a, x)`` of the action groupoid, in their index order."""
    return [(int(a), x) for x in range(act.size) for a in np.flatnonzero(act.phi[x] >= 0)]


def action_groupoid(act: GpdAction) -> tuple[FinGroupoid, GpdMorphism]:
    """The action groupoid and its projection (a covering) onto the acting groupoid."""
    rep = validate_action(act)
    if not rep.ok:
        raise InvalidAction(f"invalid action: {rep.failed_checks()}")
    G = act.groupoid
    pairs = action_pairs(act)
    index = {pr: i for i, pr in enumerate(pairs)}
    src = [x for (a, x) in pairs]
    tgt = [int(act.phi[x, a]) for (a, x) in pairs]
    ident = [index[(int(G.identity[act.theta[x]]), x)] for x in range(act.size)]
    comp = {}
    for i, (a, x) in enumerate(pairs):
        y = tgt[i]
        for b in np.flatnonzero(act.phi[y] >= 0).tolist():
            comp[(i, index[(b, y)])] = index[(G.comp[(a, b)], x)]
    labels = [f"({G.arrow_labels[a]},{x})" for (a, x) in pairs]
    cover = FinGroupoid(act.size, src, tgt, ident, comp, arrow_labels=labels)
    proj = GpdMorphism(cover, G, [a for (a, x) in pairs], act.theta)
    return cover, proj


def covering_action(p: GpdMorphism) -> GpdAction:
    """The action of the base on the objects of a cover by lifting arrows."""
    _require_covering(p)
    S, T = p.source, p.target
    phi = np.full((S.num_objects, T.num_arrows), -1, dtype=np.int64)
    phi[S.src, p.arrow_map] = S.tgt
    return GpdAction(T, S.num_objects, p.object_map, phi)


# ---------------------------------------------------------------- cosets


def _subgroup_closure(G: FinGroupoid, gens: Iterable[int], x: int) -> frozenset[int]:
    out = {int(G.identity[x])}
    frontier = list(gens)
    while frontier:
        g = frontier.pop()
        if g in out:
            continue
        out.add(g)
        for h in list(out):
            for c in (G.comp.get((g, h)), G.comp.get((h, g))):
                if c is not None and c not in out:
                    frontier.append(c)
    return frozenset(out)


def subgroups_of_object_group(G: FinGroupoid, x: int) -> list[frozenset[int]]:
    """All subgroups of ``G(x)``, smallest first."""
    group = G.object_group(x)
    found = {_subgroup_closure(G, [], x)}
    todo = list(found)
    while todo:
        H = todo.pop()
        for g in group:
            if g not in H:
                K = _subgroup_closure(G, list(H) + [g], x)
                if K not in found:
                    found.add(K)
                    todo.append(K)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def _require_subgroup(G: FinGroupoid, x: int, C: frozenset[int]):
    group = set(G.object_group(x))
    if not C or not C <= group:
        raise NotASubgroup(f"{sorted(C)} is not a subset of the object group at {x}")
    if int(G.identity[x]) not in C:
        raise NotASubgroup(f"{sorted(C)} does not contain the identity at {x}")
    inv = G.inverse
    for a in C:
        if inv[a] not in C:
            raise NotASubgroup(f"{sorted(C)} is not closed under inverses")
        for b in C:
            if G.comp[(a, b)] not in C:
                raise NotASubgroup(f"{sorted(C)} is not closed under composition")


def coset_action(G: FinGroupoid, x: int, C) -> tuple[GpdAction, list[tuple[int, ...]]]:
    """``G`` acting on the cosets ``C∘a`` (``a`` in the star of ``x``).

    Cosets are ordered by their least arrow, which is also their
    representative; returns the action and the member list of each coset.
    """
    G._check_object(x)
    C = frozenset(int(c) for c in C)
    if not is_transitive(G):
        raise NotTransitive("coset construction needs a transitive groupoid")
    _require_subgroup(G, x, C)
    cosets = sorted(
        {tuple(sorted(G.comp[(c, a)] for c in C)) for a in G.star(x)}, key=lambda s: s[0]
    )
    which = {}
    for k, members in enumerate(cosets):
        for a in members:
            which[a] = k
    theta = [int(G.tgt[members[0]]) for members in cosets]
    phi = np.full((len(cosets), G.num_arrows), -1, dtype=np.int64)
    for k, members in enumerate(cosets):
        rep = members[0]
        for g in np.flatnonzero(G.src == theta[k]).tolist():
            phi[k, g] = which[G.comp[(rep, g)]]
    return GpdAction(G, len(cosets), theta, phi), cosets


def coset_cover(G: FinGroupoid, x: int, C) -> tuple[FinGroupoid, GpdMorphism, int]:
    """Covering with characteristic group ``C`` at the coset ``C`` itself."""
    act, cosets = coset_action(G, x, C)
    cover, proj = action_groupoid(act)
    base = next(k for k, members in enumerate(cosets) if set(members) == set(int(c) for c in C))
    labels = [f"C∘{G.arrow_labels[m[0]]}" for m in cosets]
    cover.object_labels = tuple(labels)
    return cover, proj, base
