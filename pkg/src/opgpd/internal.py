"""Internal groupoids in a category of groups with operations.

An :class:`InternalGroupoid` is a finite groupoid whose arrows and objects
each carry an :class:`OpAlgebra` of one signature, with source, target,
identity and composition all compatible with the operations. Object ``0``
and arrow ``0`` are the zeros, and ``identity[0] == 0``.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .algebra import (
    AlgebraHom,
    OpAlgebra,
    SubSet,
    homomorphism_report,
    is_subobject,
    require_same_signature,
    trivial_algebra,
    validate_algebra,
)
from .errors import (
    ComponentInvalid,
    InvalidAction,
    InvalidMorphism,
    MalformedTable,
    NotACovering,
    NotASubobject,
    NotTransitive,
)
from .groupoid import (
    FinGroupoid,
    GpdAction,
    GpdMorphism,
    action_groupoid,
    action_pairs,
    canonical_action,
    characteristic_group,
    coset_action,
    covering_action,
    covering_failures,
    is_transitive,
    morphism_report,
    validate_action,
    validate_groupoid,
)
from .report import MAX_COUNTEREXAMPLES, ValidationReport


class InternalGroupoid:
    def __init__(self, gpd: FinGroupoid, arrow_alg: OpAlgebra, object_alg: OpAlgebra):
        if arrow_alg.size != gpd.num_arrows:
            raise MalformedTable("arrow algebra size differs from the number of arrows")
        if object_alg.size != gpd.num_objects:
            raise MalformedTable("object algebra size differs from the number of objects")
        require_same_signature(arrow_alg, object_alg, "arrow and object algebras")
        self.gpd = gpd
        self.arrow_alg = arrow_alg
        self.object_alg = object_alg

    @property
    def signature(self):
        return self.arrow_alg.signature

    def __eq__(self, other):
        if not isinstance(other, InternalGroupoid):
            return NotImplemented
        return (
            self.gpd == other.gpd
            and self.arrow_alg == other.arrow_alg
            and self.object_alg == other.object_alg
        )

    __hash__ = None

    def __repr__(self):
        return f"<InternalGroupoid objects={self.gpd.num_objects} arrows={self.gpd.num_arrows}>"

    @classmethod
    def one_object(cls, alg: OpAlgebra) -> "InternalGroupoid":
        """One object, arrows ``alg``, composition ``+``."""
        from .groupoid import one_object

        return cls(one_object(alg), alg, trivial_algebra(alg))

    @classmethod
    def discrete(cls, alg: OpAlgebra) -> "InternalGroupoid":
        """Identity arrows only, both algebras equal to ``alg``."""
        from .groupoid import discrete

        return cls(discrete(alg.size), alg, alg)


def _structure_homs(G: InternalGroupoid):
    A, O = G.arrow_alg, G.object_alg
    return {
        "d0": AlgebraHom(A, O, G.gpd.src),
        "d1": AlgebraHom(A, O, G.gpd.tgt),
        "eps": AlgebraHom(O, A, G.gpd.identity),
    }


def _components_report(G: InternalGroupoid) -> ValidationReport:
    rep = ValidationReport()
    rep.merge(validate_groupoid(G.gpd), "groupoid")
    rep.merge(validate_algebra(G.arrow_alg), "arrow_alg")
    rep.merge(validate_algebra(G.object_alg), "object_alg")
    return rep


def validate_internal(G: InternalGroupoid) -> ValidationReport:
    """Structure maps are homomorphisms, interchange holds, inverses are formulaic.

    Raises :class:`ComponentInvalid` if the underlying groupoid or either
    algebra is itself invalid.
    """
    comp_rep = _components_report(G)
    if not comp_rep.ok:
        raise ComponentInvalid("a component of the internal groupoid is invalid", comp_rep)
    rep = ValidationReport()
    for name, f in _structure_homs(G).items():
        rep.merge(homomorphism_report(f), name)
    rep.record("eps.zero", [()] if G.gpd.identity[0] != 0 else [])
    comp = G.gpd.comp_table
    A = G.arrow_alg
    for op in ("+",) + tuple(A.binary_ops):
        rep.record(
            f"interchange[{op}]",
            kernels.interchange_failures(comp, A.table(op), MAX_COUNTEREXAMPLES),
        )
    a_idx, c_idx = np.nonzero(comp >= 0)
    ac = comp[a_idx, c_idx]
    for w, f in A.unary_ops.items():
        lhs = f[ac]
        rhs = comp[f[a_idx], f[c_idx]]
        bad = np.flatnonzero(lhs != rhs)
        rep.record(f"interchange[{w}]", [(a_idx[i], c_idx[i]) for i in bad[:MAX_COUNTEREXAMPLES]])
    eps, d0, d1 = G.gpd.identity, G.gpd.src, G.gpd.tgt
    arrows = np.arange(G.gpd.num_arrows)
    formula = A.add[A.add[eps[d1], A.neg[arrows]], eps[d0]]
    rep.record("inverse_formula", [(a,) for a in np.flatnonzero(formula != G.gpd.inverse)])
    return rep


def is_internal(G: InternalGroupoid) -> bool:
    try:
        return validate_internal(G).ok
    except ComponentInvalid:
        return False


def ker_d0_component(G: InternalGroupoid) -> SubSet:
    """Kernel of the source map, that is the star of the zero object."""
    return SubSet(G.arrow_alg, tuple(np.flatnonzero(G.gpd.src == 0).tolist()))


def restrict(G: InternalGroupoid, objects) -> InternalGroupoid:
    """Full sub-internal-groupoid on ``objects`` (which must form a subobject)."""
    from .algebra import subalgebra

    objs = SubSet(G.object_alg, tuple(objects))
    O, _ = subalgebra(objs)
    omask = objs.mask()
    arrows = np.flatnonzero(omask[G.gpd.src] & omask[G.gpd.tgt])
    A, _ = subalgebra(SubSet(G.arrow_alg, tuple(arrows.tolist())))
    onew = np.full(G.gpd.num_objects, -1, dtype=np.int64)
    onew[list(objs.members)] = np.arange(len(objs))
    anew = np.full(G.gpd.num_arrows, -1, dtype=np.int64)
    anew[arrows] = np.arange(len(arrows))
    amask = anew >= 0
    comp = {
        (int(anew[a]), int(anew[b])): int(anew[c])
        for (a, b), c in G.gpd.comp.items()
        if amask[a] and amask[b]
    }
    gpd = FinGroupoid(
        len(objs),
        onew[G.gpd.src[arrows]],
        onew[G.gpd.tgt[arrows]],
        anew[G.gpd.identity[list(objs.members)]],
        comp,
    )
    return InternalGroupoid(gpd, A, O)


def component_of_zero(G: InternalGroupoid) -> InternalGroupoid:
    """The transitivity component of the zero object as an internal groupoid."""
    reach = sorted(set(G.gpd.tgt[G.gpd.src == 0].tolist()))
    return restrict(G, reach)


# ---------------------------------------------------------------- morphisms


class InternalMorphism:
    def __init__(self, source: InternalGroupoid, target: InternalGroupoid, arrow_map, object_map):
        self.source = source
        self.target = target
        self.gpd_morphism = GpdMorphism(source.gpd, target.gpd, arrow_map, object_map)

    @property
    def arrow_map(self):
        return self.gpd_morphism.arrow_map

    @property
    def object_map(self):
        return self.gpd_morphism.object_map

    def arrow_hom(self) -> AlgebraHom:
        return AlgebraHom(self.source.arrow_alg, self.target.arrow_alg, self.arrow_map)

    def object_hom(self) -> AlgebraHom:
        return AlgebraHom(self.source.object_alg, self.target.object_alg, self.object_map)

    def __repr__(self):
        return f"<InternalMorphism {self.source!r} -> {self.target!r}>"


def internal_morphism_report(p: InternalMorphism) -> ValidationReport:
    rep = ValidationReport()
    rep.merge(morphism_report(p.gpd_morphism))
    rep.merge(homomorphism_report(p.arrow_hom()), "arrow_hom")
    rep.merge(homomorphism_report(p.object_hom()), "object_hom")
    return rep


def identity_internal_morphism(G: InternalGroupoid) -> InternalMorphism:
    return InternalMorphism(G, G, np.arange(G.gpd.num_arrows), np.arange(G.gpd.num_objects))


def is_internal_covering(p: InternalMorphism) -> bool:
    """Covering on the underlying groupoids (the morphism must be valid)."""
    rep = internal_morphism_report(p)
    if not rep.ok:
        raise InvalidMorphism(f"not an internal morphism: {rep.failed_checks()}")
    return not covering_failures(p.gpd_morphism)


def star_restriction_is_iso(p: InternalMorphism) -> bool:
    """Whether ``p`` maps the star of ``0`` bijectively and additively onto the star of ``0``."""
    S, T = p.source, p.target
    s_star = np.flatnonzero(S.gpd.src == 0)
    t_star = np.flatnonzero(T.gpd.src == 0)
    images = p.arrow_map[s_star]
    if not np.array_equal(np.sort(images), t_star):
        return False
    return internal_morphism_report(p).ok


# ---------------------------------------------------------------- actions


class InternalAction:
    """An internal groupoid acting on an algebra ``X`` via ``theta``.

    ``phi[x, a]`` is ``xa`` where ``theta(x) == src(a)`` and ``-1`` elsewhere.
    """

    def __init__(self, G: InternalGroupoid, X: OpAlgebra, theta, phi):
        require_same_signature(X, G.arrow_alg, "acted algebra and groupoid")
        self.G = G
        self.X = X
        self.gpd_action = GpdAction(G.gpd, X.size, theta, phi)

    @property
    def theta(self):
        return self.gpd_action.theta

    @property
    def phi(self):
        return self.gpd_action.phi

    def __eq__(self, other):
        if not isinstance(other, InternalAction):
            return NotImplemented
        return self.G == other.G and self.X == other.X and self.gpd_action == other.gpd_action

    __hash__ = None


def validate_internal_action(act: InternalAction) -> ValidationReport:
    """``theta`` is a homomorphism and ``(x*y)(a*b) = (xa)*(yb)`` for every operation."""
    parts = ValidationReport()
    parts.merge(validate_algebra(act.X), "X")
    parts.merge(validate_action(act.gpd_action), "gpd_action")
    if not parts.ok:
        raise ComponentInvalid("acted algebra or underlying groupoid action is invalid", parts)
    X, A = act.X, act.G.arrow_alg
    rep = ValidationReport()
    rep.merge(homomorphism_report(AlgebraHom(X, act.G.object_alg, act.theta)), "theta")
    phi = act.phi
    for op in ("+",) + tuple(A.binary_ops):
        rep.record(
            f"action_interchange[{op}]",
            kernels.action_interchange_failures(phi, X.table(op), A.table(op), MAX_COUNTEREXAMPLES),
        )
    xs, as_ = np.nonzero(phi >= 0)
    for w in A.unary_ops:
        fx, fa = X.unary_ops[w], A.unary_ops[w]
        lhs = phi[fx[xs], fa[as_]]
        rhs = fx[phi[xs, as_]]
        bad = np.flatnonzero((lhs < 0) | (lhs != rhs))
        rep.record(f"action_unary[{w}]", [(xs[i], as_[i]) for i in bad[:MAX_COUNTEREXAMPLES]])
    return rep


def is_internal_action(act: InternalAction) -> bool:
    try:
        return validate_internal_action(act).ok
    except ComponentInvalid:
        return False


def canonical_internal_action(G: InternalGroupoid) -> InternalAction:
    """``G`` acting on its object algebra by ``xa = tgt(a)``."""
    base = canonical_action(G.gpd)
    return InternalAction(G, G.object_alg, base.theta, base.phi)


def _require_transitive(G: InternalGroupoid):
    if not is_transitive(G.gpd):
        raise NotTransitive("the underlying groupoid must be transitive")


def _require_valid(G: InternalGroupoid):
    rep = validate_internal(G)
    if not rep.ok:
        raise ComponentInvalid(f"not an internal groupoid: {rep.failed_checks()}", rep)


def _coset_subset(G: InternalGroupoid, C) -> SubSet:
    S = C if isinstance(C, SubSet) else SubSet(G.arrow_alg, tuple(C))
    group = set(G.gpd.object_group(0))
    if not set(S.members) <= group:
        raise NotASubobject(f"{list(S.members)} is not inside the object group at 0")
    if not is_subobject(S):
        raise NotASubobject(f"{list(S.members)} is not closed under the operations")
    return S


def coset_well_definedness_report(G: InternalGroupoid, C, cosets=None) -> ValidationReport:
    """Representative independence of the coset operations.

    For every operation and every choice of representatives ``a ~ a'``,
    ``b ~ b'`` it checks ``C∘(a*b) == C∘(a'*b')`` (unary: ``C∘w(a) == C∘w(a')``).
    Failures are reported as ``(a, a', b, b')`` and ``(a, a')``.
    """
    S = C if isinstance(C, SubSet) else SubSet(G.arrow_alg, tuple(C))
    if cosets is None:
        cosets = coset_action(G.gpd, 0, S.members)[1]
    which = np.full(G.gpd.num_arrows, -1, dtype=np.int64)
    for k, members in enumerate(cosets):
        which[list(members)] = k
    A = G.arrow_alg
    rep = ValidationReport()
    for op in ("+",) + tuple(A.binary_ops):
        tab = A.table(op)

        def failures(tab=tab):
            for ca in cosets:
                for cb in cosets:
                    a0, b0 = ca[0], cb[0]
                    ref = which[tab[a0, b0]]
                    for a in ca:
                        for b in cb:
                            if which[tab[a, b]] != ref or ref < 0:
                                yield (a0, a, b0, b)

        rep.record(f"coset_well_defined[{op}]", failures())
    for w, f in A.unary_ops.items():
        bad = [(ca[0], a) for ca in cosets for a in ca if which[f[a]] != which[f[ca[0]]]]
        rep.record(f"coset_well_defined[{w}]", bad)
    neg = [(ca[0], a) for ca in cosets for a in ca if which[A.neg[a]] != which[A.neg[ca[0]]]]
    rep.record("coset_well_defined[-]", neg)
    return rep


def lifted_coset_algebra(G: InternalGroupoid, C) -> OpAlgebra:
    """The algebra on the cosets ``C∘a`` (``a`` in the star of 0).

    ``(C∘a) * (C∘b) = C∘(a*b)``, ``w(C∘a) = C∘w(a)``, likewise for ``+`` and
    ``-``. Representative independence is checked exhaustively first.
    """
    _require_valid(G)
    _require_transitive(G)
    S = _coset_subset(G, C)
    _, cosets = coset_action(G.gpd, 0, S.members)
    wd = coset_well_definedness_report(G, S, cosets)
    if not wd.ok:
        raise NotASubobject(f"coset operations are not well defined: {wd.failed_checks()}")
    which = np.full(G.gpd.num_arrows, -1, dtype=np.int64)
    for k, members in enumerate(cosets):
        which[list(members)] = k
    reps = np.array([m[0] for m in cosets], dtype=np.int64)
    A = G.arrow_alg
    grid = np.ix_(reps, reps)
    X = OpAlgebra(
        which[A.add[grid]],
        which[A.neg[reps]],
        {k: which[t[grid]] for k, t in A.binary_ops.items()},
        {k: which[t[reps]] for k, t in A.unary_ops.items()},
        opposites=A.opposites,
        identities=A.identities,
    )
    rep = validate_algebra(X)
    if not rep.ok:
        raise ComponentInvalid(f"coset algebra is invalid: {rep.failed_checks()}", rep)
    return X


def coset_internal_action(G: InternalGroupoid, C) -> InternalAction:
    """The coset action of ``G`` on :func:`lifted_coset_algebra`."""
    X = lifted_coset_algebra(G, C)
    S = _coset_subset(G, C)
    act, _ = coset_action(G.gpd, 0, S.members)
    return InternalAction(G, X, act.theta, act.phi)


def internal_action_groupoid(act: InternalAction) -> tuple[InternalGroupoid, InternalMorphism]:
    """The action groupoid with componentwise operations, and its projection."""
    try:
        rep = validate_internal_action(act)
    except ComponentInvalid as exc:
        raise InvalidAction(str(exc)) from exc
    if not rep.ok:
        raise InvalidAction(f"invalid internal action: {rep.failed_checks()}")
    G, X = act.G, act.X
    A = G.arrow_alg
    cover, proj = action_groupoid(act.gpd_action)
    pairs = action_pairs(act.gpd_action)
    index = np.full((A.size, X.size), -1, dtype=np.int64)
    for i, (a, x) in enumerate(pairs):
        index[a, x] = i
    pa = np.array([a for a, _ in pairs], dtype=np.int64)
    px = np.array([x for _, x in pairs], dtype=np.int64)

    def pairwise(ta, tx):
        out = index[ta[pa[:, None], pa[None, :]], tx[px[:, None], px[None, :]]]
        if (out < 0).any():
            raise InvalidAction("operation leaves the action groupoid's arrow set")
        return out

    def unary(fa, fx):
        out = index[fa[pa], fx[px]]
        if (out < 0).any():
            raise InvalidAction("operation leaves the action groupoid's arrow set")
        return out

    arrow_alg = OpAlgebra(
        pairwise(A.add, X.add),
        unary(A.neg, X.neg),
        {k: pairwise(A.binary_ops[k], X.binary_ops[k]) for k in A.binary_ops},
        {k: unary(A.unary_ops[k], X.unary_ops[k]) for k in A.unary_ops},
        opposites=A.opposites,
        identities=tuple(dict.fromkeys(A.identities + X.identities)),
    )
    G_tilde = InternalGroupoid(cover, arrow_alg, X)
    _require_valid(G_tilde)
    p = InternalMorphism(G_tilde, G, proj.arrow_map, proj.object_map)
    rep = internal_morphism_report(p)
    if not rep.ok:
        raise InvalidAction(f"projection is not an internal morphism: {rep.failed_checks()}")
    return G_tilde, p


def lift_internal_structure(G: InternalGroupoid, C) -> tuple[InternalGroupoid, InternalMorphism]:
    """Internal cover of ``G`` with characteristic group ``C`` at object 0.

    ``C`` must be a subobject of the object group at 0. The cover is the
    action groupoid of the coset action, its objects the cosets; object 0 is
    the coset ``C`` itself.
    """
    return internal_action_groupoid(coset_internal_action(G, C))


def covering_to_action(p: InternalMorphism) -> InternalAction:
    """Phi: the action of the base on the cover's object algebra by lifting."""
    if not is_internal_covering(p):
        raise NotACovering("morphism is not an internal covering")
    base = covering_action(p.gpd_morphism)
    return InternalAction(p.target, p.source.object_alg, base.theta, base.phi)


def action_to_covering(act: InternalAction) -> InternalMorphism:
    """Gamma: the projection of the internal action groupoid."""
    return internal_action_groupoid(act)[1]


def internal_characteristic_group(p: InternalMorphism, x: int = 0) -> frozenset[int]:
    return characteristic_group(p.gpd_morphism, x)


def check_act_cov_equivalence(G: InternalGroupoid, battery, covers) -> ValidationReport:
    """Round trips Phi Gamma and Gamma Phi on a battery of actions and covers.

    Each action must come back isomorphic to itself as an action over ``G``;
    each cover must come back isomorphic to itself over ``G``. Witnesses are
    searched by :mod:`opgpd.oracle`. Failures, including constructions that
    raise, are report entries ``equiv.action`` / ``equiv.cover`` with the
    battery position as element.
    """
    from . import oracle
    from .errors import OpGpdError

    rep = ValidationReport()

    def action_failures():
        for i, act in enumerate(battery):
            if act.G != G:
                yield (i,)
                continue
            try:
                back = covering_to_action(action_to_covering(act))
            except OpGpdError:
                yield (i,)
                continue
            if not oracle.find_action_iso(act, back).found:
                yield (i,)

    def cover_failures():
        for i, p in enumerate(covers):
            if p.target != G:
                yield (i,)
                continue
            try:
                back = action_to_covering(covering_to_action(p))
            except OpGpdError:
                yield (i,)
                continue
            if not oracle.find_cover_iso(back, p).found:
                yield (i,)

    rep.record("equiv.action", action_failures())
    rep.record("equiv.cover", cover_failures())
    return rep
