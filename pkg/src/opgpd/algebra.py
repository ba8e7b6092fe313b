"""Finite groups with operations.

An :class:`OpAlgebra` is a finite group, written additively on the indices
``0..n-1`` with ``0`` as its zero, carrying extra named binary operations
(each distributive over ``+`` on the left, and paired with its opposite) and
named unary operations (additive, and commuting with every binary one in the
first argument). Everything is given by total tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import kernels
from .errors import MalformedTable, SignatureMismatch
from .report import MAX_COUNTEREXAMPLES, ValidationReport
from .terms import check_names, identity_failures, parse_identity

OPPOSITE_SUFFIX = "°"


def _table(value, shape, bound, what):
    try:
        arr = np.array(value, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise MalformedTable(f"{what}: not an integer table ({exc})") from None
    if arr.shape != shape:
        raise MalformedTable(f"{what}: expected shape {shape}, got {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() >= bound):
        raise MalformedTable(f"{what}: entries must lie in 0..{bound - 1}")
    arr.flags.writeable = False
    return arr


def _frozen(arr):
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    arr.flags.writeable = False
    return arr


class OpAlgebra:
    """A finite group with operations.

    ``opposites`` maps each binary operation name to the name of its opposite
    (``a op° b == b op a``). Names left undeclared are resolved at
    construction: a symmetric table is its own opposite, a table whose
    transpose is already present is paired with it, otherwise the transpose
    is added under ``name + "°"``.
    """

    def __init__(
        self,
        add,
        neg=None,
        binary_ops: Mapping[str, object] | None = None,
        unary_ops: Mapping[str, object] | None = None,
        opposites: Mapping[str, str] | None = None,
        identities=(),
        zero: int = 0,
        name: str | None = None,
    ):
        add_arr = np.array(add, dtype=np.int64)
        if add_arr.ndim != 2 or add_arr.shape[0] != add_arr.shape[1] or add_arr.shape[0] < 1:
            raise MalformedTable(f"add: expected a non-empty square table, got {add_arr.shape}")
        n = add_arr.shape[0]
        if zero != 0:
            raise MalformedTable("zero: the zero element must be index 0")
        self.zero = 0
        self.name = name
        self.add = _table(add_arr, (n, n), n, "add")
        if neg is None:
            neg = [int(np.flatnonzero(self.add[a] == 0)[0]) if (self.add[a] == 0).any() else 0
                   for a in range(n)]
        self.neg = _table(neg, (n,), n, "neg")

        ops = {}
        for key, tab in dict(binary_ops or {}).items():
            if key in ("+", "-", "0") or not key:
                raise MalformedTable(f"binary_ops: reserved operation name {key!r}")
            ops[key] = _table(tab, (n, n), n, f"binary_ops.{key}")
        opp = dict(opposites or {})
        for key, other in opp.items():
            if key not in ops:
                raise MalformedTable(f"opposites: {key!r} is not a binary operation")
            if other not in ops:
                raise MalformedTable(f"opposites: {other!r} is not a binary operation")
        for key in sorted(ops):
            if key in opp:
                continue
            tab = ops[key]
            if np.array_equal(tab, tab.T):
                opp[key] = key
                continue
            partner = next(
                (o for o in sorted(ops) if o != key and o not in opp and np.array_equal(ops[o], tab.T)),
                None,
            )
            if partner is None:
                partner = key + OPPOSITE_SUFFIX
                if partner in ops:
                    raise MalformedTable(f"binary_ops: cannot auto-name opposite of {key!r}")
                ops[partner] = _frozen(tab.T)
            opp[key] = partner
            opp[partner] = key
        for key, other in opp.items():
            if opp.get(other) != key:
                raise MalformedTable(f"opposites: {key!r} and {other!r} are not declared mutually")
        self.binary_ops = {k: ops[k] for k in sorted(ops)}
        self.opposites = {k: opp[k] for k in sorted(opp)}

        unary = {}
        for key, tab in dict(unary_ops or {}).items():
            if key in self.binary_ops or key in ("+", "-", "0") or not key:
                raise MalformedTable(f"unary_ops: bad operation name {key!r}")
            unary[key] = _table(tab, (n,), n, f"unary_ops.{key}")
        self.unary_ops = {k: unary[k] for k in sorted(unary)}

        self.identities = tuple(identities)
        self._parsed = tuple(parse_identity(t) for t in self.identities)
        for ident in self._parsed:
            check_names(ident, self.binary_ops, self.unary_ops)

    @property
    def size(self) -> int:
        return self.add.shape[0]

    @property
    def signature(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        return tuple(self.binary_ops), tuple(self.unary_ops)

    def table(self, op: str):
        """Binary table by name, with ``"+"`` naming the addition."""
        return self.add if op == "+" else self.binary_ops[op]

    def parsed_identities(self):
        return self._parsed

    def __eq__(self, other):
        if not isinstance(other, OpAlgebra):
            return NotImplemented
        return (
            np.array_equal(self.add, other.add)
            and np.array_equal(self.neg, other.neg)
            and self.opposites == other.opposites
            and self.binary_ops.keys() == other.binary_ops.keys()
            and all(np.array_equal(t, other.binary_ops[k]) for k, t in self.binary_ops.items())
            and self.unary_ops.keys() == other.unary_ops.keys()
            and all(np.array_equal(t, other.unary_ops[k]) for k, t in self.unary_ops.items())
            and self.identities == other.identities
        )

    __hash__ = None

    def __repr__(self):
        ops = ",".join(self.binary_ops)
        un = ",".join(self.unary_ops)
        label = f" {self.name!r}" if self.name else ""
        return f"<OpAlgebra{label} n={self.size} binary=[{ops}] unary=[{un}]>"


def same_signature(a: OpAlgebra, b: OpAlgebra) -> bool:
    return a.signature == b.signature


def require_same_signature(a: OpAlgebra, b: OpAlgebra, what: str = "algebras") -> None:
    if not same_signature(a, b):
        raise SignatureMismatch(f"{what} have different signatures: {a.signature} vs {b.signature}")


def trivial_algebra(like: OpAlgebra | None = None) -> OpAlgebra:
    """The one-element algebra, with the signature of ``like`` if given."""
    if like is None:
        return OpAlgebra([[0]])
    return OpAlgebra(
        [[0]],
        [0],
        {k: [[0]] for k in like.binary_ops},
        {k: [0] for k in like.unary_ops},
        opposites=like.opposites,
    )


def validate_algebra(alg: OpAlgebra) -> ValidationReport:
    """Exhaustively check the group laws and the axioms on the operations.

    Every failed axiom instance is reported with its element tuple (at most
    ``MAX_COUNTEREXAMPLES`` per axiom). An empty report means ``alg`` is a
    valid group with operations.
    """
    n = alg.size
    add, neg = alg.add, alg.neg
    idx = np.arange(n)
    rep = ValidationReport()
    rep.record("group.left_zero", [(a,) for a in np.flatnonzero(add[0] != idx)])
    rep.record("group.right_zero", [(a,) for a in np.flatnonzero(add[:, 0] != idx)])
    rep.record("group.left_neg", [(a,) for a in np.flatnonzero(add[neg, idx] != 0)])
    rep.record("group.right_neg", [(a,) for a in np.flatnonzero(add[idx, neg] != 0)])
    rep.record("group.assoc", kernels.assoc_failures(add, MAX_COUNTEREXAMPLES))
    for op, tab in alg.binary_ops.items():
        rep.record(f"distrib[{op}]", kernels.distrib_failures(tab, add, MAX_COUNTEREXAMPLES))
        opp = alg.binary_ops[alg.opposites[op]]
        rep.record(f"opposite[{op}]", np.argwhere(tab != opp.T)[:MAX_COUNTEREXAMPLES])
    for w, f in alg.unary_ops.items():
        rep.record(f"unary_add[{w}]", kernels.hom_failures(f, add, add, MAX_COUNTEREXAMPLES))
        for op, tab in alg.binary_ops.items():
            # w(a) * b == w(a * b)
            bad = tab[f[:, None], idx[None, :]] != f[tab]
            rep.record(f"unary_star[{w},{op}]", np.argwhere(bad)[:MAX_COUNTEREXAMPLES])
    for k, ident in enumerate(alg.parsed_identities()):
        rep.record(f"identity[{k}]", identity_failures(alg, ident), detail=ident.text)
    return rep


def check_identity(alg: OpAlgebra, identity) -> ValidationReport:
    from .terms import check_identity as _check

    return _check(alg, identity)


# ---------------------------------------------------------------- morphisms


@dataclass(frozen=True, eq=False)
class AlgebraHom:
    source: OpAlgebra
    target: OpAlgebra
    map: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "map", _table(self.map, (self.source.size,), self.target.size, "map")
        )

    def __call__(self, a):
        return int(self.map[a])


def homomorphism_report(f: AlgebraHom) -> ValidationReport:
    """Check that ``f`` preserves ``+``, every binary and every unary operation."""
    require_same_signature(f.source, f.target)
    s, t, m = f.source, f.target, f.map
    rep = ValidationReport()
    rep.record("hom.add", kernels.hom_failures(m, s.add, t.add, MAX_COUNTEREXAMPLES))
    for op, tab in s.binary_ops.items():
        rep.record(f"hom[{op}]", kernels.hom_failures(m, tab, t.binary_ops[op], MAX_COUNTEREXAMPLES))
    for w, tab in s.unary_ops.items():
        bad = np.flatnonzero(m[tab] != t.unary_ops[w][m])
        rep.record(f"hom.unary[{w}]", [(a,) for a in bad[:MAX_COUNTEREXAMPLES]])
    return rep


def is_homomorphism(f: AlgebraHom) -> bool:
    return homomorphism_report(f).ok


def identity_hom(alg: OpAlgebra) -> AlgebraHom:
    return AlgebraHom(alg, alg, np.arange(alg.size))


def is_isomorphism(f: AlgebraHom) -> bool:
    return (
        f.source.size == f.target.size
        and len(set(f.map.tolist())) == f.source.size
        and is_homomorphism(f)
    )


# ---------------------------------------------------------------- subsets


@dataclass(frozen=True, eq=False)
class SubSet:
    parent: OpAlgebra
    members: tuple[int, ...]

    def __post_init__(self):
        mem = tuple(sorted({int(m) for m in self.members}))
        if mem and (mem[0] < 0 or mem[-1] >= self.parent.size):
            raise MalformedTable(f"subset members must lie in 0..{self.parent.size - 1}")
        object.__setattr__(self, "members", mem)

    def __contains__(self, a):
        return a in self._set

    @property
    def _set(self):
        return frozenset(self.members)

    def __len__(self):
        return len(self.members)

    def mask(self):
        m = np.zeros(self.parent.size, dtype=bool)
        m[list(self.members)] = True
        return m


def _closed(mask, table_values):
    return bool(mask[table_values].all())


def is_normal_subgroup(S: SubSet) -> bool:
    A, mask = S.parent, S.mask()
    mem = np.array(S.members, dtype=np.int64)
    if not mask[0] or not _closed(mask, A.add[np.ix_(mem, mem)]) or not _closed(mask, A.neg[mem]):
        return False
    # x + s - x for all x
    conj = A.add[A.add[:, mem], A.neg[:, None]]
    return _closed(mask, conj)


def is_subobject(S: SubSet) -> bool:
    """True iff ``S`` contains 0 and is closed under every operation."""
    A, mask = S.parent, S.mask()
    if not S.members or not mask[0]:
        return False
    mem = np.array(S.members, dtype=np.int64)
    grid = np.ix_(mem, mem)
    if not _closed(mask, A.add[grid]) or not _closed(mask, A.neg[mem]):
        return False
    if not all(_closed(mask, tab[grid]) for tab in A.binary_ops.values()):
        return False
    return all(_closed(mask, f[mem]) for f in A.unary_ops.values())


def is_ideal(S: SubSet) -> bool:
    """Normal subgroup absorbing every binary operation from both sides."""
    if not is_normal_subgroup(S):
        return False
    mask = S.mask()
    mem = np.array(S.members, dtype=np.int64)
    for tab in S.parent.binary_ops.values():
        if not _closed(mask, tab[mem, :]) or not _closed(mask, tab[:, mem]):
            return False
    return True


def kernel(f: AlgebraHom) -> SubSet:
    return SubSet(f.source, tuple(np.flatnonzero(f.map == 0).tolist()))


def image(f: AlgebraHom) -> SubSet:
    return SubSet(f.target, tuple(sorted(set(f.map.tolist()))))


def subalgebra(S: SubSet) -> tuple[OpAlgebra, tuple[int, ...]]:
    """The algebra carried by a subobject, reindexed in increasing order.

    Returns the algebra and the embedding (new index -> parent index).
    """
    from .errors import NotASubobject

    if not is_subobject(S):
        raise NotASubobject(f"{S.members} is not closed under the operations")
    A = S.parent
    mem = np.array(S.members, dtype=np.int64)
    back = np.full(A.size, -1, dtype=np.int64)
    back[mem] = np.arange(len(mem))
    grid = np.ix_(mem, mem)
    return (
        OpAlgebra(
            back[A.add[grid]],
            back[A.neg[mem]],
            {k: back[t[grid]] for k, t in A.binary_ops.items()},
            {k: back[t[mem]] for k, t in A.unary_ops.items()},
            opposites=A.opposites,
            identities=A.identities,
        ),
        tuple(S.members),
    )


# ---------------------------------------------------------------- derived actions


class DerivedActionData:
    """Candidate actions of ``actor`` (B) on ``acted`` (A).

    ``dot[b, a]`` is the conjugation-type action ``b.a``; ``star_actions[op][b, a]``
    is ``b op a``, one table per binary operation name of the shared signature.
    Whether these really are derived actions is decided by
    :func:`is_derived_action`.
    """

    def __init__(self, actor: OpAlgebra, acted: OpAlgebra, dot, star_actions=None):
        require_same_signature(actor, acted, "actor and acted algebra")
        self.actor = actor
        self.acted = acted
        shape = (actor.size, acted.size)
        self.dot = _table(dot, shape, acted.size, "dot")
        star_actions = dict(star_actions or {})
        extra = set(star_actions) - set(actor.binary_ops)
        if extra:
            raise MalformedTable(f"star_actions: unknown operations {sorted(extra)}")
        missing = set(actor.binary_ops) - set(star_actions)
        if missing:
            raise MalformedTable(f"star_actions: missing tables for {sorted(missing)}")
        self.star_actions = {
            k: _table(star_actions[k], shape, acted.size, f"star_actions.{k}")
            for k in sorted(star_actions)
        }

    @classmethod
    def trivial(cls, actor: OpAlgebra, acted: OpAlgebra):
        """Identity dot action and zero star actions."""
        dot = np.tile(np.arange(acted.size), (actor.size, 1))
        zero = np.zeros((actor.size, acted.size), dtype=np.int64)
        return cls(actor, acted, dot, {k: zero for k in actor.binary_ops})


def semidirect_product(act: DerivedActionData) -> OpAlgebra:
    """The algebra on B x A, element ``(b, a)`` stored at ``b * |A| + a``.

    ``(b', a') + (b, a) = (b' + b, a'.b + a)`` where the right action
    ``a'.b`` is ``(-b).a'`` (so that ``(b, a)`` reads as ``s(b) + a`` in the
    split extension), and
    ``(b', a') * (b, a) = (b' * b, b' * a + a' * b + a' * a)`` with
    ``a' * b`` read as ``b *° a'``. Unary operations act componentwise.
    """
    B, A = act.actor, act.acted
    nb, na = B.size, A.size
    bb = np.repeat(np.arange(nb), na)  # b component of each element
    aa = np.tile(np.arange(na), nb)    # a component

    def pack(b, a):
        return b * na + a

    # rows: left operand (b', a'); columns: right operand (b, a)
    b1, a1 = bb[:, None], aa[:, None]
    b2, a2 = bb[None, :], aa[None, :]
    add = pack(B.add[b1, b2], A.add[act.dot[B.neg[b2], a1], a2])
    neg = pack(B.neg[bb], A.neg[act.dot[bb, aa]])
    ops = {}
    for op, tab in B.binary_ops.items():
        left = act.star_actions[op][b1, a2]                # b' * a
        right = act.star_actions[B.opposites[op]][b2, a1]  # a' * b
        inner = A.binary_ops[op][a1, a2]                   # a' * a
        ops[op] = pack(tab[b1, b2], A.add[A.add[left, right], inner])
    unary = {w: pack(B.unary_ops[w][bb], A.unary_ops[w][aa]) for w in B.unary_ops}
    identities = tuple(dict.fromkeys(A.identities + B.identities))
    return OpAlgebra(add, neg, ops, unary, opposites=A.opposites, identities=identities)


def derived_action_report(act: DerivedActionData) -> ValidationReport:
    return validate_algebra(semidirect_product(act))


def is_derived_action(act: DerivedActionData) -> bool:
    """The actions are derived iff the semidirect product is a valid object."""
    return derived_action_report(act).ok


def pair_index(act: DerivedActionData, b: int, a: int) -> int:
    return b * act.acted.size + a
