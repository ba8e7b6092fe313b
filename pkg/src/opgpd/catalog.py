"""Small named structures used by the test suite, the corpus and the CLI."""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .algebra import OpAlgebra


def cyclic(n: int, name: str | None = None) -> OpAlgebra:
    """Z_n with no extra operations."""
    i = np.arange(n)
    return OpAlgebra((i[:, None] + i[None, :]) % n, (-i) % n, name=name or f"Z{n}")


def ring_mod(n: int, op: str = "*", name: str | None = None) -> OpAlgebra:
    """Z_n with multiplication mod n as a (commutative, self-opposite) operation."""
    i = np.arange(n)
    return OpAlgebra(
        (i[:, None] + i[None, :]) % n,
        (-i) % n,
        {op: (i[:, None] * i[None, :]) % n},
        opposites={op: op},
        name=name or f"R{n}",
    )


def zero_ring(n: int, op: str = "*", name: str | None = None) -> OpAlgebra:
    """Z_n with the zero multiplication; declares ``x*y = 0`` as an identity."""
    i = np.arange(n)
    return OpAlgebra(
        (i[:, None] + i[None, :]) % n,
        (-i) % n,
        {op: np.zeros((n, n), dtype=np.int64)},
        opposites={op: op},
        identities=(f"x{op}y = 0",),
        name=name or f"R{n}_0",
    )


def scaled_ring(n: int, k: int, op: str = "*") -> OpAlgebra:
    """Z_n with ``a*b = k*a*b mod n``."""
    i = np.arange(n)
    return OpAlgebra(
        (i[:, None] + i[None, :]) % n,
        (-i) % n,
        {op: (k * i[:, None] * i[None, :]) % n},
        opposites={op: op},
        name=f"Z{n}[{k}ab]",
    )


def klein() -> OpAlgebra:
    i = np.arange(4)
    return OpAlgebra(i[:, None] ^ i[None, :], i, name="V4")


def elementary_abelian(k: int) -> OpAlgebra:
    i = np.arange(2 ** k)
    return OpAlgebra(i[:, None] ^ i[None, :], i, name=f"Z2^{k}")


def symmetric_group(k: int) -> tuple[OpAlgebra, list[tuple[int, ...]]]:
    """S_k with composition ``(p + q)(i) = p(q(i))``; identity is element 0."""
    perms = sorted(permutations(range(k)))
    index = {p: n for n, p in enumerate(perms)}
    mul = [[index[tuple(p[q[i]] for i in range(k))] for q in perms] for p in perms]
    inv = [index[tuple(sorted(range(k), key=lambda i: p[i]))] for p in perms]
    return OpAlgebra(mul, inv, name=f"S{k}"), perms


def s3() -> OpAlgebra:
    return symmetric_group(3)[0]


def s3_alternating() -> tuple[int, ...]:
    """Indices of the even permutations in :func:`s3`."""
    _, perms = symmetric_group(3)

    def even(p):
        inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j])
        return inversions % 2 == 0

    return tuple(n for n, p in enumerate(perms) if even(p))


def product(a: OpAlgebra, b: OpAlgebra) -> OpAlgebra:
    """Direct product, element ``(x, y)`` at ``x * |b| + y``."""
    if a.signature != b.signature:
        raise ValueError("direct product needs a shared signature")
    na, nb = a.size, b.size
    xa = np.repeat(np.arange(na), nb)
    yb = np.tile(np.arange(nb), na)

    def lift(ta, tb):
        return ta[xa[:, None], xa[None, :]] * nb + tb[yb[:, None], yb[None, :]]

    return OpAlgebra(
        lift(a.add, b.add),
        a.neg[xa] * nb + b.neg[yb],
        {k: lift(a.binary_ops[k], b.binary_ops[k]) for k in a.binary_ops},
        {k: a.unary_ops[k][xa] * nb + b.unary_ops[k][yb] for k in a.unary_ops},
        opposites=a.opposites,
    )


# ---------------------------------------------------------------- crossed modules


def conjugation_xmod(G: OpAlgebra, members=None):
    """Inclusion of a normal subgroup (default: all of ``G``) acting by conjugation."""
    from .algebra import SubSet, subalgebra
    from .xmod import CrossedModule

    members = tuple(range(G.size)) if members is None else tuple(members)
    A, emb = subalgebra(SubSet(G, members))
    back = {e: i for i, e in enumerate(emb)}
    dot = [[back[int(G.add[G.add[b, e], G.neg[b]])] for e in emb] for b in range(G.size)]
    return CrossedModule.make(A, G, list(emb), dot=dot)


def quotient_xmod(n: int, m: int):
    """``Z_n -> Z_m`` reduction mod ``m`` with the trivial action (``m`` divides ``n``)."""
    from .xmod import CrossedModule

    return CrossedModule.make(cyclic(n), cyclic(m), [a % m for a in range(n)])


def zero_ring_xmod(n: int, m: int):
    """Zero-multiplication rings ``Z_n -> Z_m`` with trivial actions."""
    from .xmod import CrossedModule

    return CrossedModule.make(zero_ring(n), zero_ring(m), [a % m for a in range(n)])


def doubling_ring_xmod():
    """``Z4`` with ``a*b = 2ab`` over ``Z2`` with zero multiplication.

    ``alpha`` is reduction mod 2, the conjugation action is trivial and
    ``1 * a = 2a``; the induced internal groupoid is transitive with a
    non-zero multiplication.
    """
    from .xmod import CrossedModule

    star = [[0, 0, 0, 0], [0, 2, 0, 2]]
    return CrossedModule.make(
        scaled_ring(4, 2), scaled_ring(2, 0), [0, 1, 0, 1], star_actions={"*": star}
    )


def trivial_xmod(B: OpAlgebra):
    """The zero algebra mapping into ``B``."""
    from .algebra import trivial_algebra
    from .xmod import CrossedModule

    return CrossedModule.make(trivial_algebra(B), B, [0])
