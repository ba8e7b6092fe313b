import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opgpd import catalog as cat
from opgpd import oracle
from opgpd.algebra import (
    AlgebraHom,
    DerivedActionData,
    OpAlgebra,
    SubSet,
    identity_hom,
    image,
    is_derived_action,
    is_homomorphism,
    is_ideal,
    is_isomorphism,
    is_normal_subgroup,
    is_subobject,
    kernel,
    pair_index,
    semidirect_product,
    subalgebra,
    trivial_algebra,
    validate_algebra,
)
from opgpd.errors import MalformedTable, SignatureMismatch, UnknownOperationName

NEGATION = DerivedActionData(cat.cyclic(2), cat.cyclic(3), [[0, 1, 2], [0, 2, 1]])


def corrupted_r4():
    R = cat.ring_mod(4)
    star = R.binary_ops["*"].copy()
    star[1, 1] = 0
    return OpAlgebra(R.add, R.neg, {"*": star})


# ---------------------------------------------------------------- validate_algebra


def test_z4_is_valid():
    assert validate_algebra(cat.cyclic(4)).ok


def test_r4_is_valid_and_self_opposite():
    R = cat.ring_mod(4)
    assert validate_algebra(R).ok
    assert R.opposites == {"*": "*"}


def test_corrupted_r4_reports_distributivity():
    A = corrupted_r4()
    rep = validate_algebra(A)
    assert "distrib[*]" in rep.failed_checks()
    for cx in rep.by_check("distrib[*]"):
        assert oracle.recheck(A, cx)


def test_out_of_range_entry_is_malformed_not_a_failure():
    with pytest.raises(MalformedTable):
        OpAlgebra([[0, 1], [1, 2]])


def test_opposite_is_generated_for_asymmetric_operation():
    left = [[a for _ in range(2)] for a in range(2)]  # a*b = a
    A = OpAlgebra(cat.cyclic(2).add, None, {"l": left})
    assert set(A.binary_ops) == {"l", "l°"}
    assert np.array_equal(A.binary_ops["l°"], A.binary_ops["l"].T)
    assert A.opposites == {"l": "l°", "l°": "l"}


def test_declared_opposites_must_be_mutual():
    t = [[0, 0], [0, 1]]
    with pytest.raises(MalformedTable):
        OpAlgebra(cat.cyclic(2).add, None, {"a": t, "b": t, "c": t}, opposites={"a": "b", "b": "c"})


def test_wrong_opposite_table_is_reported():
    star = [[0, 0], [0, 1]]
    other = [[0, 1], [0, 0]]
    A = OpAlgebra(cat.cyclic(2).add, None, {"s": star, "t": other}, opposites={"s": "t", "t": "s"})
    assert "opposite[s]" in validate_algebra(A).failed_checks()


def test_unary_operation_axioms():
    R = cat.ring_mod(4)
    good = OpAlgebra(R.add, R.neg, R.binary_ops, {"w": [0, 3, 2, 1]})  # negation
    assert validate_algebra(good).ok
    doubling = OpAlgebra(R.add, R.neg, R.binary_ops, {"w": [0, 2, 0, 2]})
    assert validate_algebra(doubling).ok
    negation_commutes = OpAlgebra(R.add, R.neg, R.binary_ops, {"w": [0, 3, 2, 1]}, identities=["w(x*y) = x*w(y)"])
    assert validate_algebra(negation_commutes).ok
    not_additive = OpAlgebra(R.add, R.neg, R.binary_ops, {"w": [0, 1, 1, 1]})
    assert "unary_add[w]" in validate_algebra(not_additive).failed_checks()


# ---------------------------------------------------------------- homomorphisms


def test_identity_on_r4_is_a_homomorphism():
    assert is_homomorphism(identity_hom(cat.ring_mod(4)))


def test_doubling_map_on_z4():
    Z4 = cat.cyclic(4)
    assert is_homomorphism(AlgebraHom(Z4, Z4, [0, 2, 0, 2]))


def test_reduction_r4_to_r2():
    assert is_homomorphism(AlgebraHom(cat.ring_mod(4), cat.ring_mod(2), [0, 1, 0, 1]))


def test_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        is_homomorphism(AlgebraHom(cat.cyclic(4), cat.ring_mod(2), [0, 1, 0, 1]))


def test_non_homomorphism():
    Z4 = cat.cyclic(4)
    assert not is_homomorphism(AlgebraHom(Z4, Z4, [0, 1, 1, 1]))


def test_isomorphism_needs_bijection():
    Z4 = cat.cyclic(4)
    assert is_isomorphism(AlgebraHom(Z4, Z4, [0, 3, 2, 1]))
    assert not is_isomorphism(AlgebraHom(Z4, Z4, [0, 2, 0, 2]))


# ---------------------------------------------------------------- subsets


@pytest.mark.parametrize(
    "alg, members, expected",
    [
        (cat.ring_mod(4), [0], True),
        (cat.ring_mod(4), [0, 2], True),
        (cat.cyclic(4), [0, 1], False),
        (cat.cyclic(4), [1, 3], False),
    ],
)
def test_is_subobject(alg, members, expected):
    assert is_subobject(SubSet(alg, members)) is expected


def test_is_ideal_examples():
    assert is_ideal(SubSet(cat.ring_mod(4), [0, 2]))
    assert is_ideal(SubSet(cat.s3(), range(6)))
    assert is_ideal(SubSet(cat.zero_ring(4), [0, 2]))


def test_subgroup_of_s3_that_is_not_normal():
    S3 = cat.s3()
    order_two = [a for a in range(1, 6) if S3.add[a, a] == 0]
    S = SubSet(S3, [0, order_two[0]])
    assert is_subobject(S)
    assert not is_normal_subgroup(S)
    assert not is_ideal(S)
    assert is_ideal(SubSet(S3, cat.s3_alternating()))


def test_subalgebra_reindexes():
    sub, embed = subalgebra(SubSet(cat.ring_mod(4), [0, 2]))
    assert embed == (0, 2)
    assert validate_algebra(sub).ok
    assert sub.size == 2 and not sub.binary_ops["*"].any()


def test_subset_range_checked():
    with pytest.raises(MalformedTable):
        SubSet(cat.cyclic(4), [0, 4])


# ---------------------------------------------------------------- semidirect products


def test_negation_action_gives_nonabelian_group():
    G = semidirect_product(NEGATION)
    assert validate_algebra(G).ok
    a, b = pair_index(NEGATION, 1, 1), pair_index(NEGATION, 1, 0)
    assert G.add[a, b] != G.add[b, a]
    assert is_derived_action(NEGATION)
    assert oracle.find_algebra_iso(G, cat.s3()).found


def test_trivial_action_is_direct_product():
    Z2 = cat.cyclic(2)
    G = semidirect_product(DerivedActionData.trivial(Z2, Z2))
    assert oracle.find_algebra_iso(G, cat.klein()).found
    for b1 in range(2):
        for a1 in range(2):
            for b2 in range(2):
                for a2 in range(2):
                    assert G.add[b1 * 2 + a1, b2 * 2 + a2] == ((b1 + b2) % 2) * 2 + (a1 + a2) % 2


def test_zero_rings_give_zero_multiplication():
    R2 = cat.zero_ring(2)
    G = semidirect_product(DerivedActionData.trivial(R2, R2))
    assert G.size == 4
    assert not G.binary_ops["*"].any()
    assert validate_algebra(G).ok


def test_shift_is_not_a_derived_action():
    act = DerivedActionData(cat.cyclic(2), cat.cyclic(3), [[0, 1, 2], [1, 2, 0]])
    assert not is_derived_action(act)
    rep = validate_algebra(semidirect_product(act))
    assert rep.failed_checks()
    assert not oracle.brute_is_derived_action(act)


def test_action_tables_must_match_signature():
    with pytest.raises(MalformedTable):
        DerivedActionData(cat.zero_ring(2), cat.zero_ring(2), [[0, 1], [0, 1]])
    with pytest.raises(SignatureMismatch):
        DerivedActionData(cat.cyclic(2), cat.zero_ring(2), [[0, 1], [0, 1]])


def test_trivial_algebra_keeps_signature():
    T = trivial_algebra(cat.ring_mod(4))
    assert T.signature == cat.ring_mod(4).signature
    assert validate_algebra(T).ok


def test_unknown_identity_name():
    with pytest.raises(UnknownOperationName):
        OpAlgebra(cat.cyclic(2).add, identities=["x*y = y*x"])


# ---------------------------------------------------------------- properties


@st.composite
def cyclic_homs(draw):
    n = draw(st.integers(1, 8))
    m = draw(st.integers(1, 8))
    k = draw(st.integers(0, m - 1))
    return AlgebraHom(cat.cyclic(n), cat.cyclic(m), [(k * a) % m for a in range(n)])


@settings(max_examples=80, deadline=None)
@given(cyclic_homs())
def test_homomorphisms_preserve_zero_and_negation(f):
    if not is_homomorphism(f):
        return
    assert f(0) == 0
    for a in range(f.source.size):
        assert f(int(f.source.neg[a])) == int(f.target.neg[f(a)])


@settings(max_examples=80, deadline=None)
@given(cyclic_homs())
def test_kernels_are_ideals_and_images_subobjects(f):
    if not is_homomorphism(f):
        return
    assert is_ideal(kernel(f))
    assert oracle.brute_is_ideal(f.source, kernel(f).members)
    assert is_subobject(image(f))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([cat.ring_mod(4), cat.zero_ring(6), cat.s3(), cat.scaled_ring(4, 2)]), st.data())
def test_ideals_are_normal_and_absorbing(alg, data):
    members = data.draw(st.sets(st.integers(0, alg.size - 1)))
    S = SubSet(alg, members | {0})
    if is_ideal(S):
        assert is_normal_subgroup(S)
        for tab in alg.binary_ops.values():
            assert all(tab[a, x] in S and tab[x, a] in S for a in S.members for x in range(alg.size))


@st.composite
def zero_ring_actions(draw):
    nb = draw(st.integers(1, 4))
    na = draw(st.integers(1, 4))
    B, A = cat.zero_ring(nb), cat.zero_ring(na)
    star = draw(st.lists(st.lists(st.integers(0, na - 1), min_size=na, max_size=na), min_size=nb, max_size=nb))
    return DerivedActionData(B, A, np.tile(np.arange(na), (nb, 1)), {"*": star})


@settings(max_examples=60, deadline=None)
@given(zero_ring_actions())
def test_derived_action_decision_matches_oracle(act):
    assert is_derived_action(act) == oracle.brute_is_derived_action(act)
