import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opgpd import catalog as cat
from opgpd import oracle
from opgpd.algebra import OpAlgebra, SubSet, is_ideal, is_subobject, trivial_algebra, validate_algebra
from opgpd.corpus import load_corpus
from opgpd.errors import ComponentInvalid, InvalidAction, InvalidMorphism, NotACovering, NotASubobject, NotTransitive
from opgpd.groupoid import coset_action, is_isomorphism, is_transitive, subgroups_of_object_group
from opgpd.internal import (
    InternalAction,
    InternalGroupoid,
    InternalMorphism,
    action_to_covering,
    canonical_internal_action,
    check_act_cov_equivalence,
    component_of_zero,
    coset_internal_action,
    coset_well_definedness_report,
    covering_to_action,
    identity_internal_morphism,
    internal_action_groupoid,
    internal_characteristic_group,
    is_internal,
    is_internal_covering,
    ker_d0_component,
    lift_internal_structure,
    lifted_coset_algebra,
    star_restriction_is_iso,
    validate_internal,
    validate_internal_action,
)
from opgpd.xmod import CrossedModule, xmod_to_internal

from support import relabel_groupoid

Z4 = InternalGroupoid.one_object(cat.cyclic(4))
R4Z = InternalGroupoid.one_object(cat.zero_ring(4))


def zero_map_z2():
    return xmod_to_internal(CrossedModule.make(cat.cyclic(2), cat.cyclic(2), [0, 0]))


# ---------------------------------------------------------------- validate_internal


def test_one_object_z4_is_internal():
    assert validate_internal(Z4).ok


def test_groupoid_of_zero_crossed_module_is_internal():
    assert validate_internal(zero_map_z2()).ok


def test_non_homomorphic_identity_map_is_reported():
    G = zero_map_z2()
    # move the identity arrow of object 1 to index 1, then give the arrows Z4's addition
    gpd = relabel_groupoid(G.gpd, [0, 2, 1, 3], [0, 1])
    H = InternalGroupoid(gpd, cat.cyclic(4), G.object_alg)
    rep = validate_internal(H)
    assert "eps/hom.add" in rep.failed_checks()
    assert all(oracle.recheck(H, cx) for cx in rep.failures)


def test_multiplication_mod_4_breaks_interchange():
    G = InternalGroupoid.one_object(cat.ring_mod(4))
    rep = validate_internal(G)
    assert rep.failed_checks() == ["interchange[*]"]
    assert not is_internal(G)


def test_invalid_component_raises():
    A = cat.ring_mod(4)
    star = A.binary_ops["*"].copy()
    star[1, 1] = 0
    broken = OpAlgebra(A.add, A.neg, {"*": star})
    with pytest.raises(ComponentInvalid) as info:
        validate_internal(InternalGroupoid.one_object(broken))
    assert any(c.startswith("arrow_alg/distrib") for c in info.value.report.failed_checks())


# ---------------------------------------------------------------- kernel of the source map


def test_kernel_examples():
    assert ker_d0_component(Z4).members == (0, 1, 2, 3)
    assert ker_d0_component(zero_map_z2()).members == (0, 1)
    assert ker_d0_component(InternalGroupoid.discrete(cat.cyclic(2))).members == (0,)


def test_component_of_zero_is_internal():
    G = xmod_to_internal(cat.conjugation_xmod(cat.s3(), cat.s3_alternating()))
    assert not is_transitive(G.gpd)
    H = component_of_zero(G)
    assert is_transitive(H.gpd) and validate_internal(H).ok


# ---------------------------------------------------------------- internal actions


def test_canonical_action_is_valid():
    for G in (Z4, zero_map_z2(), xmod_to_internal(cat.doubling_ring_xmod())):
        assert validate_internal_action(canonical_internal_action(G)).ok


def test_coset_action_is_valid():
    assert validate_internal_action(coset_internal_action(Z4, [0, 2])).ok


def test_non_additive_action_is_reported():
    # Z4 acting on Z4 through the permutation (1 3): a valid groupoid action
    # that is not compatible with the addition
    perm = np.array([0, 3, 2, 1])
    powers = [np.arange(4), perm, perm[perm], perm[perm[perm]]]
    phi = np.array([[powers[a][x] for a in range(4)] for x in range(4)])
    act = InternalAction(Z4, cat.cyclic(4), [0] * 4, phi)
    rep = validate_internal_action(act)
    assert "action_interchange[+]" in rep.failed_checks()
    assert all(oracle.recheck(act, cx) for cx in rep.failures)


def test_single_entry_corruption_is_caught():
    act = coset_internal_action(Z4, [0, 2])
    phi = act.phi.copy()
    phi[0, 1] = phi[0, 0]
    bad = InternalAction(Z4, act.X, act.theta, phi)
    with pytest.raises(ComponentInvalid) as info:
        validate_internal_action(bad)
    assert info.value.report.failed_checks()


# ---------------------------------------------------------------- coset algebras and lifting


def test_full_group_gives_one_coset():
    X = lifted_coset_algebra(Z4, [0, 1, 2, 3])
    assert X.size == 1
    assert oracle.find_algebra_iso(X, Z4.object_alg).found


def test_z4_modulo_02_is_z2():
    X = lifted_coset_algebra(Z4, [0, 2])
    assert oracle.find_algebra_iso(X, cat.cyclic(2)).found


def test_zero_ring_modulo_02():
    X = lifted_coset_algebra(R4Z, [0, 2])
    assert validate_algebra(X).ok
    assert oracle.find_algebra_iso(X, cat.zero_ring(2)).found


def test_multiplication_mod_4_has_no_lifted_algebra():
    with pytest.raises(ComponentInvalid):
        lifted_coset_algebra(InternalGroupoid.one_object(cat.ring_mod(4)), [0, 2])


def test_subobject_and_transitivity_are_required():
    with pytest.raises(NotASubobject):
        lift_internal_structure(Z4, [0, 1])
    with pytest.raises(NotTransitive):
        lift_internal_structure(InternalGroupoid.discrete(cat.cyclic(2)), [0])


def test_action_groupoid_sizes():
    cover, p = internal_action_groupoid(coset_internal_action(Z4, [0, 2]))
    assert (cover.gpd.num_objects, cover.gpd.num_arrows) == (2, 8)
    assert is_internal_covering(p)
    cover, p = internal_action_groupoid(coset_internal_action(Z4, [0]))
    assert (cover.gpd.num_objects, cover.gpd.num_arrows) == (4, 16)
    assert validate_internal(cover).ok


def test_canonical_action_groupoid_is_isomorphic_to_the_base():
    G = zero_map_z2()
    cover, p = internal_action_groupoid(canonical_internal_action(G))
    assert is_isomorphism(p.gpd_morphism)
    assert oracle.find_internal_iso(cover, G).found


def test_invalid_action_is_refused():
    perm = np.array([0, 3, 2, 1])
    powers = [np.arange(4), perm, perm[perm], perm[perm[perm]]]
    phi = np.array([[powers[a][x] for a in range(4)] for x in range(4)])
    with pytest.raises(InvalidAction):
        internal_action_groupoid(InternalAction(Z4, cat.cyclic(4), [0] * 4, phi))


def test_lift_with_full_group_is_an_isomorphism():
    cover, p = lift_internal_structure(Z4, [0, 1, 2, 3])
    assert is_isomorphism(p.gpd_morphism)


def test_lift_by_02():
    cover, p = lift_internal_structure(Z4, [0, 2])
    assert cover.gpd.num_objects == 2
    assert internal_characteristic_group(p, 0) == frozenset({0, 2})


# ---------------------------------------------------------------- coverings and the equivalence


def test_internal_covering_examples():
    assert is_internal_covering(identity_internal_morphism(Z4))
    cover, p = lift_internal_structure(Z4, [0, 2])
    assert is_internal_covering(p) and star_restriction_is_iso(p)
    discrete = InternalGroupoid.discrete(cover.object_alg)
    collapse = InternalMorphism(cover, discrete, [0] * cover.gpd.num_arrows, [0] * cover.gpd.num_objects)
    assert not is_internal_covering(collapse)


def test_covering_test_requires_a_morphism():
    bad = InternalMorphism(Z4, Z4, [0, 1, 1, 1], [0])
    with pytest.raises(InvalidMorphism):
        is_internal_covering(bad)


def test_phi_of_identity_is_the_canonical_action():
    assert covering_to_action(identity_internal_morphism(Z4)) == canonical_internal_action(Z4)


def test_phi_recovers_the_coset_action():
    _, p = lift_internal_structure(Z4, [0, 2])
    act = covering_to_action(p)
    assert act == coset_internal_action(Z4, [0, 2])
    base, _ = coset_action(Z4.gpd, 0, [0, 2])
    assert np.array_equal(act.phi, base.phi)


def test_phi_of_universal_cover_is_the_regular_action():
    _, p = lift_internal_structure(Z4, [0])
    act = covering_to_action(p)
    assert act.phi.tolist() == [[(x + a) % 4 for a in range(4)] for x in range(4)]


def test_phi_requires_a_covering():
    z2 = InternalGroupoid.one_object(cat.cyclic(2))
    with pytest.raises(NotACovering):
        covering_to_action(InternalMorphism(Z4, z2, [0, 1, 0, 1], [0]))


def test_gamma_examples():
    assert is_isomorphism(action_to_covering(canonical_internal_action(Z4)).gpd_morphism)
    p = action_to_covering(coset_internal_action(Z4, [0, 2]))
    assert np.bincount(p.arrow_map).tolist() == [2, 2, 2, 2]
    p = action_to_covering(coset_internal_action(Z4, [0]))
    assert (p.source.gpd.hom_counts <= 1).all()


def test_equivalence_report():
    assert check_act_cov_equivalence(Z4, [canonical_internal_action(Z4)], []).ok
    actions = [coset_internal_action(Z4, C) for C in ([0], [0, 2])]
    covers = [lift_internal_structure(Z4, C)[1] for C in ([0], [0, 2])]
    assert check_act_cov_equivalence(Z4, actions, covers).ok


def test_equivalence_report_flags_a_mismatched_theta():
    G = xmod_to_internal(cat.conjugation_xmod(cat.cyclic(2)))
    good = canonical_internal_action(G)
    swapped = InternalAction(G, good.X, good.theta[::-1], good.phi)
    rep = check_act_cov_equivalence(G, [good, swapped], [])
    assert [cx.elements for cx in rep.failures] == [(1,)]


# ---------------------------------------------------------------- properties over the corpus


def _corpus_internal():
    out = []
    for doc in load_corpus().values():
        v = doc.value
        if isinstance(v, InternalGroupoid):
            out.append(v)
        elif isinstance(v, InternalMorphism):
            out += [v.source, v.target]
    return [G for G in out if is_internal(G) and G.gpd.num_arrows <= 16]


CORPUS_INTERNAL = _corpus_internal()


@pytest.mark.parametrize("G", CORPUS_INTERNAL, ids=lambda G: repr(G))
def test_corpus_internal_groupoids_satisfy_the_invariants(G):
    # interchange law and inverse formula, evaluated by the independent checker
    assert oracle.brute_is_valid(G)
    inv = G.gpd.inverse
    A, eps = G.arrow_alg, G.gpd.identity
    for a in range(G.gpd.num_arrows):
        expected = A.add[A.add[eps[G.gpd.tgt[a]], A.neg[a]], eps[G.gpd.src[a]]]
        assert inv[a] == expected
    assert is_ideal(ker_d0_component(G))


TRANSITIVE = [G for G in CORPUS_INTERNAL if is_transitive(G.gpd) and G.gpd.num_arrows <= 8]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(TRANSITIVE), st.data())
def test_lifting_every_subobject(G, data):
    C = data.draw(st.sampled_from(subgroups_of_object_group(G.gpd, 0)))
    if not is_subobject(SubSet(G.arrow_alg, tuple(C))):
        with pytest.raises(NotASubobject):
            lift_internal_structure(G, sorted(C))
        return
    assert coset_well_definedness_report(G, sorted(C)).ok
    cover, p = lift_internal_structure(G, sorted(C))
    assert validate_internal(cover).ok
    assert internal_characteristic_group(p, 0) == C
    # Gamma then Phi recovers the action exactly
    act = coset_internal_action(G, sorted(C))
    assert covering_to_action(action_to_covering(act)) == act
    # Phi then Gamma recovers the cover up to isomorphism over G
    assert oracle.find_cover_iso(action_to_covering(covering_to_action(p)), p).found


def test_trivial_object_algebra_of_one_object_groupoid():
    assert Z4.object_alg == trivial_algebra(cat.cyclic(4))
