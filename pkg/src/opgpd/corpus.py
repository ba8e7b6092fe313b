"""The shipped example documents, and the code that regenerates them.

``python -m opgpd.corpus`` rewrites ``src/opgpd/corpus/*.json`` from the
builders below; the test suite checks the shipped files are up to date.
"""

from __future__ import annotations

import sys
from pathlib import Path

from . import catalog as cat
from .algebra import DerivedActionData, semidirect_product, trivial_algebra
from .groupoid import coset_action, coset_cover, group_times_pair, one_object, pair_groupoid
from .internal import (
    InternalGroupoid,
    InternalMorphism,
    coset_internal_action,
    lift_internal_structure,
)
from .io import StructureDocument, load, serialize
from .xmod import xmod_to_internal

CORPUS_DIR = Path(__file__).parent / "corpus"


def _internal_quotient(G: InternalGroupoid, H: InternalGroupoid, arrow_map, object_map, name):
    return StructureDocument("morphism", InternalMorphism(G, H, arrow_map, object_map), name)


def build_corpus() -> dict[str, StructureDocument]:
    docs: dict[str, StructureDocument] = {}

    def add(fname, kind, value, name, comment=None):
        docs[fname] = StructureDocument(kind, value, name, comment)

    # algebras
    add("z4.json", "algebra", cat.cyclic(4), "Z4")
    add("r4.json", "algebra", cat.ring_mod(4), "R4", "Z4 with multiplication mod 4")
    add("r4_zero.json", "algebra", cat.zero_ring(4), "R4 zero", "Z4 with zero multiplication")
    add("v4.json", "algebra", cat.klein(), "V4", "Klein four-group")
    add("s3.json", "algebra", cat.s3(), "S3")
    neg_action = DerivedActionData(cat.cyclic(2), cat.cyclic(3), [[0, 1, 2], [0, 2, 1]])
    add("z2_z3_semidirect.json", "algebra", semidirect_product(neg_action), "Z2 acting on Z3 by negation")
    add("z4_doubled.json", "algebra", cat.scaled_ring(4, 2), "Z4 with a*b = 2ab")

    # groupoids
    add("z4_groupoid.json", "groupoid", one_object(cat.cyclic(4)), "one-object Z4")
    add("pair3.json", "groupoid", pair_groupoid(3), "pair groupoid on 3 objects")
    add("z2_pair2.json", "groupoid", group_times_pair(cat.cyclic(2), 2), "Z2 times pair groupoid on 2")
    _, pp, _ = coset_cover(pair_groupoid(3), 0, [0])
    add("pair3_cover.json", "morphism", pp, "cover of the pair groupoid by the trivial subgroup")
    act, _ = coset_action(group_times_pair(cat.cyclic(2), 2), 0, [0])
    add("z2_pair2_action.json", "action", act, "coset action of Z2 x pair(2)")

    # internal groupoids
    z4 = InternalGroupoid.one_object(cat.cyclic(4))
    r4z = InternalGroupoid.one_object(cat.zero_ring(4))
    v4 = InternalGroupoid.one_object(cat.klein())
    z2 = InternalGroupoid.one_object(cat.cyclic(2))
    r2z = InternalGroupoid.one_object(cat.zero_ring(2))
    add("z4_internal.json", "internal", z4, "one-object Z4")
    add("r4_zero_internal.json", "internal", r4z, "one-object zero ring on Z4")
    add("v4_internal.json", "internal", v4, "one-object V4")
    add("z3_discrete.json", "internal", InternalGroupoid.discrete(cat.cyclic(3)), "discrete Z3")
    ring_int = xmod_to_internal(cat.doubling_ring_xmod())
    add("doubling_ring_internal.json", "internal", ring_int, "internal groupoid of the doubling ring crossed module")
    add("a3_s3_internal.json", "internal", xmod_to_internal(cat.conjugation_xmod(cat.s3(), cat.s3_alternating())),
        "internal groupoid of A3 in S3")
    pair_z2 = xmod_to_internal(cat.conjugation_xmod(cat.cyclic(2)))
    add("z2_pair_internal.json", "internal", pair_z2, "indiscrete groupoid on Z2")

    # crossed modules
    add("s3_conj_xmod.json", "xmod", cat.conjugation_xmod(cat.s3()), "S3 acting on itself by conjugation")
    add("a3_s3_xmod.json", "xmod", cat.conjugation_xmod(cat.s3(), cat.s3_alternating()), "A3 inside S3")
    add("z4_z2_xmod.json", "xmod", cat.quotient_xmod(4, 2), "Z4 onto Z2")
    add("z6_z3_xmod.json", "xmod", cat.quotient_xmod(6, 3), "Z6 onto Z3")
    add("zero_ring_xmod.json", "xmod", cat.zero_ring_xmod(4, 2), "zero rings Z4 onto Z2")
    add("doubling_ring_xmod.json", "xmod", cat.doubling_ring_xmod(), "Z4 with 2ab onto Z2")
    add("s3_trivial_xmod.json", "xmod", cat.trivial_xmod(cat.s3()), "zero into S3")

    # internal actions and covers
    add("z4_coset_action.json", "action", coset_internal_action(z4, [0, 2]), "Z4 acting on cosets of {0,2}")
    for G, gname, C, fname in [
        (z4, "Z4", [0, 2], "z4_cover_02.json"),
        (z4, "Z4", [0], "z4_cover_universal.json"),
        (r4z, "zero ring Z4", [0, 2], "r4_zero_cover_02.json"),
        (v4, "V4", [0], "v4_cover_universal.json"),
        (ring_int, "doubling ring groupoid", [0], "doubling_ring_cover.json"),
    ]:
        _, p = lift_internal_structure(G, C)
        add(fname, "morphism", p, f"cover of {gname} with characteristic group {C}")

    # surjective morphisms that are not coverings
    docs["z4_onto_z2.json"] = _internal_quotient(z4, z2, [a % 2 for a in range(4)], [0], "Z4 onto Z2")
    docs["r4_zero_onto_r2_zero.json"] = _internal_quotient(
        r4z, r2z, [a % 2 for a in range(4)], [0], "zero ring Z4 onto Z2"
    )
    trivial = InternalGroupoid.one_object(trivial_algebra(cat.cyclic(2)))
    docs["z2_pair_collapse.json"] = _internal_quotient(
        pair_z2, trivial, [0, 0, 0, 0], [0, 0], "indiscrete Z2 collapsed to a point"
    )
    # by contrast, sending arrow (b, a) of the indiscrete groupoid to a is the
    # universal cover of one-object Z2
    docs["z2_pair_onto_z2.json"] = _internal_quotient(
        pair_z2, z2, [0, 1, 0, 1], [0, 0], "indiscrete Z2 covering one-object Z2"
    )
    return docs


def corpus_files() -> list[Path]:
    return sorted(CORPUS_DIR.glob("*.json"))


def load_corpus() -> dict[str, StructureDocument]:
    return {p.name: load(p) for p in corpus_files()}


def write_corpus(directory: Path = CORPUS_DIR) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for fname, doc in build_corpus().items():
        path = directory / fname
        path.write_text(serialize(doc), encoding="utf-8")
        out.append(path)
    return out


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else CORPUS_DIR
    for path in write_corpus(target):
        print(path)
