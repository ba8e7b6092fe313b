"""Command-line interface: ``opgpd <command> ...``.

Exit status is 0 when every check passes, 1 when a check fails or a
construction is refused for a mathematical reason, and 2 for usage errors and
unreadable or malformed documents.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .algebra import OpAlgebra, SubSet, is_subobject, validate_algebra
from .errors import (
    OpGpdError,
    ParseError,
    SchemaError,
    UnknownObject,
)
from .groupoid import (
    FinGroupoid,
    GpdAction,
    GpdMorphism,
    characteristic_group,
    coset_cover,
    covering_failures,
    is_transitive,
    lift_morphism,
    morphism_report,
    subgroups_of_object_group,
    validate_action,
    validate_groupoid,
)
from .internal import (
    InternalAction,
    InternalGroupoid,
    InternalMorphism,
    check_act_cov_equivalence,
    coset_internal_action,
    internal_morphism_report,
    lift_internal_structure,
    validate_internal,
    validate_internal_action,
)
from .report import ValidationReport
from .xmod import (
    CrossedModule,
    XModMorphism,
    cover_correspondence,
    internal_to_xmod,
    is_xmod_cover,
    validate_xmod,
    xmod_morphism_report,
    xmod_to_internal,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class CommandReport:
    command: list[str]
    checks: ValidationReport = field(default_factory=ValidationReport)
    info: dict = field(default_factory=dict)
    error: dict | None = None
    exit_status: int = EXIT_PASS
    timing_ms: float = 0.0

    def to_json(self) -> dict:
        by_name: dict[str, list] = {name: [] for name in self.checks.checks}
        for cx in self.checks.failures:
            by_name.setdefault(cx.check, []).append(cx.to_json())
        checks = [
            {
                "name": name,
                "status": "fail" if cxs else "pass",
                "counterexamples": [
                    {k: v for k, v in cx.items() if k != "check"} for cx in cxs
                ],
            }
            for name, cxs in by_name.items()
        ]
        return {
            "command": self.command,
            "exit_status": self.exit_status,
            "checks": checks,
            "info": self.info,
            "timing_ms": round(self.timing_ms, 3),
            "error": self.error,
        }

    def to_text(self) -> str:
        lines = []
        failing = {}
        for cx in self.checks.failures:
            failing.setdefault(cx.check, []).append(cx)
        for name in dict.fromkeys(list(self.checks.checks) + list(failing)):
            cxs = failing.get(name, [])
            lines.append(f"{'FAIL' if cxs else 'PASS'} {name}")
            for cx in cxs:
                extra = f"  [{cx.detail}]" if cx.detail else ""
                lines.append(f"    counterexample {list(cx.elements)}{extra}")
        for key, value in self.info.items():
            lines.append(f"info {key}: {json.dumps(value, ensure_ascii=False)}")
        if self.error:
            lines.append(f"error {self.error['type']}: {self.error['message']}")
        lines.append(f"exit {self.exit_status} ({self.timing_ms:.1f} ms)")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- validation dispatch


def full_report(value) -> ValidationReport:
    """Every axiom of ``value`` and of its parts, as one report.

    A compound structure whose parts fail is reported with the parts' failures
    only (prefixed by the part), since its own axioms are then meaningless.
    """
    if isinstance(value, OpAlgebra):
        return validate_algebra(value)
    if isinstance(value, FinGroupoid):
        return validate_groupoid(value)
    if isinstance(value, InternalGroupoid):
        rep = ValidationReport()
        rep.merge(validate_groupoid(value.gpd), "groupoid")
        rep.merge(validate_algebra(value.arrow_alg), "arrow_alg")
        rep.merge(validate_algebra(value.object_alg), "object_alg")
        if rep.ok:
            rep.merge(validate_internal(value))
        return rep
    if isinstance(value, CrossedModule):
        rep = ValidationReport()
        rep.merge(validate_algebra(value.A), "A")
        rep.merge(validate_algebra(value.B), "B")
        if rep.ok:
            rep.merge(validate_xmod(value))
        return rep
    if isinstance(value, (GpdAction, InternalAction)):
        base = value.groupoid if isinstance(value, GpdAction) else value.G
        rep = ValidationReport()
        rep.merge(full_report(base), "base")
        if rep.ok and isinstance(value, InternalAction):
            rep.merge(validate_algebra(value.X), "X")
            rep.merge(validate_action(value.gpd_action), "gpd_action")
            if rep.ok:
                rep.merge(validate_internal_action(value))
        elif rep.ok:
            rep.merge(validate_action(value))
        return rep
    if isinstance(value, (GpdMorphism, InternalMorphism, XModMorphism)):
        rep = ValidationReport()
        rep.merge(full_report(value.source), "source")
        rep.merge(full_report(value.target), "target")
        if rep.ok:
            if isinstance(value, XModMorphism):
                rep.merge(xmod_morphism_report(value))
            elif isinstance(value, InternalMorphism):
                rep.merge(internal_morphism_report(value))
            else:
                rep.merge(morphism_report(value))
        return rep
    raise TypeError(f"no validator for {type(value).__name__}")


def _gpd_of(value):
    return value.gpd_morphism if isinstance(value, InternalMorphism) else value


def _morphism_info(value) -> dict:
    if isinstance(value, XModMorphism):
        return {"xmod_cover": bool(is_xmod_cover(value))}
    f = _gpd_of(value)
    covering = not covering_failures(f)
    info = {"covering": covering}
    if covering:
        groups = {str(x): sorted(characteristic_group(f, x)) for x in range(f.source.num_objects)}
        info["characteristic_group"] = groups["0"]
        info["characteristic_groups"] = groups
    return info


def _structure_info(value) -> dict:
    if isinstance(value, OpAlgebra):
        return {"size": value.size, "binary_ops": list(value.binary_ops), "unary_ops": list(value.unary_ops)}
    if isinstance(value, FinGroupoid):
        return {"objects": value.num_objects, "arrows": value.num_arrows, "transitive": is_transitive(value)}
    if isinstance(value, InternalGroupoid):
        return {
            "objects": value.gpd.num_objects,
            "arrows": value.gpd.num_arrows,
            "transitive": is_transitive(value.gpd),
        }
    if isinstance(value, CrossedModule):
        return {"A": value.A.size, "B": value.B.size}
    if isinstance(value, (GpdAction, InternalAction)):
        size = value.size if isinstance(value, GpdAction) else value.X.size
        return {"size": size}
    return {}


# ---------------------------------------------------------------- commands


class _Refused(Exception):
    """An input failed validation; its counterexamples are already in the report."""


def _load(path: str, kinds=None) -> io.StructureDocument:
    try:
        doc = io.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    if kinds and doc.kind not in kinds:
        raise UsageError(f"{path}: expected a document of kind {' or '.join(kinds)}, got {doc.kind}")
    return doc


def _load_valid(path: str, kinds, report: CommandReport, prefix="input") -> io.StructureDocument:
    """Load and fully validate an input; stop the command if it is invalid."""
    doc = _load(path, kinds)
    rep = full_report(doc.value)
    report.checks.merge(rep, prefix)
    if not rep.ok:
        report.exit_status = EXIT_FAIL
        raise _Refused()
    return doc


def _write(out: str | None, value, report: CommandReport, name=None, comment=None):
    """Validate ``value`` in full, then write it; refuse invalid structures."""
    rep = full_report(value)
    report.checks.merge(rep, "output")
    if not rep.ok:
        report.exit_status = EXIT_FAIL
        report.info["written"] = False
        return
    if out:
        io.dump(io.StructureDocument(io.kind_of(value), value, name, comment), out)
        report.info["written"] = out


def cmd_check(args, report: CommandReport):
    doc = _load(args.file)
    value = doc.value
    rep = full_report(value)
    report.checks.merge(rep)
    report.info["kind"] = doc.kind
    report.info.update(_structure_info(value))
    if rep.ok and doc.kind == "morphism":
        report.info.update(_morphism_info(value))
    if not rep.ok:
        report.exit_status = EXIT_FAIL


def _parse_subgroup(text: str) -> list[int]:
    try:
        return sorted({int(t) for t in text.split(",") if t.strip()})
    except ValueError:
        raise UsageError(f"--subgroup: expected comma-separated integers, got {text!r}") from None


def cmd_cover(args, report: CommandReport):
    doc = _load_valid(args.file, ("groupoid", "internal"), report)
    C = _parse_subgroup(args.subgroup)
    if doc.kind == "internal":
        G = doc.value
        if args.object != 0:
            raise UsageError("--object: internal covers are built at the zero object")
        cover, p = lift_internal_structure(G, C)
        base = 0
        value = p
    else:
        G = doc.value
        if not 0 <= args.object < G.num_objects:
            raise UsageError(f"--object: no object {args.object}")
        cover, p, base = coset_cover(G, args.object, C)
        value = p
    f = _gpd_of(value)
    report.checks.record("covering", [(x,) for x in covering_failures(f)])
    chi = sorted(characteristic_group(f, base))
    report.checks.record("characteristic_group", [] if chi == C else [(base,)])
    report.info.update(
        base_object=base,
        characteristic_group=chi,
        objects=f.source.num_objects,
        arrows=f.source.num_arrows,
    )
    if not report.checks.ok:
        report.exit_status = EXIT_FAIL
        return
    _write(args.out, value, report, name=f"cover of {doc.name or args.file} by {C}")


def cmd_to_xmod(args, report: CommandReport):
    doc = _load_valid(args.file, ("internal",), report)
    X = internal_to_xmod(doc.value)
    report.info.update(A=X.A.size, B=X.B.size)
    _write(args.out, X, report)


def cmd_to_internal(args, report: CommandReport):
    doc = _load_valid(args.file, ("xmod",), report)
    G = xmod_to_internal(doc.value)
    report.info.update(objects=G.gpd.num_objects, arrows=G.gpd.num_arrows)
    _write(args.out, G, report)


def cmd_lift(args, report: CommandReport):
    p = _load_valid(args.cover, ("morphism",), report, "cover").value
    f = _load_valid(args.morphism, ("morphism",), report, "morphism").value
    if isinstance(p, XModMorphism) or isinstance(f, XModMorphism):
        raise UsageError("lift: expects groupoid or internal groupoid morphisms")
    lifted = lift_morphism(_gpd_of(p), _gpd_of(f), args.base, args.to)
    if isinstance(p, InternalMorphism) and isinstance(f, InternalMorphism):
        value = InternalMorphism(f.source, p.source, lifted.arrow_map, lifted.object_map)
    else:
        value = lifted
    composite = _gpd_of(p).arrow_map[lifted.arrow_map]
    report.checks.record(
        "lift.commutes",
        [(a,) for a in np.flatnonzero(composite != _gpd_of(f).arrow_map)],
    )
    report.info.update(object_map=[int(v) for v in lifted.object_map])
    if not report.checks.ok:
        report.exit_status = EXIT_FAIL
        return
    _write(args.out, value, report)


def _default_battery(G: InternalGroupoid, rng: random.Random | None):
    """Coset actions and internal covers for every admissible subobject of G(0)."""
    actions, covers = [], []
    for C in subgroups_of_object_group(G.gpd, 0):
        if not is_subobject(SubSet(G.arrow_alg, tuple(sorted(C)))):
            continue
        try:
            act = coset_internal_action(G, sorted(C))
            _, p = lift_internal_structure(G, sorted(C))
        except OpGpdError:
            continue
        actions.append(act)
        covers.append(p)
        if rng is not None:
            actions.append(_relabel_action(act, rng))
    return actions, covers


def _relabel_action(act: InternalAction, rng: random.Random) -> InternalAction:
    """An isomorphic copy of ``act`` with the acted elements permuted (0 fixed)."""
    n = act.X.size
    rest = list(range(1, n))
    rng.shuffle(rest)
    perm = np.array([0] + rest)  # old -> new
    inv = np.argsort(perm)
    X = act.X
    def tab(t):
        return perm[t[np.ix_(inv, inv)]]
    Y = OpAlgebra(
        tab(X.add),
        perm[X.neg[inv]],
        {k: tab(t) for k, t in X.binary_ops.items()},
        {k: perm[t[inv]] for k, t in X.unary_ops.items()},
        opposites=X.opposites,
        identities=X.identities,
    )
    phi = np.where(act.phi[inv] >= 0, perm[np.maximum(act.phi[inv], 0)], -1)
    return InternalAction(act.G, Y, act.theta[inv], phi)


def cmd_equiv(args, report: CommandReport):
    G = _load_valid(args.file, ("internal",), report).value
    rng = random.Random(args.seed) if args.seed is not None else None
    if args.battery:
        folder = Path(args.battery)
        if not folder.is_dir():
            raise UsageError(f"--battery: {folder} is not a directory")
        actions, covers = [], []
        for path in sorted(folder.glob("*.json")):
            doc = io.load(path)
            if doc.kind == "action" and isinstance(doc.value, InternalAction):
                actions.append(doc.value)
            elif doc.kind == "morphism" and isinstance(doc.value, InternalMorphism):
                covers.append(doc.value)
    else:
        actions, covers = _default_battery(G, rng)
    report.checks.merge(check_act_cov_equivalence(G, actions, covers))
    report.info.update(actions=len(actions), covers=len(covers))
    if not report.checks.ok:
        report.exit_status = EXIT_FAIL


def cmd_corr(args, report: CommandReport):
    p = _load_valid(args.file, ("morphism",), report).value
    if not isinstance(p, InternalMorphism):
        raise UsageError("corr: expects a morphism of internal groupoids")
    m = cover_correspondence(p)
    covering = not covering_failures(p.gpd_morphism)
    xcover = bool(is_xmod_cover(m))
    report.checks.record("corr.cover_iff_xmod_cover", [] if covering == xcover else [()])
    report.info.update(covering=covering, xmod_cover=xcover)
    if not report.checks.ok:
        report.exit_status = EXIT_FAIL
        return
    _write(args.out, m, report)


# ---------------------------------------------------------------- entry points


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", choices=("json", "text"), default="text")
    common.add_argument("--out", help="write the constructed structure here")
    common.add_argument("--seed", type=int, help="seed for randomized batteries")
    parser = _Parser(prog="opgpd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", parents=[common], help="validate any document")
    p.add_argument("file")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("cover", parents=[common], help="cover with a given characteristic group")
    p.add_argument("file")
    p.add_argument("--object", type=int, default=0)
    p.add_argument("--subgroup", required=True, help="comma-separated arrow indices")
    p.set_defaults(run=cmd_cover)

    p = sub.add_parser("to-xmod", parents=[common], help="internal groupoid to crossed module")
    p.add_argument("file")
    p.set_defaults(run=cmd_to_xmod)

    p = sub.add_parser("to-internal", parents=[common], help="crossed module to internal groupoid")
    p.add_argument("file")
    p.set_defaults(run=cmd_to_internal)

    p = sub.add_parser("lift", parents=[common], help="lift a morphism through a covering")
    p.add_argument("cover")
    p.add_argument("morphism")
    p.add_argument("--base", type=int, default=0, help="base object of the morphism's source")
    p.add_argument("--to", type=int, default=0, help="object of the cover to lift it to")
    p.set_defaults(run=cmd_lift)

    p = sub.add_parser("equiv", parents=[common], help="actions/covers equivalence round trips")
    p.add_argument("file")
    p.add_argument("--battery", help="directory of action and morphism documents")
    p.set_defaults(run=cmd_equiv)

    p = sub.add_parser("corr", parents=[common], help="crossed-module morphism of a cover")
    p.add_argument("file")
    p.set_defaults(run=cmd_corr)
    return parser


def run_command(argv) -> CommandReport:
    argv = list(argv)
    report = CommandReport(command=argv)
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        args.run(args, report)
    except _Refused:
        pass
    except (UsageError, ParseError, SchemaError, UnknownObject) as exc:
        report.error = {"type": type(exc).__name__, "message": str(exc)}
        report.exit_status = EXIT_USAGE
    except OpGpdError as exc:
        report.error = {"type": type(exc).__name__, "message": str(exc)}
        report.exit_status = EXIT_FAIL
    report.timing_ms = (time.perf_counter() - start) * 1000
    return report


def _wants_json(argv) -> bool:
    argv = list(argv)
    for i, a in enumerate(argv):
        if a == "--report" and i + 1 < len(argv):
            return argv[i + 1] == "json"
        if a == "--report=json":
            return True
    return False


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if any(a in ("-h", "--help") for a in argv):
        try:
            build_parser().parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
    report = run_command(argv)
    if _wants_json(argv):
        sys.stdout.write(json.dumps(report.to_json(), ensure_ascii=False, indent=2) + "\n")
    else:
        sys.stdout.write(report.to_text())
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
