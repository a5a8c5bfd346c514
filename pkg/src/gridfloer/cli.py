"""Command-line interface: ``gridfloer <subcommand> FILE [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .action import homology_action, is_free_module
from .complex import MultigradedRanks, link_floer_ranks, tilde_homology
from .corpus import run_suite
from .detect import detect_all, euler_and_alexander, removal_audit
from .errors import DomainError, InputError
from .grid import load_grid, linking_matrix, trace_components
from .polytope import link_floer_polytope, polytope_shape

LEGEND = "legend: alex2 = 2A, the doubled Alexander grading"


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(f"{self.prog}: {message}")


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'i,j', got {text!r}") from None
    return a, b


def _nonnegative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gridfloer", description="Link Floer homology from grid diagrams.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_text, grid=True):
        p = sub.add_parser(name, help=help_text)
        if grid:
            p.add_argument("grid", help="path to a .grid file")
        p.add_argument("--json", action="store_true", help="print JSON instead of a table")
        p.add_argument("--max-size", type=_nonnegative, default=None,
                       help="largest grid size to accept (default 8)")
        return p

    command("validate", "parse a grid and report its components")
    command("homology", "blocked and hat link Floer ranks")
    command("polytope", "link Floer polytope and its cube summand")
    command("alexander", "Euler characteristic and Alexander polynomial")
    p = command("detect", "rank-based detection verdicts")
    p.add_argument("--pair", type=_pair, help="also report the action for components i,j")
    p = command("audit", "component removal audit")
    p.add_argument("--component", type=_nonnegative, help="component to remove (default: all)")
    command("corpus", "run the invariant suite on the bundled grids", grid=False)
    return parser


def _ranks_table(title: str, r: MultigradedRanks) -> list[str]:
    lines = [f"{title} (total {r.total})", f"  {'maslov':>6}  {'alex2':<16} rank"]
    for k, v in r.sorted_items():
        lines.append(f"  {k.maslov:>6}  {str(list(k.alex2)):<16} {v}")
    return lines


def _validate(g, args):
    part = trace_components(g)
    data = {
        "name": g.name,
        "n": g.n,
        "components": part.l,
        "marks_per_component": list(part.marks_per_component),
        "linking": linking_matrix(g, part),
    }
    text = [
        f"{g.name}: valid grid of size {g.n}",
        f"components: {part.l}",
        f"markings per component: {list(part.marks_per_component)}",
        f"linking matrix: {data['linking']}",
    ]
    return data, text


def _homology(g, args):
    t = tilde_homology(g, args.max_size)
    h = link_floer_ranks(g, args.max_size)
    data = {"name": g.name, "tilde": t.to_json(), "hat": h.to_json()}
    text = [f"{g.name}: n={g.n}, components={h.l}", LEGEND]
    text += _ranks_table("blocked grid homology", t)
    text += _ranks_table("hat link Floer homology", h)
    return data, text


def _polytope(g, args):
    r = link_floer_ranks(g, args.max_size)
    lp = link_floer_polytope(r, linking_matrix(g))
    data = {"name": g.name, **lp.to_json()}
    shape = polytope_shape(lp.polytope)
    text = [
        f"{g.name}: link Floer polytope in dimension {lp.polytope.dim}",
        LEGEND,
        f"vertices ({shape.vertex_count}): {[list(v) for v in lp.polytope.sorted_vertices()]}",
        f"axis box: {_yes(shape.is_axis_box)}, centrally symmetric: "
        f"{_yes(shape.is_centrally_symmetric)}, full-dimensional: {_yes(shape.is_full_dimensional)}",
    ]
    if lp.dual_thurston is not None:
        text.append(f"cube summand vertices: {[list(v) for v in lp.dual_thurston.sorted_vertices()]}")
    else:
        text.append(f"cube summand: none ({lp.reason})")
    text.append(f"dual Thurston interpretation valid: {_yes(lp.dual_thurston_valid)}")
    return data, text


def _alexander(g, args):
    ea = euler_and_alexander(link_floer_ranks(g, args.max_size))
    data = {
        "name": g.name,
        "chi": {"terms": ea.chi.to_json(), "text": ea.chi.to_string()},
        "alexander": {"terms": ea.alexander.to_json(), "text": ea.alexander.to_string(halve=True)},
    }
    text = [
        f"{g.name}: Euler characteristic and Alexander polynomial (tau^2 = t)",
        f"chi = {ea.chi.to_string()}",
        f"Delta = {ea.alexander.to_string(halve=True)} (up to units)",
    ]
    return data, text


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


_VERDICT_LABELS = {
    "is_unknot": "unknot",
    "is_unlink": "unlink",
    "is_hopf_link": "hopf link",
    "is_second_smallest_class": "second smallest rank class",
    "is_split": "split",
    "fibered_top_certificate": "fibered top certificate",
}


def _detect(g, args):
    rep = detect_all(g, args.max_size)
    data = rep.to_json()
    text = [f"{g.name}: components={rep.components}, lfr={rep.lfr}", LEGEND]
    text += [f"  {k.maslov:>4}  {list(k.alex2)}  rank {v}" for k, v in rep.hat.sorted_items()]
    for key, label in _VERDICT_LABELS.items():
        verdict = rep.verdicts[key]
        text.append(f"{label}: {_yes(verdict.value)} ({verdict.reason})")
    text.append(f"alexander: {rep.alexander.to_string(halve=True)}")
    if args.pair is not None:
        op = homology_action(g, *args.pair, max_size=args.max_size)
        v = is_free_module(op)
        data["action"] = op.to_json()
        text.append(f"action {list(args.pair)}: dim {v.dim}, rank {v.rank}, free: {_yes(v.free)}")
    return data, text


def _audit(g, args):
    l = trace_components(g).l
    components = [args.component] if args.component is not None else list(range(l))
    reports = [removal_audit(g, i, args.max_size) for i in components]
    data = {"name": g.name, "audits": [a.to_json() for a in reports]}
    text = [f"{g.name}: component removal audit", LEGEND]
    for a in reports:
        text.append(
            f"component {a.component}: lfr {a.lfr_L} vs 2*{a.lfr_sub}, "
            f"equality: {_yes(a.equality)}, linking: {a.linking}, shift: {a.shift_vector}"
        )
        if a.proposition_applies:
            text.append(f"  equality on a nonsplit link: predicted {a.predicted}, observed {a.observed}")
        if a.trivial_clause["applies"]:
            text.append(
                f"  splits off; unknotted: {_yes(a.trivial_clause['component_unknotted'])}, "
                f"equality predicted: {_yes(a.trivial_clause['predicted_equality'])}"
            )
        text.append(f"  consistent: {_yes(a.agrees)}")
        text.append(f"  {'grading':<14} {'alex2':<10} dots surviving")
        for row in a.figure_accounting:
            text.append(
                f"  {str(row['grading']):<14} {str(row['alex2']):<10} {row['dots']:>4} {row['surviving']:>9}"
            )
    return data, text


def _corpus(args):
    checks = run_suite()
    failed = [c for c in checks if not c.passed]
    data = {
        "checks": [
            {"module": c.module, "invariant": c.invariant, "subject": c.subject,
             "passed": c.passed, "detail": c.detail}
            for c in checks
        ],
        "passed": len(checks) - len(failed),
        "failed": len(failed),
    }
    text = [f"{'module':<9} {'invariant':<40} {'subject':<30} result"]
    for c in checks:
        line = f"{c.module:<9} {c.invariant:<40} {c.subject:<30} {'PASS' if c.passed else 'FAIL'}"
        if c.detail:
            line += f"  {c.detail}"
        text.append(line)
    text.append(f"{len(checks) - len(failed)} passed, {len(failed)} failed")
    return data, text, 1 if failed else 0


_HANDLERS = {
    "validate": _validate,
    "homology": _homology,
    "polytope": _polytope,
    "alexander": _alexander,
    "detect": _detect,
    "audit": _audit,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Execute one invocation and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
    except _ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "corpus":
            data, text, code = _corpus(args)
        else:
            g = load_grid(args.grid)
            data, text = _HANDLERS[args.command](g, args)
            code = 0
    except InputError as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print("\n".join(text))
    return code


def main() -> None:
    sys.exit(run())
