"""
Command-Line Interface.

``vfkit validate|rank|intersect|member|oracle|corpus``. Reports go to
stdout, logs to stderr. Every VfkitError maps to its exit code:
0 ok, 2 schema, 3 algebra, 4 free-action violation, 5 bound failure,
6 cap exceeded, 1 anything unexpected.
"""
import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

from app import __version__
from app.config.settings import settings
from app.core.errors import BoundFailure, VfkitError
from app.core.intersection import fold_subgroup
from app.core.subgroup_folding import member
from app.core.tree_oracle import brute_member
from app.tools.instance_tools import build_gog, load_instance, parse_word, subgroup_generators
from app.tools.report_tools import (
    block_graph_dot,
    fiber_product_dot,
    render_corpus,
    render_intersect,
    render_member,
    render_oracle,
    render_rank,
    render_timings,
    render_validate,
    write_output,
)
from app.utils.logging import get_logger, setup_logging
from app.workflows.corpus import PROFILES, run_corpus
from app.workflows.intersection_workflow import run_pipeline

logger = get_logger("cli")

# Settings caps that can be overridden per invocation
CAP_FLAGS = (
    "max_group_order",
    "max_iso_vertices",
    "max_ball_radius",
    "max_ball_vertices",
    "max_element_set",
)


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _raise_first(state: Dict[str, Any]) -> None:
    failures = state.get("failures", [])
    if failures:
        raise failures[0]


def _pipeline(args: argparse.Namespace, h_name: str, k_name: Optional[str] = None, **kwargs: Any) -> Dict[str, Any]:
    return run_pipeline(
        h_name=h_name,
        k_name=k_name,
        instance_path=args.path,
        seed=args.seed,
        with_timings=args.timings,
        report_path=args.json,
        **kwargs,
    )


def _finish(args: argparse.Namespace, state: Dict[str, Any]) -> None:
    if args.timings and state.get("timings"):
        _emit(render_timings(state["timings"]))


# === Commands ===

def cmd_validate(args: argparse.Namespace) -> int:
    doc = load_instance(args.path)
    gog = build_gog(doc)
    _emit(render_validate(doc, gog))
    return 0


def cmd_rank(args: argparse.Namespace) -> int:
    state = _pipeline(args, args.subgroup)
    _raise_first(state)
    summary = state["report"].subgroups[0]
    _emit(render_rank(summary, show_generators=args.gens))
    if args.dot:
        write_output(block_graph_dot(state["delta_h"], name=args.subgroup, core=state["core_h"]), args.dot)
    _finish(args, state)
    return 0


def cmd_intersect(args: argparse.Namespace) -> int:
    state = _pipeline(args, args.h, args.k)
    _raise_first(state)
    report = state["bound"]
    _emit(render_intersect(
        report, args.h, args.k, state.get("diagnostics") if args.diagnostics else None
    ))
    if args.dot:
        write_output(fiber_product_dot(state["fiber"], name=f"{args.h}_x_{args.k}"), args.dot)
    _finish(args, state)
    if not report.holds:
        raise BoundFailure(tuple(report.failed))
    return 0


def cmd_member(args: argparse.Namespace) -> int:
    doc = load_instance(args.path)
    gog = build_gog(doc)
    gens = subgroup_generators(doc, gog, args.subgroup)
    w = parse_word(gog, args.word)
    folded = member(fold_subgroup(gog, gens, args.subgroup), w)
    brute = brute_member(gog, gens, w, args.length)
    _emit(render_member(args.subgroup, args.word, folded, brute, args.length))
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    state = _pipeline(
        args,
        args.h,
        args.k,
        run_oracle=True,
        oracle_radius=args.radius,
        oracle_length=args.length,
    )
    failures = state.get("failures", [])
    if state.get("oracle"):
        _emit(render_oracle(state["oracle"]))
    _finish(args, state)
    _raise_first({"failures": failures})
    return 0


def cmd_corpus(args: argparse.Namespace) -> int:
    summary = run_corpus(
        seed=settings.seed if args.seed is None else args.seed,
        count=args.count,
        profile=args.profile,
        oracle=not args.no_oracle,
        workers=args.workers,
    )
    _emit(render_corpus(summary))
    if summary["failures"]:
        raise BoundFailure(tuple(summary["failures"]))
    return 0


# === Parser ===

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vfkit",
        description="Core graphs, ranks and intersections of free subgroups of virtually free groups.",
    )
    parser.add_argument("--version", action="version", version=f"vfkit {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    parser.add_argument("--seed", type=int, default=None, help="Seed (default: VFKIT_SEED)")
    parser.add_argument("--timings", action="store_true", help="Print and record stage timings")
    parser.add_argument("--json", default=None, metavar="FILE", help="Write the run report as JSON")
    for flag in CAP_FLAGS:
        parser.add_argument(
            f"--{flag.replace('_', '-')}",
            dest=flag,
            type=int,
            default=None,
            help=f"Override {flag} (default {getattr(settings, flag)})",
        )

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="Validate an instance and describe its shape")
    p.add_argument("path")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("rank", help="Fold a subgroup and report its rank")
    p.add_argument("path")
    p.add_argument("subgroup")
    p.add_argument("--gens", action="store_true", help="Print a free basis")
    p.add_argument("--dot", default=None, metavar="FILE", help="Write the subgroup graph as DOT (relative to the output directory)")
    p.set_defaults(handler=cmd_rank)

    p = sub.add_parser("intersect", help="Intersect two subgroups and check the rank bound")
    p.add_argument("path")
    p.add_argument("h")
    p.add_argument("k")
    p.add_argument("--diagnostics", action="store_true", help="Print the per-pair degree table")
    p.add_argument("--dot", default=None, metavar="FILE", help="Write the fiber product as DOT (relative to the output directory)")
    p.set_defaults(handler=cmd_intersect)

    p = sub.add_parser("member", help="Membership by folding and by enumeration")
    p.add_argument("path")
    p.add_argument("subgroup")
    p.add_argument("word")
    p.add_argument("-L", "--length", type=int, default=4, help="Enumeration length")
    p.set_defaults(handler=cmd_member)

    p = sub.add_parser("oracle", help="Corroborate the folding with the tree oracle")
    p.add_argument("path")
    p.add_argument("h")
    p.add_argument("k", nargs="?", default=None)
    p.add_argument("-R", "--radius", type=int, default=None, help=f"Ball radius (default {settings.oracle_radius})")
    p.add_argument("-L", "--length", type=int, default=None, help=f"Product length (default {settings.oracle_length})")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("corpus", help="Random instances with pass rates per profile")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--profile", choices=[*PROFILES, "mixed"], default="mixed")
    p.add_argument("--workers", type=int, default=None, help=f"Concurrent runs (default {settings.corpus_workers})")
    p.add_argument("--no-oracle", action="store_true", help="Skip oracle corroboration")
    p.set_defaults(handler=cmd_corpus)

    return parser


def _apply_overrides(args: argparse.Namespace) -> None:
    for flag in CAP_FLAGS:
        value = getattr(args, flag)
        if value is not None:
            setattr(settings, flag, value)
    if args.seed is not None:
        settings.seed = args.seed


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.verbose:
        setup_logging(level=logging.DEBUG if args.verbose > 1 else logging.INFO)
    saved = settings.model_dump()
    _apply_overrides(args)

    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except VfkitError as e:
        logger.error(f"{type(e).__name__}: {e}")
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code
    except Exception:
        logger.exception("Unexpected error")
        return 1
    finally:
        for name, value in saved.items():
            setattr(settings, name, value)


if __name__ == "__main__":
    sys.exit(main())
