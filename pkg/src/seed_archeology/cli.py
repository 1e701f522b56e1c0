"""Command-line surface.

Subcommands: ``generate`` (build and grow trees), ``centrality``
(per-vertex anti-centrality as CSV), ``find`` (run a seed finder on a
serialized shape), ``stats`` (per-tree reports and statistical checks),
``experiment run`` / ``experiment validate`` (the Monte Carlo harness).

Master seeds resolve in this order: an explicit ``--master-seed`` flag
wins; otherwise the ``SEED_ARCHEOLOGY_SEED`` environment variable
overrides the built-in default (and, for ``experiment run``, the value
committed in the config file).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .centrality import anti_centrality
from .experiment import (
    VALIDATION_SUITES,
    load_config,
    run_experiment,
    validate_formulas,
)
from .finders import (
    FinderKind,
    FinderParams,
    find_path_seed,
    find_star_seed,
    find_urrt_seed,
)
from .rng import DEFAULT_MASTER_SEED, RngHandle, master_seed_from_env
from .stats import (
    count_camouflaging,
    descendant_histogram,
    mcdiarmid_tail_check,
    deep_tail_check,
    polya_fraction_samples,
    singleton_parents,
)
from .trees import (
    ArrivalTree,
    SeedKind,
    SeedSpec,
    ShapeView,
    build_seed,
    grow,
    identity_view,
    scramble,
)

__all__ = ["main", "build_parser"]

_SUITE_DEFAULT_TRIALS = {
    "descendants": 100_000,
    "singletons": 100_000,
    "camouflage": 10_000,
    "polya": 100_000,
    "tails": 100_000,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seed-archeology",
        description="Grow uniform attachment trees and hunt for their seeds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a seed and grow it")
    p.add_argument(
        "--kind",
        required=True,
        choices=["path", "star", "urrt", "custom"],
        help="seed family",
    )
    p.add_argument("--l", type=int, help="seed size (required unless custom)")
    p.add_argument(
        "--parents",
        help="comma-separated parents of vertices 2..l (custom seeds only)",
    )
    p.add_argument(
        "--n", type=int, help="final tree size (default: the bare seed)"
    )
    _add_seed_args(p)
    p.add_argument(
        "--scramble",
        action="store_true",
        help="emit a label-scrambled shape instead of the arrival tree",
    )
    p.add_argument(
        "--permutation-out",
        help="with --scramble: also write the hidden relabeling here",
    )
    p.add_argument("--output", help="write here instead of stdout")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser(
        "centrality", help="per-vertex anti-centrality as CSV"
    )
    p.add_argument("input", help="tree or shape file ('-' for stdin)")
    p.add_argument("--output", help="write here instead of stdout")
    p.set_defaults(func=_cmd_centrality)

    p = sub.add_parser("find", help="run a seed finder on a shape")
    p.add_argument("input", help="shape file ('-' for stdin)")
    p.add_argument(
        "--kind", required=True, choices=["path", "star", "urrt"]
    )
    p.add_argument("--l", type=int, required=True, help="seed size to look for")
    p.add_argument("--gamma", type=float, required=True, help="slack in (0,1)")
    p.add_argument(
        "--epsilon", type=float, required=True, help="failure budget in (0,1)"
    )
    p.add_argument(
        "--jog-loh-c",
        type=float,
        default=1.0,
        help="constant in the star guarantee threshold (default 1)",
    )
    _add_seed_args(p)
    p.add_argument("--output", help="write here instead of stdout")
    p.set_defaults(func=_cmd_find)

    p = sub.add_parser(
        "stats", help="per-tree reports and statistical checks"
    )
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument(
        "--report",
        choices=["descendants", "singletons", "camouflage"],
        help="emit CSV rows for the given tree files",
    )
    mode.add_argument(
        "--check",
        choices=["polya", "mcdiarmid", "deeptail"],
        help="run a Monte Carlo check and emit a JSON verdict",
    )
    p.add_argument("trees", nargs="*", help="tree files (reports only)")
    p.add_argument(
        "--l", type=int, help="prefix size (camouflage report, mcdiarmid)"
    )
    p.add_argument("--t", type=float, help="tail offset (mcdiarmid)")
    p.add_argument("--n", type=int, help="arrival count (deeptail)")
    p.add_argument("--k", type=int, help="descendant threshold (deeptail)")
    p.add_argument("--red", type=int, default=3, help="initial red balls")
    p.add_argument("--blue", type=int, default=7, help="initial blue balls")
    p.add_argument("--draws", type=int, default=1000, help="draws per urn run")
    p.add_argument("--trials", type=int, help="Monte Carlo trials")
    _add_seed_args(p)
    p.add_argument("--output", help="write here instead of stdout")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("experiment", help="Monte Carlo harness")
    esub = p.add_subparsers(dest="subcommand", required=True)

    q = esub.add_parser("run", help="run an experiment config")
    q.add_argument("config", help="JSON config file")
    q.add_argument(
        "--debug-dump",
        help="directory for per-trial trees, relabelings, and estimates",
    )
    q.set_defaults(func=_cmd_experiment_run)

    q = esub.add_parser(
        "validate", help="Monte Carlo checks of the exact formulas"
    )
    q.add_argument("suite", choices=list(VALIDATION_SUITES))
    q.add_argument("--trials", type=int, help="override the suite default")
    _add_seed_args(q)
    q.add_argument("--output", help="write here instead of stdout")
    q.set_defaults(func=_cmd_experiment_validate)

    return parser


def _add_seed_args(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--master-seed",
        type=int,
        default=None,
        help="master seed (default: SEED_ARCHEOLOGY_SEED or "
        f"{DEFAULT_MASTER_SEED})",
    )
    p.add_argument(
        "--stream", type=int, default=0, help="stream index (default 0)"
    )


def _resolve_rng(args) -> RngHandle:
    if args.master_seed is not None:
        seed = args.master_seed
    else:
        seed = master_seed_from_env(DEFAULT_MASTER_SEED)
    return RngHandle(seed, args.stream)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text)


def _load_view(text: str) -> ShapeView:
    header = text.strip().splitlines()[0] if text.strip() else ""
    if "l=" in header:
        # An arrival tree: operate on it under its own labels.
        return identity_view(ArrivalTree.from_text(text))
    return ShapeView.from_text(text)


def _cmd_generate(args) -> int:
    if args.kind == "custom":
        if not args.parents:
            raise ValueError("custom seeds need --parents")
        spec = SeedSpec.custom(
            [int(tok) for tok in args.parents.split(",") if tok.strip()]
        )
        if args.l is not None and args.l != spec.l:
            raise ValueError(
                f"--l {args.l} disagrees with --parents ({spec.l} vertices)"
            )
    else:
        if args.l is None:
            raise ValueError("--l is required for path/star/urrt seeds")
        spec = SeedSpec(SeedKind(args.kind), args.l)
    n = args.n if args.n is not None else spec.l
    rng = _resolve_rng(args)
    tree = grow(build_seed(spec, rng), n, rng)
    if args.scramble:
        view = scramble(tree, rng)
        if args.permutation_out:
            with open(args.permutation_out, "w", encoding="utf-8") as f:
                f.write(view.permutation_to_text())
        _emit(view.to_text(), args.output)
    else:
        if args.permutation_out:
            raise ValueError("--permutation-out requires --scramble")
        _emit(tree.to_text(), args.output)
    return 0


def _cmd_centrality(args) -> int:
    view = _load_view(_read_input(args.input))
    profile = anti_centrality(view)
    lines = ["vertex,psi,is_centroid"]
    for v in range(1, view.n + 1):
        flag = 1 if v in profile.centroids else 0
        lines.append(f"{v},{int(profile.psi[v])},{flag}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_find(args) -> int:
    view = _load_view(_read_input(args.input))
    params = FinderParams(
        l=args.l,
        gamma=args.gamma,
        epsilon=args.epsilon,
        jog_loh_c=args.jog_loh_c,
    )
    finder = {
        "path": find_path_seed,
        "star": find_star_seed,
        "urrt": find_urrt_seed,
    }[args.kind]
    estimate = finder(view, params, _resolve_rng(args))
    lines = [str(v) for v in sorted(estimate.vertices)]
    lines.append(
        json.dumps(
            {
                "kind": estimate.kind.value,
                "target_size": estimate.target_size,
                "deficit": estimate.deficit,
            }
        )
    )
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_stats(args) -> int:
    if args.report:
        return _stats_report(args)
    return _stats_check(args)


def _stats_report(args) -> int:
    if not args.trees:
        raise ValueError("reports need at least one tree file")
    trees = [(path, ArrivalTree.from_text(_read_input(path))) for path in args.trees]
    lines: list[str] = []
    if args.report == "descendants":
        lines.append("tree,k,exactly,at_least")
        for path, tree in trees:
            hist = descendant_histogram(tree)
            for k in range(tree.n):
                if hist.at_least[k] == 0:
                    break
                lines.append(
                    f"{path},{k},{int(hist.exactly[k])},{int(hist.at_least[k])}"
                )
    elif args.report == "singletons":
        lines.append("tree,n,singleton_parents")
        for path, tree in trees:
            report = singleton_parents(tree)
            lines.append(f"{path},{tree.n},{report.S}")
    else:
        if args.l is None:
            raise ValueError("camouflage report needs --l")
        lines.append("tree,l,singleton_parents,camouflaging")
        for path, tree in trees:
            report = count_camouflaging(tree, args.l)
            lines.append(f"{path},{args.l},{report.S},{report.G}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _stats_check(args) -> int:
    rng = _resolve_rng(args)
    if args.check == "polya":
        trials = args.trials if args.trials is not None else 100_000
        result = _polya_check(args.red, args.blue, args.draws, trials, rng)
    elif args.check == "mcdiarmid":
        if args.l is None or args.t is None:
            raise ValueError("mcdiarmid check needs --l and --t")
        trials = args.trials if args.trials is not None else 10_000
        tail = mcdiarmid_tail_check(args.l, args.t, trials, rng)
        result = {
            "check": "mcdiarmid",
            "l": args.l,
            "t": args.t,
            "trials": trials,
            "empirical": tail.empirical,
            "theoretical": tail.theoretical,
            "se": tail.se,
            "passed": tail.passed,
        }
    else:
        if args.n is None or args.k is None:
            raise ValueError("deeptail check needs --n and --k")
        trials = args.trials if args.trials is not None else 100_000
        tail = deep_tail_check(args.n, args.k, trials, rng)
        result = {
            "check": "deeptail",
            "n": args.n,
            "k": args.k,
            "trials": trials,
            "empirical": tail.empirical,
            "theoretical": tail.theoretical,
            "se": tail.se,
            "passed": tail.passed,
        }
    _emit(json.dumps(result, indent=2) + "\n", args.output)
    return 0 if result["passed"] else 1


def _polya_check(red: int, blue: int, draws: int, runs: int, rng: RngHandle) -> dict:
    fractions = polya_fraction_samples(red, blue, draws, runs, rng)
    total = red + blue
    mean_exact = red / total
    var_exact = red * blue / (total * total * (total + 1))
    mean = float(fractions.mean())
    mean_se = float(fractions.std(ddof=1) / math.sqrt(runs))
    centered = fractions - mean
    s2 = float(np.mean(centered**2) * runs / (runs - 1))
    m4 = float(np.mean(centered**4))
    var_se = math.sqrt(max(m4 - s2 * s2, 0.0) / runs)
    mean_ok = abs(mean - mean_exact) <= 3.0 * mean_se
    var_ok = abs(s2 - var_exact) <= 3.0 * var_se
    return {
        "check": "polya",
        "red": red,
        "blue": blue,
        "draws": draws,
        "runs": runs,
        "empirical": {"mean": mean, "variance": s2},
        "theoretical": {"mean": mean_exact, "variance": var_exact},
        "se": {"mean": mean_se, "variance": var_se},
        "passed": bool(mean_ok and var_ok),
    }


def _cmd_experiment_run(args) -> int:
    config = load_config(args.config, honor_env=True)
    summary = run_experiment(config, debug_dump=args.debug_dump)
    sys.stdout.write(json.dumps(summary.to_dict(), indent=2) + "\n")
    return 0


def _cmd_experiment_validate(args) -> int:
    trials = (
        args.trials
        if args.trials is not None
        else _SUITE_DEFAULT_TRIALS[args.suite]
    )
    report = validate_formulas(args.suite, trials, _resolve_rng(args))
    _emit(json.dumps(report, indent=2) + "\n", args.output)
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
