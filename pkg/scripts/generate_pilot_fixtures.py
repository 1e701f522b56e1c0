#!/usr/bin/env python3
"""Regenerate tests/fixtures/pilot_fixtures.json.

The acceptance suite runs short confirmation experiments (200 trials) for
three reference seed-recovery setups and compares their success counts
against the larger pilots recorded in this fixture.  Regenerate after any
change that affects tree growth, scrambling, or the finders:

    python3 scripts/generate_pilot_fixtures.py

Runtime is a few minutes on one core.  Every trial draws from a stream
derived from the pilot master seed and the trial index, so regenerating
on unchanged code reproduces the same counts; only the generated date and
the timing fields move.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from seed_archeology.experiment import ExperimentConfig, run_trial_artifacts
from seed_archeology.finders import FinderKind, FinderParams
from seed_archeology.trees import SeedSpec

PILOT_MASTER_SEED = 902140
PILOT_TRIALS = 10_000

#: The three reference experiments the acceptance suite confirms.  gamma
#: is inert for the uniform-attachment finder and epsilon for the first
#: two, but the parameter block requires both, so harmless values are
#: pinned here to keep the fixture self-contained.
REFERENCE_EXPERIMENTS = {
    "path": dict(
        seed_spec=SeedSpec.path(50),
        n=5_000,
        finder=FinderKind.PATH,
        params=FinderParams(l=50, gamma=0.5, epsilon=0.1),
    ),
    "star": dict(
        seed_spec=SeedSpec.star(100),
        n=10_000,
        finder=FinderKind.STAR,
        params=FinderParams(l=100, gamma=0.3, epsilon=0.1),
    ),
    "urrt": dict(
        seed_spec=SeedSpec.urrt(300),
        n=30_000,
        finder=FinderKind.URRT,
        params=FinderParams(l=300, gamma=0.5, epsilon=0.1),
    ),
}


def run_pilot(name: str, trials: int, master_seed: int) -> dict:
    config = ExperimentConfig(
        trials=trials, master_seed=master_seed, **REFERENCE_EXPERIMENTS[name]
    )
    success_first = 0
    success_second = 0
    deficit_trials = 0
    overlap_total = 0
    center_hits = 0 if config.finder is FinderKind.STAR else None
    started = time.perf_counter()
    for t in range(trials):
        artifacts = run_trial_artifacts(config, t)
        record = artifacts.record
        success_first += record.success_first
        success_second += record.success_second
        deficit_trials += record.deficit
        overlap_total += record.overlap
        if center_hits is not None:
            center = artifacts.estimate.center
            # The star builder hands arrival label 1 to the hub, so a
            # correctly identified center maps back to exactly that label.
            if artifacts.view.arrival_labels_of([center]) == {1}:
                center_hits += 1
        if (t + 1) % 1000 == 0:
            print(
                f"  {name}: {t + 1}/{trials} trials,"
                f" {time.perf_counter() - started:.0f}s",
                file=sys.stderr,
            )
    seconds = time.perf_counter() - started
    out = {
        "config": config.to_dict(),
        "success_first": success_first,
        "success_second": success_second,
        "deficit_trials": deficit_trials,
        "mean_overlap": round(overlap_total / trials, 4),
        "seconds": round(seconds, 1),
    }
    if center_hits is not None:
        out["center_hits"] = center_hits
    return out


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=PILOT_TRIALS)
    parser.add_argument("--master-seed", type=int, default=PILOT_MASTER_SEED)
    parser.add_argument(
        "--output",
        default=str(
            Path(__file__).resolve().parent.parent
            / "tests"
            / "fixtures"
            / "pilot_fixtures.json"
        ),
    )
    args = parser.parse_args(argv)

    fixture = {
        "description": (
            "Pilot success counts for the reference recovery experiments; "
            "the acceptance suite confirms short reruns against these."
        ),
        "generated": datetime.date.today().isoformat(),
        "pilot_trials": args.trials,
        "pilot_master_seed": args.master_seed,
        "experiments": {},
    }
    for name in REFERENCE_EXPERIMENTS:
        print(f"running {name} pilot...", file=sys.stderr)
        fixture["experiments"][name] = run_pilot(
            name, args.trials, args.master_seed
        )

    out_path = Path(args.output)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as f:
        json.dump(fixture, f, indent=2)
        f.write("\n")
    print(f"wrote {out_path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
