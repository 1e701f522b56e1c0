"""Run the built-in validation suites and print each check's verdict.

Each suite compares a Monte Carlo estimate against an exact value or a
proven bound: descendant-count expectations, the singleton-parent mean,
the camouflage-count lower bound and concentration, urn fraction
moments, and the two tail bounds.  The experiment CLI exposes the same
thing as `seed-archeology experiment validate <suite>`.
"""

import argparse

from seed_archeology import RngHandle, VALIDATION_SUITES, validate_formulas


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=20_000,
                        help="trials per suite (default 20000)")
    parser.add_argument("--master-seed", type=int, default=2024)
    args = parser.parse_args()

    all_passed = True
    for stream, suite in enumerate(VALIDATION_SUITES):
        report = validate_formulas(
            suite, args.trials, RngHandle(args.master_seed, stream)
        )
        verdict = "ok" if report["passed"] else "FAILED"
        print(f"suite {suite!r} [{verdict}]")
        for check in report["checks"]:
            se = check["se"]
            if se > 0:
                signed = (check["empirical"] - check["theoretical"]) / se
                dist = f"{signed:+6.1f} SE"
            else:
                dist = "   se 0"
            flag = "ok" if check["passed"] else "FAILED"
            print(f"  {check['name']:42s} empirical {check['empirical']:10.5f}"
                  f"  vs {check['theoretical']:10.5f}  ({dist}) [{flag}]")
        all_passed &= report["passed"]
    print()
    print("all suites passed" if all_passed else "SOME SUITE FAILED")


if __name__ == "__main__":
    main()
