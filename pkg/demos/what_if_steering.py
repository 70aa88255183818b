"""What-if steering: veto thresholds, lambda sensitivity, interval data.

Three experiments a credit officer can run interactively:
  1. make "availability of unit pilots" a veto criterion and watch the two
     companies without pilots drop to the worst class;
  2. inspect lambda-breakpoint tables to spot fragile assignments (abrupt
     non-consecutive class changes);
  3. widen evaluations into prudential intervals and rerun.

Run: python demos/what_if_steering.py
"""

from risksort import Evaluation
from risksort.casestudy import load_case_study
from risksort.whatif import WhatIfOverlay, run_whatif


def show(result, title):
    print(title)
    for diag in result.diagnostics:
        flags = []
        if diag.knocked_out:
            flags.append("KNOCKED OUT")
        if diag.fragile:
            flags.append("fragile")
        pis = "  ".join(f"{x:6.1%}" for x in diag.effective_pi)
        print(f"  {diag.alternative:<12} C{diag.effective_modal}  [{pis}]"
              f"  {' '.join(flags)}")
        if diag.fragile and not diag.knocked_out:
            pieces = ", ".join(f"({lo:.3f},{hi:.3f}]->C{cat}"
                               for lo, hi, cat in diag.intervals)
            print(f"               lambda table: {pieces}")
    print()


def main():
    pf = load_case_study()

    show(run_whatif(pf, WhatIfOverlay(seed=42)), "baseline group run:")

    overlay = WhatIfOverlay(veto={"unit_pilots": 0.5}, seed=42)
    show(run_whatif(pf, overlay),
         "veto on unit pilots (full opposition disqualifies):")

    overlay = WhatIfOverlay(dm="DM5", seed=42,
                            evaluations={"company_d": {"technique_advantage": 4}})
    show(run_whatif(pf, overlay),
         "officer DM5 after raising company_d's technique advantage to 4:")

    overlay = WhatIfOverlay(
        dm="DM1", seed=42, evaluation_sampling=True,
        evaluations={
            "company_a": {"technique_advantage": Evaluation.interval(3, 5),
                          "potential_market": Evaluation.interval(3, 4)},
        },
    )
    show(run_whatif(pf, overlay),
         "officer DM1 with company_a's soft scores widened to intervals:")


if __name__ == "__main__":
    main()
