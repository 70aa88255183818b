"""Business-plan screening: scenario cash flows, NPVs, quartile profiles.

First screen: lower each company's planned cash flows by 20% and 40%
(pessimistically, so outflows grow) and check the NPVs stay positive.
Second step: derive the financial limit profiles from sector ratio samples
via quartiles, the way the sector benchmarks in the case study were built.

Run: python demos/business_plan_screening.py
"""

from risksort import ScenarioSpec, apply_scenario, npv, profiles_from_quartiles
from risksort.casestudy import load_case_study, load_cash_flows, load_reported_results


def main():
    cash = load_cash_flows()
    rate = cash["rate"]
    print(f"discount rate {rate:.2%} (end-of-year discounting, first flow at year 1)\n")
    for label, series in cash["series"].items():
        print(label)
        for severity in (0.0, 0.2, 0.4):
            scenario = apply_scenario(series, ScenarioSpec(severity))
            value = npv(scenario, rate)
            key = "base" if severity == 0 else f"{severity:g}"
            reported = cash["reported_npv"][label][key]
            print(f"  lowered {severity:>4.0%}: npv {value:>14,.2f}"
                  f"   (originally reported {reported:>14,.2f})")
        print()

    print("financial limit profiles from sector quartiles (company_d's sector):")
    pf = load_case_study()
    best = load_reported_results()["cross_sector_best"]
    directions = {c.id: c.direction for c in pf.project.criteria}
    columns = profiles_from_quartiles(pf.ratio_samples["sector_d"], directions, best)
    for rid, col in columns.items():
        print(f"  {rid:<26} b1..b4 = {tuple(round(x, 2) for x in col)}")
    print("\n(b1 carries the riskiest quartile, b3 the safest, b4 the best value"
          "\n across all sectors; the R&D/sales column is officer-supplied.)")


if __name__ == "__main__":
    main()
