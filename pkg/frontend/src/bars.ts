/** Run-panel view model: acceptability bar groups with standard-error
 * whiskers and fragility badges. Heights and whiskers carry the service's
 * fractions verbatim; formatting happens at render time only. */

import type { AlternativeDiagnostic, Report, WhatIfResponse } from "./types.js";

export interface Bar {
  category: string;
  /** fraction straight from the service report (or the effective row) */
  fraction: number;
  /** standard error fraction, zero for knocked-out overrides */
  se: number;
}

export interface BarGroup {
  alternative: string;
  modal: number;
  bars: Bar[];
  fragile: boolean;
  knockedOut: boolean;
  /** lambda-breakpoint table, present to back the fragility badge */
  intervals: [number, number, number][];
  typeI: number | null;
  typeII: number | null;
}

export function barGroupsFromWhatIf(response: WhatIfResponse): BarGroup[] {
  const byAlt = new Map<string, AlternativeDiagnostic>(
    response.diagnostics.map((d) => [d.alternative, d]),
  );
  return response.report.rows.map((row) => {
    const diag = byAlt.get(row.alternative);
    const knockedOut = diag?.knocked_out ?? false;
    const pi = knockedOut && diag ? diag.effective_pi : row.pi;
    return {
      alternative: row.alternative,
      modal: knockedOut && diag ? diag.effective_modal : row.modal,
      bars: response.report.categories.map((category, k) => ({
        category,
        fraction: pi[k] ?? 0,
        se: knockedOut ? 0 : row.se[k] ?? 0,
      })),
      fragile: diag?.fragile ?? false,
      knockedOut,
      intervals: diag?.intervals ?? [],
      typeI: row.type_i,
      typeII: row.type_ii,
    };
  });
}

/** Plain report view (asynchronous runs have no diagnostics). */
export function barGroupsFromReport(report: Report): BarGroup[] {
  return report.rows.map((row) => ({
    alternative: row.alternative,
    modal: row.modal,
    bars: report.categories.map((category, k) => ({
      category,
      fraction: row.pi[k] ?? 0,
      se: row.se[k] ?? 0,
    })),
    fragile: false,
    knockedOut: false,
    intervals: [],
    typeI: row.type_i,
    typeII: row.type_ii,
  }));
}
