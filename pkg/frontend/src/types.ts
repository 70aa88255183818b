/** Wire types mirroring the service JSON, one to one. */

export interface ReportRow {
  alternative: string;
  dm: string;
  pi: number[];
  se: number[];
  modal: number;
  type_i: number | null;
  type_ii: number | null;
}

export interface Report {
  categories: string[];
  draws: number;
  seed: number;
  rule: string;
  cutoff: number;
  rows: ReportRow[];
}

export interface RunHandle {
  run_id: string;
  project_id: string;
  status: "queued" | "running" | "done" | "failed";
  report?: Report;
  error?: string;
}

/** [lo, hi, category], covering (lo, hi]; the first also includes its lo. */
export type LambdaIntervalRow = [number, number, number];

export interface AlternativeDiagnostic {
  alternative: string;
  intervals: LambdaIntervalRow[];
  non_monotone: boolean;
  skips_categories: boolean;
  fragile: boolean;
  knocked_out: boolean;
  effective_pi: number[];
  effective_modal: number;
}

export interface WhatIfResponse {
  report: Report;
  knockouts: string[];
  diagnostics: AlternativeDiagnostic[];
}

export interface DeckPayload {
  ranks: string[][];
  white_cards: number[];
  z: number;
}

export interface SimosResponse {
  rank_weights: number[];
  rank_totals: number[];
  total: number;
  weights: Record<string, number>;
  preorder: string;
}

export type EvaluationPatch = number | [number, number];

export interface WhatIfRequest {
  dm?: string | null;
  veto?: Record<string, number>;
  evaluations?: Record<string, Record<string, EvaluationPatch>>;
  lambda?: [number, number];
  rule?: string;
  draws?: number;
  seed?: number;
  evaluation_sampling?: boolean;
}

export interface RunRequest {
  dm?: string | null;
  draws?: number;
  seed?: number;
  lambda?: [number, number];
  rule?: string;
  evaluation_sampling?: boolean;
  workers?: number;
}

export interface ValidationDetail {
  error: string;
  violations?: { location: string; message: string }[];
  location?: string;
  message?: string;
}
