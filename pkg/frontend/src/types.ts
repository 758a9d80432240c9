// Wire types mirroring the service's JSON. Columns are 1-based everywhere.

export interface PosteriorEntry {
  label: string;
  probability: number;
}

export interface Observation {
  column: number;
  value: boolean;
}

export interface Recommendation {
  column: number;
  cost: number;
  name: string | null;
}

export type SessionStatus = "active" | "classified" | "no_match";

export interface SessionView {
  id: string;
  problem_id: string;
  strategy: string;
  mode: string;
  status: SessionStatus;
  observed: Observation[];
  cost_so_far: number;
  posterior: PosteriorEntry[];
  recommendation: Recommendation | null;
  classified_label: string | null;
}

export interface ProblemBody {
  id?: string;
  labels: string[];
  matrix: number[][];
  p: number[];
  c: number[];
  column_names?: string[];
}

export interface ProblemSummary {
  id: string;
  rows: number;
  cols: number;
  labels: string[];
}

export interface TreeInfo {
  method: string;
  entropy_rule: string | null;
  expected_cost: number;
  root_column: number | null;
  tree: unknown;
}

export const STRATEGIES = ["dp", "entropy", "signature", "hybrid"] as const;
export type Strategy = (typeof STRATEGIES)[number];
