import type { ProblemBody, SessionView } from "./types.js";

// Pure projections of the latest service response into display values.
// No probability math happens here beyond percentage formatting, so the
// panel always shows exactly what the service decided.

export interface Bar {
  label: string;
  pct: number;
  text: string;
}

export interface HistoryItem {
  question: string;
  answer: "Yes" | "No";
}

export interface Display {
  status: "question" | "classified" | "no_match";
  question: string | null;
  questionColumn: number | null;
  questionCost: string | null;
  bars: Bar[];
  costText: string;
  history: HistoryItem[];
  resultLabel: string | null;
}

export function columnLabel(column: number, problem?: ProblemBody | null): string {
  const name = problem?.column_names?.[column - 1];
  return name ? `${name} (property ${column})` : `property ${column}`;
}

export function questionText(column: number, problem?: ProblemBody | null): string {
  return `Is ${columnLabel(column, problem)} present?`;
}

export function formatCost(value: number): string {
  const rounded = Math.round(value * 1e6) / 1e6;
  return Number.isInteger(rounded) ? String(rounded) : String(rounded);
}

export function toDisplay(view: SessionView, problem?: ProblemBody | null): Display {
  const bars = view.posterior.map((entry) => ({
    label: entry.label,
    pct: Math.round(entry.probability * 100),
    text: `${Math.round(entry.probability * 100)}%`,
  }));
  const history = view.observed.map((obs) => ({
    question: questionText(obs.column, problem),
    answer: obs.value ? ("Yes" as const) : ("No" as const),
  }));
  const base = {
    bars,
    history,
    costText: formatCost(view.cost_so_far),
  };
  if (view.status === "classified") {
    return {
      ...base,
      status: "classified",
      question: null,
      questionColumn: null,
      questionCost: null,
      resultLabel: view.classified_label,
    };
  }
  if (view.status === "no_match") {
    return {
      ...base,
      status: "no_match",
      question: null,
      questionColumn: null,
      questionCost: null,
      resultLabel: null,
    };
  }
  const rec = view.recommendation;
  let question: string | null = null;
  if (rec) {
    // the service names the recommended column; fall back to the problem body
    question = rec.name
      ? `Is ${rec.name} (property ${rec.column}) present?`
      : questionText(rec.column, problem);
  }
  return {
    ...base,
    status: "question",
    question,
    questionColumn: rec ? rec.column : null,
    questionCost: rec ? formatCost(rec.cost) : null,
    resultLabel: null,
  };
}
