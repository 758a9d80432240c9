import { ApiClient } from "./api.js";
import type { ProblemBody, SessionView, Strategy, TreeInfo } from "./types.js";
import { Display, toDisplay } from "./viewmodel.js";

export interface CompareRow {
  method: string;
  rootColumn: number | null;
  expectedCost: number;
  error?: string;
}

export interface PanelState {
  problemId: string | null;
  problem: ProblemBody | null;
  session: SessionView | null;
  display: Display | null;
  compare: CompareRow[];
  error: string | null;
  busy: boolean;
}

type Listener = (state: PanelState) => void;

/** Session flow driver: one API call per user action, state is always the
 * latest confirmed server response. */
export class ConsultationController {
  private state: PanelState = {
    problemId: null,
    problem: null,
    session: null,
    display: null,
    compare: [],
    error: null,
    busy: false,
  };
  private listeners: Listener[] = [];

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
    listener(this.state);
  }

  get current(): PanelState {
    return this.state;
  }

  private update(patch: Partial<PanelState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  async uploadProblem(body: ProblemBody): Promise<void> {
    this.update({ busy: true, error: null });
    try {
      const created = await this.api.createProblem(body);
      const problem = await this.api.getProblem(created.id);
      this.update({
        problemId: created.id,
        problem,
        session: null,
        display: null,
        compare: [],
        busy: false,
      });
    } catch (err) {
      this.update({ busy: false, error: describe(err) });
    }
  }

  async pickProblem(id: string): Promise<void> {
    this.update({ busy: true, error: null });
    try {
      const problem = await this.api.getProblem(id);
      this.update({
        problemId: id,
        problem,
        session: null,
        display: null,
        compare: [],
        busy: false,
      });
    } catch (err) {
      this.update({ busy: false, error: describe(err) });
    }
  }

  async startSession(strategy: Strategy, mode: "strict" | "free"): Promise<void> {
    if (!this.state.problemId) {
      this.update({ error: "load a problem first" });
      return;
    }
    this.update({ busy: true, error: null });
    try {
      const session = await this.api.startSession(this.state.problemId, strategy, mode);
      this.update({
        session,
        display: toDisplay(session, this.state.problem),
        busy: false,
      });
    } catch (err) {
      this.update({ busy: false, error: describe(err) });
    }
  }

  async answer(value: boolean, column?: number): Promise<void> {
    const session = this.state.session;
    if (!session) {
      return;
    }
    const target = column ?? session.recommendation?.column;
    if (target == null) {
      return;
    }
    this.update({ busy: true, error: null });
    try {
      const next = await this.api.answer(session.id, target, value);
      this.update({
        session: next,
        display: toDisplay(next, this.state.problem),
        busy: false,
      });
    } catch (err) {
      this.update({ busy: false, error: describe(err) });
    }
  }

  async loadComparison(methods: readonly string[]): Promise<void> {
    if (!this.state.problemId) {
      return;
    }
    this.update({ busy: true, error: null });
    const rows: CompareRow[] = [];
    for (const method of methods) {
      try {
        const info: TreeInfo = await this.api.strategyTree(this.state.problemId, method);
        rows.push({
          method,
          rootColumn: info.root_column,
          expectedCost: info.expected_cost,
        });
      } catch (err) {
        rows.push({ method, rootColumn: null, expectedCost: NaN, error: describe(err) });
      }
    }
    this.update({ compare: rows, busy: false });
  }
}

function describe(err: unknown): string {
  if (err instanceof Error) {
    return err.message;
  }
  return String(err);
}
