import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { ConsultationController } from "../src/controller.js";
import type { ProblemBody } from "../src/types.js";
import { loadWorkedTrace, workedServiceFetch } from "./helpers.js";

const trace = loadWorkedTrace();

function makeController() {
  const { fetchImpl, calls } = workedServiceFetch(trace);
  const api = new ApiClient("", fetchImpl);
  return { controller: new ConsultationController(api), calls };
}

describe("consultation flow on the worked problem", () => {
  let controller: ConsultationController;
  let calls: string[];

  beforeEach(async () => {
    ({ controller, calls } = makeController());
    await controller.uploadProblem(trace.get_problem.body as ProblemBody);
    await controller.startSession("dp", "strict");
  });

  it("asks about property 2 first with the prior bars", () => {
    const display = controller.current.display!;
    expect(display.question).toBe("Is fever (property 2) present?");
    expect(display.bars.map((b) => b.pct)).toEqual([40, 20, 30, 10]);
    expect(display.costText).toBe("0");
  });

  it("No to property 2 then Yes to property 4 classifies at cost 2", async () => {
    await controller.answer(false);
    let display = controller.current.display!;
    expect(display.bars.map((b) => b.text)).toEqual(["57%", "43%"]);
    expect(display.costText).toBe("1");
    expect(display.question).toBe("Is rash (property 4) present?");

    await controller.answer(true);
    display = controller.current.display!;
    expect(display.status).toBe("classified");
    expect(display.resultLabel).toBe("C1");
    expect(display.costText).toBe("2");
    expect(display.history).toEqual([
      { question: "Is fever (property 2) present?", answer: "No" },
      { question: "Is rash (property 4) present?", answer: "Yes" },
    ]);
  });

  it("sends exactly one API call per user action", async () => {
    const before = calls.length;
    await controller.answer(false);
    expect(calls.length).toBe(before + 1);
    await controller.answer(true);
    expect(calls.length).toBe(before + 2);
  });

  it("keeps history append-only within a session", async () => {
    await controller.answer(false);
    const first = controller.current.display!.history;
    await controller.answer(true);
    const second = controller.current.display!.history;
    expect(second.slice(0, first.length)).toEqual(first);
  });
});

describe("strategy comparison panel", () => {
  it("shows every method's root question and expected cost", async () => {
    const { controller } = makeController();
    await controller.uploadProblem(trace.get_problem.body as ProblemBody);
    await controller.loadComparison(["dp", "entropy", "signature", "hybrid"]);
    const rows = controller.current.compare;
    expect(rows.map((r) => r.method)).toEqual(["dp", "entropy", "signature", "hybrid"]);
    for (const row of rows) {
      expect(row.expectedCost).toBeCloseTo(2.9, 9);
    }
    expect(rows[0]!.rootColumn).toBe(2);
    expect(rows[2]!.rootColumn).toBe(4);
  });
});

describe("error handling", () => {
  it("reports a failed upload without crashing", async () => {
    const api = new ApiClient("", async () =>
      new Response(JSON.stringify({ violations: ["duplicate rows 0,1"] }), { status: 400 }),
    );
    const controller = new ConsultationController(api);
    await controller.uploadProblem({ labels: [], matrix: [], p: [], c: [] });
    expect(controller.current.error).toContain("duplicate rows");
    expect(controller.current.problemId).toBeNull();
  });

  it("ApiError carries status and detail", async () => {
    const api = new ApiClient("", async () =>
      new Response(JSON.stringify({ error: "unknown session" }), { status: 404 }),
    );
    await expect(api.getSession("nope")).rejects.toThrowError(ApiError);
  });
});
