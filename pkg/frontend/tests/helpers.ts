import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

export interface Recorded {
  status: number;
  body: unknown;
}

export interface WorkedTrace {
  create_problem: Recorded;
  get_problem: Recorded;
  start_session: Recorded;
  answer_1: Recorded;
  answer_2: Recorded;
  trees: Record<string, Recorded>;
}

export function loadWorkedTrace(): WorkedTrace {
  const here = dirname(fileURLToPath(import.meta.url));
  const raw = readFileSync(join(here, "fixtures", "worked_session.json"), "utf-8");
  return JSON.parse(raw) as WorkedTrace;
}

export function jsonResponse(recorded: Recorded): Response {
  return new Response(JSON.stringify(recorded.body), {
    status: recorded.status,
    headers: { "content-type": "application/json" },
  });
}

/**
 * Fetch stub that replays the recorded service exchange for the worked
 * 4-pattern problem: create, fetch, start a dp session, answer "No" to
 * property 2 and "Yes" to property 4, plus the per-strategy tree lookups.
 */
export function workedServiceFetch(trace: WorkedTrace) {
  const problemId = (trace.create_problem.body as { id: string }).id;
  const sessionId = (trace.start_session.body as { id: string }).id;
  let answers = 0;
  const calls: string[] = [];

  const fetchImpl = async (input: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    calls.push(`${method} ${input}`);
    if (method === "POST" && input === "/api/problems") {
      return jsonResponse(trace.create_problem);
    }
    if (method === "GET" && input === `/api/problems/${problemId}`) {
      return jsonResponse(trace.get_problem);
    }
    if (method === "POST" && input === "/api/sessions") {
      return jsonResponse(trace.start_session);
    }
    if (method === "POST" && input === `/api/sessions/${sessionId}/answers`) {
      answers += 1;
      if (answers === 1) {
        const sent = JSON.parse(String(init?.body));
        if (sent.column !== 2 || sent.value !== false) {
          return new Response(JSON.stringify({ error: "unexpected answer" }), { status: 400 });
        }
        return jsonResponse(trace.answer_1);
      }
      if (answers === 2) {
        const sent = JSON.parse(String(init?.body));
        if (sent.column !== 4 || sent.value !== true) {
          return new Response(JSON.stringify({ error: "unexpected answer" }), { status: 400 });
        }
        return jsonResponse(trace.answer_2);
      }
      return new Response(JSON.stringify({ error: "session is settled" }), { status: 409 });
    }
    const treeMatch = input.match(/^\/api\/problems\/[^/]+\/tree\?method=(\w+)$/);
    if (method === "GET" && treeMatch) {
      const recorded = trace.trees[treeMatch[1] as string];
      if (recorded) {
        return jsonResponse(recorded);
      }
    }
    return new Response(JSON.stringify({ error: `no fixture for ${method} ${input}` }), {
      status: 500,
    });
  };

  return { fetchImpl, calls };
}
