import { ApiClient } from "./api.js";
import { ConsultationController, PanelState } from "./controller.js";
import { STRATEGIES, Strategy } from "./types.js";
import { columnLabel, formatCost } from "./viewmodel.js";

const api = new ApiClient("");
const controller = new ConsultationController(api);

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text != null) node.textContent = text;
  return node;
}

function renderSetup(root: HTMLElement): void {
  const panel = el("section", "setup");
  panel.appendChild(el("h2", undefined, "1. Load a problem"));

  const fileInput = el("input") as HTMLInputElement;
  fileInput.type = "file";
  fileInput.accept = ".json,application/json";
  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    try {
      const body = JSON.parse(await file.text());
      await controller.uploadProblem(body);
      await refreshProblemList();
    } catch (err) {
      alert(`could not read the problem file: ${err}`);
    }
  });
  panel.appendChild(fileInput);

  const pickRow = el("div", "pick-row");
  const select = el("select") as HTMLSelectElement;
  select.id = "problem-select";
  const pickButton = el("button", undefined, "Open");
  pickButton.addEventListener("click", () => {
    if (select.value) void controller.pickProblem(select.value);
  });
  pickRow.append(select, pickButton);
  panel.appendChild(pickRow);

  panel.appendChild(el("h2", undefined, "2. Choose a strategy"));
  const strategyRow = el("div", "strategy-row");
  const strategySelect = el("select") as HTMLSelectElement;
  for (const name of STRATEGIES) {
    const option = el("option", undefined, name) as HTMLOptionElement;
    option.value = name;
    strategySelect.appendChild(option);
  }
  const freeLabel = el("label", "free-toggle");
  const freeBox = el("input") as HTMLInputElement;
  freeBox.type = "checkbox";
  freeLabel.append(freeBox, document.createTextNode(" answer questions in any order"));
  const startButton = el("button", "primary", "Start consultation");
  startButton.addEventListener("click", () => {
    void controller.startSession(
      strategySelect.value as Strategy,
      freeBox.checked ? "free" : "strict",
    );
  });
  const compareButton = el("button", undefined, "Compare strategies");
  compareButton.addEventListener("click", () => void controller.loadComparison(STRATEGIES));
  strategyRow.append(strategySelect, freeLabel, startButton, compareButton);
  panel.appendChild(strategyRow);

  root.appendChild(panel);

  async function refreshProblemList(): Promise<void> {
    try {
      const { problems } = await api.listProblems();
      select.innerHTML = "";
      for (const p of problems) {
        const option = el(
          "option",
          undefined,
          `${p.id} (${p.rows} classes, ${p.cols} properties)`,
        ) as HTMLOptionElement;
        option.value = p.id;
        select.appendChild(option);
      }
      const current = controller.current.problemId;
      if (current) select.value = current;
    } catch {
      // service unreachable; the error banner reports it on the next action
    }
  }
  void refreshProblemList();
}

function renderSession(root: HTMLElement, state: PanelState): void {
  const panel = el("section", "session");
  const display = state.display;
  if (!state.problem) {
    panel.appendChild(el("p", "hint", "Upload or pick a problem file to begin."));
    root.appendChild(panel);
    return;
  }
  if (!display) {
    panel.appendChild(el("p", "hint", "Pick a strategy and start the consultation."));
    root.appendChild(panel);
    return;
  }

  if (display.status === "question" && display.question) {
    const card = el("div", "question-card");
    card.appendChild(el("h2", undefined, display.question));
    card.appendChild(el("p", "cost-hint", `answer cost: ${display.questionCost}`));
    const yes = el("button", "primary", "Yes");
    yes.addEventListener("click", () => void controller.answer(true));
    const no = el("button", "primary", "No");
    no.addEventListener("click", () => void controller.answer(false));
    const row = el("div", "answer-row");
    row.append(yes, no);
    card.appendChild(row);
    panel.appendChild(card);
  } else if (display.status === "classified") {
    const card = el("div", "result-card");
    card.appendChild(el("h2", undefined, `Classified: ${display.resultLabel}`));
    card.appendChild(el("p", undefined, `Total inspection cost: ${display.costText}`));
    panel.appendChild(card);
  } else {
    const card = el("div", "result-card no-match");
    card.appendChild(el("h2", undefined, "No matching pattern"));
    card.appendChild(
      el("p", undefined, "The answers rule out every known class."),
    );
    panel.appendChild(card);
  }

  const barsBox = el("div", "bars");
  barsBox.appendChild(el("h3", undefined, "Class probabilities"));
  for (const bar of display.bars) {
    const row = el("div", "bar-row");
    row.appendChild(el("span", "bar-label", bar.label));
    const track = el("div", "bar-track");
    const fill = el("div", "bar-fill");
    fill.style.width = `${bar.pct}%`;
    track.appendChild(fill);
    row.appendChild(track);
    row.appendChild(el("span", "bar-pct", bar.text));
    barsBox.appendChild(row);
  }
  panel.appendChild(barsBox);

  const costLine = el("p", "running-cost", `Cost so far: ${display.costText}`);
  panel.appendChild(costLine);

  if (display.history.length) {
    const historyBox = el("div", "history");
    historyBox.appendChild(el("h3", undefined, "Answers"));
    const list = el("ol");
    for (const item of display.history) {
      list.appendChild(el("li", undefined, `${item.question} — ${item.answer}`));
    }
    historyBox.appendChild(list);
    panel.appendChild(historyBox);
  }

  root.appendChild(panel);
}

function renderCompare(root: HTMLElement, state: PanelState): void {
  if (!state.compare.length) return;
  const panel = el("section", "compare");
  panel.appendChild(el("h2", undefined, "Strategy comparison"));
  const table = el("table");
  const head = el("tr");
  for (const title of ["method", "first question", "expected cost"]) {
    head.appendChild(el("th", undefined, title));
  }
  table.appendChild(head);
  for (const row of state.compare) {
    const tr = el("tr");
    tr.appendChild(el("td", undefined, row.method));
    if (row.error) {
      const cell = el("td", "error", row.error) as HTMLTableCellElement;
      cell.colSpan = 2;
      tr.appendChild(cell);
    } else {
      tr.appendChild(
        el(
          "td",
          undefined,
          row.rootColumn == null ? "-" : columnLabel(row.rootColumn, state.problem),
        ),
      );
      tr.appendChild(el("td", undefined, formatCost(row.expectedCost)));
    }
    table.appendChild(tr);
  }
  panel.appendChild(table);
  root.appendChild(panel);
}

export function mount(root: HTMLElement): void {
  controller.subscribe((state) => {
    root.innerHTML = "";
    root.appendChild(el("h1", undefined, "Sequential classification consultation"));
    if (state.error) {
      const banner = el("div", "error-banner", state.error);
      const retry = el("button", undefined, "dismiss");
      retry.addEventListener("click", () => location.reload());
      banner.appendChild(retry);
      root.appendChild(banner);
    }
    renderSetup(root);
    renderSession(root, state);
    renderCompare(root, state);
  });
}

const rootElement = document.getElementById("app");
if (rootElement) {
  mount(rootElement);
}
