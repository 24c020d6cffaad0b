// DOM rendering. Views only display what the view model holds; every score,
// distance and order shown here came out of an API response untouched.

import type { SessionFlow, SliderState, ViewModel } from "./state.js";
import { cellError, distSum, ifsError } from "./validate.js";
import type { Cell, CellKind, CriterionDef, ProblemDoc } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function numberInput(value: number | "", step: string, onInput: (v: number) => void): HTMLInputElement {
  const input = el("input");
  input.type = "number";
  input.step = step;
  input.value = value === "" ? "" : String(value);
  input.addEventListener("input", () => onInput(parseFloat(input.value)));
  return input;
}

// -- session setup -----------------------------------------------------------

export function renderSetup(root: HTMLElement, onCreate: (problem: ProblemDoc) => void): void {
  root.replaceChildren();
  const box = el("section", "panel");
  box.append(el("h2", "", "New session"));
  box.append(
    el(
      "p",
      "hint",
      "Paste a problem skeleton (id, alternatives, criteria, makers; judgments optional).",
    ),
  );
  const area = el("textarea");
  area.rows = 14;
  area.value = JSON.stringify(
    {
      id: "session-problem",
      alternatives: [
        { id: "a", name: "Option A" },
        { id: "b", name: "Option B" },
      ],
      criteria: [
        { id: "c1", name: "Quality", direction: "benefit" },
        { id: "c2", name: "Service", direction: "benefit" },
      ],
      makers: [{ id: "m1", weight: 1.0 }],
    },
    null,
    2,
  );
  const error = el("p", "error");
  const button = el("button", "", "Create session");
  button.addEventListener("click", () => {
    try {
      onCreate(JSON.parse(area.value) as ProblemDoc);
    } catch (exc) {
      error.textContent = `invalid JSON: ${exc}`;
    }
  });
  box.append(area, button, error);
  root.append(box);
}

// -- judgment entry -----------------------------------------------------------

const KIND_LABELS: Record<CellKind, string> = {
  crisp: "crisp",
  dist: "distribution",
  ifs: "fuzzy (mu, nu)",
};

function defaultCell(kind: CellKind): Cell {
  switch (kind) {
    case "crisp":
      return { kind: "crisp", value: 0.5 };
    case "dist":
      return { kind: "dist", outcomes: [[0, 0.5], [1, 0.5]] };
    case "ifs":
      return { kind: "ifs", mu: 0.5, nu: 0.3 };
  }
}

function renderCellEditor(
  flow: SessionFlow,
  makerId: string,
  altId: string,
  critId: string,
  cell: Cell | undefined,
): HTMLElement {
  const wrap = el("div", "cell-editor");
  const select = el("select");
  for (const kind of ["crisp", "dist", "ifs"] as CellKind[]) {
    const option = el("option", "", KIND_LABELS[kind]);
    option.value = kind;
    select.append(option);
  }
  select.value = cell?.kind ?? "crisp";
  select.addEventListener("change", () => {
    flow.editDraft(makerId, (draft) => {
      draft.cells[altId] = draft.cells[altId] ?? {};
      draft.cells[altId][critId] = defaultCell(select.value as CellKind);
    });
  });
  wrap.append(select);

  const set = (next: Cell) =>
    flow.editDraft(makerId, (draft) => {
      draft.cells[altId] = draft.cells[altId] ?? {};
      draft.cells[altId][critId] = next;
    });

  const message = el("span", "cell-error");
  if (cell === undefined) {
    message.textContent = "not set";
  } else if (cell.kind === "crisp") {
    wrap.append(
      numberInput(cell.value, "0.01", (v) => set({ kind: "crisp", value: v })),
    );
  } else if (cell.kind === "ifs") {
    const mu = numberInput(cell.mu, "0.01", (v) => set({ kind: "ifs", mu: v, nu: cell.nu }));
    const nu = numberInput(cell.nu, "0.01", (v) => set({ kind: "ifs", mu: cell.mu, nu: v }));
    mu.title = "membership (mu)";
    nu.title = "non-membership (nu)";
    wrap.append(mu, nu);
    const problem = ifsError(cell.mu, cell.nu);
    if (problem) message.textContent = problem;
  } else {
    const table = el("div", "dist-rows");
    cell.outcomes.forEach(([value, prob], index) => {
      const row = el("div", "dist-row");
      row.append(
        numberInput(value, "0.1", (v) => {
          const outcomes = cell.outcomes.map((pair, i): [number, number] =>
            i === index ? [v, pair[1]] : pair,
          );
          set({ kind: "dist", outcomes });
        }),
        numberInput(prob, "0.05", (p) => {
          const outcomes = cell.outcomes.map((pair, i): [number, number] =>
            i === index ? [pair[0], p] : pair,
          );
          set({ kind: "dist", outcomes });
        }),
      );
      const remove = el("button", "mini", "x");
      remove.addEventListener("click", () =>
        set({ kind: "dist", outcomes: cell.outcomes.filter((_, i) => i !== index) }),
      );
      row.append(remove);
      table.append(row);
    });
    const add = el("button", "mini", "+ outcome");
    add.addEventListener("click", () =>
      set({ kind: "dist", outcomes: [...cell.outcomes, [0, 0]] }),
    );
    const sum = distSum(cell.outcomes);
    const sumBadge = el(
      "span",
      Math.abs(sum - 1) <= 1e-9 ? "dist-sum ok" : "dist-sum bad",
      `sum ${sum.toFixed(3)}`,
    );
    table.append(add, sumBadge);
    wrap.append(table);
  }
  if (cell !== undefined && cell.kind !== "ifs") {
    const problem = cellError(cell);
    if (problem) message.textContent = problem;
  }
  wrap.append(message);
  return wrap;
}

export function renderJudgments(root: HTMLElement, flow: SessionFlow): void {
  const vm = flow.vm;
  const snapshot = vm.snapshot;
  if (!snapshot) return;
  root.replaceChildren();
  const { alternatives, criteria, makers } = snapshot.problem;

  for (const maker of makers) {
    const panel = el("section", "panel");
    const submitted = !snapshot.pendingMakers.includes(maker.id);
    panel.append(
      el("h3", "", `Maker ${maker.id} (weight ${maker.weight})${submitted ? " — submitted" : ""}`),
    );
    const draft = vm.drafts[maker.id] ?? { criterionWeights: {}, cells: {} };

    const weightRow = el("div", "weight-row");
    weightRow.append(el("span", "label", "criterion weights:"));
    for (const criterion of criteria) {
      weightRow.append(el("span", "", `${criterion.id}`));
      weightRow.append(
        numberInput(draft.criterionWeights[criterion.id] ?? "", "0.05", (v) =>
          flow.editDraft(maker.id, (d) => {
            d.criterionWeights[criterion.id] = v;
          }),
        ),
      );
    }
    panel.append(weightRow);

    const grid = el("table", "judgment-grid");
    const head = el("tr");
    head.append(el("th"));
    for (const criterion of criteria) {
      head.append(el("th", "", `${criterion.name || criterion.id} (${criterion.direction})`));
    }
    grid.append(head);
    for (const alternative of alternatives) {
      const row = el("tr");
      row.append(el("th", "", alternative.name || alternative.id));
      for (const criterion of criteria) {
        const cellBox = el("td");
        cellBox.append(
          renderCellEditor(
            flow,
            maker.id,
            alternative.id,
            criterion.id,
            draft.cells[alternative.id]?.[criterion.id],
          ),
        );
        row.append(cellBox);
      }
      grid.append(row);
    }
    panel.append(grid);

    const issues = vm.draftIssues[maker.id] ?? [];
    const issueBox = el("ul", "issues");
    for (const issue of issues.slice(0, 6)) {
      issueBox.append(el("li", "", `${issue.location}: ${issue.message}`));
    }
    panel.append(issueBox);

    const submit = el("button", "", submitted ? "Resubmit judgment" : "Submit judgment");
    submit.disabled = issues.length > 0;
    submit.addEventListener("click", () => void flow.submitJudgment(maker.id));
    panel.append(submit);
    root.append(panel);
  }
}

// -- results -------------------------------------------------------------------

export function renderStages(root: HTMLElement, vm: ViewModel): void {
  root.replaceChildren();
  if (!vm.report) return;
  const panel = el("section", "panel");
  panel.append(el("h3", "", "Pipeline stages"));
  const list = el("ol", "stages");
  for (const stage of vm.report.stages) {
    const item = el("li", `stage ${stage.status}`);
    item.append(el("strong", "", stage.stage), el("span", "badge", stage.status));
    list.append(item);
  }
  panel.append(list);
  root.append(panel);
}

export function renderResult(root: HTMLElement, vm: ViewModel): void {
  root.replaceChildren();
  const result = vm.report?.result;
  if (!result) return;
  const panel = el("section", "panel");
  panel.append(el("h3", "", `Final ranking (${result.method})`));
  const list = el("ol", "ranking");
  for (const alt of result.order) {
    list.append(el("li", "", `${alt} — score ${result.scores[alt].toFixed(4)}`));
  }
  panel.append(list);
  root.append(panel);
}

export function renderConsensus(root: HTMLElement, vm: ViewModel): void {
  root.replaceChildren();
  const consensus = vm.consensus;
  if (!consensus) return;
  const panel = el("section", "panel");
  panel.append(el("h3", "", `Consensus index ${consensus.consensusIndex.toFixed(3)}`));
  const conflicted = new Set(consensus.conflicts.map((c) => c.maker));
  const heat = el("div", "heat");
  for (const [maker, distance] of Object.entries(consensus.perMaker).sort()) {
    const chip = el("div", conflicted.has(maker) ? "heat-cell conflict" : "heat-cell");
    chip.style.setProperty("--heat", distance.toFixed(3));
    chip.append(el("span", "", maker), el("span", "", distance.toFixed(3)));
    heat.append(chip);
  }
  panel.append(heat);
  if (consensus.conflicts.length > 0) {
    const list = el("ul", "conflicts");
    for (const conflict of consensus.conflicts) {
      list.append(
        el(
          "li",
          "",
          `${conflict.maker} disagrees (distance ${conflict.severity.toFixed(3)}); ` +
            `most effective weight change: ${conflict.criterion ?? "none"}`,
        ),
      );
    }
    panel.append(list);
  }
  root.append(panel);
}

function sliderRow(
  slider: SliderState,
  criteria: CriterionDef[],
  onSlide: (criterion: string, delta: number) => void,
): HTMLElement {
  const row = el("div", "slider-row");
  const criterion = criteria.find((c) => c.id === slider.criterion);
  row.append(
    el("span", "label", `${criterion?.name || slider.criterion} (w=${slider.baselineWeight.toFixed(3)})`),
  );
  const input = el("input");
  input.type = "range";
  input.min = String(slider.minDelta);
  input.max = String(slider.maxDelta);
  input.step = "0.01";
  input.value = String(slider.delta);
  input.addEventListener("change", () => onSlide(slider.criterion, parseFloat(input.value)));
  row.append(input);
  row.append(el("span", "delta", `delta ${slider.delta.toFixed(2)}`));
  if (slider.result?.minFlipDelta !== undefined) {
    row.append(el("span", "hint", `smallest flipping delta ${slider.result.minFlipDelta.toFixed(4)}`));
  }
  return row;
}

export function renderWhatIf(
  root: HTMLElement,
  vm: ViewModel,
  onSlide: (criterion: string, delta: number) => void,
): void {
  root.replaceChildren();
  const sliders = Object.values(vm.sliders);
  if (sliders.length === 0) return;
  const panel = el("section", "panel");
  panel.append(el("h3", "", "What-if weight negotiation"));
  for (const slider of sliders.sort((a, b) => a.criterion.localeCompare(b.criterion))) {
    panel.append(sliderRow(slider, vm.snapshot?.problem.criteria ?? [], onSlide));
    if (slider.result) {
      const compare = el("div", "order-compare");
      const baseline = el("div", "order-col");
      baseline.append(el("h4", "", "baseline"));
      const ours = el("div", "order-col");
      ours.append(el("h4", "", slider.result.flipped ? "what-if (flipped!)" : "what-if"));
      const baseList = el("ol");
      for (const alt of slider.result.baselineOrder) baseList.append(el("li", "", alt));
      const newList = el("ol");
      for (const alt of slider.result.newOrder) newList.append(el("li", "", alt));
      baseline.append(baseList);
      ours.append(newList);
      compare.append(baseline, ours);
      panel.append(compare);
    }
  }
  root.append(panel);
}

export function renderStatus(root: HTMLElement, vm: ViewModel, onRun: () => void): void {
  root.replaceChildren();
  const snapshot = vm.snapshot;
  if (!snapshot) return;
  const panel = el("section", "panel status");
  panel.append(el("h2", "", `Session ${snapshot.id}`));
  panel.append(el("span", `phase ${snapshot.phase}`, snapshot.phase));
  if (snapshot.phase !== "evaluated") {
    if (snapshot.pendingMakers.length > 0) {
      panel.append(el("p", "hint", `awaiting judgments from: ${snapshot.pendingMakers.join(", ")}`));
    }
    const run = el("button", "", "Run group decision");
    run.disabled = snapshot.phase !== "complete";
    run.addEventListener("click", onRun);
    panel.append(run);
  }
  if (vm.lastError) {
    panel.append(el("p", "error", vm.lastError));
  }
  root.append(panel);
}
