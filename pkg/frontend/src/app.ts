// Console bootstrap: wires the session flow to the page and polls while the
// group is still collecting judgments (no push channel; interval refresh).

import { SessionFlow, type ViewModel } from "./state.js";
import {
  renderConsensus,
  renderJudgments,
  renderResult,
  renderSetup,
  renderStages,
  renderStatus,
  renderWhatIf,
} from "./views.js";

const POLL_MS = 3000;

function mount(): void {
  const setupRoot = document.getElementById("setup")!;
  const statusRoot = document.getElementById("status")!;
  const judgmentsRoot = document.getElementById("judgments")!;
  const stagesRoot = document.getElementById("stages")!;
  const resultRoot = document.getElementById("result")!;
  const consensusRoot = document.getElementById("consensus")!;
  const whatifRoot = document.getElementById("whatif")!;

  let pollTimer: number | undefined;

  const render = (vm: ViewModel): void => {
    if (vm.snapshot) {
      setupRoot.replaceChildren();
      renderStatus(statusRoot, vm, () => void flow.run().catch(showError));
      if (vm.snapshot.phase === "evaluated") {
        judgmentsRoot.replaceChildren();
      } else {
        renderJudgments(judgmentsRoot, flow);
      }
      renderStages(stagesRoot, vm);
      renderResult(resultRoot, vm);
      renderConsensus(consensusRoot, vm);
      renderWhatIf(whatifRoot, vm, (criterion, delta) =>
        void flow.slide(criterion, delta).catch(showError),
      );
      managePolling(vm);
    }
  };

  const flow = new SessionFlow(render);

  const showError = (error: unknown): void => {
    flow.vm.lastError = String(error);
    renderStatus(statusRoot, flow.vm, () => void flow.run().catch(showError));
  };

  const managePolling = (vm: ViewModel): void => {
    const active = vm.snapshot && vm.snapshot.phase !== "evaluated";
    if (active && pollTimer === undefined) {
      pollTimer = window.setInterval(() => void flow.refresh().catch(() => {}), POLL_MS);
    }
    if (!active && pollTimer !== undefined) {
      window.clearInterval(pollTimer);
      pollTimer = undefined;
    }
  };

  const existing = new URLSearchParams(window.location.search).get("session");
  if (existing) {
    void flow.loadSession(existing).catch(showError);
  } else {
    renderSetup(setupRoot, (problem) => void flow.create(problem).catch(showError));
  }
}

document.addEventListener("DOMContentLoaded", mount);
