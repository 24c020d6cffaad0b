// Client-side judgment validation mirroring the engine's cell invariants.
// A draft must pass these checks before it may be submitted.

import type { Cell, JudgmentDoc } from "./types.js";

const IFS_TOL = 1e-9;
const PROB_TOL = 1e-9;
const WEIGHT_TOL = 1e-6;

export function ifsError(mu: number, nu: number): string | null {
  if (!Number.isFinite(mu) || !Number.isFinite(nu)) return "mu and nu must be numbers";
  if (mu < 0 || mu > 1) return "mu must be in [0, 1]";
  if (nu < 0 || nu > 1) return "nu must be in [0, 1]";
  if (mu + nu > 1 + IFS_TOL) return `mu + nu = ${(mu + nu).toFixed(3)} exceeds 1`;
  return null;
}

export function crispError(value: number): string | null {
  return Number.isFinite(value) ? null : "value must be a number";
}

export function distError(outcomes: [number, number][]): string | null {
  if (outcomes.length < 1) return "need at least one outcome";
  let total = 0;
  for (const [value, prob] of outcomes) {
    if (!Number.isFinite(value)) return "outcome values must be numbers";
    if (!Number.isFinite(prob) || prob < 0 || prob > 1) return "probabilities must be in [0, 1]";
    total += prob;
  }
  if (Math.abs(total - 1) > PROB_TOL) return `probabilities sum to ${total.toFixed(4)}, not 1`;
  return null;
}

export function distSum(outcomes: [number, number][]): number {
  return outcomes.reduce((acc, [, p]) => acc + p, 0);
}

export function cellError(cell: Cell): string | null {
  switch (cell.kind) {
    case "crisp":
      return crispError(cell.value);
    case "dist":
      return distError(cell.outcomes);
    case "ifs":
      return ifsError(cell.mu, cell.nu);
  }
}

export function weightsError(weights: Record<string, number>, criterionIds: string[]): string | null {
  let total = 0;
  for (const id of criterionIds) {
    const w = weights[id];
    if (w === undefined || !Number.isFinite(w)) return `missing weight for ${id}`;
    if (w < 0 || w > 1) return `weight for ${id} must be in [0, 1]`;
    total += w;
  }
  if (Math.abs(total - 1) > WEIGHT_TOL) return `weights sum to ${total.toFixed(4)}, not 1`;
  return null;
}

export interface DraftIssue {
  location: string;
  message: string;
}

/** All validation issues for a draft; empty means submittable. */
export function judgmentIssues(
  draft: JudgmentDoc,
  alternativeIds: string[],
  criterionIds: string[],
): DraftIssue[] {
  const issues: DraftIssue[] = [];
  const weightProblem = weightsError(draft.criterionWeights, criterionIds);
  if (weightProblem) issues.push({ location: "weights", message: weightProblem });
  for (const alt of alternativeIds) {
    for (const crit of criterionIds) {
      const cell = draft.cells[alt]?.[crit];
      if (cell === undefined) {
        issues.push({ location: `${alt}/${crit}`, message: "missing judgment" });
        continue;
      }
      const problem = cellError(cell);
      if (problem) issues.push({ location: `${alt}/${crit}`, message: problem });
    }
  }
  return issues;
}
