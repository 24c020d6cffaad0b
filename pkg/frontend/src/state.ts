// View model and session flow. DOM-free so the flow is unit-testable; all
// numbers it exposes come straight from API responses.

import * as api from "./api.js";
import { clearDraft, loadDraft, saveDraft, type DraftStore } from "./drafts.js";
import { judgmentIssues, type DraftIssue } from "./validate.js";
import type {
  ConsensusDoc,
  JudgmentDoc,
  PipelineReportDoc,
  ProblemDoc,
  SessionSnapshot,
  WhatIfDoc,
} from "./types.js";

export interface SliderState {
  criterion: string;
  baselineWeight: number;
  minDelta: number;
  maxDelta: number;
  delta: number;
  result: WhatIfDoc | null;
}

export interface ViewModel {
  snapshot: SessionSnapshot | null;
  drafts: Record<string, JudgmentDoc>;
  draftIssues: Record<string, DraftIssue[]>;
  report: PipelineReportDoc | null;
  consensus: ConsensusDoc | null;
  sliders: Record<string, SliderState>;
  lastError: string;
}

const emptyJudgment = (): JudgmentDoc => ({ criterionWeights: {}, cells: {} });

export class SessionFlow {
  vm: ViewModel = {
    snapshot: null,
    drafts: {},
    draftIssues: {},
    report: null,
    consensus: null,
    sliders: {},
    lastError: "",
  };

  constructor(
    private onChange: (vm: ViewModel) => void = () => {},
    private draftStore?: DraftStore,
  ) {}

  private notify(): void {
    this.onChange(this.vm);
  }

  private sessionId(): string {
    const snapshot = this.vm.snapshot;
    if (!snapshot) throw new Error("no active session");
    return snapshot.id;
  }

  async create(problem: ProblemDoc): Promise<void> {
    this.vm.lastError = "";
    const created = await api.createSession(problem);
    await this.loadSession(created.id);
  }

  async loadSession(id: string): Promise<void> {
    this.vm.snapshot = await api.getSession(id);
    this.vm.drafts = {};
    for (const maker of this.vm.snapshot.problem.makers) {
      this.vm.drafts[maker.id] =
        loadDraft(id, maker.id, this.draftStore) ?? emptyJudgment();
      this.refreshIssues(maker.id);
    }
    if (this.vm.snapshot.phase === "evaluated") {
      await this.loadEvaluation();
    }
    this.notify();
  }

  async refresh(): Promise<void> {
    if (!this.vm.snapshot) return;
    this.vm.snapshot = await api.getSession(this.sessionId());
    this.notify();
  }

  private refreshIssues(makerId: string): void {
    const snapshot = this.vm.snapshot;
    if (!snapshot) return;
    this.vm.draftIssues[makerId] = judgmentIssues(
      this.vm.drafts[makerId],
      snapshot.problem.alternatives.map((a) => a.id),
      snapshot.problem.criteria.map((c) => c.id),
    );
  }

  /** Update a maker's draft in place; persists it for reload recovery. */
  editDraft(makerId: string, mutate: (draft: JudgmentDoc) => void): void {
    const draft = this.vm.drafts[makerId] ?? emptyJudgment();
    mutate(draft);
    this.vm.drafts[makerId] = draft;
    saveDraft(this.sessionId(), makerId, draft, this.draftStore);
    this.refreshIssues(makerId);
    this.notify();
  }

  draftSubmittable(makerId: string): boolean {
    return (this.vm.draftIssues[makerId] ?? []).length === 0;
  }

  async submitJudgment(makerId: string): Promise<void> {
    if (!this.draftSubmittable(makerId)) {
      this.vm.lastError = `judgment for ${makerId} has validation issues`;
      this.notify();
      return;
    }
    this.vm.lastError = "";
    await api.putJudgment(this.sessionId(), makerId, this.vm.drafts[makerId]);
    clearDraft(this.sessionId(), makerId, this.draftStore);
    this.vm.snapshot = await api.getSession(this.sessionId());
    this.notify();
  }

  async run(): Promise<void> {
    this.vm.lastError = "";
    try {
      this.vm.report = await api.runSession(this.sessionId());
    } catch (error) {
      if (error instanceof api.ApiError && error.status === 409) {
        const pending = this.vm.snapshot?.pendingMakers ?? [];
        this.vm.lastError = `awaiting judgments from: ${pending.join(", ")}`;
        this.notify();
        return;
      }
      throw error;
    }
    this.vm.snapshot = await api.getSession(this.sessionId());
    await this.loadEvaluation();
    this.notify();
  }

  private async loadEvaluation(): Promise<void> {
    const id = this.sessionId();
    if (!this.vm.report) {
      this.vm.report = {
        stages: [],
        result: await api.getResult(id),
      };
    }
    this.vm.consensus = await api.getConsensus(id);
    const criteria = this.vm.snapshot?.problem.criteria ?? [];
    if (criteria.length > 0) {
      // delta-0 probe reports the group weights, fixing every slider's
      // feasible range without any client-side weight math
      const probe = await api.whatIf(id, criteria[0].id, 0);
      this.vm.sliders = {};
      for (const criterion of criteria) {
        const weight = probe.adjustedWeights[criterion.id];
        this.vm.sliders[criterion.id] = {
          criterion: criterion.id,
          baselineWeight: weight,
          minDelta: -weight,
          maxDelta: 1 - weight,
          delta: 0,
          result: criterion.id === criteria[0].id ? probe : null,
        };
      }
    }
  }

  async slide(criterion: string, delta: number): Promise<void> {
    const slider = this.vm.sliders[criterion];
    if (!slider) return;
    const clamped = Math.min(Math.max(delta, slider.minDelta), slider.maxDelta);
    slider.delta = clamped;
    slider.result = await api.whatIf(this.sessionId(), criterion, clamped);
    this.notify();
  }
}
