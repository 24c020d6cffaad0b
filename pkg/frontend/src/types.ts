// Wire types mirroring the gateway's JSON documents.

export type Direction = "benefit" | "cost";
export type Phase = "collecting" | "complete" | "evaluated";

export interface AlternativeDef {
  id: string;
  name: string;
}

export interface CriterionDef {
  id: string;
  name: string;
  direction: Direction;
}

export interface MakerDef {
  id: string;
  weight: number;
}

export type CellKind = "crisp" | "dist" | "ifs";

export type Cell =
  | { kind: "crisp"; value: number }
  | { kind: "dist"; outcomes: [number, number][] }
  | { kind: "ifs"; mu: number; nu: number };

export interface JudgmentDoc {
  criterionWeights: Record<string, number>;
  cells: Record<string, Record<string, Cell>>;
}

export interface ProblemDoc {
  id: string;
  alternatives: AlternativeDef[];
  criteria: CriterionDef[];
  makers: MakerDef[];
  judgments?: ({ maker: string } & JudgmentDoc)[];
  sorting?: unknown;
  flags?: string[];
}

export interface SessionSnapshot {
  id: string;
  phase: Phase;
  problem: ProblemDoc;
  pendingMakers: string[];
}

export interface RankResultDoc {
  method: string;
  scores: Record<string, number>;
  order: string[];
}

export interface StageDoc {
  stage: string;
  status: "ok" | "warning" | "error";
  payload: Record<string, unknown>;
}

export interface PipelineReportDoc {
  stages: StageDoc[];
  result?: RankResultDoc;
  error?: string;
}

export interface ConflictDoc {
  maker: string;
  criterion: string | null;
  severity: number;
}

export interface ConsensusDoc {
  perMaker: Record<string, number>;
  consensusIndex: number;
  conflicts: ConflictDoc[];
}

export interface WhatIfDoc {
  adjustedWeights: Record<string, number>;
  newOrder: string[];
  flipped: boolean;
  baselineOrder: string[];
  minFlipDelta?: number;
}

export interface SchemeDoc {
  id: string;
  method: string;
  status: string;
  similarity: number;
  resultOrder: string[];
}
