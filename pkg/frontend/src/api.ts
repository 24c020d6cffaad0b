// Typed client for the gateway session API. Every displayed number in the
// console originates from one of these responses; no ranking math happens
// client-side.

import type {
  ConsensusDoc,
  JudgmentDoc,
  PipelineReportDoc,
  ProblemDoc,
  RankResultDoc,
  SchemeDoc,
  SessionSnapshot,
  WhatIfDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message || code);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    throw new ApiError(response.status, body.error ?? "UNKNOWN", body.message ?? "");
  }
  return body as T;
}

export function createSession(problem: ProblemDoc): Promise<{ id: string; phase: string }> {
  return request("/api/sessions", {
    method: "POST",
    body: JSON.stringify({ problem }),
  });
}

export function getSession(id: string): Promise<SessionSnapshot> {
  return request(`/api/sessions/${id}`);
}

export function putJudgment(
  id: string,
  makerId: string,
  judgment: JudgmentDoc,
): Promise<{ phase: string; submitted: string }> {
  return request(`/api/sessions/${id}/judgments/${makerId}`, {
    method: "PUT",
    body: JSON.stringify(judgment),
  });
}

export function runSession(id: string): Promise<PipelineReportDoc> {
  return request(`/api/sessions/${id}/run`, { method: "POST" });
}

export function getResult(id: string): Promise<RankResultDoc> {
  return request(`/api/sessions/${id}/result`);
}

export function getConsensus(id: string): Promise<ConsensusDoc> {
  return request(`/api/sessions/${id}/consensus`);
}

export function whatIf(id: string, criterion: string, delta: number): Promise<WhatIfDoc> {
  return request(`/api/sessions/${id}/whatif`, {
    method: "POST",
    body: JSON.stringify({ criterion, delta }),
  });
}

export function similarSchemes(id: string, k = 3): Promise<SchemeDoc[]> {
  return request(`/api/schemes?similarTo=${encodeURIComponent(id)}&k=${k}`);
}
