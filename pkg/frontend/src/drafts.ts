// Draft persistence: unsubmitted judgments survive a reload via localStorage.

import type { JudgmentDoc } from "./types.js";

export interface DraftStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

const PREFIX = "groupmcda.draft";

function key(sessionId: string, makerId: string): string {
  return `${PREFIX}.${sessionId}.${makerId}`;
}

function storage(override?: DraftStore): DraftStore | null {
  if (override) return override;
  try {
    return typeof localStorage === "undefined" ? null : localStorage;
  } catch {
    return null;
  }
}

export function saveDraft(
  sessionId: string,
  makerId: string,
  draft: JudgmentDoc,
  store?: DraftStore,
): void {
  storage(store)?.setItem(key(sessionId, makerId), JSON.stringify(draft));
}

export function loadDraft(
  sessionId: string,
  makerId: string,
  store?: DraftStore,
): JudgmentDoc | null {
  const raw = storage(store)?.getItem(key(sessionId, makerId));
  if (!raw) return null;
  try {
    return JSON.parse(raw) as JudgmentDoc;
  } catch {
    return null;
  }
}

export function clearDraft(sessionId: string, makerId: string, store?: DraftStore): void {
  storage(store)?.removeItem(key(sessionId, makerId));
}
