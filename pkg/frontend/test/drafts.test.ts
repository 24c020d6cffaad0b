import { describe, expect, it } from "vitest";

import { clearDraft, loadDraft, saveDraft, type DraftStore } from "../src/drafts.js";
import type { JudgmentDoc } from "../src/types.js";

function memoryStore(): DraftStore {
  const data = new Map<string, string>();
  return {
    getItem: (k) => data.get(k) ?? null,
    setItem: (k, v) => void data.set(k, v),
    removeItem: (k) => void data.delete(k),
  };
}

const draft: JudgmentDoc = {
  criterionWeights: { c1: 0.6, c2: 0.4 },
  cells: { a: { c1: { kind: "crisp", value: 0.8 } } },
};

describe("draft persistence", () => {
  it("restores a saved draft by session and maker", () => {
    const store = memoryStore();
    saveDraft("s1", "m1", draft, store);
    expect(loadDraft("s1", "m1", store)).toEqual(draft);
  });

  it("scopes drafts per session and maker", () => {
    const store = memoryStore();
    saveDraft("s1", "m1", draft, store);
    expect(loadDraft("s1", "m2", store)).toBeNull();
    expect(loadDraft("s2", "m1", store)).toBeNull();
  });

  it("clears after submission", () => {
    const store = memoryStore();
    saveDraft("s1", "m1", draft, store);
    clearDraft("s1", "m1", store);
    expect(loadDraft("s1", "m1", store)).toBeNull();
  });

  it("survives corrupted payloads", () => {
    const store = memoryStore();
    store.setItem("groupmcda.draft.s1.m1", "{nope");
    expect(loadDraft("s1", "m1", store)).toBeNull();
  });
});
