import { describe, expect, it } from "vitest";

import {
  canSubmit,
  hasAnswer,
  initialState,
  itemLoaded,
  labelAcknowledged,
  metricsLoaded,
  queueComplete,
  selectCategory,
  startSession,
  submitFailed,
  submitStarted,
  toggleAnswerCorrect,
} from "../src/state.js";
import type { SessionState } from "../src/state.js";
import type { Ack, ReviewItem } from "../src/types.js";

function item(overrides: Partial<ReviewItem> = {}): ReviewItem {
  return {
    version: 1,
    query_id: "q1",
    surface: "Who was General Grant?",
    kind: "ObjectJournalism",
    state: "Answered",
    rule_reason: null,
    confidence: 0.63,
    candidate: { text: "General Grant was in the US Civil War.", confidence: 0.63 },
    answer: null,
    reverse_ok: null,
    matched_terms: ["general", "grant"],
    position: 0,
    total: 10,
    ...overrides,
  };
}

function labeling(overrides: Partial<ReviewItem> = {}): SessionState {
  return itemLoaded(startSession(initialState(), "r1"), item(overrides));
}

const ACK: Ack = {
  version: 1,
  ok: true,
  coverage: { theta: 0.35, total: 20, high_conf: 12, coverage: 0.6 },
  precision: { attempted: 1, correct: 1, point: 1.0, lo: 0.2, hi: 1.0, z: 1.96 },
  utility_breakdown: { UsefulInteresting: 1.0, UsefulNotInteresting: 0.0, Nonsensical: 0.0 },
  rule_disagreements: 0,
  gaps_count: 8,
};

describe("session start", () => {
  it("begins at the signin phase", () => {
    expect(initialState().phase).toBe("signin");
  });

  it("trims the reviewer name", () => {
    const s = startSession(initialState(), "  r1  ");
    expect(s.reviewer).toBe("r1");
    expect(s.phase).toBe("loading");
  });

  it("rejects a blank name", () => {
    const s = startSession(initialState(), "   ");
    expect(s.phase).toBe("signin");
    expect(s.error).toBeTruthy();
  });
});

describe("item flow", () => {
  it("loading an item resets the selection", () => {
    let s = labeling();
    s = selectCategory(s, "Nonsensical");
    s = itemLoaded(s, item({ query_id: "q2", position: 1 }));
    expect(s.selection.category).toBeNull();
    expect(s.selection.answerCorrect).toBeNull();
    expect(s.item?.query_id).toBe("q2");
  });

  it("category selection only works while labeling", () => {
    const idle = startSession(initialState(), "r1");
    expect(selectCategory(idle, "Nonsensical").selection.category).toBeNull();
    const active = labeling();
    expect(selectCategory(active, "Nonsensical").selection.category).toBe("Nonsensical");
  });

  it("queue completion drops the item", () => {
    const s = queueComplete(labeling());
    expect(s.phase).toBe("done");
    expect(s.item).toBeNull();
  });
});

describe("answer correctness toggle", () => {
  it("cycles unjudged, correct, incorrect", () => {
    let s = labeling();
    s = toggleAnswerCorrect(s);
    expect(s.selection.answerCorrect).toBe(true);
    s = toggleAnswerCorrect(s);
    expect(s.selection.answerCorrect).toBe(false);
    s = toggleAnswerCorrect(s);
    expect(s.selection.answerCorrect).toBeNull();
  });

  it("is inert when the item has nothing to judge", () => {
    const s = labeling({ candidate: null, answer: null });
    expect(hasAnswer(s.item!)).toBe(false);
    expect(toggleAnswerCorrect(s).selection.answerCorrect).toBeNull();
  });

  it("works for model answers without evidence sentences", () => {
    const s = labeling({ candidate: null, answer: "Union Army" });
    expect(hasAnswer(s.item!)).toBe(true);
    expect(toggleAnswerCorrect(s).selection.answerCorrect).toBe(true);
  });
});

describe("submission", () => {
  it("requires a category", () => {
    const s = labeling();
    expect(canSubmit(s)).toBe(false);
    expect(canSubmit(selectCategory(s, "UsefulInteresting"))).toBe(true);
  });

  it("blocks double submission while in flight", () => {
    let s = selectCategory(labeling(), "UsefulInteresting");
    s = submitStarted(s);
    expect(canSubmit(s)).toBe(false);
    expect(selectCategory(s, "Nonsensical").selection.category).toBe("UsefulInteresting");
    expect(toggleAnswerCorrect(s).selection.answerCorrect).toBeNull();
  });

  it("folds the acknowledged metrics into the dashboard", () => {
    let s = submitStarted(selectCategory(labeling(), "UsefulInteresting"));
    s = labelAcknowledged(s, ACK);
    expect(s.submitting).toBe(false);
    expect(s.metrics).toEqual({
      coverage: ACK.coverage,
      precision: ACK.precision,
      utility_breakdown: ACK.utility_breakdown,
      rule_disagreements: ACK.rule_disagreements,
      gaps_count: ACK.gaps_count,
    });
  });

  it("keeps the selection after a failure so retry resends the same label", () => {
    let s = selectCategory(labeling(), "UsefulInteresting");
    s = toggleAnswerCorrect(s);
    s = submitFailed(submitStarted(s), "network error");
    expect(s.selection).toEqual({ category: "UsefulInteresting", answerCorrect: true });
    expect(s.error).toBe("network error");
    expect(canSubmit(s)).toBe(true);
  });
});

describe("dashboard state", () => {
  it("stores server metrics verbatim", () => {
    const s = metricsLoaded(initialState(), {
      coverage: ACK.coverage,
      precision: null,
      utility_breakdown: {},
      rule_disagreements: 2,
      gaps_count: 3,
    });
    expect(s.metrics?.rule_disagreements).toBe(2);
    expect(s.metrics?.precision).toBeNull();
  });
});
