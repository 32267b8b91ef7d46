/** Session state and its pure transitions.
 *
 * The state is a function of server responses plus the reviewer's
 * current selection; nothing here computes metrics.  The queue position
 * lives on the server (each item carries position/total), so reloading
 * the page and signing in again resumes where the reviewer left off.
 */

import type { Ack, Category, Metrics, ReviewItem } from "./types.js";

export type Phase = "signin" | "loading" | "labeling" | "done";

export interface Selection {
  category: Category | null;
  answerCorrect: boolean | null;
}

export interface SessionState {
  reviewer: string;
  phase: Phase;
  item: ReviewItem | null;
  selection: Selection;
  metrics: Metrics | null;
  error: string | null;
  submitting: boolean;
}

const EMPTY_SELECTION: Selection = { category: null, answerCorrect: null };

export function initialState(): SessionState {
  return {
    reviewer: "",
    phase: "signin",
    item: null,
    selection: EMPTY_SELECTION,
    metrics: null,
    error: null,
    submitting: false,
  };
}

/** An item is judgeable when the server sent something to judge. */
export function hasAnswer(item: ReviewItem): boolean {
  return item.candidate !== null || item.answer !== null;
}

export function startSession(state: SessionState, reviewer: string): SessionState {
  const name = reviewer.trim();
  if (!name) {
    return { ...state, error: "reviewer name required" };
  }
  return { ...state, reviewer: name, phase: "loading", error: null };
}

export function itemLoaded(state: SessionState, item: ReviewItem): SessionState {
  return {
    ...state,
    phase: "labeling",
    item,
    selection: EMPTY_SELECTION,
    error: null,
    submitting: false,
  };
}

export function queueComplete(state: SessionState): SessionState {
  return { ...state, phase: "done", item: null, submitting: false };
}

export function metricsLoaded(state: SessionState, metrics: Metrics): SessionState {
  return { ...state, metrics };
}

export function selectCategory(state: SessionState, category: Category): SessionState {
  if (state.phase !== "labeling" || state.submitting) {
    return state;
  }
  return { ...state, selection: { ...state.selection, category } };
}

/** Cycle unjudged -> correct -> incorrect -> unjudged. */
export function toggleAnswerCorrect(state: SessionState): SessionState {
  if (state.phase !== "labeling" || state.submitting) {
    return state;
  }
  if (state.item === null || !hasAnswer(state.item)) {
    return state;
  }
  const current = state.selection.answerCorrect;
  const next = current === null ? true : current === true ? false : null;
  return { ...state, selection: { ...state.selection, answerCorrect: next } };
}

export function canSubmit(state: SessionState): boolean {
  return (
    state.phase === "labeling" &&
    state.item !== null &&
    state.selection.category !== null &&
    !state.submitting
  );
}

export function submitStarted(state: SessionState): SessionState {
  return { ...state, submitting: true, error: null };
}

/** Fold the acknowledged metrics back in; the item advances only once
 * the follow-up next fetch lands (itemLoaded or queueComplete). */
export function labelAcknowledged(state: SessionState, ack: Ack): SessionState {
  const { version: _version, ok: _ok, ...metrics } = ack;
  return { ...state, metrics, submitting: false };
}

/** Failed submissions keep the selection so a retry resends the same
 * label; the server's replace rule makes that idempotent. */
export function submitFailed(state: SessionState, message: string): SessionState {
  return { ...state, submitting: false, error: message };
}
