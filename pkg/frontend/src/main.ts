/** DOM wiring: events dispatch pure state transitions, then re-render. */

import { ApiError, fetchMetrics, fetchNext, submitLabel } from "./api.js";
import { renderApp } from "./render.js";
import {
  canSubmit,
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
} from "./state.js";
import type { SessionState } from "./state.js";
import { CATEGORIES } from "./types.js";
import type { Category } from "./types.js";

let state: SessionState = initialState();
const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app container");
}

function set(next: SessionState): void {
  state = next;
  root!.innerHTML = renderApp(state);
}

function message(err: unknown): string {
  if (err instanceof ApiError) {
    return err.message;
  }
  return "network error; your selection is kept, submit again";
}

async function loadNext(): Promise<void> {
  try {
    const result = await fetchNext(state.reviewer);
    if (result.kind === "done") {
      set(queueComplete(state));
    } else {
      set(itemLoaded(state, result.item));
    }
  } catch (err) {
    set(submitFailed(state, message(err)));
  }
}

async function refreshMetrics(): Promise<void> {
  try {
    set(metricsLoaded(state, await fetchMetrics()));
  } catch {
    // dashboard stays on its last server answer
  }
}

async function start(reviewer: string): Promise<void> {
  const next = startSession(state, reviewer);
  set(next);
  if (next.phase === "loading") {
    await loadNext();
  }
}

async function submit(): Promise<void> {
  if (!canSubmit(state)) {
    return;
  }
  const item = state.item!;
  const payload = {
    query_id: item.query_id,
    category: state.selection.category!,
    answer_correct: state.selection.answerCorrect,
    reviewer: state.reviewer,
  };
  set(submitStarted(state));
  try {
    const ack = await submitLabel(payload);
    set(labelAcknowledged(state, ack));
    await loadNext();
  } catch (err) {
    set(submitFailed(state, message(err)));
  }
}

root.addEventListener("click", (event) => {
  const target = (event.target as HTMLElement).closest("[data-action]");
  if (!(target instanceof HTMLElement)) {
    return;
  }
  const action = target.dataset["action"];
  if (action === "category") {
    set(selectCategory(state, target.dataset["category"] as Category));
  } else if (action === "toggle-correct") {
    set(toggleAnswerCorrect(state));
  } else if (action === "submit") {
    void submit();
  }
});

root.addEventListener("submit", (event) => {
  const form = event.target as HTMLFormElement;
  if (form.dataset["action"] === "start") {
    event.preventDefault();
    const input = form.elements.namedItem("reviewer") as HTMLInputElement;
    void start(input.value);
  }
});

document.addEventListener("keydown", (event) => {
  if (state.phase !== "labeling") {
    return;
  }
  if (event.key >= "1" && event.key <= "3") {
    set(selectCategory(state, CATEGORIES[Number(event.key) - 1]!));
  } else if (event.key === "c") {
    set(toggleAnswerCorrect(state));
  } else if (event.key === "Enter") {
    void submit();
  }
});

set(state);
void refreshMetrics();
