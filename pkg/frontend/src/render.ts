/** Pure HTML renderers: state in, markup string out.
 *
 * Every number shown comes straight off a server payload; the only
 * transformation applied here is decimal formatting.
 */

import { canSubmit, hasAnswer } from "./state.js";
import type { SessionState } from "./state.js";
import { CATEGORIES } from "./types.js";
import type { Metrics, ReviewItem } from "./types.js";

const CATEGORY_TITLES: Record<string, string> = {
  UsefulInteresting: "Useful, interesting",
  UsefulNotInteresting: "Useful, not interesting",
  Nonsensical: "Nonsensical",
};

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function escapeRegExp(text: string): string {
  return text.replace(/[.*+?^${}()|[\]\\]/g, "\\$&");
}

/** Wrap whole-word, case-insensitive occurrences of the server-sent
 * terms in <mark>; each segment is escaped on its own so markup in the
 * source text never survives. */
export function highlightTerms(text: string, terms: string[]): string {
  const usable = terms.filter((t) => t.length > 0);
  if (usable.length === 0) {
    return escapeHtml(text);
  }
  const pattern = new RegExp(
    `\\b(?:${usable.map(escapeRegExp).join("|")})\\b`,
    "gi",
  );
  let out = "";
  let last = 0;
  for (const m of text.matchAll(pattern)) {
    const start = m.index ?? 0;
    out += escapeHtml(text.slice(last, start));
    out += `<mark>${escapeHtml(m[0])}</mark>`;
    last = start + m[0].length;
  }
  out += escapeHtml(text.slice(last));
  return out;
}

function fmt(value: number): string {
  return value.toFixed(3);
}

export function renderDashboard(metrics: Metrics | null): string {
  if (metrics === null) {
    return `<section class="dashboard" data-testid="dashboard"><p class="muted">metrics not loaded</p></section>`;
  }
  const cov = metrics.coverage;
  const precision =
    metrics.precision === null
      ? `<span class="muted">no judged labels yet</span>`
      : `${fmt(metrics.precision.point)} ` +
        `[${fmt(metrics.precision.lo)}, ${fmt(metrics.precision.hi)}] ` +
        `(${metrics.precision.correct}/${metrics.precision.attempted})`;
  const fractions = Object.keys(metrics.utility_breakdown)
    .sort()
    .map(
      (cat) =>
        `<li>${escapeHtml(CATEGORY_TITLES[cat] ?? cat)}: ` +
        `<b data-testid="utility-${escapeHtml(cat)}">${fmt(metrics.utility_breakdown[cat])}</b></li>`,
    )
    .join("");
  return `<section class="dashboard" data-testid="dashboard">
    <h2>Dashboard</h2>
    <dl>
      <dt>Coverage (&theta; = ${fmt(cov.theta)})</dt>
      <dd data-testid="coverage">${fmt(cov.coverage)} (${cov.high_conf}/${cov.total})</dd>
      <dt>Precision</dt>
      <dd data-testid="precision">${precision}</dd>
      <dt>Utility fractions</dt>
      <dd><ul class="fractions">${fractions || "<li class='muted'>no labels yet</li>"}</ul></dd>
      <dt>Rule disagreements</dt>
      <dd data-testid="disagreements">${metrics.rule_disagreements}</dd>
      <dt>Coverage gaps</dt>
      <dd data-testid="gaps">${metrics.gaps_count}</dd>
    </dl>
  </section>`;
}

function renderEvidence(item: ReviewItem): string {
  if (item.candidate !== null) {
    return `<div class="evidence" data-testid="evidence">
      <p>${highlightTerms(item.candidate.text, item.matched_terms)}</p>
      <p class="muted">evidence confidence ${fmt(item.candidate.confidence)}</p>
    </div>`;
  }
  if (item.answer !== null) {
    const reverse =
      item.reverse_ok === null
        ? ""
        : item.reverse_ok
          ? ` <span class="badge ok">reverse check ok</span>`
          : ` <span class="badge warn">reverse check failed</span>`;
    return `<div class="evidence" data-testid="evidence">
      <p>Answer: <b>${escapeHtml(item.answer)}</b>${reverse}</p>
    </div>`;
  }
  return `<div class="evidence muted" data-testid="evidence"><p>no evidence retrieved</p></div>`;
}

export function renderCard(state: SessionState): string {
  const item = state.item;
  if (item === null) {
    return "";
  }
  const confidence =
    item.confidence === null
      ? `<span class="muted">unanswered</span>`
      : fmt(item.confidence);
  const buttons = CATEGORIES.map((cat, i) => {
    const selected = state.selection.category === cat ? " selected" : "";
    return `<button class="category${selected}" data-action="category" data-category="${cat}">
      <kbd>${i + 1}</kbd> ${escapeHtml(CATEGORY_TITLES[cat])}</button>`;
  }).join("");
  let correctness = "";
  if (hasAnswer(item)) {
    const value =
      state.selection.answerCorrect === null
        ? "unjudged"
        : state.selection.answerCorrect
          ? "correct"
          : "incorrect";
    correctness = `<button class="correctness" data-action="toggle-correct" data-value="${value}">
      <kbd>c</kbd> answer ${value}</button>`;
  }
  const disabled = canSubmit(state) ? "" : " disabled";
  const error = state.error ? `<p class="error">${escapeHtml(state.error)}</p>` : "";
  return `<section class="card" data-testid="card" data-query-id="${escapeHtml(item.query_id)}">
    <p class="progress">item ${item.position + 1} of ${item.total} &middot; ${escapeHtml(item.kind)} &middot; confidence ${confidence}</p>
    <h2 class="surface">${escapeHtml(item.surface)}</h2>
    ${renderEvidence(item)}
    <div class="choices">${buttons}</div>
    <div class="actions">${correctness}
      <button class="submit" data-action="submit"${disabled}><kbd>&#9166;</kbd> submit</button>
    </div>
    ${error}
  </section>`;
}

export function renderSignin(state: SessionState): string {
  const error = state.error ? `<p class="error">${escapeHtml(state.error)}</p>` : "";
  return `<section class="signin" data-testid="signin">
    <h2>Review queue</h2>
    <form data-action="start">
      <label>Reviewer name <input name="reviewer" autofocus value="${escapeHtml(state.reviewer)}"></label>
      <button type="submit">Start</button>
    </form>
    ${error}
  </section>`;
}

export function renderSummary(state: SessionState): string {
  const fractions =
    state.metrics === null
      ? ""
      : renderDashboard(state.metrics);
  return `<section class="summary" data-testid="summary">
    <h2>Queue complete</h2>
    <p>Every sampled query has a label from ${escapeHtml(state.reviewer)}. The dashboard below is the server's final word.</p>
  </section>${fractions}`;
}

export function renderApp(state: SessionState): string {
  switch (state.phase) {
    case "signin":
      return renderSignin(state) + renderDashboard(state.metrics);
    case "loading":
      return `<p class="muted" data-testid="loading">loading&hellip;</p>`;
    case "labeling":
      return renderCard(state) + renderDashboard(state.metrics);
    case "done":
      return renderSummary(state);
  }
}
