/**
 * Privacy-attitude questionnaire: Likert radio rows, a submit action,
 * and a gauge showing the latest overall score with per-component bars
 * and history. Scoring happens on the server; this view only collects
 * answers and renders results.
 */
import { api } from "./api.js";
import { clear, el } from "./dom.js";
import type { AttitudeHistory, AttitudeScore, Questionnaire } from "./types.js";

const LIKERT_LABELS = [
  "Strongly disagree",
  "Disagree",
  "Neutral",
  "Agree",
  "Strongly agree",
];

export interface SurveyCallbacks {
  onScored?: (score: AttitudeScore) => void;
}

export function renderSurveyForm(
  container: HTMLElement,
  questionnaire: Questionnaire,
  projectId: string,
  respondentId: string,
  phase: "Pre" | "Post",
  callbacks: SurveyCallbacks = {},
): HTMLFormElement {
  clear(container);
  const form = el("form", { class: "survey-form", "data-testid": "survey-form" });
  for (const question of questionnaire.questions) {
    const row = el(
      "fieldset",
      { class: "survey-question", "data-question": question.id },
      el("legend", {}, question.text),
    );
    for (let value = 1; value <= 5; value += 1) {
      const input = el("input", {
        type: "radio",
        name: question.id,
        value: String(value),
        "aria-label": `${question.id}: ${LIKERT_LABELS[value - 1]}`,
      });
      row.append(el("label", { class: "likert" }, input, ` ${value}`));
    }
    form.append(row);
  }
  const status = el("p", { class: "survey-status", role: "status" });
  const submit = el("button", { type: "submit", class: "survey-submit" }, "Submit answers");
  form.append(submit, status);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const answers: Record<string, number> = {};
    for (const question of questionnaire.questions) {
      const checked = form.querySelector<HTMLInputElement>(`input[name="${question.id}"]:checked`);
      if (!checked) {
        status.textContent = `Please answer every question (missing ${question.id}).`;
        return;
      }
      answers[question.id] = Number(checked.value);
    }
    void api
      .submitSurvey(projectId, respondentId, phase, answers)
      .then((result) => {
        status.textContent = `Scored: overall ${result.score.overall_float.toFixed(2)} / 5`;
        callbacks.onScored?.(result.score);
      })
      .catch((error: Error) => {
        status.textContent = `Could not score the response: ${error.message}`;
      });
  });
  container.append(form);
  return form;
}

export function renderAttitudeGauge(container: HTMLElement, history: AttitudeHistory): void {
  clear(container);
  if (!history.latest) {
    container.append(el("p", { class: "gauge-empty" }, "No responses yet."));
    return;
  }
  const latest = history.latest.score;
  const gauge = el("div", { class: "gauge", "data-testid": "attitude-gauge" });
  gauge.append(
    el("div", { class: "gauge-overall" }, `Privacy attitude: ${latest.overall_float.toFixed(2)} / 5`),
  );
  for (const [component, value] of Object.entries(latest.per_component_float)) {
    const bar = el("div", { class: "gauge-bar" });
    const fill = el("span", { class: "gauge-fill" });
    fill.style.width = `${((value - 1) / 4) * 100}%`;
    bar.append(el("span", { class: "gauge-label" }, `${component}: ${value.toFixed(2)}`), fill);
    gauge.append(bar);
  }
  if (history.delta) {
    const direction = history.delta.overall_float >= 0 ? "up" : "down";
    gauge.append(
      el(
        "div",
        { class: `gauge-delta delta-${direction}` },
        `Change since the pre-survey: ${history.delta.overall_float >= 0 ? "+" : ""}${history.delta.overall_float.toFixed(2)}`,
      ),
    );
  }
  const historyList = el("ul", { class: "gauge-history" });
  for (const record of history.history) {
    historyList.append(
      el(
        "li",
        {},
        `${record.response.phase} (${record.response.timestamp.slice(0, 10)}): ` +
          `${record.score.overall_float.toFixed(2)}`,
      ),
    );
  }
  gauge.append(historyList);
  container.append(gauge);
}
