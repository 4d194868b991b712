/** Questionnaire form and attitude gauge against the mocked API. */
import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { renderAttitudeGauge, renderSurveyForm } from "../src/surveyView.js";
import type { AttitudeHistory, Questionnaire } from "../src/types.js";
import { container, installMockApi } from "./helpers.js";

const QUESTIONNAIRE: Questionnaire = {
  version: "tpb-test",
  questions: [
    { id: "a1", text: "Privacy features add value.", component: "Attitude", reverse_scored: false },
    { id: "n1", text: "My team expects GDPR care.", component: "SubjectiveNorm", reverse_scored: false },
    { id: "c1", text: "I can address GDPR issues.", component: "PerceivedControl", reverse_scored: false },
  ],
};

describe("survey form", () => {
  let host: HTMLElement;

  beforeEach(() => {
    host = container();
  });

  afterEach(() => {
    vi.unstubAllGlobals();
    document.body.replaceChildren();
  });

  it("submits answers and reports the returned score", async () => {
    const mock = installMockApi();
    mock.route("POST", "/v1/projects/p1/survey/responses", (body: unknown) => {
      expect(body).toMatchObject({
        respondent_id: "dev-1",
        phase: "Pre",
        answers: { a1: 5, n1: 4, c1: 3 },
      });
      return {
        revision: 2,
        score: {
          questionnaire_version: "tpb-test",
          per_component: { Attitude: "5", SubjectiveNorm: "4", PerceivedControl: "3" },
          per_component_float: { Attitude: 5, SubjectiveNorm: 4, PerceivedControl: 3 },
          overall: "4",
          overall_float: 4,
        },
      };
    });
    const scored: number[] = [];
    const form = renderSurveyForm(host, QUESTIONNAIRE, "p1", "dev-1", "Pre", {
      onScored: (score) => scored.push(score.overall_float),
    });
    const pick = (name: string, value: number) => {
      form.querySelector<HTMLInputElement>(`input[name="${name}"][value="${value}"]`)!.checked = true;
    };
    pick("a1", 5);
    pick("n1", 4);
    pick("c1", 3);
    form.dispatchEvent(new Event("submit", { cancelable: true }));
    await vi.waitFor(() => expect(scored).toEqual([4]));
    expect(host.querySelector(".survey-status")?.textContent).toContain("4.00");
  });

  it("refuses to submit incomplete answers", () => {
    installMockApi();
    const form = renderSurveyForm(host, QUESTIONNAIRE, "p1", "dev-1", "Pre");
    form.dispatchEvent(new Event("submit", { cancelable: true }));
    expect(host.querySelector(".survey-status")?.textContent).toContain("a1");
  });
});

describe("attitude gauge", () => {
  afterEach(() => document.body.replaceChildren());

  it("shows the latest score, component bars, delta, and history", () => {
    const host = container();
    const record = (phase: "Pre" | "Post", overall: number): AttitudeHistory["history"][number] => ({
      response: { respondent_id: "dev-1", phase, answers: {}, timestamp: "2026-08-09T10:00:00+00:00" },
      score: {
        questionnaire_version: "tpb-test",
        per_component: { Attitude: String(overall) },
        per_component_float: { Attitude: overall, SubjectiveNorm: overall, PerceivedControl: overall },
        overall: String(overall),
        overall_float: overall,
      },
    });
    const history: AttitudeHistory = {
      respondent_id: "dev-1",
      latest: record("Post", 4.25),
      history: [record("Pre", 3), record("Post", 4.25)],
      delta: { per_component: {}, overall: "5/4", overall_float: 1.25 },
    };
    renderAttitudeGauge(host, history);
    expect(host.querySelector(".gauge-overall")?.textContent).toContain("4.25");
    expect(host.querySelectorAll(".gauge-bar").length).toBe(3);
    expect(host.querySelector(".gauge-delta")?.textContent).toContain("+1.25");
    expect(host.querySelectorAll(".gauge-history li")).toHaveLength(2);
  });

  it("handles the no-responses state", () => {
    const host = container();
    renderAttitudeGauge(host, { respondent_id: "dev-1", latest: null, history: [], delta: null });
    expect(host.querySelector(".gauge-empty")).not.toBeNull();
  });
});
