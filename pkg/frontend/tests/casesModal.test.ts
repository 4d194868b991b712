/** Cases modal: controller, fine, date, summary, and source link. */
import { afterEach, describe, expect, it } from "vitest";

import { closeCasesModal, openCasesModal } from "../src/casesModal.js";
import type { CaseMatch } from "../src/types.js";

const MATCH: CaseMatch = {
  case: {
    id: "openai-chatgpt-2024",
    controller: "OpenAI",
    authority: "Garante",
    country: "IT",
    date: "2024-12-20",
    fine_eur: 15000000,
    violated_articles: ["Art.5(1)(a)", "Art.6", "Art.13"],
    summary: "Personal data used to train ChatGPT without permission.",
    source_url: "https://www.garanteprivacy.it/home/docweb/-/docweb-display/docweb/10085432",
  },
  overlap: ["Art.6"],
  score: "1",
};

describe("cases modal", () => {
  afterEach(() => document.body.replaceChildren());

  it("displays controller, fine in EUR, date, summary, and source link", () => {
    openCasesModal(document.body, [MATCH]);
    const modal = document.querySelector('[data-testid="cases-modal"]')!;
    expect(modal.querySelector(".case-controller")?.textContent).toBe("OpenAI");
    expect(modal.querySelector(".case-meta")?.textContent).toContain("15,000,000 EUR");
    expect(modal.querySelector(".case-meta")?.textContent).toContain("2024-12-20");
    expect(modal.querySelector(".case-summary")?.textContent).toContain("without permission");
    const link = modal.querySelector<HTMLAnchorElement>(".case-source")!;
    expect(link.href).toContain("garanteprivacy.it");
  });

  it("closes on the close button", () => {
    openCasesModal(document.body, [MATCH]);
    (document.querySelector(".modal-close") as HTMLButtonElement).click();
    expect(document.querySelector('[data-testid="cases-modal"]')).toBeNull();
  });

  it("replaces an already-open modal instead of stacking", () => {
    openCasesModal(document.body, [MATCH]);
    openCasesModal(document.body, []);
    expect(document.querySelectorAll('[data-testid="cases-modal"]')).toHaveLength(1);
    expect(document.querySelector(".no-cases")).not.toBeNull();
    closeCasesModal(document.body);
  });
});
