/**
 * Pop-up listing real-world enforcement cases matched to a story:
 * who was fined, how much, when, why, and where the record comes from.
 */
import { el, formatEur } from "./dom.js";
import type { CaseMatch } from "./types.js";

export function openCasesModal(root: HTMLElement, matches: CaseMatch[]): HTMLElement {
  closeCasesModal(root);
  const overlay = el("div", { class: "modal-overlay", "data-testid": "cases-modal" });
  const box = el("div", { class: "modal-box", role: "dialog", "aria-label": "Real-world consequences" });
  box.append(el("h2", {}, "Real-world consequences"));

  if (matches.length === 0) {
    box.append(el("p", { class: "no-cases" }, "No recorded enforcement cases cite these articles."));
  }
  for (const match of matches) {
    const c = match.case;
    const item = el(
      "article",
      { class: "case-card" },
      el("h3", { class: "case-controller" }, c.controller),
      el(
        "p",
        { class: "case-meta" },
        `${formatEur(c.fine_eur)} | ${c.authority} (${c.country}) | ${c.date}`,
      ),
      el("p", { class: "case-overlap" }, `Shared articles: ${match.overlap.join(", ")}`),
      el("p", { class: "case-summary" }, c.summary),
    );
    if (c.source_url) {
      item.append(el("a", { class: "case-source", href: c.source_url, target: "_blank", rel: "noreferrer" }, "source"));
    }
    box.append(item);
  }

  const close = el("button", { class: "modal-close", type: "button" }, "Close");
  close.addEventListener("click", () => closeCasesModal(root));
  box.append(close);
  overlay.append(box);
  root.append(overlay);
  return overlay;
}

export function closeCasesModal(root: HTMLElement): void {
  root.querySelectorAll('[data-testid="cases-modal"]').forEach((node) => node.remove());
}
