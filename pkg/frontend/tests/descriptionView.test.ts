/** Description panel: exact tag styling, none-required notice, schema banner. */
import { afterEach, describe, expect, it } from "vitest";

import { NONE_REQUIRED_NOTICE, renderDescription } from "../src/descriptionView.js";
import type { Description } from "../src/types.js";
import { container } from "./helpers.js";

function description(): Description {
  return {
    story_id: "s1",
    kg_version: "2025.1",
    none_required: false,
    sections: [
      {
        article: "Art.17",
        segments: [
          { text: "This user story involves the processing of personal data.", tag: "Plain" },
          { text: "Implement a complete erasure path.", tag: "How" },
          { text: "People can demand deletion of their data.", tag: "Why" },
          { text: "Art.17 — Right to erasure ('right to be forgotten')", tag: "Source" },
        ],
      },
    ],
  };
}

describe("description view", () => {
  afterEach(() => document.body.replaceChildren());

  it("maps How/Why/Source to bold/italic/underline exactly", () => {
    const host = container();
    renderDescription(host, description());

    const how = host.querySelector("strong.seg-how");
    const why = host.querySelector("em.seg-why");
    const source = host.querySelector("u.seg-source");
    expect(how?.textContent).toBe("Implement a complete erasure path.");
    expect(why?.textContent).toBe("People can demand deletion of their data.");
    expect(source?.textContent).toContain("Right to erasure");
    expect(host.querySelectorAll("strong.seg-how")).toHaveLength(1);
    expect(host.querySelector(".section-article")?.textContent).toBe("Art.17");
    expect(host.querySelector(".banner-error")).toBeNull();
  });

  it("shows the none-required notice for stories without privacy needs", () => {
    const host = container();
    renderDescription(host, {
      story_id: "s2",
      kg_version: "2025.1",
      none_required: true,
      sections: [],
    });
    expect(host.querySelector(".none-required")?.textContent).toBe(NONE_REQUIRED_NOTICE);
  });

  it("raises a schema banner on unknown tags", () => {
    const host = container();
    const payload = description();
    payload.sections[0].segments.push({ text: "??", tag: "Citation" });
    renderDescription(host, payload);
    const banner = host.querySelector(".banner-error");
    expect(banner?.textContent).toContain("Citation");
  });

  it("wires the see-more link to the cases handler", () => {
    const host = container();
    let opened = 0;
    renderDescription(host, description(), { onSeeCases: () => (opened += 1) });
    (host.querySelector(".see-more") as HTMLAnchorElement).click();
    expect(opened).toBe(1);
  });
});
