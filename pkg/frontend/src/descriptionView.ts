/**
 * Tagged compliance-description panel.
 *
 * Tag-to-style mapping is fixed: How renders bold, Why italic, Source
 * underlined, Plain as running text. A segment with a tag this client
 * does not know signals a server/client schema drift and raises a
 * visible banner instead of guessing at styling.
 */
import { clear, el } from "./dom.js";
import type { Description } from "./types.js";

export const NONE_REQUIRED_NOTICE = "No GDPR privacy requirement identified for this story.";

const KNOWN_TAGS = new Set(["How", "Why", "Source", "Plain"]);

export interface DescriptionHandlers {
  onSeeCases?: () => void;
}

function renderSegment(segment: { text: string; tag: string }): HTMLElement {
  switch (segment.tag) {
    case "How":
      return el("strong", { class: "seg-how" }, segment.text);
    case "Why":
      return el("em", { class: "seg-why" }, segment.text);
    case "Source":
      return el("u", { class: "seg-source" }, segment.text);
    default:
      return el("span", { class: "seg-plain" }, segment.text);
  }
}

export function renderDescription(
  container: HTMLElement,
  description: Description,
  handlers: DescriptionHandlers = {},
): void {
  clear(container);
  const unknownTags = new Set<string>();
  for (const section of description.sections) {
    for (const segment of section.segments) {
      if (!KNOWN_TAGS.has(segment.tag)) unknownTags.add(segment.tag);
    }
  }
  if (unknownTags.size > 0) {
    container.append(
      el(
        "div",
        { class: "banner banner-error", role: "alert" },
        `Unknown description tags from the server: ${[...unknownTags].sort().join(", ")}. ` +
          "Update the client to render this description safely.",
      ),
    );
  }

  if (description.none_required) {
    container.append(el("p", { class: "none-required" }, NONE_REQUIRED_NOTICE));
    return;
  }

  for (const section of description.sections) {
    const body = el("p", { class: "section-body" });
    section.segments.forEach((segment, index) => {
      if (index > 0) body.append(" ");
      body.append(renderSegment(segment));
    });
    const header = el("h3", { class: "section-article" }, section.article);
    const card = el("section", { class: "description-section" }, header, body);
    if (handlers.onSeeCases) {
      const link = el("a", { class: "see-more", href: "#cases" }, "see more");
      link.addEventListener("click", (event) => {
        event.preventDefault();
        handlers.onSeeCases?.();
      });
      card.append(link);
    }
    container.append(card);
  }
  if (description.notices && description.notices.length > 0) {
    container.append(
      el("p", { class: "notices" }, description.notices.join(" | ")),
    );
  }
}
