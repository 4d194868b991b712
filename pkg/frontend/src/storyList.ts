/** Story list with status badges and finding counts. */
import { clear, el } from "./dom.js";
import type { StoryListEntry } from "./types.js";

export function renderStoryList(
  container: HTMLElement,
  entries: StoryListEntry[],
  onSelect: (storyId: string) => void,
  selected?: string,
): void {
  clear(container);
  const list = el("ul", { class: "story-list", "data-testid": "story-list" });
  for (const entry of entries) {
    const { story } = entry;
    const item = el(
      "li",
      { class: `story-item${story.id === selected ? " selected" : ""}`, "data-story": story.id },
      el("span", { class: `badge status-${story.status}` }, story.status),
      " ",
      el("span", { class: "story-snippet" }, story.raw_text.slice(0, 90)),
    );
    if (entry.open_diagnostics > 0) {
      item.append(" ", el("span", { class: "badge badge-open" }, `${entry.open_diagnostics} open`));
    }
    if (entry.waived_diagnostics > 0) {
      item.append(" ", el("span", { class: "badge badge-waived" }, `${entry.waived_diagnostics} waived`));
    }
    item.addEventListener("click", () => onSelect(story.id));
    list.append(item);
  }
  container.append(list);
}
