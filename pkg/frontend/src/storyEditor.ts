/**
 * Story editor and refine loop.
 *
 * Open findings are highlighted inline from the server's spans. The
 * developer edits the story text and either resolves a finding (submit
 * the edit, let the server re-detect) or waives it with a note. Every
 * mutation carries the revision the view was built from; a 409 reloads
 * the story and tells the developer instead of retrying silently. The
 * editor allows one in-flight mutation per story at a time.
 */
import { ApiError, api } from "./api.js";
import { clear, el } from "./dom.js";
import { renderHighlighted } from "./highlight.js";
import type { StoryView } from "./types.js";

export interface EditorCallbacks {
  /** Called with the fresh view after any successful mutation or reload. */
  onUpdated: (view: StoryView) => void;
}

const inFlight = new Set<string>();

function notice(container: HTMLElement, kind: "info" | "error" | "warn", text: string): void {
  const box = container.querySelector(".editor-notices");
  box?.append(el("div", { class: `banner banner-${kind}`, role: "status" }, text));
}

export function renderStoryEditor(
  container: HTMLElement,
  projectId: string,
  view: StoryView,
  callbacks: EditorCallbacks,
): void {
  clear(container);
  const { story, diagnostics } = view;

  container.append(el("div", { class: "editor-notices" }));
  container.append(
    el(
      "div",
      { class: "story-head" },
      el("span", { class: `badge status-${story.status}`, "data-testid": "status-badge" }, story.status),
      el(
        "span",
        { class: "badge badge-waived", "data-testid": "waived-badge" },
        `${diagnostics.filter((d) => d.state === "Waived").length} waived`,
      ),
    ),
  );

  const highlighted = el("p", { class: "story-text", "data-testid": "story-text" });
  highlighted.append(renderHighlighted(story.raw_text, diagnostics));
  container.append(highlighted);

  const textarea = el("textarea", { class: "story-input", "data-testid": "story-input", rows: "3" });
  textarea.value = story.raw_text;
  container.append(textarea);

  const list = el("ul", { class: "diagnostic-list" });
  for (const diagnostic of diagnostics) {
    const item = el(
      "li",
      { class: `diagnostic diagnostic-${diagnostic.state.toLowerCase()}`, "data-diagnostic": diagnostic.id },
      el("span", { class: "diag-kind" }, diagnostic.kind),
      " ",
      el("span", { class: "diag-text" }, diagnostic.matched_text || "(format)"),
      " ",
      el("span", { class: "diag-message" }, diagnostic.message),
    );
    if (diagnostic.state === "Open") {
      const resolveButton = el(
        "button",
        { type: "button", class: "resolve-button", "data-testid": `resolve-${diagnostic.id}` },
        "Resolve with edited text",
      );
      resolveButton.addEventListener("click", () =>
        resolveFinding(container, projectId, view, diagnostic.id, textarea.value, callbacks),
      );
      const waiveButton = el(
        "button",
        { type: "button", class: "waive-button", "data-testid": `waive-${diagnostic.id}` },
        "Waive",
      );
      waiveButton.addEventListener("click", () => {
        const note = window.prompt("Why is this finding acceptable?") ?? "";
        void waiveFinding(container, projectId, view, diagnostic.id, note, callbacks);
      });
      item.append(" ", resolveButton, " ", waiveButton);
    } else if (diagnostic.state === "Waived" && diagnostic.waive_note) {
      item.append(" ", el("span", { class: "waive-note" }, `waived: ${diagnostic.waive_note}`));
    }
    list.append(item);
  }
  container.append(list);
}

async function guarded(
  container: HTMLElement,
  projectId: string,
  storyId: string,
  callbacks: EditorCallbacks,
  mutation: () => Promise<void>,
): Promise<void> {
  const key = `${projectId}/${storyId}`;
  if (inFlight.has(key)) {
    notice(container, "warn", "Another change for this story is still in flight.");
    return;
  }
  inFlight.add(key);
  try {
    await mutation();
  } catch (error) {
    if (error instanceof ApiError && error.isConflict) {
      notice(container, "error", "Someone else changed this story; reloading the latest version.");
      const fresh = await api.getStory(projectId, storyId);
      callbacks.onUpdated(fresh);
    } else {
      notice(container, "error", error instanceof Error ? error.message : String(error));
    }
  } finally {
    inFlight.delete(key);
  }
}

export function resolveFinding(
  container: HTMLElement,
  projectId: string,
  view: StoryView,
  diagnosticId: string,
  newText: string,
  callbacks: EditorCallbacks,
): Promise<void> {
  return guarded(container, projectId, view.story.id, callbacks, async () => {
    const result = await api.resolveDiagnostic(
      projectId,
      view.story.id,
      diagnosticId,
      newText,
      view.revision,
    );
    if (!result.resolved) {
      notice(container, "warn", "The finding persists: the edit did not change the flagged text.");
    }
    callbacks.onUpdated({
      ...view,
      story: result.story,
      diagnostics: result.diagnostics,
      revision: result.revision,
    });
  });
}

export function waiveFinding(
  container: HTMLElement,
  projectId: string,
  view: StoryView,
  diagnosticId: string,
  note: string,
  callbacks: EditorCallbacks,
): Promise<void> {
  return guarded(container, projectId, view.story.id, callbacks, async () => {
    if (!note.trim()) {
      notice(container, "error", "A waiver needs a justification note.");
      return;
    }
    await api.waiveDiagnostic(projectId, view.story.id, diagnosticId, note, view.revision);
    const fresh = await api.getStory(projectId, view.story.id);
    callbacks.onUpdated(fresh);
  });
}
