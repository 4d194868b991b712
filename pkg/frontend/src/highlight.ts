/**
 * Span highlighting over story text.
 *
 * The server reports spans as Unicode code-point offsets, while JS string
 * indices count UTF-16 units, so offsets are translated before slicing;
 * an emoji ahead of a finding must not shift its highlight.
 */
import type { Diagnostic } from "./types.js";

/** Map a code-point offset to the corresponding UTF-16 index. */
export function utf16Index(text: string, codePointOffset: number): number {
  let units = 0;
  let points = 0;
  for (const ch of text) {
    if (points >= codePointOffset) break;
    units += ch.length;
    points += 1;
  }
  return units;
}

/** Slice by code-point offsets (the server's convention). */
export function codePointSlice(text: string, start: number, end: number): string {
  return text.slice(utf16Index(text, start), utf16Index(text, end));
}

const KIND_CLASS: Record<string, string> = {
  Lexical: "hl-lexical",
  Syntactic: "hl-syntactic",
  Pragmatic: "hl-pragmatic",
  Semantic: "hl-semantic",
  FormatViolation: "hl-format",
};

/**
 * Render story text with <mark> elements over every open finding.
 * Only server-supplied spans are used; the client never re-detects.
 */
export function renderHighlighted(text: string, diagnostics: Diagnostic[]): DocumentFragment {
  const fragment = document.createDocumentFragment();
  const open = diagnostics
    .filter((d) => d.state === "Open" && d.span[1] > d.span[0])
    .sort((a, b) => a.span[0] - b.span[0]);
  let cursor = 0;
  for (const diagnostic of open) {
    const [start, end] = diagnostic.span;
    if (start < cursor) continue; // overlapping span; keep the earlier mark
    if (start > cursor) {
      fragment.append(document.createTextNode(codePointSlice(text, cursor, start)));
    }
    const mark = document.createElement("mark");
    mark.className = KIND_CLASS[diagnostic.kind] ?? "hl-unknown";
    mark.dataset.diagnosticId = diagnostic.id;
    mark.title = diagnostic.message;
    mark.textContent = codePointSlice(text, start, end);
    fragment.append(mark);
    cursor = end;
  }
  const tail = codePointSlice(text, cursor, Number.MAX_SAFE_INTEGER);
  if (tail) fragment.append(document.createTextNode(tail));
  return fragment;
}
