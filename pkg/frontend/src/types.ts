/** Payload shapes of the /v1 API. Offsets are Unicode code points. */

export type StoryStatus =
  | "Draft"
  | "Normalized"
  | "AmbiguitiesPending"
  | "Resolved"
  | "Described";

export interface ElementSpan {
  text: string;
  start: number;
  end: number;
}

export interface Story {
  id: string;
  raw_text: string;
  who: ElementSpan | null;
  what: ElementSpan | null;
  why: ElementSpan | null;
  status: StoryStatus;
}

export type DiagnosticKind =
  | "Lexical"
  | "Syntactic"
  | "Pragmatic"
  | "Semantic"
  | "FormatViolation";

export type DiagnosticState = "Open" | "Resolved" | "Waived";

export interface Diagnostic {
  id: string;
  story_id: string;
  kind: DiagnosticKind;
  span: [number, number];
  matched_text: string;
  message: string;
  state: DiagnosticState;
  waive_note: string | null;
}

export interface Segment {
  text: string;
  tag: string; // "How" | "Why" | "Source" | "Plain"; unknown tags trigger the schema banner
}

export interface DescriptionSection {
  article: string;
  segments: Segment[];
}

export interface Description {
  story_id: string;
  kg_version: string;
  none_required: boolean;
  sections: DescriptionSection[];
  notices?: string[];
}

export interface EnforcementCase {
  id: string;
  controller: string;
  authority: string;
  country: string;
  date: string;
  fine_eur: number;
  violated_articles: string[];
  summary: string;
  source_url: string;
}

export interface CaseMatch {
  case: EnforcementCase;
  overlap: string[];
  score: string;
}

export interface StoryView {
  story: Story;
  diagnostics: Diagnostic[];
  proposal: CorrectionProposal | null;
  mapping: unknown | null;
  description: Description | null;
  case_matches: CaseMatch[] | null;
  revision: number;
}

export interface CorrectionProposal {
  story_id: string;
  original: string;
  corrected: string;
  edits: { span: [number, number]; replacement: string; reason: string }[];
  source: string;
  accepted: boolean;
  notes: string[];
}

export interface StoryListEntry {
  story: Story;
  open_diagnostics: number;
  waived_diagnostics: number;
}

export interface Project {
  id: string;
  name: string;
  kg_version: string;
  revision: number;
  stories: Story[];
}

export interface Question {
  id: string;
  text: string;
  component: "Attitude" | "SubjectiveNorm" | "PerceivedControl";
  reverse_scored: boolean;
}

export interface Questionnaire {
  version: string;
  questions: Question[];
}

export interface AttitudeScore {
  questionnaire_version: string;
  per_component: Record<string, string>;
  per_component_float: Record<string, number>;
  overall: string;
  overall_float: number;
}

export interface SurveyRecord {
  response: {
    respondent_id: string;
    phase: "Pre" | "Post";
    answers: Record<string, number>;
    timestamp: string;
  };
  score: AttitudeScore;
}

export interface AttitudeHistory {
  respondent_id: string;
  latest: SurveyRecord | null;
  history: SurveyRecord[];
  delta: { per_component: Record<string, string>; overall: string; overall_float: number } | null;
}

export interface ResolveResult {
  revision: number;
  resolved: boolean;
  story: Story;
  diagnostics: Diagnostic[];
}

export interface StageOutcome {
  stage: string;
  story_id: string;
  ok: boolean;
  status: StoryStatus;
  detail: Record<string, unknown>;
}
