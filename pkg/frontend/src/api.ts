/**
 * Typed client for the /v1 API. All GDPR logic stays on the server; this
 * module only moves JSON and threads the project revision through every
 * mutation so the server can detect conflicting edits.
 */
import type {
  AttitudeHistory,
  AttitudeScore,
  CaseMatch,
  CorrectionProposal,
  Description,
  Project,
  Questionnaire,
  ResolveResult,
  StageOutcome,
  Story,
  StoryListEntry,
  StoryView,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public errorName: string,
    detail: string,
  ) {
    super(detail);
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let name = "HttpError";
    let detail = `${response.status}`;
    try {
      const body = (await response.json()) as { error?: string; detail?: string };
      name = body.error ?? name;
      detail = body.detail ?? detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, name, detail);
  }
  return (await response.json()) as T;
}

export const api = {
  health(): Promise<{ status: string; kg_version: string }> {
    return request("/v1/health");
  },

  createProject(name: string): Promise<Project> {
    return request("/v1/projects", { method: "POST", body: JSON.stringify({ name }) });
  },

  listProjects(): Promise<Project[]> {
    return request("/v1/projects");
  },

  importStories(
    projectId: string,
    text: string,
    revision: number,
  ): Promise<{ revision: number; stories: { story: Story; missing: string[] }[] }> {
    return request(`/v1/projects/${projectId}/stories/import`, {
      method: "POST",
      body: JSON.stringify({ text, revision }),
    });
  },

  listStories(projectId: string): Promise<{ revision: number; stories: StoryListEntry[] }> {
    return request(`/v1/projects/${projectId}/stories`);
  },

  getStory(projectId: string, storyId: string): Promise<StoryView> {
    return request(`/v1/projects/${projectId}/stories/${storyId}`);
  },

  proposeCorrection(
    projectId: string,
    storyId: string,
    revision: number,
  ): Promise<{ revision: number; proposal: CorrectionProposal }> {
    return request(`/v1/projects/${projectId}/stories/${storyId}/corrections/propose`, {
      method: "POST",
      body: JSON.stringify({ revision }),
    });
  },

  acceptCorrection(
    projectId: string,
    storyId: string,
    accept: boolean,
    revision: number,
  ): Promise<{ revision: number; story: Story; missing: string[] }> {
    return request(`/v1/projects/${projectId}/stories/${storyId}/corrections/accept`, {
      method: "POST",
      body: JSON.stringify({ accept, revision }),
    });
  },

  runStage(
    projectId: string,
    storyId: string,
    stage: string,
    revision: number,
  ): Promise<{ revision: number; outcome: StageOutcome }> {
    return request(`/v1/projects/${projectId}/stories/${storyId}/stages/${stage}`, {
      method: "POST",
      body: JSON.stringify({ revision }),
    });
  },

  resolveDiagnostic(
    projectId: string,
    storyId: string,
    diagnosticId: string,
    newText: string,
    revision: number,
  ): Promise<ResolveResult> {
    return request(
      `/v1/projects/${projectId}/stories/${storyId}/diagnostics/${diagnosticId}/resolve`,
      { method: "POST", body: JSON.stringify({ new_text: newText, revision }) },
    );
  },

  waiveDiagnostic(
    projectId: string,
    storyId: string,
    diagnosticId: string,
    note: string,
    revision: number,
  ): Promise<{ revision: number; diagnostic: unknown; story: Story }> {
    return request(
      `/v1/projects/${projectId}/stories/${storyId}/diagnostics/${diagnosticId}/waive`,
      { method: "POST", body: JSON.stringify({ note, revision }) },
    );
  },

  getDescription(projectId: string, storyId: string): Promise<Description> {
    return request(`/v1/projects/${projectId}/stories/${storyId}/description`);
  },

  getCases(projectId: string, storyId: string): Promise<{ matches: CaseMatch[] }> {
    return request(`/v1/projects/${projectId}/stories/${storyId}/cases`);
  },

  questionnaire(): Promise<Questionnaire> {
    return request("/v1/survey/questionnaire");
  },

  submitSurvey(
    projectId: string,
    respondentId: string,
    phase: "Pre" | "Post",
    answers: Record<string, number>,
  ): Promise<{ revision: number; score: AttitudeScore }> {
    return request(`/v1/projects/${projectId}/survey/responses`, {
      method: "POST",
      body: JSON.stringify({ respondent_id: respondentId, phase, answers }),
    });
  },

  attitudeHistory(projectId: string, respondentId: string): Promise<AttitudeHistory> {
    return request(`/v1/projects/${projectId}/survey/respondents/${respondentId}`);
  },
};

export type Api = typeof api;
