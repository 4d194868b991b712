/**
 * Application shell: project picker, story import, the per-story
 * workspace (editor, pipeline controls, description, cases), and the
 * questionnaire drawer. Pure client of the /v1 API.
 */
import { ApiError, api } from "./api.js";
import { openCasesModal } from "./casesModal.js";
import { renderDescription } from "./descriptionView.js";
import { clear, el } from "./dom.js";
import { renderStoryEditor } from "./storyEditor.js";
import { renderStoryList } from "./storyList.js";
import { renderAttitudeGauge, renderSurveyForm } from "./surveyView.js";
import type { Project, StoryView } from "./types.js";

interface AppState {
  project: Project | null;
  selectedStory: string | null;
  respondentId: string;
}

const state: AppState = {
  project: null,
  selectedStory: null,
  respondentId: `dev-${Math.random().toString(36).slice(2, 8)}`,
};

const STAGE_SEQUENCE = ["Normalize", "Detect", "Map", "Describe", "MatchCases"] as const;

function section(id: string, title: string): HTMLElement {
  return el("section", { id, class: "panel" }, el("h2", {}, title), el("div", { class: "panel-body" }));
}

function body(id: string): HTMLElement {
  return document.querySelector(`#${id} .panel-body`) as HTMLElement;
}

export async function boot(root: HTMLElement): Promise<void> {
  clear(root);
  root.append(
    el("header", { class: "topbar" }, el("h1", {}, "gdprlens"), el("span", { id: "health", class: "health" })),
    section("projects", "Project"),
    section("import", "Import stories"),
    el(
      "main",
      { class: "columns" },
      section("stories", "Stories"),
      section("workspace", "Story workspace"),
      section("guidance", "GDPR guidance"),
    ),
    section("survey", "Privacy attitude"),
  );
  const health = await api.health();
  (document.getElementById("health") as HTMLElement).textContent =
    `KG ${health.kg_version}`;
  await renderProjects();
  renderImport();
  await renderSurveyPanel();
}

async function renderProjects(): Promise<void> {
  const container = body("projects");
  clear(container);
  const projects = await api.listProjects();
  const picker = el("select", { class: "project-picker" });
  for (const project of projects) {
    picker.append(el("option", { value: project.id }, `${project.name} (${project.id})`));
  }
  picker.addEventListener("change", () => {
    void selectProject(picker.value);
  });
  const nameInput = el("input", { type: "text", placeholder: "new project name" });
  const createButton = el("button", { type: "button" }, "Create");
  createButton.addEventListener("click", async () => {
    if (!nameInput.value.trim()) return;
    const project = await api.createProject(nameInput.value.trim());
    await renderProjects();
    await selectProject(project.id);
  });
  container.append(picker, " ", nameInput, createButton);
  if (projects.length > 0 && !state.project) {
    await selectProject(projects[0].id);
  }
}

async function selectProject(projectId: string): Promise<void> {
  const projects = await api.listProjects();
  state.project = projects.find((p) => p.id === projectId) ?? null;
  state.selectedStory = null;
  await refreshStories();
}

function renderImport(): void {
  const container = body("import");
  clear(container);
  const textarea = el("textarea", {
    rows: "4",
    class: "import-input",
    placeholder: "One story per line, or paste a JSON array of {id, text}.",
  });
  const button = el("button", { type: "button" }, "Import");
  const status = el("span", { class: "import-status", role: "status" });
  button.addEventListener("click", async () => {
    if (!state.project || !textarea.value.trim()) return;
    try {
      const result = await api.importStories(state.project.id, textarea.value, state.project.revision);
      status.textContent = `Imported ${result.stories.length} stories.`;
      textarea.value = "";
      await selectProject(state.project.id);
    } catch (error) {
      if (error instanceof ApiError && error.isConflict) {
        status.textContent = "Project changed elsewhere; reloading.";
        await selectProject(state.project.id);
      } else {
        status.textContent = error instanceof Error ? error.message : String(error);
      }
    }
  });
  container.append(textarea, button, status);
}

async function refreshStories(): Promise<void> {
  if (!state.project) return;
  const container = body("stories");
  const listing = await api.listStories(state.project.id);
  state.project.revision = listing.revision;
  renderStoryList(container, listing.stories, (storyId) => void openStory(storyId), state.selectedStory ?? undefined);
  if (state.selectedStory) {
    await openStory(state.selectedStory);
  }
}

async function openStory(storyId: string): Promise<void> {
  if (!state.project) return;
  state.selectedStory = storyId;
  const view = await api.getStory(state.project.id, storyId);
  renderWorkspace(view);
}

function renderWorkspace(view: StoryView): void {
  if (!state.project) return;
  const projectId = state.project.id;
  const container = body("workspace");
  clear(container);

  const editorHost = el("div", { class: "editor-host" });
  renderStoryEditor(editorHost, projectId, view, {
    onUpdated: (fresh) => {
      renderWorkspace(fresh);
      void refreshStories();
    },
  });
  container.append(editorHost);

  const controls = el("div", { class: "stage-controls" });
  for (const stage of STAGE_SEQUENCE) {
    const button = el("button", { type: "button", class: `stage-${stage}` }, stage);
    button.addEventListener("click", async () => {
      try {
        await api.runStage(projectId, view.story.id, stage, view.revision);
      } catch (error) {
        const message = error instanceof Error ? error.message : String(error);
        controls.append(el("div", { class: "banner banner-error" }, message));
      }
      await openStory(view.story.id);
      await refreshStories();
    });
    controls.append(button);
  }
  container.append(controls);

  renderGuidance(view);
}

function renderGuidance(view: StoryView): void {
  if (!state.project) return;
  const projectId = state.project.id;
  const container = body("guidance");
  clear(container);
  if (!view.description) {
    container.append(
      el("p", { class: "guidance-empty" }, "Run the pipeline through Describe to see GDPR guidance."),
    );
    return;
  }
  const descriptionHost = el("div", { class: "description-host" });
  renderDescription(descriptionHost, view.description, {
    onSeeCases: () => {
      void api
        .getCases(projectId, view.story.id)
        .then((payload) => openCasesModal(document.body, payload.matches));
    },
  });
  container.append(descriptionHost);
}

async function renderSurveyPanel(): Promise<void> {
  const container = body("survey");
  clear(container);
  if (!state.project) {
    container.append(el("p", {}, "Create a project to take the questionnaire."));
    return;
  }
  const projectId = state.project.id;
  const questionnaire = await api.questionnaire();
  const gaugeHost = el("div", { class: "gauge-host" });
  const formHost = el("div", { class: "survey-host" });
  const phasePicker = el("select", { class: "phase-picker" });
  phasePicker.append(el("option", { value: "Pre" }, "Before using the tool"));
  phasePicker.append(el("option", { value: "Post" }, "After using the tool"));
  const refreshGauge = async (): Promise<void> => {
    const history = await api.attitudeHistory(projectId, state.respondentId);
    renderAttitudeGauge(gaugeHost, history);
  };
  renderSurveyForm(formHost, questionnaire, projectId, state.respondentId, "Pre", {
    onScored: () => void refreshGauge(),
  });
  phasePicker.addEventListener("change", () => {
    renderSurveyForm(
      formHost,
      questionnaire,
      projectId,
      state.respondentId,
      phasePicker.value as "Pre" | "Post",
      { onScored: () => void refreshGauge() },
    );
  });
  const checkButton = el("button", { type: "button", class: "check-attitude" }, "Check");
  checkButton.addEventListener("click", () => void refreshGauge());
  container.append(phasePicker, checkButton, formHost, gaugeHost);
  await refreshGauge();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void boot(document.getElementById("app") as HTMLElement);
}
