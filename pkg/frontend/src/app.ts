/**
 * Controller wiring state, API client, and render pass together.
 *
 * One full re-render per state change: `root.innerHTML = renderApp(state)`.
 * Interaction is event delegation on `data-action` attributes, so handlers
 * survive re-renders without re-binding. All async work is tracked so tests
 * can `await app.idle()` for quiescence.
 */

import { ApiRequestError } from "./api.js";
import type { ReviewApi } from "./api.js";
import {
  canSave,
  dataOutFromKey,
  editPayload,
  openEditor,
  setDataOut,
  setNote,
  toggleDataIn,
  toggleLabel,
} from "./editor.js";
import type { InlineError } from "./editor.js";
import { renderApp } from "./render.js";
import { initialState } from "./state.js";
import type { AppState, EditorTab } from "./state.js";
import type { Job, JobKind, MethodRow, Settings } from "./types.js";

export interface AppOptions {
  /** Job polling interval; the production default is one second. */
  pollIntervalMs?: number;
}

function messageOf(error: unknown): string {
  if (error instanceof ApiRequestError) {
    return error.body.message;
  }
  return error instanceof Error ? error.message : String(error);
}

function toInlineError(error: unknown): InlineError {
  if (error instanceof ApiRequestError) {
    return { path: error.body.path, message: error.body.message };
  }
  return { path: null, message: messageOf(error) };
}

export class App {
  readonly state: AppState;

  private readonly pollIntervalMs: number;
  private pollTimer: ReturnType<typeof setTimeout> | null = null;
  private pending: Promise<void> = Promise.resolve();

  constructor(
    private readonly api: ReviewApi,
    private readonly root: HTMLElement,
    options: AppOptions = {},
  ) {
    this.state = initialState();
    this.pollIntervalMs = options.pollIntervalMs ?? 1000;
    this.root.addEventListener("click", (event) => this.onClick(event));
    this.root.addEventListener("change", (event) => this.onChange(event));
  }

  /** Load everything and draw the first frame. */
  init(): Promise<void> {
    const work = this.loadAll();
    this.track(work);
    return work;
  }

  /** Resolves once every tracked API call (including chained ones) settled. */
  async idle(): Promise<void> {
    let previous: Promise<void>;
    do {
      previous = this.pending;
      await previous;
    } while (previous !== this.pending);
  }

  private track(work: Promise<unknown>): void {
    const settled = work.then(
      () => undefined,
      () => undefined,
    );
    this.pending = this.pending.then(() => settled);
  }

  private render(): void {
    this.root.innerHTML = renderApp(this.state);
  }

  private async loadAll(): Promise<void> {
    try {
      const [settingsEnvelope, stats, methods, findings] = await Promise.all([
        this.api.getSettings(),
        this.api.getStats(),
        this.api.listMethods(this.state.filters),
        this.api.listFindings(),
      ]);
      this.state.connected = true;
      this.state.settingsExists = settingsEnvelope.exists;
      this.state.settings = settingsEnvelope.settings;
      this.state.stats = stats;
      this.state.methods = methods;
      this.state.findings = findings;
      if (findings.length > 0) {
        this.state.sarifAvailable = true;
      }
    } catch {
      this.state.connected = false;
    }
    this.render();
  }

  // ---------------------------------------------------------------- events

  private onClick(event: Event): void {
    const element = (event.target as Element | null)?.closest<HTMLElement>("[data-action]");
    if (!element) {
      return;
    }
    switch (element.dataset.action) {
      case "select-method":
        this.selectMethod(element.dataset.signature ?? "");
        break;
      case "editor-tab":
        this.state.editorTab = element.dataset.tab as EditorTab;
        this.render();
        break;
      case "save-editor":
        this.saveEditor();
        break;
      case "close-editor":
        this.state.editor = null;
        this.render();
        break;
      case "run-detect":
        this.requestJob("detect");
        break;
      case "run-pipeline":
        this.requestJob("pipeline");
        break;
      case "cancel-job":
        this.cancelJob(element.dataset.id ?? "");
        break;
      case "save-settings":
        this.saveSettings();
        break;
      case "cancel-settings":
        this.state.settingsDialogOpen = false;
        this.state.pendingJobKind = null;
        this.render();
        break;
      case "dismiss-toast":
        this.state.toast = null;
        this.render();
        break;
      case "retry-connect":
        this.track(this.loadAll());
        break;
      default:
        break;
    }
  }

  private onChange(event: Event): void {
    const element = (event.target as Element | null)?.closest<HTMLElement>("[data-action]");
    if (!element) {
      return;
    }
    const { editor } = this.state;
    switch (element.dataset.action) {
      case "filter-label":
        this.state.filters.label = (element as HTMLSelectElement).value || undefined;
        this.applyFilters();
        break;
      case "filter-discovery":
        this.state.filters.discovery = (element as HTMLSelectElement).value || undefined;
        this.applyFilters();
        break;
      case "toggle-label":
        if (editor) {
          this.state.editor = toggleLabel(editor, element.dataset.label ?? "");
          this.render();
        }
        break;
      case "toggle-datain":
        if (editor) {
          this.state.editor = toggleDataIn(editor, Number(element.dataset.index));
          this.render();
        }
        break;
      case "set-data-out":
        if (editor) {
          this.state.editor = setDataOut(editor, dataOutFromKey((element as HTMLSelectElement).value));
          this.render();
        }
        break;
      case "set-note":
        if (editor) {
          this.state.editor = setNote(editor, (element as HTMLTextAreaElement).value);
          this.render();
        }
        break;
      default:
        break;
    }
  }

  // --------------------------------------------------------------- methods

  private selectMethod(signature: string): void {
    const row = this.state.methods.find((m) => m.signature === signature);
    if (!row) {
      return;
    }
    this.state.editor = openEditor(row);
    this.state.editorTab = "labels";
    this.render();
  }

  private applyFilters(): void {
    this.track(
      this.api.listMethods(this.state.filters).then(
        (methods) => {
          this.state.methods = methods;
          this.render();
        },
        () => {
          this.state.connected = false;
          this.render();
        },
      ),
    );
  }

  private replaceRow(row: MethodRow): void {
    this.state.methods = this.state.methods.map((m) =>
      m.signature === row.signature ? row : m,
    );
  }

  private saveEditor(): void {
    const editor = this.state.editor;
    if (!editor || !canSave(editor)) {
      return;
    }
    const edit = editPayload(editor);
    this.state.editor = { ...editor, saving: true, error: null };
    const optimistic: MethodRow = {
      ...editor.original,
      labels: [...editor.labels],
      dataIn: [...editor.dataIn],
      dataOut: editor.dataOut,
      note: editor.note,
      discovery: "manual",
    };
    this.replaceRow(optimistic);
    this.render();
    this.track(
      this.api.patchMethod(editor.signature, edit).then(
        (row) => {
          this.replaceRow(row);
          this.state.editor = openEditor(row);
          this.render();
        },
        (error: unknown) => {
          this.replaceRow(editor.original);
          this.state.editor = { ...editor, saving: false, error: toInlineError(error) };
          this.render();
        },
      ),
    );
  }

  // ------------------------------------------------------------------ jobs

  private requestJob(kind: JobKind): void {
    if (!this.state.settingsExists) {
      this.state.pendingJobKind = kind;
      this.state.settingsDialogOpen = true;
      this.render();
      return;
    }
    this.submitJob(kind);
  }

  private submitJob(kind: JobKind): void {
    this.track(
      this.api.submitJob(kind).then(
        (job) => {
          this.state.activeJob = job;
          this.render();
          this.schedulePoll(job.id);
        },
        (error: unknown) => {
          this.state.toast = { kind: "error", message: messageOf(error) };
          this.render();
        },
      ),
    );
  }

  private schedulePoll(id: string): void {
    this.pollTimer = setTimeout(() => {
      this.track(
        this.api.getJob(id).then(
          (job) => {
            this.state.activeJob = job;
            if (job.status === "queued" || job.status === "running") {
              this.render();
              this.schedulePoll(id);
            } else {
              this.onJobSettled(job);
            }
          },
          () => {
            this.state.connected = false;
            this.render();
          },
        ),
      );
    }, this.pollIntervalMs);
  }

  private onJobSettled(job: Job): void {
    if (job.status === "done") {
      if (job.kind === "analyze" || job.kind === "pipeline") {
        this.state.sarifAvailable = true;
      }
      this.state.toast = { kind: "info", message: `${job.kind} finished` };
      this.track(this.refresh());
    } else {
      this.state.toast = { kind: "error", message: job.error ?? `${job.kind} failed` };
      this.render();
    }
  }

  private cancelJob(id: string): void {
    if (this.pollTimer !== null) {
      clearTimeout(this.pollTimer);
      this.pollTimer = null;
    }
    this.track(
      this.api.cancelJob(id).then(
        (job) => {
          this.state.activeJob = job;
          this.state.toast = { kind: "info", message: "job cancelled" };
          this.render();
        },
        (error: unknown) => {
          this.state.toast = { kind: "error", message: messageOf(error) };
          this.render();
          this.schedulePoll(id);
        },
      ),
    );
  }

  private async refresh(): Promise<void> {
    try {
      const [methods, findings, stats] = await Promise.all([
        this.api.listMethods(this.state.filters),
        this.api.listFindings(),
        this.api.getStats(),
      ]);
      this.state.methods = methods;
      this.state.findings = findings;
      this.state.stats = stats;
    } catch {
      this.state.connected = false;
    }
    this.render();
  }

  // -------------------------------------------------------------- settings

  private saveSettings(): void {
    const form = this.root.querySelector<HTMLFormElement>("#settings-form");
    if (!form) {
      return;
    }
    const depth = Number(form.querySelector<HTMLInputElement>('input[name="depth"]')?.value ?? "2");
    const matchMode = (form.querySelector<HTMLSelectElement>('select[name="matchMode"]')?.value ??
      "exact") as Settings["matchMode"];
    const seed = Number(form.querySelector<HTMLInputElement>('input[name="seed"]')?.value ?? "0");
    const checked = [
      ...form.querySelectorAll<HTMLInputElement>('input[name="cweFilter"]:checked'),
    ].map((box) => box.value);
    const settings: Settings = {
      depth,
      matchMode,
      cweFilter: checked.length === 0 ? null : checked,
      seed,
    };
    this.track(
      this.api.putSettings(settings).then(
        (saved) => {
          this.state.settings = saved;
          this.state.settingsExists = true;
          this.state.settingsDialogOpen = false;
          const pendingKind = this.state.pendingJobKind;
          this.state.pendingJobKind = null;
          this.render();
          if (pendingKind !== null) {
            this.submitJob(pendingKind);
          }
        },
        (error: unknown) => {
          this.state.toast = { kind: "error", message: messageOf(error) };
          this.render();
        },
      ),
    );
  }
}
