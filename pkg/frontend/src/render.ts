/**
 * Pure render functions: state in, HTML string out.
 *
 * Nothing here fetches, computes metrics, or filters data — rows, findings,
 * and scores are rendered exactly as the service returned them. Interactive
 * elements carry `data-action` attributes the controller dispatches on.
 */

import { canSave, dataOutKey } from "./editor.js";
import type { EditorState } from "./editor.js";
import { CWE_LABELS, TAXONOMY } from "./types.js";
import type { Finding, Job, MethodRow, PathStep, Settings } from "./types.js";
import type { AppState, EditorTab, Toast } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

export interface ClassGroup {
  className: string;
  rows: MethodRow[];
}

/** Group rows by class in first-seen order (the service's row order). */
export function groupByClass(rows: MethodRow[]): ClassGroup[] {
  const groups = new Map<string, MethodRow[]>();
  for (const row of rows) {
    const existing = groups.get(row.className);
    if (existing) {
      existing.push(row);
    } else {
      groups.set(row.className, [row]);
    }
  }
  return [...groups.entries()].map(([className, grouped]) => ({
    className,
    rows: grouped,
  }));
}

function labelBadge(label: string, score: number | undefined): string {
  if (score === undefined) {
    return `<span class="badge label-${label}">${escapeHtml(label)}</span>`;
  }
  return `<span class="badge label-${label}">${escapeHtml(label)} ${score.toFixed(2)}</span>`;
}

function methodRowHtml(row: MethodRow, selected: boolean): string {
  const badges = row.labels
    .map((label) => labelBadge(label, row.scores?.[label]))
    .join("");
  return `<li>
  <button class="method-row${selected ? " selected" : ""}" data-action="select-method" data-signature="${escapeHtml(row.signature)}">
    <span class="method-name">${escapeHtml(row.methodName)}</span>
    <span class="method-signature">${escapeHtml(row.signature)}</span>
    <span class="badges">${badges}</span>
    <span class="discovery discovery-${row.discovery}">${row.discovery}</span>
  </button>
</li>`;
}

export function renderMethodTable(rows: MethodRow[], selectedSignature: string | null): string {
  if (rows.length === 0) {
    return `<p class="empty-state">No methods match the current filters.</p>`;
  }
  const groups = groupByClass(rows)
    .map(
      (group) => `<details class="class-group" open>
  <summary>${escapeHtml(group.className)} <span class="count">(${group.rows.length})</span></summary>
  <ul class="method-list">
${group.rows.map((row) => methodRowHtml(row, row.signature === selectedSignature)).join("\n")}
  </ul>
</details>`,
    )
    .join("\n");
  return `<div class="method-table">\n${groups}\n</div>`;
}

export function renderToolbar(state: AppState): string {
  const labelOptions = ["", ...TAXONOMY]
    .map((label) => {
      const selected = (state.filters.label ?? "") === label ? " selected" : "";
      return `<option value="${label}"${selected}>${label === "" ? "all labels" : label}</option>`;
    })
    .join("");
  const discoveryOptions = ["", "training", "detected", "manual"]
    .map((value) => {
      const selected = (state.filters.discovery ?? "") === value ? " selected" : "";
      return `<option value="${value}"${selected}>${value === "" ? "all discoveries" : value}</option>`;
    })
    .join("");
  const jobActive =
    state.activeJob !== null && ["queued", "running"].includes(state.activeJob.status);
  const disabled = jobActive ? " disabled" : "";
  const sarifLink = state.sarifAvailable
    ? `<a class="sarif-link" href="/api/export/sarif" download>Download SARIF</a>`
    : "";
  const recordCount = state.stats ? `<span class="stats">${state.stats.record_count} methods</span>` : "";
  return `<div class="toolbar">
  <select data-action="filter-label" aria-label="filter by label">${labelOptions}</select>
  <select data-action="filter-discovery" aria-label="filter by discovery">${discoveryOptions}</select>
  <button data-action="run-detect"${disabled}>Run detection</button>
  <button data-action="run-pipeline"${disabled}>Run pipeline</button>
  ${sarifLink}
  ${recordCount}
</div>`;
}

function dataOutOptions(state: EditorState): string {
  const keys = [
    "return",
    "none",
    ...Array.from({ length: state.parameterCount }, (_, i) => `parameter:${i}`),
  ];
  const current = dataOutKey(state.dataOut);
  return keys
    .map((key) => `<option value="${key}"${key === current ? " selected" : ""}>${key}</option>`)
    .join("");
}

function labelsTab(state: EditorState): string {
  const boxes = TAXONOMY.map((label) => {
    const checked = state.labels.includes(label) ? " checked" : "";
    const score = state.original.scores?.[label];
    const scoreText = score === undefined ? "" : ` <span class="score">${score.toFixed(2)}</span>`;
    return `<label class="checkbox"><input type="checkbox" data-action="toggle-label" data-label="${label}"${checked}> ${label}${scoreText}</label>`;
  }).join("\n");
  return `<div class="tab-labels">\n${boxes}\n</div>`;
}

function flowTab(state: EditorState): string {
  const dataIn =
    state.parameterCount === 0
      ? `<p class="hint">No parameters.</p>`
      : Array.from({ length: state.parameterCount }, (_, i) => {
          const checked = state.dataIn.includes(i) ? " checked" : "";
          return `<label class="checkbox"><input type="checkbox" data-action="toggle-datain" data-index="${i}"${checked}> parameter ${i}</label>`;
        }).join("\n");
  return `<div class="tab-flow">
  <fieldset><legend>data-in parameters</legend>
${dataIn}
  </fieldset>
  <label>data-out
    <select data-action="set-data-out">${dataOutOptions(state)}</select>
  </label>
  <label>note
    <textarea data-action="set-note" rows="2">${escapeHtml(state.note ?? "")}</textarea>
  </label>
</div>`;
}

export function renderEditor(state: EditorState | null, tab: EditorTab): string {
  if (state === null) {
    return `<p class="hint">Select a method to review its labels.</p>`;
  }
  const error = state.error
    ? `<p class="editor-error">${escapeHtml(state.error.path ?? "")}: ${escapeHtml(state.error.message)}</p>`
    : "";
  const saveDisabled = canSave(state) ? "" : " disabled";
  return `<div class="editor">
  <h2 class="editor-title">${escapeHtml(state.signature)}</h2>
  <nav class="tabs">
    <button data-action="editor-tab" data-tab="labels"${tab === "labels" ? ' class="active"' : ""}>Classification</button>
    <button data-action="editor-tab" data-tab="flow"${tab === "flow" ? ' class="active"' : ""}>Flow properties</button>
  </nav>
${tab === "labels" ? labelsTab(state) : flowTab(state)}
  ${error}
  <div class="editor-buttons">
    <button data-action="save-editor"${saveDisabled}>Save</button>
    <button data-action="close-editor">Close</button>
  </div>
</div>`;
}

function pathStepHtml(step: PathStep): string {
  const snippet = step.snippet === undefined ? "" : `<pre>${escapeHtml(step.snippet)}</pre>`;
  return `<details class="step">
  <summary>${escapeHtml(step.uri)}:${step.line} — ${escapeHtml(step.description)}</summary>
  ${snippet}
</details>`;
}

export function renderFindings(findings: Finding[]): string {
  if (findings.length === 0) {
    return `<p class="empty-state">No findings.</p>`;
  }
  const cards = findings
    .map(
      (finding) => `<article class="finding">
  <header><span class="badge cwe">${escapeHtml(finding.cwe)}</span> ${escapeHtml(finding.message)}</header>
  <p class="locations">${escapeHtml(finding.source.uri)}:${finding.source.line} → ${escapeHtml(finding.sink.uri)}:${finding.sink.line}</p>
${finding.path.map(pathStepHtml).join("\n")}
</article>`,
    )
    .join("\n");
  return `<div class="findings">\n${cards}\n</div>`;
}

export function renderJobBar(job: Job | null): string {
  if (job === null) {
    return "";
  }
  const cancel =
    job.status === "queued"
      ? ` <button data-action="cancel-job" data-id="${job.id}">Cancel</button>`
      : "";
  const error = job.error ? ` <span class="job-error">${escapeHtml(job.error)}</span>` : "";
  return `<div class="job-bar job-${job.status}">
  <span class="job-kind">${job.kind}</span>
  <span class="job-status">${job.status}</span>
  <progress max="1" value="${job.progress}"></progress>
  <span class="job-progress">${Math.round(job.progress * 100)}%</span>${cancel}${error}
</div>`;
}

export function renderSettingsDialog(settings: Settings, open: boolean): string {
  if (!open) {
    return "";
  }
  const cweBoxes = CWE_LABELS.map((cwe) => {
    const checked = settings.cweFilter?.includes(cwe) ? " checked" : "";
    return `<label class="checkbox"><input type="checkbox" name="cweFilter" value="${cwe}"${checked}> ${cwe}</label>`;
  }).join("\n");
  return `<div class="dialog-backdrop">
<form class="settings-dialog" id="settings-form">
  <h2>Analysis settings</h2>
  <label>call depth <input type="number" name="depth" min="0" value="${settings.depth}"></label>
  <label>match mode
    <select name="matchMode">
      <option value="exact"${settings.matchMode === "exact" ? " selected" : ""}>exact</option>
      <option value="name_and_arity"${settings.matchMode === "name_and_arity" ? " selected" : ""}>name_and_arity</option>
    </select>
  </label>
  <fieldset><legend>CWE filter (none checked = all)</legend>
${cweBoxes}
  </fieldset>
  <label>seed <input type="number" name="seed" value="${settings.seed}"></label>
  <div class="dialog-buttons">
    <button type="button" data-action="save-settings">Save and continue</button>
    <button type="button" data-action="cancel-settings">Cancel</button>
  </div>
</form>
</div>`;
}

export function renderBanner(connected: boolean): string {
  if (connected) {
    return "";
  }
  return `<div class="banner">Cannot reach the review service — check that it is running, then retry. <button data-action="retry-connect">Retry</button></div>`;
}

export function renderToast(toast: Toast | null): string {
  if (toast === null) {
    return "";
  }
  return `<div class="toast toast-${toast.kind}">${escapeHtml(toast.message)} <button data-action="dismiss-toast">×</button></div>`;
}

export function renderApp(state: AppState): string {
  return `${renderBanner(state.connected)}
${renderToast(state.toast)}
<header>
  <h1>srmforge review</h1>
${renderToolbar(state)}
${renderJobBar(state.activeJob)}
</header>
<main class="columns">
  <section class="methods-pane">
${renderMethodTable(state.methods, state.editor?.signature ?? null)}
  </section>
  <aside class="editor-pane">
${renderEditor(state.editor, state.editorTab)}
  </aside>
</main>
<section class="findings-pane">
  <h2>Findings</h2>
${renderFindings(state.findings)}
</section>
${renderSettingsDialog(state.settings, state.settingsDialogOpen)}`;
}
