/**
 * Top-level client state: everything the render pass needs, nothing more.
 *
 * The state holds API responses verbatim (method rows, findings, jobs,
 * settings) plus pure view concerns (filters, open editor, dialog and toast
 * visibility). No field is computed from another API response.
 */

import type { EditorState } from "./editor.js";
import type {
  Finding,
  Job,
  JobKind,
  MethodFilters,
  MethodRow,
  Settings,
  Stats,
} from "./types.js";

export type EditorTab = "labels" | "flow";

export interface Toast {
  kind: "error" | "info";
  message: string;
}

export interface AppState {
  /** False after a failed fetch; drives the connectivity banner. */
  connected: boolean;
  methods: MethodRow[];
  filters: MethodFilters;
  editor: EditorState | null;
  editorTab: EditorTab;
  activeJob: Job | null;
  findings: Finding[];
  /** True once a run has produced a report this session. */
  sarifAvailable: boolean;
  settingsExists: boolean;
  settings: Settings;
  settingsDialogOpen: boolean;
  /** Job waiting on the first-run settings dialog. */
  pendingJobKind: JobKind | null;
  stats: Stats | null;
  toast: Toast | null;
}

export function initialState(): AppState {
  return {
    connected: true,
    methods: [],
    filters: {},
    editor: null,
    editorTab: "labels",
    activeJob: null,
    findings: [],
    sarifAvailable: false,
    settingsExists: false,
    settings: { depth: 2, matchMode: "exact", cweFilter: null, seed: 0 },
    settingsDialogOpen: false,
    pendingJobKind: null,
    stats: null,
    toast: null,
  };
}
