/**
 * Wire-format mirrors of the review service's HTTP API.
 *
 * Every interface here matches a JSON payload the service emits or accepts;
 * the UI renders these shapes verbatim and never derives its own variants.
 */

/** The label taxonomy, in service order: three roles, then seven CWE classes. */
export const TAXONOMY = [
  "source",
  "sink",
  "sanitizer",
  "cwe78",
  "cwe79",
  "cwe89",
  "cwe306",
  "cwe601",
  "cwe862",
  "cwe863",
] as const;

export type Label = (typeof TAXONOMY)[number];

/** CWE portion of the taxonomy, used by the settings dialog's filter. */
export const CWE_LABELS = TAXONOMY.slice(3);

/** Where cleaned/produced data leaves a method. */
export type DataOut = "return" | "none" | { parameter: number };

export type Discovery = "training" | "detected" | "manual";

/** One row of `GET /api/methods`. */
export interface MethodRow {
  signature: string;
  className: string;
  methodName: string;
  labels: string[];
  dataIn: number[];
  dataOut: DataOut;
  discovery: Discovery;
  note: string | null;
  scores: Record<string, number> | null;
}

/** Partial edit accepted by `PATCH /api/methods/{signature}`. */
export interface MethodEdit {
  labels?: string[];
  dataIn?: number[];
  dataOut?: DataOut;
  note?: string | null;
}

/** Server-side list filters (query parameters of `GET /api/methods`). */
export interface MethodFilters {
  label?: string;
  discovery?: string;
  className?: string;
}

export interface PathStep {
  uri: string;
  line: number;
  description: string;
  /** Source-line excerpt the service attaches when the file is available. */
  snippet?: string;
}

/** One row of `GET /api/findings`. */
export interface Finding {
  specId: string;
  cwe: string;
  message: string;
  source: { uri: string; line: number };
  sink: { uri: string; line: number };
  path: PathStep[];
}

export type JobKind = "detect" | "train" | "pipeline" | "analyze";

export type JobStatus = "queued" | "running" | "done" | "failed";

/** One row of `GET /api/jobs/{id}` (and the `POST /api/jobs` response). */
export interface Job {
  id: string;
  kind: JobKind;
  status: JobStatus;
  progress: number;
  resultRef: string | null;
  error: string | null;
}

export interface Settings {
  depth: number;
  matchMode: "exact" | "name_and_arity";
  cweFilter: string[] | null;
  seed: number;
}

/** `GET /api/settings`: `exists` is false until the first save. */
export interface SettingsEnvelope {
  exists: boolean;
  settings: Settings;
}

/** `GET /api/stats`; counts keyed by label name. */
export interface Stats {
  record_count: number;
  label_counts: Record<string, number>;
}

/** Error envelope carried by every non-2xx response. */
export interface ApiErrorBody {
  code: string;
  message: string;
  path: string | null;
}
