/**
 * Test support: fixture loading and a fixture-backed {@link ReviewApi} fake.
 *
 * Every fixture under tests/fixtures/ is a byte-for-byte recording of a real
 * service response; the fake only sequences them, it never invents payloads.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";

import { ApiRequestError } from "../src/api.js";
import type { ReviewApi } from "../src/api.js";
import type {
  Finding,
  Job,
  JobKind,
  MethodEdit,
  MethodFilters,
  MethodRow,
  Settings,
  SettingsEnvelope,
  Stats,
} from "../src/types.js";

export function loadFixture<T>(name: string): T {
  const path = join(process.cwd(), "tests", "fixtures", name);
  return JSON.parse(readFileSync(path, "utf8")) as T;
}

export function methodsFixture(name: string): MethodRow[] {
  return loadFixture<{ methods: MethodRow[] }>(name).methods;
}

export function findingsFixture(name: string): Finding[] {
  return loadFixture<{ findings: Finding[] }>(name).findings;
}

export interface FakeApiOptions {
  methods?: MethodRow[];
  settings?: SettingsEnvelope;
  stats?: Stats;
  findings?: Finding[];
}

/**
 * In-memory ReviewApi over recorded fixtures.
 *
 * Calls are logged as `"METHOD path"` strings for order assertions. Scripted
 * behavior: `patchQueue` supplies successive PATCH responses, `patchError` /
 * `submitError` fail the next call once, `jobTicksToDone` sets how many polls
 * a job needs, and `failNextJob` makes the next job end in `failed`.
 */
export class FakeApi implements ReviewApi {
  readonly calls: string[] = [];

  methods: MethodRow[];
  settingsEnvelope: SettingsEnvelope;
  stats: Stats;
  findings: Finding[];

  patchQueue: MethodRow[] = [];
  patchError: Error | null = null;
  submitError: Error | null = null;
  getSettingsError: Error | null = null;
  lastPutSettings: Settings | null = null;

  jobTicksToDone = 1;
  failNextJob: string | null = null;

  private readonly jobs = new Map<string, Job>();
  private readonly ticksLeft = new Map<string, number>();
  private readonly failMessage = new Map<string, string | null>();
  private jobCounter = 0;

  constructor(options: FakeApiOptions = {}) {
    this.methods = options.methods ?? [];
    this.settingsEnvelope =
      options.settings ?? loadFixture<SettingsEnvelope>("settings_set.json");
    this.stats = options.stats ?? loadFixture<Stats>("stats.json");
    this.findings = options.findings ?? [];
  }

  async listMethods(filters: MethodFilters = {}): Promise<MethodRow[]> {
    this.calls.push(`GET /api/methods ${JSON.stringify(filters)}`);
    return this.methods.filter(
      (row) =>
        (!filters.label || row.labels.includes(filters.label)) &&
        (!filters.discovery || row.discovery === filters.discovery) &&
        (!filters.className || row.className === filters.className),
    );
  }

  async getMethod(signature: string): Promise<MethodRow> {
    this.calls.push(`GET /api/methods/${signature}`);
    const row = this.methods.find((m) => m.signature === signature);
    if (!row) {
      throw new ApiRequestError(404, loadFixture("error_not_found.json"));
    }
    return row;
  }

  async patchMethod(signature: string, _edit: MethodEdit): Promise<MethodRow> {
    this.calls.push(`PATCH /api/methods/${signature}`);
    if (this.patchError) {
      const error = this.patchError;
      this.patchError = null;
      throw error;
    }
    const next = this.patchQueue.shift();
    if (!next) {
      throw new Error(`no scripted PATCH response for ${signature}`);
    }
    this.methods = this.methods.map((m) => (m.signature === next.signature ? next : m));
    return next;
  }

  async submitJob(kind: JobKind, _config: Record<string, unknown> = {}): Promise<Job> {
    this.calls.push(`POST /api/jobs ${kind}`);
    if (this.submitError) {
      const error = this.submitError;
      this.submitError = null;
      throw error;
    }
    this.jobCounter += 1;
    const job: Job = {
      id: `job-${this.jobCounter}`,
      kind,
      status: "running",
      progress: 0,
      resultRef: null,
      error: null,
    };
    this.jobs.set(job.id, { ...job });
    this.ticksLeft.set(job.id, this.jobTicksToDone);
    this.failMessage.set(job.id, this.failNextJob);
    this.failNextJob = null;
    return job;
  }

  async getJob(id: string): Promise<Job> {
    this.calls.push(`GET /api/jobs/${id}`);
    const job = this.jobs.get(id);
    if (!job) {
      throw new ApiRequestError(404, { code: "not_found", message: `no job ${id}`, path: "/id" });
    }
    const left = (this.ticksLeft.get(id) ?? 1) - 1;
    this.ticksLeft.set(id, left);
    if (left <= 0) {
      const failure = this.failMessage.get(id) ?? null;
      job.status = failure === null ? "done" : "failed";
      job.progress = 1;
      job.error = failure;
    } else {
      job.progress = 0.5;
    }
    return { ...job };
  }

  async cancelJob(id: string): Promise<Job> {
    this.calls.push(`POST /api/jobs/${id}/cancel`);
    const job = this.jobs.get(id);
    if (!job) {
      throw new ApiRequestError(404, { code: "not_found", message: `no job ${id}`, path: "/id" });
    }
    job.status = "failed";
    job.error = "cancelled";
    return { ...job };
  }

  async listFindings(): Promise<Finding[]> {
    this.calls.push("GET /api/findings");
    return this.findings;
  }

  async getSettings(): Promise<SettingsEnvelope> {
    this.calls.push("GET /api/settings");
    if (this.getSettingsError) {
      throw this.getSettingsError;
    }
    return this.settingsEnvelope;
  }

  async putSettings(settings: Settings): Promise<Settings> {
    this.calls.push("PUT /api/settings");
    this.lastPutSettings = settings;
    this.settingsEnvelope = { exists: true, settings };
    return settings;
  }

  async getStats(): Promise<Stats> {
    this.calls.push("GET /api/stats");
    return this.stats;
  }

  sarifUrl(): string {
    return "/api/export/sarif";
  }
}
