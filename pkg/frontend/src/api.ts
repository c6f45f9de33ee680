/**
 * Typed client for the review service's HTTP API.
 *
 * All methods reject with {@link ApiRequestError} on non-2xx responses so
 * callers can render the service's `{code, message, path}` envelope.
 */

import type {
  ApiErrorBody,
  Finding,
  Job,
  JobKind,
  MethodEdit,
  MethodFilters,
  MethodRow,
  Settings,
  SettingsEnvelope,
  Stats,
} from "./types.js";

/** A non-2xx response, carrying the service's error envelope. */
export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody,
  ) {
    super(body.message);
    this.name = "ApiRequestError";
  }
}

/** Everything the UI is allowed to do; tests substitute a fixture-backed fake. */
export interface ReviewApi {
  listMethods(filters?: MethodFilters): Promise<MethodRow[]>;
  getMethod(signature: string): Promise<MethodRow>;
  patchMethod(signature: string, edit: MethodEdit): Promise<MethodRow>;
  submitJob(kind: JobKind, config?: Record<string, unknown>): Promise<Job>;
  getJob(id: string): Promise<Job>;
  cancelJob(id: string): Promise<Job>;
  listFindings(): Promise<Finding[]>;
  getSettings(): Promise<SettingsEnvelope>;
  putSettings(settings: Settings): Promise<Settings>;
  getStats(): Promise<Stats>;
  /** Href of the SARIF export (a download link, not a JSON call). */
  sarifUrl(): string;
}

export class HttpApi implements ReviewApi {
  private readonly fetchFn: typeof fetch;

  constructor(
    private readonly baseUrl = "",
    fetchFn?: typeof fetch,
  ) {
    this.fetchFn = fetchFn ?? fetch.bind(globalThis);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let envelope: ApiErrorBody;
      try {
        envelope = (await response.json()) as ApiErrorBody;
      } catch {
        envelope = { code: "http", message: `HTTP ${response.status}`, path: null };
      }
      throw new ApiRequestError(response.status, envelope);
    }
    return (await response.json()) as T;
  }

  async listMethods(filters: MethodFilters = {}): Promise<MethodRow[]> {
    const params = new URLSearchParams();
    if (filters.label) params.set("label", filters.label);
    if (filters.discovery) params.set("discovery", filters.discovery);
    if (filters.className) params.set("class", filters.className);
    const query = params.toString();
    const body = await this.request<{ methods: MethodRow[] }>(
      "GET",
      `/api/methods${query ? `?${query}` : ""}`,
    );
    return body.methods;
  }

  getMethod(signature: string): Promise<MethodRow> {
    return this.request("GET", `/api/methods/${encodeURI(signature)}`);
  }

  patchMethod(signature: string, edit: MethodEdit): Promise<MethodRow> {
    return this.request("PATCH", `/api/methods/${encodeURI(signature)}`, edit);
  }

  submitJob(kind: JobKind, config: Record<string, unknown> = {}): Promise<Job> {
    return this.request("POST", "/api/jobs", { kind, config });
  }

  getJob(id: string): Promise<Job> {
    return this.request("GET", `/api/jobs/${id}`);
  }

  cancelJob(id: string): Promise<Job> {
    return this.request("POST", `/api/jobs/${id}/cancel`);
  }

  async listFindings(): Promise<Finding[]> {
    const body = await this.request<{ findings: Finding[] }>("GET", "/api/findings");
    return body.findings;
  }

  getSettings(): Promise<SettingsEnvelope> {
    return this.request("GET", "/api/settings");
  }

  putSettings(settings: Settings): Promise<Settings> {
    return this.request("PUT", "/api/settings", settings);
  }

  getStats(): Promise<Stats> {
    return this.request("GET", "/api/stats");
  }

  sarifUrl(): string {
    return `${this.baseUrl}/api/export/sarif`;
  }
}
