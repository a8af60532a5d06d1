/** Typed HTTP client for the annotation service. */

import type {
  DmsRequest,
  EmsRequest,
  Guidelines,
  Item,
  Stage,
  StatsPayload,
  Task,
  VerifyRequest,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly rule: string | null = null,
  ) {
    super(message);
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

export class NetworkError extends Error {}

type FetchLike = typeof fetch;

export class AnnotationApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        headers: { "Content-Type": "application/json" },
        ...init,
      });
    } catch (error) {
      throw new NetworkError(String(error));
    }
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail = typeof body.detail === "string" ? body.detail : response.statusText;
      throw new ApiError(detail, response.status, body.rule ?? null);
    }
    return body as T;
  }

  async nextTask(annotator: string, stage?: Stage): Promise<Task | null> {
    const params = new URLSearchParams({ annotator });
    if (stage) params.set("stage", stage);
    const body = await this.request<{ task: Task | null }>(`/tasks/next?${params}`);
    return body.task;
  }

  async submitVerify(taskId: string, request: VerifyRequest): Promise<Item> {
    const body = await this.request<{ item: Item }>(`/tasks/${taskId}/verify`, {
      method: "POST",
      body: JSON.stringify(request),
    });
    return body.item;
  }

  async submitEms(taskId: string, request: EmsRequest): Promise<Item> {
    const body = await this.request<{ item: Item }>(`/tasks/${taskId}/ems`, {
      method: "POST",
      body: JSON.stringify(request),
    });
    return body.item;
  }

  async submitDms(taskId: string, request: DmsRequest): Promise<Item> {
    const body = await this.request<{ item: Item }>(`/tasks/${taskId}/dms`, {
      method: "POST",
      body: JSON.stringify(request),
    });
    return body.item;
  }

  async submitAdjudication(taskId: string, request: DmsRequest): Promise<Item> {
    const body = await this.request<{ item: Item }>(`/tasks/${taskId}/adjudicate`, {
      method: "POST",
      body: JSON.stringify(request),
    });
    return body.item;
  }

  async rules(): Promise<string[]> {
    const body = await this.request<{ rules: string[] }>("/rules");
    return body.rules;
  }

  async guidelines(): Promise<Guidelines> {
    return this.request<Guidelines>("/guidelines");
  }

  async stats(): Promise<StatsPayload> {
    return this.request<StatsPayload>("/stats");
  }

  async item(itemId: string): Promise<Item> {
    const body = await this.request<{ item: Item }>(`/items/${itemId}`);
    return body.item;
  }
}
