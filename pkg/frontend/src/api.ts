// Typed client for the annotation service HTTP+JSON API.

export interface QueryRecord {
  queryId: string;
  text: string;
}

export interface NextInfo {
  assigned: number;
  completed: number;
  exhausted: boolean;
  query: QueryRecord | null;
}

export interface ParentLists {
  parents: string[];
  sentinels: string[];
}

export interface AnnotationPayload {
  query_id: string;
  annotator_id: string;
  parent: string;
  category: string;
}

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function errorFrom(response: Response): Promise<ApiError> {
  let code = "http_error";
  let message = `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as { error?: string; message?: string };
    if (body.error) code = body.error;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body; keep the generic message
  }
  return new ApiError(code, message, response.status);
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) throw await errorFrom(response);
    return (await response.json()) as T;
  }

  async parents(): Promise<ParentLists> {
    return this.getJson<ParentLists>("/api/parents");
  }

  async categories(parent: string): Promise<string[]> {
    const payload = await this.getJson<{ categories: string[] }>(
      `/api/categories?parent=${encodeURIComponent(parent)}`,
    );
    return payload.categories;
  }

  async next(annotatorId: string): Promise<NextInfo> {
    const payload = await this.getJson<{
      assigned: number;
      completed: number;
      exhausted?: boolean;
      query_id?: string;
      query?: string;
    }>(`/api/session/${encodeURIComponent(annotatorId)}/next`);
    return {
      assigned: payload.assigned,
      completed: payload.completed,
      exhausted: payload.exhausted === true,
      query:
        payload.query_id !== undefined && payload.query !== undefined
          ? { queryId: payload.query_id, text: payload.query }
          : null,
    };
  }

  async submit(payload: AnnotationPayload): Promise<void> {
    const response = await fetch(this.baseUrl + "/api/annotations", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    if (!response.ok) throw await errorFrom(response);
  }
}
