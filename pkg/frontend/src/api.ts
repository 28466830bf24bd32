// Typed client for the chat service HTTP interface. Every endpoint the UI
// touches is listed here; nothing else is ever called.

export type AnswerRating = "Excellent" | "Good" | "Bad";

export type RespondentRole =
  | "SecondarySchoolStudent"
  | "UniversityStudent"
  | "Professor"
  | "Other";

export const CATEGORIES = [
  "GenericInformation",
  "CoursesInformation",
  "OtherUniversityRelated",
  "OffTopic",
  "ServicesAndStructures",
  "TaxesAndScholarships",
  "UniversityEnvironment",
] as const;

export type Category = (typeof CATEGORIES)[number];

export interface MessageResponse {
  answer: string;
  sources: string[];
  turn: number;
}

export interface FeedbackPayload {
  respondent_role: RespondentRole;
  overall_rating: number;
  per_answer_ratings: AnswerRating[];
  comment?: string | null;
}

export interface StatsResponse {
  total_questions: number;
  categories: Record<string, number>;
  untagged: number;
  feedback_count: number;
  ratings: Record<string, number>;
  roles: Record<string, number>;
}

export type FetchFn = (input: string, init?: RequestInit) => Promise<Response>;

/** A non-2xx reply from the service; 503 marks a degraded service. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ServiceError";
  }

  get degraded(): boolean {
    return this.status === 503;
  }
}

async function parseError(response: Response): Promise<ServiceError> {
  let detail = `${response.status}`;
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // keep the status text
  }
  return new ServiceError(response.status, detail);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchFn = (input, init) => globalThis.fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  async createSession(): Promise<string> {
    const body = await this.request<{ session_id: string }>("POST", "/sessions");
    return body.session_id;
  }

  sendMessage(sessionId: string, question: string): Promise<MessageResponse> {
    return this.request("POST", `/sessions/${sessionId}/messages`, { question });
  }

  async sendFeedback(sessionId: string, payload: FeedbackPayload): Promise<void> {
    await this.request("POST", `/sessions/${sessionId}/feedback`, payload);
  }

  getStats(): Promise<StatsResponse> {
    return this.request("GET", "/stats");
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/health");
  }
}
