// Typed fetch client for the agent service routes. The fetch function is
// injected so tests can run against a mocked server.

import type {
  AgentReply,
  EventMatch,
  LtmView,
  PersonView,
  SessionInfo,
  SleepReply,
  StmView,
  TurnRequest,
} from "./types";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

async function detailOf(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: string };
    if (typeof body.detail === "string") return body.detail;
  } catch {
    // fall through to the generic message
  }
  return `request failed with status ${response.status}`;
}

export class AgentApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) =>
      fetch(input, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      throw new ApiError(response.status, await detailOf(response));
    }
    return (await response.json()) as T;
  }

  createSession(): Promise<{ session_id: string }> {
    return this.request("POST", "/sessions");
  }

  listSessions(): Promise<SessionInfo[]> {
    return this.request("GET", "/sessions");
  }

  postTurn(sessionId: string, turn: TurnRequest): Promise<AgentReply> {
    return this.request(
      "POST",
      `/sessions/${encodeURIComponent(sessionId)}/turns`,
      turn,
    );
  }

  identify(sessionId: string, name: string): Promise<AgentReply> {
    return this.request(
      "POST",
      `/sessions/${encodeURIComponent(sessionId)}/identify`,
      { name },
    );
  }

  sleep(sessionId: string): Promise<SleepReply> {
    return this.request(
      "POST",
      `/sessions/${encodeURIComponent(sessionId)}/sleep`,
    );
  }

  teach(term: string, imagePath: string): Promise<AgentReply> {
    return this.request("POST", "/teach", { term, image_path: imagePath });
  }

  stm(sessionId: string): Promise<StmView> {
    return this.request(
      "GET",
      `/sessions/${encodeURIComponent(sessionId)}/stm`,
    );
  }

  ltm(): Promise<LtmView> {
    return this.request("GET", "/memory/ltm");
  }

  people(): Promise<PersonView[]> {
    return this.request("GET", "/people");
  }

  eventsByCue(cue: string, k = 3): Promise<EventMatch[]> {
    const query = new URLSearchParams({ cue, k: String(k) });
    return this.request("GET", `/events?${query.toString()}`);
  }
}
