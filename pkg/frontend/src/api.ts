// Typed client for the elicitation session service.  Every UI interaction
// goes through these six calls; the pages never talk to the engine state
// directly.

export interface CreateSessionResponse {
  id: string;
  join_tokens: Record<string, string>;
  objects: string[];
}

export interface SessionSnapshot {
  id: string;
  state: "registering" | "eliciting" | "done" | "aborted";
  goal: string;
  n: number;
  agents: string[];
  objects: string[];
  joined: number[];
  k: number[];
  s: number;
  total_queries: number;
  pending_agents: number[];
  result: Record<string, string> | null;
}

export interface AgentPoll {
  state: SessionSnapshot["state"];
  pending: { position: number } | null;
  objects: string[];
  revealed: string[];
  assigned: string | null;
}

export interface SessionResult {
  assignment: Record<string, string>;
  total_queries: number;
  k: number[];
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const res = await fetch(path, init);
  if (!res.ok) {
    let detail = res.statusText;
    try {
      const body = await res.json();
      if (typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(res.status, detail);
  }
  return res.json() as Promise<T>;
}

export function createSession(
  n: number,
  goal: string,
  agents?: string[],
): Promise<CreateSessionResponse> {
  return request("/sessions", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(agents ? { n, goal, agents } : { n, goal }),
  });
}

export function getSnapshot(sessionId: string): Promise<SessionSnapshot> {
  return request(`/sessions/${encodeURIComponent(sessionId)}`);
}

export function startSession(sessionId: string): Promise<{ state: string }> {
  return request(`/sessions/${encodeURIComponent(sessionId)}/start`, {
    method: "POST",
  });
}

export function pollAgent(sessionId: string, token: string): Promise<AgentPoll> {
  return request(
    `/sessions/${encodeURIComponent(sessionId)}/agents/${encodeURIComponent(token)}/query`,
  );
}

export function submitAnswer(
  sessionId: string,
  token: string,
  object: string,
): Promise<{ ok: boolean; state: string }> {
  return request(
    `/sessions/${encodeURIComponent(sessionId)}/agents/${encodeURIComponent(token)}/answer`,
    {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ object }),
    },
  );
}

export function getResult(sessionId: string): Promise<SessionResult> {
  return request(`/sessions/${encodeURIComponent(sessionId)}/result`);
}
