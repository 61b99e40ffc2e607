// Typed client for the elicitation session service.  Every UI interaction
// goes through these six calls; the pages never talk to the engine state
// directly.
export class ApiError extends Error {
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
async function request(path, init) {
    const res = await fetch(path, init);
    if (!res.ok) {
        let detail = res.statusText;
        try {
            const body = await res.json();
            if (typeof body.detail === "string")
                detail = body.detail;
        }
        catch {
            // non-JSON error body; keep the status text
        }
        throw new ApiError(res.status, detail);
    }
    return res.json();
}
export function createSession(n, goal, agents) {
    return request("/sessions", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(agents ? { n, goal, agents } : { n, goal }),
    });
}
export function getSnapshot(sessionId) {
    return request(`/sessions/${encodeURIComponent(sessionId)}`);
}
export function startSession(sessionId) {
    return request(`/sessions/${encodeURIComponent(sessionId)}/start`, {
        method: "POST",
    });
}
export function pollAgent(sessionId, token) {
    return request(`/sessions/${encodeURIComponent(sessionId)}/agents/${encodeURIComponent(token)}/query`);
}
export function submitAnswer(sessionId, token, object) {
    return request(`/sessions/${encodeURIComponent(sessionId)}/agents/${encodeURIComponent(token)}/answer`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ object }),
    });
}
export function getResult(sessionId) {
    return request(`/sessions/${encodeURIComponent(sessionId)}/result`);
}
