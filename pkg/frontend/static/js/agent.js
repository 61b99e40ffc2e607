// Agent view: poll for the pending "reveal your next-best object" prompt,
// offer only the objects not yet submitted, and show the final assignment.
import { pollAgent, submitAnswer, ApiError } from "./api.js";
import { agentModel, ordinal } from "./views.js";
const POLL_MS = 1000;
const params = new URLSearchParams(location.search);
const sessionId = params.get("session") ?? "";
const token = params.get("token") ?? "";
let submitting = false;
function el(id) {
    return document.getElementById(id);
}
function setError(message) {
    el("error").textContent = message;
}
async function refresh() {
    if (submitting)
        return;
    let poll;
    try {
        poll = await pollAgent(sessionId, token);
    }
    catch (err) {
        setError(err instanceof ApiError ? err.message : String(err));
        return;
    }
    setError("");
    render(poll);
}
function render(poll) {
    const model = agentModel(poll, poll.objects);
    el("revealed").textContent =
        model.revealed.length > 0 ? model.revealed.join(" ≻ ") : "nothing yet";
    el("waiting-panel").hidden = model.mode !== "waiting";
    el("prompt-panel").hidden = model.mode !== "prompt";
    el("done-panel").hidden = model.mode !== "done";
    el("over-panel").hidden = model.mode !== "over";
    if (model.mode === "prompt" && model.position !== null) {
        el("prompt-text").textContent =
            `Which object is your ${ordinal(model.position)} favourite?`;
        const select = el("object-select");
        select.innerHTML = "";
        for (const object of model.options) {
            const option = document.createElement("option");
            option.value = object;
            option.textContent = object;
            select.append(option);
        }
    }
    if (model.mode === "done") {
        el("assigned").textContent = model.assigned ?? "(unknown)";
    }
}
async function onSubmit(event) {
    event.preventDefault();
    const select = el("object-select");
    if (!select.value)
        return;
    submitting = true;
    try {
        await submitAnswer(sessionId, token, select.value);
    }
    catch (err) {
        setError(err instanceof ApiError ? err.message : String(err));
    }
    finally {
        submitting = false;
    }
    void refresh();
}
function init() {
    if (!sessionId || !token) {
        setError("Missing session or token in the link.");
        return;
    }
    el("answer-form").addEventListener("submit", onSubmit);
    void refresh();
    window.setInterval(refresh, POLL_MS);
}
if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", init);
}
else {
    init();
}
