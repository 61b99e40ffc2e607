// Coordinator dashboard: create a session, hand out join links, watch the
// per-agent query counts and the revealed matching size climb, and show the
// final matching.

import { createSession, getSnapshot, startSession, ApiError } from "./api.js";
import type { CreateSessionResponse } from "./api.js";
import { dashboardModel, joinLink, sumK } from "./views.js";

const POLL_MS = 1000;

let sessionId: string | null = null;
let created: CreateSessionResponse | null = null;
let timer: number | null = null;

function el<T extends HTMLElement>(id: string): T {
  return document.getElementById(id) as T;
}

function setError(message: string) {
  el("error").textContent = message;
}

async function onCreate(event: Event) {
  event.preventDefault();
  setError("");
  const n = parseInt(el<HTMLInputElement>("n-input").value, 10);
  const goal = el<HTMLSelectElement>("goal-input").value;
  try {
    created = await createSession(n, goal);
  } catch (err) {
    setError(err instanceof ApiError ? err.message : String(err));
    return;
  }
  sessionId = created.id;
  el("session-id").textContent = sessionId;
  renderJoinLinks(created);
  el("create-panel").hidden = true;
  el("session-panel").hidden = false;
  timer = window.setInterval(refresh, POLL_MS);
  void refresh();
}

function renderJoinLinks(res: CreateSessionResponse) {
  const list = el("join-links");
  list.innerHTML = "";
  for (const [name, token] of Object.entries(res.join_tokens)) {
    const li = document.createElement("li");
    const a = document.createElement("a");
    a.href = joinLink(res.id, token);
    a.target = "_blank";
    a.textContent = `${name}'s link`;
    li.append(a);
    list.append(li);
  }
}

async function onStart() {
  if (!sessionId) return;
  try {
    await startSession(sessionId);
  } catch (err) {
    setError(err instanceof ApiError ? err.message : String(err));
  }
}

async function refresh() {
  if (!sessionId) return;
  let snap;
  try {
    snap = await getSnapshot(sessionId);
  } catch (err) {
    setError(err instanceof ApiError ? err.message : String(err));
    return;
  }
  const model = dashboardModel(snap);
  el("state").textContent = model.stateLabel;
  el("total-queries").textContent = String(model.totalQueries);
  el("sum-k").textContent = String(sumK(snap.k));
  el("matching-size").textContent = `${model.matchingSize} / ${model.n}`;

  const tbody = el("agent-rows");
  tbody.innerHTML = "";
  for (const row of model.rows) {
    const tr = document.createElement("tr");
    const status = row.pending
      ? "answering…"
      : row.joined
        ? "joined"
        : "not joined";
    const cells = [row.name, String(row.k), status, row.assigned ?? "—"];
    for (const text of cells) {
      const td = document.createElement("td");
      td.textContent = text;
      tr.append(td);
    }
    tbody.append(tr);
  }

  const resultPanel = el("result-panel");
  if (model.result) {
    resultPanel.hidden = false;
    const list = el("result-list");
    list.innerHTML = "";
    for (const { agent, object } of model.result) {
      const li = document.createElement("li");
      li.textContent = `${agent} → ${object}`;
      list.append(li);
    }
    if (timer !== null && snap.state === "done") {
      window.clearInterval(timer);
      timer = null;
    }
  }
}

function init() {
  el<HTMLFormElement>("create-form").addEventListener("submit", onCreate);
  el<HTMLButtonElement>("start-button").addEventListener("click", onStart);
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", init);
} else {
  init();
}
