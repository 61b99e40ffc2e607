// Pure view-model derivation.  Everything here is a function of API payloads
// only, so the rendering code stays trivial and these are what the unit
// tests pin down.
/** Objects the agent may still name: all objects minus those already
 * submitted.  The picker must never offer a duplicate. */
export function remainingObjects(objects, revealed) {
    const used = new Set(revealed);
    return objects.filter((o) => !used.has(o));
}
/** Total queries asked so far, as displayed on the dashboard (Σ k_i). */
export function sumK(k) {
    return k.reduce((acc, x) => acc + x, 0);
}
const STATE_LABELS = {
    registering: "Waiting for agents to join",
    eliciting: "Eliciting preferences",
    done: "Finished",
    aborted: "Aborted",
};
export function dashboardModel(snap) {
    const joined = new Set(snap.joined);
    const pending = new Set(snap.pending_agents);
    return {
        stateLabel: STATE_LABELS[snap.state],
        rows: snap.agents.map((name, i) => ({
            name,
            k: snap.k[i],
            joined: joined.has(i),
            pending: pending.has(i),
            assigned: snap.result ? snap.result[name] : null,
        })),
        totalQueries: snap.total_queries,
        matchingSize: snap.s,
        n: snap.n,
        result: snap.result
            ? Object.entries(snap.result).map(([agent, object]) => ({ agent, object }))
            : null,
    };
}
export function agentModel(poll, objects) {
    if (poll.state === "done") {
        return {
            mode: "done",
            position: null,
            options: [],
            revealed: poll.revealed,
            assigned: poll.assigned,
        };
    }
    if (poll.state === "aborted") {
        return { mode: "over", position: null, options: [], revealed: poll.revealed, assigned: null };
    }
    if (poll.pending) {
        return {
            mode: "prompt",
            position: poll.pending.position,
            options: remainingObjects(objects, poll.revealed),
            revealed: poll.revealed,
            assigned: null,
        };
    }
    return { mode: "waiting", position: null, options: [], revealed: poll.revealed, assigned: null };
}
/** Join link for one agent, relative to the dashboard's origin. */
export function joinLink(sessionId, token) {
    const q = new URLSearchParams({ session: sessionId, token });
    return `agent.html?${q.toString()}`;
}
export function ordinal(position) {
    const mod100 = position % 100;
    if (mod100 >= 11 && mod100 <= 13)
        return `${position}th`;
    switch (position % 10) {
        case 1:
            return `${position}st`;
        case 2:
            return `${position}nd`;
        case 3:
            return `${position}rd`;
        default:
            return `${position}th`;
    }
}
