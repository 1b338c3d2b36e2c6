/**
 * Entry point: hash routing between the home screen, the comparison console
 * (#/session/<id>), and the per-graph scoring / priority workbench
 * (#/graph/<id>). Session ids live in the URL so a reload resumes in place.
 */
import { ApiClient } from "./api.js";
import { ComparisonConsole } from "./console.js";
import { shortcutMap } from "./model.js";
import { ScoringWorkbench } from "./scoring.js";
import { el, renderCurve, renderDag, renderQuestion, renderRankedSets, renderScoreChart } from "./views.js";
const api = new ApiClient("");
const root = document.getElementById("app");
function route() {
    const hash = location.hash || "#/";
    const sessionMatch = hash.match(/^#\/session\/([^/]+)$/);
    const graphMatch = hash.match(/^#\/graph\/([^/]+)$/);
    if (sessionMatch) {
        void sessionScreen(sessionMatch[1]);
    }
    else if (graphMatch) {
        void graphScreen(graphMatch[1]);
    }
    else {
        void homeScreen();
    }
}
window.addEventListener("hashchange", route);
window.addEventListener("DOMContentLoaded", route);
// -- home -----------------------------------------------------------------------
async function homeScreen() {
    root.replaceChildren(el("p", "hint", "loading..."));
    const [catalogs, sessions, graphs] = await Promise.all([
        api.listCatalogs(),
        api.listSessions(),
        api.listGraphs(),
    ]);
    root.replaceChildren();
    const newPanel = el("section", "panel");
    newPanel.append(el("h2", undefined, "New session"));
    const form = el("div", "form-row");
    const select = el("select");
    for (const c of catalogs) {
        const option = el("option", undefined, `${c.ref} (${c.kind}, ${c.size} elements)`);
        option.value = c.ref;
        select.append(option);
    }
    const seed = el("input");
    seed.type = "number";
    seed.value = String(Math.floor(Math.random() * 1e9));
    const start = el("button", "primary", "Start");
    start.addEventListener("click", async () => {
        const view = await api.createSession({
            catalogRef: select.value,
            options: { rngSeed: Number(seed.value) },
        });
        location.hash = `#/session/${view.sessionId}`;
    });
    form.append(select, el("label", undefined, "seed"), seed, start);
    newPanel.append(form);
    root.append(newPanel);
    const sessionsPanel = el("section", "panel");
    sessionsPanel.append(el("h2", undefined, "Sessions"));
    for (const s of sessions) {
        const row = el("div", "list-row");
        const link = el("a", undefined, `${s.sessionId} - ${s.catalogRef} - ${s.state}`);
        link.href = `#/session/${s.sessionId}`;
        row.append(link, el("span", "hint", ` ${s.progress.answered} answers`));
        sessionsPanel.append(row);
    }
    root.append(sessionsPanel);
    const graphsPanel = el("section", "panel");
    graphsPanel.append(el("h2", undefined, "Graphs"));
    const chosen = new Set();
    for (const g of graphs) {
        const row = el("div", "list-row");
        const pick = el("input");
        pick.type = "checkbox";
        pick.addEventListener("change", () => (pick.checked ? chosen.add(g.graphId) : chosen.delete(g.graphId)));
        const link = el("a", undefined, `${g.graphId} - ${g.catalogRef} - ${g.nodes} nodes / ${g.edges} edges`);
        link.href = `#/graph/${g.graphId}`;
        row.append(pick, link);
        graphsPanel.append(row);
    }
    const unify = el("button", "primary", "Unify selected");
    unify.addEventListener("click", async () => {
        if (chosen.size < 2)
            return alert("pick at least two graphs");
        const result = await api.unify([...chosen]);
        location.hash = `#/graph/${result.graphId}`;
    });
    graphsPanel.append(unify);
    root.append(graphsPanel);
}
// -- session console ---------------------------------------------------------------
async function sessionScreen(sessionId) {
    root.replaceChildren(el("p", "hint", "loading session..."));
    const consoleCtl = new ComparisonConsole(api, sessionId);
    const screen = el("div", "session-screen");
    const back = el("a", "back", "< sessions");
    back.href = "#/";
    const stage = el("div", "stage");
    screen.append(back, stage);
    const rerender = () => {
        const view = consoleCtl.current;
        if (!view)
            return;
        renderQuestion(stage, view, consoleCtl.busy, (value) => void submit(value));
        if (view.state === "done") {
            const save = el("button", "primary", "Save graph for unification");
            save.addEventListener("click", async () => {
                const { graphId } = await api.saveSessionGraph(sessionId);
                location.hash = `#/graph/${graphId}`;
            });
            stage.append(save);
        }
    };
    const submit = async (value) => {
        await consoleCtl.answer(value);
    };
    consoleCtl.onChange(rerender);
    const keyHandler = (ev) => {
        if (!location.hash.includes(sessionId)) {
            window.removeEventListener("keydown", keyHandler);
            return;
        }
        const allowed = consoleCtl.current?.question?.allowedAnswers ?? [];
        const value = shortcutMap(allowed).get(ev.key);
        if (value)
            void submit(value);
    };
    window.addEventListener("keydown", keyHandler);
    await consoleCtl.load();
    root.replaceChildren(screen);
    rerender();
}
// -- graph workbench ----------------------------------------------------------------
const DEFAULT_CONFIG = { min: 0, max: 10, dist1: 0.5, dist2: 1.5, decimals: 1 };
async function graphScreen(graphId) {
    root.replaceChildren(el("p", "hint", "loading graph..."));
    const graph = await api.getGraph(graphId);
    const priority = await api.prioritization(graphId);
    const screen = el("div", "graph-screen");
    const back = el("a", "back", "< graphs");
    back.href = "#/";
    screen.append(back);
    screen.append(el("h2", undefined, `Graph ${graphId} (${graph.catalogRef})`));
    const dagPanel = el("section", "panel");
    dagPanel.append(el("h3", undefined, "Constraint graph"));
    const dagBox = el("div");
    dagPanel.append(dagBox);
    screen.append(dagPanel);
    const priorityPanel = el("section", "panel");
    priorityPanel.append(el("h3", undefined, "Priority order"));
    const priorityBox = el("div");
    priorityPanel.append(priorityBox);
    screen.append(priorityPanel);
    const scoresPanel = el("section", "panel");
    scoresPanel.append(el("h3", undefined, "Scores (drag a dot to peg within its bounds)"));
    const configRow = el("div", "form-row");
    const d1 = el("input");
    d1.type = "number";
    d1.step = "0.1";
    d1.value = String(DEFAULT_CONFIG.dist1);
    const d2 = el("input");
    d2.type = "number";
    d2.step = "0.1";
    d2.value = String(DEFAULT_CONFIG.dist2);
    const apply = el("button", "primary", "Recompute");
    configRow.append(el("label", undefined, "degree-1 gap"), d1, el("label", undefined, "degree-2 gap"), d2, apply);
    scoresPanel.append(configRow);
    const chartBox = el("div");
    const curveBox = el("div");
    const errorBox = el("p", "error");
    scoresPanel.append(errorBox, chartBox, el("h4", undefined, "Valid distance pairs"), curveBox);
    screen.append(scoresPanel);
    renderDag(dagBox, graph);
    renderRankedSets(priorityBox, priority.sets, priority.rendering);
    const workbench = new ScoringWorkbench(api, graphId);
    workbench.onChange((state) => {
        errorBox.textContent = "";
        renderScoreChart(chartBox, state.sets, state.config.min, state.config.max, state.config.decimals, {
            onPeg: (rep, value) => void workbench.peg(rep, value).catch((err) => (errorBox.textContent = String(err))),
        });
        renderCurve(curveBox, state.curve);
    });
    const reload = () => workbench
        .load({ ...DEFAULT_CONFIG, dist1: Number(d1.value), dist2: Number(d2.value) })
        .catch((err) => (errorBox.textContent = String(err)));
    apply.addEventListener("click", reload);
    root.replaceChildren(screen);
    await reload();
}
