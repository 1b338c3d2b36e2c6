/**
 * DOM rendering for the analysis console. Views read controller state and
 * API payloads; they never compute judgments, scores or placements.
 */
import { ANSWER_LABELS, ANSWER_ORDER, curvePolyline, dagLayout, metricBoxRows, progressFraction, progressText, rankedListLines, scoreChartLayout, } from "./model.js";
const SVG_NS = "http://www.w3.org/2000/svg";
export function el(tag, className, text) {
    const node = document.createElement(tag);
    if (className)
        node.className = className;
    if (text !== undefined)
        node.textContent = text;
    return node;
}
function svgEl(tag, attrs) {
    const node = document.createElementNS(SVG_NS, tag);
    for (const [k, v] of Object.entries(attrs))
        node.setAttribute(k, String(v));
    return node;
}
// -- comparison console ------------------------------------------------------------
export function renderQuestion(root, view, busy, onAnswer) {
    root.replaceChildren();
    const header = el("div", "progress-row");
    header.append(el("span", "progress-text", progressText(view.progress)));
    const bar = el("div", "progress-bar");
    const fill = el("div", "progress-fill");
    fill.style.width = `${(progressFraction(view.progress) * 100).toFixed(1)}%`;
    bar.append(fill);
    header.append(bar);
    root.append(header);
    if (view.state === "done" || !view.question) {
        const done = el("div", "done-panel");
        done.append(el("h2", undefined, "Session complete"));
        done.append(el("p", undefined, `${view.progress.answered} answers over ${view.progress.elements} elements.`));
        const link = el("a", "button-link", "Export graph");
        link.setAttribute("href", `/api/v1/sessions/${view.sessionId}/graph`);
        link.setAttribute("download", `${view.sessionId}.json`);
        done.append(link);
        root.append(done);
        return;
    }
    root.append(renderComparison(view.question));
    root.append(renderAnswerButtons(view.question, busy, onAnswer));
    root.append(el("p", "hint", "Keys 1-5 answer; the left card is the element being placed, the right one the current comparison."));
}
function renderComparison(question) {
    const wrap = el("div", "comparison");
    if (question.rendering.kind === "cvss") {
        const grid = el("div", "metric-grid");
        for (const row of metricBoxRows(question.rendering.metrics)) {
            grid.append(el("div", "metric-key", row.key));
            if (row.merged !== null) {
                const box = el("div", "metric-box shared", `${row.key}:${row.merged}`);
                box.style.gridColumn = "2 / span 2";
                grid.append(box);
            }
            else {
                grid.append(el("div", "metric-box new", `${row.key}:${row.left}`));
                grid.append(el("div", "metric-box probe", `${row.key}:${row.right}`));
            }
        }
        wrap.append(grid);
    }
    else {
        const { new: left, probe: right } = question.rendering;
        for (const [panel, cls] of [
            [left, "new"],
            [right, "probe"],
        ]) {
            const card = el("div", `control-card ${cls}`);
            card.append(el("h3", undefined, panel.id));
            if (panel.title)
                card.append(el("h4", undefined, panel.title));
            if (panel.description)
                card.append(el("p", undefined, panel.description));
            wrap.append(card);
        }
    }
    return wrap;
}
function renderAnswerButtons(question, busy, onAnswer) {
    const bar = el("div", "answer-bar");
    ANSWER_ORDER.forEach((value, i) => {
        if (!question.allowedAnswers.includes(value))
            return;
        const button = el("button", `answer ${value}`, `${i + 1}. ${ANSWER_LABELS[value]}`);
        button.disabled = busy;
        button.addEventListener("click", () => onAnswer(value));
        bar.append(button);
    });
    return bar;
}
export function renderScoreChart(root, sets, scoreMin, scoreMax, decimals, callbacks) {
    const width = 720;
    const height = 360;
    root.replaceChildren();
    const svg = svgEl("svg", { viewBox: `0 0 ${width} ${height}`, class: "score-chart" });
    const layout = scoreChartLayout(sets, width, height, scoreMin, scoreMax);
    for (const grid of [scoreMin, (scoreMin + scoreMax) / 2, scoreMax]) {
        const y = layout.yOf(grid);
        svg.append(svgEl("line", { x1: 16, y1: y, x2: width - 8, y2: y, class: "gridline" }));
        svg.append(Object.assign(svgEl("text", { x: 2, y: y + 4, class: "axis-label" }), {
            textContent: grid.toFixed(1),
        }));
    }
    layout.dots.forEach((dot, i) => {
        const set = sets[i];
        svg.append(svgEl("line", { x1: dot.x, y1: dot.yMin, x2: dot.x, y2: dot.yMax, class: "bound-line" }));
        svg.append(svgEl("circle", { cx: dot.x, cy: dot.yMax, r: 3.2, class: "bound-dot max" }));
        svg.append(svgEl("circle", { cx: dot.x, cy: dot.yMin, r: 3.2, class: "bound-dot min" }));
        const chosen = svgEl("circle", {
            cx: dot.x,
            cy: dot.yChosen,
            r: dot.radius,
            class: `chosen-dot${dot.pegged ? " pegged" : ""}`,
        });
        chosen.append(Object.assign(document.createElementNS(SVG_NS, "title"), {
            textContent: `${set.representative}\n${set.members.length} element(s), chosen ${set.chosen}`,
        }));
        attachDragToPeg(chosen, dot.x, layout.scoreOf, set, decimals, callbacks);
        svg.append(chosen);
    });
    root.append(svg);
}
function attachDragToPeg(dot, x, scoreOf, set, decimals, callbacks) {
    let dragging = false;
    dot.addEventListener("pointerdown", (ev) => {
        dragging = true;
        dot.setPointerCapture(ev.pointerId);
    });
    dot.addEventListener("pointermove", (ev) => {
        if (!dragging)
            return;
        const svg = dot.ownerSVGElement;
        const rect = svg.getBoundingClientRect();
        const y = ((ev.clientY - rect.top) / rect.height) * svg.viewBox.baseVal.height;
        dot.setAttribute("cy", String(y));
    });
    dot.addEventListener("pointerup", (ev) => {
        if (!dragging)
            return;
        dragging = false;
        const svg = dot.ownerSVGElement;
        const rect = svg.getBoundingClientRect();
        const y = ((ev.clientY - rect.top) / rect.height) * svg.viewBox.baseVal.height;
        // the drag target is clamped into [min, max] by the workbench before submit
        callbacks.onPeg(set.representative, Number(scoreOf(y).toFixed(decimals)));
    });
}
export function renderCurve(root, samples) {
    const width = 720;
    const height = 220;
    root.replaceChildren();
    if (!samples.length) {
        root.append(el("p", "hint", "No feasible distance pairs for this range."));
        return;
    }
    const svg = svgEl("svg", { viewBox: `0 0 ${width} ${height}`, class: "curve-chart" });
    const { upper, lower } = curvePolyline(samples, width, height);
    svg.append(svgEl("polyline", { points: upper, class: "curve upper" }));
    svg.append(svgEl("polyline", { points: lower, class: "curve lower" }));
    svg.append(Object.assign(svgEl("text", { x: width - 190, y: 16, class: "axis-label" }), {
        textContent: "upper: max valid degree-2 gap",
    }));
    svg.append(Object.assign(svgEl("text", { x: width - 190, y: 32, class: "axis-label" }), {
        textContent: "lower: chosen degree-1 gap",
    }));
    root.append(svg);
}
// -- graph & priority views ----------------------------------------------------------------
export function renderDag(root, graph) {
    const layout = dagLayout(graph);
    const colW = 86;
    const rowH = 64;
    const lanes = Math.max(1, ...layout.nodes.map((n) => n.lane + 1));
    const width = Math.max(320, layout.depths * colW + 60);
    const height = lanes * rowH + 60;
    root.replaceChildren();
    const svg = svgEl("svg", { viewBox: `0 0 ${width} ${height}`, class: "dag" });
    const pos = new Map(layout.nodes.map((n) => [n.id, { x: 40 + n.depth * colW, y: 36 + n.lane * rowH }]));
    for (const e of layout.edges) {
        const a = pos.get(e.from);
        const b = pos.get(e.to);
        svg.append(svgEl("line", {
            x1: a.x,
            y1: a.y,
            x2: b.x,
            y2: b.y,
            class: e.degree === 2 ? "dag-edge strong" : "dag-edge",
        }));
    }
    for (const n of layout.nodes) {
        const p = pos.get(n.id);
        const node = svgEl("circle", {
            cx: p.x,
            cy: p.y,
            r: 9 + 2 * Math.sqrt(n.members.length - 1),
            class: n.onLongestPath ? "dag-node on-path" : "dag-node off-path",
        });
        node.append(Object.assign(document.createElementNS(SVG_NS, "title"), {
            textContent: `${n.id}\n${n.members.join("\n")}`,
        }));
        svg.append(node);
        if (n.members.length > 1) {
            svg.append(Object.assign(svgEl("text", { x: p.x, y: p.y + 4, class: "dag-count" }), {
                textContent: String(n.members.length),
            }));
        }
    }
    root.append(svg);
}
export function renderRankedSets(root, sets, rendering) {
    root.replaceChildren();
    root.append(el("p", "ranked-summary", rendering));
    const list = el("ol", "ranked-list");
    rankedListLines(sets).forEach((line, i) => {
        const item = el("li");
        item.textContent = line.replace(/^\d+\.\s*/, "");
        const placed = sets[i].placedByHeuristic;
        if (placed.length) {
            item.append(el("span", "placed-note", ` (+${placed.length} placed: ${placed.join(", ")})`));
        }
        list.append(item);
    });
    root.append(list);
}
