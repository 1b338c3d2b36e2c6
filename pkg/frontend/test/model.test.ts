import assert from "node:assert/strict";
import { test } from "node:test";

import type { CvssMetricHint, GraphDocument, SetScoreView } from "../src/api.js";
import {
  canonicalJson,
  clampPeg,
  dagLayout,
  metricBoxRows,
  progressFraction,
  progressText,
  rankedListLines,
  scoreChartLayout,
  shortcutMap,
} from "../src/model.js";

test("shared metric values merge into a single box", () => {
  const metrics: CvssMetricHint[] = [
    { key: "AV", new: "N", probe: "N", shared: true },
    { key: "AC", new: "L", probe: "H", shared: false },
  ];
  const rows = metricBoxRows(metrics);
  assert.deepEqual(rows[0], { key: "AV", merged: "N", left: null, right: null });
  assert.deepEqual(rows[1], { key: "AC", merged: null, left: "L", right: "H" });
});

test("keyboard shortcuts follow display order and skip disallowed answers", () => {
  const all = shortcutMap(["much_less", "less", "equal", "greater", "much_greater"]);
  assert.equal(all.get("1"), "much_less");
  assert.equal(all.get("5"), "much_greater");
  const restricted = shortcutMap(["less", "greater"]);
  assert.equal(restricted.get("2"), "less");
  assert.equal(restricted.get("4"), "greater");
  assert.equal(restricted.get("3"), undefined);
});

test("progress formatting", () => {
  const p = { answered: 21, expectedMax: 84, elements: 20 };
  assert.equal(progressText(p), "21 / 84 answers");
  assert.equal(progressFraction(p), 0.25);
  assert.equal(progressFraction({ answered: 99, expectedMax: 10, elements: 5 }), 1);
});

test("peg clamp never leaves the reported interval", () => {
  assert.equal(clampPeg(12.0, 3.0, 7.0, 1), 7.0);
  assert.equal(clampPeg(-4, 3.0, 7.0, 1), 3.0);
  assert.equal(clampPeg(5.24, 3.0, 7.0, 1), 5.2);
  // grid snapping stays inside even at the edges
  assert.equal(clampPeg(2.96, 3.0, 7.0, 1), 3.0);
  assert.equal(clampPeg(7.04, 3.0, 7.0, 1), 7.0);
  // interval narrower than the grid falls back to the exact bound
  const v = clampPeg(0.5, 0.42, 0.44, 1);
  assert.ok(v >= 0.42 && v <= 0.44);
});

test("score chart scales radii with set size and maps scores to y", () => {
  const sets: SetScoreView[] = [
    { representative: "a", members: ["a"], min: 0, max: 4, chosen: 2, pegged: false },
    { representative: "b", members: ["b", "c", "d", "e"], min: 3, max: 9, chosen: 6, pegged: true },
  ];
  const layout = scoreChartLayout(sets, 400, 200, 0, 10);
  assert.equal(layout.dots.length, 2);
  assert.ok(layout.dots[1]!.radius > layout.dots[0]!.radius);
  // y axis inverts: higher score is closer to the top
  assert.ok(layout.yOf(9) < layout.yOf(1));
  const roundTrip = layout.scoreOf(layout.yOf(6.5));
  assert.ok(Math.abs(roundTrip - 6.5) < 1e-9);
});

test("dag layout layers by longest distance and marks the longest path", () => {
  const graph: GraphDocument = {
    formatVersion: 1,
    catalogRef: "cat",
    nodes: ["a", "b", "c", "x", "xm"],
    edges: [
      { from: "a", to: "b", degree: 1 },
      { from: "b", to: "c", degree: 2 },
      { from: "x", to: "c", degree: 1 },
      { from: "x", to: "xm", degree: 0 },
    ],
    provenance: "",
  };
  const layout = dagLayout(graph);
  const byId = new Map(layout.nodes.map((n) => [n.id, n]));
  assert.equal(byId.get("a")!.depth, 0);
  assert.equal(byId.get("b")!.depth, 1);
  assert.equal(byId.get("c")!.depth, 2);
  assert.equal(byId.get("x")!.depth, 0);
  assert.deepEqual(byId.get("x")!.members, ["x", "xm"]);
  assert.ok(byId.get("a")!.onLongestPath && byId.get("b")!.onLongestPath);
  assert.ok(!byId.get("x")!.onLongestPath);
  assert.equal(layout.edges.length, 3);
});

test("canonical json sorts keys recursively", () => {
  const a = canonicalJson({ b: 1, a: [{ z: 0, y: 1 }] });
  const b = canonicalJson({ a: [{ y: 1, z: 0 }], b: 1 });
  assert.equal(a, b);
  assert.equal(canonicalJson({ b: 1, a: 2 }), '{"a":2,"b":1}');
});

test("ranked list lines carry labels and members", () => {
  const lines = rankedListLines([
    { label: "2+1", members: ["m", "n"] },
    { label: "1", members: ["q"] },
  ]);
  assert.deepEqual(lines, ["1. [2+1] m, n", "2. [1] q"]);
});
