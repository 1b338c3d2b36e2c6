/**
 * Pure view-model helpers: everything here is deterministic data-in/data-out
 * so it can be unit tested without a DOM.
 */

import type {
  AnswerValue,
  CurveSampleView,
  CvssMetricHint,
  GraphDocument,
  Progress,
  SetScoreView,
} from "./api.js";

export const ANSWER_ORDER: AnswerValue[] = [
  "much_less",
  "less",
  "equal",
  "greater",
  "much_greater",
];

export const ANSWER_LABELS: Record<AnswerValue, string> = {
  much_less: "Much less",
  less: "Less",
  equal: "Equal",
  greater: "Greater",
  much_greater: "Much greater",
};

/** Keyboard shortcuts 1..5 in display order, skipping disallowed answers. */
export function shortcutMap(allowed: AnswerValue[]): Map<string, AnswerValue> {
  const map = new Map<string, AnswerValue>();
  ANSWER_ORDER.forEach((value, i) => {
    if (allowed.includes(value)) map.set(String(i + 1), value);
  });
  return map;
}

/** One rendered row of the side-by-side metric comparison. */
export interface MetricBoxRow {
  key: string;
  /** shared value rendered as a single merged box */
  merged: string | null;
  left: string | null;
  right: string | null;
}

export function metricBoxRows(metrics: CvssMetricHint[]): MetricBoxRow[] {
  return metrics.map((m) =>
    m.shared
      ? { key: m.key, merged: m.new, left: null, right: null }
      : { key: m.key, merged: null, left: m.new, right: m.probe },
  );
}

export function progressText(progress: Progress): string {
  return `${progress.answered} / ${progress.expectedMax} answers`;
}

export function progressFraction(progress: Progress): number {
  if (progress.expectedMax <= 0) return 1;
  return Math.min(1, progress.answered / progress.expectedMax);
}

/**
 * Clamp a requested peg into the API-reported feasible interval, honoring
 * the decimal grid. The UI must never submit values outside [min, max].
 */
export function clampPeg(value: number, min: number, max: number, decimals: number): number {
  const q = 10 ** decimals;
  let v = Math.round(value * q) / q;
  if (v < min) v = Math.ceil(min * q - 1e-9) / q;
  if (v > max) v = Math.floor(max * q + 1e-9) / q;
  // a grid this coarse may have no point inside; fall back to the raw bound
  if (v < min) v = min;
  if (v > max) v = max;
  return v;
}

// -- scoring chart ------------------------------------------------------------

export interface ChartDot {
  representative: string;
  x: number;
  yChosen: number;
  yMin: number;
  yMax: number;
  radius: number;
  pegged: boolean;
}

export interface ChartLayout {
  dots: ChartDot[];
  yOf: (score: number) => number;
  scoreOf: (y: number) => number;
}

/**
 * Dot chart geometry: sets in order on the x axis, score on y, dot radius
 * growing with the square root of the set size.
 */
export function scoreChartLayout(
  sets: SetScoreView[],
  width: number,
  height: number,
  scoreMin: number,
  scoreMax: number,
  pad = 28,
): ChartLayout {
  const innerW = width - 2 * pad;
  const innerH = height - 2 * pad;
  const span = scoreMax - scoreMin || 1;
  const yOf = (score: number) => pad + innerH * (1 - (score - scoreMin) / span);
  const scoreOf = (y: number) => scoreMin + span * (1 - (y - pad) / innerH);
  const step = sets.length > 1 ? innerW / (sets.length - 1) : 0;
  const dots = sets.map((s, i) => ({
    representative: s.representative,
    x: pad + (sets.length > 1 ? i * step : innerW / 2),
    yChosen: yOf(s.chosen),
    yMin: yOf(s.min),
    yMax: yOf(s.max),
    radius: 4 + 2.5 * Math.sqrt(s.members.length),
    pegged: s.pegged,
  }));
  return { dots, yOf, scoreOf };
}

export function curvePolyline(
  samples: CurveSampleView[],
  width: number,
  height: number,
  pad = 28,
): { upper: string; lower: string } {
  if (!samples.length) return { upper: "", lower: "" };
  const d1Max = samples[samples.length - 1]!.d1 || 1;
  const d2Max = Math.max(...samples.map((s) => s.d2max)) || 1;
  const x = (d1: number) => pad + ((width - 2 * pad) * d1) / d1Max;
  const y = (d2: number) => pad + (height - 2 * pad) * (1 - d2 / d2Max);
  const pts = (pick: (s: CurveSampleView) => number) =>
    samples.map((s) => `${x(s.d1).toFixed(1)},${y(pick(s)).toFixed(1)}`).join(" ");
  return { upper: pts((s) => s.d2max), lower: pts((s) => s.d2min) };
}

// -- DAG layout ------------------------------------------------------------------

export interface DagNode {
  id: string;
  depth: number;
  lane: number;
  members: string[];
  onLongestPath: boolean;
}

export interface DagEdge {
  from: string;
  to: string;
  degree: number;
}

export interface DagLayout {
  nodes: DagNode[];
  edges: DagEdge[];
  depths: number;
}

/** Representative map from the degree-0 edges of a graph document. */
export function representativeMap(graph: GraphDocument): Map<string, string> {
  const rep = new Map<string, string>(graph.nodes.map((n) => [n, n]));
  for (const e of graph.edges) if (e.degree === 0) rep.set(e.to, e.from);
  return rep;
}

/**
 * Layered layout: depth = longest strict-edge distance from any source,
 * which puts every node of the longest path on its own layer.
 */
export function dagLayout(graph: GraphDocument): DagLayout {
  const rep = representativeMap(graph);
  const reps = [...new Set(graph.nodes.map((n) => rep.get(n)!))].sort();
  const members = new Map<string, string[]>(reps.map((r) => [r, []]));
  for (const n of graph.nodes) members.get(rep.get(n)!)!.push(n);

  const strict = graph.edges.filter((e) => e.degree > 0);
  const out = new Map<string, { to: string; degree: number }[]>(reps.map((r) => [r, []]));
  const indeg = new Map<string, number>(reps.map((r) => [r, 0]));
  const seen = new Set<string>();
  const edges: DagEdge[] = [];
  for (const e of strict) {
    const u = rep.get(e.from)!;
    const v = rep.get(e.to)!;
    const key = `${u}->${v}`;
    if (seen.has(key)) continue;
    seen.add(key);
    out.get(u)!.push({ to: v, degree: e.degree });
    indeg.set(v, indeg.get(v)! + 1);
    edges.push({ from: u, to: v, degree: e.degree });
  }

  // Kahn order, then longest-distance-from-source layering
  const queue = reps.filter((r) => indeg.get(r) === 0).sort();
  const order: string[] = [];
  const pending = new Map(indeg);
  while (queue.length) {
    const u = queue.shift()!;
    order.push(u);
    for (const { to } of out.get(u)!) {
      pending.set(to, pending.get(to)! - 1);
      if (pending.get(to) === 0) queue.push(to);
    }
    queue.sort();
  }
  const depth = new Map<string, number>(reps.map((r) => [r, 0]));
  for (const u of order) {
    for (const { to } of out.get(u)!) {
      depth.set(to, Math.max(depth.get(to)!, depth.get(u)! + 1));
    }
  }
  const maxDepth = Math.max(0, ...depth.values());
  const longest = new Set<string>();
  // one longest chain: walk greedily from a deepest-reaching source
  const reach = new Map<string, number>();
  for (const u of [...order].reverse()) {
    reach.set(u, Math.max(0, ...out.get(u)!.map(({ to }) => reach.get(to)! + 1)));
  }
  let cursor = reps.filter((r) => reach.get(r) === maxDepth).sort()[0];
  while (cursor !== undefined) {
    longest.add(cursor);
    const rest = reach.get(cursor)! - 1;
    cursor = out
      .get(cursor)!
      .map(({ to }) => to)
      .filter((v) => reach.get(v) === rest)
      .sort()[0];
  }

  const lanes = new Map<number, number>();
  const nodes = order.map((r) => {
    const d = depth.get(r)!;
    const lane = lanes.get(d) ?? 0;
    lanes.set(d, lane + 1);
    return {
      id: r,
      depth: d,
      lane,
      members: members.get(r)!.sort(),
      onLongestPath: longest.has(r),
    };
  });
  return { nodes, edges, depths: maxDepth + 1 };
}

// -- misc ---------------------------------------------------------------------------

/** Stable stringify with sorted keys, for byte comparison of graph exports. */
export function canonicalJson(value: unknown): string {
  if (Array.isArray(value)) {
    return `[${value.map(canonicalJson).join(",")}]`;
  }
  if (value !== null && typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([k, v]) => `${JSON.stringify(k)}:${canonicalJson(v)}`);
    return `{${entries.join(",")}}`;
  }
  return JSON.stringify(value);
}

export function rankedListLines(sets: { label: string; members: string[] }[]): string[] {
  return sets.map((s, i) => `${i + 1}. [${s.label}] ${s.members.join(", ")}`);
}
