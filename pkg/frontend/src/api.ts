/**
 * Typed client for the /api/v1 backend.
 *
 * The UI never computes domain logic: every judgment, score and placement
 * goes through these endpoints. fetch is injectable so controllers can be
 * driven headlessly in tests.
 */

export type AnswerValue =
  | "much_less"
  | "less"
  | "equal"
  | "greater"
  | "much_greater";

export interface Progress {
  answered: number;
  expectedMax: number;
  elements: number;
}

export interface CvssMetricHint {
  key: string;
  new: string;
  probe: string;
  shared: boolean;
}

export interface ControlPanel {
  id: string;
  title?: string;
  description?: string;
}

export type QuestionRendering =
  | { kind: "cvss"; metrics: CvssMetricHint[] }
  | { kind: "controls" | "custom"; new: ControlPanel; probe: ControlPanel };

export interface Question {
  answerIndex: number;
  newElement: string;
  probe: string;
  rendering: QuestionRendering;
  allowedAnswers: AnswerValue[];
}

export interface SessionView {
  sessionId: string;
  state: "awaiting_answer" | "advancing" | "done";
  catalogRef: string;
  progress: Progress;
  question: Question | null;
}

export interface CatalogInfo {
  ref: string;
  kind: string;
  size: number;
}

export interface GraphDocument {
  formatVersion: number;
  catalogRef: string;
  nodes: string[];
  edges: { from: string; to: string; degree: number }[];
  provenance: string;
}

export interface GraphInfo {
  graphId: string;
  catalogRef: string;
  nodes: number;
  edges: number;
}

export interface SetScoreView {
  representative: string;
  members: string[];
  min: number;
  max: number;
  chosen: number;
  pegged: boolean;
}

export interface ScoringConfigView {
  min: number;
  max: number;
  dist1: number;
  dist2: number;
  decimals: number;
  pegs?: Record<string, number>;
}

export interface CurveSampleView {
  d1: number;
  d2min: number;
  d2max: number;
}

export interface RankedSetView {
  members: string[];
  placedByHeuristic: string[];
  label: string;
}

export interface UnifyResult {
  graphId: string;
  graph: GraphDocument;
  report: { disputed: number; contradictory: number; applied: number };
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(`api error ${status}: ${JSON.stringify(detail)}`);
  }
}

export interface SessionRequest {
  catalogRef: string;
  top?: number;
  elements?: string[];
  provenance?: string;
  options: {
    rngSeed: number;
    allowEqual?: boolean;
    allowDegree2?: boolean;
  };
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(`${this.baseUrl}/api/v1${path}`, init);
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      throw new ApiError(response.status, (payload as { detail?: unknown })?.detail ?? payload);
    }
    return payload as T;
  }

  listCatalogs(): Promise<CatalogInfo[]> {
    return this.request("GET", "/catalogs");
  }

  createSession(req: SessionRequest): Promise<SessionView> {
    return this.request("POST", "/sessions", req);
  }

  listSessions(): Promise<Omit<SessionView, "question">[]> {
    return this.request("GET", "/sessions");
  }

  getQuestion(sessionId: string): Promise<SessionView> {
    return this.request("GET", `/sessions/${sessionId}/question`);
  }

  submitAnswer(sessionId: string, index: number, answer: AnswerValue): Promise<SessionView> {
    return this.request("POST", `/sessions/${sessionId}/answers`, { index, answer });
  }

  sessionGraph(sessionId: string): Promise<GraphDocument> {
    return this.request("GET", `/sessions/${sessionId}/graph`);
  }

  saveSessionGraph(sessionId: string): Promise<{ graphId: string }> {
    return this.request("POST", `/sessions/${sessionId}/graph/save`);
  }

  listGraphs(): Promise<GraphInfo[]> {
    return this.request("GET", "/graphs");
  }

  getGraph(graphId: string): Promise<GraphDocument> {
    return this.request("GET", `/graphs/${graphId}`);
  }

  unify(graphIds: string[]): Promise<UnifyResult> {
    return this.request("POST", "/unify", { graphIds });
  }

  scores(
    graphId: string,
    config: ScoringConfigView,
    includeCurve = false,
  ): Promise<{ assignment: { perSet: SetScoreView[] }; curve?: CurveSampleView[] }> {
    return this.request("POST", `/graphs/${graphId}/scores`, {
      config,
      includeCurve,
      curveStep: 0.05,
    });
  }

  pegs(
    graphId: string,
    config: ScoringConfigView,
    pegs: Record<string, number>,
  ): Promise<{ assignment: { perSet: SetScoreView[] } }> {
    return this.request("POST", `/graphs/${graphId}/pegs`, { config, pegs });
  }

  prioritization(graphId: string): Promise<{ sets: RankedSetView[]; rendering: string }> {
    return this.request("GET", `/graphs/${graphId}/prioritization`);
  }
}
