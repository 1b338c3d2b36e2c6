/**
 * Typed client for the /api/v1 backend.
 *
 * The UI never computes domain logic: every judgment, score and placement
 * goes through these endpoints. fetch is injectable so controllers can be
 * driven headlessly in tests.
 */
export class ApiError extends Error {
    status;
    detail;
    constructor(status, detail) {
        super(`api error ${status}: ${JSON.stringify(detail)}`);
        this.status = status;
        this.detail = detail;
    }
}
export class ApiClient {
    baseUrl;
    fetchFn;
    constructor(baseUrl = "", fetchFn = (input, init) => fetch(input, init)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async request(method, path, body) {
        const init = { method, headers: {} };
        if (body !== undefined) {
            init.headers = { "content-type": "application/json" };
            init.body = JSON.stringify(body);
        }
        const response = await this.fetchFn(`${this.baseUrl}/api/v1${path}`, init);
        const payload = await response.json().catch(() => null);
        if (!response.ok) {
            throw new ApiError(response.status, payload?.detail ?? payload);
        }
        return payload;
    }
    listCatalogs() {
        return this.request("GET", "/catalogs");
    }
    createSession(req) {
        return this.request("POST", "/sessions", req);
    }
    listSessions() {
        return this.request("GET", "/sessions");
    }
    getQuestion(sessionId) {
        return this.request("GET", `/sessions/${sessionId}/question`);
    }
    submitAnswer(sessionId, index, answer) {
        return this.request("POST", `/sessions/${sessionId}/answers`, { index, answer });
    }
    sessionGraph(sessionId) {
        return this.request("GET", `/sessions/${sessionId}/graph`);
    }
    saveSessionGraph(sessionId) {
        return this.request("POST", `/sessions/${sessionId}/graph/save`);
    }
    listGraphs() {
        return this.request("GET", "/graphs");
    }
    getGraph(graphId) {
        return this.request("GET", `/graphs/${graphId}`);
    }
    unify(graphIds) {
        return this.request("POST", "/unify", { graphIds });
    }
    scores(graphId, config, includeCurve = false) {
        return this.request("POST", `/graphs/${graphId}/scores`, {
            config,
            includeCurve,
            curveStep: 0.05,
        });
    }
    pegs(graphId, config, pegs) {
        return this.request("POST", `/graphs/${graphId}/pegs`, { config, pegs });
    }
    prioritization(graphId) {
        return this.request("GET", `/graphs/${graphId}/prioritization`);
    }
}
