/**
 * Comparison console controller: session state, sequenced answer submission,
 * and the in-flight guard that makes double-clicks harmless. DOM-free so the
 * contract tests can drive it headlessly against a live backend.
 */
import { ApiError } from "./api.js";
export class ComparisonConsole {
    api;
    sessionId;
    view = null;
    inFlight = false;
    listeners = [];
    constructor(api, sessionId) {
        this.api = api;
        this.sessionId = sessionId;
    }
    onChange(listener) {
        this.listeners.push(listener);
    }
    get current() {
        return this.view;
    }
    get busy() {
        return this.inFlight;
    }
    get done() {
        return this.view?.state === "done";
    }
    emit(view) {
        this.view = view;
        for (const listener of this.listeners)
            listener(view);
    }
    async load() {
        const view = await this.api.getQuestion(this.sessionId);
        this.emit(view);
        return view;
    }
    /**
     * Submit one judgment. Returns false without a network call when no
     * question is pending, the value is not allowed, or an answer is already
     * in flight. On an out-of-sequence conflict the console resyncs instead
     * of double-recording.
     */
    async answer(value) {
        const question = this.view?.question;
        if (!question || this.inFlight)
            return false;
        if (!question.allowedAnswers.includes(value))
            return false;
        this.inFlight = true;
        try {
            const view = await this.api.submitAnswer(this.sessionId, question.answerIndex, value);
            this.emit(view);
            return true;
        }
        catch (err) {
            if (err instanceof ApiError && err.status === 409) {
                await this.load();
                return false;
            }
            throw err;
        }
        finally {
            this.inFlight = false;
        }
    }
}
