/**
 * Comparison console controller: session state, sequenced answer submission,
 * and the in-flight guard that makes double-clicks harmless. DOM-free so the
 * contract tests can drive it headlessly against a live backend.
 */

import { ApiClient, ApiError, type AnswerValue, type SessionView } from "./api.js";

export type ConsoleListener = (view: SessionView) => void;

export class ComparisonConsole {
  private view: SessionView | null = null;
  private inFlight = false;
  private listeners: ConsoleListener[] = [];

  constructor(
    private readonly api: ApiClient,
    readonly sessionId: string,
  ) {}

  onChange(listener: ConsoleListener): void {
    this.listeners.push(listener);
  }

  get current(): SessionView | null {
    return this.view;
  }

  get busy(): boolean {
    return this.inFlight;
  }

  get done(): boolean {
    return this.view?.state === "done";
  }

  private emit(view: SessionView): void {
    this.view = view;
    for (const listener of this.listeners) listener(view);
  }

  async load(): Promise<SessionView> {
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
  async answer(value: AnswerValue): Promise<boolean> {
    const question = this.view?.question;
    if (!question || this.inFlight) return false;
    if (!question.allowedAnswers.includes(value)) return false;
    this.inFlight = true;
    try {
      const view = await this.api.submitAnswer(this.sessionId, question.answerIndex, value);
      this.emit(view);
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        await this.load();
        return false;
      }
      throw err;
    } finally {
      this.inFlight = false;
    }
  }
}
