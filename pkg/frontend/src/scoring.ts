/**
 * Scoring workbench controller: bounds, chosen scores, feasibility curve,
 * and drag-to-peg with client-side clamping to the API-reported interval.
 */

import {
  ApiClient,
  type CurveSampleView,
  type ScoringConfigView,
  type SetScoreView,
} from "./api.js";
import { clampPeg } from "./model.js";

export interface WorkbenchState {
  config: ScoringConfigView;
  sets: SetScoreView[];
  curve: CurveSampleView[];
  pegs: Record<string, number>;
}

export type WorkbenchListener = (state: WorkbenchState) => void;

export class ScoringWorkbench {
  private state: WorkbenchState | null = null;
  private listeners: WorkbenchListener[] = [];

  constructor(
    private readonly api: ApiClient,
    readonly graphId: string,
  ) {}

  onChange(listener: WorkbenchListener): void {
    this.listeners.push(listener);
  }

  get current(): WorkbenchState | null {
    return this.state;
  }

  private emit(state: WorkbenchState): void {
    this.state = state;
    for (const listener of this.listeners) listener(state);
  }

  async load(config: ScoringConfigView): Promise<WorkbenchState> {
    const { assignment, curve } = await this.api.scores(this.graphId, config, true);
    const state: WorkbenchState = {
      config,
      sets: assignment.perSet,
      curve: curve ?? [],
      pegs: { ...(config.pegs ?? {}) },
    };
    this.emit(state);
    return state;
  }

  /** Feasible interval for a set, as last reported by the backend. */
  intervalOf(representative: string): { min: number; max: number } | null {
    const s = this.state?.sets.find((x) => x.representative === representative);
    return s ? { min: s.min, max: s.max } : null;
  }

  /**
   * Peg one set to a value. The value is clamped into the API-reported
   * [min, max] before anything is sent, so an out-of-range drag can never
   * reach the wire.
   */
  async peg(representative: string, value: number): Promise<WorkbenchState> {
    if (!this.state) throw new Error("workbench not loaded");
    const interval = this.intervalOf(representative);
    if (!interval) throw new Error(`unknown set ${representative}`);
    const clamped = clampPeg(value, interval.min, interval.max, this.state.config.decimals);
    const pegs = { ...this.state.pegs, [representative]: clamped };
    const { assignment } = await this.api.pegs(this.graphId, this.state.config, pegs);
    const state: WorkbenchState = {
      config: this.state.config,
      sets: assignment.perSet,
      curve: this.state.curve,
      pegs,
    };
    this.emit(state);
    return state;
  }

  async unpeg(representative: string): Promise<WorkbenchState> {
    if (!this.state) throw new Error("workbench not loaded");
    const pegs = { ...this.state.pegs };
    delete pegs[representative];
    const config = { ...this.state.config, pegs };
    return this.load(config);
  }
}
