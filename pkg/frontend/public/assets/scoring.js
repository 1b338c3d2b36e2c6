/**
 * Scoring workbench controller: bounds, chosen scores, feasibility curve,
 * and drag-to-peg with client-side clamping to the API-reported interval.
 */
import { clampPeg } from "./model.js";
export class ScoringWorkbench {
    api;
    graphId;
    state = null;
    listeners = [];
    constructor(api, graphId) {
        this.api = api;
        this.graphId = graphId;
    }
    onChange(listener) {
        this.listeners.push(listener);
    }
    get current() {
        return this.state;
    }
    emit(state) {
        this.state = state;
        for (const listener of this.listeners)
            listener(state);
    }
    async load(config) {
        const { assignment, curve } = await this.api.scores(this.graphId, config, true);
        const state = {
            config,
            sets: assignment.perSet,
            curve: curve ?? [],
            pegs: { ...(config.pegs ?? {}) },
        };
        this.emit(state);
        return state;
    }
    /** Feasible interval for a set, as last reported by the backend. */
    intervalOf(representative) {
        const s = this.state?.sets.find((x) => x.representative === representative);
        return s ? { min: s.min, max: s.max } : null;
    }
    /**
     * Peg one set to a value. The value is clamped into the API-reported
     * [min, max] before anything is sent, so an out-of-range drag can never
     * reach the wire.
     */
    async peg(representative, value) {
        if (!this.state)
            throw new Error("workbench not loaded");
        const interval = this.intervalOf(representative);
        if (!interval)
            throw new Error(`unknown set ${representative}`);
        const clamped = clampPeg(value, interval.min, interval.max, this.state.config.decimals);
        const pegs = { ...this.state.pegs, [representative]: clamped };
        const { assignment } = await this.api.pegs(this.graphId, this.state.config, pegs);
        const state = {
            config: this.state.config,
            sets: assignment.perSet,
            curve: this.state.curve,
            pegs,
        };
        this.emit(state);
        return state;
    }
    async unpeg(representative) {
        if (!this.state)
            throw new Error("workbench not loaded");
        const pegs = { ...this.state.pegs };
        delete pegs[representative];
        const config = { ...this.state.config, pegs };
        return this.load(config);
    }
}
