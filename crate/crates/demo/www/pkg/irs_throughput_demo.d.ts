/* tslint:disable */
/* eslint-disable */

/**
 * Link rates against the IRS–UE distance for a UE at BS distance `l`
 * (with the IRS at the same BS distance).
 *
 * Layout: `[C_d, D, d0, C_ir0, kappa0, d1, C_ir1, kappa1, ...]`.
 */
export function linkCurve(n_elements: number, alpha: number, l: number, d_max: number, points: number): Float64Array;

/**
 * One random drop of UEs and IRSs.
 *
 * Layout: `[D, M, K, irs_x0, irs_y0, ..., ue_x0, ue_y0, served0, ...]`
 * where `served` is the IRS index or `-1` for a BS-only UE.
 */
export function sampleTopology(seed: number, n_elements: number, m_irs: number, k_ues: number, r_in: number, r_out: number, alpha: number): Float64Array;

/**
 * Analytic spatial throughput over deployment ranges on a `step` grid.
 *
 * Layout: `[S, r_0, ..., r_{S-1}, c(0,0), c(0,1), ..., c(S-1,S-1)]`, a
 * row-major `S x S` matrix indexed by `(r_in, r_out)`; entries with
 * `r_in >= r_out` are `NaN`.
 */
export function throughputMap(n_elements: number, m_irs: number, alpha: number, step: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly linkCurve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly sampleTopology: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly throughputMap: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
