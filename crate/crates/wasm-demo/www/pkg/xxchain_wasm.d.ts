/* tslint:disable */
/* eslint-disable */

/**
 * Mirror-chain fidelity landscape, row-major in α.
 */
export function landscape(n: number, alpha_lo: number, alpha_hi: number, alpha_step: number, t_max: number, dt: number): Float64Array;

/**
 * Single-impurity spectrum over `alpha_lo..=alpha_hi`. Layout: row-major,
 * one row of `n` ascending energies per α.
 */
export function spectrum_curve(n: number, alpha_lo: number, alpha_hi: number, step: number): Float64Array;

/**
 * Fidelity, ancilla concurrence and IPR on `0..=t_max`, interleaved as
 * `[F(t0), C(t0), IPR(t0), F(t1), ...]`.
 */
export function transfer_trace(n: number, alpha: number, mirror: boolean, t_max: number, dt: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly landscape: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly spectrum_curve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly transfer_trace: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
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
