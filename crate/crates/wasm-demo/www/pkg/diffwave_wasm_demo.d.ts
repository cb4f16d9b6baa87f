/* tslint:disable */
/* eslint-disable */

export class Snapshot {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    cells(): number;
    finalNorm(): number;
    millis(): number;
    peakNorm(): number;
    /**
     * Row-major `(cells + 1)^2` nodal values at the final time, x index outermost.
     */
    values(): Float64Array;
}

export function gCurve(profile_key: string, alpha0: number, samples: number, t_final: number): Float64Array;

export function solve(problem: string, scheme: string, alpha0: number, steps: number, cells: number): Snapshot;

export function weightTable(kind: string, profile_key: string, alpha0: number, steps: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_snapshot_free: (a: number, b: number) => void;
    readonly gCurve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly snapshot_cells: (a: number) => number;
    readonly snapshot_finalNorm: (a: number) => number;
    readonly snapshot_millis: (a: number) => number;
    readonly snapshot_peakNorm: (a: number) => number;
    readonly snapshot_values: (a: number) => [number, number];
    readonly solve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly weightTable: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __externref_table_alloc: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
