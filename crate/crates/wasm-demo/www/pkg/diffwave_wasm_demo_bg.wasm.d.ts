/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_snapshot_free: (a: number, b: number) => void;
export const gCurve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const snapshot_cells: (a: number) => number;
export const snapshot_finalNorm: (a: number) => number;
export const snapshot_millis: (a: number) => number;
export const snapshot_peakNorm: (a: number) => number;
export const snapshot_values: (a: number) => [number, number];
export const solve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const weightTable: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const __externref_table_alloc: () => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
