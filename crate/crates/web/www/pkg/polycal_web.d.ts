/* tslint:disable */
/* eslint-disable */

/**
 * Certificate for a catalog entry, plus its edges for a wireframe.
 */
export function certify_example(name: string, radius: number, refinement: number): string;

/**
 * Elements of the lattice spanned by `generators` (a JSON list of planar
 * vectors) whose cheapest integer representation costs at most `lambda`.
 */
export function norm_ball(generators: string, lambda: number): string;

/**
 * Drag the junction of the three-ray cone in the unit disk to `(x, y)`.
 */
export function y_junction(x: number, y: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly certify_example: (a: number, b: number, c: number, d: number) => [number, number];
    readonly norm_ball: (a: number, b: number, c: number) => [number, number];
    readonly y_junction: (a: number, b: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
