/* tslint:disable */
/* eslint-disable */

/**
 * Discrete solution sampled on a `res x res` grid of cell centers, row 0 at y = 0.
 */
export class FieldImage {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly dofs: number;
    readonly l2Error: number;
    readonly res: number;
    readonly values: Float64Array;
}

/**
 * Structural sparsity bitmap, row-major, one byte per entry.
 */
export class PatternImage {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly bits: Uint8Array;
    readonly dim: number;
    readonly nnz: number;
}

export function nullity(scheme: string, _switch: string, p: number): number;

export function solveField(scheme: string, _switch: string, p: number, n: number, res: number): FieldImage;

export function sparsityPattern(scheme: string, _switch: string, p: number, n: number): PatternImage;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_fieldimage_free: (a: number, b: number) => void;
    readonly __wbg_patternimage_free: (a: number, b: number) => void;
    readonly fieldimage_dofs: (a: number) => number;
    readonly fieldimage_l2Error: (a: number) => number;
    readonly fieldimage_res: (a: number) => number;
    readonly fieldimage_values: (a: number) => [number, number];
    readonly nullity: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly patternimage_bits: (a: number) => [number, number];
    readonly patternimage_dim: (a: number) => number;
    readonly patternimage_nnz: (a: number) => number;
    readonly solveField: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly sparsityPattern: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
