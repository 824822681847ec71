/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_fieldimage_free: (a: number, b: number) => void;
export const __wbg_patternimage_free: (a: number, b: number) => void;
export const fieldimage_dofs: (a: number) => number;
export const fieldimage_l2Error: (a: number) => number;
export const fieldimage_res: (a: number) => number;
export const fieldimage_values: (a: number) => [number, number];
export const nullity: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const patternimage_bits: (a: number) => [number, number];
export const patternimage_dim: (a: number) => number;
export const patternimage_nnz: (a: number) => number;
export const solveField: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const sparsityPattern: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
