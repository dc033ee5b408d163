/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const halfSum: (a: number, b: number, c: number, d: number) => [number, number];
export const lambertVsJet: (a: number, b: number, c: number, d: number) => [number, number];
export const tangentTable: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
