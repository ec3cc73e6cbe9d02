/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_relightparams_angle: (a: number) => number;
export const __wbg_get_relightparams_background: (a: number) => number;
export const __wbg_get_relightparams_gain: (a: number) => number;
export const __wbg_get_relightparams_lambda: (a: number) => number;
export const __wbg_get_relightparams_masked: (a: number) => number;
export const __wbg_get_relightparams_point_field: (a: number) => number;
export const __wbg_get_relightparams_reuse_interval: (a: number) => number;
export const __wbg_get_relightparams_rho: (a: number) => number;
export const __wbg_get_relightparams_seed: (a: number) => number;
export const __wbg_panels_free: (a: number, b: number) => void;
export const __wbg_relightparams_free: (a: number, b: number) => void;
export const __wbg_set_relightparams_angle: (a: number, b: number) => void;
export const __wbg_set_relightparams_background: (a: number, b: number) => void;
export const __wbg_set_relightparams_gain: (a: number, b: number) => void;
export const __wbg_set_relightparams_lambda: (a: number, b: number) => void;
export const __wbg_set_relightparams_masked: (a: number, b: number) => void;
export const __wbg_set_relightparams_point_field: (a: number, b: number) => void;
export const __wbg_set_relightparams_reuse_interval: (a: number, b: number) => void;
export const __wbg_set_relightparams_rho: (a: number, b: number) => void;
export const __wbg_set_relightparams_seed: (a: number, b: number) => void;
export const compare: (a: number, b: number) => [number, number, number];
export const frequencySplit: (a: number, b: number) => [number, number, number];
export const panels_count: (a: number) => number;
export const panels_height: (a: number) => number;
export const panels_pixels: (a: number) => [number, number];
export const panels_stats: (a: number) => [number, number];
export const panels_width: (a: number) => number;
export const relight: (a: number) => [number, number, number];
export const relightparams_new: () => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
