/* tslint:disable */
/* eslint-disable */

/**
 * A horizontal strip of equally sized grayscale images plus run statistics.
 */
export class Panels {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    count(): number;
    height(): number;
    /**
     * RGBA bytes, row-major over the whole strip.
     */
    pixels(): Uint8Array;
    /**
     * View-specific numbers; see each view for the order.
     */
    stats(): Float64Array;
    /**
     * Width of the whole strip in pixels.
     */
    width(): number;
}

/**
 * Knobs of the relighting view.
 */
export class RelightParams {
    free(): void;
    [Symbol.dispose](): void;
    constructor();
    angle: number;
    background: number;
    gain: number;
    lambda: number;
    /**
     * Restrict the residual correction to the foreground disc.
     */
    masked: boolean;
    /**
     * Use the single-image point field instead of the texture mixture.
     */
    point_field: boolean;
    reuse_interval: number;
    rho: number;
    seed: number;
}

export function compare(n_avg: number, seed: number): Panels;

export function frequencySplit(rho: number, texture_seed: number): Panels;

export function relight(params: RelightParams): Panels;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_relightparams_angle: (a: number) => number;
    readonly __wbg_get_relightparams_background: (a: number) => number;
    readonly __wbg_get_relightparams_gain: (a: number) => number;
    readonly __wbg_get_relightparams_lambda: (a: number) => number;
    readonly __wbg_get_relightparams_masked: (a: number) => number;
    readonly __wbg_get_relightparams_point_field: (a: number) => number;
    readonly __wbg_get_relightparams_reuse_interval: (a: number) => number;
    readonly __wbg_get_relightparams_rho: (a: number) => number;
    readonly __wbg_get_relightparams_seed: (a: number) => number;
    readonly __wbg_panels_free: (a: number, b: number) => void;
    readonly __wbg_relightparams_free: (a: number, b: number) => void;
    readonly __wbg_set_relightparams_angle: (a: number, b: number) => void;
    readonly __wbg_set_relightparams_background: (a: number, b: number) => void;
    readonly __wbg_set_relightparams_gain: (a: number, b: number) => void;
    readonly __wbg_set_relightparams_lambda: (a: number, b: number) => void;
    readonly __wbg_set_relightparams_masked: (a: number, b: number) => void;
    readonly __wbg_set_relightparams_point_field: (a: number, b: number) => void;
    readonly __wbg_set_relightparams_reuse_interval: (a: number, b: number) => void;
    readonly __wbg_set_relightparams_rho: (a: number, b: number) => void;
    readonly __wbg_set_relightparams_seed: (a: number, b: number) => void;
    readonly compare: (a: number, b: number) => [number, number, number];
    readonly frequencySplit: (a: number, b: number) => [number, number, number];
    readonly panels_count: (a: number) => number;
    readonly panels_height: (a: number) => number;
    readonly panels_pixels: (a: number) => [number, number];
    readonly panels_stats: (a: number) => [number, number];
    readonly panels_width: (a: number) => number;
    readonly relight: (a: number) => [number, number, number];
    readonly relightparams_new: () => number;
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
