/* @ts-self-types="./rcflow_web.d.ts" */

/**
 * A horizontal strip of equally sized grayscale images plus run statistics.
 */
export class Panels {
    static __wrap(ptr) {
        const obj = Object.create(Panels.prototype);
        obj.__wbg_ptr = ptr;
        PanelsFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        PanelsFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_panels_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    count() {
        const ret = wasm.panels_count(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * @returns {number}
     */
    height() {
        const ret = wasm.panels_height(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * RGBA bytes, row-major over the whole strip.
     * @returns {Uint8Array}
     */
    pixels() {
        const ret = wasm.panels_pixels(this.__wbg_ptr);
        var v1 = getArrayU8FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 1, 1);
        return v1;
    }
    /**
     * View-specific numbers; see each view for the order.
     * @returns {Float64Array}
     */
    stats() {
        const ret = wasm.panels_stats(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * Width of the whole strip in pixels.
     * @returns {number}
     */
    width() {
        const ret = wasm.panels_width(this.__wbg_ptr);
        return ret >>> 0;
    }
}
if (Symbol.dispose) Panels.prototype[Symbol.dispose] = Panels.prototype.free;

/**
 * Knobs of the relighting view.
 */
export class RelightParams {
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        RelightParamsFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_relightparams_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get angle() {
        const ret = wasm.__wbg_get_relightparams_angle(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get background() {
        const ret = wasm.__wbg_get_relightparams_background(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get gain() {
        const ret = wasm.__wbg_get_relightparams_gain(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get lambda() {
        const ret = wasm.__wbg_get_relightparams_lambda(this.__wbg_ptr);
        return ret;
    }
    /**
     * Restrict the residual correction to the foreground disc.
     * @returns {boolean}
     */
    get masked() {
        const ret = wasm.__wbg_get_relightparams_masked(this.__wbg_ptr);
        return ret !== 0;
    }
    /**
     * Use the single-image point field instead of the texture mixture.
     * @returns {boolean}
     */
    get point_field() {
        const ret = wasm.__wbg_get_relightparams_point_field(this.__wbg_ptr);
        return ret !== 0;
    }
    /**
     * @returns {number}
     */
    get reuse_interval() {
        const ret = wasm.__wbg_get_relightparams_reuse_interval(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * @returns {number}
     */
    get rho() {
        const ret = wasm.__wbg_get_relightparams_rho(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get seed() {
        const ret = wasm.__wbg_get_relightparams_seed(this.__wbg_ptr);
        return ret >>> 0;
    }
    constructor() {
        const ret = wasm.relightparams_new();
        this.__wbg_ptr = ret;
        RelightParamsFinalization.register(this, this.__wbg_ptr, this);
        return this;
    }
    /**
     * @param {number} arg0
     */
    set angle(arg0) {
        wasm.__wbg_set_relightparams_angle(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set background(arg0) {
        wasm.__wbg_set_relightparams_background(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set gain(arg0) {
        wasm.__wbg_set_relightparams_gain(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set lambda(arg0) {
        wasm.__wbg_set_relightparams_lambda(this.__wbg_ptr, arg0);
    }
    /**
     * Restrict the residual correction to the foreground disc.
     * @param {boolean} arg0
     */
    set masked(arg0) {
        wasm.__wbg_set_relightparams_masked(this.__wbg_ptr, arg0);
    }
    /**
     * Use the single-image point field instead of the texture mixture.
     * @param {boolean} arg0
     */
    set point_field(arg0) {
        wasm.__wbg_set_relightparams_point_field(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set reuse_interval(arg0) {
        wasm.__wbg_set_relightparams_reuse_interval(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set rho(arg0) {
        wasm.__wbg_set_relightparams_rho(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set seed(arg0) {
        wasm.__wbg_set_relightparams_seed(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) RelightParams.prototype[Symbol.dispose] = RelightParams.prototype.free;

/**
 * @param {number} n_avg
 * @param {number} seed
 * @returns {Panels}
 */
export function compare(n_avg, seed) {
    const ret = wasm.compare(n_avg, seed);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return Panels.__wrap(ret[0]);
}

/**
 * @param {number} rho
 * @param {number} texture_seed
 * @returns {Panels}
 */
export function frequencySplit(rho, texture_seed) {
    const ret = wasm.frequencySplit(rho, texture_seed);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return Panels.__wrap(ret[0]);
}

/**
 * @param {RelightParams} params
 * @returns {Panels}
 */
export function relight(params) {
    _assertClass(params, RelightParams);
    const ret = wasm.relight(params.__wbg_ptr);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return Panels.__wrap(ret[0]);
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg___wbindgen_throw_344f42d3211c4765: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_cast_0000000000000001: function(arg0, arg1) {
            // Cast intrinsic for `Ref(String) -> Externref`.
            const ret = getStringFromWasm0(arg0, arg1);
            return ret;
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./rcflow_web_bg.js": import0,
    };
}

const PanelsFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_panels_free(ptr, 1));
const RelightParamsFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_relightparams_free(ptr, 1));

function _assertClass(instance, klass) {
    if (!(instance instanceof klass)) {
        throw new Error(`expected instance of ${klass.name}`);
    }
}

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

function getArrayU8FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getUint8ArrayMemory0().subarray(ptr / 1, ptr / 1 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = module.ok && expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('rcflow_web_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
