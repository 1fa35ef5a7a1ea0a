/* tslint:disable */
/* eslint-disable */

/**
 * A message key held inside the module.
 */
export class Key {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    static fromB64(key_id: string, key_b64: string): Key;
    /**
     * Key material for registration with the key service.
     */
    toB64(): string;
    readonly keyId: string;
}

/**
 * Collects a message in the page before encryption.
 */
export class MessageBuilder {
    free(): void;
    [Symbol.dispose](): void;
    addAttachment(filename: string, data: Uint8Array): void;
    /**
     * Encrypts every part and returns the ciphertext bundle as JSON, in the
     * shape accepted by `POST /messages`.
     */
    encrypt(key: Key, message_id: string, sender_id: string): string;
    constructor(subject: string, body: string);
}

/**
 * A decrypted message. Nothing is exposed unless every part authenticated.
 */
export class Opened {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    attachmentData(index: number): Uint8Array | undefined;
    attachmentName(index: number): string | undefined;
    readonly attachmentCount: number;
    readonly body: string;
    readonly subject: string;
}

/**
 * Canonical associated data for a part. A negative `index` means the body.
 */
export function associatedData(message_id: string, sender_id: string, index: number): Uint8Array;

/**
 * Times one benchmark cell with `performance.now` and returns the samples
 * as JSON.
 */
export function benchCell(op: string, size_bytes: number, repetitions: number, seed: bigint): string;

/**
 * Turns collected samples into the results CSV.
 */
export function benchCsv(samples_json: string, repetitions: number): string;

/**
 * Normalized-time chart for collected samples.
 */
export function benchSvg(samples_json: string, repetitions: number): string;

/**
 * Decrypts a bundle produced by [`MessageBuilder::encrypt`].
 */
export function decryptMessage(encrypted_json: string, key: Key): Opened;

/**
 * Decrypts the payload embedded in the reading page.
 */
export function decryptPosted(payload_json: string, key: Key): Opened;

export function generateKey(): Key;

/**
 * `true` when `message` names a failed integrity check, so the page can
 * show a tamper warning instead of a generic error.
 */
export function isTamperError(message: string): boolean;

export function open(envelope: Uint8Array, key: Key): Uint8Array;

/**
 * Seals `plaintext` and returns the binary envelope.
 */
export function seal(plaintext: Uint8Array, key: Key, ad: Uint8Array): Uint8Array;

/**
 * Seals `text`, applies one manipulation and tries to open the result.
 * Returns a JSON report.
 */
export function tamperLab(text: string, kind: string, position: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_key_free: (a: number, b: number) => void;
    readonly __wbg_messagebuilder_free: (a: number, b: number) => void;
    readonly __wbg_opened_free: (a: number, b: number) => void;
    readonly associatedData: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly benchCell: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number, number];
    readonly benchCsv: (a: number, b: number, c: number) => [number, number, number, number];
    readonly benchSvg: (a: number, b: number, c: number) => [number, number, number, number];
    readonly decryptMessage: (a: number, b: number, c: number) => [number, number, number];
    readonly decryptPosted: (a: number, b: number, c: number) => [number, number, number];
    readonly generateKey: () => [number, number, number];
    readonly isTamperError: (a: number, b: number) => number;
    readonly key_fromB64: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly key_keyId: (a: number) => [number, number];
    readonly key_toB64: (a: number) => [number, number];
    readonly messagebuilder_addAttachment: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly messagebuilder_encrypt: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly messagebuilder_new: (a: number, b: number, c: number, d: number) => number;
    readonly open: (a: number, b: number, c: number) => [number, number, number, number];
    readonly opened_attachmentCount: (a: number) => number;
    readonly opened_attachmentData: (a: number, b: number) => [number, number];
    readonly opened_attachmentName: (a: number, b: number) => [number, number];
    readonly opened_body: (a: number) => [number, number];
    readonly opened_subject: (a: number) => [number, number];
    readonly seal: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly tamperLab: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_exn_store: (a: number) => void;
    readonly __externref_table_alloc: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
