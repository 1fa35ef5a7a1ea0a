/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_key_free: (a: number, b: number) => void;
export const __wbg_messagebuilder_free: (a: number, b: number) => void;
export const __wbg_opened_free: (a: number, b: number) => void;
export const associatedData: (a: number, b: number, c: number, d: number, e: number) => [number, number];
export const benchCell: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number, number];
export const benchCsv: (a: number, b: number, c: number) => [number, number, number, number];
export const benchSvg: (a: number, b: number, c: number) => [number, number, number, number];
export const decryptMessage: (a: number, b: number, c: number) => [number, number, number];
export const decryptPosted: (a: number, b: number, c: number) => [number, number, number];
export const generateKey: () => [number, number, number];
export const isTamperError: (a: number, b: number) => number;
export const key_fromB64: (a: number, b: number, c: number, d: number) => [number, number, number];
export const key_keyId: (a: number) => [number, number];
export const key_toB64: (a: number) => [number, number];
export const messagebuilder_addAttachment: (a: number, b: number, c: number, d: number, e: number) => [number, number];
export const messagebuilder_encrypt: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const messagebuilder_new: (a: number, b: number, c: number, d: number) => number;
export const open: (a: number, b: number, c: number) => [number, number, number, number];
export const opened_attachmentCount: (a: number) => number;
export const opened_attachmentData: (a: number, b: number) => [number, number];
export const opened_attachmentName: (a: number, b: number) => [number, number];
export const opened_body: (a: number) => [number, number];
export const opened_subject: (a: number) => [number, number];
export const seal: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const tamperLab: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const __wbindgen_exn_store: (a: number) => void;
export const __externref_table_alloc: () => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
