/**
 * Editor state for one method's classification and flow properties.
 *
 * Pure data + transition functions: the controller applies them and
 * re-renders. Invariant: saving is possible only when the state is dirty
 * (differs from the row it was opened from) and valid (flow positions fit
 * the method's arity).
 */

import { TAXONOMY } from "./types.js";
import type { DataOut, MethodEdit, MethodRow } from "./types.js";

export interface InlineError {
  path: string | null;
  message: string;
}

export interface EditorState {
  signature: string;
  parameterCount: number;
  /** The row the editor was opened from; dirtiness is measured against it. */
  original: MethodRow;
  labels: string[];
  dataIn: number[];
  dataOut: DataOut;
  note: string | null;
  error: InlineError | null;
  saving: boolean;
}

/** Number of parameters in a canonical `package.Class.method(T1,T2)` signature. */
export function parameterCount(signature: string): number {
  const open = signature.indexOf("(");
  const inner = signature.slice(open + 1, signature.lastIndexOf(")"));
  return inner === "" ? 0 : inner.split(",").length;
}

export function openEditor(row: MethodRow): EditorState {
  return {
    signature: row.signature,
    parameterCount: parameterCount(row.signature),
    original: row,
    labels: [...row.labels],
    dataIn: [...row.dataIn],
    dataOut: row.dataOut,
    note: row.note,
    error: null,
    saving: false,
  };
}

/** Toggle one taxonomy checkbox; the result keeps taxonomy order. */
export function toggleLabel(state: EditorState, label: string): EditorState {
  const chosen = new Set(state.labels);
  if (chosen.has(label)) {
    chosen.delete(label);
  } else {
    chosen.add(label);
  }
  return { ...state, labels: TAXONOMY.filter((name) => chosen.has(name)), error: null };
}

/** Toggle one data-in parameter checkbox; the result stays sorted. */
export function toggleDataIn(state: EditorState, index: number): EditorState {
  const chosen = new Set(state.dataIn);
  if (chosen.has(index)) {
    chosen.delete(index);
  } else {
    chosen.add(index);
  }
  return { ...state, dataIn: [...chosen].sort((a, b) => a - b), error: null };
}

export function setDataOut(state: EditorState, dataOut: DataOut): EditorState {
  return { ...state, dataOut, error: null };
}

export function setNote(state: EditorState, note: string): EditorState {
  return { ...state, note: note === "" ? null : note, error: null };
}

function sameDataOut(a: DataOut, b: DataOut): boolean {
  if (typeof a === "string" || typeof b === "string") {
    return a === b;
  }
  return a.parameter === b.parameter;
}

export function isDirty(state: EditorState): boolean {
  const { original } = state;
  return (
    state.labels.join("|") !== original.labels.join("|") ||
    state.dataIn.join("|") !== original.dataIn.join("|") ||
    !sameDataOut(state.dataOut, original.dataOut) ||
    state.note !== original.note
  );
}

/** Human-readable validity problems; empty means the state can be saved. */
export function problems(state: EditorState): string[] {
  const found: string[] = [];
  for (const index of state.dataIn) {
    if (index < 0 || index >= state.parameterCount) {
      found.push(`data-in parameter ${index} is out of range`);
    }
  }
  if (typeof state.dataOut !== "string") {
    const { parameter } = state.dataOut;
    if (parameter < 0 || parameter >= state.parameterCount) {
      found.push(`data-out parameter ${parameter} is out of range`);
    }
  }
  return found;
}

export function isValid(state: EditorState): boolean {
  return problems(state).length === 0;
}

/** The save gate: dirty, valid, and not already saving. */
export function canSave(state: EditorState): boolean {
  return isDirty(state) && isValid(state) && !state.saving;
}

/** Body for `PATCH /api/methods/{signature}`. */
export function editPayload(state: EditorState): MethodEdit {
  return {
    labels: state.labels,
    dataIn: state.dataIn,
    dataOut: state.dataOut,
    note: state.note,
  };
}

/** Stable `<select>` value for a data-out choice. */
export function dataOutKey(dataOut: DataOut): string {
  return typeof dataOut === "string" ? dataOut : `parameter:${dataOut.parameter}`;
}

/** Inverse of {@link dataOutKey}. */
export function dataOutFromKey(key: string): DataOut {
  if (key === "return" || key === "none") {
    return key;
  }
  return { parameter: Number(key.split(":")[1]) };
}
