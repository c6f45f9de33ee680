/** Editor state transitions: the dirty/valid save gate and payload shape. */

import { describe, expect, it } from "vitest";

import {
  canSave,
  dataOutFromKey,
  dataOutKey,
  editPayload,
  isDirty,
  isValid,
  openEditor,
  parameterCount,
  problems,
  setDataOut,
  setNote,
  toggleDataIn,
  toggleLabel,
} from "../src/editor.js";
import type { MethodRow } from "../src/types.js";
import { loadFixture } from "./helpers.js";

const encodeRow = loadFixture<MethodRow>("method_encode.json");

describe("parameterCount", () => {
  it("counts comma-separated parameter types", () => {
    expect(parameterCount("a.B.m()")).toBe(0);
    expect(parameterCount("a.B.m(String)")).toBe(1);
    expect(parameterCount(encodeRow.signature)).toBe(2);
  });
});

describe("openEditor", () => {
  it("starts clean: not dirty, nothing to save", () => {
    const state = openEditor(encodeRow);

    expect(state.labels).toEqual(["sanitizer", "cwe89"]);
    expect(state.dataIn).toEqual([1]);
    expect(isDirty(state)).toBe(false);
    expect(canSave(state)).toBe(false);
  });
});

describe("label and flow transitions", () => {
  it("keeps toggled labels in taxonomy order", () => {
    const state = toggleLabel(openEditor(encodeRow), "source");

    expect(state.labels).toEqual(["source", "sanitizer", "cwe89"]);
  });

  it("unchecking a label makes the editor dirty and saveable", () => {
    const state = toggleLabel(openEditor(encodeRow), "sanitizer");

    expect(state.labels).toEqual(["cwe89"]);
    expect(isDirty(state)).toBe(true);
    expect(canSave(state)).toBe(true);
  });

  it("keeps data-in indexes sorted", () => {
    const state = toggleDataIn(openEditor(encodeRow), 0);

    expect(state.dataIn).toEqual([0, 1]);
  });

  it("re-toggling returns to the original state", () => {
    const there = toggleLabel(openEditor(encodeRow), "sanitizer");
    const back = toggleLabel(there, "sanitizer");

    expect(isDirty(back)).toBe(false);
    expect(canSave(back)).toBe(false);
  });

  it("maps an empty note to null", () => {
    const state = setNote(openEditor(encodeRow), "");

    expect(state.note).toBeNull();
    expect(isDirty(state)).toBe(true);
  });
});

describe("validity gate", () => {
  it("rejects data-in indexes outside the parameter range", () => {
    const state = toggleDataIn(openEditor(encodeRow), 7);

    expect(isValid(state)).toBe(false);
    expect(problems(state)).toEqual(["data-in parameter 7 is out of range"]);
    expect(canSave(state)).toBe(false);
  });

  it("rejects a data-out parameter outside the range, accepts one inside", () => {
    const bad = setDataOut(openEditor(encodeRow), { parameter: 5 });
    const good = setDataOut(openEditor(encodeRow), { parameter: 1 });

    expect(isValid(bad)).toBe(false);
    expect(isValid(good)).toBe(true);
    expect(canSave(good)).toBe(true);
  });

  it("blocks saving while a save is in flight", () => {
    const dirty = toggleLabel(openEditor(encodeRow), "sanitizer");

    expect(canSave({ ...dirty, saving: true })).toBe(false);
  });
});

describe("editPayload", () => {
  it("carries exactly the PATCH body fields", () => {
    const state = setNote(toggleLabel(openEditor(encodeRow), "sanitizer"), "checked by hand");

    expect(editPayload(state)).toEqual({
      labels: ["cwe89"],
      dataIn: [1],
      dataOut: "return",
      note: "checked by hand",
    });
  });
});

describe("dataOutKey", () => {
  it("round-trips every data-out shape", () => {
    for (const value of ["return", "none", { parameter: 3 }] as const) {
      expect(dataOutFromKey(dataOutKey(value))).toEqual(value);
    }
    expect(dataOutKey({ parameter: 0 })).toBe("parameter:0");
  });
});
