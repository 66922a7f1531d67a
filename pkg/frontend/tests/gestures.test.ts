import { describe, expect, it } from "vitest";

import {
  DOUBLE_TAP_MS,
  GestureEvent,
  gestureToMove,
  PointerInterpreter,
  SUBMIT,
} from "../src/gestures.js";

const gesture = (kind: GestureEvent["kind"], index = 0): GestureEvent => ({ kind, index });

describe("gestureToMove", () => {
  it("maps swipe_right on row r to a +1 row move", () => {
    expect(gestureToMove(gesture("swipe_right", 2))).toEqual({ axis: "row", index: 2, delta: 1 });
  });

  it("maps swipe_left on row r to a -1 row move", () => {
    expect(gestureToMove(gesture("swipe_left", 4))).toEqual({ axis: "row", index: 4, delta: -1 });
  });

  it("maps swipe_down on column c to a +1 column move", () => {
    expect(gestureToMove(gesture("swipe_down", 8))).toEqual({ axis: "col", index: 8, delta: 1 });
  });

  it("maps swipe_up on column c to a -1 column move", () => {
    expect(gestureToMove(gesture("swipe_up", 7))).toEqual({ axis: "col", index: 7, delta: -1 });
  });

  it("maps double_tap to submit with no move emitted", () => {
    expect(gestureToMove(gesture("double_tap"))).toBe(SUBMIT);
  });

  it("ignores gestures outside the grid", () => {
    expect(gestureToMove(gesture("swipe_right", 5))).toBeNull(); // only rows 0..4
    expect(gestureToMove(gesture("swipe_down", 9))).toBeNull(); // only cols 0..8
    expect(gestureToMove(gesture("swipe_up", -1))).toBeNull();
  });
});

describe("PointerInterpreter", () => {
  // 9 * 40 wide, 5 * 40 tall, origin at (100, 50); half a cell is 20px.
  const metrics = { left: 100, top: 50, cellWidth: 40, cellHeight: 40 };
  const press = (
    interpreter: PointerInterpreter,
    from: [number, number],
    to: [number, number],
    at = 0
  ): GestureEvent | null => {
    interpreter.pointerDown(from[0], from[1], at);
    return interpreter.pointerUp(to[0], to[1], at + 80);
  };

  it("recognises a half-cell horizontal drag as a swipe on the start row", () => {
    const interpreter = new PointerInterpreter(metrics);
    // start inside row 1 (y = 50 + 40..80), drag 20px right
    expect(press(interpreter, [110, 95], [130, 95])).toEqual({ kind: "swipe_right", index: 1 });
    expect(press(interpreter, [130, 95], [110, 97])).toEqual({ kind: "swipe_left", index: 1 });
  });

  it("recognises vertical drags as column swipes on the start column", () => {
    const interpreter = new PointerInterpreter(metrics);
    // start inside column 3 (x = 100 + 120..160)
    expect(press(interpreter, [225, 60], [226, 90])).toEqual({ kind: "swipe_down", index: 3 });
    expect(press(interpreter, [225, 90], [224, 60])).toEqual({ kind: "swipe_up", index: 3 });
  });

  it("treats sub-threshold drags as taps, not swipes", () => {
    const interpreter = new PointerInterpreter(metrics);
    expect(press(interpreter, [110, 95], [129, 95])).toBeNull(); // 19px < half cell
  });

  it("emits double_tap for two quick taps on the same cell", () => {
    const interpreter = new PointerInterpreter(metrics);
    expect(press(interpreter, [110, 95], [110, 95], 0)).toBeNull();
    expect(press(interpreter, [112, 93], [112, 93], 100)).toEqual({
      kind: "double_tap",
      index: 0,
    });
  });

  it("does not pair slow taps or taps on different cells", () => {
    const interpreter = new PointerInterpreter(metrics);
    expect(press(interpreter, [110, 95], [110, 95], 0)).toBeNull();
    expect(press(interpreter, [110, 95], [110, 95], DOUBLE_TAP_MS + 200)).toBeNull();

    expect(press(interpreter, [110, 95], [110, 95], 1000)).toBeNull();
    expect(press(interpreter, [190, 95], [190, 95], 1060)).toBeNull(); // other column
  });

  it("emits exactly one gesture per press, with no inertia repeats", () => {
    const interpreter = new PointerInterpreter(metrics);
    interpreter.pointerDown(110, 95, 0);
    expect(interpreter.pointerUp(300, 95, 50)).toEqual({ kind: "swipe_right", index: 1 });
    // a second up without a fresh down is noise from the same press
    expect(interpreter.pointerUp(400, 95, 60)).toBeNull();
  });

  it("ignores presses that start outside the grid", () => {
    const interpreter = new PointerInterpreter(metrics);
    expect(press(interpreter, [10, 95], [80, 95])).toBeNull();
    expect(press(interpreter, [110, 20], [110, 49])).toBeNull();
  });
});
