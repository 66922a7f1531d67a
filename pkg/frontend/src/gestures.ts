/** Gesture recognition and the gesture→move mapping.
 *
 * Swiping a row moves it one cell in the swipe direction; swiping a column
 * likewise. A double-tap submits the attempt. One pointer press yields at
 * most one gesture — there is no inertia, so a long drag still emits exactly
 * one primitive move.
 */

import { Axis, COLS, Move, ROWS } from "./types.js";

export type GestureKind =
  | "swipe_left"
  | "swipe_right"
  | "swipe_up"
  | "swipe_down"
  | "double_tap";

export interface GestureEvent {
  kind: GestureKind;
  /** Row index for horizontal swipes, column index for vertical ones;
   * irrelevant for double_tap. */
  index: number;
}

export const SUBMIT = "submit";
export type GestureAction = Move | typeof SUBMIT;

function boundFor(axis: Axis): number {
  return axis === "row" ? ROWS : COLS;
}

function move(axis: Axis, index: number, delta: 1 | -1): Move | null {
  if (!Number.isInteger(index) || index < 0 || index >= boundFor(axis)) {
    return null; // gesture landed outside the grid: ignored
  }
  return { axis, index, delta };
}

/** Map one gesture to its primitive move, to a submit action, or to null
 * when the gesture targets nothing valid. */
export function gestureToMove(event: GestureEvent): GestureAction | null {
  switch (event.kind) {
    case "swipe_right":
      return move("row", event.index, 1);
    case "swipe_left":
      return move("row", event.index, -1);
    case "swipe_down":
      return move("col", event.index, 1);
    case "swipe_up":
      return move("col", event.index, -1);
    case "double_tap":
      return SUBMIT;
  }
}

export interface GridMetrics {
  /** Top-left corner of the grid in the same coordinate space as pointer
   * events (e.g. client coordinates). */
  left: number;
  top: number;
  cellWidth: number;
  cellHeight: number;
}

export const DOUBLE_TAP_MS = 300;

interface PointerSample {
  x: number;
  y: number;
  timeMs: number;
}

/** Turns raw pointer down/up pairs into GestureEvents.
 *
 * A press that travels at least half a cell in its dominant direction is a
 * swipe on the row/column where it started; anything shorter is a tap, and
 * two taps on the same cell within DOUBLE_TAP_MS make a double_tap. Presses
 * starting outside the grid are ignored entirely.
 */
export class PointerInterpreter {
  private down: PointerSample | null = null;
  private lastTap: PointerSample | null = null;

  constructor(private readonly metrics: GridMetrics) {}

  private inside(x: number, y: number): boolean {
    const { left, top, cellWidth, cellHeight } = this.metrics;
    return (
      x >= left && x < left + COLS * cellWidth && y >= top && y < top + ROWS * cellHeight
    );
  }

  private rowAt(y: number): number {
    return Math.floor((y - this.metrics.top) / this.metrics.cellHeight);
  }

  private colAt(x: number): number {
    return Math.floor((x - this.metrics.left) / this.metrics.cellWidth);
  }

  pointerDown(x: number, y: number, timeMs: number): void {
    this.down = this.inside(x, y) ? { x, y, timeMs } : null;
  }

  pointerUp(x: number, y: number, timeMs: number): GestureEvent | null {
    const down = this.down;
    this.down = null; // one gesture per press, never a repeat
    if (down === null) {
      return null;
    }
    const dx = x - down.x;
    const dy = y - down.y;
    const pastHalfCellX = Math.abs(dx) >= this.metrics.cellWidth / 2;
    const pastHalfCellY = Math.abs(dy) >= this.metrics.cellHeight / 2;

    if (!pastHalfCellX && !pastHalfCellY) {
      // A tap. Two of them in quick succession on the same cell submit.
      const last = this.lastTap;
      if (
        last !== null &&
        timeMs - last.timeMs <= DOUBLE_TAP_MS &&
        this.rowAt(last.y) === this.rowAt(down.y) &&
        this.colAt(last.x) === this.colAt(down.x)
      ) {
        this.lastTap = null;
        return { kind: "double_tap", index: 0 };
      }
      this.lastTap = { x: down.x, y: down.y, timeMs };
      return null;
    }

    this.lastTap = null;
    if (Math.abs(dx) >= Math.abs(dy)) {
      return { kind: dx > 0 ? "swipe_right" : "swipe_left", index: this.rowAt(down.y) };
    }
    return { kind: dy > 0 ? "swipe_down" : "swipe_up", index: this.colAt(down.x) };
  }
}
