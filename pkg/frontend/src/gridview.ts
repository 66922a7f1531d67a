/** Authentication view state: the grid, the move queue, and the submit path.
 *
 * The server is authoritative: every move response carries the server's
 * replay of the whole transcript and the view adopts it, so the rendered
 * grid can never drift from what the server will judge. Locally applied
 * shifts exist only to start the ≤150 ms slide animation immediately; the
 * animation never blocks the queue — at most one move request is in flight
 * and further gestures queue up and post strictly in order.
 */

import {
  CELLS,
  COLS,
  Consequence,
  LOCKOUT_THRESHOLD,
  Move,
  MoveResponse,
  ROWS,
  SessionInfo,
  SubmitOutcome,
} from "./types.js";

export const ANIMATION_MS = 150;

/** Toroidal shift of one row or column; same semantics as the server. */
export function applyMoveTo(grid: string[], move: Move): string[] {
  if (grid.length !== CELLS) {
    throw new Error(`grid must hold ${CELLS} cells, got ${grid.length}`);
  }
  const out = grid.slice();
  const { axis, index, delta } = move;
  if (axis === "row") {
    for (let c = 0; c < COLS; c++) {
      const target = (((c + delta) % COLS) + COLS) % COLS;
      out[index * COLS + target] = grid[index * COLS + c] as string;
    }
  } else {
    for (let r = 0; r < ROWS; r++) {
      const target = (((r + delta) % ROWS) + ROWS) % ROWS;
      out[target * COLS + index] = grid[r * COLS + index] as string;
    }
  }
  return out;
}

export interface MoveTransport {
  postMove(sessionId: string, move: Move): Promise<MoveResponse>;
  submit(sessionId: string): Promise<SubmitOutcome>;
}

export interface AnimationState {
  move: Move;
  durationMs: number;
}

export class GridView {
  readonly sessionId: string;
  readonly consequence: Consequence;
  grid: string[];
  /** Moves must be refused until the consequence banner has been rendered. */
  bannerVisible = false;
  /** Set for the renderer when a shift starts; purely cosmetic state. */
  animation: AnimationState | null = null;
  /** How often the server's replay disagreed with the local shift. */
  resyncs = 0;
  transcriptLen = 0;
  outcome: SubmitOutcome | null = null;
  /** Neutral user feedback ("try again"), or a transport error message. */
  feedback: string | null = null;

  private queue: Move[] = [];
  private inFlight = false;
  private drainWaiters: Array<() => void> = [];

  constructor(private readonly transport: MoveTransport, session: SessionInfo) {
    this.sessionId = session.session_id;
    this.consequence = session.consequence;
    this.grid = [...session.grid];
  }

  /** Text for the consequence banner; rendering it unlocks move input. */
  showBanner(): string {
    this.bannerVisible = true;
    return this.consequence === "payment"
      ? "This sign-in will authorise a payment."
      : "This sign-in will unlock access.";
  }

  get settled(): boolean {
    return this.outcome !== null;
  }

  /** Queue one primitive move. The local grid shifts immediately for the
   * animation; the network post happens in queue order, one at a time. */
  enqueueMove(move: Move): void {
    if (!this.bannerVisible) {
      throw new Error("the consequence banner must be shown before the first move");
    }
    if (this.settled) {
      throw new Error("session already submitted");
    }
    this.queue.push(move);
    void this.pump();
  }

  private async pump(): Promise<void> {
    if (this.inFlight) {
      return;
    }
    const move = this.queue.shift();
    if (move === undefined) {
      const waiters = this.drainWaiters;
      this.drainWaiters = [];
      for (const resolve of waiters) {
        resolve();
      }
      return;
    }
    this.inFlight = true;
    this.animation = { move, durationMs: ANIMATION_MS };
    const predicted = applyMoveTo(this.grid, move);
    this.grid = predicted;
    try {
      const response = await this.transport.postMove(this.sessionId, move);
      this.transcriptLen = response.transcript_len;
      if (!sameGrid(predicted, response.grid)) {
        this.resyncs += 1;
      }
      this.grid = [...response.grid];
    } catch (error) {
      this.queue = [];
      this.feedback = error instanceof Error ? error.message : String(error);
    } finally {
      this.inFlight = false;
    }
    void this.pump();
  }

  /** Resolves once every queued move has been posted and answered. */
  flush(): Promise<void> {
    if (!this.inFlight && this.queue.length === 0) {
      return Promise.resolve();
    }
    return new Promise((resolve) => this.drainWaiters.push(resolve));
  }

  /** Double-tap path: wait for the transcript to finish posting, then ask
   * the server for its verdict. */
  async submitAttempt(): Promise<SubmitOutcome> {
    if (this.settled) {
      throw new Error("session already submitted");
    }
    await this.flush();
    const outcome = await this.transport.submit(this.sessionId);
    this.outcome = outcome;
    if (outcome.status === "rejected") {
      const remaining = Math.max(0, LOCKOUT_THRESHOLD - outcome.failures);
      this.feedback = outcome.locked
        ? "Account locked. Contact your administrator."
        : `That didn't match. Try again — ${remaining} attempt${remaining === 1 ? "" : "s"} left.`;
    }
    return outcome;
  }
}

function sameGrid(a: string[], b: string[]): boolean {
  return a.length === b.length && a.every((cell, i) => cell === b[i]);
}
