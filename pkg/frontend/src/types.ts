/** Wire types shared with the gridlock HTTP service. Field names follow the
 * JSON bodies verbatim so a response can be used without re-mapping. */

export const ROWS = 5;
export const COLS = 9;
export const CELLS = ROWS * COLS;
export const LIBRARY_SIZE = 45;
export const SECRET_SIZE = 4;
export const LOCKOUT_THRESHOLD = 3;

export type Axis = "row" | "col";

export interface Move {
  axis: Axis;
  index: number;
  delta: number;
}

export type Consequence = "access" | "payment";

export interface SessionInfo {
  session_id: string;
  /** Row-major list of 45 image ids, row 0 first. */
  grid: string[];
  consequence: Consequence;
}

export interface MoveResponse {
  transcript_len: number;
  /** The server's replay of the whole transcript — authoritative. */
  grid: string[];
}

export interface SubmitOutcome {
  status: "accepted" | "rejected";
  failures: number;
  locked: boolean;
}

export interface FaceEntry {
  image_id: string;
  source: string;
  path: string;
}

export interface FaceIndex {
  faces: FaceEntry[];
}

export interface BootstrapRequest {
  mode: "jack" | "jill";
  manifest?: string;
  corpus?: string;
  friends?: string;
  workers?: number;
}

export interface BootstrapStatus {
  status: "running" | "done" | "failed";
  results_so_far: FaceEntry[];
  skipped: unknown[];
  error: string | null;
}

export interface ErrorEnvelope {
  error: { code: string; message: string };
}
