/** Spawns a real gridlock service for end-to-end tests and tears it down. */

import { ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { randomBytes } from "node:crypto";

export interface LiveService {
  baseUrl: string;
  dataDir: string;
  stop: () => void;
}

const sleep = (ms: number): Promise<void> => new Promise((resolve) => setTimeout(resolve, ms));

export async function startService(port: number): Promise<LiveService> {
  const dataDir = mkdtempSync(join(tmpdir(), "gridlock-ui-e2e-"));
  const child: ChildProcess = spawn(
    "python3",
    ["-m", "gridlock.cli", "serve", "--listen", `127.0.0.1:${port}`],
    {
      env: { ...process.env, DATA_DIR: dataDir },
      stdio: ["ignore", "pipe", "pipe"],
    }
  );
  let log = "";
  child.stdout?.on("data", (chunk: Buffer) => (log += chunk.toString()));
  child.stderr?.on("data", (chunk: Buffer) => (log += chunk.toString()));

  const baseUrl = `http://127.0.0.1:${port}`;
  for (let attempt = 0; attempt < 120; attempt++) {
    if (child.exitCode !== null) {
      throw new Error(`service exited early (code ${child.exitCode}):\n${log}`);
    }
    try {
      const response = await fetch(`${baseUrl}/healthz`);
      if (response.ok) {
        return { baseUrl, dataDir, stop: () => child.kill("SIGTERM") };
      }
    } catch {
      // not listening yet
    }
    await sleep(250);
  }
  child.kill("SIGTERM");
  throw new Error(`service never became healthy:\n${log}`);
}

/** Write a corpus of random photos with face sidecars the detector reads.
 * Returns the corpus directory. */
export function writeCorpus(count: number): string {
  const corpus = mkdtempSync(join(tmpdir(), "gridlock-ui-corpus-"));
  const width = 24;
  const height = 24;
  for (let i = 0; i < count; i++) {
    const header = Buffer.from(`P6\n${width} ${height}\n255\n`, "ascii");
    const pixels = randomBytes(width * height * 3);
    const photo = join(corpus, `friend-${String(i).padStart(2, "0")}.ppm`);
    writeFileSync(photo, Buffer.concat([header, pixels]));
    writeFileSync(`${photo}.faces.json`, JSON.stringify([{ x: 3, y: 3, w: 16, h: 16 }]));
  }
  return corpus;
}
