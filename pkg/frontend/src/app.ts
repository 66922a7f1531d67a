/** DOM bindings: everything here is a thin layer over the testable modules
 * (client, gestures, registration, gridview). No game logic lives in the DOM.
 */

import { ApiError, GridlockClient } from "./client.js";
import { GestureEvent, gestureToMove, PointerInterpreter, SUBMIT } from "./gestures.js";
import { ANIMATION_MS, GridView } from "./gridview.js";
import { RegistrationFlow } from "./registration.js";
import { COLS, Consequence, ROWS } from "./types.js";

const CELL_PX = 64;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function renderGrid(view: GridView, client: GridlockClient, accountId: string): HTMLElement {
  const board = el("div", "board");
  board.style.gridTemplateColumns = `repeat(${COLS}, ${CELL_PX}px)`;
  board.style.gridTemplateRows = `repeat(${ROWS}, ${CELL_PX}px)`;
  for (const imageId of view.grid) {
    const img = el("img", "cell");
    img.src = client.faceUrl(accountId, imageId);
    img.draggable = false;
    img.style.transition = `transform ${ANIMATION_MS}ms ease-out`;
    board.appendChild(img);
  }
  return board;
}

function repaint(board: HTMLElement, view: GridView, client: GridlockClient, accountId: string): void {
  const cells = board.querySelectorAll<HTMLImageElement>("img.cell");
  view.grid.forEach((imageId, i) => {
    const img = cells[i];
    if (img) {
      img.src = client.faceUrl(accountId, imageId);
    }
  });
}

/** Run one authentication session inside `root`. The consequence banner is
 * inserted — and move input unlocked — before any gesture handler exists. */
export async function startAuthentication(
  root: HTMLElement,
  client: GridlockClient,
  accountId: string,
  consequence: Consequence
): Promise<GridView> {
  const session = await client.openSession(accountId, consequence);
  const view = new GridView(client, session);

  root.replaceChildren();
  const banner = el("div", `banner banner-${view.consequence}`, view.showBanner());
  root.appendChild(banner);

  const board = renderGrid(view, client, accountId);
  root.appendChild(board);
  const status = el("p", "status", "Align your four faces, then double-tap.");
  root.appendChild(status);

  const rect = board.getBoundingClientRect();
  const pointer = new PointerInterpreter({
    left: rect.left,
    top: rect.top,
    cellWidth: CELL_PX,
    cellHeight: CELL_PX,
  });

  const act = async (gesture: GestureEvent | null): Promise<void> => {
    if (gesture === null || view.settled) {
      return;
    }
    const action = gestureToMove(gesture);
    if (action === null) {
      return;
    }
    try {
      if (action === SUBMIT) {
        const outcome = await view.submitAttempt();
        status.textContent =
          outcome.status === "accepted" ? "Accepted." : view.feedback ?? "Rejected.";
      } else {
        view.enqueueMove(action);
        await view.flush();
        repaint(board, view, client, accountId);
      }
    } catch (error) {
      status.textContent = error instanceof ApiError ? error.message : String(error);
    }
  };

  board.addEventListener("pointerdown", (e) => pointer.pointerDown(e.clientX, e.clientY, e.timeStamp));
  board.addEventListener("pointerup", (e) => void act(pointer.pointerUp(e.clientX, e.clientY, e.timeStamp)));
  // Desktop fallback: a double-click submits even if the two clicks were
  // classified as separate slow taps.
  board.addEventListener("dblclick", () => void act({ kind: "double_tap", index: 0 }));
  return view;
}

/** Single-screen registration: scrollable face list, tap to select toward
 * 45, a per-face badge button to order it into the 4-image secret. */
export async function startRegistration(
  root: HTMLElement,
  client: GridlockClient,
  accountId: string
): Promise<RegistrationFlow> {
  const index = await client.faceIndex(accountId);
  const flow = new RegistrationFlow(index.faces.map((face) => face.image_id));

  root.replaceChildren();
  const counter = el("p", "counter");
  const list = el("div", "face-list");
  const errorLine = el("p", "error");
  const done = el("button", "complete", "Complete registration");

  const refresh = (): void => {
    counter.textContent = `${flow.selectionCount}/45 selected, ${flow.secretCount}/4 secret`;
    done.disabled = !flow.complete;
    errorLine.textContent = flow.lastError ?? "";
    list.querySelectorAll<HTMLElement>(".face").forEach((tile) => {
      const id = tile.dataset.imageId ?? "";
      tile.classList.toggle("selected", flow.isSelected(id));
      const badge = tile.querySelector<HTMLElement>(".badge");
      if (badge) {
        const position = flow.secretPosition(id);
        badge.textContent = position === null ? "+" : String(position);
      }
    });
  };

  for (const face of index.faces) {
    const tile = el("div", "face");
    tile.dataset.imageId = face.image_id;
    const img = el("img");
    img.src = client.faceUrl(accountId, face.image_id);
    img.draggable = false;
    img.addEventListener("click", () => {
      flow.toggleSelect(face.image_id);
      refresh();
    });
    const badge = el("button", "badge", "+");
    badge.addEventListener("click", (e) => {
      e.stopPropagation();
      flow.toggleSecret(face.image_id);
      refresh();
    });
    tile.append(img, badge);
    list.appendChild(tile);
  }

  done.addEventListener("click", () => {
    void (async () => {
      try {
        const payload = flow.payload();
        await client.register(accountId, payload.image_ids, payload.secret);
        root.replaceChildren(el("p", "status", "Registration complete."));
      } catch (error) {
        flow.lastError = error instanceof ApiError ? error.message : String(error);
        refresh();
      }
    })();
  });

  root.append(counter, list, errorLine, done);
  refresh();
  return flow;
}
