// Browser wiring: config form, board strip, movement buttons, score.

import { GameClient } from "./api.js";
import { GameController } from "./controller.js";
import type { SessionRequest } from "./types.js";
import { BoardViewModel } from "./viewmodel.js";

let controller: GameController | null = null;
let watchTimer: number | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function serverBase(): Promise<string> {
  try {
    const response = await fetch("config.json");
    if (response.ok) {
      const config = await response.json();
      return config.server ?? "";
    }
  } catch {
    /* same-origin fallback */
  }
  return "";
}

function drawBoard(view: BoardViewModel): void {
  const board = el<HTMLDivElement>("board");
  board.innerHTML = "";
  if (view.status === "error") {
    const note = document.createElement("div");
    note.className = "error";
    note.textContent = view.error ?? "error";
    board.appendChild(note);
  }
  for (const cell of view.cells) {
    const box = document.createElement("div");
    box.className = cell.current ? "cell current" : "cell";
    const glyphs = document.createElement("div");
    glyphs.className = "glyphs";
    glyphs.textContent = cell.glyphs.join(" ");
    const caption = document.createElement("div");
    caption.className = "caption";
    const reach = cell.reachedBy.length ? ` A${cell.reachedBy.join(" A")}` : "";
    caption.textContent = `${cell.index}${reach}`;
    box.append(glyphs, caption);
    if (cell.rewardLabel !== null) {
      const reward = document.createElement("div");
      reward.className = "reward";
      reward.textContent = cell.rewardLabel;
      box.appendChild(reward);
    }
    board.appendChild(box);
  }

  const movements = el<HTMLDivElement>("movements");
  movements.innerHTML = "";
  for (const button of view.buttons) {
    const node = document.createElement("button");
    node.textContent = button.label;
    node.disabled = !button.enabled;
    node.addEventListener("click", () => submit(button.action));
    movements.appendChild(node);
  }

  el<HTMLSpanElement>("total").textContent = view.runningTotal.toFixed(4);
  const status = el<HTMLSpanElement>("status");
  if (view.status === "finished" && view.finalScore !== null) {
    status.textContent = `finished, average reward ${view.finalScore.toFixed(4)}`;
  } else {
    status.textContent = view.status;
  }
}

function toast(message: string): void {
  const node = el<HTMLDivElement>("toast");
  node.textContent = message;
  node.classList.add("visible");
  window.setTimeout(() => node.classList.remove("visible"), 2500);
}

async function submit(action: number | null): Promise<void> {
  if (!controller) return;
  try {
    drawBoard(await controller.play(action));
  } catch (failure) {
    toast(failure instanceof Error ? failure.message : String(failure));
    controller.clearError();
    drawBoard(controller.board());
  }
}

function stopWatching(): void {
  if (watchTimer !== null) {
    window.clearInterval(watchTimer);
    watchTimer = null;
  }
}

async function startSession(): Promise<void> {
  stopWatching();
  const agent = el<HTMLSelectElement>("agent").value as SessionRequest["agent"];
  const description = el<HTMLInputElement>("space").value.trim();
  const iterations = Number(el<HTMLInputElement>("iterations").value) || 10;
  const debug = el<HTMLInputElement>("debug").checked;
  const relocate = el<HTMLInputElement>("relocate").checked;
  const request: SessionRequest = {
    space: description
      ? { description }
      : { auto: { min_cells: 4, max_cells: 8, connectivity: "connected" } },
    agent,
    iterations,
    relocation: relocate ? "auto" : 0,
    debug,
  };
  const base = await serverBase();
  controller = new GameController(new GameClient(base), debug);
  try {
    await controller.start(request);
  } catch (failure) {
    toast(failure instanceof Error ? failure.message : String(failure));
    return;
  }
  el<HTMLSpanElement>("described").textContent = controller.spaceDescription;
  drawBoard(controller.board());
  if (controller.isWatch) {
    watchTimer = window.setInterval(async () => {
      if (!controller || controller.isFinished) {
        stopWatching();
        return;
      }
      try {
        drawBoard(await controller.step());
      } catch {
        stopWatching();
      }
    }, 700);
  }
}

document.addEventListener("DOMContentLoaded", () => {
  el<HTMLButtonElement>("start").addEventListener("click", () => void startSession());
});
