// Pure view logic: observation payload in, board view model out.
//
// The cells form a single horizontal strip; exactly one carries the
// thick border (the examinee's cell). Occupants render as glyphs in
// the order the server sends them (evaluables, then the positive and
// negative droppers, then objects). Reward labels exist only when the
// session runs with the debug flag; the client never recomputes game
// rules, it only accumulates the rewards the gateway delivered.

import type { ObservationPayload } from "./types.js";

export const GLYPHS: Record<string, string> = {
  evaluable: "π", // pi
  good: "⊕", // circled plus
  evil: "⊖", // circled minus
  object: "ω", // omega
};

export interface CellView {
  index: number;
  glyphs: string[];
  current: boolean;
  rewardLabel: string | null;
  reachedBy: number[];
}

export interface ActionButton {
  action: number;
  label: string;
  enabled: boolean;
}

export interface BoardViewModel {
  cells: CellView[];
  buttons: ActionButton[];
  runningTotal: number;
  status: "awaiting_action" | "finished" | "error";
  finalScore: number | null;
  error: string | null;
}

export interface BoardContext {
  actions: number[];
  watch: boolean;
  debug: boolean;
  runningTotal: number;
  finished: boolean;
  finalScore?: number | null;
  busy?: boolean;
}

export function errorBoard(message: string, runningTotal = 0): BoardViewModel {
  return {
    cells: [],
    buttons: [],
    runningTotal,
    status: "error",
    finalScore: null,
    error: message,
  };
}

export function actionLabel(action: number): string {
  return action === 0 ? "0 (stay)" : String(action);
}

export function renderBoard(
  observation: ObservationPayload | null,
  context: BoardContext,
): BoardViewModel {
  try {
    if (!observation || !Array.isArray(observation.cells)) {
      throw new Error("malformed observation payload");
    }
    const currents = observation.cells.filter(
      (cell) => cell.index === observation.current_cell,
    );
    if (currents.length !== 1) {
      throw new Error("the examinee's cell is missing from the payload");
    }
    const debugRewards = context.debug ? observation.debug_rewards ?? null : null;
    const cells: CellView[] = observation.cells.map((cell) => ({
      index: cell.index,
      glyphs: cell.occupants.map((occupant) => GLYPHS[occupant.role] ?? "?"),
      current: cell.index === observation.current_cell,
      rewardLabel:
        debugRewards === null ? null : debugRewards[cell.index - 1].toFixed(4),
      reachedBy: cell.reachable_actions.slice(),
    }));
    const enabled = !context.watch && !context.finished && !context.busy;
    return {
      cells,
      buttons: context.actions.map((action) => ({
        action,
        label: actionLabel(action),
        enabled,
      })),
      runningTotal: context.runningTotal,
      status: context.finished ? "finished" : "awaiting_action",
      finalScore: context.finished ? context.finalScore ?? null : null,
      error: null,
    };
  } catch (failure) {
    return errorBoard(
      failure instanceof Error ? failure.message : String(failure),
      context.runningTotal,
    );
  }
}
