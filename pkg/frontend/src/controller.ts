// Session flow: one in-flight request, totals straight from the wire.
//
// The controller owns everything the page shows. It keeps exactly one
// outstanding action per session (a second submit while one is pending
// is refused locally; the server would 409 it anyway) and the running
// total is the plain sum of the rewards the gateway delivered.

import { GameClient } from "./api.js";
import type { ObservationPayload, SessionRequest } from "./types.js";
import { BoardViewModel, errorBoard, renderBoard } from "./viewmodel.js";

export interface PlayedMove {
  action: number | null;
  reward: number;
}

export class GameController {
  private sessionId = "";
  private observation: ObservationPayload | null = null;
  private actions: number[] = [];
  private watch = false;
  private finished = false;
  private finalScore: number | null = null;
  private busy = false;
  private total = 0;
  private lastError: string | null = null;

  readonly moves: PlayedMove[] = [];
  seed = 0;
  spaceDescription = "";

  constructor(private client: GameClient, private debug: boolean = false) {}

  async start(request: SessionRequest): Promise<void> {
    this.debug = request.debug;
    const created = await this.client.createSession(request);
    this.sessionId = created.session_id;
    this.observation = created.observation;
    this.actions = created.actions;
    this.watch = created.watch;
    this.seed = created.seed;
    this.spaceDescription = created.space_description;
    this.finished = false;
    this.finalScore = null;
    this.total = 0;
    this.moves.length = 0;
    this.lastError = null;
  }

  get id(): string {
    return this.sessionId;
  }

  get isWatch(): boolean {
    return this.watch;
  }

  get isFinished(): boolean {
    return this.finished;
  }

  get runningTotal(): number {
    return this.total;
  }

  board(): BoardViewModel {
    if (this.lastError !== null) {
      return errorBoard(this.lastError, this.total);
    }
    return renderBoard(this.observation, {
      actions: this.actions,
      watch: this.watch,
      debug: this.debug,
      runningTotal: this.total,
      finished: this.finished,
      finalScore: this.finalScore,
      busy: this.busy,
    });
  }

  /** Submit the examinee's action (or advance a watch session with null). */
  async play(action: number | null): Promise<BoardViewModel> {
    if (this.busy) {
      throw new Error("an action is already in flight");
    }
    if (this.finished) {
      throw new Error("the session is finished");
    }
    this.busy = true;
    try {
      const response = await this.client.submitAction(this.sessionId, action);
      this.total += response.reward;
      this.moves.push({ action, reward: response.reward });
      this.observation = response.observation;
      this.finished = response.done;
      this.finalScore = response.score ?? null;
      this.lastError = null;
    } catch (failure) {
      // Leave the board consistent and replayable after a refusal.
      this.lastError = failure instanceof Error ? failure.message : String(failure);
      throw failure;
    } finally {
      this.busy = false;
    }
    return this.board();
  }

  /** Watch-mode step: the synthetic examinee acts by itself. */
  step(): Promise<BoardViewModel> {
    return this.play(null);
  }

  clearError(): void {
    this.lastError = null;
  }

  /** Server-side totals, for cross-checking the local running sum. */
  async fetchResult() {
    return this.client.result(this.sessionId);
  }
}
