// Wire types of the session gateway (strictly what the JSON carries).

export interface OccupantPayload {
  role: "evaluable" | "good" | "evil" | "object";
  name: string;
}

export interface CellPayload {
  index: number;
  occupants: OccupantPayload[];
  reachable_actions: number[];
}

export interface ObservationPayload {
  cells: CellPayload[];
  current_cell: number;
  debug_rewards?: number[];
}

export interface CreateSessionResponse {
  session_id: string;
  seed: number;
  space_description: string;
  observation: ObservationPayload;
  actions: number[];
  status: "awaiting_action" | "finished";
  watch: boolean;
}

export interface ActionResponse {
  reward: number;
  observation: ObservationPayload;
  done: boolean;
  score?: number;
}

export interface ResultResponse {
  cumulative_reward: number;
  interactions: number;
  average_reward: number;
  done: boolean;
}

export interface TicketResponse {
  session_id: string;
  status: "awaiting_action" | "finished";
  interaction_index: number;
  cumulative_reward: number;
  done: boolean;
}

export interface SessionRequest {
  space: { description?: string; auto?: Record<string, unknown> };
  agent: "human" | "random" | "observer";
  iterations?: number;
  time_ms?: number;
  relocation: number | "auto";
  generator?: { mode: string; pattern?: number[]; moves?: number };
  debug: boolean;
  seed?: number;
}
