"""Turn-based session service for human examinees and remote agents.

A created session advances to its first action request and then freezes:
the synthetic co-agents only act when the examinee's action arrives, so
the world never moves between requests.  One action may be outstanding
per session at a time; a concurrent second request is rejected, not
queued.  Sessions expire after an idle timeout.

Sessions whose evaluated agent is synthetic ("watch" sessions) advance
one interaction per step request instead of taking an action.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Any, Mapping

from .agents import GeneratorBehavior
from .generate import GenerationLimits
from .session import (
    AgentSpec,
    ExternalPolicy,
    Observation,
    ObserverPolicy,
    RandomPolicy,
    SessionConfig,
    SessionError,
    SessionState,
    begin_interaction,
    complete_interaction,
    init_session,
    snapshot_observation,
)
from .space import ConnectivityClass

EVALUATED = "examinee"
DEFAULT_IDLE_TIMEOUT = 30 * 60.0


class ServiceError(Exception):
    status = 400


class UnknownSessionError(ServiceError):
    status = 404


class SessionBusyError(ServiceError):
    status = 409


class SessionFinishedError(ServiceError):
    status = 409


class BadRequestError(ServiceError):
    status = 422


@dataclass
class _LiveSession:
    config: SessionConfig
    state: SessionState
    watch: bool
    debug: bool
    lock: threading.Lock = field(default_factory=threading.Lock)
    done: bool = False
    last_touch: float = 0.0
    observation_sent_at: float = 0.0


def _parse_space(payload: Mapping[str, Any]):
    if "description" in payload and payload["description"] is not None:
        return payload["description"]
    auto = payload.get("auto")
    if auto is None:
        raise BadRequestError("space needs either a description or auto limits")
    connectivity = {
        "connected": ConnectivityClass.CONNECTED,
        "strong": ConnectivityClass.STRONGLY_CONNECTED,
        "strongly_connected": ConnectivityClass.STRONGLY_CONNECTED,
    }.get(auto.get("connectivity", "connected"))
    if connectivity is None:
        raise BadRequestError(f"unknown connectivity {auto.get('connectivity')!r}")
    try:
        return GenerationLimits(
            min_cells=int(auto.get("min_cells", 2)),
            max_cells=None if auto.get("max_cells") is None else int(auto["max_cells"]),
            min_actions=int(auto.get("min_actions", 2)),
            max_actions=int(auto.get("max_actions", 10)),
            connectivity=connectivity,
        )
    except ValueError as exc:
        raise BadRequestError(str(exc)) from exc


def _parse_generator(payload: Mapping[str, Any] | None) -> GeneratorBehavior:
    if not payload:
        return GeneratorBehavior()
    try:
        return GeneratorBehavior(
            mode=payload.get("mode", "random"),
            pattern=tuple(payload.get("pattern") or ()),
            moves_per_interaction=int(payload.get("moves", 1)),
        )
    except ValueError as exc:
        raise BadRequestError(str(exc)) from exc


def observation_payload(
    observation: Observation, agent: str, state: SessionState, debug: bool
) -> dict:
    """The observation as wire JSON: occupancy and reachability, no rewards.

    Cell rewards are attached only when the session was created with the
    debug flag; a real evaluation keeps them hidden.
    """
    space = observation.space
    current = observation.cell_of(agent)
    row = space.targets[current - 1]
    cells = []
    for cell in range(1, space.cell_count + 1):
        occupants = [
            {"role": role.value, "name": name}
            for name, role in observation.occupants(cell)
        ]
        occupants += [
            {"role": "object", "name": obj.name}
            for _index, obj in observation.objects_in(cell)
        ]
        cells.append(
            {
                "index": cell,
                "occupants": occupants,
                "reachable_actions": [
                    action for action in range(space.action_count) if row[action] == cell
                ],
            }
        )
    payload = {"cells": cells, "current_cell": current}
    if debug:
        payload["debug_rewards"] = list(state.cell_rewards[1:])
    return payload


class SessionService:
    """In-process registry of live sessions, keyed by opaque ids."""

    def __init__(self, idle_timeout: float = DEFAULT_IDLE_TIMEOUT, clock=time.monotonic):
        self._sessions: dict[str, _LiveSession] = {}
        self._registry_lock = threading.Lock()
        self._idle_timeout = idle_timeout
        self._clock = clock

    # -- lifecycle --------------------------------------------------------

    def create_session(self, request: Mapping[str, Any]) -> dict:
        """Start a session and advance it to the first action request."""
        space = _parse_space(request.get("space") or {})
        agent_kind = request.get("agent", "human")
        if agent_kind == "human":
            policy = ExternalPolicy()
            watch = False
        elif agent_kind == "random":
            policy = RandomPolicy()
            watch = True
        elif agent_kind == "observer":
            policy = ObserverPolicy()
            watch = True
        else:
            raise BadRequestError(f"unknown agent kind {agent_kind!r}")
        iterations = request.get("iterations")
        time_ms = request.get("time_ms")
        relocation = request.get("relocation", 0)
        if relocation == "auto":
            relocation = None
        seed = request.get("seed")
        if seed is None:
            seed = uuid.uuid4().int & (2**63 - 1)
        debug = bool(request.get("debug", False))
        spec = AgentSpec(
            EVALUATED,
            policy,
            min_time=1.0 if time_ms is not None and watch else 0.0,
            max_time=1.0 if time_ms is not None and watch else 0.0,
        )
        try:
            config = SessionConfig(
                space=space,
                agents=(spec,),
                generator_behavior=_parse_generator(request.get("generator")),
                interactions=None if iterations is None else int(iterations),
                time_budget=None if time_ms is None else float(time_ms),
                relocation_interval=relocation,
                seed=int(seed),
                debug_rewards_visible=debug,
            )
            state = init_session(config)
            observation = begin_interaction(state, config, build_observation=True)
        except (SessionError, ValueError) as exc:
            raise BadRequestError(str(exc)) from exc
        live = _LiveSession(config=config, state=state, watch=watch, debug=debug)
        now = self._clock()
        live.last_touch = now
        live.observation_sent_at = now
        session_id = uuid.uuid4().hex
        with self._registry_lock:
            self._purge_idle(now)
            self._sessions[session_id] = live
        return {
            "session_id": session_id,
            "seed": config.seed,
            "space_description": state.description,
            "observation": observation_payload(observation, EVALUATED, state, debug),
            "actions": list(range(state.space.action_count)),
            "status": "awaiting_action",
            "watch": watch,
        }

    def submit_action(self, session_id: str, action: int | None) -> dict:
        """Complete the pending interaction and open the next one.

        Human sessions take an action id; watch sessions take ``None``
        and advance by their own policy.  The response carries the
        reward earned by this interaction and the fresh observation.
        """
        live = self._get(session_id)
        if not live.lock.acquire(blocking=False):
            raise SessionBusyError("an action for this session is already in progress")
        try:
            if live.done:
                raise SessionFinishedError("session already finished")
            state, config = live.state, live.config
            now = self._clock()
            if live.watch:
                if action is not None:
                    raise BadRequestError("watch sessions advance without an action")
                external_actions = None
                external_elapsed = None
            else:
                if action is None:
                    raise BadRequestError("an action id is required")
                elapsed_ms = max((now - live.observation_sent_at) * 1000.0, 0.0)
                external_actions = {EVALUATED: action}
                external_elapsed = {EVALUATED: elapsed_ms}
            try:
                complete_interaction(state, config, external_actions, external_elapsed)
            except SessionError as exc:
                raise BadRequestError(str(exc)) from exc
            reward = state.delivered_reward(EVALUATED)
            if config.interactions is not None:
                live.done = state.interaction_index >= config.interactions
            else:
                live.done = state.elapsed[0] >= config.time_budget
            if live.done:
                observation = snapshot_observation(state)
            else:
                observation = begin_interaction(state, config, build_observation=True)
                live.observation_sent_at = self._clock()
            live.last_touch = self._clock()
            response = {
                "reward": reward,
                "observation": observation_payload(observation, EVALUATED, state, live.debug),
                "done": live.done,
            }
            if live.done:
                _v, _n, average = state.totals(EVALUATED)
                response["score"] = average
            return response
        finally:
            live.lock.release()

    # -- queries ----------------------------------------------------------

    def ticket(self, session_id: str) -> dict:
        live = self._get(session_id)
        with live.lock:  # serialize with actions: no half-applied reads
            cumulative, index, _ = live.state.totals(EVALUATED)
            done = live.done
            live.last_touch = self._clock()
        return {
            "session_id": session_id,
            "status": "finished" if done else "awaiting_action",
            "interaction_index": index,
            "cumulative_reward": cumulative,
            "done": done,
        }

    def result(self, session_id: str) -> dict:
        live = self._get(session_id)
        with live.lock:
            cumulative, interactions, average = live.state.totals(EVALUATED)
            done = live.done
            live.last_touch = self._clock()
        return {
            "cumulative_reward": cumulative,
            "interactions": interactions,
            "average_reward": average,
            "done": done,
        }

    # -- internals --------------------------------------------------------

    def _get(self, session_id: str) -> _LiveSession:
        now = self._clock()
        with self._registry_lock:
            self._purge_idle(now)
            live = self._sessions.get(session_id)
        if live is None:
            raise UnknownSessionError(f"unknown session {session_id!r}")
        return live

    def _purge_idle(self, now: float) -> None:
        expired = [
            sid
            for sid, live in self._sessions.items()
            if now - live.last_touch > self._idle_timeout
        ]
        for sid in expired:
            del self._sessions[sid]


def create_app(service: SessionService | None = None, ui_dir: str | None = None):
    """FastAPI application exposing the session protocol."""
    from fastapi import Body, FastAPI
    from fastapi.responses import JSONResponse

    app = FastAPI(title="rewardtrail session service")
    if service is None:
        service = SessionService()
    app.state.service = service

    @app.exception_handler(ServiceError)
    async def _service_error(_request, exc: ServiceError):
        return JSONResponse(status_code=exc.status, content={"detail": str(exc)})

    @app.post("/sessions")
    def create_session(request: dict = Body(...)):
        return service.create_session(request)

    @app.post("/sessions/{session_id}/action")
    def submit_action(session_id: str, request: dict = Body(...)):
        action = request.get("action")
        if action is not None and (isinstance(action, bool) or not isinstance(action, int)):
            raise BadRequestError("action must be an integer id")
        return service.submit_action(session_id, action)

    @app.get("/sessions/{session_id}")
    def ticket(session_id: str):
        return service.ticket(session_id)

    @app.get("/sessions/{session_id}/result")
    def result(session_id: str):
        return service.result(session_id)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="console")
    return app
