"""A live turn-based session, driven through the service layer.

The same protocol serves human examinees (via the browser console) and
remote programs: create a session, read the observation, submit an
action, collect the reward.  Here a tiny greedy client plays ten moves
in-process; over HTTP the flow is identical via
``rewardtrail serve --port 8351`` and POST /sessions.
"""

from rewardtrail.service import SessionService

service = SessionService()
created = service.create_session(
    {
        "space": {"description": "1+2++3|1+23-|1+23|1+2--3-"},
        "agent": "human",
        "iterations": 10,
        "relocation": 0,
        "seed": 7,
        "debug": False,
    }
)
session_id = created["session_id"]
print("space:", created["space_description"], "| actions:", created["actions"])


def chase(observation):
    """Head for Good when reachable, otherwise wander away from Evil."""
    current = observation["current_cell"]
    wander = []
    for cell in observation["cells"]:
        if cell["index"] == current:
            continue
        moves = [a for a in cell["reachable_actions"] if a != 0]
        if not moves:
            continue
        roles = {occupant["role"] for occupant in cell["occupants"]}
        if "good" in roles:
            return moves[0]
        if "evil" not in roles:
            wander.extend(moves)
    return wander[0] if wander else 0


observation = created["observation"]
total = 0.0
for turn in range(10):
    action = chase(observation)
    response = service.submit_action(session_id, action)
    total += response["reward"]
    observation = response["observation"]
    print(f"turn {turn}: action {action} -> reward {response['reward']:+.3f} "
          f"(running total {total:+.3f})")

result = service.result(session_id)
print()
print(f"final score: {result['cumulative_reward']:+.3f} / {result['interactions']} = "
      f"{result['average_reward']:+.4f}")
print("the gateway agrees with the client's running total:",
      abs(result["cumulative_reward"] - total) < 1e-12)
