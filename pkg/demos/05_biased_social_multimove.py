"""Breaking the balance, sharing the world, and faster droppers.

Three experiment families beyond the balanced baseline:
 - biased worlds where Good no longer mirrors Evil, so even a random
   agent scores away from zero;
 - social sessions where random and observer compete for the same
   trails (both lose relative to their solo scores);
 - generators allowed several moves per interaction, which makes the
   positive dropper progressively harder to chase.
"""

from dataclasses import replace

from rewardtrail import GeneratorBehavior, estimate_balance, run_suite, suite_preset

SESSIONS = 5
ITERATIONS = 20_000

print("biased worlds (random agent, mean of %d sessions x %d iterations):" % (SESSIONS, ITERATIONS))
for name, story in (
    ("biased_1", "Good never moves: its +1 is always shared, the mean sinks"),
    ("biased_2", "Good always moves on: fresh +1 eaten whole, the mean climbs"),
):
    spec = replace(suite_preset(name), ladder=(ITERATIONS,), sessions=SESSIONS,
                   relocation_modes=(None,))
    mean = run_suite(spec).mean("random", "auto", ITERATIONS)
    print(f"  {name}: {mean:+.4f}  ({story})")
balanced = estimate_balance(suite_preset("biased_1").space, SESSIONS, ITERATIONS, seed=1)
print(f"  (the untampered space is balanced: {balanced.mean:+.4f} "
      f"+- {balanced.half_width:.4f})")
print()

print("social evaluation on the 8-cell space:")
social_spec = replace(suite_preset("social_manual_8"), ladder=(ITERATIONS,),
                      sessions=SESSIONS, relocation_modes=(None,))
social = run_suite(social_spec)
alone = run_suite(replace(suite_preset("manual_8"), agents=("observer",),
                          ladder=(ITERATIONS,), sessions=SESSIONS,
                          relocation_modes=(None,), seed=social_spec.seed))
print(f"  random together with observer: {social.mean('random', 'auto', ITERATIONS):+.4f}")
print(f"  observer together with random: {social.mean('observer', 'auto', ITERATIONS):+.4f}")
print(f"  observer alone, same seeds:    {alone.mean('observer', 'auto', ITERATIONS):+.4f}")
print()

print("multi-move droppers on the 8-cell space (observer):")
for moves in (1, 2, 3, 4):
    spec = replace(
        suite_preset("manual_8"),
        agents=("observer",),
        generator_behavior=GeneratorBehavior(mode="random", moves_per_interaction=moves),
        ladder=(ITERATIONS,),
        sessions=SESSIONS,
        relocation_modes=(None,),
    )
    mean = run_suite(spec).mean("observer", "auto", ITERATIONS)
    print(f"  {moves} move(s) per interaction: {mean:.4f}")
