"""Max flow from a stale flow: repair it into a preflow and label it by residual distance.

Compares push and relabel counts for a cold start, last week's flow, and the
exact answer.
"""

import random

from warmstart import PreflowPrediction, fix_preflow, gen_drift_family, hl_push_relabel

family = gen_drift_family("flow", 25, 2, 3, seed=0)
last_week, this_week = family[0], family[1]
stale = hl_push_relabel(last_week).flow.flow

for label, warm in (("cold", None),
                    ("last week's flow", PreflowPrediction(stale)),
                    ("exact flow", PreflowPrediction(hl_push_relabel(this_week).flow.flow))):
    res = hl_push_relabel(this_week, warm)
    c = res.counters
    print(f"{label:>17}: value {res.value}, relabels {c.relabels}, "
          f"saturating {c.saturating_pushes}, non-saturating {c.nonsaturating_pushes}")

# fix_preflow never loses more flow into the sink than the capacity overshoot.
overshoot = sum(max(0, f - cap) for (_, _, cap, _), f in zip(this_week.arcs, stale))
fixed = fix_preflow(this_week, PreflowPrediction(stale))
print(f"capacity overshoot {overshoot}, flow into sink after repair {fixed.value}")

rng = random.Random(0)
noisy = [max(0, f + rng.randint(-2, 2)) for f in stale]
print("noisy prediction value:", hl_push_relabel(this_week, PreflowPrediction(noisy)).value)
