"""
Trolls, experts and a mixed crowd
=================================

Run the three presets on a smaller population and compare how mean knowledge
and assertion quality evolve.
"""

# %%
import numpy as np

from infogame import preset, run

runs = {}
for name in ("troll", "expert", "mixed"):
    cfg = preset(name, actor_count=300, steps_per_actor=2000, sample_interval=250, seed=3)
    runs[name] = run(cfg)

# %%
print(f"{'t':>6} " + " ".join(f"{n:>8}" for n in runs))
times = [q.sim_time for q in runs["troll"].quality]
for i, t in enumerate(times):
    print(f"{t:6.0f} " + " ".join(f"{runs[n].quality[i].mean_k:8.3f}" for n in runs))

# %%
# Assertion quality in the troll crowd drifts toward the intrinsic truth rate.
q = runs["troll"].quality[-1]
print(f"troll f+ = {q.mean_f_plus:.3f}, f- = {q.mean_f_minus:.3f}")

# %%
# Knowledge histogram at the end of the expert run, 10 coarse bins.
k = runs["expert"].world.views()["k"]
counts, edges = np.histogram(k, bins=10, range=(0, 1))
for lo, c in zip(edges[:-1], counts):
    print(f"{lo:4.1f} {'#' * (c // 3)}")
