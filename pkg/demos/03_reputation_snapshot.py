"""
Who gets the reputation?
========================

Snapshot an expert population and correlate knowledge with reputation and
popularity, overall and inside each starting cohort.
"""

# %%
import numpy as np

from infogame import preset, run
from infogame.metrics import pearson

summary = run(preset("expert", actor_count=600, steps_per_actor=800, sample_interval=800, snapshot_times=(800.0,), seed=5))
snap = summary.snapshots[800.0]
k = np.array([r.k for r in snap])
c = np.array([r.c for r in snap])
p = np.array([r.p for r in snap])
k0 = np.array([r.initial_k for r in snap])

# %%
print(f"all actors  corr(k, c) = {pearson(k, c):+.3f}  corr(k, p) = {pearson(k, p):+.3f}")
for g in np.unique(k0):
    sel = k0 == g
    print(f"k0 = {g:.1f}    corr(k - k0, c) = {pearson(k[sel] - g, c[sel]):+.3f}  mean c = {c[sel].mean():.3f}")

# %%
# Starting cohort dominates k, so the pooled correlations are weak even though
# learning and reputation move together strongly inside a cohort.
for g in np.unique(k0):
    sel = k0 == g
    print(f"k0 = {g:.1f}  mean k = {k[sel].mean():.3f}  mean p = {p[sel].mean():.3f}")
