"""
Synthetic benchmark and security accounting
===========================================

Ten synthetic classes of ten samples each stand in for a face database. Half
of each class enrolls, the other half probes.
"""

from bdat.evaluation import (
    decision_rates,
    desk_spec,
    enroll_dataset,
    genuine_imposter_histograms,
    security_report,
    stage_score_table,
)
from bdat.pipeline import StageConfig
from bdat.vectors import synth_classes

config = StageConfig()
dataset = synth_classes(desk_spec(seed=0))
bench = enroll_dataset(dataset, config, seed=0)

rates = decision_rates(bench)
print(f"genuine accept rate {rates.genuine_accept_rate:.3f}, "
      f"imposter accept rate {rates.imposter_accept_rate:.3f}")

# scores at each stage, first few probes
table = stage_score_table(bench)
table.rows = table.rows[:5]
print(table.render())

# %%
# Genuine pairs pile up near n; imposters near n/2
hist = genuine_imposter_histograms(dataset, config, seed=0)
peak = max(range(len(hist.imposter)), key=hist.imposter.__getitem__)
print(f"{hist.genuine_pairs} genuine pairs, {hist.imposter_pairs} imposter pairs, "
      f"imposter mode at {peak} of {config.n_total}")

# %%
# Brute-force cost for published template lengths, and for this configuration
print(security_report("paper-novel").render())
print(security_report(config).render())
