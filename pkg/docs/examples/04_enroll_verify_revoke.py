"""
Enrollment, verification and revocation
=======================================

The pipeline chains projection, binarization and commitment, and keeps one
record file per user in a store directory.
"""

import tempfile

import numpy as np

from bdat import Pipeline, Seeds, SynthSpec, synth_classes
from bdat.vectors import group_by_label

spec = SynthSpec(seed=0, num_classes=2, samples_per_class=10, dim=128, within_sigma=0.25)
people = {k: np.array([v.values for v in vs]) for k, vs in group_by_label(synth_classes(spec)).items()}
alice, bob = people["c000"], people["c001"]

store = tempfile.mkdtemp(prefix="bdat-demo-")
pipe = Pipeline(store)

enrolled = pipe.enroll("alice", alice[:5], Seeds.from_master(1))
model = enrolled.record.model
print(f"alice enrolled: {model.n}-bit template, converged={model.converged}")
print("record file:", pipe.store.record_path("alice"))

for name, probe in [("alice", alice[7]), ("bob", bob[0])]:
    r = pipe.verify("alice", probe)
    print(f"{name} claims alice:", "ACCEPT" if r.accepted else "REJECT",
          "errors corrected", r.errors_corrected)

# %%
# Suppose alice's record leaks. Reissuing under fresh seeds invalidates it.
old_record = pipe.store.load("alice")
pipe.revoke("alice", alice[:5], Seeds.from_master(2))
print("after revoke, alice still verifies:", pipe.verify("alice", alice[7]).accepted)
print("projection seed changed:", old_record.projection_seed != pipe.store.load("alice").projection_seed)
