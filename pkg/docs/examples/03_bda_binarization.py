"""
Binarizing with per-bit perceptrons
===================================

Each class gets a random target codeword. One linear discriminant per bit is
trained so that samples of the class land on that codeword and points from
elsewhere land on other codewords.
"""

import numpy as np

from bdat import assign_targets, binarize, build_code, hamming
from bdat.bda import train_all

code = build_code(6, 5)
rng = np.random.default_rng(3)
centers = rng.normal(size=(3, 32))
samples = {f"class{i}": centers[i] + 0.2 * rng.normal(size=(8, 32)) for i in range(3)}
targets = assign_targets(list(samples), code, seed=0)

models = train_all(samples, targets)
for cid, model in models.items():
    print(cid, "converged" if model.converged else "not converged",
          "after", model.epochs_run, "epochs")

# fresh probes from class0, scored against every class target
probes = centers[0] + 0.2 * rng.normal(size=(5, 32))
for cid, model in models.items():
    d = [hamming(b, targets[cid]) for b in binarize(model, probes)]
    print(f"class0 probes under {cid} model: distance to target {d}")
