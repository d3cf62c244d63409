"""Binary discriminant analysis: per-bit perceptrons trained toward a BCH target.

Each of the ``n`` output bits has its own linear discriminant ``w_j . x + b_j``;
bit ``j`` of a template is 1 when that value is strictly positive (ties give 0).
Training labels every class sample with the class target bit and, when a
background set is supplied, every background sample with its own codeword's
bit. All ``n`` perceptrons run in lockstep over the same fixed sample order;
each one only ever reads and updates its own row, so the lockstep is purely a
vectorization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from bdat.bch import BCHCode, as_bits, hamming

DEFAULT_EPOCHS = 200
DEFAULT_RATE = 0.1


@dataclass(frozen=True, eq=False)
class ClassModel:
    class_id: str
    weights: np.ndarray
    biases: np.ndarray
    target: np.ndarray | None
    code_ref: str
    epochs_run: int
    bit_errors: int
    converged: bool

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def k(self) -> int:
        return self.weights.shape[1]

    def binarize(self, query) -> np.ndarray:
        return binarize(self, query)

    def same_parameters(self, other: "ClassModel") -> bool:
        return (
            self.class_id == other.class_id
            and self.code_ref == other.code_ref
            and np.array_equal(self.weights, other.weights)
            and np.array_equal(self.biases, other.biases)
            and (self.epochs_run, self.bit_errors, self.converged)
            == (other.epochs_run, other.bit_errors, other.converged)
        )


def assign_targets(class_ids: Sequence[str], code: BCHCode, seed) -> dict[str, np.ndarray]:
    """Map each class to a distinct random codeword, in ``class_ids`` order."""
    if len(set(class_ids)) != len(class_ids):
        raise ValueError("class ids must be distinct")
    words = code.random_codewords(len(class_ids), seed)
    return dict(zip(class_ids, words))


def _as_matrix(samples, k: int | None = None) -> np.ndarray:
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2:
        raise ValueError("samples must be a sequence of equal-length vectors")
    if k is not None and x.shape[1] != k:
        raise ValueError(f"expected templates of length {k}, got {x.shape[1]}")
    return x


def train_class(
    samples,
    target,
    *,
    epochs: int = DEFAULT_EPOCHS,
    rate: float = DEFAULT_RATE,
    background=None,
    background_targets=None,
    class_id: str = "",
    code_ref: str = "",
) -> ClassModel:
    """Fit the class model with the perceptron rule.

    ``samples`` is an ``N x k`` stack of projected templates of one class,
    ``target`` its ``n``-bit codeword (or a concatenation of block codewords).
    ``background`` (``M x k``) with ``background_targets`` (``M x n``) adds
    negatives carrying other codewords. Zero initialization and a fixed sample
    order make the result a pure function of the inputs.
    """
    x = _as_matrix(samples)
    if x.shape[0] == 0:
        raise ValueError("need at least one training sample")
    target = as_bits(target)
    if epochs < 0:
        raise ValueError("epochs must be non-negative")
    if rate <= 0:
        raise ValueError("rate must be positive")
    k = x.shape[1]
    labels = np.tile(target, (x.shape[0], 1))
    if background is not None:
        bx = _as_matrix(background, k)
        by = np.asarray(background_targets, dtype=np.uint8)
        if by.shape != (bx.shape[0], target.size):
            raise ValueError("background_targets must be one codeword per background sample")
        x = np.vstack([x, bx])
        labels = np.vstack([labels, by])
    signs = labels.astype(np.float64) * 2.0 - 1.0

    n = target.size
    w = np.zeros((n, k))
    b = np.zeros(n)
    epochs_run = 0
    for _ in range(epochs):
        epochs_run += 1
        mistakes = 0
        for xi, yi, si in zip(x, labels, signs):
            wrong = ((w @ xi + b) > 0) != yi
            if wrong.any():
                mistakes += int(wrong.sum())
                step = rate * si[wrong]
                w[wrong] += step[:, None] * xi
                b[wrong] += step
        if mistakes == 0:
            break

    pred = (x @ w.T + b) > 0
    bit_errors = int(np.count_nonzero(pred != labels))
    w.setflags(write=False)
    b.setflags(write=False)
    return ClassModel(
        class_id=class_id,
        weights=w,
        biases=b,
        target=target.copy(),
        code_ref=code_ref,
        epochs_run=epochs_run,
        bit_errors=bit_errors,
        converged=bit_errors == 0,
    )


def binarize(model: ClassModel, query) -> np.ndarray:
    """Binary template(s) for one query of length ``k`` or an ``N x k`` stack."""
    q = np.asarray(query, dtype=np.float64)
    if q.shape[-1] != model.k:
        raise ValueError(f"expected templates of length {model.k}, got {q.shape[-1]}")
    return ((q @ model.weights.T + model.biases) > 0).astype(np.uint8)


def binary_match_score(a, b) -> int:
    """``n - hamming(a, b)``: identical templates score ``n``."""
    a = np.asarray(a)
    return a.size - hamming(a, b)


def train_all(
    samples_by_class: Mapping[str, np.ndarray],
    targets: Mapping[str, np.ndarray],
    **hyper,
) -> dict[str, ClassModel]:
    """Train every class against the other classes' samples and codewords."""
    models = {}
    for cid, xs in samples_by_class.items():
        others = [c for c in samples_by_class if c != cid]
        bg = bgt = None
        if others:
            bg = np.vstack([np.atleast_2d(samples_by_class[c]) for c in others])
            bgt = np.vstack([np.tile(targets[c], (np.atleast_2d(samples_by_class[c]).shape[0], 1))
                             for c in others])
        models[cid] = train_class(xs, targets[cid], background=bg, background_targets=bgt,
                                  class_id=cid, **hyper)
    return models
