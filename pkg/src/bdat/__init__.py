"""Discriminative, cancelable and secure binary templates.

Random projection for revocability, per-class binary discriminant analysis
toward BCH codeword targets for discriminability, and fuzzy commitment for
storage security.
"""

from bdat.bch import BCHCode, build_code, hamming
from bdat.bda import ClassModel, assign_targets, binarize, binary_match_score, train_class
from bdat.commitment import Commitment, commit, verify
from bdat.pipeline import Pipeline, Seeds, StageConfig, TemplateStore
from bdat.randproj import ProjectionKey, gen_matrix, project
from bdat.vectors import FeatureVector, SynthSpec, load_features, real_match_score, synth_classes

__version__ = "0.1.0"
