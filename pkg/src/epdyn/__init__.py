"""epdyn: fixed-length utterance representations from emotion-profile series.

Variable-length multivariate emotion profiles (EEP probability frames or BEP
feature frames) are summarized into fixed-length vectors -- via the dominant
Koopman mode of a delay-stacked least-squares fit, or via classical
summarizers (average, power means, functionals, DCT) -- and evaluated with a
seeded, stratified cross-validation harness around a reproducible random
forest.
"""

from epdyn.crossval import CvConfig, EvalReport, cross_validate, metrics, stratified_folds
from epdyn.dmd import KoopmanFit, fit_koopman, stack
from epdyn.dmd import representation as dmd_representation
from epdyn.ep import (
    Dataset,
    EpKind,
    EpSequence,
    Representation,
    load_dataset,
    load_representations,
    pair_eep_bep,
    save_dataset,
    save_representations,
)
from epdyn.experiment import ExperimentConfig, load_experiment_config, run_experiment
from epdyn.forest import ForestConfig, ForestModel, fit_forest, train_forest
from epdyn.linalg import EigenPair, canonicalize, eig, pseudoinverse
from epdyn.summarizers import average, concat, dct_summary, functionals, p_means
from epdyn.synth import SynthConfig, default_benchmark, generate

__version__ = "0.1.0"

__all__ = [
    "CvConfig",
    "Dataset",
    "EigenPair",
    "EpKind",
    "EpSequence",
    "EvalReport",
    "ExperimentConfig",
    "ForestConfig",
    "ForestModel",
    "KoopmanFit",
    "Representation",
    "SynthConfig",
    "average",
    "canonicalize",
    "concat",
    "cross_validate",
    "dct_summary",
    "default_benchmark",
    "dmd_representation",
    "eig",
    "fit_forest",
    "fit_koopman",
    "functionals",
    "generate",
    "load_dataset",
    "load_experiment_config",
    "load_representations",
    "metrics",
    "p_means",
    "pair_eep_bep",
    "pseudoinverse",
    "run_experiment",
    "save_dataset",
    "save_representations",
    "stack",
    "stratified_folds",
    "train_forest",
]
