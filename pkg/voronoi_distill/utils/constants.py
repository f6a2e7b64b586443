from enum import Enum


class EnvName(Enum):
    SIMPLEGOAL = "simplegoal-v0"
    MOUNTAINCAR = "mountaincarcontinuous-v0"


class FreezeMode(Enum):
    # partition edits while epoch < n_epochs - n_freeze
    TEXT = "text"
    # partition edits while epoch < n_freeze
    LITERAL = "literal"


class OracleTag(Enum):
    SIMPLEGOAL_POTENTIAL_FIELD = "simplegoal_potential_field"
    MOUNTAINCAR_ENERGY = "mountaincar_energy"


class Activation(Enum):
    RELU = "relu"
    TANH = "tanh"
    IDENTITY = "identity"


class FormulaStyle(Enum):
    COMPACT = "compact"
    FIXED = "fixed"


# Partition hyperparameters per environment.
ENV_HYPERPARAMETERS = {
    EnvName.SIMPLEGOAL: {
        "n_epochs": 5000,
        "n_split": 20,
        "n_merge": 100,
        "n_freeze": 1000,
        "n_reset": 500,
        "min_param_distance": 0.5,
        "min_pol_distance": 0.3,
        "max_pol_loss": 0.0001,
        "one_split": False,
    },
    EnvName.MOUNTAINCAR: {
        "n_epochs": 2000,
        "n_split": 50,
        "n_merge": 100,
        "n_freeze": 400,
        "n_reset": 500,
        "min_param_distance": 0.3,
        "min_pol_distance": 0.04,
        "max_pol_loss": 0.00001,
        "one_split": False,
    },
}

# Adam steps every non-empty cell takes per epoch, at least.
ENV_TRAINING = {
    EnvName.SIMPLEGOAL: {"min_steps": 32},
    EnvName.MOUNTAINCAR: {"min_steps": 1},
}

BUNDLE_FORMAT_VERSION = "1"
DEFAULT_ORACLE = {
    EnvName.SIMPLEGOAL: OracleTag.SIMPLEGOAL_POTENTIAL_FIELD,
    EnvName.MOUNTAINCAR: OracleTag.MOUNTAINCAR_ENERGY,
}
