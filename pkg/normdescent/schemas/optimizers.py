from enum import Enum


class OptimizerName(str, Enum):
    ADAM = "adam"
    SHAMPOO = "shampoo"
    PRODIGY = "prodigy"
    SIGN_DESCENT = "sign_descent"
    SPECTRAL_DESCENT = "spectral_descent"
    STEEPEST = "steepest"
    LINE_SEARCH = "line_search"


class OrthoBackend(str, Enum):
    SVD = "svd"
    NEWTON_SCHULZ = "newton_schulz"


class ShampooMode(str, Enum):
    SUM = "sum"
    EMA = "ema"


class UpdateOrder(str, Enum):
    CURRENT = "current"  # weight step uses eta_t
    LOOKAHEAD = "lookahead"  # weight step uses the freshly computed eta_{t+1}


class LineSearchPolicy(str, Enum):
    PRODIGY_MAX = "prodigy_max"
    DOUBLING = "doubling"
    COSINE_RULE = "cosine_rule"


class LineSearchAnchor(str, Enum):
    INITIAL = "initial"  # angle against w0 - w_t
    PREVIOUS = "previous"  # angle against w_{t-1} - w_t
