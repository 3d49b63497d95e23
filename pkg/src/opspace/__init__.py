"""Matrix-level norms for operator-space structures on sequence spaces."""

from .linalg import direct_sum, kron, operator_norm
from .osnorm import (
    COL,
    OH,
    ROW,
    Interp,
    Max,
    Min,
    NormEstimate,
    OptBudget,
    check_ruan,
    dual,
    eval_exact,
    eval_interp,
    eval_max,
    eval_min,
    evaluate,
    format_structure,
    pairing_amplified,
    parse_structure,
)
from .seqspace import FinSeq, MatrixSeq, lp_norm, witness
from .twist import amplify, kp_map, kp_quasinorm, quasilinearity_probe, triviality_probe

__all__ = [
    "COL",
    "OH",
    "ROW",
    "FinSeq",
    "Interp",
    "MatrixSeq",
    "Max",
    "Min",
    "NormEstimate",
    "OptBudget",
    "amplify",
    "check_ruan",
    "direct_sum",
    "dual",
    "eval_exact",
    "eval_interp",
    "eval_max",
    "eval_min",
    "evaluate",
    "format_structure",
    "kp_map",
    "kp_quasinorm",
    "kron",
    "lp_norm",
    "operator_norm",
    "pairing_amplified",
    "parse_structure",
    "quasilinearity_probe",
    "triviality_probe",
    "witness",
]
