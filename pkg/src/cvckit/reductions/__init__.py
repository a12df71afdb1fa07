"""Hardness-construction generators and their certificate verifiers."""

from .cliquewidth import CliquewidthExpression, replay, verify_cw_expression
from .mcc import MccInstance, TreedepthWitness, reduce_mcc_td, verify_td_witness
from .sat import Cnf1in3, Grouping, group_formula, reduce_sat_cw, reduce_sat_natural, verify_grouping
from .smc import SmcInstance, reduce_smc

__all__ = [
    "CliquewidthExpression",
    "Cnf1in3",
    "Grouping",
    "MccInstance",
    "SmcInstance",
    "TreedepthWitness",
    "group_formula",
    "reduce_mcc_td",
    "reduce_sat_cw",
    "reduce_sat_natural",
    "reduce_smc",
    "replay",
    "verify_cw_expression",
    "verify_grouping",
    "verify_td_witness",
]
