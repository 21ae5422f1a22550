"""Persuasion argumentation dynamics and a two-counter machine compiler."""

from .core import (
    EPSILON,
    Argument,
    EnumerationOverflow,
    Framework,
    StateGraph,
    Successors,
    Triple,
    apply,
    attacks_in,
    enabled_persuasions,
    explicit_framework,
    neg_set,
    parse_framework,
    pos_set,
    reachable,
    successors,
)
from .encoder import ConfigState, EncodedFramework, Foreign, MidInstruction, classify, config_state, encode
from .minsky import Configuration, Instruction, MinskyMachine, halts, parse_program, run, step, validate
from .simulate import audit, guided_step, halting_equivalence, simulate

__version__ = "0.1.0"
