"""Cycle-accurate vector soft-processor simulator and design-space explorer."""

from .core import CoreConfig, ExecReport, instr_cost, run, waves
from .fixedpoint import ArithFlags, Fixed64, from_real, to_real
from .isa import Instruction, OpClass, Program, assemble, disassemble, validate
from .resources import Calibration, DEFAULT_CALIBRATION

__version__ = "0.1.0"

__all__ = [
    "ArithFlags", "Calibration", "CoreConfig", "DEFAULT_CALIBRATION",
    "ExecReport", "Fixed64", "Instruction", "OpClass", "Program",
    "assemble", "disassemble", "from_real", "instr_cost", "run",
    "to_real", "validate", "waves",
]
