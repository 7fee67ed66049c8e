"""Shared test helpers: an independent wide-integer reference for the
fixed-point unit and a random-program generator for structural tests."""

import random

import pytest

from vproc.fixedpoint import Fixed64, RAW_MAX, RAW_MIN, SCALE
from vproc.isa import Instruction, Program

# ---- independent Q32.32 reference (kept deliberately separate from the
# ---- implementation under test; plain integer arithmetic throughout)

def ref_clamp(v):
    return max(RAW_MIN, min(RAW_MAX, v))


def ref_add(a, b):
    return ref_clamp(a + b)


def ref_sub(a, b):
    return ref_clamp(a - b)


def ref_mul(a, b):
    prod = a * b
    # floor division == arithmetic shift for negatives
    return ref_clamp(prod // SCALE if prod >= 0 else -((-prod + SCALE - 1) // SCALE))


def ref_div(a, b):
    if b == 0:
        return RAW_MAX if a >= 0 else RAW_MIN
    num = a * SCALE
    q = abs(num) // abs(b)
    if (num < 0) != (b < 0):
        q = -q
    return ref_clamp(q)


# ---- random straight-line programs -----------------------------------------

_SAFE_OPS = [
    ("SADD", "sss"), ("SSUB", "sss"), ("SMUL", "sss"), ("SDIV", "sss"),
    ("SINV", "ss"), ("SMOV", "ss"), ("SADDI", "ssi"), ("LDI", "si"),
    ("SLD", "sm"), ("SST", "ms"),
    ("VADD", "vvv"), ("VSUB", "vvv"), ("VMUL", "vvv"), ("VDIV", "vvv"),
    ("VADDS", "vvs"), ("VSUBS", "vvs"), ("VMULS", "vvs"), ("VDIVS", "vvs"),
    ("VINV", "vv"), ("VMOV", "vv"), ("VLD", "vm"), ("VST", "mv"),
]


def random_program(rng: random.Random, cfg, n_instr=15) -> Program:
    """A valid straight-line program (no branches) ending in HALT."""
    ins = []
    for _ in range(n_instr):
        op, shape = rng.choice(_SAFE_OPS)
        fields = {}
        regfields = iter("dab")
        for kind in shape:
            if kind == "s":
                fields[next(regfields)] = rng.randrange(cfg.n_sregs)
            elif kind == "v":
                fields[next(regfields)] = rng.randrange(cfg.n_vregs)
            elif kind == "i":
                fields["imm"] = Fixed64(rng.getrandbits(64) - (1 << 63))
            elif kind == "m":
                width = cfg.vec_len if op[0] == "V" else 1
                fields["addr"] = rng.randrange(cfg.dmem_words - width + 1)
        # operand slots must follow the opcode signature order
        if op in ("SST", "VST"):
            fields = {"addr": fields["addr"], "a": fields["d"]}
        ins.append(Instruction(op, **fields))
    ins.append(Instruction("HALT"))
    return Program(instructions=ins)


@pytest.fixture
def rng():
    return random.Random(1234)
