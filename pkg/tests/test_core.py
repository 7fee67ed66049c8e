import pytest

import vproc.fixedpoint as fx
from vproc import isa, kernel
from vproc.core import (CoreConfig, SimulationFault, SimulationTimeout,
                        ValidationError, instr_cost, reset, run, waves)
from vproc.isa import Instruction, OpClass, Program

from conftest import random_program


def kernel_setup(cfg, seed=7):
    ins = kernel.generate_inputs(cfg.vec_len, seed)
    p = kernel.emit_program(cfg.vec_len, s_k=ins.s_k)
    return p, kernel.data_initializers(ins)


class TestWaves:
    @pytest.mark.parametrize("v,k,expected", [(24, 8, 3), (24, 24, 1),
                                              (24, 5, 5), (1, 1, 1)])
    def test_ceiling(self, v, k, expected):
        assert waves(v, k) == expected

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            waves(0, 1)


class TestInstrCost:
    cfg = CoreConfig()   # W=24, 8-8-8, issue 2, lat_div 64

    def test_vmul(self):
        assert instr_cost(Instruction("VMUL", d=0, a=1, b=2), self.cfg) == 5

    def test_vdiv(self):
        assert instr_cost(Instruction("VDIV", d=0, a=1, b=2), self.cfg) == 194

    def test_vdiv_full_width(self):
        cfg = self.cfg.with_mix(8, 8, 24)
        assert instr_cost(Instruction("VDIV", d=0, a=1, b=2), cfg) == 66

    def test_control_is_issue_only(self):
        for op in ("HALT", "JMP", "VMOV"):
            i = Instruction(op, d=0, a=0, target=0)
            assert instr_cost(i, self.cfg) == self.cfg.issue_cost

    def test_scalar_classes(self):
        assert instr_cost(Instruction("SADD", d=1, a=1, b=1), self.cfg) == 3
        assert instr_cost(Instruction("SDIV", d=1, a=1, b=1), self.cfg) == 66
        assert instr_cost(Instruction("F2X", d=1, a=1), self.cfg) == 4

    def test_memory(self):
        assert instr_cost(Instruction("VLD", d=0, addr=0), self.cfg) == 3
        assert instr_cost(Instruction("SLD", d=0, addr=0), self.cfg) == 3
        narrow = CoreConfig(mem_port_width=8)
        assert instr_cost(Instruction("VLD", d=0, addr=0), narrow) == 5


class TestReset:
    def test_zeroed(self):
        st = reset(CoreConfig())
        assert all(v.raw == 0 for v in st.mem) and len(st.mem) == 4096
        assert st.pc == 0 and st.cycles == 0


class TestRun:
    def test_scalar_inverse_program(self):
        p = isa.assemble("LDI s1, 2.0\nSINV s2, s1\nHALT")
        cfg = CoreConfig()
        r = run(p, cfg)
        # LDI 2 + SINV (2+64) + HALT 2, per the analytic cost model
        assert r.total_cycles == 70
        assert r.total_cycles == sum(instr_cost(i, cfg) for i in p.instructions)

    def test_s0_hardwired_zero(self):
        p = isa.assemble("LDI s0, 5.0\nSST [0], s0\nHALT")
        r = run(p, CoreConfig(), observe=(0, 1))
        assert r.memory[0].raw == 0

    def test_kernel_cycles_8_8_8(self):
        cfg = CoreConfig()
        p, inits = kernel_setup(cfg)
        assert run(p, cfg, inputs=inits).total_cycles == 659

    def test_kernel_cycles_8_8_24(self):
        cfg = CoreConfig().with_mix(8, 8, 24)
        p, inits = kernel_setup(cfg)
        assert run(p, cfg, inputs=inits).total_cycles == 275

    def test_determinism(self):
        cfg = CoreConfig()
        p, inits = kernel_setup(cfg)
        r1 = run(p, cfg, inputs=inits, observe=(240, 24))
        r2 = run(p, cfg, inputs=inits, observe=(240, 24))
        assert r1 == r2

    def test_branch_loop(self):
        p = isa.assemble("""
            LDI s1, 5.0
            LDI s2, 0.0
            loop: SADDI s2, s2, 1.0
            SADDI s1, s1, -1.0
            BNZ s1, loop
            SST [0], s2
            HALT
        """)
        r = run(p, CoreConfig(), observe=(0, 1))
        assert fx.to_real(r.memory[0]) == 5.0

    def test_div_by_zero_flag_surfaces(self):
        p = isa.assemble("LDI s1, 1.0\nSDIV s2, s1, s0\nSST [0], s2\nHALT")
        r = run(p, CoreConfig(), observe=(0, 1))
        assert r.flags.div_by_zero
        assert r.memory[0].raw == fx.RAW_MAX

    def test_conversion_roundtrip_through_registers(self):
        # X2F then F2X recovers any dyadic value expressible in a double
        p = isa.assemble("LDI s1, 1.5\nX2F s2, s1\nF2X s3, s2\nSST [0], s3\nHALT")
        r = run(p, CoreConfig(), observe=(0, 1))
        assert r.memory[0] == fx.from_real(1.5)

    def test_validation_enforced(self):
        p = Program(instructions=[Instruction("F2X", d=1, a=2),
                                  Instruction("HALT")])
        with pytest.raises(ValidationError):
            run(p, CoreConfig(enable_converter=False))

    def test_missing_halt_faults(self):
        p = Program(instructions=[Instruction("LDI", d=1, imm=fx.ONE)])
        with pytest.raises(SimulationFault):
            run(p, CoreConfig())

    def test_timeout_carries_partial_report(self):
        p = isa.assemble("spin: JMP spin\nHALT")
        with pytest.raises(SimulationTimeout) as exc:
            run(p, CoreConfig(), max_cycles=100)
        assert exc.value.report.total_cycles > 100

    def test_utilization_bounds(self):
        cfg = CoreConfig()
        p, inits = kernel_setup(cfg)
        r = run(p, cfg, inputs=inits)
        for cls, u in r.utilization.items():
            assert 0.0 <= u <= 1.0
        assert r.busy_cycles[OpClass.DIV_CLASS] == 3 * 24 * 64


class TestProperties:
    def test_fu_mix_value_invariance(self, rng):
        base = CoreConfig()
        mixes = [(1, 1, 1), (8, 8, 8), (8, 8, 24), (24, 24, 24)]
        for _ in range(25):
            p = random_program(rng, base)
            outs = []
            for mix in mixes:
                r = run(p, base.with_mix(*mix), observe=(0, base.dmem_words))
                outs.append(([v.raw for v in r.memory],
                             r.flags.overflow, r.flags.div_by_zero))
            assert all(o == outs[0] for o in outs)

    def test_total_cycles_is_analytic_sum(self, rng):
        cfg = CoreConfig(n_add=3, n_mul=5, n_div=7)
        for _ in range(50):
            p = random_program(rng, cfg)
            expected = sum(instr_cost(i, cfg) for i in p.instructions)
            assert run(p, cfg).total_cycles == expected

    def test_monotone_in_unit_counts(self):
        base = CoreConfig()
        p, inits = kernel_setup(base)
        for attr in ("n_add", "n_mul", "n_div"):
            prev = None
            for n in (1, 2, 4, 8, 16, 24):
                cfg = CoreConfig(**{attr: n})
                cycles = run(p, cfg, inputs=inits).total_cycles
                if prev is not None:
                    assert cycles <= prev
                prev = cycles

    def test_vector_scalar_equivalence(self):
        cfg = CoreConfig()
        for seed in range(5):
            ins = kernel.generate_inputs(24, seed)
            inits = kernel.data_initializers(ins)
            pv = kernel.emit_program(24, s_k=ins.s_k)
            ps = kernel.emit_scalar_program(24, s_k=ins.s_k)
            rv = run(pv, cfg, inputs=inits, observe=(240, 24))
            rs = run(ps, cfg, inputs=inits, observe=(240, 24))
            assert [v.raw for v in rv.memory] == [v.raw for v in rs.memory]
