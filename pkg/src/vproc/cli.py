"""Command-line front end; owns the config, data, report and CSV formats.

Formats (documented with examples in docs/formats.md):
  config  - flat "key = value" lines; core and calibration keys; unknown
            keys are errors.
  data    - CSV; header names the input vectors, one row per lane; the
            scalar constant travels in a single-row column "s_k".
  report  - JSON with a schema_version field; no timestamps, fully
            deterministic for given inputs.
Exit codes: 0 success, 1 user/input error, 2 simulation fault.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys

from . import archmodels, core, dse, fixedpoint as fx, isa, kernel, resources
from .core import CoreConfig
from .resources import Calibration

SCHEMA_VERSION = 1

_CORE_KEYS = {f.name for f in dataclasses.fields(CoreConfig)}
_CAL_KEYS = {f.name for f in dataclasses.fields(Calibration)}
_BOOL_KEYS = {"enable_converter"}
_FLOAT_KEYS = {"clock_mhz"} | _CAL_KEYS


class CliError(Exception):
    pass


def parse_config_text(text: str) -> tuple[CoreConfig, Calibration]:
    core_kwargs: dict = {}
    cal_kwargs: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"config line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            if key in _BOOL_KEYS:
                if value.lower() not in ("true", "false"):
                    raise ValueError
                parsed = value.lower() == "true"
            elif key in _FLOAT_KEYS:
                parsed = float(value)
            elif key in _CORE_KEYS:
                parsed = int(value)
            else:
                raise CliError(f"config line {lineno}: unknown key '{key}'")
        except ValueError:
            raise CliError(f"config line {lineno}: bad value for '{key}'")
        if key in _CORE_KEYS:
            core_kwargs[key] = parsed
        else:
            cal_kwargs[key] = parsed
    try:
        return CoreConfig(**core_kwargs), Calibration(**cal_kwargs)
    except ValueError as exc:
        raise CliError(f"invalid configuration: {exc}")


def load_config(path: str | None) -> tuple[CoreConfig, Calibration]:
    if path is None:
        return CoreConfig(), Calibration()
    return parse_config_text(_read(path))


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")


def write_data_csv(path: str, inputs: kernel.KernelInputs) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(list(kernel.INPUT_NAMES) + ["s_k"])
        for i in range(inputs.vec_len):
            row = [repr(inputs.vectors[name][i]) for name in kernel.INPUT_NAMES]
            row.append(repr(inputs.s_k) if i == 0 else "")
            writer.writerow(row)


def read_data_csv(path: str) -> kernel.KernelInputs:
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise CliError(f"{path}: empty data file")
    header = [h.strip() for h in rows[0]]
    missing = [n for n in kernel.INPUT_NAMES if n not in header]
    if missing:
        raise CliError(f"{path}: missing column(s) {', '.join(missing)}")
    columns: dict[str, list[float]] = {n: [] for n in header}
    for row in rows[1:]:
        for name, cell in zip(header, row):
            if cell.strip():
                columns[name].append(float(cell))
    vectors = {n: columns[n] for n in kernel.INPUT_NAMES}
    lengths = {len(v) for v in vectors.values()}
    if len(lengths) != 1:
        raise CliError(f"{path}: input columns have unequal lengths")
    s_k = columns.get("s_k", [1.0])
    return kernel.KernelInputs(vectors=vectors, s_k=s_k[0] if s_k else 1.0)


def _report_dict(report: core.ExecReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "total_cycles": report.total_cycles,
        "instr_count": report.instr_count,
        "busy_cycles": {c.name: n for c, n in report.busy_cycles.items()},
        "utilization": {c.name: round(u, 6)
                        for c, u in report.utilization.items()},
        "flags": {"overflow": report.flags.overflow,
                  "div_by_zero": report.flags.div_by_zero},
        "memory": [fx.to_real(v) for v in report.memory],
    }


def _write_out(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text if text.endswith("\n") else text + "\n")


def _parse_observe(spec: str | None, cfg: CoreConfig) -> tuple[int, int]:
    if spec is None:
        base = kernel.default_layout(cfg.vec_len)["out"]
        return base, cfg.vec_len
    try:
        start, _, length = spec.partition(":")
        return int(start), int(length)
    except ValueError:
        raise CliError(f"bad observe range '{spec}', expected START:LENGTH")


def parse_mix_spec(spec: str) -> list[tuple[int, int, int]]:
    spec = spec.strip()
    if not spec:
        raise CliError("empty mix spec")
    if spec.startswith("sym:"):
        try:
            return [(n, n, n) for n in
                    [int(t) for t in spec[len("sym:"):].split(",") if t.strip()]] \
                or _raise_mix(spec)
        except ValueError:
            raise CliError(f"bad mix spec '{spec}'")
    mixes = []
    for item in spec.split(","):
        parts = item.strip().split("-")
        if len(parts) != 3:
            raise CliError(f"bad mix '{item.strip()}', expected A-M-D")
        try:
            mixes.append(tuple(int(x) for x in parts))
        except ValueError:
            raise CliError(f"bad mix '{item.strip()}', expected A-M-D")
    return mixes


def _raise_mix(spec: str):
    raise CliError(f"bad mix spec '{spec}'")


# ---------------------------------------------------------------- commands

def cmd_asm(args) -> int:
    cfg, _ = load_config(args.config)
    try:
        program = isa.assemble(_read(args.program))
    except isa.AssemblyError as exc:
        for d in exc.diagnostics:
            print(d, file=sys.stderr)
        return 1
    diags = isa.validate(program, cfg)
    if not args.check_only:
        for idx, line in enumerate(isa.disassemble(program).splitlines()):
            print(f"{idx:4d}  {line}")
    for d in diags:
        print(d, file=sys.stderr)
    return 1 if diags else 0


def cmd_run(args) -> int:
    cfg, _ = load_config(args.config)
    program = isa.assemble(_read(args.program))
    inits = None
    if args.data:
        inputs = read_data_csv(args.data)
        if inputs.vec_len != cfg.vec_len:
            raise CliError(f"data file has {inputs.vec_len} lanes, "
                           f"config expects {cfg.vec_len}")
        inits = kernel.data_initializers(inputs)
    observe = _parse_observe(args.observe, cfg)
    try:
        report = core.run(program, cfg, inputs=inits, observe=observe,
                          max_cycles=args.max_cycles)
    except core.ValidationError as exc:
        for d in exc.diagnostics:
            print(d, file=sys.stderr)
        return 1
    except (core.SimulationFault, core.SimulationTimeout) as exc:
        print(exc, file=sys.stderr)
        return 2
    if report.flags.div_by_zero:
        print("warning: division by zero occurred during execution",
              file=sys.stderr)
    if report.flags.overflow:
        print("warning: arithmetic saturation occurred during execution",
              file=sys.stderr)
    _write_out(args.out, json.dumps(_report_dict(report), indent=2))
    return 0


def cmd_sweep(args) -> int:
    cfg, cal = load_config(args.config)
    program = isa.assemble(_read(args.program))
    inits = None
    if args.data:
        inits = kernel.data_initializers(read_data_csv(args.data))
    configs = [cfg.with_mix(*mix) for mix in parse_mix_spec(args.mixes)]
    points = dse.sweep(program, configs, cal, inputs=inits)
    frontier = {id(p) for p in dse.pareto(points)}
    lines = ["label,n_add,n_mul,n_div,latency_cycles,slices,on_pareto"]
    for p in points:
        lines.append(f"{p.label},{p.n_add},{p.n_mul},{p.n_div},"
                     f"{p.latency_cycles},{p.slices},"
                     f"{'true' if id(p) in frontier else 'false'}")
    _write_out(args.out, "\n".join(lines))
    return 0


def cmd_compare(args) -> int:
    cfg, cal = load_config(args.config)
    inputs = (read_data_csv(args.data) if args.data
              else kernel.generate_inputs(cfg.vec_len, seed=0))
    program = kernel.emit_program(cfg.vec_len, s_k=inputs.s_k)
    inits = kernel.data_initializers(inputs)

    graph = kernel.dataflow_graph(replication=cfg.vec_len)
    tiled_lat = archmodels.tiled_latency(graph, cfg, barrier_cost=args.barrier)
    tiled_slices = resources.estimate_tiled(graph, cal).slices

    seq_cfg = archmodels.sequential_config(cfg)
    seq_lat = core.run(program, seq_cfg, inputs=inits).total_cycles
    seq_slices = resources.estimate_sequential(cal).slices

    vec_lat = core.run(program, cfg, inputs=inits).total_cycles
    vec_slices = resources.estimate_vector(cfg, cal).slices

    out = {
        "schema_version": SCHEMA_VERSION,
        "architectures": {
            "tiled": {"latency_cycles": tiled_lat, "slices": tiled_slices},
            "sequential": {"latency_cycles": seq_lat, "slices": seq_slices},
            "vector": {"label": cfg.mix_label, "latency_cycles": vec_lat,
                       "slices": vec_slices},
        },
        "ratios": {
            "latency_sequential_over_vector": round(seq_lat / vec_lat, 4),
            "slices_vector_over_sequential": round(vec_slices / seq_slices, 4),
            "latency_sequential_over_tiled": round(seq_lat / tiled_lat, 4),
            "slices_tiled_over_sequential": round(tiled_slices / seq_slices, 4),
        },
    }
    _write_out(args.out, json.dumps(out, indent=2))
    return 0


def cmd_project(args) -> int:
    speedup = math.inf if args.speedup in ("inf", None) else float(args.speedup)
    out: dict = {"schema_version": SCHEMA_VERSION}
    try:
        if args.fraction is not None:
            out["overall_speedup"] = round(
                dse.amdahl(args.fraction, speedup), 6)
            out["amdahl_fraction"] = args.fraction
        if args.budget is not None:
            if args.latency is None or args.slices is None:
                raise CliError("--budget requires --latency and --slices")
            point = dse.DesignPoint(label="point", n_add=None, n_mul=None,
                                    n_div=None, latency_cycles=args.latency,
                                    slices=args.slices)
            proj = dse.throughput_projection(
                point, args.budget, args.clock,
                amdahl_fraction=args.fraction or 0.0,
                kernel_speedup=1.0 if args.fraction is None else speedup)
            out["cores"] = proj.cores
            out["calls_per_second"] = proj.calls_per_second
            out["clock_mhz"] = proj.clock_mhz
    except ValueError as exc:
        raise CliError(str(exc))
    if len(out) == 1:
        raise CliError("nothing to project: give --fraction and/or --budget")
    _write_out(args.out, json.dumps(out, indent=2))
    return 0


def cmd_kernel_gen(args) -> int:
    inputs = kernel.generate_inputs(args.veclen, args.seed)
    program = kernel.emit_program(args.veclen, s_k=inputs.s_k)
    expected = kernel.oracle(inputs)
    _write_out(args.out_prefix + ".asm", isa.disassemble(program))
    write_data_csv(args.out_prefix + "_data.csv", inputs)
    with open(args.out_prefix + "_expected.csv", "w", newline="",
              encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["out"])
        for x in expected:
            writer.writerow([repr(x)])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vproc",
        description="Vector soft-processor simulator and design-space explorer")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("asm", help="assemble and validate a program")
    p.add_argument("program")
    p.add_argument("--config")
    p.add_argument("--check-only", action="store_true")
    p.set_defaults(func=cmd_asm)

    p = sub.add_parser("run", help="simulate a program and write a report")
    p.add_argument("program")
    p.add_argument("--config")
    p.add_argument("--data")
    p.add_argument("--observe", help="memory range START:LENGTH to report")
    p.add_argument("--max-cycles", type=int, default=10_000_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="evaluate functional-unit mixes")
    p.add_argument("program")
    p.add_argument("--config")
    p.add_argument("--data")
    p.add_argument("--mixes", required=True,
                   help='"A-M-D,A-M-D,..." or "sym:1,2,4,..."')
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare",
                       help="benchmark kernel on tiled / sequential / vector")
    p.add_argument("--config")
    p.add_argument("--data")
    p.add_argument("--barrier", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("project", help="throughput and whole-app speedup")
    p.add_argument("--latency", type=int)
    p.add_argument("--slices", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--clock", type=float, default=100.0)
    p.add_argument("--fraction", type=float)
    p.add_argument("--speedup", help='kernel speedup factor or "inf"')
    p.add_argument("--out")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("kernel-gen",
                       help="emit benchmark program, inputs and oracle outputs")
    p.add_argument("--veclen", type=int, default=24)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_kernel_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, isa.AssemblyError, kernel.LayoutError,
            resources.CalibrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (core.SimulationFault, core.SimulationTimeout) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
