"""Command-line interface.

One command per run, one JSON report on stdout; human-readable tables go to
stderr under --verbose. Exit codes: 0 YES (or plain success for commands
without a verdict), 1 NO, 2 simulator/oracle disagreement, 3 bad input,
4 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace

from .analysis import feasibility_report, slow_light_rescale
from .errors import (
    InvalidPerturbation,
    InvalidValue,
    Overflow,
    ParseError,
    ResourceLimit,
)
from .model import (
    Instance,
    PhysicalParams,
    Verdict,
    cable_lengths,
    compile_epsilon_layout,
    compile_layout,
    load_instance_file,
    normalize,
)
from .oracles import OracleResult, solve_auto, solve_bruteforce, solve_dp, solve_mitm
from .rational import fraction_str, to_fraction
from .sim import (
    detect,
    epsilon_false_positive_demo,
    perturb_and_classify,
    propagate,
    propagate_epsilon,
    write_profile,
)

EXIT_YES = 0
EXIT_OK = 0
EXIT_NO = 1
EXIT_DISAGREEMENT = 2
EXIT_INPUT_ERROR = 3
EXIT_RESOURCE_ERROR = 4

ORACLES = {
    "dp": solve_dp,
    "brute": solve_bruteforce,
    "mitm": solve_mitm,
    "auto": solve_auto,
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("file", help="instance file (JSON with 'set' and 'target')")
    shared.add_argument("--k", type=int, default=None, metavar="QUANTA",
                        help="offset added to every arc (default 1)")
    shared.add_argument("--quantum-s", default=None, metavar="SECONDS",
                        help="delay quantum in seconds (default 1e-12)")
    shared.add_argument("--velocity-factor", default=None, metavar="F",
                        help="light speed fraction in fiber (default 1.0)")
    shared.add_argument("--slow-light", default=None, metavar="F",
                        help="additional slow-light factor applied on top")
    shared.add_argument("--oracle", choices=sorted(ORACLES), default="auto",
                        help="reference solver (default auto)")
    shared.add_argument("--dump-profile", default=None, metavar="PATH",
                        help="write the arrival profile as '<time> <count>' lines")
    shared.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    shared.add_argument("--verbose", action="store_true",
                        help="human-readable tables on stderr")

    parser = argparse.ArgumentParser(
        prog="lightsum",
        description="Simulate an optical delay-line device deciding subset-sum instances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[shared],
                       help="decide the instance and cross-check against an oracle")
    p.add_argument("--max-cable-m", default=None, metavar="METERS",
                   help="also include a feasibility report for this cable budget")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compile", parents=[shared],
                       help="print the stage table and physical cable lengths")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("analyze", parents=[shared],
                       help="feasibility bounds for a physical build")
    p.add_argument("--max-cable-m", default="3000", metavar="METERS",
                   help="longest available cable (default 3000)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("demo-epsilon", parents=[shared],
                       help="show the spurious detection of the epsilon device")
    p.add_argument("--epsilon", type=int, default=1, metavar="QUANTA",
                   help="skip-arc length of the epsilon device (default 1)")
    p.set_defaults(func=cmd_demo_epsilon)

    p = sub.add_parser("perturb", parents=[shared],
                       help="classify detection under random cable-length errors")
    p.add_argument("--max-error-m", required=True, metavar="METERS",
                   help="maximum absolute length error per cable")
    p.add_argument("--trials", type=int, default=1000, help="number of trials (default 1000)")
    p.set_defaults(func=cmd_perturb)
    return parser


def _load(args: argparse.Namespace) -> tuple[Instance, PhysicalParams]:
    """File params override the defaults; explicit CLI flags override the file."""
    raw, params = load_instance_file(args.file, PhysicalParams())
    overrides: dict[str, object] = {}
    if args.k is not None:
        overrides["offset_k_quanta"] = args.k
    if args.quantum_s is not None:
        overrides["delay_quantum_s"] = to_fraction(args.quantum_s)
    if args.velocity_factor is not None:
        overrides["velocity_factor"] = to_fraction(args.velocity_factor)
    if overrides:
        params = replace(params, **overrides)  # type: ignore[arg-type]
    if args.slow_light is not None:
        params = slow_light_rescale(params, args.slow_light)
    return normalize(raw), params


def _emit(report: dict[str, object]) -> None:
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _vprint(args: argparse.Namespace, text: str) -> None:
    if args.verbose:
        sys.stderr.write(text + "\n")


def _warn_no_profile(args: argparse.Namespace) -> None:
    if args.dump_profile:
        sys.stderr.write(f"warning: {args.command} produces no profile; --dump-profile ignored\n")


def _instance_echo(instance: Instance) -> dict[str, object]:
    return {
        "values": list(instance.values),
        "target": instance.target,
        "scale": fraction_str(instance.scale),
    }


def cmd_solve(args: argparse.Namespace) -> int:
    timing: dict[str, float] = {}

    def timed(name: str, fn, *fn_args):
        start = time.perf_counter()
        result = fn(*fn_args)
        timing[name + "_s"] = time.perf_counter() - start
        return result

    instance, params = timed("normalize", _load, args)
    layout = timed("compile", compile_layout, instance, params)
    profile = timed("propagate", propagate, layout)
    detection = timed("detect", detect, profile, instance, params)
    oracle: OracleResult = timed("oracle", ORACLES[args.oracle], instance)
    agreement = detection.verdict is oracle.verdict

    if args.dump_profile:
        with open(args.dump_profile, "w", encoding="utf-8") as fh:
            write_profile(profile, fh)

    feasibility = None
    if args.max_cable_m is not None:
        feasibility = feasibility_report(instance, params, args.max_cable_m).to_json_dict()

    _emit({
        "instance_echo": _instance_echo(instance),
        "simulator": detection.to_json_dict(),
        "oracle": oracle.to_json_dict(),
        "agreement": agreement,
        "feasibility": feasibility,
        "timing": timing,
    })
    _vprint(args, f"n={instance.n} B={instance.target} k={params.offset_k_quanta} "
                  f"profile_entries={len(profile)}")
    _vprint(args, f"simulator={detection.verdict.value} oracle={oracle.verdict.value} "
                  f"({oracle.solver_name}) agreement={agreement}")
    if not agreement:
        sys.stderr.write("simulator and oracle disagree; this is a bug\n")
        return EXIT_DISAGREEMENT
    return EXIT_YES if detection.verdict is Verdict.YES else EXIT_NO


def cmd_compile(args: argparse.Namespace) -> int:
    _warn_no_profile(args)
    instance, params = _load(args)
    layout = compile_layout(instance, params)
    lengths = cable_lengths(layout, params)
    stages = []
    for i, stage in enumerate(layout.stages):
        stages.append({
            "stage": i,
            "value": stage.value,
            "skip_quanta": stage.skip_delay,
            "take_quanta": stage.take_delay,
            "skip_m": fraction_str(lengths[2 * i]),
            "take_m": fraction_str(lengths[2 * i + 1]),
        })
    _emit({
        "instance_echo": _instance_echo(instance),
        "node_count": layout.node_count,
        "quantum_length_m": fraction_str(params.quantum_length_m),
        "stages": stages,
    })
    if args.verbose:
        sys.stderr.write("stage a_i skip_quanta take_quanta skip_m take_m\n")
        for row in stages:
            sys.stderr.write(
                f"{row['stage']} {row['value']} {row['skip_quanta']} "
                f"{row['take_quanta']} {row['skip_m']} {row['take_m']}\n"
            )
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    _warn_no_profile(args)
    instance, params = _load(args)
    report = feasibility_report(instance, params, args.max_cable_m)
    _emit(report.to_json_dict())
    _vprint(args, f"max encodable value: {report.max_encodable_value}")
    _vprint(args, f"answer time: {fraction_str(report.answer_time_s)} s")
    return EXIT_OK


def cmd_demo_epsilon(args: argparse.Namespace) -> int:
    instance, params = _load(args)
    if args.epsilon < 1:
        raise InvalidValue("--epsilon must be >= 1")
    demo = epsilon_false_positive_demo(instance, args.epsilon, params)
    if args.dump_profile:
        profile = propagate_epsilon(compile_epsilon_layout(instance, args.epsilon))
        with open(args.dump_profile, "w", encoding="utf-8") as fh:
            write_profile(profile, fh)
    _emit(demo.to_json_dict())
    _vprint(args, f"epsilon={demo.epsilon_verdict.value} offset={demo.offset_verdict.value} "
                  f"oracle={demo.oracle_verdict.value} spurious={demo.epsilon_spurious}")
    return EXIT_OK if demo.offset_correct else EXIT_DISAGREEMENT


def cmd_perturb(args: argparse.Namespace) -> int:
    _warn_no_profile(args)
    instance, params = _load(args)
    layout = compile_layout(instance, params)
    report = perturb_and_classify(
        layout, instance, params, args.max_error_m, args.trials, args.seed
    )
    _emit(report.to_json_dict())
    _vprint(args, f"misclassified {report.misclassified} of {report.trials} trials")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, InvalidValue, Overflow, InvalidPerturbation) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT_ERROR
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT_ERROR
    except ResourceLimit as exc:
        sys.stderr.write(f"resource limit: {exc}\n")
        return EXIT_RESOURCE_ERROR


if __name__ == "__main__":
    sys.exit(main())
