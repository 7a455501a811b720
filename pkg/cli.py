"""Command-line interface: `atomc compile | tradeoff | validate-moves | generate`.

Reports go to files (--out, --csv, --qasm-out) or to stdout; progress and
errors go to stderr. Exit status is 0 on success, 1 on a failed run or
invalid moves, 2 on usage errors.
"""

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from dotenv import load_dotenv
from pydantic import ValidationError

from benchmarks import BENCHMARK_KINDS, DEFAULT_TWOLOCAL_REPS, generate
from config import (
    DEFAULT_DECAY, DEFAULT_GRID_COLS, DEFAULT_GRID_ROWS, DEFAULT_HARDWARE, DEFAULT_LAYOUT_STRATEGY,
    DEFAULT_LOOKAHEAD, DEFAULT_SCENARIO, IDLE_MODE_ALIASES, IDLE_MODES, MAX_PARALLEL_POINTS,
    SCENARIOS, RunConfig, get_config,
)
from errors import AtomcError, StudyError
from pipeline import CompilationPipeline, load_circuit, prepare_circuit, resolve_spec
from qasm_io import emit_qasm
from reports import to_csv, to_json, write_json, write_text
from shuttle import AodGrid, Move, validate_move_sequence
from studies import STUDIES, get_study

Number = Union[int, float]


def _fail(message: str) -> int:
    print(f"❌ {message}", file=sys.stderr)
    return 1


def _emit(text: str, path: Optional[str]) -> int:
    if path is None:
        sys.stdout.write(text)
        return 0
    result = write_text(path, text)
    if result["status"] != "success":
        return _fail(result["message"])
    print(f"📝 wrote {path}", file=sys.stderr)
    return 0


def _number(token: str) -> Number:
    try:
        return int(token)
    except ValueError:
        return float(token)


def parse_values(text: str) -> List[Number]:
    """Comma-separated values; `a:b` or `a:b:step` expands to an inclusive range.

    Raises:
        StudyError: malformed token or an empty range.
    """
    values: List[Number] = []
    for token in (t.strip() for t in text.split(",")):
        if not token:
            continue
        try:
            if ":" in token:
                parts = [_number(p) for p in token.split(":")]
                if len(parts) not in (2, 3):
                    raise ValueError(token)
                start, stop = parts[0], parts[1]
                step = parts[2] if len(parts) == 3 else 1
                if step <= 0 or stop < start:
                    raise StudyError(f"empty or invalid range '{token}'")
                count = int((stop - start) / step + 1e-9) + 1
                values.extend(start + i * step for i in range(count))
            else:
                values.append(_number(token))
        except ValueError as exc:
            raise StudyError(f"cannot parse value '{token}'") from exc
    if not values:
        raise StudyError("empty parameter range")
    return values


def _add_input_args(parser: argparse.ArgumentParser, required: bool) -> None:
    source = parser.add_mutually_exclusive_group(required=required)
    source.add_argument("--qasm", help="OpenQASM 2.0 input file")
    source.add_argument("--bench", choices=BENCHMARK_KINDS, help="generated benchmark kind")
    parser.add_argument("--n", type=int, help="qubit count for --bench")
    parser.add_argument("--no-lower", action="store_true",
                        help="schedule the input gates as given instead of lowering to R1Q/CZ")


def _add_hardware_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--hw", default=DEFAULT_HARDWARE,
                        help=f"preset name or hardware JSON path (default: {DEFAULT_HARDWARE})")
    parser.add_argument("--rows", type=int, help="grid rows (default: fit the circuit)")
    parser.add_argument("--cols", type=int, help="grid columns (default: fit the circuit)")
    parser.add_argument("--rint", type=float, help="interaction radius override, units of d")
    parser.add_argument("--rre", type=float, help="restriction radius override, units of d")
    parser.add_argument("--idle-mode", choices=IDLE_MODES + tuple(IDLE_MODE_ALIASES),
                        help="idle-time accounting (default: the hardware spec's)")


def build_parser() -> argparse.ArgumentParser:
    seed = get_config()["seed"]
    parser = argparse.ArgumentParser(prog="atomc", description="Neutral-atom compilation toolkit")
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    compile_cmd = commands.add_parser("compile", help="lower, map, schedule and score a circuit")
    _add_input_args(compile_cmd, required=True)
    _add_hardware_args(compile_cmd)
    compile_cmd.add_argument("--scenario", choices=SCENARIOS, default=DEFAULT_SCENARIO,
                             help="execute inserted SWAPs as gates or as shuttles")
    compile_cmd.add_argument("--seed", type=int, default=seed)
    compile_cmd.add_argument("--layout", choices=("identity", "random", "affinity"),
                             default=DEFAULT_LAYOUT_STRATEGY)
    compile_cmd.add_argument("--lookahead", type=int, default=DEFAULT_LOOKAHEAD,
                             help="lookahead window in gates")
    compile_cmd.add_argument("--decay", type=float, default=DEFAULT_DECAY,
                             help="per-swap decay increment")
    compile_cmd.add_argument("--cp-native", action="store_true", help="keep controlled-phase gates")
    compile_cmd.add_argument("--decompose-multiqubit", action="store_true",
                             help="replace CCZ/CCCZ by their CZ blocks")
    compile_cmd.add_argument("--out", help="JSON report path (default: stdout)")
    compile_cmd.add_argument("--csv", help="schedule timeline CSV path")
    compile_cmd.add_argument("--qasm-out", help="mapped circuit as QASM on trap indices")
    compile_cmd.set_defaults(handler=cmd_compile)

    tradeoff = commands.add_parser("tradeoff", help="run a trade-off sweep")
    tradeoff.add_argument("kind", choices=tuple(STUDIES))
    _add_input_args(tradeoff, required=False)
    _add_hardware_args(tradeoff)
    tradeoff.add_argument("--seed", type=int, default=seed)
    tradeoff.add_argument("--values", help="sweep points, e.g. 1,1.5,2 or 1:600")
    tradeoff.add_argument("--sweep", choices=("rint", "rre"), default="rint",
                          help="radius swept by teff-sweep")
    tradeoff.add_argument("--dist", type=float, help="shuttle distance in μm for velocity (default: 2d)")
    tradeoff.add_argument("--parallel", type=int, default=MAX_PARALLEL_POINTS,
                          help="sweep points evaluated concurrently")
    tradeoff.add_argument("--csv", help="CSV output path (default: stdout)")
    tradeoff.add_argument("--out", help="also write rows as JSON")
    tradeoff.set_defaults(handler=cmd_tradeoff)

    moves = commands.add_parser("validate-moves", help="check an AOD move sequence")
    moves.add_argument("path", help='JSON file {"grid": {"x", "y", "d_min"}, "moves": [{"dx", "dy"}]}')
    moves.add_argument("--d-min", type=float, help="override the grid's minimum spacing (μm)")
    moves.add_argument("--out", help="JSON result path (default: stdout)")
    moves.set_defaults(handler=cmd_validate_moves)

    gen = commands.add_parser("generate", help="write a benchmark circuit as QASM")
    gen.add_argument("kind", choices=BENCHMARK_KINDS)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, default=seed)
    gen.add_argument("--no-final-swaps", action="store_true", help="qft without the final swaps")
    gen.add_argument("--reps", type=int, default=DEFAULT_TWOLOCAL_REPS, help="twolocal repetitions")
    gen.add_argument("--out", help="QASM output path (default: stdout)")
    gen.set_defaults(handler=cmd_generate)
    return parser


def cmd_compile(args: argparse.Namespace) -> int:
    try:
        cfg = RunConfig(
            qasm=args.qasm, bench=args.bench, n=args.n, hardware=args.hw,
            rows=args.rows, cols=args.cols, r_int=args.rint, r_re=args.rre,
            idle_mode=args.idle_mode, scenario=args.scenario, seed=args.seed,
            layout_strategy=args.layout, lookahead=args.lookahead, decay=args.decay,
            lower=not args.no_lower, cp_native=args.cp_native,
            multiqubit_native=not args.decompose_multiqubit,
            out=args.out, csv=args.csv, qasm_out=args.qasm_out,
        )
    except ValidationError as exc:
        print(f"❌ invalid options: {exc}", file=sys.stderr)
        return 2
    result = CompilationPipeline(cfg).run()
    if result["status"] != "success":
        return 1
    if result["text"] is not None:
        sys.stdout.write(result["text"])
    return 0


def cmd_tradeoff(args: argparse.Namespace) -> int:
    study_cls = get_study(args.kind)
    try:
        values = parse_values(args.values) if args.values else None
        circuit = None
        bench = None
        if args.qasm:
            circuit = prepare_circuit(load_circuit(qasm=args.qasm), not args.no_lower)
        elif args.bench:
            if args.n is None:
                raise StudyError("--bench requires --n")
            bench = (args.bench, args.n)
        if study_cls.needs_circuit:
            n = circuit.n if circuit is not None else (bench or study_cls.default_bench)[1]
        else:
            n = DEFAULT_GRID_ROWS * DEFAULT_GRID_COLS
        spec = resolve_spec(args.hw, n, args.rows, args.cols, args.rint, args.rre, args.idle_mode)
    except (AtomcError, ValueError) as exc:
        return _fail(str(exc))

    study = study_cls(
        spec, seed=args.seed, circuit=circuit, bench=bench, lower=not args.no_lower,
        options={"sweep": args.sweep, "dist_um": args.dist}, max_parallel=args.parallel,
    )
    result = study.run(values)
    if result["status"] != "success":
        return 1
    if args.out:
        written = write_json(args.out, {
            "study": result["study"], "hardware": spec.to_dict(), "seed": args.seed,
            "columns": result["columns"], "rows": result["rows"],
        })
        if written["status"] != "success":
            return _fail(written["message"])
    return _emit(to_csv(result["columns"], result["rows"]), args.csv)


def _load_moves(path: str, d_min: Optional[float]) -> Dict[str, Any]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    grid_data = dict(data["grid"])
    if d_min is not None:
        grid_data["d_min"] = d_min
    return {
        "grid": AodGrid.model_validate(grid_data),
        "moves": [Move.model_validate(m) for m in data.get("moves", [])],
    }


def cmd_validate_moves(args: argparse.Namespace) -> int:
    try:
        loaded = _load_moves(args.path, args.d_min)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        return _fail(f"malformed move file '{args.path}': {exc}")
    violations = validate_move_sequence(loaded["grid"], loaded["moves"])
    for violation in violations:
        print(f"❌ {violation}", file=sys.stderr)
    status = _emit(to_json({
        "valid": not violations,
        "n_moves": len(loaded["moves"]),
        "violations": [asdict(v) for v in violations],
    }), args.out)
    if status:
        return status
    if violations:
        return 1
    print(f"✅ {len(loaded['moves'])} moves valid", file=sys.stderr)
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        circuit = generate(args.kind, args.n, seed=args.seed,
                           final_swaps=not args.no_final_swaps, reps=args.reps)
    except AtomcError as exc:
        return _fail(str(exc))
    return _emit(emit_qasm(circuit), args.out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for atomc."""
    load_dotenv()
    try:
        parser = build_parser()
    except ValueError as exc:
        return _fail(f"bad environment: {exc}")
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr,
                            format="%(levelname)s %(name)s: %(message)s")
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
