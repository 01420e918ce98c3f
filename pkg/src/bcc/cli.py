"""Command-line frontend.

Exit codes: 0 on success, 1 for invalid input, 2 when a verification or claim
check fails. ``--format json`` prints one JSON document with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Sequence

import yaml

from .circuit import CircuitError, Scheme, bell_experiment, prep_circuit, prep_zero_plus_circuit
from .code import (
    BccSpec,
    InvalidSpecError,
    code_from_spec,
    hadamard_swap_permutation,
    is_automorphism,
    prepared_logical_state,
    self_orthogonal,
)
from .distance import distance
from .experiment import log_spaced, sweep
from .families import (
    cyclic_cluster_code,
    cyclic_cluster_transform,
    five_qubit_code,
    multiplier_hadamard_holds,
    plaquettes_in_stabilizer,
    rotated_toric_code,
    rotated_toric_offsets,
)
from .faults import single_fault_exhaustion
from .search import SearchTask, default_jobs, run_search

OUTPUT_DIR_ENV = "BCC_OUTPUT_DIR"

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CHECK_FAILED = 2


class _ValidationError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _load_spec(args: argparse.Namespace) -> BccSpec:
    """From ``--spec FILE`` (YAML or JSON with ``n`` and ``offsets``) or ``-n/-S``."""
    if getattr(args, "spec", None):
        data = yaml.safe_load(Path(args.spec).read_text())
        if not isinstance(data, dict) or "n" not in data or "offsets" not in data:
            raise _ValidationError(f"{args.spec}: expected keys 'n' and 'offsets'")
        return BccSpec(int(data["n"]), tuple(int(s) for s in data["offsets"]))
    if args.n is None or args.S is None:
        raise _ValidationError("give either --spec FILE or both -n and -S")
    return BccSpec(args.n, tuple(args.S))


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("-n", type=int, help="number of qubits (even)")
    p.add_argument("-S", type=_int_list, help="comma-separated odd offsets, negatives allowed")
    p.add_argument("--spec", help="YAML/JSON file with 'n' and 'offsets'")


def _emit(args: argparse.Namespace, payload: dict[str, Any], human: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _params(n: int, k: int, d: int | None) -> str:
    return f"[[{n},{k},{d if d is not None else '?'}]]"


def cmd_build(args: argparse.Namespace) -> int:
    spec = _load_spec(args)
    code = code_from_spec(spec)
    swap = hadamard_swap_permutation(spec)
    payload = {
        "n": spec.n,
        "offsets": list(spec.offsets),
        "k": code.k,
        "self_orthogonal": self_orthogonal(code),
        "prepared_state": prepared_logical_state(spec).value,
        "hadamard_swap": swap,
        "hadamard_swap_automorphism": is_automorphism(code, swap, then_transversal_h=True),
        "x_generators": [g.to_string() for g in code.x_generators()],
        "z_generators": [g.to_string() for g in code.z_generators()],
        "logicals": [{"X": lx.to_string(), "Z": lz.to_string()} for lx, lz in code.logicals],
    }
    lines = [
        f"code n={spec.n} S={list(spec.offsets)} k={code.k}",
        f"self_orthogonal: {payload['self_orthogonal']}",
        f"prepared state: {payload['prepared_state']}",
        f"hadamard-swap automorphism: {payload['hadamard_swap_automorphism']}",
        "X generators:",
        *("  " + s for s in payload["x_generators"]),
        "Z generators:",
        *("  " + s for s in payload["z_generators"]),
        "logicals:",
        *(f"  X{i + 1}={p['X']}  Z{i + 1}={p['Z']}" for i, p in enumerate(payload["logicals"])),
    ]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if payload["hadamard_swap_automorphism"] else EXIT_CHECK_FAILED


def cmd_distance(args: argparse.Namespace) -> int:
    spec = _load_spec(args)
    if args.w_max is not None and args.w_max < 1:
        raise _ValidationError("--w-max must be >= 1")
    code = code_from_spec(spec)
    d = distance(code, args.w_max)
    cap = args.w_max if args.w_max is not None else min(len(a) for a in code.adjacency) + 1
    payload = {"n": spec.n, "offsets": list(spec.offsets), "k": code.k, "d": d, "w_max": cap}
    _emit(args, payload, str(d) if d is not None else f"> {cap}")
    return EXIT_OK


def _family_rotated_toric(d: int) -> tuple[dict[str, Any], list[str]]:
    n, signed = rotated_toric_offsets(d)
    code = rotated_toric_code(d)
    dist = distance(code)
    checks = {
        "parameters": code.k == 2 and dist == d,
        "plaquettes": plaquettes_in_stabilizer(code, d),
        "multiplier_hadamard": multiplier_hadamard_holds(code, d),
        "hadamard_swap": is_automorphism(code, hadamard_swap_permutation(code), then_transversal_h=True),
    }
    payload = {
        "family": "rotated-toric",
        "d": d,
        "n": n,
        "offsets_signed": signed,
        "offsets": sorted({s % n for s in signed}),
        "k": code.k,
        "distance": dist,
        "checks": checks,
    }
    lines = [
        f"rotated toric d={d}: n={n} S={payload['offsets']} (signed {signed})",
        f"parameters {_params(n, code.k, dist)}",
    ]
    return payload, lines


def _family_cyclic_cluster(d: int) -> tuple[dict[str, Any], list[str]]:
    n, signed = rotated_toric_offsets(d)
    half, T = cyclic_cluster_transform(n, signed)
    cc = cyclic_cluster_code(half, T)
    dist = cc.distance()
    checks = {"logical_count": cc.logical_count() == 1}
    if d == 3:
        checks["five_qubit_code"] = cc.same_group(five_qubit_code())
    payload = {
        "family": "cyclic-cluster",
        "d": d,
        "n": half,
        "source_n": n,
        "source_offsets_signed": signed,
        "T": T,
        "k": cc.logical_count(),
        "distance": dist,
        "generators": [g.to_string() for g in cc.generators],
        "checks": checks,
    }
    lines = [f"cyclic cluster from n={n} S={signed}: {half} qubits, T={T}", f"parameters {_params(half, cc.logical_count(), dist)}"]
    return payload, lines


def cmd_family(args: argparse.Namespace) -> int:
    if args.d < 3 or args.d % 2 == 0:
        raise _ValidationError(f"d must be odd and >= 3, got {args.d}")
    build = _family_rotated_toric if args.name == "rotated-toric" else _family_cyclic_cluster
    payload, lines = build(args.d)
    ok = all(payload["checks"].values())
    payload["verified"] = ok
    lines += [f"  {name}: {'pass' if v else 'FAIL'}" for name, v in payload["checks"].items()]
    lines.append("verified" if ok else "verification FAILED")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_search(args: argparse.Namespace) -> int:
    task = SearchTask(args.n, args.size, args.target_d, symmetry_reduce=not args.no_symmetry)
    hits = run_search(task, jobs=args.jobs or default_jobs())
    payload = {
        "n": args.n,
        "s_size": args.size,
        "target_d": args.target_d,
        "hits": [h.to_dict() for h in hits],
    }
    lines = [f"search n={args.n} |S|={args.size} d>={args.target_d}: {len(hits)} class(es)"]
    for h in hits:
        lines.append(
            f"  S={list(h.offsets)} d={h.d} orbit={h.orbit_size} self_orthogonal={h.self_orthogonal} "
            f"state={h.prepared_state} min_stab_weight={h.min_stabilizer_weight}"
        )
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _sweep_path(args: argparse.Namespace, spec: BccSpec) -> Path:
    if args.out:
        return Path(args.out)
    base = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    name = f"sweep_n{spec.n}_S{'-'.join(map(str, spec.offsets))}_{args.scheme}_{args.basis}_seed{args.seed}.csv"
    return base / name


def cmd_simulate(args: argparse.Namespace) -> int:
    spec = _load_spec(args)
    ps = args.p if args.p else log_spaced(args.p_min, args.p_max, args.points)
    if any(p <= 0 or p > 1 for p in ps):
        raise _ValidationError("every p must lie in (0, 1] (the fit is on log p)")
    if args.shots < 1:
        raise _ValidationError("--shots must be >= 1")
    result = sweep(
        spec, args.scheme, args.basis, ps, args.shots, args.seed,
        min_failures=args.min_failures, step=args.step, jobs=args.jobs or default_jobs(),
    )
    path = _sweep_path(args, spec)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(result.to_csv())
    for s in result.points:
        if s.accepted == 0:
            print(f"warning: no accepted shots at p={s.p}", file=sys.stderr)
    payload = {
        "n": spec.n,
        "offsets": list(spec.offsets),
        "scheme": args.scheme,
        "basis": args.basis,
        "seed": args.seed,
        "shots": args.shots,
        "points": [s.to_dict() for s in result.points],
        "exponent": result.exponent,
        "fitted_p": list(result.fitted),
        "output": str(path),
    }
    lines = [f"{'p':>10} {'accepted':>10} {'failures':>9} {'rate':>11}  95% CI"]
    for s in result.points:
        rate = "undefined" if s.rate is None else f"{s.rate:.3e}"
        ci = "" if s.rate is None else f"[{s.ci_low:.2e}, {s.ci_high:.2e}]"
        lines.append(f"{s.p:>10.3e} {s.accepted:>10} {s.logical_failures:>9} {rate:>11}  {ci}")
    exp = "n/a (fewer than 3 points with enough failures)" if result.exponent is None else f"{result.exponent:.3f}"
    lines += [f"fitted exponent: {exp}", f"seed: {args.seed}", f"written: {path}"]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_circuit(args: argparse.Namespace) -> int:
    spec = _load_spec(args)
    if args.kind == "prep":
        circ = prep_circuit(spec)
    elif args.kind == "zero-plus":
        circ = prep_zero_plus_circuit(spec)
    else:
        circ, _ = bell_experiment(spec, args.scheme, args.basis, args.step)
    text = circ.to_text()
    if args.out:
        Path(args.out).write_text(text)
    if args.format == "json":
        print(json.dumps({"num_qubits": circ.num_qubits, "counts": circ.counts(), "text": text}, sort_keys=True))
    elif not args.out:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_faults(args: argparse.Namespace) -> int:
    spec = _load_spec(args)
    outcomes = single_fault_exhaustion(spec, args.scheme, args.step)
    bound = args.bound if args.bound is not None else len(spec.offsets) // 2
    undetected = [o for o in outcomes if not o.detected]
    worst = max((o.worst for o in undetected), default=0)
    ok = worst <= bound
    payload = {
        "n": spec.n,
        "offsets": list(spec.offsets),
        "scheme": args.scheme,
        "faults": len(outcomes),
        "detected": len(outcomes) - len(undetected),
        "worst_undetected_type_weight": worst,
        "worst_undetected_union_weight": max((o.worst_union for o in undetected), default=0),
        "bound": bound,
        "passed": ok,
    }
    human = (
        f"{payload['faults']} single faults, {payload['detected']} detected; "
        f"worst undetected residual {worst} (union {payload['worst_undetected_union_weight']}), "
        f"bound {bound}: {'pass' if ok else 'FAIL'}"
    )
    _emit(args, payload, human)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("-v", "--verbose", action="store_true")
    parser = argparse.ArgumentParser(prog="bcc", description="Bipartite cyclic cluster codes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="construct a code and report its properties")
    _add_spec_args(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("distance", parents=[common], help="exact code distance")
    _add_spec_args(p)
    p.add_argument("--w-max", type=int, default=None)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("family", parents=[common], help="build and verify a known family member")
    p.add_argument("name", choices=("rotated-toric", "cyclic-cluster"))
    p.add_argument("-d", type=int, required=True)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("search", parents=[common], help="exhaustive search over offset sets")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--size", "-k", type=int, required=True, help="|S|")
    p.add_argument("--target-d", "-d", type=int, required=True)
    p.add_argument("--jobs", "-j", type=int, default=None)
    p.add_argument("--no-symmetry", action="store_true", help="evaluate every subset")
    p.set_defaults(func=cmd_search)

    schemes = [s.value for s in Scheme]
    p = sub.add_parser("simulate", parents=[common], help="Monte-Carlo sweep of the Bell-pair experiment")
    _add_spec_args(p)
    p.add_argument("--scheme", choices=schemes, default="none")
    p.add_argument("--basis", choices=("X", "Z"), default="Z")
    p.add_argument("--p", type=_float_list, default=None, help="comma-separated error rates")
    p.add_argument("--p-min", type=float, default=1e-3)
    p.add_argument("--p-max", type=float, default=3e-2)
    p.add_argument("--points", type=int, default=6)
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step", type=int, default=3)
    p.add_argument("--min-failures", type=int, default=20)
    p.add_argument("--jobs", "-j", type=int, default=None)
    p.add_argument("--out", default=None, help=f"CSV path (default: ${OUTPUT_DIR_ENV} or cwd)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("circuit", parents=[common], help="emit a preparation or experiment circuit")
    _add_spec_args(p)
    p.add_argument("--kind", choices=("prep", "zero-plus", "bell"), default="prep")
    p.add_argument("--scheme", choices=schemes, default="none")
    p.add_argument("--basis", choices=("X", "Z"), default="Z")
    p.add_argument("--step", type=int, default=3)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_circuit)

    p = sub.add_parser("faults", parents=[common], help="exhaustive single-fault residual analysis")
    _add_spec_args(p)
    p.add_argument("--scheme", choices=schemes, default="none")
    p.add_argument("--step", type=int, default=3)
    p.add_argument("--bound", type=int, default=None, help="residual bound (default |S|/2)")
    p.set_defaults(func=cmd_faults)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; here 2 means a failed check
        return EXIT_INVALID if exc.code == 2 else int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (_ValidationError, InvalidSpecError, CircuitError, ValueError, OSError, yaml.YAMLError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
