"""Command-line entry point.

Subcommands: check, encoder, encode, transform, analyze, simulate, search,
equiv, probe-conjecture.  All primary outputs are canonical JSON (sorted
keys, no timestamps), so a fixed seed reproduces byte-identical files.

Exit codes: 0 success, 1 domain error (JSON error payload on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Any, Sequence

from . import serial
from .actions import ActionSpec, invert_action
from .analysis import (
    BudgetExceeded,
    build_windows,
    column_bound,
    default_window,
    distance_profile,
    is_gdp,
    is_mdp_minors,
    is_output_observable,
    singleton_bound,
    window_length,
    window_support,
)
from .erasure import ChannelModel, ErasedWord, channel_erase, decode_stream
from .fields import primitive_element
from .matrices import Matrix, MinorBudgetExceeded, is_superregular
from .polys import PolyMatrix, column_degrees, external_degree
from .search import (
    SearchCriteria,
    are_equivalent,
    check_flag,
    conjecture_probe,
    random_system,
)
from .systems import (
    CodeHandle,
    CompletionError,
    IsoSystem,
    encode as encode_word,
    extract_encoder,
    forward_trajectory,
    is_observable,
    is_reachable,
    membership,
)

__all__ = ["main"]


class DomainError(RuntimeError):
    pass


def _load_system(path: str) -> IsoSystem:
    with open(path, "r", encoding="utf-8") as fh:
        return serial.system_from_json(json.load(fh))


def _emit(payload: Any, out: str | None) -> None:
    text = serial.dumps(payload) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _flags_report(system: IsoSystem, L: int | None) -> dict:
    L = L if L is not None else default_window(system)
    win = build_windows(system, L)
    gdp = is_gdp(system, L)
    report: dict[str, Any] = {
        "n": system.n,
        "k": system.k,
        "delta": system.delta,
        "window_L": L,
        "window_L_formula": window_length(system.n, system.k, system.delta),
        "alpha": win.alpha,
        "reachable": is_reachable(system),
        "observable": is_observable(system),
        "output_observable": is_output_observable(system, L),
        "gdp": gdp.ok,
        "rank_T": win.t.rank(),
        "rank_F": win.f.rank(),
    }
    if gdp.witness is not None:
        report["gdp_witness_columns"] = list(gdp.witness)
    if system.D.is_zero():
        report["mdp_minors"] = None
        report["mdp_note"] = "D = 0: the system cannot carry an MDP code"
    else:
        report["mdp_minors"] = is_mdp_minors(system, L)
    sup = is_superregular(
        win.t, window_support(system.delta, system.n - system.k, system.k, L)
    )
    report["superregular_TL"] = sup.ok
    if sup.witness is not None:
        size, rows, cols = sup.witness
        report["superregular_TL_witness"] = {
            "size": size,
            "rows": list(rows),
            "cols": list(cols),
        }
    if system.spec.r > 64:
        _, cert = primitive_element(system.spec)
        report["field_generator_certificate"] = {
            "certified": cert.certified,
            "order_lower_bound": cert.order_lower_bound,
            "note": cert.note,
        }
    return report


def _format_text(payload: dict) -> str:
    lines = []
    for key in sorted(payload):
        lines.append(f"{key}: {payload[key]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_check(args: argparse.Namespace) -> int:
    system = _load_system(args.system)
    report = _flags_report(system, args.window_L)
    if args.format == "text":
        sys.stdout.write(_format_text(report))
    else:
        _emit(report, args.output)
    return 0


def _cmd_encoder(args: argparse.Namespace) -> int:
    system = _load_system(args.system)
    g = extract_encoder(system)
    payload = {
        "field": serial.field_to_json(system.spec),
        "encoder": serial.polymatrix_to_json(g),
        "column_degrees": [int(d) for d in column_degrees(g)],
        "external_degree": int(external_degree(g)),
    }
    _emit(payload, args.output)
    return 0


def _cmd_encode(args: argparse.Namespace) -> int:
    system = _load_system(args.system)
    obj = json.loads(args.input)
    u = serial.polymatrix_from_json(system.spec, {"rows": system.k, "cols": 1, "entries": obj})
    try:
        v = encode_word(system, u)
    except CompletionError as exc:
        raise DomainError(str(exc)) from exc
    payload = {
        "field": serial.field_to_json(system.spec),
        "codeword": serial.polymatrix_to_json(v),
        "membership": membership(system, v),
    }
    _emit(payload, args.output)
    return 0


def _cmd_transform(args: argparse.Namespace) -> int:
    system = _load_system(args.system)
    with open(args.matrix, "r", encoding="utf-8") as fh:
        mat_obj = json.load(fh)
    matrix = serial.matrix_from_json(system.spec, mat_obj)
    try:
        act = ActionSpec(args.action, matrix)
        if args.invert:
            act = invert_action(act)
        from .actions import apply_action

        transformed = apply_action(system, act)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(str(exc)) from exc
    _emit(serial.system_to_json(transformed), args.output)
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    system = _load_system(args.system)
    L = args.window_L if args.window_L is not None else default_window(system)
    report = _flags_report(system, L)
    win = build_windows(system, L)
    report["omega"] = serial.matrix_to_json(win.omega)
    report["F"] = serial.matrix_to_json(win.f)
    report["T"] = serial.matrix_to_json(win.t)
    report["singleton_bound"] = singleton_bound(system.n, system.k, system.delta)
    report["column_bounds"] = [
        column_bound(system.n, system.k, j) for j in range(L + 1)
    ]
    if args.distances:
        try:
            profile = distance_profile(
                CodeHandle(system), horizon=args.horizon, budget=args.budget
            )
        except BudgetExceeded as exc:
            raise DomainError(str(exc)) from exc
        report["distance_profile"] = {
            "dfree_upper": profile.dfree_upper,
            "dfree_estimate": profile.dfree_estimate,
            "dfree_horizon": profile.dfree_horizon,
            "dfree_converged": profile.dfree_converged,
            "column_distances": list(profile.column_distances),
            "is_mds": profile.is_mds,
            "is_mdp": profile.is_mdp,
        }
    _emit(report, args.output)
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    system = _load_system(args.system)
    if args.length % system.n:
        raise DomainError(f"stream length must be a multiple of n = {system.n}")
    blocks = args.length // system.n
    L = args.window_L if args.window_L is not None else default_window(system)
    rng = random.Random(args.seed)
    inputs = [
        Matrix.from_rows(system.spec, [[system.spec.random_element(rng)] for _ in range(system.k)])
        for _ in range(blocks)
    ]
    outputs, _ = forward_trajectory(system, inputs)
    symbols = []
    for y, u in zip(outputs, inputs):
        symbols.extend(y.column(0))
        symbols.extend(u.column(0))
    if args.model == "iid":
        model = ChannelModel("iid", epsilon=args.erasure_prob)
    else:
        model = ChannelModel("burst", burst_len=args.burst_len, gap=args.burst_gap)
    word = channel_erase(symbols, system.n, model, args.seed)
    report = decode_stream(system, L, word, full_window_jump=args.full_window_jump)
    erased = word.erased_positions()
    mismatches = [
        i
        for i in range(len(symbols))
        if report.recovered[i] is not None and report.recovered[i] != symbols[i]
    ]
    payload = {
        "seed": args.seed,
        "model": args.model,
        "erasure_prob": args.erasure_prob if args.model == "iid" else None,
        "burst": [args.burst_len, args.burst_gap] if args.model == "burst" else None,
        "window_L": L,
        "blocks": blocks,
        "symbols": len(symbols),
        "erased": len(erased),
        "recovered": report.recovered_count,
        "unresolved": len(report.unresolved),
        "unresolved_positions": report.unresolved,
        "failed_windows": list(report.failures),
        "windows_processed": report.windows_processed,
        "mismatches": mismatches,
    }
    if args.dump_stream:
        with open(args.dump_stream, "w", encoding="utf-8") as fh:
            fh.write(serial.stream_to_lines(word))
    _emit(payload, args.report)
    return 0


def _cmd_search(args: argparse.Namespace) -> int:
    field = serial.field_from_json(json.loads(args.field))
    criteria = SearchCriteria(
        field=field,
        n=args.n,
        k=args.k,
        delta=args.delta,
        flags=frozenset(args.flags.split(",")) if args.flags else frozenset(),
        budget=args.budget,
        seed=args.seed,
        window=args.window_L,
    )
    lines = []
    for idx, system in random_system(criteria):
        lines.append(
            json.dumps(
                {"seed": args.seed, "candidate": idx, "system": serial.system_to_json(system)},
                sort_keys=True,
                separators=(",", ":"),
            )
        )
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_equiv(args: argparse.Namespace) -> int:
    s1, s2 = _load_system(args.system1), _load_system(args.system2)
    try:
        verdict = are_equivalent(CodeHandle(s1), CodeHandle(s2))
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    payload: dict[str, Any] = {"equivalent": verdict.equivalent}
    if verdict.permutation is not None:
        payload["permutation"] = list(verdict.permutation)
    if verdict.separating_word is not None:
        payload["separating_word"] = serial.polymatrix_to_json(verdict.separating_word)
        payload["separating_from"] = verdict.separating_from
    _emit(payload, args.output)
    return 0


def _cmd_probe(args: argparse.Namespace) -> int:
    system = _load_system(args.system)
    try:
        report = conjecture_probe(
            system,
            trials=args.trials,
            seed=args.seed,
            kind=args.kind,
            L=args.window_L,
            diagonal_control=args.diagonal_control,
        )
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    payload = dict(report)
    payload["samples"] = [
        {
            "index": s["index"],
            "survives": s["survives"],
            "matrix": serial.matrix_to_json(s["matrix"]),
        }
        for s in report["samples"]
    ]
    payload["candidates"] = [
        {
            "index": c["index"],
            "matrix": serial.matrix_to_json(c["matrix"]),
            "cyclic_order": c["cyclic_order"],
            "cyclic_closure_survives": c["cyclic_closure_survives"],
            "closure_truncated": c["closure_truncated"],
        }
        for c in report["candidates"]
    ]
    _emit(payload, args.output)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoconv",
        description="Convolutional codes from I/S/O linear systems: "
        "construction, group actions, certification, erasure decoding.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, window: bool = True) -> None:
        p.add_argument("--output", "-o", default=None, help="write JSON here instead of stdout")
        if window:
            p.add_argument(
                "--window-L",
                type=int,
                default=None,
                help="window parameter override (default: formula value)",
            )

    p = sub.add_parser("check", help="flags report for a system file")
    p.add_argument("system")
    p.add_argument("--format", choices=("json", "text"), default="json")
    add_common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("encoder", help="extract a minimal encoder G(z)")
    p.add_argument("system")
    add_common(p, window=False)
    p.set_defaults(func=_cmd_encoder)

    p = sub.add_parser("encode", help="encode an information word")
    p.add_argument("system")
    p.add_argument(
        "--input",
        required=True,
        help='k x 1 polynomial vector as JSON entries, e.g. "[[[1]],[[0]]]"',
    )
    add_common(p, window=False)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("transform", help="apply a group action to a system")
    p.add_argument("system")
    p.add_argument("--action", choices=("state", "parity", "information"), required=True)
    p.add_argument("--matrix", required=True, help="matrix JSON file")
    p.add_argument("--invert", action="store_true", help="apply the inverse action")
    add_common(p, window=False)
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("analyze", help="window matrices, flags, bounds, distances")
    p.add_argument("system")
    p.add_argument("--distances", action="store_true", help="include the distance profile")
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)
    add_common(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("simulate", help="erasure channel + sliding-window decode")
    p.add_argument("--system", required=True)
    p.add_argument("--length", type=int, required=True, help="stream length in symbols")
    p.add_argument("--erasure-prob", type=float, default=0.05)
    p.add_argument("--model", choices=("iid", "burst"), default="iid")
    p.add_argument("--burst-len", type=int, default=2)
    p.add_argument("--burst-gap", type=int, default=30)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--report", default=None, help="write the report JSON here")
    p.add_argument("--dump-stream", default=None, help="write the erased stream (JSON lines)")
    p.add_argument("--full-window-jump", action="store_true")
    p.add_argument("--window-L", type=int, default=None)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("search", help="seeded random search for systems with flags")
    p.add_argument("--field", required=True, help='field JSON, e.g. \'{"p":3,"r":1}\'')
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--flags", default="", help="comma-separated flag names")
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    add_common(p)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("equiv", help="code equivalence of two system files")
    p.add_argument("system1")
    p.add_argument("system2")
    add_common(p, window=False)
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("probe-conjecture", help="sample non-diagonal actions against MDP")
    p.add_argument("system")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--kind", choices=("parity", "information"), default="parity")
    p.add_argument("--diagonal-control", action="store_true")
    add_common(p)
    p.set_defaults(func=_cmd_probe)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, MinorBudgetExceeded, BudgetExceeded, ZeroDivisionError) as exc:
        sys.stderr.write(serial.dumps({"error": str(exc)}) + "\n")
        return 1
    except (ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        sys.stderr.write(serial.dumps({"error": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
