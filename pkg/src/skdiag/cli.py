"""Command-line driver.

Exit codes: 0 for success and true verdicts, 1 for false verdicts (an
invalid complex, a non-exchangeable union, a failed dd check), 2 for input
and structural errors. Every subcommand takes ``--json`` for a
machine-readable report with a top-level ``format_version`` field.
"""

import argparse
import json
import sys
from pathlib import Path

from .canonical import fingerprint, serialize_canonical
from .crossing import (
    crossing_change,
    first_invalid_flip,
    satisfies_dd_condition,
)
from .errors import (
    DiagramError,
    NotExchangeableError,
    ParseError,
    UnknownIdError,
)
from .explorer import (
    TrivialityOracle,
    Verdict,
    du_index_upper_bound,
    enumerate_exchangeable,
    oracle_from_document,
)
from .formats import (
    curve_summary,
    export_schematic,
    parse_skd_document,
    parse_skm,
)
from .moves import apply_sequence
from .singularity import census, validate

FORMAT_VERSION = 1

OK, FALSE_VERDICT, ERROR = 0, 1, 2


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DiagramError(f"cannot read {path}: {exc}") from exc


def _load_document(path: str):
    try:
        return parse_skd_document(_read(path))
    except ParseError as exc:
        for line, col, message in exc.diagnostics:
            print(f"{path}:{line}:{col}: {message}", file=sys.stderr)
        raise SystemExit(ERROR) from exc


def _load_oracle(doc, oracle_path: str | None) -> TrivialityOracle:
    oracle = oracle_from_document(doc.oracle)
    if oracle_path:
        sidecar = _load_document(oracle_path)
        oracle = oracle.merged_with(oracle_from_document(sidecar.oracle))
    return oracle


def _resolve_gamma(cx, selector: str | None) -> frozenset[str]:
    """Curve selection: comma-separated curve ids; an edge id selects the
    curve containing it. The empty string is the empty union."""
    if not selector:
        return frozenset()
    out = set()
    for token in selector.split(","):
        token = token.strip()
        if not token:
            continue
        if token in cx.curves_by_id:
            out.add(token)
        elif token in cx.edges_by_id:
            out.add(cx.curve_of(token))
        else:
            raise UnknownIdError(f"--gamma: no curve or edge named {token!r}")
    return frozenset(out)


def _emit(args, payload: dict, human: list[str]) -> None:
    if args.json:
        payload = {"format_version": FORMAT_VERSION, **payload}
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in human:
            print(line)


def _write_out(args, text: str, payload: dict) -> None:
    """Write produced text to -o, or to stdout (embedded under --json)."""
    if args.output is None or args.output == "-":
        if args.json:
            payload["text"] = text
        else:
            sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")


# -- subcommands ------------------------------------------------------------


def _cmd_validate(args) -> int:
    # syntax problems are input errors (exit 2); a parseable complex that
    # violates invariants is a false verdict (exit 1)
    try:
        doc = parse_skd_document(_read(args.skd), check=False)
    except ParseError as exc:
        for line, col, message in exc.diagnostics:
            print(f"{args.skd}:{line}:{col}: {message}", file=sys.stderr)
        return ERROR
    report = validate(doc.complex)
    _emit(args,
          {"command": "validate", "ok": report.ok,
           "diagnostics": [{"code": v.code, "message": v.message}
                           for v in report.violations]},
          [f"{args.skd}: well-formed complex"] if report.ok
          else [f"{args.skd}: {v.message}" for v in report.violations])
    return OK if report.ok else FALSE_VERDICT


def _cmd_trace(args) -> int:
    cx = _load_document(args.skd).complex
    curves = [{"id": c.id, "kind": c.kind.value, "edges": list(c.edges)}
              for c in cx.curves]
    _emit(args, {"command": "trace", "curves": curves}, curve_summary(cx))
    return OK


def _cmd_census(args) -> int:
    cx = _load_document(args.skd).complex
    rec = census(cx)
    counts = {
        "triple_points": rec.triple_points,
        "branch_points": rec.branch_points,
        "arc_edges": rec.arc_edges,
        "circles": rec.circles,
        "open_curves": rec.open_curves,
        "closed_curves": rec.closed_curves,
    }
    _emit(args, {"command": "census", "counts": counts},
          [f"{k}: {v}" for k, v in counts.items()])
    return OK


def _cmd_check_exchangeable(args) -> int:
    cx = _load_document(args.skd).complex
    gamma = _resolve_gamma(cx, args.gamma)
    bad = first_invalid_flip(cx, gamma)
    ok = bad is None
    payload = {"command": "check-exchangeable", "gamma": sorted(gamma),
               "exchangeable": ok,
               "failing_triple": None if ok else bad.triple_id}
    if ok:
        human = [f"exchangeable: yes ({len(gamma)} curve(s))"]
    else:
        types = ", ".join(sorted(t.value for t in bad.flipped_types))
        human = [f"exchangeable: no (flip set {{{types}}} at triple point "
                 f"{bad.triple_id} is invalid)"]
    _emit(args, payload, human)
    return OK if ok else FALSE_VERDICT


def _cmd_check_dd(args) -> int:
    cx = _load_document(args.skd).complex
    gamma = _resolve_gamma(cx, args.gamma)
    ok = satisfies_dd_condition(cx, gamma)
    _emit(args, {"command": "check-dd", "gamma": sorted(gamma), "dd": ok},
          [f"descendent disk condition: {'yes' if ok else 'no'}"])
    return OK if ok else FALSE_VERDICT


def _cmd_crossing_change(args) -> int:
    cx = _load_document(args.skd).complex
    gamma = _resolve_gamma(cx, args.gamma)
    try:
        changed = crossing_change(cx, gamma)
    except NotExchangeableError as exc:
        print(f"crossing-change: {exc}", file=sys.stderr)
        return FALSE_VERDICT
    payload = {"command": "crossing-change", "gamma": sorted(gamma),
               "output": args.output, "fingerprint": fingerprint(changed)}
    _write_out(args, serialize_canonical(changed), payload)
    _emit(args, payload,
          [f"fingerprint: {fingerprint(changed)}"]
          if args.output and args.output != "-" else [])
    return OK


def _cmd_apply(args) -> int:
    cx = _load_document(args.skd).complex
    moves = parse_skm(_read(args.skm))
    gamma = _resolve_gamma(cx, args.gamma)
    result = apply_sequence(cx, gamma, moves)
    trail = [{"index": t.index, "kind": t.kind, "fingerprint": t.fingerprint,
              "gamma": list(t.gamma), "exchangeable": t.exchangeable,
              "dd": t.dd} for t in result.trail]
    if args.trail:
        Path(args.trail).write_text(
            json.dumps({"format_version": FORMAT_VERSION, "trail": trail},
                       indent=2) + "\n", encoding="utf-8")
    payload = {"command": "apply", "moves": len(moves),
               "gamma": sorted(result.gamma),
               "fingerprint": fingerprint(result.complex), "trail": trail}
    _write_out(args, serialize_canonical(result.complex), payload)
    human = [f"applied {len(moves)} move(s); gamma: "
             + (",".join(sorted(result.gamma)) or "(empty)"),
             f"fingerprint: {fingerprint(result.complex)}"]
    _emit(args, payload, human if args.output and args.output != "-" else [])
    return OK


def _cmd_enumerate(args) -> int:
    doc = _load_document(args.skd)
    cx = doc.complex
    oracle = _load_oracle(doc, args.oracle)
    if args.oracle is not None or doc.oracle:
        report = du_index_upper_bound(cx, oracle, max_size=args.max_size,
                                      jobs=args.jobs)
        rows = [{"gamma": list(w.gamma), "size": w.size, "dd": w.dd,
                 "verdict": w.verdict.value} for w in report.witnesses]
        human = [f"size={w.size} gamma={','.join(w.gamma) or '(empty)'} "
                 f"dd={'yes' if w.dd else 'no'} verdict={w.verdict.value}"
                 for w in report.witnesses]
        _emit(args, {"command": "enumerate", "unions": rows}, human)
        return OK
    unions = enumerate_exchangeable(cx, max_size=args.max_size, jobs=args.jobs)
    rows = []
    human = []
    for gamma in unions:
        ordered = sorted(gamma)
        dd = satisfies_dd_condition(cx, gamma)
        rows.append({"gamma": ordered, "size": len(gamma), "dd": dd})
        human.append(f"size={len(gamma)} gamma={','.join(ordered) or '(empty)'} "
                     f"dd={'yes' if dd else 'no'}")
    _emit(args, {"command": "enumerate", "unions": rows}, human)
    return OK


def _cmd_du_bound(args) -> int:
    doc = _load_document(args.skd)
    oracle = _load_oracle(doc, args.oracle)
    report = du_index_upper_bound(doc.complex, oracle, max_size=args.max_size,
                                  jobs=args.jobs)
    rows = [{"gamma": list(w.gamma), "size": w.size, "dd": w.dd,
             "verdict": w.verdict.value} for w in report.witnesses]
    human = [f"note: {report.note}"]
    if report.best_size is None:
        human.append("best_size: unknown (no annotated trivial result)")
    else:
        witness = report.best_witness()
        human.append(f"best_size: {report.best_size} "
                     f"(gamma={','.join(witness.gamma) or '(empty)'})")
    for w in report.witnesses:
        if w.dd and w.verdict is not Verdict.UNKNOWN:
            human.append(f"  size={w.size} gamma={','.join(w.gamma) or '(empty)'}"
                         f" -> {w.verdict.value}")
    _emit(args,
          {"command": "du-bound", "best_size": report.best_size,
           "note": report.note, "witnesses": rows}, human)
    return OK


def _cmd_schematic(args) -> int:
    cx = _load_document(args.skd).complex
    payload = {"command": "schematic", "output": args.output}
    _write_out(args, export_schematic(cx), payload)
    _emit(args, payload,
          [f"wrote {args.output}"] if args.output and args.output != "-" else [])
    return OK


def _cmd_fingerprint(args) -> int:
    cx = _load_document(args.skd).complex
    fp = fingerprint(cx)
    _emit(args, {"command": "fingerprint", "fingerprint": fp}, [fp])
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skdiag",
        description="Surface-knot diagram singularity-set toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("skd", help=".skd diagram file")
        p.add_argument("--json", action="store_true",
                       help="machine-readable output")
        p.set_defaults(func=func)
        return p

    add("validate", _cmd_validate, help="check structural invariants")
    add("trace", _cmd_trace, help="list the traced double curves")
    add("census", _cmd_census, help="point/edge/curve counts")

    p = add("check-exchangeable", _cmd_check_exchangeable,
            help="is the union exchangeable?")
    p.add_argument("--gamma", default="", help="comma-separated curve or edge ids")

    p = add("check-dd", _cmd_check_dd,
            help="does the union satisfy the descendent disk condition?")
    p.add_argument("--gamma", default="")

    p = add("crossing-change", _cmd_crossing_change,
            help="apply the crossing change along a union")
    p.add_argument("--gamma", default="")
    p.add_argument("-o", "--output", default=None, help="output .skd path")

    p = add("apply", _cmd_apply, help="apply a t-descendent move script")
    p.add_argument("skm", help=".skm move script")
    p.add_argument("--gamma", default="")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--trail", default=None, help="write the per-move trail (JSON)")

    p = add("enumerate", _cmd_enumerate, help="list exchangeable unions")
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--oracle", default=None, help="triviality annotation file")
    p.add_argument("--jobs", type=int, default=1)

    p = add("du-bound", _cmd_du_bound,
            help="du-exchange-index upper bound against an oracle")
    p.add_argument("--oracle", default=None, help="triviality annotation file")
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)

    p = add("schematic", _cmd_schematic, help="export a DOT schematic")
    p.add_argument("-o", "--output", default=None)

    add("fingerprint", _cmd_fingerprint, help="canonical fingerprint")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else ERROR
    except ParseError as exc:
        for line, col, message in exc.diagnostics:
            print(f"{line}:{col}: {message}", file=sys.stderr)
        return ERROR
    except DiagramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    raise SystemExit(main())
