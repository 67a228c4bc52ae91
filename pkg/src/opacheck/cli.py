"""Command line front end.

Exit codes: 0 when everything requested holds (or, for fuzz, when there
are no discrepancies), 1 when a checked property fails or the campaign
found a disagreement, 2 for input or parameter errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import generate
from .constructions import build_cc, build_gdss, build_ghat, build_observer
from .fileformat import (
    FormatError,
    cc_document,
    document_of,
    export_dot,
    load,
    observer_document,
    serialize,
)
from .model import AutomatonWarning, ValidationError
from .verifiers import PROPERTIES, check_all, verdict_record

_PROPERTY_TOKENS = {
    "cso": "CSO",
    "iso": "ISO",
    "scso": "SCSO",
    "siso": "SISO",
    "inf-sso": "INF_SSO",
}
_TOKEN_ORDER = tuple(_PROPERTY_TOKENS)


def _load_automaton(path):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", AutomatonWarning)
        aut = load(path).to_automaton()
    for item in caught:
        print(f"warning: {item.message}", file=sys.stderr)
    return aut


def _human_verdict(verdict) -> str:
    lines = [f"{verdict.property}: {'holds' if verdict.holds else 'FAILS'}"]
    if verdict.witness is not None:
        record = verdict_record(verdict)["witness"]
        lines.append(f"  witness events:      {' '.join(record['events']) or '(empty)'}")
        lines.append(f"  witness observation: {' '.join(record['observation']) or '(empty)'}")
        lines.append(f"  offending state:     {record['offending_state']}")
    return "\n".join(lines)


def cmd_check(args) -> int:
    tokens = [t.strip() for t in args.property.split(",") if t.strip()]
    for token in tokens:
        if token not in _PROPERTY_TOKENS:
            print(f"error: unknown property {token!r}", file=sys.stderr)
            return 2
    selected = [t for t in _TOKEN_ORDER if t in tokens]
    try:
        aut = _load_automaton(args.file)
    except (OSError, FormatError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    verdicts = check_all(aut, witness=args.witness)
    all_hold = True
    for token in selected:
        verdict = verdicts[_PROPERTY_TOKENS[token]]
        all_hold &= verdict.holds
        if args.output == "machine":
            print(json.dumps(verdict_record(verdict), sort_keys=True))
        else:
            print(_human_verdict(verdict))
    return 0 if all_hold else 1


def cmd_export(args) -> int:
    try:
        aut = _load_automaton(args.file)
    except (OSError, FormatError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    gdss = build_gdss(aut)
    if args.structure == "gdss":
        structure = gdss
    elif args.structure == "ghat":
        structure = build_ghat(aut)
    elif args.structure == "observer":
        structure = build_observer(gdss)
    elif args.structure == "cc":
        structure = build_cc(aut, build_observer(gdss))
    else:  # cc-hat
        structure = build_cc(build_ghat(aut), build_observer(gdss))

    if not getattr(structure, "states", ()):
        print(f"warning: {args.structure} is empty for this input", file=sys.stderr)

    if args.format == "dot":
        payload = export_dot(structure).encode("utf-8")
    else:
        if args.structure in ("gdss", "ghat"):
            doc = document_of(structure)
        elif args.structure == "observer":
            doc = observer_document(structure)
        else:
            doc = cc_document(structure)
        payload = serialize(doc)

    if args.out is None:
        sys.stdout.write(payload.decode("utf-8"))
    else:
        with open(args.out, "wb") as handle:
            handle.write(payload)
    return 0


def cmd_gen(args) -> int:
    try:
        aut = generate.random_automaton(
            seed=args.seed,
            n_states=args.states,
            n_events=args.events,
            obs_ratio=args.obs_ratio,
            secret_ratio=args.secret_ratio,
            density=args.density,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    payload = serialize(document_of(aut))
    if args.out is None:
        sys.stdout.write(payload.decode("utf-8"))
    else:
        with open(args.out, "wb") as handle:
            handle.write(payload)
    return 0


def cmd_fuzz(args) -> int:
    if args.count < 0 or args.max_states < 1:
        print("error: count must be >= 0 and max-states >= 1", file=sys.stderr)
        return 2
    report = generate.run_campaign(
        generate.fuzz_instances(args.count, args.max_states, args.seed)
    )
    print(f"instances: {report.count}")
    print(f"{'property':<10} {'holds':>8} {'fails':>8}")
    for prop in PROPERTIES:
        print(f"{prop:<10} {report.holds[prop]:>8} {report.fails[prop]:>8}")
    print(f"inf-sso holds without siso: {report.inf_sso_without_siso}")
    problems = report.discrepancies + report.implication_violations + report.witness_failures
    print(f"discrepancies: {len(problems)}")
    for line in problems:
        print(f"  {line}")
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opacheck",
        description="Opacity verification for partially observed automata.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="decide opacity properties of an automaton file")
    check.add_argument("file")
    check.add_argument(
        "--property",
        default=",".join(_TOKEN_ORDER),
        help="comma separated subset of: " + ",".join(_TOKEN_ORDER),
    )
    check.add_argument("--witness", action="store_true", help="extract a witness for failures")
    check.add_argument("--output", choices=("human", "machine"), default="human")
    check.set_defaults(fn=cmd_check)

    export = sub.add_parser("export", help="export a constructed structure")
    export.add_argument("file")
    export.add_argument(
        "--structure", required=True, choices=("gdss", "ghat", "observer", "cc", "cc-hat")
    )
    export.add_argument("--format", choices=("dot", "native"), default="dot")
    export.add_argument("--out", default=None)
    export.set_defaults(fn=cmd_export)

    gen = sub.add_parser("gen", help="generate a random automaton file")
    gen.add_argument("--states", type=int, default=5)
    gen.add_argument("--events", type=int, default=3)
    gen.add_argument("--obs-ratio", type=float, default=0.6)
    gen.add_argument("--secret-ratio", type=float, default=0.2)
    gen.add_argument("--density", type=float, default=1.5)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None)
    gen.set_defaults(fn=cmd_gen)

    fuzz = sub.add_parser("fuzz", help="compare verifiers against the oracles on random inputs")
    fuzz.add_argument("--count", type=int, default=100)
    fuzz.add_argument("--max-states", type=int, default=6)
    fuzz.add_argument("--seed", type=int, default=0)
    fuzz.set_defaults(fn=cmd_fuzz)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
