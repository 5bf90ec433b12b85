"""Command-line entry point: ``condorcet-axioms <command> ...``.

Exit codes: 0 success, 2 a claimed property failed to verify (or a replayed
certificate did not reproduce), 3 usage, budget or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .axioms import AXIOMS, Certificate, CertificateError, Evaluator, check, nice_set, replay
from .campaigns import (
    CAMPAIGNS,
    DEFAULT_RANDOM_RULES,
    DEFAULT_SEED,
    CampaignError,
    format_report_text,
    make_domain,
    report_csv,
    run_campaign,
    fit_pair_budget,
)
from .majority import majority_matrix
from .preferences import (
    BudgetError,
    DomainError,
    PreconditionError,
    format_profile,
    iter_profiles,
)
from .profile_io import ParseError, parse_profile
from .rules import UnknownRuleError, rule_from_id

EXIT_OK, EXIT_FINDING, EXIT_USAGE = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _domain_args(p: argparse.ArgumentParser, n_list: bool = False) -> None:
    p.add_argument("--m", type=int, default=3, help="number of alternatives (default 3)")
    if n_list:
        p.add_argument("--n", type=_int_list, default=None, help="voter counts, comma separated")
    else:
        p.add_argument("--n", type=int, default=2, help="number of voters (default 2)")
    p.add_argument("--orders", choices=("weak", "linear"), default="weak")
    p.add_argument("--domain", choices=("all", "condorcet", "two-profiles"), default="all",
                   help="profile restriction")
    p.add_argument("--sample", type=int, default=None, help="sample size (only for spaces over budget)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="condorcet-axioms", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("campaign", help="run a fixed battery of checks with expected outcomes")
    p.add_argument("campaign", choices=CAMPAIGNS)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--n", type=_int_list, default=None, help="voter counts, comma separated")
    p.add_argument("--rule", action="append", help="override the campaign's rule selection (repeatable)")
    p.add_argument("--sample", type=int, default=None)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--random-rules", type=int, default=DEFAULT_RANDOM_RULES,
                   help="random rules scanned by the audit campaign")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", type=Path, help="write the JSON report here")
    p.add_argument("--csv", type=Path, help="write a CSV summary here")

    p = sub.add_parser("check", help="check one axiom for one rule on one domain")
    p.add_argument("--rule", required=True)
    p.add_argument("--axiom", required=True, choices=AXIOMS)
    _domain_args(p)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", type=Path, help="write the verdict JSON here")
    p.add_argument("--cert", type=Path, help="write the witness certificate here (if any)")

    p = sub.add_parser("eval", help="evaluate a rule on a profile file")
    p.add_argument("--rule", required=True)
    p.add_argument("profile", type=Path, help="profile file ('-' for standard input)")
    p.add_argument("--matrix", action="store_true", help="also print the majority matrix")
    p.add_argument("--nice", action="store_true", help="also print the nice set")
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("replay", help="re-check a certificate (or a verdict embedding one)")
    p.add_argument("certificate", type=Path)
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("enumerate", help="count or list the profiles of a domain")
    _domain_args(p)
    p.add_argument("--list", action="store_true", help="print every profile, one per line")
    return parser


def _write(path: Path | None, text: str) -> None:
    if path is not None:
        path.write_text(text)


def cmd_campaign(args) -> int:
    report = run_campaign(
        args.campaign,
        jobs=max(1, args.jobs),
        m=args.m,
        ns=args.n,
        rules=args.rule,
        sample=args.sample,
        seed=args.seed,
        random_rules=args.random_rules,
    )
    text = json.dumps(report, indent=2)
    _write(args.out, text + "\n")
    if args.csv is not None:
        args.csv.write_text(report_csv(report))
    print(text if args.format == "json" else format_report_text(report))
    return EXIT_OK if report["totals"]["ok"] else EXIT_FINDING


def cmd_check(args) -> int:
    dom = fit_pair_budget(
        make_domain(args.m, args.n, args.orders, args.domain, args.sample, args.seed), args.axiom
    )
    verdict = check(args.rule, args.axiom, dom)
    data = verdict.to_json()
    _write(args.out, json.dumps(data, indent=2) + "\n")
    if args.cert is not None and verdict.witness is not None:
        args.cert.write_text(verdict.witness.dumps() + "\n")
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        print(f"{verdict.rule} {verdict.axiom} on {dom.label()}: {verdict.status} "
              f"({verdict.scanned} scanned, {verdict.skipped} skipped)")
        if verdict.witness is not None:
            for key, value in verdict.witness.payload.items():
                print(f"  {key}: {value}")
    return EXIT_OK


def cmd_eval(args) -> int:
    text = sys.stdin.read() if str(args.profile) == "-" else args.profile.read_text()
    named = parse_profile(text)
    rule = rule_from_id(args.rule)
    R = named.profile
    winners = rule(R)
    names = named.names
    out = {"winners": [names[x] for x in sorted(winners)]}
    if args.matrix:
        out["majority_matrix"] = [list(row) for row in majority_matrix(R)]
    if args.nice:
        out["nice_set"] = [names[x] for x in sorted(nice_set(Evaluator(rule), R))]
    if args.format == "json":
        out["alternatives"] = list(names)
        print(json.dumps(out, indent=2))
        return EXIT_OK
    print(" ".join(out["winners"]))
    if args.matrix:
        width = max(len(nm) for nm in names) + 1
        print(" " * width + "".join(f"{nm:>{width}}" for nm in names))
        for nm, row in zip(names, out["majority_matrix"]):
            print(f"{nm:<{width}}" + "".join(f"{v:>{width}}" for v in row))
    if args.nice:
        print("nice set: " + (" ".join(out["nice_set"]) or "(empty)"))
    return EXIT_OK


def cmd_replay(args) -> int:
    data = json.loads(args.certificate.read_text())
    if isinstance(data, dict) and "payload" not in data and "witness" in data:
        if data["witness"] is None:
            raise CertificateError("verdict has no witness to replay")
        data = data["witness"]
    cert = Certificate.from_json(data)
    ok = replay(cert)
    if args.format == "json":
        print(json.dumps({"axiom": cert.axiom, "rule": cert.rule, "reproduces": ok}))
    else:
        print("true" if ok else "false")
    return EXIT_OK if ok else EXIT_FINDING


def cmd_enumerate(args) -> int:
    dom = make_domain(args.m, args.n, args.orders, args.domain, args.sample, args.seed)
    count = 0
    for profile in iter_profiles(dom):
        count += 1
        if args.list:
            print(" | ".join(format_profile(profile)))
    if not args.list:
        print(count)
    return EXIT_OK


COMMANDS = {
    "campaign": cmd_campaign,
    "check": cmd_check,
    "eval": cmd_eval,
    "replay": cmd_replay,
    "enumerate": cmd_enumerate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (DomainError, PreconditionError, ParseError, UnknownRuleError, CampaignError,
            CertificateError, BudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
