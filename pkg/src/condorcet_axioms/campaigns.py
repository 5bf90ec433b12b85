"""Campaigns: fixed batteries of (rule, axiom, domain) checks with expected outcomes.

A campaign expands into :class:`CheckSpec` items, runs them (optionally in
worker processes), evaluates campaign-level meta-checks over the verdicts and
assembles a JSON-ready report. Reports are byte-identical across runs and
worker counts once the timing fields (``elapsed_s``, ``wall_clock_s``) are
dropped.
"""

from __future__ import annotations

import csv
import io
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .axioms import DEFAULT_PAIR_BUDGET, FAILS, Certificate, Evaluator, Verdict, check, nice_set, replay
from .majority import condorcet_winners
from .preferences import (
    DEFAULT_PROFILE_BUDGET,
    DomainSpec,
    Profile,
    alt_name,
    format_profile,
    order_from_ranking,
)
from .rules import (
    CC_COMPLETIONS,
    INDEPENDENCE_RULES,
    catalog_ids,
    rule_from_id,
    standard_scoring_ids,
)

REPORT_SCHEMA = 1
DEFAULT_SAMPLE = 10_000
QUADRATIC_SAMPLE = 2_000
DEFAULT_SEED = 20240601
DEFAULT_RANDOM_RULES = 1000
TIMING_FIELDS = ("elapsed_s", "wall_clock_s")

CAMPAIGNS = (
    "prop1",
    "prop2",
    "prop3-4",
    "theorem1",
    "independence",
    "prop5",
    "mm-restricted",
    "theorem2",
    "audit",
    "explore-n3-scoring",
)

HOLDS, FAILS_EXPECTED = "holds", "fails"

# Axioms each independence counterexample keeps, and the one it drops.
INDEPENDENCE_GRID = {
    "c1": ("TC", ("TA", "TN", "TM", "TR")),
    "c2": ("TA", ("TC", "TN", "TM", "TR")),
    "c3:a": ("TN", ("TC", "TA", "TM", "TR")),
    "c4": ("TM", ("TC", "TA", "TN", "TR")),
    "c5": ("TR", ("TC", "TA", "TN", "TM")),
}
CHARACTERISATION = ("TA", "TN", "TM", "TR", "TC")
THEOREM2_AXIOMS = ("WTC", "TA", "TN", "TM", "TR", "MM")

NOTES = {
    ("c4-strong", 2): "with two voters the strong Pareto set equals the weak Condorcet winner set",
}


class CampaignError(ValueError):
    pass


@dataclass(frozen=True)
class CheckSpec:
    rule: str
    axiom: str
    domain: DomainSpec
    expected: Optional[str] = None
    note: str = ""

    @property
    def scan_domain(self) -> DomainSpec:
        """Domain actually scanned; TM/MM fall back to a sample when the pair scan is too large."""
        return fit_pair_budget(self.domain, self.axiom)


def make_domain(
    m: int,
    n: int,
    orders: str = "weak",
    restriction: str = "all",
    sample: Optional[int] = None,
    seed: int = DEFAULT_SEED,
    budget: int = DEFAULT_PROFILE_BUDGET,
) -> DomainSpec:
    """Exhaustive domain when it fits the budget, otherwise a seeded sample."""
    probe = DomainSpec(m, n, orders, restriction, budget=budget)
    if sample is None and probe.cardinality > budget:
        sample = DEFAULT_SAMPLE
    if sample is not None and probe.cardinality <= budget:
        sample = None
    return DomainSpec(m, n, orders, restriction, sample, seed, budget)


def fit_pair_budget(spec: DomainSpec, axiom: str, pair_budget: int = DEFAULT_PAIR_BUDGET) -> DomainSpec:
    """Sampled domain for TM/MM when the exhaustive pair scan would exceed the budget."""
    if axiom not in ("TM", "MM") or not spec.exhaustive:
        return spec
    m, N = spec.m, spec.cardinality
    tests = N * N * (m * (m - 1) ** 2 if axiom == "TM" else m)
    if tests <= pair_budget:
        return spec
    return DomainSpec(spec.m, spec.n, spec.orders, spec.restriction, QUADRATIC_SAMPLE, spec.seed, min(spec.budget, N - 1))


# ---------------------------------------------------------------------------
# Counterexample constructions
# ---------------------------------------------------------------------------


def _order(m: int, head: Sequence[int], tail: Sequence[int] = ()) -> tuple[int, ...]:
    """Linear order: ``head`` first, the alternatives outside a, b, c next, then ``tail``."""
    rest = [x for x in range(3, m)]
    return order_from_ranking([[x] for x in list(head) + rest + list(tail)], m)


def scoring_tc_counterexample(alpha: Sequence, n: int) -> Optional[Profile]:
    """Linear profile on which the scoring rule ``alpha`` violates TC, for ``n != 3``.

    Alternatives 0, 1, 2 play a, b, c; the others are ranked in index order.
    """
    m = len(alpha)
    a, b, c = 0, 1, 2
    if n % 2 == 0:
        p = n // 2
        first = _order(m, (a, b), (c,))
        if alpha[0] > alpha[1] == alpha[2]:
            second = _order(m, (c, b, a))
        else:
            second = _order(m, (c, a, b))
        return tuple([first] * p + [second] * p)
    if n >= 5:
        p = (n - 3) // 2
        return tuple(
            [_order(m, (a, b, c)), _order(m, (b, c, a)), _order(m, (c, a, b))]
            + [_order(m, (a, b), (c,))] * p
            + [_order(m, (b, a), (c,))] * p
        )
    return None


def cycle_profile(n: int, m: int = 3) -> Optional[Profile]:
    """The cyclic profile used against Maskin monotonicity, for n = 3p, 3p+1 (p >= 2), 3p+2."""
    p, r = divmod(n, 3)
    if p < 1 or (r == 1 and p < 2):
        return None
    a, b, c = 0, 1, 2
    voters = [_order(m, (a, b, c))] * p + [_order(m, (b, c, a))] * p + [_order(m, (c, a, b))] * p
    if r >= 1:
        voters.append(_order(m, (a, b, c)))
    if r == 2:
        voters.append(_order(m, (c, b, a)))
    return tuple(voters)


def reverse_for_third(profile: Profile, x: int) -> Profile:
    """Swap the other two of a, b, c for every voter ranking ``x`` third among them."""
    trio = (0, 1, 2)
    out = []
    for o in profile:
        ranked = sorted(trio, key=lambda t: o[t])
        if ranked[2] == x:
            u, v = ranked[0], ranked[1]
            new = list(o)
            new[u], new[v] = o[v], o[u]
            out.append(tuple(new))
        else:
            out.append(o)
    return tuple(out)


def mm_certificate(rule_id: str, R: Profile, Q: Profile, x: int) -> Certificate:
    rule = rule_from_id(rule_id)
    return Certificate(
        "MM",
        rule.id,
        rule.hash,
        len(R[0]),
        len(R),
        {
            "profile": format_profile(R),
            "other_profile": format_profile(Q),
            "x": alt_name(x),
            "output": sorted(alt_name(v) for v in rule(R)),
            "other_output": sorted(alt_name(v) for v in rule(Q)),
        },
    )


# ---------------------------------------------------------------------------
# Campaign definitions
# ---------------------------------------------------------------------------


@dataclass
class Meta:
    name: str
    ok: bool
    detail: object = None

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class Plan:
    checks: list[CheckSpec]
    meta: list[Callable[[dict], list[Meta]]]
    parameters: dict


def _specs(rules, axioms, domains, expected=None, note_for=None) -> list[CheckSpec]:
    out = []
    for dom in domains:
        for rule in rules:
            for ax in axioms:
                exp = expected(rule, ax, dom) if callable(expected) else expected
                note = note_for(rule, ax, dom) if note_for else ""
                out.append(CheckSpec(rule, ax, dom, exp, note))
    return out


def _verdict_index(results: dict) -> dict:
    return {(c.rule, c.axiom, c.domain): v for c, v in results.items()}


def _implication_meta(name: str, premise_axioms, conclusion_axioms, rules, domains):
    """Every rule holding all premise axioms on a domain also holds the conclusion axioms."""

    def meta(results: dict) -> list[Meta]:
        idx = _verdict_index(results)
        offenders = []
        for dom in domains:
            for rule in rules:
                if all(idx[(rule, a, dom)].holds for a in premise_axioms):
                    broken = [a for a in conclusion_axioms if not idx[(rule, a, dom)].holds]
                    if broken:
                        offenders.append({"rule": rule, "domain": dom.label(), "fails": broken})
        return [Meta(name, not offenders, {"offenders": offenders})]

    return meta


def plan_campaign(
    cid: str,
    m: int = 3,
    ns: Optional[Sequence[int]] = None,
    rules: Optional[Sequence[str]] = None,
    sample: Optional[int] = None,
    seed: int = DEFAULT_SEED,
    random_rules: int = DEFAULT_RANDOM_RULES,
) -> Plan:
    if cid not in CAMPAIGNS:
        raise CampaignError(f"unknown campaign {cid!r}; expected one of {', '.join(CAMPAIGNS)}")
    if m < 3:
        raise CampaignError("campaigns need at least three alternatives")
    if ns is not None and any(n < 2 for n in ns):
        raise CampaignError("campaigns need at least two voters")
    if rules is not None:
        rules = [rule_from_id(r).id for r in rules]

    def dom(n, orders="weak", restriction="all"):
        return make_domain(m, n, orders, restriction, sample, seed)

    params = {"m": m, "sample": sample, "seed": seed}
    checks: list[CheckSpec] = []
    metas: list[Callable] = []

    if cid == "prop1":
        ns = ns or [2, 3]
        sel = rules or list(CC_COMPLETIONS)
        checks = _specs(sel, ("TC", "CC"), [dom(n) for n in ns], HOLDS)

    elif cid == "prop2":
        ns = ns or [2]
        sel = rules or standard_scoring_ids(m)
        for n in ns:
            d = dom(n, "linear")
            checks += _specs(sel, ("TC",), [d], None if n == 3 else FAILS_EXPECTED)
        metas.append(_prop2_meta(sel, ns))

    elif cid == "prop3-4":
        ns = ns or [2]
        sel = rules or catalog_ids(m)
        domains = [dom(n) for n in ns]
        checks = _specs(
            sel,
            ("TM", "TR", "P3-subset", "P4-invariance"),
            domains,
            lambda r, a, d: HOLDS if r in CC_COMPLETIONS else None,
        )
        metas.append(_implication_meta("tm-tr-imply-p3-p4", ("TM", "TR"), ("P3-subset", "P4-invariance"), sel, domains))

    elif cid == "theorem1":
        ns = ns or [2, 3]
        sel = rules or list(CC_COMPLETIONS)
        checks = _specs(sel, CHARACTERISATION + ("CC",), [dom(n) for n in ns], HOLDS)

    elif cid == "independence":
        ns = ns or [2, 3]
        sel = rules or list(INDEPENDENCE_RULES)

        def expected(rule, ax, d):
            grid = INDEPENDENCE_GRID.get(rule)
            if grid is None:
                return None
            dropped, kept = grid
            if ax == "CC" or ax == dropped:
                return FAILS_EXPECTED
            return HOLDS if ax in kept else None

        checks = _specs(
            sel,
            CHARACTERISATION + ("CC",),
            [dom(n) for n in ns],
            expected,
            lambda r, a, d: NOTES.get((r, d.n), ""),
        )

    elif cid == "prop5":
        ns = ns or [3]
        sel = rules or list(CC_COMPLETIONS)
        checks = _specs(sel, ("MM",), [dom(n) for n in ns], lambda r, a, d: None if d.n == 4 else FAILS_EXPECTED)
        metas.append(_prop5_meta(sel, ns, m))

    elif cid == "mm-restricted":
        ns = ns or [3]
        sel = rules or list(CC_COMPLETIONS)
        checks = _specs(sel, ("MM",), [dom(n, restriction="condorcet") for n in ns], HOLDS)

    elif cid == "theorem2":
        ns = ns or [3]
        sel = rules or catalog_ids(m)
        domains = [dom(n, restriction="condorcet") for n in ns]
        checks = _specs(
            sel,
            THEOREM2_AXIOMS + ("CC",),
            domains,
            lambda r, a, d: HOLDS if r in CC_COMPLETIONS else None,
        )
        metas.append(_implication_meta("theorem2-sufficiency", THEOREM2_AXIOMS, ("CC",), sel, domains))

    elif cid == "audit":
        ns = ns or [2]
        sel = rules or catalog_ids(m)
        main = [dom(n) for n in ns]
        checks = _specs(sel, CHARACTERISATION + ("CC",), main, lambda r, a, d: HOLDS if r in CC_COMPLETIONS else None)
        metas.append(_implication_meta("theorem1-sufficiency", CHARACTERISATION, ("CC",), sel, main))
        # WTC + MM => TC, over every scanned domain
        wmt_domains = [dom(2), dom(3), dom(3, restriction="condorcet")]
        wmt = [CheckSpec(r, a, d) for d in wmt_domains for r in sel for a in ("WTC", "MM", "TC")]
        linear_rules = rules or catalog_ids(m, "linear")
        lin_domains = [dom(2, "linear"), dom(3, "linear")]
        wmt += [CheckSpec(r, a, d) for d in lin_domains for r in linear_rules for a in ("WTC", "MM", "TC")]
        checks += [c for c in wmt if c not in set(checks)]
        metas.append(_wtc_mm_meta([(c.rule, c.domain) for c in wmt if c.axiom == "TC"]))
        params["random_rules"] = random_rules
        for n in ns:
            metas.append(_random_audit_meta(m, n, random_rules, seed))

    elif cid == "explore-n3-scoring":
        ns = ns or [3]
        sel = rules or standard_scoring_ids(m)
        checks = _specs(sel, ("TC", "WTC"), [dom(n, "linear") for n in ns], None)

    params["n"] = list(ns)
    params["rules"] = sorted({c.rule for c in checks})
    return Plan(checks, metas, params)


def _prop2_meta(rules: Sequence[str], ns: Sequence[int]):
    def meta(results: dict) -> list[Meta]:
        out = []
        for rid in rules:
            rule = rule_from_id(rid)
            alpha = rule.func.args[0] if hasattr(rule.func, "args") else None
            for n in ns:
                if alpha is None or n == 3:
                    continue
                R = scoring_tc_counterexample(alpha, n)
                ev = Evaluator(rule)
                nice, won = nice_set(ev, R), ev(R)
                out.append(Meta(
                    f"prop2-construction:{rid}:n{n}",
                    bool(nice) and nice != won,
                    {
                        "profile": format_profile(R),
                        "nice_set": sorted(alt_name(x) for x in nice),
                        "output": sorted(alt_name(x) for x in won),
                    },
                ))
        return out

    return meta


def _prop5_meta(rules: Sequence[str], ns: Sequence[int], m: int):
    def meta(results: dict) -> list[Meta]:
        out = []
        for n in ns:
            R = cycle_profile(n, m)
            if R is None:
                continue
            for rid in rules:
                rule = rule_from_id(rid)
                chosen = sorted(rule(R) & {0, 1, 2})
                attempts, witness = {}, None
                for x in chosen:
                    Q = reverse_for_third(R, x)
                    cert = mm_certificate(rid, R, Q, x)
                    attempts[alt_name(x)] = {
                        "condorcet_winners_of_q": sorted(alt_name(v) for v in condorcet_winners(Q)),
                        "replays": replay(cert),
                    }
                    if witness is None and attempts[alt_name(x)]["replays"]:
                        witness = cert.to_json()
                out.append(Meta(
                    f"prop5-witness:{rid}:n{n}",
                    witness is not None,
                    {"attempts": attempts, "certificate": witness},
                ))
        return out

    return meta


def _wtc_mm_meta(pairs: Iterable[tuple[str, DomainSpec]]):
    pairs = list(pairs)

    def meta(results: dict) -> list[Meta]:
        idx = _verdict_index(results)
        offenders = [
            {"rule": r, "domain": d.label()}
            for r, d in pairs
            if idx[(r, "WTC", d)].holds and idx[(r, "MM", d)].holds and not idx[(r, "TC", d)].holds
        ]
        return [Meta("wtc-and-mm-imply-tc", not offenders, {"triples": len(pairs), "offenders": offenders})]

    return meta


def random_audit_chunk(m: int, n: int, seeds: Sequence[int]) -> list[dict]:
    """Scan random table rules; return those passing TA, TN, TM, TR and TC but failing CC.

    Checks run cheapest first and stop at the first failure.
    """
    dom = DomainSpec(m, n)
    found = []
    passed = 0
    for s in seeds:
        ev = Evaluator(rule_from_id(f"random:{m}:{n}:weak:{s}"))
        if all(check(ev, ax, dom).holds for ax in ("TR", "TA", "TN", "TC", "TM")):
            passed += 1
            cc = check(ev, "CC", dom)
            if not cc.holds:
                found.append({"rule": ev.rule.id, "witness": cc.witness.to_json()})
    return [{"passed_all": passed, "counterexamples": found}]


def _random_audit_meta(m: int, n: int, count: int, seed: int):
    def meta(results: dict, pool=None, jobs: int = 1) -> list[Meta]:
        seeds = list(range(seed, seed + count))
        chunks = [seeds[i::jobs] for i in range(jobs)] if jobs > 1 else [seeds]
        if pool is not None and jobs > 1:
            parts = list(pool.map(random_audit_chunk, [m] * len(chunks), [n] * len(chunks), chunks))
        else:
            parts = [random_audit_chunk(m, n, c) for c in chunks]
        passed = sum(p[0]["passed_all"] for p in parts)
        found = sorted((c for p in parts for c in p[0]["counterexamples"]), key=lambda c: c["rule"])
        return [Meta(
            f"random-sufficiency:m{m}n{n}",
            not found,
            {"rules": count, "first_seed": seed, "passed_all_axioms": passed, "counterexamples": found},
        )]

    meta.wants_pool = True
    return meta


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------


def run_check(spec: CheckSpec) -> Verdict:
    return check(spec.rule, spec.axiom, spec.scan_domain)


def _met(expected: Optional[str], verdict: Verdict) -> Optional[bool]:
    if expected is None:
        return None
    return (verdict.status == FAILS) == (expected == FAILS_EXPECTED)


def run_campaign(cid: str, jobs: int = 1, **kwargs) -> dict:
    """Run a campaign and return its report dictionary."""
    t0 = time.perf_counter()
    plan = plan_campaign(cid, **kwargs)
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        if pool is not None:
            verdicts = list(pool.map(run_check, plan.checks, chunksize=1))
        else:
            verdicts = [run_check(c) for c in plan.checks]
        results = dict(zip(plan.checks, verdicts))
        metas: list[Meta] = []
        for fn in plan.meta:
            if getattr(fn, "wants_pool", False):
                metas += fn(results, pool=pool, jobs=jobs)
            else:
                metas += fn(results)
    finally:
        if pool is not None:
            pool.shutdown()

    rows = []
    for spec, verdict in results.items():
        row = verdict.to_json()
        row["expected"] = spec.expected
        row["met"] = _met(spec.expected, verdict)
        if spec.note:
            row["note"] = spec.note
        rows.append(row)
    unmet = sum(1 for r in rows if r["met"] is False)
    meta_failed = sum(1 for x in metas if not x.ok)
    return {
        "schema_version": REPORT_SCHEMA,
        "campaign": cid,
        "parameters": plan.parameters,
        "checks": rows,
        "meta": [x.to_json() for x in metas],
        "totals": {
            "checks": len(rows),
            "expectations": sum(1 for r in rows if r["met"] is not None),
            "unmet": unmet,
            "informational": sum(1 for r in rows if r["met"] is None),
            "meta": len(metas),
            "meta_failed": meta_failed,
            "ok": unmet == 0 and meta_failed == 0,
        },
        "wall_clock_s": round(time.perf_counter() - t0, 3),
    }


def strip_timing(obj):
    """Copy of a report without timing fields, for determinism comparisons."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_FIELDS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def report_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["rule", "axiom", "domain", "status", "expected", "met", "scanned", "skipped"])
    for row in report["checks"]:
        d = row["domain"]
        label = f"m{d['m']}n{d['n']}-{d['orders']}-{d['restriction']}-{d['mode']}"
        writer.writerow([row["rule"], row["axiom"], label, row["status"], row["expected"], row["met"], row["scanned"], row["skipped"]])
    return buf.getvalue()


def format_report_text(report: dict) -> str:
    lines = [f"campaign {report['campaign']}  {report['parameters']}"]
    for row in report["checks"]:
        d = row["domain"]
        flag = {True: "ok  ", False: "FAIL", None: "info"}[row["met"]]
        exp = f" (expected {row['expected']})" if row["expected"] else ""
        lines.append(
            f"[{flag}] {row['rule']:<18} {row['axiom']:<14} m{d['m']}n{d['n']} {d['orders']}/{d['restriction']}"
            f" {d['mode']}: {row['status']}{exp}"
        )
        if row["met"] is False:
            if row.get("note"):
                lines.append(f"       note: {row['note']}")
            if row["witness"]:
                lines.append("       witness: " + _compact_witness(row["witness"]))
    for meta in report["meta"]:
        lines.append(f"[{'ok  ' if meta['ok'] else 'FAIL'}] meta {meta['name']}")
    t = report["totals"]
    lines.append(
        f"{t['checks']} checks, {t['expectations']} with expectations, {t['unmet']} unmet; "
        f"{t['meta']} meta-checks, {t['meta_failed']} failed"
    )
    return "\n".join(lines)


def _compact_witness(w: dict) -> str:
    p = w["payload"]
    keys = [k for k in ("profile", "other_profile", "pair", "x", "y", "z", "nice_set", "condorcet_winners", "output", "permuted_output", "shifted_output", "other_shifted_output", "other_output") if k in p]
    return "; ".join(f"{k}={p[k]}" for k in keys)
