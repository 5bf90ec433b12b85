"""Certificate-producing axiom checkers.

Every checker scans a :class:`~condorcet_axioms.preferences.DomainSpec` in
canonical order and returns a :class:`Verdict`. A failing verdict carries the
first violation in canonical order as a self-contained :class:`Certificate`
that :func:`replay` re-checks from scratch, without the scan machinery.

Pair-quantified axioms (TM, MM) do not loop over profile pairs. Both premises
only relate R and Q through the position of ``x`` against each rival, so
profiles are grouped by that signature and signatures are compared in bulk.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .majority import condorcet_winners
from .preferences import (
    BudgetError,
    DomainError,
    DomainSpec,
    Profile,
    alt_name,
    alt_names,
    apply_alternative_permutation,
    apply_voter_permutation,
    enumerate_profiles,
    format_profile,
    is_additional_support,
    is_two_profile,
    never_worse,
    permute_set,
    restrict_profile,
    top_shift_profile,
    transposition,
)
from .profile_io import parse_profile_lines
from .rules import Rule, check_admissible, rule_from_id, rule_hash

AXIOMS = ("TA", "TN", "TS", "TM", "TR", "TC", "WTC", "MM", "CC", "P3-subset", "P4-invariance")
CERTIFICATE_SCHEMA = 1
DEFAULT_PAIR_BUDGET = 10**8

HOLDS_EXHAUSTIVELY = "holds-exhaustively"
HOLDS_ON_SAMPLE = "holds-on-sample"
FAILS = "fails"


class CertificateError(ValueError):
    pass


@lru_cache(maxsize=1 << 18)
def shift(profile: Profile, x: int, y: int) -> Profile:
    """Memoised top-shift; the pair is unordered."""
    if x > y:
        x, y = y, x
    return top_shift_profile(profile, x, y)


class Evaluator:
    """Memoising wrapper around a rule; results never depend on call order."""

    def __init__(self, rule: Rule):
        self.rule = rule
        self._cache: dict[Profile, frozenset] = {}

    def __call__(self, profile: Profile) -> frozenset:
        out = self._cache.get(profile)
        if out is None:
            check_admissible(self.rule, profile)
            out = self.rule.func(profile)
            if not out:
                raise RuntimeError(f"rule {self.rule.id} returned the empty set")
            self._cache[profile] = out
        return out


def _evaluator(rule) -> Evaluator:
    if isinstance(rule, Evaluator):
        return rule
    if isinstance(rule, str):
        rule = rule_from_id(rule)
    return Evaluator(rule)


def nice_set(rule, profile: Profile) -> frozenset:
    """Alternatives selected in every top-shift pairing them with a rival."""
    ev = _evaluator(rule)
    m = len(profile[0])
    return frozenset(
        x for x in range(m) if all(x in ev(shift(profile, x, y)) for y in range(m) if y != x)
    )


# ---------------------------------------------------------------------------
# Verdicts and certificates
# ---------------------------------------------------------------------------


def _names(alts) -> list[str]:
    return [alt_name(x) for x in sorted(alts)]


@dataclass
class Certificate:
    axiom: str
    rule: str
    rule_hash: str
    m: int
    n: int
    payload: dict

    def to_json(self) -> dict:
        return {
            "schema_version": CERTIFICATE_SCHEMA,
            "axiom": self.axiom,
            "rule": self.rule,
            "rule_hash": self.rule_hash,
            "alternatives": alt_names(self.m),
            "voters": self.n,
            "payload": self.payload,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        try:
            if data["schema_version"] != CERTIFICATE_SCHEMA:
                raise CertificateError(
                    f"certificate schema {data['schema_version']} is not supported "
                    f"(expected {CERTIFICATE_SCHEMA})"
                )
            if data["axiom"] not in AXIOMS:
                raise CertificateError(f"unknown axiom {data['axiom']!r}")
            return cls(
                axiom=data["axiom"],
                rule=data["rule"],
                rule_hash=data["rule_hash"],
                m=len(data["alternatives"]),
                n=int(data["voters"]),
                payload=dict(data["payload"]),
            )
        except (KeyError, TypeError) as exc:
            raise CertificateError(f"malformed certificate: missing or invalid {exc}") from exc


@dataclass
class Verdict:
    axiom: str
    rule: str
    domain: DomainSpec
    status: str
    witness: Optional[Certificate] = None
    scanned: int = 0
    skipped: int = 0
    elapsed: float = 0.0

    @property
    def holds(self) -> bool:
        return self.status != FAILS

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom,
            "rule": self.rule,
            "domain": self.domain.describe(),
            "status": self.status,
            "scanned": self.scanned,
            "skipped": self.skipped,
            "elapsed_s": round(self.elapsed, 6),
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def _holds(spec: DomainSpec) -> str:
    return HOLDS_EXHAUSTIVELY if spec.exhaustive else HOLDS_ON_SAMPLE


class _Scan:
    """Shared bookkeeping for one checker run."""

    def __init__(self, axiom: str, rule, spec: DomainSpec):
        self.t0 = time.perf_counter()
        self.axiom = axiom
        self.ev = _evaluator(rule)
        self.rule = self.ev.rule
        self.spec = spec
        if self.rule.admissible == "linear" and spec.orders != "linear":
            raise DomainError(
                f"rule {self.rule.id} is only defined on L^N (profiles of linear orders); "
                f"domain {spec.label()} contains weak orders"
            )
        if self.rule.m is not None and self.rule.m != spec.m:
            raise DomainError(f"rule {self.rule.id} is defined for m={self.rule.m}, domain has m={spec.m}")
        self.profiles = enumerate_profiles(spec)
        self.scanned = 0
        self.skipped = 0

    def cert(self, payload: dict) -> Certificate:
        return Certificate(self.axiom, self.rule.id, self.rule.hash, self.spec.m, self.spec.n, payload)

    def done(self, witness: Optional[dict] = None) -> Verdict:
        return Verdict(
            axiom=self.axiom,
            rule=self.rule.id,
            domain=self.spec,
            status=FAILS if witness is not None else _holds(self.spec),
            witness=None if witness is None else self.cert(witness),
            scanned=self.scanned,
            skipped=self.skipped,
            elapsed=time.perf_counter() - self.t0,
        )


def _prof(p: Profile) -> list[str]:
    return format_profile(p)


# ---------------------------------------------------------------------------
# Single-profile checkers
# ---------------------------------------------------------------------------


def check_ta(rule, spec: DomainSpec) -> Verdict:
    """Top anonymity: voter transpositions of a 2-profile leave the outcome unchanged."""
    s = _Scan("TA", rule, spec)
    n = spec.n
    for R in s.profiles:
        if is_two_profile(R) is None:
            continue
        base = s.ev(R)
        for i, j in itertools.combinations(range(n), 2):
            pi = transposition(n, i, j)
            permuted = apply_voter_permutation(R, pi)
            s.scanned += 1
            out = s.ev(permuted)
            if out != base:
                return s.done({
                    "profile": _prof(R),
                    "permutation": pi,
                    "permuted_profile": _prof(permuted),
                    "output": _names(base),
                    "permuted_output": _names(out),
                })
    return s.done()


def check_tn(rule, spec: DomainSpec) -> Verdict:
    """Top neutrality: relabelling alternatives of a 2-profile relabels the outcome."""
    s = _Scan("TN", rule, spec)
    m = spec.m
    for R in s.profiles:
        if is_two_profile(R) is None:
            continue
        base = s.ev(R)
        for a, b in itertools.combinations(range(m), 2):
            sigma = transposition(m, a, b)
            relabelled = apply_alternative_permutation(R, sigma)
            s.scanned += 1
            out = s.ev(relabelled)
            expected = permute_set(base, sigma)
            if out != expected:
                return s.done({
                    "profile": _prof(R),
                    "permutation": sigma,
                    "permuted_profile": _prof(relabelled),
                    "output": _names(base),
                    "permuted_output": _names(out),
                    "relabelled_output": _names(expected),
                })
    return s.done()


def check_ts(rule, spec: DomainSpec) -> Verdict:
    """Top symmetry, the conjunction of TA and TN; reports the TA failure first."""
    t0 = time.perf_counter()
    ev = _evaluator(rule)
    ta = check_ta(ev, spec)
    tn = check_tn(ev, spec) if ta.holds else None
    failing = ta if not ta.holds else (tn if not tn.holds else None)
    return Verdict(
        axiom="TS",
        rule=ev.rule.id,
        domain=spec,
        status=FAILS if failing else _holds(spec),
        witness=failing.witness if failing else None,
        scanned=ta.scanned + (tn.scanned if tn else 0),
        elapsed=time.perf_counter() - t0,
    )


def check_tr(rule, spec: DomainSpec) -> Verdict:
    """Top rationality: a top-shift of {x, y} selects x or y."""
    s = _Scan("TR", rule, spec)
    for R in s.profiles:
        for x, y in itertools.combinations(range(spec.m), 2):
            s.scanned += 1
            shifted = shift(R, x, y)
            out = s.ev(shifted)
            if not out & {x, y}:
                return s.done({
                    "profile": _prof(R),
                    "pair": _names((x, y)),
                    "shifted_profile": _prof(shifted),
                    "shifted_output": _names(out),
                })
    return s.done()


def _shift_outputs(ev: Evaluator, R: Profile) -> dict[str, list[str]]:
    m = len(R[0])
    return {
        f"{alt_name(x)},{alt_name(y)}": _names(ev(shift(R, x, y)))
        for x, y in itertools.combinations(range(m), 2)
    }


def _nice_payload(ev: Evaluator, R: Profile, nice: frozenset, out: frozenset) -> dict:
    return {
        "profile": _prof(R),
        "nice_set": _names(nice),
        "output": _names(out),
        "shifted_outputs": _shift_outputs(ev, R),
    }


def check_tc(rule, spec: DomainSpec) -> Verdict:
    """Top consistency: the outcome equals the nice set whenever the latter is non-empty."""
    s = _Scan("TC", rule, spec)
    for R in s.profiles:
        nice = nice_set(s.ev, R)
        if not nice:
            s.skipped += 1
            continue
        s.scanned += 1
        out = s.ev(R)
        if out != nice:
            return s.done(_nice_payload(s.ev, R, nice, out))
    return s.done()


def check_wtc(rule, spec: DomainSpec) -> Verdict:
    """Weak top consistency: the outcome contains the nice set."""
    s = _Scan("WTC", rule, spec)
    for R in s.profiles:
        s.scanned += 1
        nice = nice_set(s.ev, R)
        out = s.ev(R)
        if not nice <= out:
            return s.done(_nice_payload(s.ev, R, nice, out))
    return s.done()


def check_cc(rule, spec: DomainSpec) -> Verdict:
    """Condorcet consistency: the outcome is the CW set whenever that set is non-empty."""
    s = _Scan("CC", rule, spec)
    for R in s.profiles:
        winners = condorcet_winners(R)
        if not winners:
            s.skipped += 1
            continue
        s.scanned += 1
        out = s.ev(R)
        if out != winners:
            return s.done({
                "profile": _prof(R),
                "condorcet_winners": _names(winners),
                "output": _names(out),
            })
    return s.done()


def check_p3_subset(rule, spec: DomainSpec) -> Verdict:
    """Top-shift outcomes stay inside the shifted pair."""
    s = _Scan("P3-subset", rule, spec)
    for R in s.profiles:
        for x, y in itertools.combinations(range(spec.m), 2):
            s.scanned += 1
            shifted = shift(R, x, y)
            out = s.ev(shifted)
            if not out <= {x, y}:
                return s.done({
                    "profile": _prof(R),
                    "pair": _names((x, y)),
                    "shifted_profile": _prof(shifted),
                    "shifted_output": _names(out),
                })
    return s.done()


def _pair_fingerprint(R: Profile, x: int, y: int) -> tuple[int, ...]:
    return tuple((o[x] > o[y]) - (o[x] < o[y]) for o in R)


def check_p4_invariance(rule, spec: DomainSpec) -> Verdict:
    """Top-shift outcomes depend only on each voter's relation between the pair."""
    s = _Scan("P4-invariance", rule, spec)
    first: dict[tuple, tuple[Profile, frozenset]] = {}
    for Q in s.profiles:
        for x, y in itertools.combinations(range(spec.m), 2):
            s.scanned += 1
            key = (x, y, _pair_fingerprint(Q, x, y))
            out = s.ev(shift(Q, x, y))
            seen = first.setdefault(key, (Q, out))
            if seen[1] != out:
                R = seen[0]
                return s.done({
                    "profile": _prof(R),
                    "other_profile": _prof(Q),
                    "pair": _names((x, y)),
                    "shifted_output": _names(seen[1]),
                    "other_shifted_output": _names(out),
                })
    return s.done()


# ---------------------------------------------------------------------------
# Pair-quantified checkers
# ---------------------------------------------------------------------------

# Signature level of x against a rival w for one voter.
_WORSE, _TIED, _BETTER = 0, 1, 2


def _signatures(profiles, x: int) -> np.ndarray:
    """Levels of ``x`` against every rival, flattened to (profile, voter * rival)."""
    ranks = np.asarray(profiles, dtype=np.int16)
    m = ranks.shape[2]
    rivals = [w for w in range(m) if w != x]
    diff = ranks[:, :, rivals] - ranks[:, :, [x]]
    levels = (np.sign(diff) + 1).astype(np.int8)
    return levels.reshape(len(profiles), -1)


def _classes(sig: np.ndarray, mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distinct signatures among masked rows, with the smallest row index of each."""
    rows = np.nonzero(mask)[0]
    if rows.size == 0:
        return sig[:0], rows
    uniq, inverse = np.unique(sig[rows], axis=0, return_inverse=True)
    mins = np.full(len(uniq), np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(mins, inverse.reshape(-1), rows)
    return uniq, mins


def _first_dominated_pair(
    S: np.ndarray,
    smin: np.ndarray,
    T: np.ndarray,
    tmin: np.ndarray,
    strict_cols: Optional[np.ndarray] = None,
) -> Optional[tuple[int, int]]:
    """Smallest (r, q) with sig(q) >= sig(r) everywhere.

    With ``strict_cols`` additionally require a column ``c`` among them where
    sig(r)[c] <= TIED and sig(q)[c] == BETTER.
    """
    if len(S) == 0 or len(T) == 0:
        return None
    order = np.argsort(smin, kind="stable")
    width = max(1, S.shape[1])
    chunk = max(1, 4_000_000 // (len(T) * width))
    for start in range(0, len(order), chunk):
        block = order[start:start + chunk]
        Sb = S[block]
        valid = np.all(T[None, :, :] >= Sb[:, None, :], axis=2)
        if strict_cols is not None:
            gain = (Sb[:, None, strict_cols] <= _TIED) & (T[None, :, strict_cols] == _BETTER)
            valid &= np.any(gain, axis=2)
        hit_rows = np.nonzero(valid.any(axis=1))[0]
        if hit_rows.size:
            k = hit_rows[0]
            return int(smin[block[k]]), int(tmin[valid[k]].min())
    return None


def _pair_budget(s: _Scan, tests: int, budget: int) -> None:
    if s.spec.exhaustive and tests > budget:
        raise BudgetError(
            f"{s.axiom} scan over {s.spec.label()} needs {tests} premise tests (budget {budget}); "
            "use sample mode",
            tests,
        )


def check_tm(rule, spec: DomainSpec, pair_budget: int = DEFAULT_PAIR_BUDGET) -> Verdict:
    """Top monotonicity over all ordered (R, Q), pairs {x, y} and rivals z != x.

    The canonical first witness minimises (R, Q, x, y, z) lexicographically.
    """
    s = _Scan("TM", rule, spec)
    m, n = spec.m, spec.n
    N = len(s.profiles)
    combos = m * (m - 1) * (m - 1)
    _pair_budget(s, N * N * combos, pair_budget)
    s.scanned = N * N * combos
    if N == 0 or m < 2:
        return s.done()
    shifted_out = {
        (x, y): [s.ev(shift(P, x, y)) for P in s.profiles]
        for x, y in itertools.combinations(range(m), 2)
    }
    best: Optional[tuple[int, ...]] = None
    for x in range(m):
        sig = _signatures(s.profiles, x)
        rivals = [w for w in range(m) if w != x]
        for y in rivals:
            outs = shifted_out[(min(x, y), max(x, y))]
            premise = np.fromiter((x in o for o in outs), bool, N)
            S, smin = _classes(sig, premise)
            if len(S) == 0:
                continue
            for z in rivals:
                bad = np.fromiter(((x not in o) or (z in o) for o in outs), bool, N)
                T, tmin = _classes(sig, bad)
                zc = rivals.index(z)
                cols = np.arange(n) * (m - 1) + zc
                hit = _first_dominated_pair(S, smin, T, tmin, strict_cols=cols)
                if hit is not None:
                    key = (hit[0], hit[1], x, y, z)
                    if best is None or key < best:
                        best = key
    if best is None:
        return s.done()
    r, q, x, y, z = best
    R, Q = s.profiles[r], s.profiles[q]
    return s.done(_tm_payload(s.ev, R, Q, x, y, z))


def _tm_payload(ev: Evaluator, R: Profile, Q: Profile, x: int, y: int, z: int) -> dict:
    return {
        "profile": _prof(R),
        "other_profile": _prof(Q),
        "x": alt_name(x),
        "y": alt_name(y),
        "z": alt_name(z),
        "shifted_profile": _prof(shift(R, x, y)),
        "other_shifted_profile": _prof(shift(Q, x, y)),
        "output": _names(ev(R)),
        "other_output": _names(ev(Q)),
        "shifted_output": _names(ev(shift(R, x, y))),
        "other_shifted_output": _names(ev(shift(Q, x, y))),
    }


def check_mm(rule, spec: DomainSpec, restricted: bool = False, pair_budget: int = DEFAULT_PAIR_BUDGET) -> Verdict:
    """Maskin monotonicity over ordered (R, Q) and alternatives x.

    ``restricted`` quantifies R and Q over profiles admitting a Condorcet
    winner only. The canonical first witness minimises (R, Q, x).
    """
    if restricted and spec.restriction != "condorcet":
        spec = spec.with_restriction("condorcet")
    s = _Scan("MM", rule, spec)
    m = spec.m
    N = len(s.profiles)
    _pair_budget(s, N * N * m, pair_budget)
    s.scanned = N * N * m
    if N == 0:
        return s.done()
    outs = [s.ev(P) for P in s.profiles]
    best: Optional[tuple[int, int, int]] = None
    for x in range(m):
        selected = np.fromiter((x in o for o in outs), bool, N)
        sig = _signatures(s.profiles, x)
        S, smin = _classes(sig, selected)
        T, tmin = _classes(sig, ~selected)
        hit = _first_dominated_pair(S, smin, T, tmin)
        if hit is not None and (best is None or (hit[0], hit[1], x) < best):
            best = (hit[0], hit[1], x)
    if best is None:
        return s.done()
    r, q, x = best
    R, Q = s.profiles[r], s.profiles[q]
    return s.done({
        "profile": _prof(R),
        "other_profile": _prof(Q),
        "x": alt_name(x),
        "output": _names(outs[r]),
        "other_output": _names(outs[q]),
    })


CHECKERS: dict[str, Callable[..., Verdict]] = {
    "TA": check_ta,
    "TN": check_tn,
    "TS": check_ts,
    "TM": check_tm,
    "TR": check_tr,
    "TC": check_tc,
    "WTC": check_wtc,
    "MM": check_mm,
    "CC": check_cc,
    "P3-subset": check_p3_subset,
    "P4-invariance": check_p4_invariance,
}


def check(rule, axiom: str, spec: DomainSpec) -> Verdict:
    try:
        checker = CHECKERS[axiom]
    except KeyError:
        raise ValueError(f"unknown axiom {axiom!r}; expected one of {', '.join(AXIOMS)}") from None
    return checker(rule, spec)


# ---------------------------------------------------------------------------
# Replay
# ---------------------------------------------------------------------------


def _alts(names: list[str], lookup: dict[str, int]) -> frozenset:
    return frozenset(lookup[a] for a in names)


def replay(cert: Certificate) -> bool:
    """Re-evaluate only what the certificate names; True iff the violation reproduces.

    Raises CertificateError when the rule implementation has changed since the
    certificate was issued or the payload does not fit its axiom.
    """
    rule = rule_from_id(cert.rule)
    current = rule_hash(rule.id, rule.version)
    if rule.id != cert.rule or current != cert.rule_hash:
        raise CertificateError(
            f"rule-version hash mismatch for {cert.rule}: certificate {cert.rule_hash}, current {current}"
        )
    names = alt_names(cert.m)
    lookup = {a: i for i, a in enumerate(names)}
    p = cert.payload

    def C(profile: Profile) -> frozenset:
        check_admissible(rule, profile)
        return rule.func(profile)

    def profile(key: str) -> Profile:
        prof = parse_profile_lines(p[key], names)
        if len(prof) != cert.n:
            raise CertificateError(f"{key} has {len(prof)} voters, certificate says {cert.n}")
        return prof

    def alts(key: str) -> frozenset:
        return _alts(p[key], lookup)

    try:
        R = profile("profile")
        kind = cert.axiom
        if kind in ("TA", "TN"):
            perm = [int(v) for v in p["permutation"]]
            if is_two_profile(R) is None:
                return False
            if kind == "TA":
                permuted = apply_voter_permutation(R, perm)
                expected = C(R)
            else:
                permuted = apply_alternative_permutation(R, perm)
                expected = permute_set(C(R), perm)
            got = C(permuted)
            return (
                permuted == profile("permuted_profile")
                and C(R) == alts("output")
                and got == alts("permuted_output")
                and got != expected
            )
        if kind in ("TR", "P3-subset"):
            x, y = (lookup[a] for a in p["pair"])
            shifted = top_shift_profile(R, x, y)
            out = C(shifted)
            broken = not (out & {x, y}) if kind == "TR" else not out <= {x, y}
            return shifted == profile("shifted_profile") and out == alts("shifted_output") and broken
        if kind in ("TC", "WTC"):
            m = cert.m
            nice = frozenset(
                x
                for x in range(m)
                if all(x in C(top_shift_profile(R, x, y)) for y in range(m) if y != x)
            )
            out = C(R)
            broken = (nice and out != nice) if kind == "TC" else not nice <= out
            return bool(broken) and nice == alts("nice_set") and out == alts("output")
        if kind == "CC":
            winners = condorcet_winners(R)
            out = C(R)
            return (
                bool(winners)
                and out != winners
                and winners == alts("condorcet_winners")
                and out == alts("output")
            )
        if kind == "TM":
            Q = profile("other_profile")
            x, y, z = lookup[p["x"]], lookup[p["y"]], lookup[p["z"]]
            before = C(top_shift_profile(R, x, y))
            after = C(top_shift_profile(Q, x, y))
            return (
                x in before
                and is_additional_support(R, Q, x, z)
                and (x not in after or z in after)
                and before == alts("shifted_output")
                and after == alts("other_shifted_output")
            )
        if kind == "MM":
            Q = profile("other_profile")
            x = lookup[p["x"]]
            before, after = C(R), C(Q)
            return (
                x in before
                and x not in after
                and all(never_worse(r, q, x) for r, q in zip(R, Q))
                and before == alts("output")
                and after == alts("other_output")
            )
        if kind == "P4-invariance":
            Q = profile("other_profile")
            x, y = (lookup[a] for a in p["pair"])
            same = restrict_profile(R, (x, y)) == restrict_profile(Q, (x, y))
            a, b = C(top_shift_profile(R, x, y)), C(top_shift_profile(Q, x, y))
            return (
                same
                and a != b
                and a == alts("shifted_output")
                and b == alts("other_shifted_output")
            )
    except (KeyError, TypeError) as exc:
        raise CertificateError(f"certificate payload for {cert.axiom} is missing {exc}") from exc
    except DomainError:
        return False
    raise CertificateError(f"no replay procedure for axiom {cert.axiom!r}")
