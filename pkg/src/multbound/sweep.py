"""Corpus sweep: profile, oracle, bounds and property checks for every group."""

from __future__ import annotations

import csv
import io
import json
import multiprocessing
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bounds import (
    FAIL,
    PASS,
    SKIPPED,
    VACUOUS,
    all_bounds,
    check_report,
    class_bound,
    class_two_bounds,
    classical_bounds,
    commutator_rank_bound,
    large_special_bounds,
    maximal_class_bound,
)
from .cohomology import DEFAULT_ORACLE_CAP, multiplier_type
from .families import FAMILIES, Builtin, FamilyError, default_corpus
from .groups import GroupError, TableGroup
from .pc import DEFAULT_TABLE_CAP, PresentationError, materialize_table, parse_presentation
from .psi import EllisWiegold, ew_inequality, v_subgroup_size
from .structure import GroupProfile, agemo, group_profile, log_p, quotient

SCHEMA = 1

# every bound family the sweep evaluates; all_bounds() is their concatenation
BOUND_FUNCTIONS = (
    classical_bounds,
    class_bound,
    commutator_rank_bound,
    class_two_bounds,
    large_special_bounds,
    maximal_class_bound,
)


@dataclass
class PropertyResult:
    name: str
    verdict: str
    lhs: int | None = None
    rhs: int | None = None

    def as_dict(self) -> dict:
        return {"name": self.name, "verdict": self.verdict, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class GroupContext:
    """What the property checks need; built once per group."""

    g: TableGroup
    profile: GroupProfile
    oracle_cap: int
    multiplier_log: int | None
    ew: EllisWiegold = field(init=False)

    def __post_init__(self):
        self.ew = EllisWiegold(self.g)


def _cmp(name, ok, lhs, rhs) -> PropertyResult:
    return PropertyResult(name, PASS if ok else FAIL, int(lhs), int(rhs))


def check_psi_lower(ctx: GroupContext) -> list[PropertyResult]:
    """|Im Psi_i| >= p^(delta - i) for 2 <= i <= min(delta, c)."""
    pr = ctx.profile
    top = min(pr.delta, pr.c)
    if top < 2:
        return [PropertyResult("psi_image_lower", VACUOUS)]
    return [
        _cmp(f"psi_image_lower[i={i}]", ctx.ew.image_logs[i] >= pr.delta - i, ctx.ew.image_logs[i], pr.delta - i)
        for i in range(2, top + 1)
    ]


def check_psi2_rank_lower(ctx: GroupContext) -> list[PropertyResult]:
    """|Im Psi_2| >= p^(sum_{i=2}^{min(delta, gamma+1)} (delta - i))."""
    pr = ctx.profile
    if pr.c < 2:
        return [PropertyResult("psi2_rank_lower", VACUOUS)]
    bound = sum(pr.delta - i for i in range(2, min(pr.delta, pr.gamma + 1) + 1))
    got = ctx.ew.image_logs[2]
    return [_cmp("psi2_rank_lower", got >= bound, got, bound)]


def check_ew_inequality(ctx: GroupContext) -> list[PropertyResult]:
    names = ("ew_inequality", "ew_relaxation")
    if ctx.profile.c < 2:
        return [PropertyResult(n, VACUOUS) for n in names]
    if ctx.multiplier_log is None:
        return [PropertyResult(n, SKIPPED) for n in names]
    ineq = ew_inequality(ctx.g, ctx.multiplier_log, ctx.ew)
    return [
        _cmp(names[0], ineq.lhs <= ineq.rhs, ineq.lhs, ineq.rhs),
        _cmp(names[1], ineq.rhs <= ineq.rhs_relaxed, ineq.rhs, ineq.rhs_relaxed),
    ]


def v_hypotheses(pr: GroupProfile) -> bool:
    return pr.p != 2 and pr.c == 2 and pr.has_Gp_in_gamma2


def check_v_subgroup(ctx: GroupContext) -> list[PropertyResult]:
    """|<x^p (x) x gamma_2>| = p^(t(2d - t + 1)/2)."""
    pr = ctx.profile
    if not v_hypotheses(pr):
        return [PropertyResult("v_subgroup", VACUOUS)]
    got = log_p(pr.p, v_subgroup_size(ctx.g))
    want = pr.t * (2 * pr.d - pr.t + 1) // 2
    return [_cmp("v_subgroup", got == want, got, want)]


def karpilovsky_hypotheses(pr: GroupProfile) -> bool:
    return pr.p != 2 and pr.c == 2 and pr.has_Gp_cyclic_p and pr.has_Gp_in_gamma2


def check_karpilovsky(ctx: GroupContext) -> list[PropertyResult]:
    """|M(G)| |G^p| = |M(G/G^p)| when G^p is central of order p and alpha vanishes."""
    pr = ctx.profile
    if not karpilovsky_hypotheses(pr):
        return [PropertyResult("karpilovsky", VACUOUS)]
    if ctx.multiplier_log is None:
        return [PropertyResult("karpilovsky", SKIPPED)]
    q = quotient(ctx.g, agemo(ctx.g))
    mq = multiplier_type(q, cap=ctx.oracle_cap).log_order
    lhs = ctx.multiplier_log + pr.t
    return [_cmp("karpilovsky", lhs == mq, lhs, mq)]


PROPERTY_CHECKS = (
    check_psi_lower,
    check_psi2_rank_lower,
    check_ew_inequality,
    check_v_subgroup,
    check_karpilovsky,
)


# -- corpus entries ----------------------------------------------------------------


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    source: str  # "builtin" or "file"
    builtin: Builtin | None = None
    path: str | None = None


class InputError(Exception):
    pass


def builtin_entries(families="all", max_order: int = 128, primes=(2, 3, 5)) -> list[CorpusEntry]:
    corpus = default_corpus(primes=primes, max_order=max_order)
    if families != "all":
        wanted = set(families)
        unknown = wanted - set(FAMILIES)
        if unknown:
            raise InputError(f"unknown families: {', '.join(sorted(unknown))}")
        corpus = [b for b in corpus if b.id.split("(", 1)[0] in wanted]
    return [CorpusEntry(b.id, "builtin", builtin=b) for b in corpus]


def file_entries(paths) -> list[CorpusEntry]:
    return [CorpusEntry(str(p), "file", path=str(p)) for p in paths]


def load_group(entry: CorpusEntry, table_cap: int = DEFAULT_TABLE_CAP) -> TableGroup:
    """Materialize an entry; raises InputError carrying a 'rejected: ...' status."""
    try:
        if entry.builtin is not None:
            return entry.builtin.table(table_cap)
        text = Path(entry.path).read_text()
        pres = parse_presentation(text)
        ok, failing = pres.consistency_check()
        if not ok:
            raise InputError(f"rejected: consistency {failing}")
        return materialize_table(pres, cap=table_cap, check=False)
    except OSError as exc:
        raise InputError(f"rejected: unreadable ({exc.strerror})") from None
    except PresentationError as exc:
        raise InputError(f"rejected: parse ({exc})") from None
    except (GroupError, FamilyError) as exc:
        raise InputError(f"rejected: {exc}") from None


def _exp_fields(x: Fraction) -> tuple[int, int]:
    return x.numerator, x.denominator


def analyze(entry: CorpusEntry, oracle_cap: int = DEFAULT_ORACLE_CAP, table_cap: int = DEFAULT_TABLE_CAP) -> dict:
    """Full per-group record, JSON-ready."""
    rec: dict = {"id": entry.id, "source": entry.source}
    try:
        g = load_group(entry, table_cap)
    except InputError as exc:
        rec.update(status=str(exc), profile=None, multiplier=None, bounds=[], dominance={}, properties=[])
        return rec
    pr = group_profile(g)
    m = None
    if g.order <= oracle_cap:
        mt = multiplier_type(g, cap=oracle_cap).type
        m = mt.log_order
        rec_mult = {"type": mt.orders, "order": mt.order}
    else:
        rec_mult = None
    rep = check_report(entry.id, pr, all_bounds(pr), m)
    ctx = GroupContext(g, pr, oracle_cap, m)
    props = [r for check in PROPERTY_CHECKS for r in check(ctx)]
    rec.update(
        status="ok",
        profile=pr.as_dict(),
        multiplier=rec_mult,
        bounds=[
            {
                "name": b.name,
                "exponent_num": _exp_fields(b.exponent)[0],
                "exponent_den": _exp_fields(b.exponent)[1],
                "kind": b.kind,
                "applicable": b.applicable,
                "reason": b.reason,
                "verdict": rep.verdicts[b.name],
            }
            for b in rep.bounds
        ],
        dominance=rep.dominance,
        properties=[r.as_dict() for r in props],
    )
    return rec


def _analyze_star(args):
    return analyze(*args)


@dataclass
class SweepOptions:
    oracle_cap: int = DEFAULT_ORACLE_CAP
    table_cap: int = DEFAULT_TABLE_CAP
    jobs: int = 1
    reproducible: bool = False
    config: dict = field(default_factory=dict)


def run_sweep(entries: list[CorpusEntry], opts: SweepOptions | None = None) -> dict:
    opts = opts or SweepOptions()
    seen: set[str] = set()
    unique, dupes = [], []
    for e in entries:
        (dupes if e.id in seen else unique).append(e)
        seen.add(e.id)
    unique.sort(key=lambda e: e.id)
    work = [(e, opts.oracle_cap, opts.table_cap) for e in unique]
    if opts.jobs > 1 and len(work) > 1:
        # fork would inherit numpy thread pools; spawn keeps workers clean
        ctx = multiprocessing.get_context("spawn")
        with ctx.Pool(opts.jobs) as pool:
            groups = pool.map(_analyze_star, work, chunksize=1)
    else:
        groups = [_analyze_star(w) for w in work]
    for e in dupes:
        groups.append({"id": e.id, "source": e.source, "status": "rejected: duplicate id",
                       "profile": None, "multiplier": None, "bounds": [], "dominance": {}, "properties": []})
    groups.sort(key=lambda r: (r["id"], r["status"] != "ok"))

    report = {"schema": SCHEMA, "tool": "multbound", "version": __version__}
    if not opts.reproducible:
        report["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    report["config"] = dict(opts.config, oracle_cap=opts.oracle_cap, table_cap=opts.table_cap)
    report["groups"] = groups
    report["summary"] = summarize(groups)
    return report


def summarize(groups: list[dict]) -> dict:
    counts = {PASS: 0, FAIL: 0, VACUOUS: 0, "oracle_skipped": 0}
    key = {PASS: PASS, FAIL: FAIL, VACUOUS: VACUOUS, SKIPPED: "oracle_skipped"}
    failures = []
    rejected = 0
    for rec in groups:
        if rec["status"] != "ok":
            rejected += 1
            continue
        verdicts = [(b["name"], b["verdict"]) for b in rec["bounds"]]
        verdicts += list(rec["dominance"].items())
        verdicts += [(p["name"], p["verdict"]) for p in rec["properties"]]
        for name, v in verdicts:
            counts[key[v]] += 1
            if v == FAIL:
                failures.append(f"{rec['id']}: {name}")
    return {"groups": len(groups), "rejected": rejected, **counts, "failures": failures}


def exit_code(report: dict) -> int:
    s = report["summary"]
    if s[FAIL]:
        return 2
    if s["rejected"]:
        return 3
    return 0


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


CSV_FIELDS = [
    "id", "status", "p", "n", "k", "d", "c", "delta", "gamma", "t", "multiplier_order",
    "bound", "kind", "exponent_num", "exponent_den", "applicable", "reason", "verdict",
]


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for rec in report["groups"]:
        base = {"id": rec["id"], "status": rec["status"]}
        if rec["profile"]:
            base.update({k: rec["profile"][k] for k in ("p", "n", "k", "d", "c", "delta", "gamma", "t")})
        if rec["multiplier"]:
            base["multiplier_order"] = rec["multiplier"]["order"]
        if not rec["bounds"]:
            w.writerow(base)
        for b in rec["bounds"]:
            w.writerow({**base, "bound": b["name"], **{k: b[k] for k in CSV_FIELDS[12:]}})
    return buf.getvalue()
