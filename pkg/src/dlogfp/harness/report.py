"""Plain-text reports for the stats, verify and simulate subcommands."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence

from ..analysis import (
    DegenerateFit,
    InsufficientData,
    TRANSFORMS,
    chi_squared_gof,
    grouped_stats,
)
from ..counting import (
    check_cz_bound,
    check_lemma27,
    check_prop42_part5,
    check_thm48,
    gcd_order_counts,
)
from ..model import conjecture36_scan, model_summary, monte_carlo
from ..numtheory import divisors, factor_of
from .tables import PAPER_COUNTS, TABLES, build_tables, compare_with_paper

# published grouped statistics: (table, transform) -> (mean, sd, skewness, kurtosis)
PAPER_STATS = {
    ("positive", "identity"): (0.4943, None, None, None),
    ("negative", "identity"): (0.5050, None, None, None),
    ("all", "identity"): (0.5003, 0.1374, -0.6785, 3.6516),
    ("all", "exponential"): (1.6643, 0.2196, -0.2366, 3.2065),
}
PAPER_CHI2_P = {"identity": 7.8039e-34, "exponential": 2.2243e-10}

# T((p-1)/2, p) = 0 presupposes p > 3: at p = 3, (p-1)/2 = 1 and it would
# contradict T(1, p) = phi(p-1).
PROP42_MIN_P = 5

LEMMA27_MAX_P = 500


def _fmt(x) -> str:
    return "-" if x is None else f"{x:.4f}"


def stats_report(rows: Sequence) -> str:
    nonzero = sum(1 for r in rows if r.delta != 0)
    if nonzero < 2:
        raise InsufficientData(f"need at least 2 rows with delta != 0, have {nonzero}")
    tables = build_tables(rows)
    out = ["Grouped statistics of log_p|delta| (class midpoints, n-1 moments)", ""]
    out.append(f"{'table':<9} {'transform':<12} {'n':>5}  {'mean':>8} {'sd':>8} {'skew':>8} {'kurt':>8}   published")
    for name in TABLES:
        for tf in TRANSFORMS:
            h = tables[name]
            try:
                st = grouped_stats(h, tf)
                ours = f"{st.mean:8.4f} {st.std_dev:8.4f} {st.skewness:8.4f} {st.kurtosis:8.4f}"
            except InsufficientData:
                ours = f"{'(too few values)':>35}"
            pub = PAPER_STATS.get((name, tf))
            pub_s = " ".join(_fmt(v) for v in pub) if pub else ""
            out.append(f"{name:<9} {tf:<12} {h.total:>5}  {ours}   {pub_s}")
    out += ["", "Chi-squared goodness of fit, combined table, fitted normal, 3 dof"]
    for tf in TRANSFORMS:
        try:
            res = chi_squared_gof(tables["all"], tf)
            line = f"  {tf:<12} statistic {res.statistic:10.4f}  p-value {res.p_value_text()}"
        except (DegenerateFit, InsufficientData) as exc:
            line = f"  {tf:<12} degenerate fit: {exc}"
        out.append(f"{line}   (published p-value {PAPER_CHI2_P[tf]:.4e})")
    zeros = [r.p for r in rows if r.delta == 0]
    out += ["", f"delta = 0 occurred for {len(zeros)} primes: {zeros}"]
    if zeros:
        out.append("  the published data reports that delta = 0 did not occur")
    return "\n".join(out) + "\n"


def comparison_report(rows: Sequence) -> str:
    tables = build_tables(rows)
    devs = compare_with_paper(rows)
    out = ["Comparison with published tables"]
    for name in TABLES:
        out.append(f"  {name:<9} ours {tables[name].counts}  published {list(PAPER_COUNTS[name])}")
    total = sum(abs(d.deviation) for d in devs)
    out.append(f"  total absolute per-bucket deviation: {total}")
    for d in devs:
        tag = "explained" if d.explained else "UNEXPLAINED"
        out.append(f"  [{tag}] {d.table} bucket {d.bucket}: ours {d.ours}, published {d.published}")
        for p, why in d.items:
            out.append(f"      p={p}: {why}")
    return "\n".join(out) + "\n"


@dataclass
class VerifyOutcome:
    text: str
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_report(rows: Sequence, epsilon: float) -> VerifyOutcome:
    lines: List[str] = ["Bound verification"]
    bad: List[str] = []
    n = len(rows)

    cz = [check_cz_bound(r) for r in rows]
    cz_fail = [b.p for b in cz if not b.satisfied]
    cz_fail += [r.p for r in rows if not r.cz_ok and r.p not in cz_fail]
    lines.append(f"  PR x RPPR bound: satisfied {n - len(cz_fail)}/{n}")
    bad += [f"PR x RPPR bound fails at p={p}" for p in cz_fail]

    in_scope = [r for r in rows if r.p >= PROP42_MIN_P]
    p5 = [check_prop42_part5(r) for r in in_scope]
    p5_fail = [b.p for b in p5 if not b.satisfied]
    p14_fail = [r.p for r in in_scope if not r.prop42_ok]
    m = len(in_scope)
    lines.append(f"  T(e,p) bounds and identities (stored flags): satisfied {m - len(p14_fail)}/{m}")
    lines.append(f"  |delta| divisor-sum bound: satisfied {m - len(p5_fail)}/{m}")
    skipped = [r.p for r in rows if r.p < PROP42_MIN_P]
    if skipped:
        lines.append(f"  T(e,p) checks not applied to p={skipped} (need p > 3; at p = 3, T(1,p) = 1 but T((p-1)/2,p) = 0 is required)")
    bad += [f"T(e,p) checks fail at p={p}" for p in p14_fail]
    bad += [f"|delta| divisor-sum bound fails at p={p}" for p in p5_fail]

    small = [r.p for r in rows if r.p <= LEMMA27_MAX_P]
    checked = 0
    l27_fail = []
    for p in small:
        counts = gcd_order_counts(p)
        ds = divisors(factor_of(p - 1))
        for e in ds:
            for f in ds:
                checked += 1
                rep = check_lemma27(p, e, f, p - 1, counts)
                if not rep.satisfied:
                    l27_fail.append((p, e, f))
    lines.append(
        f"  gcd/order count bound (N = p-1, all divisor pairs, {len(small)} primes <= {LEMMA27_MAX_P}): "
        f"satisfied {checked - len(l27_fail)}/{checked}"
    )
    bad += [f"gcd/order count bound fails at (p, e, f)={t}" for t in l27_fail]

    t48 = [check_thm48(r) for r in rows]
    ok48 = sum(b.satisfied for b in t48)
    frac = ok48 / n if n else 0.0
    lines.append(f"  p^0.8313 bound (not claimed for every p): satisfied {ok48}/{n} ({frac:.4f})")

    over = [r.p for r in rows if abs(r.delta) > r.p]
    lines.append(f"  primes with |delta| > p: {len(over)} {over if over else ''}".rstrip())
    cnt, cfrac, offenders = conjecture36_scan(rows, epsilon)
    lines.append(
        f"  |F_any - (p-1)| > p^(1/2+{epsilon:g}): {cnt}/{n} primes ({cfrac:.4f}); "
        "error centered at p-1"
    )
    if offenders:
        shown = offenders[:20]
        more = f" ... (+{len(offenders) - 20})" if len(offenders) > 20 else ""
        lines.append(f"    offending primes: {shown}{more}")
    lines.append("  result: " + ("all theorem-backed bounds hold" if not bad else f"{len(bad)} VIOLATIONS"))
    lines += [f"    {b}" for b in bad]
    return VerifyOutcome("\n".join(lines) + "\n", bad)


def simulate_report(p: int, trials: int, seed: int, workers: int = 1) -> str:
    ms = model_summary(p)
    sim = monte_carlo(p, trials, seed, workers)
    se = sim.standard_error
    rel = (sim.empirical_variance - ms.variance) / ms.variance if ms.variance else 0.0
    lines = [
        f"Random model for p = {p}",
        f"  exact mean {ms.mean}, variance {ms.variance}, sd {ms.std_dev:.4f}",
        f"  Monte Carlo ({trials} trials, seed {seed}):",
        f"    mean {sim.empirical_mean:.4f} +/- {se:.4f} (1 s.e.), "
        f"off by {(sim.empirical_mean - ms.mean) / se if se else 0.0:+.2f} s.e.",
        f"    variance {sim.empirical_variance:.4f} (relative error {rel:+.4f})",
        "  histogram of sum X_h - (p-1) (bin start: count):",
    ]
    lines += [f"    {lo:>8}: {c}" for lo, c in sim.samples_summary]
    return "\n".join(lines) + "\n"

