"""Command-line surface: compute, verify, analyze, bench, export.

Exit codes: 0 success, 1 claim or identity mismatch, 2 usage error,
3 I/O or file-integrity error. The default table directory comes from the
MERTENS_TABLES environment variable when --tables is not given.

A config file of `key = value` lines may supply any option (dotted names
like psd.segment_length or plain destination names like segment_length);
explicit command-line flags always win over the file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from statistics import median

import numpy as np

from . import analysis, crosscheck, emd, reference, spectral, storage, tables
from .errors import IntegrityError, NumericalError

ENV_TABLES = "MERTENS_TABLES"

_CONFIG_KEY_MAP = {
    "psd.segment_length": "segment_length",
    "psd.overlap": "overlap",
    "psd.window": "window",
    "psd.band_lo": "band_lo",
    "psd.band_hi": "band_hi",
    "emd.sd_threshold": "sd_threshold",
    "emd.max_sifts": "max_sifts",
    "emd.max_modes": "max_modes",
    "emd.boundary": "boundary",
    "emd.limit": "emd_limit",
    "ratio.stride": "stride",
    "bounds.alpha": "alpha",
    "bounds.n_min": "n_min",
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    """Validated compute-pipeline settings."""

    limit: int
    algorithm: str
    out_dir: Path
    checkpoint_path: Path | None = None
    checkpoint_every: int = tables.DEFAULT_CHECKPOINT_EVERY
    allow_large: bool = False


@dataclass
class ReproductionReport:
    """Claim table: id, expected, computed, match flag, elapsed seconds."""

    rows: list[tuple[str, str, str, bool, float]] = field(default_factory=list)

    def add(self, claim_id: str, expected, computed, match: bool, elapsed: float) -> None:
        if any(r[0] == claim_id for r in self.rows):
            raise ValueError(f"duplicate claim id {claim_id!r}")
        self.rows.append((claim_id, str(expected), str(computed), match, elapsed))

    @property
    def all_match(self) -> bool:
        return all(r[3] for r in self.rows)

    def write_csv(self, path: Path) -> None:
        storage.write_csv(
            path,
            "claim_id,expected,computed,match,elapsed_s",
            [(cid, exp, comp, "yes" if ok else "NO", f"{dt:.3f}")
             for cid, exp, comp, ok, dt in self.rows],
        )

    def print_summary(self) -> None:
        for cid, exp, comp, ok, dt in self.rows:
            flag = "ok  " if ok else "FAIL"
            print(f"  [{flag}] {cid}: expected {exp}, computed {comp} ({dt:.2f}s)")
        misses = sum(1 for r in self.rows if not r[3])
        if misses:
            print(f"{misses} of {len(self.rows)} claims mismatched")
        else:
            print(f"all {len(self.rows)} claims match")


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _table_dir(args) -> Path:
    if args.tables is not None:
        return Path(args.tables)
    env = os.environ.get(ENV_TABLES)
    if env:
        return Path(env)
    raise CliError(
        f"no table directory: pass --tables or set the {ENV_TABLES} environment variable", 2
    )


def _load_tables(dir_: Path, need_mu: bool, need_m: bool):
    mu_path = dir_ / storage.MOBIUS_FILENAME
    m_path = dir_ / storage.MERTENS_FILENAME
    wanted = [p for p, need in ((mu_path, need_mu), (m_path, need_m)) if need]
    missing = [str(p) for p in wanted if not p.exists()]
    if missing:
        raise CliError(
            "missing table file(s): " + ", ".join(missing)
            + f"; build them first with `mertens compute --n <N> --algo sieve --out {dir_}`",
            3,
        )
    mu_t = m_t = None
    if need_mu:
        _, vals = storage.read_table(mu_path, expected_kind=storage.KIND_MOBIUS)
        mu_t = tables.MobiusTable(len(vals), vals)
    if need_m:
        _, vals = storage.read_table(m_path, expected_kind=storage.KIND_MERTENS)
        m_t = tables.MertensTable(len(vals), vals)
    return mu_t, m_t


def _recursive_scan_table(n: int) -> tables.MobiusTable:
    mu = np.zeros(n, dtype=np.int8)
    mu[0] = 1
    for k in range(2, n + 1):
        mu[k - 1] = tables.mobius_recursive(k, mu[: k - 1], strategy="scan")
    return tables.MobiusTable(n, mu)


def cmd_compute(cfg: RunConfig) -> int:
    quadratic = cfg.algorithm in ("incremental", "direct")
    if quadratic and cfg.limit > tables.DEFAULT_DIRECT_CAP and not cfg.allow_large:
        raise CliError(
            f"--n {cfg.limit} exceeds the default cap {tables.DEFAULT_DIRECT_CAP} for the "
            f"quadratic '{cfg.algorithm}' algorithm; pass --allow-large to override", 2)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.checkpoint_path is not None:
        cfg.checkpoint_path.parent.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    if cfg.algorithm == "sieve":
        mu_t = tables.mobius_sieve(cfg.limit)
    elif cfg.algorithm == "direct":
        mu_t = _recursive_scan_table(cfg.limit)
    elif cfg.algorithm == "incremental":
        if cfg.checkpoint_path is not None and cfg.checkpoint_path.exists():
            acc = tables.MertensAccumulator.resume(cfg.checkpoint_path)
            print(f"resumed from checkpoint at n={acc.n}")
        else:
            acc = tables.MertensAccumulator.start()
        acc.advance_to(cfg.limit, checkpoint_path=cfg.checkpoint_path,
                       checkpoint_every=cfg.checkpoint_every)
        mu_t = acc.mobius()
    else:
        raise CliError(f"unknown algorithm {cfg.algorithm!r}", 2)
    m_t = tables.mertens_from_mobius(mu_t)
    elapsed = time.perf_counter() - t0

    storage.write_table(cfg.out_dir / storage.MOBIUS_FILENAME, mu_t.values, storage.KIND_MOBIUS)
    storage.write_table(cfg.out_dir / storage.MERTENS_FILENAME, m_t.values, storage.KIND_MERTENS)
    print(f"built tables to n={cfg.limit} with '{cfg.algorithm}' in {elapsed:.2f}s"
          f" -> {cfg.out_dir}")
    for n in sorted(reference.MERTENS_SPOT_VALUES):
        if n <= cfg.limit:
            print(f"  M({n}) = {m_t.value(n)}")
    return 0


def cmd_verify(args) -> int:
    caps = {
        "redheffer": args.redheffer_max,
        "farey": args.farey_max,
        "hyperbolic": args.hyperbolic_max,
        "direct": args.direct_max,
    }
    for name, cap in caps.items():
        if cap < 1:
            raise CliError(f"--{name}-max must be positive, got {cap}", 2)
    needed = max(caps.values())
    if args.tables is not None:
        mu_t, m_t = _load_tables(Path(args.tables), True, True)
        if mu_t.limit < needed:
            raise CliError(f"tables cover 1..{mu_t.limit} but checks need 1..{needed}", 2)
    else:
        mu_t = tables.mobius_sieve(needed)
        m_t = tables.mertens_from_mobius(mu_t)

    report = ReproductionReport()
    m_vals = m_t.values

    def run(claim_id: str, fn):
        (first_bad, detail), dt = _timed(fn)
        ok = first_bad is None
        report.add(claim_id, "no mismatch", "no mismatch" if ok else detail, ok, dt)
        if not ok:
            print(f"MISMATCH {claim_id}: {detail}")

    def check_values(claim_id: str, limit: int, oracle):
        def scan():
            for n in range(1, limit + 1):
                got = oracle(n)
                want = int(m_vals[n - 1])
                if got != want:
                    return n, f"first mismatch at n={n}: got {got}, table has {want}"
            return None, ""
        run(claim_id, scan)

    def scan_mu_range():
        bad = np.nonzero((mu_t.values < -1) | (mu_t.values > 1))[0]
        if len(bad):
            return int(bad[0]) + 1, f"mu({int(bad[0]) + 1}) = {mu_t.values[bad[0]]}"
        if mu_t.value(1) != 1:
            return 1, f"mu(1) = {mu_t.value(1)}"
        return None, ""
    run("mobius_values_in_range", scan_mu_range)

    def scan_steps():
        steps = np.diff(m_vals)
        bad = np.nonzero(np.abs(steps) > 1)[0]
        if len(bad):
            n = int(bad[0]) + 2
            return n, f"|M({n}) - M({n - 1})| = {abs(int(steps[bad[0]]))}"
        return None, ""
    run("mertens_step_bounded", scan_steps)

    def scan_parity():
        pc = tables.parity_counts(mu_t, mu_t.limit)
        if pc.q != pc.even_count + pc.odd_count:
            return mu_t.limit, f"q {pc.q} != even+odd {pc.even_count + pc.odd_count}"
        if int(m_vals[-1]) != pc.even_count - pc.odd_count:
            return mu_t.limit, (f"M({mu_t.limit}) = {int(m_vals[-1])}"
                                f" but even-odd = {pc.even_count - pc.odd_count}")
        return None, ""
    run("parity_identity", scan_parity)

    def scan_direct():
        rec = _recursive_scan_table(caps["direct"])
        diff = np.nonzero(rec.values != mu_t.values[: caps["direct"]])[0]
        if len(diff):
            n = int(diff[0]) + 1
            return n, (f"first mismatch at k={n}: recursion {rec.values[n - 1]},"
                       f" sieve {mu_t.values[n - 1]}")
        return None, ""
    run("recursive_table_vs_sieve", scan_direct)

    def scan_strategies():
        limit = min(caps["direct"], 2000)
        vals = mu_t.values
        for k in range(2, limit + 1):
            a = tables.mobius_recursive(k, vals[: k - 1], strategy="scan")
            b = tables.mobius_recursive(k, vals[: k - 1], strategy="divisors")
            if a != b:
                return k, f"strategies disagree at k={k}: scan {a}, divisors {b}"
        return None, ""
    run("recursive_strategies_agree", scan_strategies)

    check_values("redheffer_vs_sieve", caps["redheffer"], crosscheck.mertens_redheffer)
    check_values("farey_vs_sieve", caps["farey"], crosscheck.mertens_farey)

    def scan_farey_count():
        n = caps["farey"]
        count = len(crosscheck.farey_sequence(n).fractions)
        want = crosscheck.totient_summatory(n)
        if count != want:
            return n, f"|F_{n}| = {count}, totient summatory = {want}"
        return None, ""
    run("farey_count_vs_totient", scan_farey_count)

    check_values("hyperbolic_vs_sieve", caps["hyperbolic"], crosscheck.mertens_hyperbolic)

    report.print_summary()
    return 0 if report.all_match else 1


def _claim_tol(report, claim_id, expected, computed, tol, elapsed):
    match = abs(computed - expected) <= tol
    report.add(claim_id, f"{expected} +/- {tol}", repr(computed), match, elapsed)


def _analyze_zeros(mu_t, m_t, out_dir, args, report):
    (zeros, dt) = _timed(lambda: analysis.find_zeros(m_t))
    storage.write_csv(out_dir / "zeros.csv", "n", ((int(n),) for n in zeros.indices))
    mob_zeros, dt2 = _timed(lambda: analysis.count_mobius_zeros(mu_t))
    if m_t.limit == reference.STUDY_LIMIT:
        report.add("mertens_zero_count", reference.MERTENS_ZERO_COUNT, len(zeros.indices),
                   len(zeros.indices) == reference.MERTENS_ZERO_COUNT, dt)
        report.add("mobius_zero_count", reference.MOBIUS_ZERO_COUNT, mob_zeros,
                   mob_zeros == reference.MOBIUS_ZERO_COUNT, dt2)
    else:
        print(f"zero counts at n={m_t.limit}: M has {len(zeros.indices)}, mu has {mob_zeros}")


def _analyze_extrema(mu_t, m_t, out_dir, args, report):
    zeros = analysis.find_zeros(m_t)
    (records, dt) = _timed(lambda: analysis.segment_extrema(m_t, zeros))
    storage.write_csv(
        out_dir / "extrema.csv",
        "left_zero,right_zero,kind,value,first_attained,attain_count",
        ((r.left_zero, r.right_zero, r.kind, r.value, r.attained_at[0], len(r.attained_at))
         for r in records),
    )
    (glob, dt2) = _timed(lambda: analysis.global_extrema(m_t))
    n_max = sum(1 for r in records if r.kind == "maximum")
    n_min = len(records) - n_max
    if m_t.limit == reference.STUDY_LIMIT:
        report.add("segment_extrema_total", reference.SEGMENT_EXTREMA_TOTAL, len(records),
                   len(records) == reference.SEGMENT_EXTREMA_TOTAL, dt)
        report.add("segment_maxima", reference.SEGMENT_MAXIMA_COUNT, n_max,
                   n_max == reference.SEGMENT_MAXIMA_COUNT, 0.0)
        report.add("segment_minima", reference.SEGMENT_MINIMA_COUNT, n_min,
                   n_min == reference.SEGMENT_MINIMA_COUNT, 0.0)
        report.add("global_max_value", reference.GLOBAL_MAX_VALUE, glob.max_value,
                   glob.max_value == reference.GLOBAL_MAX_VALUE, dt2)
        report.add("global_min_value", reference.GLOBAL_MIN_VALUE, glob.min_value,
                   glob.min_value == reference.GLOBAL_MIN_VALUE, 0.0)
        report.add("global_max_indices", reference.GLOBAL_MAX_INDICES_PUBLISHED,
                   glob.max_indices,
                   glob.max_indices == reference.GLOBAL_MAX_INDICES_PUBLISHED, 0.0)
        report.add("global_min_indices", reference.GLOBAL_MIN_INDICES_PUBLISHED,
                   glob.min_indices,
                   glob.min_indices == reference.GLOBAL_MIN_INDICES_PUBLISHED, 0.0)
        if glob.max_indices == reference.GLOBAL_MAX_INDICES_RESCANNED:
            print("note: global max locations equal the published ones shifted down by 1000;"
                  " the published locations do not attain the max (see README)")
        if glob.min_indices == reference.GLOBAL_MIN_INDICES_RESCANNED:
            print("note: global min locations equal the published ones shifted down by 1000;"
                  " the published locations do not attain the min (see README)")
    else:
        print(f"extrema at n={m_t.limit}: {len(records)} records"
              f" ({n_max} maxima, {n_min} minima);"
              f" global max {glob.max_value} at {glob.max_indices},"
              f" min {glob.min_value} at {glob.min_indices}")


def _analyze_stats(mu_t, m_t, out_dir, args, report):
    (series, dt) = _timed(lambda: analysis.ratio_series(mu_t, m_t, args.stride))
    storage.write_csv(
        out_dir / "ratios.csv", "n,r1,r2",
        ((int(n), storage.format_float(a), storage.format_float(b))
         for n, a, b in zip(series.indices, series.r1, series.r2)),
    )
    pc = tables.parity_counts(mu_t, mu_t.limit)
    if m_t.limit == reference.STUDY_LIMIT:
        r1_dev = float(series.r1[-1]) - reference.SIX_OVER_PI_SQUARED
        r2_dev = float(series.r2[-1]) - reference.SIX_OVER_PI_SQUARED
        _claim_tol(report, "r1_deviation_at_limit", reference.R1_DEVIATION, r1_dev,
                   reference.R1_TOLERANCE, dt)
        _claim_tol(report, "r2_deviation_at_limit", reference.R2_DEVIATION, r2_dev,
                   reference.R2_TOLERANCE, 0.0)
        _claim_tol(report, "squarefree_density", reference.SIX_OVER_PI_SQUARED,
                   pc.q / pc.n, 1e-4, 0.0)
    else:
        print(f"at n={m_t.limit}: q/n = {pc.q / pc.n!r},"
              f" r1 = {float(series.r1[-1])!r}, r2 = {float(series.r2[-1])!r}")


def _analyze_bounds(mu_t, m_t, out_dir, args, report):
    (rep, dt) = _timed(lambda: analysis.bound_check(m_t, alpha=args.alpha, n_min=args.n_min))
    rows = [
        ("alpha", storage.format_float(rep.alpha)),
        ("k_quantile", storage.format_float(rep.k_quantile)),
        ("n_min", rep.n_range[0]),
        ("n_max", rep.n_range[1]),
        ("exceed_count_quantile", rep.exceed_count_quantile),
        ("exceed_count_quantile_abs", rep.exceed_count_quantile_abs),
        ("exceed_count_chebyshev", rep.exceed_count_chebyshev),
        ("exceed_count_chebyshev_abs", rep.exceed_count_chebyshev_abs),
        ("max_abs_ratio", storage.format_float(rep.max_ratio)),
        ("argmax_abs_ratio", rep.argmax_ratio),
        ("max_signed_ratio", storage.format_float(rep.max_signed_ratio)),
        ("argmax_signed_ratio", rep.argmax_signed_ratio),
        ("half_threshold_count", rep.half_threshold_count),
        ("half_threshold_count_abs", rep.half_threshold_count_abs),
        ("deep_threshold_count", rep.deep_threshold_count),
        ("deep_threshold_count_abs", rep.deep_threshold_count_abs),
    ]
    storage.write_csv(out_dir / "bounds.csv", "key,value", rows)
    if abs(args.alpha - 0.05) < 1e-12:
        _claim_tol(report, "k_quantile_alpha_0.05", 1.95996, rep.k_quantile, 1e-5, dt)
    if m_t.limit == reference.STUDY_LIMIT and args.n_min == 10:
        report.add("half_threshold_signed_violations", 0, rep.half_threshold_count,
                   rep.half_threshold_count == 0, 0.0)
        report.add("max_abs_ratio_below_half", "True", str(rep.max_ratio < 0.5),
                   rep.max_ratio < 0.5, 0.0)
        if rep.max_ratio >= 0.5:
            print(f"note: |M(n)|/sqrt(n) reaches {rep.max_ratio:.4f} at"
                  f" n={rep.argmax_ratio} (small n); the signed ratio stays below 0.5"
                  f" (max {rep.max_signed_ratio:.4f} at n={rep.argmax_signed_ratio})")


def _analyze_psd(mu_t, m_t, out_dir, args, report):
    seq = m_t.values.astype(np.float64)
    (spec, dt) = _timed(lambda: spectral.periodogram_welch(
        seq, segment_length=args.segment_length,
        overlap_fraction=args.overlap, window=args.window))
    storage.write_csv(
        out_dir / "psd.csv", "frequency,power",
        ((storage.format_float(f), storage.format_float(p))
         for f, p in zip(spec.frequencies, spec.power)),
    )
    fit = spectral.fit_loglog_slope(spec, (args.band_lo, args.band_hi))
    mask = ((spec.frequencies >= args.band_lo) & (spec.frequencies <= args.band_hi)
            & (spec.power > 0))
    lf = np.log10(spec.frequencies[mask])
    lp = np.log10(spec.power[mask])
    storage.write_csv(
        out_dir / "psd_fit.csv", "log10f,log10P,fit",
        ((storage.format_float(a), storage.format_float(b),
          storage.format_float(fit.slope * a + fit.intercept))
         for a, b in zip(lf, lp)),
    )
    report.add("psd_slope_negative", "slope < 0", f"slope = {fit.slope:.4f}",
               fit.slope < 0, dt)
    report.add("psd_fit_r2", "r2 > 0.5", f"r2 = {fit.r2:.4f}", fit.r2 > 0.5, 0.0)
    report.add("psd_parseval", "rel err <= 1e-06",
               f"rel err = {spec.parseval_max_rel_error:.3e}",
               spec.parseval_max_rel_error <= 1e-6, 0.0)


def _analyze_emd(mu_t, m_t, out_dir, args, report):
    limit = min(m_t.limit, args.emd_limit)
    cfg = emd.SiftConfig(sd_threshold=args.sd_threshold,
                         max_sifts_per_mode=args.max_sifts,
                         max_modes=args.max_modes, boundary=args.boundary)
    seq = m_t.values[:limit].astype(np.float64)
    (imfs, dt) = _timed(lambda: emd.emd_decompose(seq, cfg))
    for i, mode in enumerate(imfs.modes, start=1):
        storage.write_csv(out_dir / f"mode_{i:02d}.csv", "n,value",
                          ((j + 1, storage.format_float(v)) for j, v in enumerate(mode)))
    storage.write_csv(out_dir / "residual.csv", "n,value",
                      ((j + 1, storage.format_float(v)) for j, v in enumerate(imfs.residual)))
    recon = np.sum(imfs.modes, axis=0) + imfs.residual if imfs.modes else imfs.residual
    err = float(np.max(np.abs(seq - recon)))
    scale = float(np.max(np.abs(seq)))
    manifest = {
        "limit": int(limit),
        "mode_count": len(imfs.modes),
        "sift_counts": list(imfs.sift_counts),
        "defects": list(imfs.defects),
        "mode_energies": imfs.mode_energies(),
        "residual_energy": float(np.sum(imfs.residual * imfs.residual)),
        "reconstruction_max_error": err,
        "config": {
            "sd_threshold": cfg.sd_threshold,
            "max_sifts_per_mode": cfg.max_sifts_per_mode,
            "max_modes": cfg.max_modes,
            "boundary": cfg.boundary,
        },
    }
    (out_dir / "emd_manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="ascii")
    report.add("emd_reconstruction", f"max err <= {1e-6 * scale:.3e}",
               f"max err = {err:.3e}", err <= 1e-6 * scale, dt)
    if limit == reference.EMD_STUDY_LIMIT:
        count = len(imfs.modes)
        report.add("emd_mode_count_window",
                   f"15..23 (reference {reference.EMD_REFERENCE_MODE_COUNT})",
                   count, 15 <= count <= 23, 0.0)
        worst = max(imfs.defects) if imfs.defects else 0
        report.add("emd_mode_property", "every |extrema - crossings| <= 1",
                   f"defects {list(imfs.defects)}", worst <= 1, 0.0)
    else:
        print(f"emd at n={limit}: {len(imfs.modes)} modes, defects {list(imfs.defects)}")


def _analyze_envelope(mu_t, m_t, out_dir, args, report):
    (env, dt) = _timed(lambda: spectral.envelope_series(m_t, args.stride))
    storage.write_csv(
        out_dir / "envelope.csv", "n,abs_m,sqrt_n,running_max",
        ((int(n), storage.format_float(a), storage.format_float(s), storage.format_float(r))
         for n, a, s, r in zip(env.indices, env.abs_m, env.sqrt_n, env.running_max)),
    )
    below = bool(np.all(env.abs_m < env.sqrt_n))
    report.add("sampled_abs_m_below_sqrt_n", "True", str(below), below, dt)


_ANALYZE_DISPATCH = {
    "zeros": (_analyze_zeros, True, True),
    "extrema": (_analyze_extrema, False, True),
    "stats": (_analyze_stats, True, True),
    "bounds": (_analyze_bounds, False, True),
    "psd": (_analyze_psd, False, True),
    "emd": (_analyze_emd, False, True),
    "envelope": (_analyze_envelope, False, True),
}


def cmd_analyze(args) -> int:
    fn, need_mu, need_m = _ANALYZE_DISPATCH[args.kind]
    table_dir = _table_dir(args)
    mu_t, m_t = _load_tables(table_dir, need_mu, need_m)
    out_dir = Path(args.out) if args.out is not None else table_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    report = ReproductionReport()
    fn(mu_t, m_t, out_dir, args, report)
    report.write_csv(out_dir / f"report_{args.kind}.csv")
    report.print_summary()
    return 0 if report.all_match else 1


def cmd_bench(args) -> int:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    sizes = [int(s) for s in args.sizes.split(",")]
    known = {"sieve", "incremental", "direct"}
    unknown = set(algos) - known
    if unknown:
        raise CliError(f"unknown algorithm(s): {sorted(unknown)}", 2)
    if not sizes:
        raise CliError("no sizes given", 2)

    def one(algo: str, n: int) -> int:
        if algo == "sieve":
            t = tables.mobius_sieve(n)
            return int(np.sum(t.values, dtype=np.int64))
        if algo == "incremental":
            return tables.MertensAccumulator.start().advance_to(n).value
        return tables.mertens_direct(n)

    print(f"{'algo':<12} {'n':>10} {'median_s':>10}  result")
    for algo in algos:
        for n in sizes:
            if algo in ("incremental", "direct") and n > tables.DEFAULT_DIRECT_CAP:
                print(f"{algo:<12} {n:>10} {'skipped':>10}  exceeds quadratic cap"
                      f" {tables.DEFAULT_DIRECT_CAP}")
                continue
            times = []
            result = None
            for _ in range(3):
                t0 = time.perf_counter()
                result = one(algo, n)
                times.append(time.perf_counter() - t0)
            print(f"{algo:<12} {n:>10} {median(times):>10.4f}  M({n}) = {result}")
    return 0


def cmd_export(args) -> int:
    table_dir = _table_dir(args)
    mu_t, m_t = _load_tables(table_dir, True, True)
    out_dir = Path(args.out) if args.out is not None else table_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.format == "csv":
        storage.export_table_csv(out_dir / "mu.csv", mu_t.values)
        storage.export_table_csv(out_dir / "mertens.csv", m_t.values)
        print(f"wrote {out_dir / 'mu.csv'} and {out_dir / 'mertens.csv'}")
    else:
        storage.write_table(out_dir / storage.MOBIUS_FILENAME, mu_t.values,
                            storage.KIND_MOBIUS)
        storage.write_table(out_dir / storage.MERTENS_FILENAME, m_t.values,
                            storage.KIND_MERTENS)
        print(f"wrote validated tables to {out_dir}")
    return 0


def _parse_config_file(path: Path) -> dict:
    if not path.exists():
        raise CliError(f"config file not found: {path}", 2)
    out = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected `key = value`, got {raw!r}", 2)
        key, value = (part.strip() for part in line.split("=", 1))
        dest = _CONFIG_KEY_MAP.get(key, key.replace("-", "_").replace(".", "_"))
        for cast in (int, float):
            try:
                out[dest] = cast(value)
                break
            except ValueError:
                continue
        else:
            out[dest] = value
    return out


def _extract_config(argv: list[str]) -> tuple[dict, list[str]]:
    argv = list(argv)
    if "--config" not in argv:
        return {}, argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise CliError("--config needs a file path", 2)
    path = Path(argv[i + 1])
    del argv[i : i + 2]
    return _parse_config_file(path), argv


def build_parser(config: dict | None = None) -> argparse.ArgumentParser:
    """Build the CLI parser; `config` entries become overridable defaults.

    Config values are installed with set_defaults on every subparser, so an
    explicit command-line flag always wins over the file. Required arguments
    (--n, --out, --sizes, --format) cannot come from a config file.
    """
    parser = argparse.ArgumentParser(
        prog="mertens",
        description="Moebius/Mertens tables, cross-checked oracles, and sequence analysis. "
                    "Any subcommand accepts --config FILE with `key = value` lines; "
                    "explicit flags win. Exit codes: 0 ok, 1 claim mismatch, 2 usage, 3 I/O.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    made = []

    def add_parser(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        made.append(p)
        return p

    p = add_parser("compute", help="build and persist tables")
    p.add_argument("--n", type=int, required=True, help="table limit N")
    p.add_argument("--algo", choices=["sieve", "incremental", "direct"], default="sieve")
    p.add_argument("--out", required=True, help="output directory for the .mtab files")
    p.add_argument("--checkpoint", default=None,
                   help="checkpoint file for the incremental algorithm (resumes if present)")
    p.add_argument("--checkpoint-every", type=int, default=tables.DEFAULT_CHECKPOINT_EVERY)
    p.add_argument("--allow-large", action="store_true",
                   help="lift the quadratic-algorithm cap")

    p = add_parser("verify", help="run all identity cross-checks against the sieve")
    p.add_argument("--redheffer-max", type=int, default=60)
    p.add_argument("--farey-max", type=int, default=300)
    p.add_argument("--hyperbolic-max", type=int, default=2000)
    p.add_argument("--direct-max", type=int, default=5000)
    p.add_argument("--tables", default=None,
                   help="verify against persisted tables instead of a fresh sieve")

    p = add_parser("analyze", help="run one analysis and emit CSV products")
    p.add_argument("kind", choices=sorted(_ANALYZE_DISPATCH))
    p.add_argument("--tables", default=None,
                   help=f"table directory (default: ${ENV_TABLES})")
    p.add_argument("--out", default=None, help="output directory (default: table dir)")
    p.add_argument("--stride", type=int, default=1000)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--n-min", type=int, default=10)
    p.add_argument("--segment-length", type=int, default=spectral.DEFAULT_SEGMENT_LENGTH)
    p.add_argument("--overlap", type=float, default=spectral.DEFAULT_OVERLAP)
    p.add_argument("--window", default=spectral.DEFAULT_WINDOW)
    p.add_argument("--band-lo", type=float, default=spectral.DEFAULT_BAND[0])
    p.add_argument("--band-hi", type=float, default=spectral.DEFAULT_BAND[1])
    p.add_argument("--sd-threshold", type=float, default=0.2)
    p.add_argument("--max-sifts", type=int, default=64)
    p.add_argument("--max-modes", type=int, default=32)
    p.add_argument("--boundary", type=int, default=2)
    p.add_argument("--emd-limit", type=int, default=reference.EMD_STUDY_LIMIT)

    p = add_parser("bench", help="median-of-3 timings per algorithm and size")
    p.add_argument("--algos", default="sieve,incremental,direct")
    p.add_argument("--sizes", required=True, help="comma-separated n values")

    p = add_parser("export", help="re-emit persisted tables as CSV or binary")
    p.add_argument("--tables", default=None)
    p.add_argument("--format", choices=["csv", "binary"], required=True)
    p.add_argument("--out", default=None)

    if config:
        parser.set_defaults(**config)
        for sp in made:
            sp.set_defaults(**config)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config, argv = _extract_config(argv)
        parser = build_parser(config)
        args = parser.parse_args(argv)
        if args.command == "compute":
            cfg = RunConfig(
                limit=args.n,
                algorithm=args.algo,
                out_dir=Path(args.out),
                checkpoint_path=Path(args.checkpoint) if args.checkpoint else None,
                checkpoint_every=args.checkpoint_every,
                allow_large=args.allow_large,
            )
            if cfg.limit < 1:
                raise CliError(f"--n must be positive, got {cfg.limit}", 2)
            return cmd_compute(cfg)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "bench":
            return cmd_bench(args)
        if args.command == "export":
            return cmd_export(args)
        raise CliError(f"unknown command {args.command!r}", 2)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NumericalError as exc:
        print(f"numerical integrity failure: {exc}", file=sys.stderr)
        return 1
    except IntegrityError as exc:
        print(f"file integrity failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
