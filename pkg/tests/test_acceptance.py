"""Acceptance gate: one printed PASS/FAIL line per criterion.

Run with `pytest tests/test_acceptance.py -s` to see every line (without -s,
pytest shows the lines of failing criteria only). Each criterion asserts the
full published claim; where a computed result contradicts a published value,
the assertion is allowed to fail and the printed line carries the measured
truth. The known discrepancies are documented in the README.
"""

import time

import numpy as np
import pytest

from mertens import (
    bound_check,
    count_mobius_zeros,
    emd_decompose,
    find_zeros,
    fit_loglog_slope,
    global_extrema,
    mertens_direct,
    mertens_farey,
    mertens_hyperbolic,
    mertens_redheffer,
    mobius_recursive,
    parity_counts,
    periodogram_welch,
    ratio_series,
    segment_extrema,
    storage,
)
from mertens import cli, reference
from mertens.tables import mobius_sieve


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"CRITERION {num}: {'PASS' if ok else 'FAIL'} - {detail}")


def test_criterion_1_table_regression_and_runtime(study_tables):
    mu_t, m_t, build_seconds = study_tables
    mismatches = [(n, m_t.value(n), want)
                  for n, want in sorted(reference.MERTENS_SPOT_VALUES.items())
                  if m_t.value(n) != want]
    ok = not mismatches and build_seconds < 60.0
    _report(1, ok, f"{len(reference.MERTENS_SPOT_VALUES)} reference values, "
                   f"{len(mismatches)} mismatches; build {build_seconds:.1f}s (limit 60s)")
    assert not mismatches, mismatches[:5]
    assert build_seconds < 60.0


def test_criterion_2_zero_counts(study_tables):
    mu_t, m_t, _ = study_tables
    m_zeros = len(find_zeros(m_t).indices)
    mu_zeros = count_mobius_zeros(mu_t)
    ok = (m_zeros == reference.MERTENS_ZERO_COUNT
          and mu_zeros == reference.MOBIUS_ZERO_COUNT)
    _report(2, ok, f"M zeros {m_zeros} (want {reference.MERTENS_ZERO_COUNT}), "
                   f"mu zeros {mu_zeros} (want {reference.MOBIUS_ZERO_COUNT})")
    assert m_zeros == reference.MERTENS_ZERO_COUNT
    assert mu_zeros == reference.MOBIUS_ZERO_COUNT


def test_criterion_3_extrema(study_tables):
    _, m_t, _ = study_tables
    records = segment_extrema(m_t, find_zeros(m_t))
    n_max = sum(1 for r in records if r.kind == "maximum")
    n_min = len(records) - n_max
    glob = global_extrema(m_t)
    counts_ok = (len(records), n_max, n_min) == (
        reference.SEGMENT_EXTREMA_TOTAL,
        reference.SEGMENT_MAXIMA_COUNT,
        reference.SEGMENT_MINIMA_COUNT,
    )
    values_ok = (glob.max_value == reference.GLOBAL_MAX_VALUE
                 and glob.min_value == reference.GLOBAL_MIN_VALUE)
    indices_ok = (glob.max_indices == reference.GLOBAL_MAX_INDICES_PUBLISHED
                  and glob.min_indices == reference.GLOBAL_MIN_INDICES_PUBLISHED)
    offset_note = ""
    if (not indices_ok
            and glob.max_indices == reference.GLOBAL_MAX_INDICES_RESCANNED
            and glob.min_indices == reference.GLOBAL_MIN_INDICES_RESCANNED):
        offset_note = (" [computed locations equal the published ones minus exactly 1000;"
                       " independent factorization confirms the computed ones]")
    ok = counts_ok and values_ok and indices_ok
    _report(3, ok,
            f"counts {len(records)}/{n_max}/{n_min} "
            f"(want {reference.SEGMENT_EXTREMA_TOTAL}/{reference.SEGMENT_MAXIMA_COUNT}/"
            f"{reference.SEGMENT_MINIMA_COUNT}), "
            f"max {glob.max_value} at {glob.max_indices}, "
            f"min {glob.min_value} at {glob.min_indices}{offset_note}")
    assert counts_ok
    assert values_ok
    assert glob.max_indices == reference.GLOBAL_MAX_INDICES_PUBLISHED, (
        "published maximum locations are not where the maximum occurs; "
        f"computed {glob.max_indices}")
    assert glob.min_indices == reference.GLOBAL_MIN_INDICES_PUBLISHED, (
        "published minimum locations are not where the minimum occurs; "
        f"computed {glob.min_indices}")


def test_criterion_4_ratio_endpoints(study_tables):
    mu_t, m_t, _ = study_tables
    series = ratio_series(mu_t, m_t, stride=1000)
    r1_dev = float(series.r1[-1]) - reference.SIX_OVER_PI_SQUARED
    r2_dev = float(series.r2[-1]) - reference.SIX_OVER_PI_SQUARED
    r1_ok = abs(r1_dev - reference.R1_DEVIATION) <= reference.R1_TOLERANCE
    r2_ok = abs(r2_dev - reference.R2_DEVIATION) <= reference.R2_TOLERANCE
    ok = r1_ok and r2_ok
    _report(4, ok,
            f"r1 dev {r1_dev:.6e} (want {reference.R1_DEVIATION:.4e} "
            f"+/- {reference.R1_TOLERANCE:.0e}), r2 dev {r2_dev:.6e} "
            f"(want {reference.R2_DEVIATION:.4e} +/- {reference.R2_TOLERANCE:.0e})")
    assert r1_ok
    assert r2_ok


def test_criterion_5_oracle_equivalence(study_tables):
    mu_t, m_t, _ = study_tables
    t0 = time.perf_counter()
    failures = []

    mu_vals = mu_t.values
    rec = np.zeros(5000, dtype=np.int8)
    rec[0] = 1
    for k in range(2, 5001):
        rec[k - 1] = mobius_recursive(k, rec[: k - 1], strategy="scan")
    if not np.array_equal(rec, mu_vals[:5000]):
        bad = int(np.nonzero(rec != mu_vals[:5000])[0][0]) + 1
        failures.append(f"recursion differs from sieve first at n={bad}")
    if not np.array_equal(np.cumsum(rec, dtype=np.int64), m_t.values[:5000]):
        failures.append("recursion prefix sums differ from sieve")
    for n in (1, 100, 777, 5000):
        if mertens_direct(n) != m_t.value(n):
            failures.append(f"mertens_direct({n}) != sieve")

    for n in range(1, 61):
        if mertens_redheffer(n) != m_t.value(n):
            failures.append(f"redheffer differs at n={n}")
            break
    for n in range(1, 301):
        if mertens_farey(n) != m_t.value(n):
            failures.append(f"farey differs at n={n}")
            break
    for n in range(1, 2001):
        if mertens_hyperbolic(n) != m_t.value(n):
            failures.append(f"hyperbolic differs at n={n}")
            break
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 300.0
    _report(5, ok, f"direct<=5000, redheffer<=60, farey<=300, hyperbolic<=2000: "
                   f"{'all equal' if not failures else '; '.join(failures)}; "
                   f"{elapsed:.1f}s (limit 300s)")
    assert not failures, failures
    assert elapsed < 300.0


def test_criterion_6_bound_scan(study_tables):
    _, m_t, _ = study_tables
    rep = bound_check(m_t, alpha=0.05, n_min=10)
    below_half = rep.max_ratio < 0.5
    no_violations = rep.half_threshold_count_abs == 0
    ok = below_half and no_violations
    _report(6, ok,
            f"max |M(n)|/sqrt(n) = {rep.max_ratio:.4f} at n={rep.argmax_ratio} "
            f"(claim < 0.5); |M| violations of 0.5*sqrt(n): "
            f"{rep.half_threshold_count_abs} (claim 0), signed violations: "
            f"{rep.half_threshold_count}; informational 0.1333*sqrt(n) exceedances "
            f"for n >= 1664: {rep.deep_threshold_count_abs} two-sided, "
            f"{rep.deep_threshold_count} one-sided")
    assert below_half, (
        f"|M(n)|/sqrt(n) reaches {rep.max_ratio:.4f} at n={rep.argmax_ratio}; "
        "the published bound holds only for the signed ratio M(n)/sqrt(n) "
        f"(signed max {rep.max_signed_ratio:.4f} at n={rep.argmax_signed_ratio})")
    assert no_violations, (
        f"{rep.half_threshold_count_abs} integers in [10, {m_t.limit}] violate "
        "|M(n)| < 0.5*sqrt(n); all lie at n <= 200")


def test_criterion_7_psd_properties(study_tables):
    _, m_t, _ = study_tables
    spec = periodogram_welch(m_t.values.astype(np.float64))
    fit = fit_loglog_slope(spec, (1e-5, 1e-1))
    slope_ok = fit.slope < 0
    r2_ok = fit.r2 > 0.5
    parseval_ok = spec.parseval_max_rel_error <= 1e-6
    ok = slope_ok and r2_ok and parseval_ok
    _report(7, ok,
            f"slope {fit.slope:.3f} (want < 0), r2 {fit.r2:.3f} (want > 0.5), "
            f"parseval rel err {spec.parseval_max_rel_error:.2e} (want <= 1e-06), "
            f"{spec.segment_count} segments")
    assert slope_ok
    assert r2_ok
    assert parseval_ok


def test_criterion_8_emd_properties(study_tables):
    _, m_t, _ = study_tables
    seq = m_t.values[: reference.EMD_STUDY_LIMIT].astype(np.float64)
    t0 = time.perf_counter()
    result = emd_decompose(seq)
    elapsed = time.perf_counter() - t0
    recon = np.sum(result.modes, axis=0) + result.residual
    err = float(np.max(np.abs(recon - seq)))
    tol = 1e-6 * float(np.max(np.abs(seq)))
    recon_ok = err <= tol
    count = len(result.modes)
    count_ok = 15 <= count <= 23
    worst = max(result.defects) if result.defects else 0
    prop_ok = worst <= 1
    time_ok = elapsed < 600.0
    ok = recon_ok and count_ok and prop_ok and time_ok
    _report(8, ok,
            f"{count} modes (want 15..23, reference "
            f"{reference.EMD_REFERENCE_MODE_COUNT}), reconstruction err {err:.2e} "
            f"(tol {tol:.2e}), extrema/crossing defects {list(result.defects)} "
            f"(want all <= 1), {elapsed:.0f}s (limit 600s)")
    assert recon_ok
    assert count_ok
    assert time_ok
    assert prop_ok, (
        f"low-order modes keep riding waves: defects {list(result.defects)}; "
        "no sift budget or stop rule tested eliminates them on this input "
        "(see README on mode-mixing)")


def test_criterion_9_determinism_and_persistence(tmp_path):
    notes = []

    staged = tmp_path / "staged"
    ck = tmp_path / "run.mckp"
    assert cli.main(["compute", "--n", "3000", "--algo", "incremental",
                     "--out", str(staged), "--checkpoint", str(ck),
                     "--checkpoint-every", "1000"]) == 0
    assert cli.main(["compute", "--n", "6000", "--algo", "incremental",
                     "--out", str(staged), "--checkpoint", str(ck),
                     "--checkpoint-every", "1000"]) == 0
    direct = tmp_path / "direct"
    assert cli.main(["compute", "--n", "6000", "--algo", "incremental",
                     "--out", str(direct)]) == 0
    resume_ok = all(
        (staged / name).read_bytes() == (direct / name).read_bytes()
        for name in (storage.MOBIUS_FILENAME, storage.MERTENS_FILENAME))
    notes.append(f"checkpoint-resumed compute byte-identical: {resume_ok}")

    mu_t = mobius_sieve(6000)
    rt_path = tmp_path / "rt.mtab"
    storage.write_table(rt_path, mu_t.values, storage.KIND_MOBIUS)
    _, back = storage.read_table(rt_path, expected_kind=storage.KIND_MOBIUS)
    roundtrip_ok = np.array_equal(back, mu_t.values)
    notes.append(f"table round-trip exact: {roundtrip_ok}")

    products = ("zeros.csv", "ratios.csv", "bounds.csv", "envelope.csv")
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        for kind in ("zeros", "stats", "bounds", "envelope"):
            assert cli.main(["analyze", kind, "--tables", str(staged),
                             "--out", str(out)]) == 0
        outs.append(out)
    analyze_ok = all((outs[0] / p).read_bytes() == (outs[1] / p).read_bytes()
                     for p in products)
    notes.append(f"repeated analyze byte-identical: {analyze_ok}")

    ok = resume_ok and roundtrip_ok and analyze_ok
    _report(9, ok, "; ".join(notes))
    assert resume_ok
    assert roundtrip_ok
    assert analyze_ok
