//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured values. Run with `cargo test -p cube-obstruct-cli --test
//! acceptance -- --nocapture` to see the lines.

use std::process::Command;
use std::time::{Duration, Instant};

use cube_obstruct::curve_en::{build_curve, CurveEn};
use cube_obstruct::curve_fp::TraceConfig;
use cube_obstruct::lseries::{functional_equation_residual, l1_approx};
use cube_obstruct::obstruction::{
    check_prime_in_s, check_theorem_aux, check_theorem_main, enumerate_s, revalidate,
    CertifyOptions, HypothesisStatus, Mode, SigmaSpec,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cube-obstruct"))
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
    )
}

fn timed(args: &[&str]) -> (i32, String, Duration) {
    let start = Instant::now();
    let (code, stdout) = run(args);
    (code, stdout, start.elapsed())
}

#[test]
fn criterion_01_worked_example_counts() {
    let (code, out, dt) = timed(&["ap", "3", "7"]);
    assert_eq!(code, 0);
    assert!(out.contains("#E(F_p) = 3"), "{out}");
    assert!(out.contains("a_p = 5"), "{out}");
    assert!(dt < Duration::from_secs(1), "ap 3 7 took {dt:?}");
    let (code, out, dt2) = timed(&["ap", "3", "29"]);
    assert_eq!(code, 0);
    assert!(out.contains("#E(F_p) = 30"), "{out}");
    assert!(out.contains("a_p = 0"), "{out}");
    assert!(dt2 < Duration::from_secs(1), "ap 3 29 took {dt2:?}");
    println!("[acceptance] criterion 1: PASS (ap 3 7 -> #=3, a=5 in {dt:?}; ap 3 29 -> #=30, a=0 in {dt2:?})");
}

#[test]
fn criterion_02_certify_worked_example() {
    let (code, out, dt) = timed(&[
        "certify",
        "3",
        "7",
        "--q",
        "29",
        "--mode",
        "relaxed",
        "--sha-order",
        "1",
    ]);
    assert_eq!(code, 0, "relaxed mode must conclude:\n{out}");
    assert!(
        out.contains("ell_not_dividing_6pn: pass (29 ∤ 126)"),
        "{out}"
    );
    assert!(out.contains("no_p_torsion: pass (#=30, 7 ∤ 30)"), "{out}");
    assert!(out.contains("conclusion: 3 cannot be represented"), "{out}");
    assert!(dt < Duration::from_secs(1), "relaxed certify took {dt:?}");

    let (code, out, dt2) = timed(&[
        "certify",
        "3",
        "7",
        "--q",
        "29",
        "--mode",
        "strict",
        "--sha-order",
        "1",
    ]);
    assert_eq!(code, 1, "strict mode must fail the p > 7 gate:\n{out}");
    assert!(out.contains("p_exceeds_7: fail"), "{out}");
    assert!(out.contains("conclusion: (none"), "{out}");
    // exactly the gate fails
    let failing = out.lines().filter(|l| l.contains(": fail")).count();
    assert_eq!(failing, 1, "{out}");
    assert!(dt2 < Duration::from_secs(1), "strict certify took {dt2:?}");
    println!("[acceptance] criterion 2: PASS (relaxed concludes in {dt:?}; strict fails only p > 7 in {dt2:?})");
}

#[test]
fn criterion_03_seven_is_in_s() {
    let report = check_prime_in_s(3, 7, 1).unwrap();
    assert!(report.in_s);
    assert!(report.good_reduction && report.ordinary && report.condition_b && report.condition_c);
    println!("[acceptance] criterion 3: PASS (check_prime_in_S(3, 7, 1) -> in_S = true)");
}

#[test]
fn criterion_04_density_of_s() {
    let start = Instant::now();
    let (code, out) = run(&["density", "3", "--max", "100000", "--sha-order", "1"]);
    let dt = start.elapsed();
    assert_eq!(code, 0);
    assert!(dt < Duration::from_secs(60), "density took {dt:?}");
    // independent recomputation through the library
    let (_, stats) = enumerate_s(3, 100_000, 1, 4).unwrap();
    assert!(
        (stats.density_vs_primes - 0.5).abs() <= 0.02,
        "|S|/pi = {}",
        stats.density_vs_primes
    );
    assert!(
        stats.density_vs_ordinary >= 0.99 && stats.density_vs_ordinary <= 1.0,
        "|S|/ordinary = {}",
        stats.density_vs_ordinary
    );
    let ratio_line = format!("|S|/pi(X) = {:.4}", stats.density_vs_primes);
    assert!(
        out.contains(&ratio_line),
        "CLI and library disagree:\n{out}"
    );
    println!(
        "[acceptance] criterion 4: PASS (|S|/pi = {:.4}, |S|/ordinary = {:.4}, {dt:?})",
        stats.density_vs_primes, stats.density_vs_ordinary
    );
}

#[test]
fn criterion_05_witness_reproduction() {
    let (code, out, dt) = timed(&["search", "6", "--height", "21"]);
    assert_eq!(code, 0);
    assert_eq!(out, "(17/21, 37/21)\n");
    let (code, out, dt2) = timed(&["search", "3", "--height", "1000"]);
    assert_eq!(code, 0);
    assert_eq!(out, "none\n");
    assert!(
        dt + dt2 < Duration::from_secs(30),
        "searches took {dt:?} + {dt2:?}"
    );
    println!(
        "[acceptance] criterion 5: PASS (search 6 -> (17/21, 37/21); search 3 -> none; {:?})",
        dt + dt2
    );
}

#[test]
fn criterion_06_oracle_equivalence() {
    let start = Instant::now();
    let cfg = TraceConfig::default();
    let mut mismatches = 0u32;
    let mut checked = 0u32;
    for n in [3u64, 5, 6, 7, 12] {
        let curve = CurveEn::new(n).unwrap();
        for p in cube_obstruct::arithmetic::primes_up_to(3000) {
            if p < 5 || curve.bad_primes().contains(&p) {
                continue;
            }
            let fast = curve.reduce_mod_p(p).unwrap().trace_of_frobenius(&cfg);
            let naive = curve.reduce_mod_p(p).unwrap().count_points_naive();
            if fast != p as i64 + 1 - naive as i64 {
                mismatches += 1;
            }
            checked += 1;
        }
    }
    let dt = start.elapsed();
    assert_eq!(mismatches, 0);
    assert!(checked >= 2000, "only {checked} pairs checked");
    assert!(dt < Duration::from_secs(60), "oracle sweep took {dt:?}");
    println!("[acceptance] criterion 6: PASS ({checked} trace/count pairs, 0 mismatches, {dt:?})");
}

#[test]
fn criterion_07_supersingular_property() {
    let cfg = TraceConfig::default();
    let mut checked = 0u32;
    for n in [3u64, 5, 6, 7, 12] {
        let curve = CurveEn::new(n).unwrap();
        for p in cube_obstruct::arithmetic::primes_up_to(3000) {
            if p < 5 || p % 3 != 2 || curve.bad_primes().contains(&p) {
                continue;
            }
            assert_eq!(curve.reduce_mod_p(p).unwrap().trace_of_frobenius(&cfg), 0);
            assert_eq!(curve.reduce_mod_p(p).unwrap().count_points_naive(), p + 1);
            checked += 1;
        }
    }
    println!("[acceptance] criterion 7: PASS ({checked} supersingular primes, a_p = 0 both ways)");
}

#[test]
fn criterion_08_conductor_and_l_values() {
    let e3 = CurveEn::new(3).unwrap();
    assert_eq!(e3.conductor().unwrap(), 243);
    let good = functional_equation_residual(&e3, 243, 1e-8).unwrap();
    let bad = functional_equation_residual(&e3, 242, 1e-8).unwrap();
    assert!(good < 1e-6, "residual at 243: {good:.3e}");
    assert!(bad >= 1e-3, "residual at 242: {bad:.3e}");
    let r3 = l1_approx(&e3, 1e-4).unwrap();
    assert_eq!(r3.root_number, 1);
    assert!(r3.value > 10.0 * r3.error_bound);
    let e6 = CurveEn::new(6).unwrap();
    let r6 = l1_approx(&e6, 1e-4).unwrap();
    assert_eq!(r6.root_number, -1);
    assert!(r6.value.abs() < r6.error_bound);
    println!(
        "[acceptance] criterion 8: PASS (N = 243; residuals {good:.2e} / {bad:.2e}; \
         L(E3,1) = {:.4} w = +1; |L(E6,1)| = {:.2e} w = -1)",
        r3.value,
        r6.value.abs()
    );
}

#[test]
fn criterion_09_torsion_certificates() {
    let mut certified = 0u32;
    for n in 3u64..=50 {
        if !cube_obstruct::arithmetic::is_cube_free(n) {
            continue;
        }
        let curve = build_curve(n).unwrap();
        let cert = curve.torsion_trivial_certificate(100).unwrap();
        assert!(cert.revalidate(), "torsion certificate for n = {n}");
        certified += 1;
    }
    for bad in [1u64, 2, 8, 24] {
        assert!(build_curve(bad).is_err(), "n = {bad} must be rejected");
    }
    println!(
        "[acceptance] criterion 9: PASS ({certified} torsion certificates; 1, 2, 8, 24 rejected)"
    );
}

#[test]
fn criterion_10_certificate_integrity() {
    let relaxed = CertifyOptions {
        mode: Mode::Relaxed,
        sha_order: Some(1),
        ..Default::default()
    };
    let strict = CertifyOptions {
        mode: Mode::Strict,
        sha_order: Some(1),
        ..Default::default()
    };
    let no_sha = CertifyOptions {
        mode: Mode::Relaxed,
        sha_order: None,
        ..Default::default()
    };
    let certs = vec![
        check_theorem_aux(3, 7, SigmaSpec::CyclotomicQ(29), &relaxed).unwrap(),
        check_theorem_aux(3, 7, SigmaSpec::CyclotomicQ(29), &strict).unwrap(),
        check_theorem_aux(3, 13, SigmaSpec::CyclotomicQ(53), &strict).unwrap(),
        check_theorem_aux(3, 13, SigmaSpec::Direct(vec![53]), &strict).unwrap(),
        check_theorem_aux(3, 7, SigmaSpec::CyclotomicQ(29), &no_sha).unwrap(),
        check_theorem_main(3, 7, &strict).unwrap(),
        check_theorem_main(6, 7, &relaxed).unwrap(),
        check_theorem_main(5, 7, &strict).unwrap(),
    ];
    for cert in &certs {
        assert!(revalidate(cert).unwrap(), "revalidation failed: {cert:?}");
        // conclusions only on all-pass certificates
        if cert
            .hypotheses
            .iter()
            .any(|h| h.status != HypothesisStatus::Pass)
        {
            assert!(cert.conclusion.is_none(), "{cert:?}");
        } else {
            assert!(cert.conclusion.is_some(), "{cert:?}");
        }
    }

    // byte-identical serialization round trip through the CLI
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let args = [
        "certify",
        "3",
        "13",
        "--q",
        "53",
        "--mode",
        "strict",
        "--sha-order",
        "1",
        "--json",
        "--out",
    ];
    let out1 = bin().args(args).arg(&path).output().unwrap();
    let file1 = std::fs::read_to_string(&path).unwrap();
    let out2 = bin().args(args).arg(&path).output().unwrap();
    let file2 = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        out1.stdout, out2.stdout,
        "identical invocations must emit identical bytes"
    );
    assert_eq!(file1, file2);
    assert_eq!(String::from_utf8(out1.stdout).unwrap(), file1);
    let parsed: cube_obstruct_cli::doc::CertificateDoc = serde_json::from_str(&file1).unwrap();
    assert_eq!(
        parsed.to_canonical_json(),
        file1,
        "round trip must be byte-identical"
    );
    assert_eq!(parsed.schema_version, 1);
    assert_eq!(parsed.theorem, "aux");
    assert!(parsed.conclusion.is_some());
    println!("[acceptance] criterion 10: PASS ({} certificates revalidated; JSON round trip byte-identical)", certs.len());
}
