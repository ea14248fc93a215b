//! The theorem engines: the admissible prime set S with density statistics,
//! and obstruction certificates for explicit cyclic extensions.

use crate::arithmetic::{is_prime, primes_up_to};
use crate::curve_en::{rational_point_search, CurveEn};
use crate::curve_fp::TraceConfig;
use crate::error::{Error, Result};
use crate::lseries::rational_cube_sum_verdict;

/// Per-prime record of the three admissibility conditions: (a) good ordinary
/// reduction, (b) trivial p-part of the supplied Sha order, (c) p not
/// dividing the reduced group order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub n: u64,
    pub p: u64,
    pub good_reduction: bool,
    pub ordinary: bool,
    pub trace: Option<i64>,
    pub order_mod_p: Option<u64>,
    pub condition_c: bool,
    pub sha_order_input: u64,
    pub condition_b: bool,
    pub in_s: bool,
}

/// Evaluate the admissibility conditions at one prime p >= 5.
///
/// A prime dividing 6n is reported (good_reduction = false, in_s = false)
/// rather than rejected, so that scans are a pure filter; violated
/// preconditions (composite p, p < 5, sha < 1, bad n) are errors.
pub fn check_prime_in_s(n: u64, p: u64, sha_order: u64) -> Result<AdmissibilityReport> {
    let curve = CurveEn::new(n)?;
    check_prime_in_s_with(&curve, p, sha_order, &TraceConfig::default())
}

pub fn check_prime_in_s_with(
    curve: &CurveEn,
    p: u64,
    sha_order: u64,
    cfg: &TraceConfig,
) -> Result<AdmissibilityReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Err(Error::PrimeTooSmall(p, 5));
    }
    if sha_order < 1 {
        return Err(Error::Internal("sha order input must be >= 1".into()));
    }
    let n = curve.n();
    let condition_b = sha_order % p != 0;
    if curve.bad_primes().contains(&p) {
        return Ok(AdmissibilityReport {
            n,
            p,
            good_reduction: false,
            ordinary: false,
            trace: None,
            order_mod_p: None,
            condition_c: false,
            sha_order_input: sha_order,
            condition_b,
            in_s: false,
        });
    }
    let reduction = curve.reduce_mod_p(p)?;
    let trace = reduction.trace_of_frobenius(cfg);
    good_prime_report(n, p, sha_order, trace)
}

fn good_prime_report(n: u64, p: u64, sha_order: u64, trace: i64) -> Result<AdmissibilityReport> {
    let order = (p as i64 + 1 - trace) as u64;
    // ordinary means a_p != 0 (mod p); by Hasse that is just a_p != 0 here
    let ordinary = trace.rem_euclid(p as i64) != 0;
    // for j = 0, ordinary is classically equivalent to p = 1 (mod 3); treat a
    // mismatch as a bug in the trace path, not as data
    if ordinary != (p % 3 == 1) {
        return Err(Error::Internal(format!(
            "ordinarity cross-check failed at p = {p}: a_p = {trace}"
        )));
    }
    let condition_b = sha_order % p != 0;
    let condition_c = order % p != 0;
    Ok(AdmissibilityReport {
        n,
        p,
        good_reduction: true,
        ordinary,
        trace: Some(trace),
        order_mod_p: Some(order),
        condition_c,
        sha_order_input: sha_order,
        condition_b,
        in_s: ordinary && condition_b && condition_c,
    })
}

/// Build a report from an externally supplied trace (an a_p cache row). The
/// trace is validated against the Hasse bound and the ordinarity congruence.
pub fn report_from_trace(
    curve: &CurveEn,
    p: u64,
    sha_order: u64,
    trace: i64,
) -> Result<AdmissibilityReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Err(Error::PrimeTooSmall(p, 5));
    }
    if curve.bad_primes().contains(&p) {
        return Err(Error::BadReductionPrime {
            p,
            six_n: 6 * curve.n(),
        });
    }
    if (trace as i128) * (trace as i128) > 4 * p as i128 {
        return Err(Error::Internal(format!(
            "Hasse bound violated: a_{p} = {trace}"
        )));
    }
    good_prime_report(curve.n(), p, sha_order, trace)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityStats {
    pub n: u64,
    pub limit: u64,
    pub sha_order: u64,
    /// pi(limit), from the sieve.
    pub primes_total: u64,
    pub ordinary_count: u64,
    pub s_count: u64,
    pub density_vs_primes: f64,
    pub density_vs_ordinary: f64,
}

/// Reports for every prime 5 <= p <= limit, ascending, plus density
/// statistics. `jobs` > 1 shards the primes across threads; results are
/// merged by prime, so the output is identical for any job count.
pub fn scan_reports(
    curve: &CurveEn,
    limit: u64,
    sha_order: u64,
    cfg: &TraceConfig,
    jobs: usize,
) -> Result<(Vec<AdmissibilityReport>, DensityStats)> {
    if limit < 5 {
        return Err(Error::Internal("scan limit must be >= 5".into()));
    }
    let primes: Vec<u64> = primes_up_to(limit).collect();
    let primes_total = primes.len() as u64;
    let candidates: Vec<u64> = primes.into_iter().filter(|&p| p >= 5).collect();
    let reports: Vec<AdmissibilityReport> = if jobs <= 1 || candidates.len() < 64 {
        candidates
            .iter()
            .map(|&p| check_prime_in_s_with(curve, p, sha_order, cfg))
            .collect::<Result<_>>()?
    } else {
        let jobs = jobs.min(candidates.len());
        let chunk = candidates.len().div_ceil(jobs);
        let results: Vec<Result<Vec<AdmissibilityReport>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = candidates
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        part.iter()
                            .map(|&p| check_prime_in_s_with(curve, p, sha_order, cfg))
                            .collect::<Result<Vec<_>>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("scan worker panicked"))
                .collect()
        });
        let mut merged = Vec::with_capacity(candidates.len());
        for part in results {
            merged.extend(part?);
        }
        merged.sort_by_key(|r| r.p);
        merged
    };
    let ordinary_count = reports.iter().filter(|r| r.ordinary).count() as u64;
    let s_count = reports.iter().filter(|r| r.in_s).count() as u64;
    let stats = DensityStats {
        n: curve.n(),
        limit,
        sha_order,
        primes_total,
        ordinary_count,
        s_count,
        density_vs_primes: s_count as f64 / primes_total as f64,
        density_vs_ordinary: if ordinary_count == 0 {
            0.0
        } else {
            s_count as f64 / ordinary_count as f64
        },
    };
    Ok((reports, stats))
}

/// The primes of S up to `limit`, ascending, with density statistics.
pub fn enumerate_s(
    n: u64,
    limit: u64,
    sha_order: u64,
    jobs: usize,
) -> Result<(Vec<u64>, DensityStats)> {
    let curve = CurveEn::new(n)?;
    let (reports, stats) = scan_reports(&curve, limit, sha_order, &TraceConfig::default(), jobs)?;
    Ok((
        reports
            .into_iter()
            .filter(|r| r.in_s)
            .map(|r| r.p)
            .collect(),
        stats,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    Main,
    Aux,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Strict,
    Relaxed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypothesisStatus {
    Pass,
    Fail,
    Assumed,
}

impl HypothesisStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            HypothesisStatus::Pass => "pass",
            HypothesisStatus::Fail => "fail",
            HypothesisStatus::Assumed => "assumed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: &'static str,
    pub status: HypothesisStatus,
    pub witness: String,
}

fn pass(name: &'static str, witness: String) -> Hypothesis {
    Hypothesis {
        name,
        status: HypothesisStatus::Pass,
        witness,
    }
}

fn fail(name: &'static str, witness: String) -> Hypothesis {
    Hypothesis {
        name,
        status: HypothesisStatus::Fail,
        witness,
    }
}

fn assumed(name: &'static str, witness: String) -> Hypothesis {
    Hypothesis {
        name,
        status: HypothesisStatus::Assumed,
        witness,
    }
}

/// How the ramified set is described by the caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SigmaSpec {
    /// Sigma = {q}: L is the unique degree-p subfield of Q(mu_q), so the
    /// cyclic-extension hypothesis is constructive.
    CyclotomicQ(u64),
    /// Caller asserts a Z/pZ-extension ramified exactly at these primes.
    Direct(Vec<u64>),
}

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub mode: Mode,
    /// Externally supplied order of Sha(E_n/Q); None leaves condition (b)
    /// assumed, which blocks any conclusion.
    pub sha_order: Option<u64>,
    /// Height bound for the rational witness pre-search.
    pub search_height: u64,
    /// Tail target for the heuristic L(1) verdict.
    pub eps: f64,
    pub seed: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            mode: Mode::Strict,
            sha_order: None,
            search_height: 50,
            eps: 1e-4,
            seed: 1,
        }
    }
}

/// Machine-checkable record tying verified hypotheses to a theorem's
/// conclusion. The conclusion is present exactly when every hypothesis has
/// status pass; heuristic inputs are recorded but never license anything.
#[derive(Debug, Clone)]
pub struct ObstructionCertificate {
    pub theorem: Theorem,
    pub mode: Mode,
    pub n: u64,
    pub b: i128,
    pub conductor: u64,
    pub bad_primes: Vec<u64>,
    pub p: u64,
    pub sigma: Vec<u64>,
    pub q: Option<u64>,
    pub sigma_asserted_by_caller: bool,
    pub hypotheses: Vec<Hypothesis>,
    pub sha_order: Option<u64>,
    pub cube_sum_verdict: String,
    pub conclusion: Option<String>,
    /// Integer witness data: #E(F_p) and, per ramified prime, #E(F_ell),
    /// so the certificate is independently re-checkable.
    pub order_mod_p: Option<u64>,
    pub sigma_orders: Vec<(u64, u64)>,
    pub search_height: u64,
    pub eps: f64,
}

impl ObstructionCertificate {
    pub fn all_pass(&self) -> bool {
        self.hypotheses
            .iter()
            .all(|h| h.status == HypothesisStatus::Pass)
    }

    /// Re-run the divisibility checks from the stored integers alone.
    pub fn recheck_witness_data(&self) -> bool {
        if self.conclusion.is_some() && !self.all_pass() {
            return false;
        }
        if self.conclusion.is_none() {
            return true;
        }
        let six_pn = 6u128 * self.p as u128 * self.n as u128;
        for &(ell, order) in &self.sigma_orders {
            if six_pn % ell as u128 == 0 || order % self.p == 0 {
                return false;
            }
        }
        match self.order_mod_p {
            Some(order) if order % self.p != 0 => {}
            _ => return false,
        }
        if let Some(q) = self.q {
            if q % self.p != 1 {
                return false;
            }
        }
        match self.sha_order {
            Some(k) if k % self.p != 0 => {}
            _ => return false,
        }
        true
    }
}

fn admissibility_hypotheses(
    report: &AdmissibilityReport,
    sha_order: Option<u64>,
    hyps: &mut Vec<Hypothesis>,
) {
    let p = report.p;
    let n = report.n;
    if !report.good_reduction {
        hyps.push(fail(
            "good_ordinary_reduction",
            format!("p = {p} divides 6n = {}", 6 * n),
        ));
    } else if !report.ordinary {
        hyps.push(fail(
            "good_ordinary_reduction",
            format!("supersingular: a_{p} = 0 (p = 2 mod 3)"),
        ));
    } else {
        hyps.push(pass(
            "good_ordinary_reduction",
            format!(
                "p = {p} ∤ 6n = {}; a_{p} = {}",
                6 * n,
                report.trace.unwrap()
            ),
        ));
    }
    match sha_order {
        None => hyps.push(assumed(
            "sha_p_part_trivial",
            "no Sha order supplied; Sha[p] = 0 taken as an assumption".into(),
        )),
        Some(k) => {
            if k % p == 0 {
                hyps.push(fail(
                    "sha_p_part_trivial",
                    format!("{p} | {k} (supplied order)"),
                ));
            } else {
                hyps.push(pass(
                    "sha_p_part_trivial",
                    format!("{p} ∤ {k} (supplied order)"),
                ));
            }
        }
    }
    match report.order_mod_p {
        None => hyps.push(fail(
            "p_not_dividing_group_order",
            "no good-reduction order at p".into(),
        )),
        Some(order) => {
            if report.condition_c {
                hyps.push(pass(
                    "p_not_dividing_group_order",
                    format!("#={order}, {p} ∤ {order}"),
                ));
            } else {
                hyps.push(fail(
                    "p_not_dividing_group_order",
                    format!("#={order}, {p} | {order}"),
                ));
            }
        }
    }
}

fn witness_hypothesis(n: u64, height: u64) -> Result<Hypothesis> {
    match rational_point_search(n, height)? {
        Some(w) => Ok(fail(
            "no_rational_cube_sum_witness",
            format!("found {w} with denominator <= {height}"),
        )),
        None => Ok(pass(
            "no_rational_cube_sum_witness",
            format!(
                "bounded search (c <= {height}, |a| <= c ceil({n}^(1/3)) + 1) found no \
                 a^3 + b^3 = {n} c^3"
            ),
        )),
    }
}

/// Certificate for the tower statement: for p in S, n is not a sum of two
/// cubes in the cyclotomic Z_p-extension of Q.
pub fn check_theorem_main(n: u64, p: u64, opts: &CertifyOptions) -> Result<ObstructionCertificate> {
    let curve = CurveEn::new(n)?;
    let cfg = TraceConfig {
        seed: opts.seed,
        ..TraceConfig::default()
    };
    let report = check_prime_in_s_with(&curve, p, opts.sha_order.unwrap_or(1), &cfg)?;
    let mut hyps = Vec::new();
    admissibility_hypotheses(&report, opts.sha_order, &mut hyps);
    hyps.push(witness_hypothesis(n, opts.search_height)?);
    let verdict = rational_cube_sum_verdict(n, opts.search_height, opts.eps)?;
    let all_pass = hyps.iter().all(|h| h.status == HypothesisStatus::Pass);
    let conclusion = all_pass.then(|| {
        format!(
            "{n} is not a sum of two cubes in the cyclotomic Z_{p}-extension of Q \
             (rank E_{n}(Q_inf^({p})) = 0)"
        )
    });
    Ok(ObstructionCertificate {
        theorem: Theorem::Main,
        mode: opts.mode,
        n,
        b: curve.b(),
        conductor: curve.conductor()?,
        bad_primes: curve.bad_primes().iter().copied().collect(),
        p,
        sigma: Vec::new(),
        q: None,
        sigma_asserted_by_caller: false,
        hypotheses: hyps,
        sha_order: opts.sha_order,
        cube_sum_verdict: verdict.to_string(),
        conclusion,
        order_mod_p: report.order_mod_p,
        sigma_orders: Vec::new(),
        search_height: opts.search_height,
        eps: opts.eps,
    })
}

/// Certificate for the cyclic-extension statement. With `SigmaSpec::CyclotomicQ`
/// the degree-p field is constructive (q = 1 mod p is enforced up front; a
/// violation is an error, not a failed hypothesis, since no field is being
/// described). Strict mode additionally gates on p > 7.
pub fn check_theorem_aux(
    n: u64,
    p: u64,
    sigma: SigmaSpec,
    opts: &CertifyOptions,
) -> Result<ObstructionCertificate> {
    let curve = CurveEn::new(n)?;
    let cfg = TraceConfig {
        seed: opts.seed,
        ..TraceConfig::default()
    };
    let report = check_prime_in_s_with(&curve, p, opts.sha_order.unwrap_or(1), &cfg)?;

    let (sigma_primes, q, asserted) = match &sigma {
        SigmaSpec::CyclotomicQ(q) => {
            if !is_prime(*q) {
                return Err(Error::NotPrime(*q));
            }
            if q % p != 1 {
                return Err(Error::QNotOneModP { q: *q, p });
            }
            (vec![*q], Some(*q), false)
        }
        SigmaSpec::Direct(ells) => {
            if ells.is_empty() {
                return Err(Error::EmptySigma);
            }
            for &ell in ells {
                if !is_prime(ell) {
                    return Err(Error::NotPrime(ell));
                }
            }
            let mut sorted = ells.clone();
            sorted.sort_unstable();
            sorted.dedup();
            (sorted, None, true)
        }
    };

    let mut hyps = Vec::new();
    if opts.mode == Mode::Strict {
        if p > 7 {
            hyps.push(pass("p_exceeds_7", format!("p = {p} > 7")));
        } else {
            hyps.push(fail(
                "p_exceeds_7",
                format!(
                    "p = {p} is not > 7; the classical n = 3, q = 29 worked example needs relaxed mode"
                ),
            ));
        }
    }
    match q {
        Some(q) => hyps.push(pass(
            "galois_group_cyclic_of_order_p",
            format!("q = {q} ≡ 1 (mod {p}): L is the degree-{p} subfield of Q(mu_{q})"),
        )),
        None => hyps.push(assumed(
            "galois_group_cyclic_of_order_p",
            format!(
                "existence of a Z/{p}Z-extension ramified exactly at {sigma_primes:?} asserted by caller"
            ),
        )),
    }
    admissibility_hypotheses(&report, opts.sha_order, &mut hyps);
    hyps.push(witness_hypothesis(n, opts.search_height)?);

    let six_pn = 6u64
        .checked_mul(p)
        .and_then(|v| v.checked_mul(n))
        .ok_or_else(|| Error::Overflow(format!("6 * {p} * {n}")))?;
    let mut sigma_orders = Vec::new();
    for &ell in &sigma_primes {
        if six_pn % ell == 0 {
            hyps.push(fail("ell_not_dividing_6pn", format!("{ell} | {six_pn}")));
            continue;
        }
        hyps.push(pass("ell_not_dividing_6pn", format!("{ell} ∤ {six_pn}")));
        if ell < 5 {
            hyps.push(fail("no_p_torsion", format!("ell = {ell} < 5 unsupported")));
            continue;
        }
        let order = curve.reduce_mod_p(ell)?.order(&cfg);
        sigma_orders.push((ell, order));
        if order % p != 0 {
            hyps.push(pass("no_p_torsion", format!("#={order}, {p} ∤ {order}")));
        } else {
            hyps.push(fail("no_p_torsion", format!("#={order}, {p} | {order}")));
        }
    }

    let verdict = rational_cube_sum_verdict(n, opts.search_height, opts.eps)?;
    let all_pass = hyps.iter().all(|h| h.status == HypothesisStatus::Pass);
    let field_desc = match q {
        Some(q) => format!("the degree-{p} cyclic field inside Q(mu_{q})"),
        None => format!("the caller's Z/{p}Z-extension ramified exactly at {sigma_primes:?}"),
    };
    let conclusion = all_pass
        .then(|| format!("{n} cannot be represented as x^3 + y^3 with x, y in L = {field_desc}"));
    Ok(ObstructionCertificate {
        theorem: Theorem::Aux,
        mode: opts.mode,
        n,
        b: curve.b(),
        conductor: curve.conductor()?,
        bad_primes: curve.bad_primes().iter().copied().collect(),
        p,
        sigma: sigma_primes,
        q,
        sigma_asserted_by_caller: asserted,
        hypotheses: hyps,
        sha_order: opts.sha_order,
        cube_sum_verdict: verdict.to_string(),
        conclusion,
        order_mod_p: report.order_mod_p,
        sigma_orders,
        search_height: opts.search_height,
        eps: opts.eps,
    })
}

/// Re-run the full check from the certificate's own identifying data and
/// confirm it reproduces the same hypothesis statuses and conclusion.
pub fn revalidate(cert: &ObstructionCertificate) -> Result<bool> {
    if !cert.recheck_witness_data() {
        return Ok(false);
    }
    let opts = CertifyOptions {
        mode: cert.mode,
        sha_order: cert.sha_order,
        search_height: cert.search_height,
        eps: cert.eps,
        seed: 1,
    };
    let fresh = match cert.theorem {
        Theorem::Main => check_theorem_main(cert.n, cert.p, &opts)?,
        Theorem::Aux => {
            let sigma = match cert.q {
                Some(q) => SigmaSpec::CyclotomicQ(q),
                None => SigmaSpec::Direct(cert.sigma.clone()),
            };
            check_theorem_aux(cert.n, cert.p, sigma, &opts)?
        }
    };
    Ok(fresh.hypotheses == cert.hypotheses
        && fresh.conclusion == cert.conclusion
        && fresh.order_mod_p == cert.order_mod_p
        && fresh.sigma_orders == cert.sigma_orders)
}

/// Default search ceiling for admissible q.
pub const Q_SEARCH_CEILING: u64 = 1_000_000;

/// The first `count` primes q = 1 (mod p) for which the certificate has no
/// failed hypothesis, in ascending order. (A hypothesis left "assumed", e.g.
/// an unsupplied Sha order, does not disqualify a q here — it merely keeps
/// the conclusion off the certificate.) Requires p itself to be admissible.
/// May return fewer than `count` if the search ceiling is reached; in strict
/// mode with p <= 7 it always returns none, since the p > 7 gate fails for
/// every q.
pub fn find_admissible_q(n: u64, p: u64, count: usize, opts: &CertifyOptions) -> Result<Vec<u64>> {
    let report = check_prime_in_s(n, p, opts.sha_order.unwrap_or(1))?;
    if !(report.good_reduction && report.ordinary && report.condition_b && report.condition_c) {
        return Err(Error::PrimeNotAdmissible { p, n });
    }
    let mut out = Vec::new();
    let mut q = p + 1;
    while out.len() < count && q <= Q_SEARCH_CEILING {
        if q % p == 1 && is_prime(q) {
            let cert = check_theorem_aux(n, p, SigmaSpec::CyclotomicQ(q), opts)?;
            if cert
                .hypotheses
                .iter()
                .all(|h| h.status != HypothesisStatus::Fail)
            {
                out.push(q);
            }
        }
        q += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_worked_example() {
        let r = check_prime_in_s(3, 7, 1).unwrap();
        assert!(r.in_s);
        assert_eq!(r.order_mod_p, Some(3));
        assert_eq!(r.trace, Some(5));
        let r = check_prime_in_s(3, 11, 1).unwrap();
        assert!(!r.in_s);
        assert!(!r.ordinary);
        let r = check_prime_in_s(3, 13, 1).unwrap();
        assert!(r.in_s);
        assert_eq!(r.order_mod_p, Some(12));
    }

    #[test]
    fn bad_prime_reported_not_rejected() {
        let r = check_prime_in_s(5, 5, 1).unwrap();
        assert!(!r.good_reduction);
        assert!(!r.in_s);
        assert_eq!(r.order_mod_p, None);
    }

    #[test]
    fn precondition_errors() {
        assert!(matches!(check_prime_in_s(3, 6, 1), Err(Error::NotPrime(6))));
        assert!(matches!(
            check_prime_in_s(3, 3, 1),
            Err(Error::PrimeTooSmall(3, 5))
        ));
        assert!(check_prime_in_s(8, 7, 1).is_err());
    }

    #[test]
    fn enumerate_small_range() {
        let (s, stats) = enumerate_s(3, 100, 1, 1).unwrap();
        assert!(s.contains(&7));
        assert!(s.contains(&13));
        assert!(s.iter().all(|&p| p % 3 == 1));
        assert_eq!(stats.primes_total, 25);
        // scan output = filter of per-prime checks
        for &p in &s {
            assert!(check_prime_in_s(3, p, 1).unwrap().in_s);
        }
    }

    #[test]
    fn scan_is_job_count_invariant() {
        let curve = CurveEn::new(3).unwrap();
        let cfg = TraceConfig::default();
        let (seq, stats1) = scan_reports(&curve, 2000, 1, &cfg, 1).unwrap();
        let (par, stats4) = scan_reports(&curve, 2000, 1, &cfg, 4).unwrap();
        assert_eq!(seq, par);
        assert_eq!(stats1, stats4);
    }

    #[test]
    fn aux_worked_example_relaxed() {
        let opts = CertifyOptions {
            mode: Mode::Relaxed,
            sha_order: Some(1),
            ..CertifyOptions::default()
        };
        let cert = check_theorem_aux(3, 7, SigmaSpec::CyclotomicQ(29), &opts).unwrap();
        assert!(cert.all_pass());
        assert!(cert.conclusion.is_some());
        let ell = cert
            .hypotheses
            .iter()
            .find(|h| h.name == "ell_not_dividing_6pn")
            .unwrap();
        assert_eq!(ell.status, HypothesisStatus::Pass);
        assert_eq!(ell.witness, "29 ∤ 126");
        let tor = cert
            .hypotheses
            .iter()
            .find(|h| h.name == "no_p_torsion")
            .unwrap();
        assert_eq!(tor.witness, "#=30, 7 ∤ 30");
        assert!(revalidate(&cert).unwrap());
    }

    #[test]
    fn aux_worked_example_strict_fails_only_the_gate() {
        let opts = CertifyOptions {
            mode: Mode::Strict,
            sha_order: Some(1),
            ..CertifyOptions::default()
        };
        let cert = check_theorem_aux(3, 7, SigmaSpec::CyclotomicQ(29), &opts).unwrap();
        assert!(cert.conclusion.is_none());
        let failing: Vec<_> = cert
            .hypotheses
            .iter()
            .filter(|h| h.status != HypothesisStatus::Pass)
            .collect();
        assert_eq!(failing.len(), 1);
        assert_eq!(failing[0].name, "p_exceeds_7");
        assert!(revalidate(&cert).unwrap());
    }

    #[test]
    fn aux_strict_p13() {
        let opts = CertifyOptions {
            mode: Mode::Strict,
            sha_order: Some(1),
            ..CertifyOptions::default()
        };
        let cert = check_theorem_aux(3, 13, SigmaSpec::CyclotomicQ(53), &opts).unwrap();
        assert!(cert.all_pass(), "hypotheses: {:?}", cert.hypotheses);
        assert_eq!(cert.sigma_orders, vec![(53, 54)]);
        assert!(cert.conclusion.is_some());
        assert!(matches!(
            check_theorem_aux(3, 13, SigmaSpec::CyclotomicQ(59), &opts),
            Err(Error::QNotOneModP { q: 59, p: 13 })
        ));
    }

    #[test]
    fn missing_sha_order_blocks_conclusion() {
        let opts = CertifyOptions {
            mode: Mode::Relaxed,
            sha_order: None,
            ..Default::default()
        };
        let cert = check_theorem_aux(3, 7, SigmaSpec::CyclotomicQ(29), &opts).unwrap();
        assert!(cert.conclusion.is_none());
        let sha = cert
            .hypotheses
            .iter()
            .find(|h| h.name == "sha_p_part_trivial")
            .unwrap();
        assert_eq!(sha.status, HypothesisStatus::Assumed);
    }

    #[test]
    fn sigma_direct_is_assumed() {
        let opts = CertifyOptions {
            mode: Mode::Strict,
            sha_order: Some(1),
            ..CertifyOptions::default()
        };
        let cert = check_theorem_aux(3, 13, SigmaSpec::Direct(vec![53]), &opts).unwrap();
        assert!(cert.conclusion.is_none());
        assert!(cert.sigma_asserted_by_caller);
        let g = cert
            .hypotheses
            .iter()
            .find(|h| h.name == "galois_group_cyclic_of_order_p")
            .unwrap();
        assert_eq!(g.status, HypothesisStatus::Assumed);
        assert!(revalidate(&cert).unwrap());
    }

    #[test]
    fn found_witness_blocks_conclusion() {
        let opts = CertifyOptions {
            mode: Mode::Relaxed,
            sha_order: Some(1),
            search_height: 25,
            ..CertifyOptions::default()
        };
        // 6 is a sum of two cubes; no obstruction certificate may conclude
        let cert = check_theorem_main(6, 7, &opts).unwrap();
        assert!(cert.conclusion.is_none());
        let w = cert
            .hypotheses
            .iter()
            .find(|h| h.name == "no_rational_cube_sum_witness")
            .unwrap();
        assert_eq!(w.status, HypothesisStatus::Fail);
        assert!(w.witness.contains("(17/21, 37/21)"));
    }

    #[test]
    fn main_theorem_certificate() {
        let opts = CertifyOptions {
            mode: Mode::Strict,
            sha_order: Some(1),
            ..CertifyOptions::default()
        };
        let cert = check_theorem_main(3, 7, &opts).unwrap();
        assert!(cert.all_pass());
        assert!(cert
            .conclusion
            .as_deref()
            .unwrap()
            .contains("Z_7-extension"));
        assert!(revalidate(&cert).unwrap());
    }

    #[test]
    fn find_q_examples() {
        let relaxed = CertifyOptions {
            mode: Mode::Relaxed,
            sha_order: Some(1),
            ..CertifyOptions::default()
        };
        assert_eq!(find_admissible_q(3, 7, 1, &relaxed).unwrap(), vec![29]);
        let strict = CertifyOptions {
            mode: Mode::Strict,
            sha_order: Some(1),
            ..CertifyOptions::default()
        };
        assert_eq!(find_admissible_q(3, 13, 1, &strict).unwrap(), vec![53]);
        assert!(matches!(
            find_admissible_q(3, 11, 1, &strict),
            Err(Error::PrimeNotAdmissible { p: 11, n: 3 })
        ));
    }
}
