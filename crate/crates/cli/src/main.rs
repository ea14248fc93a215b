//! Command-line surface: curve analysis, prime scans, density reports,
//! cube-sum searches, and obstruction certificates.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cube_obstruct::arithmetic::primes_up_to;
use cube_obstruct::curve_en::{rational_point_search, CurveEn};
use cube_obstruct::curve_fp::TraceConfig;
use cube_obstruct::lseries::{l1_approx, rational_cube_sum_verdict};
use cube_obstruct::obstruction::{
    check_prime_in_s_with, check_theorem_aux, check_theorem_main, find_admissible_q,
    report_from_trace, AdmissibilityReport, CertifyOptions, DensityStats, Mode, SigmaSpec,
};

use cube_obstruct_cli::cache::CacheFile;
use cube_obstruct_cli::doc::{render_text, CertificateDoc};

#[derive(Parser)]
#[command(
    name = "cube-obstruct",
    version,
    about = "Certified obstructions to n = x^3 + y^3 in cyclic and Z_p-tower extensions of Q"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Strict,
    Relaxed,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Relaxed => Mode::Relaxed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Curve summary, torsion certificate, and cube-sum verdict
    Analyze {
        n: u64,
        #[arg(long = "sha-order")]
        sha_order: Option<u64>,
        /// Height bound for the witness search
        #[arg(long, default_value_t = 100)]
        height: u64,
        /// Tail target for L(1)
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        #[arg(long)]
        json: bool,
    },
    /// Trace of Frobenius a_p and #E_n(F_p) at a good prime
    Ap {
        n: u64,
        p: u64,
        #[arg(long)]
        json: bool,
    },
    /// S-membership table for all primes 5 <= p <= max, plus density statistics
    Scan {
        n: u64,
        #[arg(long)]
        max: u64,
        #[arg(long = "sha-order")]
        sha_order: Option<u64>,
        /// a_p cache file to read and update
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
    /// Emit an obstruction certificate (tower statement without --q/--sigma,
    /// cyclic-extension statement with one of them)
    Certify {
        n: u64,
        p: u64,
        /// Ramifying prime q = 1 (mod p); Sigma = {q}
        #[arg(long, conflicts_with = "sigma")]
        q: Option<u64>,
        /// Comma-separated ramified primes of a caller-asserted extension
        #[arg(long, value_delimiter = ',')]
        sigma: Option<Vec<u64>>,
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
        #[arg(long = "sha-order")]
        sha_order: Option<u64>,
        /// Write the canonical JSON certificate here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Density report only
    Density {
        n: u64,
        #[arg(long)]
        max: u64,
        #[arg(long = "sha-order")]
        sha_order: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Search for a cube-sum witness up to the given denominator height
    Search {
        n: u64,
        #[arg(long)]
        height: u64,
        #[arg(long)]
        json: bool,
    },
    /// List the first admissible ramifying primes q for (n, p)
    FindQ {
        n: u64,
        p: u64,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
    },
}

fn seed_from_env() -> Result<u64> {
    match std::env::var("CUBE_OBSTRUCT_SEED") {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .with_context(|| format!("CUBE_OBSTRUCT_SEED = `{s}` is not a u64")),
        Err(_) => Ok(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let seed = seed_from_env()?;
    let cfg = TraceConfig {
        seed,
        ..TraceConfig::default()
    };
    match cli.command {
        Command::Ap { n, p, json } => {
            let curve = CurveEn::new(n)?;
            let reduction = curve.reduce_mod_p(p)?;
            let trace = reduction.trace_of_frobenius(&cfg);
            let order = (p as i64 + 1 - trace) as u64;
            if json {
                println!(
                    "{}",
                    serde_json::json!({ "n": n, "p": p, "a_p": trace, "order": order })
                );
            } else {
                println!("n = {n}  p = {p}");
                println!("#E(F_p) = {order}");
                println!("a_p = {trace}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Search { n, height, json } => {
            let witness = rational_point_search(n, height)?;
            if json {
                let value = match &witness {
                    Some(w) => serde_json::json!({
                        "witness": { "x": w.x.to_string(), "y": w.y.to_string() }
                    }),
                    None => serde_json::json!({ "witness": null }),
                };
                println!("{value}");
            } else {
                match &witness {
                    Some(w) => println!("{w}"),
                    None => println!("none"),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze {
            n,
            sha_order,
            height,
            eps,
            json,
        } => {
            analyze(n, sha_order, height, eps, json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Density {
            n,
            max,
            sha_order,
            json,
        } => {
            let curve = CurveEn::new(n)?;
            let sha = sha_order.unwrap_or(1);
            let jobs = std::thread::available_parallelism()
                .map(|v| v.get())
                .unwrap_or(1);
            let (_, stats) =
                cube_obstruct::obstruction::scan_reports(&curve, max, sha, &cfg, jobs)?;
            if json {
                println!("{}", density_json(&stats));
            } else {
                print_density(&stats);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan {
            n,
            max,
            sha_order,
            cache,
            jobs,
            json,
        } => {
            scan(
                n,
                max,
                sha_order.unwrap_or(1),
                cache,
                jobs.max(1),
                json,
                &cfg,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::FindQ {
            n,
            p,
            count,
            mode,
            json,
        } => {
            let opts = CertifyOptions {
                mode: mode.into(),
                sha_order: None,
                seed,
                ..CertifyOptions::default()
            };
            let qs = find_admissible_q(n, p, count, &opts)?;
            if json {
                println!("{}", serde_json::json!({ "n": n, "p": p, "q": qs }));
            } else {
                for q in &qs {
                    println!("{q}");
                }
                if qs.is_empty() {
                    println!("none");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify {
            n,
            p,
            q,
            sigma,
            mode,
            sha_order,
            out,
            json,
        } => {
            let opts = CertifyOptions {
                mode: mode.into(),
                sha_order,
                seed,
                ..CertifyOptions::default()
            };
            let cert = match (q, sigma) {
                (Some(q), None) => check_theorem_aux(n, p, SigmaSpec::CyclotomicQ(q), &opts)?,
                (None, Some(ells)) => check_theorem_aux(n, p, SigmaSpec::Direct(ells), &opts)?,
                (None, None) => check_theorem_main(n, p, &opts)?,
                (Some(_), Some(_)) => bail!("--q and --sigma are mutually exclusive"),
            };
            let doc = CertificateDoc::from_certificate(&cert);
            if let Some(path) = &out {
                std::fs::write(path, doc.to_canonical_json())
                    .with_context(|| format!("writing certificate to {}", path.display()))?;
            }
            if json {
                print!("{}", doc.to_canonical_json());
            } else {
                print!("{}", render_text(&cert));
            }
            if cert.all_pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn analyze(n: u64, sha_order: Option<u64>, height: u64, eps: f64, json: bool) -> Result<()> {
    let curve = CurveEn::new(n)?;
    let conductor = curve.conductor()?;
    let d2 = curve.local_data(2)?;
    let d3 = curve.local_data(3)?;
    let torsion = curve.torsion_trivial_certificate(100)?;
    let verdict = rational_cube_sum_verdict(n, height, eps)?;
    let l1 = l1_approx(&curve, eps);
    if json {
        let l1_json = match &l1 {
            Ok(r) => serde_json::json!({
                "value": r.value,
                "error_bound": r.error_bound,
                "root_number": r.root_number,
            }),
            Err(e) => serde_json::json!({ "inconclusive": e.to_string() }),
        };
        println!(
            "{}",
            serde_json::json!({
                "n": n,
                "b": curve.b() as i64,
                "bad_primes": curve.bad_primes().iter().copied().collect::<Vec<_>>(),
                "conductor": conductor,
                "kodaira_2": d2.kodaira.to_string(),
                "kodaira_3": d3.kodaira.to_string(),
                "torsion_trivial": true,
                "torsion_order_gcd": torsion.order_gcd,
                "l1": l1_json,
                "sha_order": sha_order,
                "cube_sum_verdict": verdict.to_string(),
            })
        );
    } else {
        println!("n = {n}");
        println!("b = {}", curve.b());
        println!(
            "bad primes = {:?}",
            curve.bad_primes().iter().copied().collect::<Vec<_>>()
        );
        println!("conductor = {conductor}");
        println!(
            "reduction at 2: {} (f = {}); at 3: {} (f = {})",
            d2.kodaira, d2.conductor_exponent, d3.kodaira, d3.conductor_exponent
        );
        println!(
            "torsion: trivial (reduction-order gcd {} over good ell <= 100; \
             2- and 3-torsion excluded algebraically)",
            torsion.order_gcd
        );
        match &l1 {
            Ok(r) => println!(
                "L(1) = {:.6} (error bound {:.2e}), root number = {:+}",
                r.value, r.error_bound, r.root_number
            ),
            Err(e) => println!("L(1): inconclusive ({e})"),
        }
        if let Some(k) = sha_order {
            println!("sha order (supplied) = {k}");
        }
        println!("cube-sum verdict: {verdict}");
    }
    Ok(())
}

fn print_density(stats: &DensityStats) {
    println!(
        "n = {}  X = {}  sha-order = {}",
        stats.n, stats.limit, stats.sha_order
    );
    println!("pi(X) = {}", stats.primes_total);
    println!("ordinary primes in [5, X] = {}", stats.ordinary_count);
    println!("|S| = {}", stats.s_count);
    println!("|S|/pi(X) = {:.4}", stats.density_vs_primes);
    println!("|S|/ordinary = {:.4}", stats.density_vs_ordinary);
}

fn density_json(stats: &DensityStats) -> serde_json::Value {
    serde_json::json!({
        "n": stats.n,
        "max": stats.limit,
        "sha_order": stats.sha_order,
        "pi": stats.primes_total,
        "ordinary": stats.ordinary_count,
        "s_count": stats.s_count,
        "density_vs_primes": stats.density_vs_primes,
        "density_vs_ordinary": stats.density_vs_ordinary,
    })
}

fn scan(
    n: u64,
    max: u64,
    sha_order: u64,
    cache_path: Option<PathBuf>,
    jobs: usize,
    json: bool,
    cfg: &TraceConfig,
) -> Result<()> {
    anyhow::ensure!(max >= 5, "scan requires --max >= 5");
    let curve = CurveEn::new(n)?;
    let mut cache = match &cache_path {
        Some(path) if path.exists() => CacheFile::load(path, n, curve.b())?,
        _ => CacheFile::new(n, curve.b()),
    };
    let primes: Vec<u64> = primes_up_to(max).collect();
    let primes_total = primes.len() as u64;
    let good: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|p| *p >= 5 && !curve.bad_primes().contains(p))
        .collect();
    let missing: Vec<u64> = good
        .iter()
        .copied()
        .filter(|p| !cache.rows.contains_key(p))
        .collect();
    let computed = compute_traces(&curve, &missing, jobs, cfg)?;
    cache.rows.extend(computed);

    let mut reports: Vec<AdmissibilityReport> = Vec::new();
    for &p in primes.iter().filter(|&&p| p >= 5) {
        if curve.bad_primes().contains(&p) {
            reports.push(check_prime_in_s_with(&curve, p, sha_order, cfg)?);
        } else {
            reports.push(report_from_trace(&curve, p, sha_order, cache.rows[&p])?);
        }
    }
    if let Some(path) = &cache_path {
        cache.store(path)?;
    }

    let ordinary_count = reports.iter().filter(|r| r.ordinary).count() as u64;
    let s_count = reports.iter().filter(|r| r.in_s).count() as u64;
    let stats = DensityStats {
        n,
        limit: max,
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

    if json {
        let rows: Vec<serde_json::Value> = reports
            .iter()
            .map(|r| {
                serde_json::json!({
                    "p": r.p,
                    "good": r.good_reduction,
                    "ordinary": r.ordinary,
                    "a_p": r.trace,
                    "order": r.order_mod_p,
                    "condition_b": r.condition_b,
                    "condition_c": r.condition_c,
                    "in_s": r.in_s,
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::json!({ "rows": rows, "stats": density_json(&stats) })
        );
    } else {
        println!(
            "{:>10} {:>5} {:>9} {:>8} {:>12} {:>3} {:>3} {:>5}",
            "p", "good", "ordinary", "a_p", "#E(F_p)", "b", "c", "in_S"
        );
        for r in &reports {
            let yn = |v: bool| if v { "yes" } else { "no" };
            println!(
                "{:>10} {:>5} {:>9} {:>8} {:>12} {:>3} {:>3} {:>5}",
                r.p,
                yn(r.good_reduction),
                yn(r.ordinary),
                r.trace.map_or("-".to_string(), |t| t.to_string()),
                r.order_mod_p.map_or("-".to_string(), |o| o.to_string()),
                yn(r.condition_b),
                yn(r.condition_c),
                yn(r.in_s),
            );
        }
        print_density(&stats);
    }
    Ok(())
}

/// Traces for the given good primes, sharded over up to `jobs` threads.
/// Results are merged by prime, so job count never changes the output.
fn compute_traces(
    curve: &CurveEn,
    primes: &[u64],
    jobs: usize,
    cfg: &TraceConfig,
) -> Result<BTreeMap<u64, i64>> {
    if primes.is_empty() {
        return Ok(BTreeMap::new());
    }
    let jobs = jobs.min(primes.len());
    if jobs <= 1 {
        let mut out = BTreeMap::new();
        for &p in primes {
            out.insert(p, curve.reduce_mod_p(p)?.trace_of_frobenius(cfg));
        }
        return Ok(out);
    }
    let chunk = primes.len().div_ceil(jobs);
    let results: Vec<cube_obstruct::Result<Vec<(u64, i64)>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = primes
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|&p| Ok((p, curve.reduce_mod_p(p)?.trace_of_frobenius(cfg))))
                        .collect()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("trace worker panicked"))
            .collect()
    });
    let mut out = BTreeMap::new();
    for part in results {
        out.extend(part?);
    }
    Ok(out)
}
