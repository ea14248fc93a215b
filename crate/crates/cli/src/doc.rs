//! Canonical JSON documents for obstruction certificates: fixed field order,
//! sorted keys inside maps, so identical inputs serialize byte-identically.

use cube_obstruct::obstruction::{Mode, ObstructionCertificate, Theorem};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub schema_version: u32,
    pub theorem: String,
    pub mode: String,
    pub n: u64,
    pub curve: CurveDoc,
    pub p: u64,
    pub sigma: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    pub hypotheses: Vec<HypothesisDoc>,
    pub heuristic_inputs: HeuristicInputsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conclusion: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveDoc {
    pub b: i64,
    pub conductor: u64,
    pub bad_primes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisDoc {
    pub name: String,
    pub status: String,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeuristicInputsDoc {
    #[serde(default)]
    pub sha_order: Option<u64>,
    pub cube_sum_verdict: String,
}

impl CertificateDoc {
    pub fn from_certificate(cert: &ObstructionCertificate) -> CertificateDoc {
        CertificateDoc {
            schema_version: SCHEMA_VERSION,
            theorem: match cert.theorem {
                Theorem::Main => "main".to_string(),
                Theorem::Aux => "aux".to_string(),
            },
            mode: match cert.mode {
                Mode::Strict => "strict".to_string(),
                Mode::Relaxed => "relaxed".to_string(),
            },
            n: cert.n,
            curve: CurveDoc {
                b: cert.b as i64,
                conductor: cert.conductor,
                bad_primes: cert.bad_primes.clone(),
            },
            p: cert.p,
            sigma: cert.sigma.clone(),
            q: cert.q,
            hypotheses: cert
                .hypotheses
                .iter()
                .map(|h| HypothesisDoc {
                    name: h.name.to_string(),
                    status: h.status.as_str().to_string(),
                    witness: h.witness.clone(),
                })
                .collect(),
            heuristic_inputs: HeuristicInputsDoc {
                sha_order: cert.sha_order,
                cube_sum_verdict: cert.cube_sum_verdict.clone(),
            },
            conclusion: cert.conclusion.clone(),
        }
    }

    /// Canonical serialization: pretty JSON with a trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }
}

/// Plain-text rendering of a certificate (one hypothesis per line).
pub fn render_text(cert: &ObstructionCertificate) -> String {
    let doc = CertificateDoc::from_certificate(cert);
    let mut out = String::new();
    out.push_str(&format!(
        "theorem = {}  mode = {}  n = {}  p = {}\n",
        doc.theorem, doc.mode, doc.n, doc.p
    ));
    out.push_str(&format!(
        "curve: b = {}, conductor = {}, bad primes = {:?}\n",
        doc.curve.b, doc.curve.conductor, doc.curve.bad_primes
    ));
    if let Some(q) = doc.q {
        out.push_str(&format!("q = {q}  sigma = {:?}\n", doc.sigma));
    } else if !doc.sigma.is_empty() {
        out.push_str(&format!("sigma = {:?} (asserted by caller)\n", doc.sigma));
    }
    out.push_str("hypotheses:\n");
    for h in &doc.hypotheses {
        out.push_str(&format!("  {}: {} ({})\n", h.name, h.status, h.witness));
    }
    out.push_str(&format!(
        "heuristic inputs: sha_order = {}, cube-sum verdict = {}\n",
        match doc.heuristic_inputs.sha_order {
            Some(k) => k.to_string(),
            None => "unsupplied".to_string(),
        },
        doc.heuristic_inputs.cube_sum_verdict
    ));
    match &doc.conclusion {
        Some(c) => out.push_str(&format!("conclusion: {c}\n")),
        None => out.push_str("conclusion: (none: not every hypothesis passed)\n"),
    }
    out
}
