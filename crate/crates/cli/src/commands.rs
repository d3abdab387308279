use std::fmt::Write as _;
use std::path::PathBuf;

use ahlab_core::interpolation::{
    expected_secant_dimension, hilbert_double_points, hilbert_function, HilbertReport, Verdict,
};
use ahlab_core::polyspace::{parse_rational, Form};
use ahlab_core::schemes::SchemeSpec;
use ahlab_core::sylvester::{
    decompose_odd, hankel, membership_sigma_k, sylvester_g, BinaryForm, Decomposition,
};
use ahlab_core::verifier::{
    build_certificate, critical_k, is_exception, sweep_case, sweep_cases, sweep_csv, CaseId,
    Certificate, CertificateCheck, CertificateChecker, Rule, SweepRow, SWEEP_CSV_HEADER,
};
use ahlab_core::witness::{clebsch_determinant, exception_witness, WitnessForm};
use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cache::Cache;
use crate::config::RunConfig;

/// 0: the result agrees with the known classification; 2: it does not.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Agrees,
    Disagrees,
}

pub trait Report: Serialize + for<'de> Deserialize<'de> {
    fn status(&self) -> Status {
        Status::Agrees
    }
    fn text(&self) -> String;
    fn csv(&self) -> Option<String> {
        None
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Independent => "independent",
        Verdict::Fills => "fills",
        Verdict::DefectiveEvidence => "defective-evidence",
    }
}

fn rule_name(r: Rule) -> String {
    serde_json::to_value(r)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_else(|| format!("{r:?}"))
}

fn row_of(r: &HilbertReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        r.case.n,
        r.case.d,
        r.case.k,
        r.expected,
        r.computed,
        r.defect,
        verdict_name(r.verdict),
        r.seed,
        r.field.characteristic()
    )
}

// hilbert

#[derive(Args, Debug)]
pub struct HilbertArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: usize,
    /// Number of general double points.
    #[arg(long, visible_alias = "k")]
    pub points: Option<usize>,
    /// Scheme file (JSON); its points are used as given.
    #[arg(long, conflicts_with = "points")]
    pub scheme: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
pub struct HilbertOut {
    pub report: HilbertReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secant_dimension: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_secant_dimension: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_exception: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agrees: Option<bool>,
}

impl Report for HilbertOut {
    fn status(&self) -> Status {
        if self.agrees == Some(false) {
            Status::Disagrees
        } else {
            Status::Agrees
        }
    }

    fn text(&self) -> String {
        let r = &self.report;
        let mut s = format!(
            "h = {} (expected {}, defect {}) in degree {} on P^{}: {}\n",
            r.computed,
            r.expected,
            r.defect,
            r.case.d,
            r.case.n,
            verdict_name(r.verdict)
        );
        if let Some(p) = self.predicted_exception {
            let _ = writeln!(s, "known exception: {p}");
        }
        s
    }

    fn csv(&self) -> Option<String> {
        Some(format!("{SWEEP_CSV_HEADER}\n{}\n", row_of(&self.report)))
    }
}

pub fn hilbert_key(a: &HilbertArgs) -> Result<String> {
    Ok(match &a.scheme {
        Some(path) => {
            let bytes =
                std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let digest = Sha256::digest(&bytes);
            let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
            format!("hilbert|scheme={hex}|d={}", a.d)
        }
        None => format!("hilbert|{:?}|{}|{:?}", a.n, a.d, a.points),
    })
}

pub fn hilbert(a: &HilbertArgs, cfg: &RunConfig) -> Result<HilbertOut> {
    if a.d == 0 {
        bail!("--d must be at least 1");
    }
    if let Some(path) = &a.scheme {
        let raw =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let spec =
            SchemeSpec::from_json(&raw).map_err(|e| anyhow!("malformed scheme file: {e}"))?;
        if a.n.is_some_and(|n| n != spec.n) {
            bail!(
                "--n {} does not match the scheme's n = {}",
                a.n.unwrap(),
                spec.n
            );
        }
        let report = hilbert_function(&spec, a.d, cfg.field_config)?;
        return Ok(HilbertOut {
            report,
            secant_dimension: None,
            expected_secant_dimension: None,
            predicted_exception: None,
            agrees: None,
        });
    }
    let (Some(n), Some(k)) = (a.n, a.points) else {
        bail!("hilbert needs --n and --points, or --scheme");
    };
    let report = hilbert_double_points(n, a.d, k, &cfg.sampling())?;
    let predicted = is_exception(CaseId::new(n, a.d, k)).is_some();
    let agrees = predicted == (report.verdict == Verdict::DefectiveEvidence);
    Ok(HilbertOut {
        secant_dimension: (k > 0).then(|| report.computed as i64 - 1),
        expected_secant_dimension: (k > 0).then(|| expected_secant_dimension(n, a.d, k)),
        report,
        predicted_exception: Some(predicted),
        agrees: Some(agrees),
    })
}

// sweep

/// `a`, `a..b` or `a-b`, inclusive.
pub fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>, String> {
    let parts: Vec<&str> = if s.contains("..") {
        s.splitn(2, "..").collect()
    } else {
        s.splitn(2, '-').collect()
    };
    let num = |t: &str| {
        t.trim()
            .trim_start_matches('=')
            .parse::<usize>()
            .map_err(|e| format!("{t:?}: {e}"))
    };
    match parts[..] {
        [a] => num(a).map(|v| v..=v),
        [a, b] => {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok(a..=b)
        }
        _ => Err(format!("bad range {s}")),
    }
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Ambient dimensions, e.g. `1..5`.
    #[arg(long, value_parser = parse_range)]
    pub n: std::ops::RangeInclusive<usize>,
    /// Degrees, e.g. `2..8`.
    #[arg(long, value_parser = parse_range)]
    pub d: std::ops::RangeInclusive<usize>,
}

#[derive(Serialize, Deserialize)]
pub struct SweepOut {
    pub rows: Vec<SweepRow>,
    pub disagreements: Vec<CaseId>,
    pub cache_hits: usize,
}

impl Report for SweepOut {
    fn status(&self) -> Status {
        if self.disagreements.is_empty() {
            Status::Agrees
        } else {
            Status::Disagrees
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let _ = writeln!(
                s,
                "({},{},{}) {}/{} {}{}",
                r.n,
                r.d,
                r.k,
                r.computed,
                r.expected,
                verdict_name(r.verdict),
                if r.agrees {
                    ""
                } else {
                    "  DISAGREES WITH THE EXCEPTION LIST"
                }
            );
        }
        let _ = writeln!(
            s,
            "{} cases, {} disagreements",
            self.rows.len(),
            self.disagreements.len()
        );
        s
    }

    fn csv(&self) -> Option<String> {
        Some(sweep_csv(&self.rows))
    }
}

pub fn sweep(a: &SweepArgs, cfg: &RunConfig, cache: Option<&Cache>) -> Result<SweepOut> {
    if *a.n.start() == 0 || *a.d.start() == 0 {
        bail!("n and d start at 1");
    }
    let cases = sweep_cases(a.n.clone(), a.d.clone());
    let sampling = cfg.sampling();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build()?;
    let results: Vec<Result<(SweepRow, bool)>> = pool.install(|| {
        cases
            .par_iter()
            .map(|&c| {
                let key = format!("sweep-case|{}|{}|{}|{}", c.n, c.d, c.k, cfg.key());
                if let Some(v) = cache.and_then(|ch| ch.get(&key)) {
                    if let Ok(row) = serde_json::from_value::<SweepRow>(v.clone()) {
                        return Ok((row, true));
                    }
                }
                let row = sweep_case(c, &sampling)?;
                if let Some(ch) = cache {
                    ch.append(&key, &serde_json::to_value(&row)?)?;
                }
                Ok((row, false))
            })
            .collect()
    });
    let mut rows = Vec::with_capacity(results.len());
    let mut hits = 0;
    for r in results {
        let (row, hit) = r?;
        hits += hit as usize;
        rows.push(row);
    }
    let disagreements = rows
        .iter()
        .filter(|r| !r.agrees)
        .map(SweepRow::case)
        .collect();
    Ok(SweepOut {
        rows,
        disagreements,
        cache_hits: hits,
    })
}

// verify-ah

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    /// Number of points; both critical values when omitted.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Serialize, Deserialize)]
pub struct CertificateSummary {
    pub rule: Rule,
    pub nodes: usize,
    pub check: CertificateCheck,
}

#[derive(Serialize, Deserialize)]
pub struct VerifyCase {
    pub k: usize,
    pub report: HilbertReport,
    /// The points impose independent conditions (this includes filling the space).
    pub independent: bool,
    pub predicted_exception: bool,
    pub agrees: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSummary>,
}

#[derive(Serialize, Deserialize)]
pub struct VerifyOut {
    pub n: usize,
    pub d: usize,
    pub cases: Vec<VerifyCase>,
}

impl Report for VerifyOut {
    fn status(&self) -> Status {
        let ok = self
            .cases
            .iter()
            .all(|c| c.agrees && c.certificate.as_ref().is_none_or(|s| s.check.accepted));
        if ok {
            Status::Agrees
        } else {
            Status::Disagrees
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.cases {
            let _ = write!(
                s,
                "({},{},{}) h = {}/{} {} ({})",
                self.n,
                self.d,
                c.k,
                c.report.computed,
                c.report.expected,
                if c.independent {
                    "independent"
                } else {
                    "defective"
                },
                verdict_name(c.report.verdict)
            );
            if c.predicted_exception {
                s.push_str(", a known exception");
            }
            if let Some(cert) = &c.certificate {
                let _ = write!(
                    s,
                    ", certificate {} with {} nodes {}",
                    rule_name(cert.rule),
                    cert.nodes,
                    if cert.check.accepted {
                        "accepted"
                    } else {
                        "REJECTED"
                    }
                );
            }
            s.push('\n');
        }
        s
    }

    fn csv(&self) -> Option<String> {
        let mut s = format!("{SWEEP_CSV_HEADER}\n");
        for c in &self.cases {
            s.push_str(&row_of(&c.report));
            s.push('\n');
        }
        Some(s)
    }
}

pub fn verify_ah(a: &VerifyArgs, cfg: &RunConfig) -> Result<VerifyOut> {
    if a.n == 0 || a.d == 0 {
        bail!("--n and --d must be at least 1");
    }
    let ks = match a.k {
        Some(k) => vec![k],
        None => {
            let (lo, hi) = critical_k(a.n, a.d);
            if lo == hi {
                vec![lo]
            } else {
                vec![lo, hi]
            }
        }
    };
    let checker = CertificateChecker::new(cfg.sampling());
    let mut cases = Vec::new();
    for k in ks {
        let c = CaseId::new(a.n, a.d, k);
        let report = hilbert_double_points(a.n, a.d, k, &cfg.sampling())?;
        let predicted = is_exception(c).is_some();
        let agrees = predicted == (report.verdict == Verdict::DefectiveEvidence);
        let certificate = if predicted {
            None
        } else {
            let cert = build_certificate(c)?;
            let rule = cert.node(c).map(|x| x.rule).unwrap_or(Rule::BaseRank);
            Some(CertificateSummary {
                rule,
                nodes: cert.nodes.len(),
                check: checker.check(&cert),
            })
        };
        cases.push(VerifyCase {
            k,
            independent: report.verdict != Verdict::DefectiveEvidence,
            report,
            predicted_exception: predicted,
            agrees,
            certificate,
        });
    }
    Ok(VerifyOut {
        n: a.n,
        d: a.d,
        cases,
    })
}

// certificate

#[derive(Args, Debug)]
pub struct CertificateArgs {
    #[arg(long, required_unless_present = "check")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "check")]
    pub d: Option<usize>,
    #[arg(long, required_unless_present = "check")]
    pub k: Option<usize>,
    /// Check a certificate file instead of building one.
    #[arg(long)]
    pub check: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
pub struct CertificateOut {
    pub certificate: Certificate,
    pub check: CertificateCheck,
}

impl Report for CertificateOut {
    fn status(&self) -> Status {
        if self.check.accepted {
            Status::Agrees
        } else {
            Status::Disagrees
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        for node in &self.certificate.nodes {
            let _ = write!(s, "{} {}", node.case, rule_name(node.rule));
            if let Some(u) = node.u {
                let _ = write!(s, " u={u}");
            }
            if let Some(e) = node.epsilon {
                let _ = write!(s, " epsilon={e}");
            }
            if !node.children.is_empty() {
                let kids: Vec<String> = node.children.iter().map(ToString::to_string).collect();
                let _ = write!(s, " -> {}", kids.join(" "));
            }
            s.push('\n');
        }
        match &self.check.failure {
            None => s.push_str("accepted\n"),
            Some(f) => {
                let _ = writeln!(s, "rejected at {}: {}", f.case, f.reason);
            }
        }
        s
    }
}

pub fn certificate_key(a: &CertificateArgs) -> Result<String> {
    Ok(match &a.check {
        Some(path) => {
            let digest = Sha256::digest(
                std::fs::read(path).with_context(|| format!("reading {}", path.display()))?,
            );
            let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
            format!("certificate|file={hex}")
        }
        None => format!("certificate|{:?}|{:?}|{:?}", a.n, a.d, a.k),
    })
}

pub fn certificate(a: &CertificateArgs, cfg: &RunConfig) -> Result<CertificateOut> {
    let cert = match &a.check {
        Some(path) => {
            let raw = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<Certificate>(&raw)
                .map_err(|e| anyhow!("malformed certificate file: {e}"))?
        }
        None => build_certificate(CaseId::new(a.n.unwrap(), a.d.unwrap(), a.k.unwrap()))?,
    };
    let check = CertificateChecker::new(cfg.sampling()).check(&cert);
    Ok(CertificateOut {
        certificate: cert,
        check,
    })
}

// witness

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(long, required_unless_present = "quartic")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "quartic")]
    pub d: Option<usize>,
    #[arg(long, required_unless_present = "quartic")]
    pub k: Option<usize>,
    /// Evaluate the catalecticant determinant of a quartic form file instead.
    #[arg(long, conflicts_with_all = ["n", "d", "k"])]
    pub quartic: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
pub struct WitnessOut {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalecticant_determinant: Option<String>,
}

impl Report for WitnessOut {
    fn status(&self) -> Status {
        match &self.witness {
            Some(w) if !w.verified => Status::Disagrees,
            _ => Status::Agrees,
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        if let Some(w) = &self.witness {
            let _ = writeln!(s, "witness of degree {}: {}", w.form.d(), w.form);
            for c in &w.checks {
                let _ = writeln!(
                    s,
                    "  [{}] {}",
                    if c.holds { "ok" } else { "FAILED" },
                    c.name
                );
            }
            let _ = writeln!(s, "  dim I(d) at these points: {}", w.ideal_dim);
        }
        if let Some(det) = &self.catalecticant_determinant {
            let _ = writeln!(s, "catalecticant determinant: {det}");
        }
        s
    }
}

pub fn witness_key(a: &WitnessArgs) -> Result<String> {
    Ok(match &a.quartic {
        Some(path) => {
            let digest = Sha256::digest(
                std::fs::read(path).with_context(|| format!("reading {}", path.display()))?,
            );
            let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
            format!("witness|quartic={hex}")
        }
        None => format!("witness|{:?}|{:?}|{:?}", a.n, a.d, a.k),
    })
}

pub fn witness(a: &WitnessArgs, cfg: &RunConfig) -> Result<WitnessOut> {
    if let Some(path) = &a.quartic {
        let raw =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let f: Form =
            serde_json::from_str(&raw).map_err(|e| anyhow!("malformed form file: {e}"))?;
        return Ok(WitnessOut {
            witness: None,
            catalecticant_determinant: Some(clebsch_determinant(&f)?.to_string()),
        });
    }
    let c = CaseId::new(a.n.unwrap(), a.d.unwrap(), a.k.unwrap());
    if is_exception(c).is_none() {
        bail!("{c} is not one of the defective cases; there is nothing to witness");
    }
    Ok(WitnessOut {
        witness: Some(exception_witness(c, cfg.seed)?),
        catalecticant_determinant: None,
    })
}

// sylvester

#[derive(Args, Debug)]
pub struct SylvesterArgs {
    /// Coefficients a_0,...,a_d of f = sum C(d,i) a_i x^(d-i) y^i; integers or fractions.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Vec<String>,
    /// Decompose an odd-degree form into powers of linear forms.
    #[arg(long)]
    pub decompose: bool,
    /// Test membership in the k-th secant variety of the rational normal curve.
    #[arg(long)]
    pub membership: Option<usize>,
}

#[derive(Serialize, Deserialize)]
pub struct Membership {
    pub k: usize,
    pub member: bool,
}

#[derive(Serialize, Deserialize)]
pub struct SylvesterOut {
    pub form: BinaryForm,
    pub balanced_hankel_rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covariant: Option<BinaryForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership: Option<Membership>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Decomposition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<String>,
}

impl Report for SylvesterOut {
    fn text(&self) -> String {
        let mut s = format!(
            "degree {} form, balanced Hankel rank {}\n",
            self.form.d, self.balanced_hankel_rank
        );
        if let Some(g) = &self.covariant {
            let _ = writeln!(s, "covariant g = {}", g.to_form());
        }
        if let Some(m) = &self.membership {
            let _ = writeln!(s, "in sigma_{}: {}", m.k, m.member);
        }
        if let Some(dec) = &self.decomposition {
            for t in &dec.terms {
                let _ = writeln!(
                    s,
                    "  {} * ({} x + {} y)^{}",
                    t.c, t.form[0], t.form[1], dec.d
                );
            }
            let _ = writeln!(
                s,
                "residual {:e}{}",
                dec.residual,
                if dec.exact { " (exact)" } else { "" }
            );
        }
        if let Some(why) = &self.degenerate {
            let _ = writeln!(s, "degenerate: {why}");
        }
        s
    }
}

pub fn sylvester_key(a: &SylvesterArgs) -> String {
    format!(
        "sylvester|{}|{}|{:?}",
        a.coeffs.join(","),
        a.decompose,
        a.membership
    )
}

pub fn sylvester(a: &SylvesterArgs, cfg: &RunConfig) -> Result<SylvesterOut> {
    if a.coeffs.is_empty() {
        bail!("--coeffs is required");
    }
    let coeffs = a
        .coeffs
        .iter()
        .map(|c| parse_rational(c.trim()).map_err(|e| anyhow!("coefficient {c:?}: {e}")))
        .collect::<Result<Vec<_>>>()?;
    let f = BinaryForm::new(coeffs)?;
    let rank = hankel(&f, f.d / 2)?.rank();
    let covariant = if f.d % 2 == 1 {
        Some(sylvester_g(&f)?)
    } else {
        None
    };
    let membership = a.membership.map(|k| Membership {
        k,
        member: membership_sigma_k(&f, k),
    });
    let (decomposition, degenerate) = if a.decompose {
        if f.d % 2 == 0 {
            bail!("--decompose needs an odd degree, got {}", f.d);
        }
        match decompose_odd(&f, cfg.tol) {
            Ok(dec) => (Some(dec), None),
            Err(ahlab_core::Error::Degenerate(why)) => (None, Some(why)),
            Err(e) => return Err(e.into()),
        }
    } else {
        (None, None)
    };
    Ok(SylvesterOut {
        form: f,
        balanced_hankel_rank: rank,
        covariant,
        membership,
        decomposition,
        degenerate,
    })
}
