//! JSON reports and plain-text tables for command output.

use std::fmt::Write as _;

use serde::Serialize;
use sinecone_core::exactreal::QuadReal;
use sinecone_core::radial::{ModeReport, VerificationReport};
use sinecone_core::rigidity::{IedCertificate, ScanRow, ScanStatus};
use sinecone_core::spectra::Spectrum;
use sinecone_core::stability::{CrossCheck, Discrepancy, StabilityReport, Verdict};
use sinecone_core::symcheck::{DecompositionReport, SymReport};

use crate::json::{DetailedSpectrumJson, OriginJson, QuadJson};

/// `exact (≈ decimal)` for tables.
pub fn exact_and_decimal(q: &QuadReal) -> (String, String) {
    (q.to_string(), q.to_decimal(6))
}

/// Left-aligned text table.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(header.to_vec(), &mut out);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(rule.iter().map(String::as_str).collect(), &mut out);
    for r in rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

pub fn spectrum_table(title: &str, s: &Spectrum) -> String {
    let rows: Vec<Vec<String>> = s
        .lines()
        .iter()
        .map(|l| {
            let (exact, dec) = exact_and_decimal(&l.value);
            let origins: Vec<String> = l
                .origins
                .iter()
                .map(|o| format!("{}[{},{}]x{}", o.family.as_str(), o.index, o.shift, o.multiplicity))
                .collect();
            vec![exact, dec, l.multiplicity.to_string(), origins.join(" ")]
        })
        .collect();
    let (c, cd) = exact_and_decimal(s.cutoff());
    format!(
        "{title} (complete up to {c} = {cd})\n{}",
        table(&["value", "decimal", "mult", "origins"], &rows)
    )
}

#[derive(Serialize)]
pub struct NamedSpectrumJson {
    pub name: &'static str,
    #[serde(flatten)]
    pub spectrum: DetailedSpectrumJson,
}

pub fn named(name: &'static str, s: &Spectrum) -> NamedSpectrumJson {
    NamedSpectrumJson {
        name,
        spectrum: DetailedSpectrumJson::from(s),
    }
}

#[derive(Serialize)]
pub struct VerdictJson {
    pub notion: &'static str,
    pub verdict: &'static str,
    pub strict: bool,
    pub witness_value: Option<QuadJson>,
    pub witness_decimal: Option<String>,
    pub witness_spectrum: Option<&'static str>,
    pub witness_origin: Option<OriginJson>,
}

fn verdict_json(notion: &'static str, v: &Verdict) -> VerdictJson {
    VerdictJson {
        notion,
        verdict: if v.stable { "stable" } else { "unstable" },
        strict: v.strict,
        witness_value: v.witness.as_ref().map(|w| QuadJson(w.value.clone())),
        witness_decimal: v.witness.as_ref().map(|w| w.value.to_decimal(6)),
        witness_spectrum: v.witness.as_ref().map(|w| w.spectrum),
        witness_origin: v.witness.as_ref().and_then(|w| w.origin.as_ref()).map(OriginJson::from),
    }
}

#[derive(Serialize)]
pub struct ThresholdJson {
    pub name: &'static str,
    pub value: QuadJson,
}

#[derive(Serialize)]
pub struct StabilityJson {
    pub n: u32,
    pub notions: Vec<VerdictJson>,
    pub thresholds: Vec<ThresholdJson>,
}

pub fn stability_json(r: &StabilityReport) -> StabilityJson {
    StabilityJson {
        n: r.n,
        notions: r.notions().iter().map(|(name, v)| verdict_json(name, v)).collect(),
        thresholds: r
            .thresholds
            .iter()
            .map(|(name, v)| ThresholdJson {
                name,
                value: QuadJson(v.clone()),
            })
            .collect(),
    }
}

pub fn stability_table(title: &str, r: &StabilityReport) -> String {
    let rows: Vec<Vec<String>> = r
        .notions()
        .iter()
        .map(|(name, v)| {
            let (w, wd, ws) = match &v.witness {
                Some(w) => {
                    let (e, d) = exact_and_decimal(&w.value);
                    (e, d, w.spectrum.to_string())
                }
                None => ("-".into(), "-".into(), "-".into()),
            };
            vec![
                name.to_string(),
                if v.stable { "stable" } else { "unstable" }.to_string(),
                v.strict.to_string(),
                w,
                wd,
                ws,
            ]
        })
        .collect();
    format!(
        "{title} (n = {})\n{}",
        r.n,
        table(&["notion", "verdict", "strict", "witness", "decimal", "spectrum"], &rows)
    )
}

#[derive(Serialize)]
pub struct DiscrepancyJson {
    pub notion: &'static str,
    pub strict: bool,
    pub predicted: bool,
    pub direct: bool,
}

impl From<&Discrepancy> for DiscrepancyJson {
    fn from(d: &Discrepancy) -> Self {
        DiscrepancyJson {
            notion: d.notion,
            strict: d.strict,
            predicted: d.predicted,
            direct: d.direct,
        }
    }
}

#[derive(Serialize)]
pub struct StabilityOutput {
    pub base: StabilityJson,
    pub cone_predicted: Option<StabilityJson>,
    pub cone_direct: Option<StabilityJson>,
    pub consistent: Option<bool>,
    pub discrepancies: Vec<DiscrepancyJson>,
}

pub fn stability_output(base: &StabilityReport, cc: Option<&CrossCheck>) -> StabilityOutput {
    StabilityOutput {
        base: stability_json(base),
        cone_predicted: cc.map(|c| stability_json(&c.predicted)),
        cone_direct: cc.map(|c| stability_json(&c.direct)),
        consistent: cc.map(CrossCheck::consistent),
        discrepancies: cc
            .map(|c| c.discrepancies.iter().map(DiscrepancyJson::from).collect())
            .unwrap_or_default(),
    }
}

#[derive(Serialize)]
pub struct CertificateJson {
    pub kappa: QuadJson,
    pub j: u64,
    pub bounded: bool,
    pub multiplicity: u64,
}

impl From<&IedCertificate> for CertificateJson {
    fn from(c: &IedCertificate) -> Self {
        CertificateJson {
            kappa: QuadJson(c.kappa.clone()),
            j: c.j,
            bounded: c.bounded,
            multiplicity: c.multiplicity,
        }
    }
}

pub fn certificates_table(certs: &[IedCertificate]) -> String {
    let rows: Vec<Vec<String>> = certs
        .iter()
        .map(|c| {
            let (k, kd) = exact_and_decimal(&c.kappa);
            vec![
                k,
                kd,
                c.j.to_string(),
                c.multiplicity.to_string(),
                if c.bounded { "bounded" } else { "unbounded L2" }.to_string(),
            ]
        })
        .collect();
    table(&["kappa", "decimal", "j", "mult", "profile"], &rows)
}

#[derive(Serialize)]
pub struct ScanRowJson {
    pub n: u32,
    pub kappa: QuadJson,
    pub m: Option<QuadJson>,
    pub pythagorean_radicand: i64,
    pub status: &'static str,
    pub certificates: Vec<CertificateJson>,
}

fn status_str(row: &ScanRow) -> &'static str {
    match &row.status {
        ScanStatus::UnboundedBelow => "unbounded_below",
        ScanStatus::Ieds(c) if !c.is_empty() => "ied",
        ScanStatus::Ieds(_) => "rigid",
    }
}

impl From<&ScanRow> for ScanRowJson {
    fn from(r: &ScanRow) -> Self {
        let certificates = match &r.status {
            ScanStatus::Ieds(c) => c.iter().map(CertificateJson::from).collect(),
            ScanStatus::UnboundedBelow => Vec::new(),
        };
        ScanRowJson {
            n: r.n,
            kappa: QuadJson(r.kappa.clone()),
            m: r.m.clone().map(QuadJson),
            pythagorean_radicand: r.pythagorean_radicand,
            status: status_str(r),
            certificates,
        }
    }
}

pub fn scan_table(rows: &[ScanRow]) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let m = r.m.as_ref().map_or("-".to_string(), ToString::to_string);
            let detail = match &r.status {
                ScanStatus::UnboundedBelow => "kappa below -(n-1)^2/4".to_string(),
                ScanStatus::Ieds(c) if !c.is_empty() => c
                    .iter()
                    .map(|c| format!("j={} mult={}", c.j, c.multiplicity))
                    .collect::<Vec<_>>()
                    .join(", "),
                ScanStatus::Ieds(_) => "xi not a nonpositive integer".to_string(),
            };
            vec![
                r.n.to_string(),
                r.kappa.to_string(),
                m,
                r.pythagorean_radicand.to_string(),
                status_str(r).to_string(),
                detail,
            ]
        })
        .collect();
    table(&["n", "kappa", "xi_n(kappa)", "(n-9)(n-1)", "status", "detail"], &body)
}

#[derive(Serialize)]
pub struct ModeJson {
    pub mode: u64,
    pub target: f64,
    pub computed: f64,
    pub rel_error: f64,
    #[serde(rename = "N")]
    pub grid_points: usize,
    pub eps: f64,
}

impl From<&ModeReport> for ModeJson {
    fn from(m: &ModeReport) -> Self {
        ModeJson {
            mode: m.mode,
            target: m.target,
            computed: m.computed,
            rel_error: m.rel_error,
            grid_points: m.grid_points,
            eps: m.eps,
        }
    }
}

#[derive(Serialize)]
pub struct RadialJson {
    pub n: u32,
    pub block: &'static str,
    pub coupling: QuadJson,
    pub tol: f64,
    pub passed: bool,
    pub modes: Vec<ModeJson>,
}

pub fn radial_json(r: &VerificationReport) -> RadialJson {
    RadialJson {
        n: r.n,
        block: r.block.as_str(),
        coupling: QuadJson(r.coupling.clone()),
        tol: r.tol,
        passed: r.passed(),
        modes: r.modes.iter().map(ModeJson::from).collect(),
    }
}

pub fn radial_table(r: &VerificationReport) -> String {
    let rows: Vec<Vec<String>> = r
        .modes
        .iter()
        .map(|m| {
            vec![
                m.mode.to_string(),
                format!("{:.6}", m.target),
                format!("{:.6}", m.computed),
                format!("{:.3e}", m.rel_error),
                if m.rel_error < r.tol { "ok" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    format!(
        "radial {} block, n = {}, coupling {} (tol {:e})\n{}",
        r.block.as_str(),
        r.n,
        r.coupling,
        r.tol,
        table(&["j", "target", "computed", "error", "status"], &rows)
    )
}

#[derive(Serialize)]
pub struct QuotientJson {
    pub eps: f64,
    pub quotient: f64,
    pub scaled: f64,
}

pub fn quotient_rows(eps: &[f64], q: &[f64]) -> Vec<QuotientJson> {
    eps.iter()
        .zip(q)
        .map(|(&e, &v)| QuotientJson {
            eps: e,
            quotient: v,
            scaled: v * e * e,
        })
        .collect()
}

/// CSV dump of a quotient sequence: `eps,quotient,eps2_quotient`.
pub fn quotient_csv(rows: &[QuotientJson]) -> String {
    let mut out = String::from("eps,quotient,eps2_quotient\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.eps, r.quotient, r.scaled);
    }
    out
}

#[derive(Serialize)]
pub struct IdentityJson {
    pub identity: String,
    pub context: String,
    pub residual_zero: bool,
    pub residual: String,
}

#[derive(Serialize)]
pub struct DecompositionJson {
    pub n: u32,
    pub k: u64,
    pub j: u64,
    pub dim_family: usize,
    pub dim_harmonic: usize,
    pub dim_lower: usize,
    pub rank: usize,
}

impl From<&DecompositionReport> for DecompositionJson {
    fn from(d: &DecompositionReport) -> Self {
        DecompositionJson {
            n: d.n,
            k: d.k,
            j: d.j,
            dim_family: d.dim_family,
            dim_harmonic: d.dim_harmonic,
            dim_lower: d.dim_lower,
            rank: d.rank,
        }
    }
}

#[derive(Serialize)]
pub struct SymbolicJson {
    pub passed: bool,
    pub identities_checked: usize,
    pub families: Vec<HarmonicJson>,
    pub decompositions: Vec<DecompositionJson>,
    pub identities: Vec<IdentityJson>,
}

#[derive(Serialize)]
pub struct HarmonicJson {
    pub n: u32,
    pub k: u64,
    pub j: u64,
    pub basis: String,
}

pub fn identities_json(reports: &[SymReport]) -> Vec<IdentityJson> {
    reports
        .iter()
        .flat_map(|r| r.results.iter())
        .map(|r| IdentityJson {
            identity: r.identity.clone(),
            context: r.context.clone(),
            residual_zero: r.holds(),
            residual: r.residual.to_string(),
        })
        .collect()
}
