//! Command-line driver.
//!
//! Exit codes: 0 success, 1 other runtime error, 2 verification failure,
//! 3 operator unbounded below, 4 bad input or usage. Errors are also written
//! to stderr as one JSON object.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sinecone_core::conemaps::{
    iterate, map_einstein_with, map_functions_with, map_one_forms_with, map_tt_block_with,
    required_base_cutoff, ConeError, MapOptions,
};
use sinecone_core::exactreal::QuadReal;
use sinecone_core::radial::{
    closed_form_targets, rayleigh_unbounded_demo, verify_line, verify_targets, Block, BumpProfile,
    RadialError, RadialProblem,
};
use sinecone_core::rigidity::{find_ieds, product_rigidity_scan, RigidityError};
use sinecone_core::spectra::{hardy_bound, Spectrum};
use sinecone_core::stability::{classify, cross_check, StabilityError};
use sinecone_core::symcheck::{
    build_harmonic_family, check_commutators, verify_decomposition, verify_formulas1,
    verify_formulas2, verify_formulas3, DegreeBox, SymError, SymReport,
};

use crate::files::{resolve_input, save_geometric_spectrum, to_json_string, LoadError, Loaded};
use crate::json::{parse_quad, QuadJson};
use crate::report::{self, NamedSpectrumJson};

#[derive(Parser, Debug)]
#[command(name = "sinecone", version, about = "Spectra, stability and rigidity of sine-cones")]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Operator {
    Laplace,
    OneForms,
    Einstein,
    Tt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BlockArg {
    Function,
    Tt,
}

impl From<BlockArg> for Block {
    fn from(b: BlockArg) -> Block {
        match b {
            BlockArg::Function => Block::Function,
            BlockArg::Tt => Block::Tt,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Spectrum of an operator on the sine-cone over a base
    Spectrum {
        /// Spectra file, or built-in `sphere:N` / `product:AxB`
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = Operator::Laplace)]
        operator: Operator,
        /// Integer, p/q, or QuadReal JSON
        #[arg(long, value_parser = parse_quad, allow_hyphen_values = true)]
        cutoff: QuadReal,
        /// Apply the main-case formulas to bases with small first eigenvalues
        #[arg(long)]
        allow_outside_hypotheses: bool,
        /// Treat Laplace eigenvalues below n as errors instead of warnings
        #[arg(long)]
        strict_obata: bool,
    },
    /// Stability of the base, predicted and computed stability of the cone
    Stability {
        #[arg(long)]
        input: String,
        /// Cutoff for the computed cone spectra; default 2(n+2)
        #[arg(long, value_parser = parse_quad, allow_hyphen_values = true)]
        cutoff: Option<QuadReal>,
        #[arg(long)]
        strict_obata: bool,
    },
    /// Infinitesimal Einstein deformations of the cone
    Rigidity {
        #[arg(long)]
        input: String,
        #[arg(long)]
        strict_obata: bool,
    },
    /// Finite-difference check of the radial eigenvalue formulas
    VerifyRadial {
        /// Base spectra; the value must then be one of its lines
        #[arg(long)]
        input: Option<String>,
        /// Base dimension when no input is given
        #[arg(long = "n")]
        dim: Option<u32>,
        #[arg(long, value_enum, default_value_t = BlockArg::Function)]
        block: BlockArg,
        /// Base eigenvalue feeding the radial problem
        #[arg(long, value_parser = parse_quad, allow_hyphen_values = true)]
        value: Option<QuadReal>,
        #[arg(long, default_value_t = 4)]
        modes: usize,
        #[arg(long = "n-grid", default_value_t = 4000)]
        n_grid: usize,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Explicit targets instead of the closed forms
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        targets: Option<Vec<f64>>,
        /// Run the Rayleigh quotient blow-up demo for this TT value instead
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.4,0.2,0.1,0.05")]
        epsilons: Vec<f64>,
        /// Write the quotient sequence as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact checks of the polynomial identities behind the eigenvalue formulas
    VerifySymbolic {
        #[arg(long = "n", default_value_t = 3)]
        dim: u32,
        /// Largest sphere degree k
        #[arg(long, default_value_t = 2)]
        k: u64,
        #[arg(long, default_value_t = 4)]
        jmax: u64,
    },
    /// Iterated sine-cone spectra
    Iterate {
        #[arg(long)]
        input: String,
        #[arg(long)]
        iterations: u32,
        #[arg(long, value_parser = parse_quad, allow_hyphen_values = true)]
        cutoff: QuadReal,
        /// Also save the result as a spectra file
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        allow_outside_hypotheses: bool,
    },
    /// IED scan over products with strictly stable factors
    ScanProducts {
        #[arg(long, default_value_t = 4)]
        from: u32,
        #[arg(long, default_value_t = 20)]
        to: u32,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    fn new(code: i32, kind: &'static str, message: impl ToString) -> Self {
        CliError {
            code,
            kind,
            message: message.to_string(),
        }
    }
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    message: &'a str,
    exit_code: i32,
}

#[derive(Serialize)]
struct WarningJson {
    warning: &'static str,
    message: String,
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        let kind = match e {
            LoadError::Io { .. } => "io",
            LoadError::Parse { .. } => "parse",
            LoadError::InvariantViolation { .. } => "invariant_violation",
            LoadError::UnknownInput(_) => "unknown_input",
        };
        CliError::new(4, kind, e)
    }
}

impl From<ConeError> for CliError {
    fn from(e: ConeError) -> Self {
        let (code, kind) = match e {
            ConeError::UnboundedBelow { .. } => (3, "unbounded_below"),
            ConeError::InsufficientBaseCutoff { .. } => (1, "insufficient_cutoff"),
            ConeError::OutsideHypotheses { .. } => (4, "outside_hypotheses"),
            ConeError::BelowHardyBound { .. } => (4, "below_hardy_bound"),
            ConeError::DimensionTooSmall { .. } => (4, "dimension_too_small"),
            ConeError::NotNormalized => (4, "not_normalized"),
            ConeError::Exact(_) => (1, "exact_arithmetic"),
        };
        CliError::new(code, kind, e)
    }
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        match e {
            StabilityError::Cone(c) => c.into(),
            StabilityError::InsufficientCutoff { .. } => CliError::new(1, "insufficient_cutoff", e),
            StabilityError::NotNormalized => CliError::new(4, "not_normalized", e),
        }
    }
}

impl From<RigidityError> for CliError {
    fn from(e: RigidityError) -> Self {
        let (code, kind) = match e {
            RigidityError::UnboundedBelow { .. } => (3, "unbounded_below"),
            RigidityError::InvalidRange { .. } => (4, "invalid_range"),
            RigidityError::SolverDisagreement { .. } => (1, "solver_disagreement"),
        };
        CliError::new(code, kind, e)
    }
}

impl From<RadialError> for CliError {
    fn from(e: RadialError) -> Self {
        let (code, kind) = match e {
            RadialError::VerificationFailed(_) => (2, "verification_failed"),
            RadialError::IllPosed { .. } => (3, "unbounded_below"),
            RadialError::ConvergenceFailure { .. } => (1, "convergence_failure"),
            RadialError::InvalidGrid { .. } => (4, "invalid_grid"),
            RadialError::DimensionTooSmall { .. } => (4, "dimension_too_small"),
            RadialError::NotALine { .. } => (4, "not_a_line"),
        };
        CliError::new(code, kind, e)
    }
}

impl From<SymError> for CliError {
    fn from(e: SymError) -> Self {
        let (code, kind) = match e {
            SymError::InvalidParameters(_) => (4, "invalid_parameters"),
            SymError::IdentityFailed { .. } => (2, "identity_failed"),
            SymError::DimensionMismatch { .. } => (2, "dimension_mismatch"),
            SymError::DecompositionFailed { .. } => (2, "decomposition_failed"),
        };
        CliError::new(code, kind, e)
    }
}

/// Result of a command: text for stdout, warnings, and the exit code.
struct Output {
    stdout: String,
    warnings: Vec<WarningJson>,
    code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            stdout,
            warnings: Vec::new(),
            code: 0,
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports always serialize");
    s.push('\n');
    s
}

fn ceil_integer(q: &QuadReal) -> QuadReal {
    let c = QuadReal::integer(q.to_f64().ceil() as i64);
    if &c < q {
        c.add_rational(&sinecone_core::exactreal::int(1))
    } else {
        c
    }
}

/// Cutoff for a built-in sphere so that `steps` cone steps reach `cutoff`
/// in every block.
fn sphere_cutoff_for(name: &str, cutoff: &QuadReal, steps: u32) -> QuadReal {
    let n = name
        .strip_prefix("sphere:")
        .and_then(|s| s.parse::<u32>().ok())
        .unwrap_or(2)
        .max(2);
    let mut level = ceil_integer(cutoff);
    for step in (0..steps).rev() {
        let dim = n + step;
        let need = required_base_cutoff(dim, &level, 2 * dim as i64).unwrap_or(level.clone());
        level = ceil_integer(&std::cmp::max(need, level));
    }
    level
}

fn load(name: &str, cutoff: &QuadReal, steps: u32, strict_obata: bool) -> Result<Loaded, CliError> {
    let sphere_cutoff = sphere_cutoff_for(name, cutoff, steps);
    Ok(resolve_input(name, &sphere_cutoff, strict_obata)?)
}

fn warnings_of(loaded: &Loaded) -> Vec<WarningJson> {
    loaded
        .warnings
        .iter()
        .map(|w| WarningJson {
            warning: "input",
            message: w.to_string(),
        })
        .collect()
}

#[derive(Serialize)]
struct SpectrumOutput {
    base_dimension: u32,
    cone_dimension: u32,
    operator: &'static str,
    outside_hypotheses: bool,
    blocks: Vec<NamedSpectrumJson>,
}

fn cmd_spectrum(
    input: &str,
    operator: Operator,
    cutoff: &QuadReal,
    allow: bool,
    strict_obata: bool,
    format: Format,
) -> Result<Output, CliError> {
    let loaded = load(input, cutoff, 1, strict_obata)?;
    let base = &loaded.spectrum;
    let opts = MapOptions {
        allow_outside_hypotheses: allow,
    };
    let (name, outside, blocks): (&'static str, bool, Vec<(&'static str, Spectrum)>) = match operator {
        Operator::Laplace => {
            let s = map_functions_with(base, cutoff, opts)?;
            ("laplace", s.outside_hypotheses, vec![("functions", s.spectrum)])
        }
        Operator::OneForms => {
            let s = map_one_forms_with(base, cutoff, opts)?;
            (
                "one-forms",
                s.outside_hypotheses,
                vec![("exact", s.exact_part), ("coclosed", s.coclosed_part)],
            )
        }
        Operator::Einstein => {
            let s = map_einstein_with(base, cutoff, opts)?;
            (
                "einstein",
                s.outside_hypotheses,
                vec![
                    ("conformal", s.conformal_block),
                    ("delta_star", s.delta_star_block),
                    ("tt", s.tt_block),
                ],
            )
        }
        Operator::Tt => {
            let s = map_tt_block_with(base, cutoff, opts)?;
            let outside = allow && !loaded.warnings.is_empty();
            ("tt", outside, vec![("tt", s)])
        }
    };
    let stdout = match format {
        Format::Json => to_json(&SpectrumOutput {
            base_dimension: base.n,
            cone_dimension: base.n + 1,
            operator: name,
            outside_hypotheses: outside,
            blocks: blocks.iter().map(|(b, s)| report::named(b, s)).collect(),
        }),
        Format::Table => {
            let mut out = format!("sine-cone over {input}: dimension {}, operator {name}\n", base.n + 1);
            if outside {
                out.push_str("note: base outside the main-case hypotheses; formulas applied anyway\n");
            }
            for (b, s) in &blocks {
                out.push('\n');
                out.push_str(&report::spectrum_table(b, s));
            }
            out
        }
    };
    Ok(Output {
        stdout,
        warnings: warnings_of(&loaded),
        code: 0,
    })
}

fn cmd_stability(input: &str, cutoff: Option<QuadReal>, strict_obata: bool, format: Format) -> Result<Output, CliError> {
    // the base dimension is needed for the default; a sphere needs none
    let probe = load(input, &QuadReal::integer(0), 1, strict_obata)?;
    let n = probe.spectrum.n;
    let cutoff = cutoff.unwrap_or_else(|| QuadReal::integer(2 * (n as i64 + 2)));
    let loaded = load(input, &cutoff, 1, strict_obata)?;
    let base = classify(&loaded.spectrum)?;
    let cc = cross_check(&loaded.spectrum, &cutoff)?;
    let consistent = cc.consistent();
    let stdout = match format {
        Format::Json => to_json(&report::stability_output(&base, Some(&cc))),
        Format::Table => {
            let mut out = report::stability_table("base", &base);
            out.push('\n');
            out.push_str(&report::stability_table("cone, predicted from base", &cc.predicted));
            out.push('\n');
            out.push_str(&report::stability_table("cone, computed spectra", &cc.direct));
            if consistent {
                out.push_str("\nprediction and direct classification agree\n");
            } else {
                for d in &cc.discrepancies {
                    out.push_str(&format!(
                        "\nDISCREPANCY {} (strict {}): predicted {}, direct {}",
                        d.notion, d.strict, d.predicted, d.direct
                    ));
                }
                out.push('\n');
            }
            out
        }
    };
    Ok(Output {
        stdout,
        warnings: warnings_of(&loaded),
        code: if consistent { 0 } else { 2 },
    })
}

#[derive(Serialize)]
struct RigidityOutput {
    n: u32,
    hardy_bound: QuadJson,
    rigid: bool,
    certificates: Vec<report::CertificateJson>,
}

fn cmd_rigidity(input: &str, strict_obata: bool, format: Format) -> Result<Output, CliError> {
    let loaded = load(input, &QuadReal::integer(0), 1, strict_obata)?;
    let certs = find_ieds(&loaded.spectrum)?;
    let n = loaded.spectrum.n;
    let stdout = match format {
        Format::Json => to_json(&RigidityOutput {
            n,
            hardy_bound: QuadJson(hardy_bound(n)),
            rigid: certs.is_empty(),
            certificates: certs.iter().map(report::CertificateJson::from).collect(),
        }),
        Format::Table => {
            if certs.is_empty() {
                format!("sine-cone over {input}: no infinitesimal Einstein deformations\n")
            } else {
                format!(
                    "sine-cone over {input}: {} infinitesimal Einstein deformation source(s)\n{}",
                    certs.len(),
                    report::certificates_table(&certs)
                )
            }
        }
    };
    Ok(Output {
        stdout,
        warnings: warnings_of(&loaded),
        code: 0,
    })
}

#[derive(Serialize)]
struct RayleighOutput {
    n: u32,
    kappa: f64,
    hardy_bound: f64,
    profile_ratio: f64,
    strictly_decreasing: bool,
    rows: Vec<report::QuotientJson>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify_radial(
    input: Option<&str>,
    dim: Option<u32>,
    block: Block,
    value: Option<QuadReal>,
    modes: usize,
    n_grid: usize,
    eps: f64,
    tol: f64,
    targets: Option<Vec<f64>>,
    kappa: Option<f64>,
    epsilons: &[f64],
    csv: Option<&PathBuf>,
    format: Format,
) -> Result<Output, CliError> {
    if let Some(kappa) = kappa {
        let n = dim.ok_or_else(|| CliError::new(4, "usage", "the Rayleigh demo needs --n"))?;
        if n < 2 {
            return Err(CliError::new(4, "usage", "the Rayleigh demo needs --n >= 2"));
        }
        if epsilons.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
            return Err(CliError::new(4, "usage", "epsilons must lie in (0, 1)"));
        }
        let q = rayleigh_unbounded_demo(n, kappa, epsilons);
        let rows = report::quotient_rows(epsilons, &q);
        if let Some(path) = csv {
            std::fs::write(path, report::quotient_csv(&rows))
                .map_err(|e| CliError::new(1, "io", format!("{}: {e}", path.display())))?;
        }
        let decreasing = q.windows(2).all(|w| w[1] < w[0]);
        let bound = hardy_bound(n).to_f64();
        let out = RayleighOutput {
            n,
            kappa,
            hardy_bound: bound,
            profile_ratio: BumpProfile::for_dimension(n).hardy_ratio,
            strictly_decreasing: decreasing,
            rows,
        };
        let stdout = match format {
            Format::Json => to_json(&out),
            Format::Table => {
                let body: Vec<Vec<String>> = out
                    .rows
                    .iter()
                    .map(|r| vec![r.eps.to_string(), format!("{:.6}", r.quotient), format!("{:.6}", r.scaled)])
                    .collect();
                format!(
                    "Rayleigh quotients, n = {n}, kappa = {kappa} (bound {bound}); strictly decreasing: {decreasing}\n{}",
                    report::table(&["eps", "quotient", "eps^2*quotient"], &body)
                )
            }
        };
        // below the bound the quotients must fall; above it nothing is claimed
        let code = if kappa < bound && !decreasing { 2 } else { 0 };
        return Ok(Output {
            stdout,
            warnings: Vec::new(),
            code,
        });
    }

    let value = value.ok_or_else(|| CliError::new(4, "usage", "verify-radial needs --value (or --kappa)"))?;
    let mut warnings = Vec::new();
    let result = match (input, targets) {
        (Some(name), None) => {
            let loaded = load(name, &value, 1, false)?;
            warnings = warnings_of(&loaded);
            verify_line(&loaded.spectrum, block, &value, modes, tol, n_grid, eps)
        }
        (input, targets) => {
            let n = match input {
                Some(name) => load(name, &value, 1, false)?.spectrum.n,
                None => dim.ok_or_else(|| CliError::new(4, "usage", "verify-radial needs --input or --n"))?,
            };
            let p = RadialProblem::new(n, value.clone(), block).with_grid(n_grid, eps);
            let targets = match targets {
                Some(t) => t,
                None => closed_form_targets(n, &value, modes)?.iter().map(QuadReal::to_f64).collect(),
            };
            verify_targets(&p, &targets, tol)
        }
    };
    let (r, code) = match result {
        Ok(r) => (r, 0),
        Err(RadialError::VerificationFailed(r)) => (r, 2),
        Err(e) => return Err(e.into()),
    };
    let stdout = match format {
        Format::Json => to_json(&report::radial_json(&r)),
        Format::Table => report::radial_table(&r),
    };
    Ok(Output { stdout, warnings, code })
}

fn cmd_verify_symbolic(n: u32, k_max: u64, j_max: u64, format: Format) -> Result<Output, CliError> {
    if n < 2 {
        return Err(CliError::new(4, "invalid_parameters", "need n >= 2"));
    }
    let mut reports: Vec<SymReport> = Vec::new();
    let bx = DegreeBox {
        p_min: -6,
        p_max: 6,
        q_max: 6,
    };
    reports.push(check_commutators(n, bx)?);
    let mut families = Vec::new();
    let mut decompositions = Vec::new();
    for k in 0..=k_max {
        for j in 0..=j_max {
            let h = build_harmonic_family(n, k, j)?;
            families.push(report::HarmonicJson {
                n,
                k,
                j,
                basis: h.to_string(),
            });
            decompositions.push(report::DecompositionJson::from(&verify_decomposition(n, k, j)?));
        }
    }
    for k in 1..=k_max {
        for j in 0..=j_max {
            reports.push(verify_formulas1(n, k, j)?);
            if k >= 2 {
                reports.push(verify_formulas2(n, k, j)?);
                reports.push(verify_formulas3(n, k, j)?);
            }
        }
    }
    let identities = report::identities_json(&reports);
    let passed = identities.iter().all(|i| i.residual_zero);
    let stdout = match format {
        Format::Json => to_json(&report::SymbolicJson {
            passed,
            identities_checked: identities.len(),
            families,
            decompositions,
            identities,
        }),
        Format::Table => {
            // one row per identity name, in first-seen order
            let mut rows: Vec<(String, usize, usize)> = Vec::new();
            for i in &identities {
                match rows.iter_mut().find(|r| r.0 == i.identity) {
                    Some(r) => {
                        r.1 += 1;
                        r.2 += usize::from(i.residual_zero);
                    }
                    None => rows.push((i.identity.clone(), 1, usize::from(i.residual_zero))),
                }
            }
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|(name, total, ok)| vec![name.clone(), total.to_string(), ok.to_string()])
                .collect();
            let fam: Vec<Vec<String>> = families
                .iter()
                .map(|f| vec![f.k.to_string(), f.j.to_string(), f.basis.clone()])
                .collect();
            format!(
                "symbolic checks, n = {n}, k <= {k_max}, j <= {j_max}: {}\n{}\nharmonic families (all decompositions full rank)\n{}",
                if passed { "all residuals zero" } else { "FAILED" },
                report::table(&["identity", "checked", "zero residual"], &body),
                report::table(&["k", "j", "h"], &fam)
            )
        }
    };
    Ok(Output {
        stdout,
        warnings: Vec::new(),
        code: if passed { 0 } else { 2 },
    })
}

fn cmd_iterate(
    input: &str,
    iterations: u32,
    cutoff: &QuadReal,
    output: Option<&PathBuf>,
    allow: bool,
    format: Format,
) -> Result<Output, CliError> {
    let loaded = load(input, cutoff, iterations, false)?;
    let opts = MapOptions {
        allow_outside_hypotheses: allow,
    };
    let result = iterate(&loaded.spectrum, iterations, cutoff, opts)?;
    if let Some(path) = output {
        save_geometric_spectrum(&result, path)
            .map_err(|e| CliError::new(1, "io", format!("{}: {e}", path.display())))?;
    }
    let stdout = match format {
        Format::Json => {
            let mut s = to_json_string(&result);
            s.push('\n');
            s
        }
        Format::Table => {
            let mut out = format!("{iterations}-fold sine-cone over {input}: dimension {}\n", result.n);
            for (name, s) in [("spec0", &result.spec0), ("spec1D", &result.spec1d), ("specE_TT", &result.spec_tt)] {
                out.push('\n');
                out.push_str(&report::spectrum_table(name, s));
            }
            out
        }
    };
    Ok(Output {
        stdout,
        warnings: warnings_of(&loaded),
        code: 0,
    })
}

#[derive(Serialize)]
struct ScanOutput {
    from: u32,
    to: u32,
    rows: Vec<report::ScanRowJson>,
}

fn cmd_scan(from: u32, to: u32, format: Format) -> Result<Output, CliError> {
    let rows = product_rigidity_scan(from, to)?;
    let stdout = match format {
        Format::Json => to_json(&ScanOutput {
            from,
            to,
            rows: rows.iter().map(report::ScanRowJson::from).collect(),
        }),
        Format::Table => report::scan_table(&rows),
    };
    Ok(Output::ok(stdout))
}

fn dispatch(cli: Cli) -> Result<Output, CliError> {
    let format = cli.format;
    match cli.command {
        Command::Spectrum {
            input,
            operator,
            cutoff,
            allow_outside_hypotheses,
            strict_obata,
        } => cmd_spectrum(&input, operator, &cutoff, allow_outside_hypotheses, strict_obata, format),
        Command::Stability {
            input,
            cutoff,
            strict_obata,
        } => cmd_stability(&input, cutoff, strict_obata, format),
        Command::Rigidity { input, strict_obata } => cmd_rigidity(&input, strict_obata, format),
        Command::VerifyRadial {
            input,
            dim,
            block,
            value,
            modes,
            n_grid,
            eps,
            tol,
            targets,
            kappa,
            epsilons,
            csv,
        } => cmd_verify_radial(
            input.as_deref(),
            dim,
            block.into(),
            value,
            modes,
            n_grid,
            eps,
            tol,
            targets,
            kappa,
            &epsilons,
            csv.as_ref(),
            format,
        ),
        Command::VerifySymbolic { dim, k, jmax } => cmd_verify_symbolic(dim, k, jmax, format),
        Command::Iterate {
            input,
            iterations,
            cutoff,
            output,
            allow_outside_hypotheses,
        } => cmd_iterate(&input, iterations, &cutoff, output.as_ref(), allow_outside_hypotheses, format),
        Command::ScanProducts { from, to } => cmd_scan(from, to, format),
    }
}

fn write_error(err: &mut dyn Write, e: &CliError) {
    let body = ErrorJson {
        error: e.kind,
        message: &e.message,
        exit_code: e.code,
    };
    let _ = writeln!(err, "{}", serde_json::to_string(&body).expect("errors serialize"));
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            write_error(err, &CliError::new(4, "usage", e.to_string().trim_end()));
            return 4;
        }
    };
    match dispatch(cli) {
        Ok(o) => {
            for w in &o.warnings {
                let _ = writeln!(err, "{}", serde_json::to_string(w).expect("warnings serialize"));
            }
            let _ = out.write_all(o.stdout.as_bytes());
            o.code
        }
        Err(e) => {
            write_error(err, &e);
            e.code
        }
    }
}
