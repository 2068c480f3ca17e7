//! Command-line surface: argument parsing, validation, and report emission.
//!
//! Exit codes: 0 when every hard check passes, 1 when one fails, 2 for usage
//! or domain errors. Informational checks (comparisons against printed
//! claims) never change the exit code.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{b_of_n_matrix, number_matrix, verify_commutators, verify_structure};
use crate::algebra::{compare_kinds, hamiltonian, hamiltonian_spectrum, momentum_matrix, position_matrix};
use crate::basis::{linspace, Kind};
use crate::coefficients::{paper_coefficient, raw_derived, CoefficientSource, RecurrenceCoefficients};
use crate::coherent::{
    annihilation_residual, bg_state, boundary_identity, norm_squared_closed, wavefunction_sweep, DISK_RADIUS,
};
use crate::diffop::{compare_all_realizations, validate_a_numerically, MATCH_TOLERANCE};
use crate::error::Error;
use crate::exec::Execution;
use crate::quadrature::{diagonal_recurrence_coefficient, gauss_chebyshev_rule, gram_matrix, identity_deviation};
use crate::report::{CheckRecord, VerificationReport};

pub const TOOL_NAME: &str = "chebosc";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tolerance for the derivative cross-check of `A`; recurrence values grow
/// like `n`, so this is looser than the algebraic checks.
pub const A_DERIVATIVE_TOLERANCE: f64 = 1e-10;

/// Number of basis functions in the orthonormality check, capped to keep
/// forward-recurrence roundoff below the default tolerance.
pub const GRAM_MAX_FUNCTIONS: usize = 48;
pub const GRAM_RULE_NODES: usize = 512;

#[derive(Debug, Parser)]
#[command(
    name = "chebosc",
    version,
    about = "Chebyshev oscillator algebras and coherent states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Run the operator-identity suite.
    Verify(RunArgs),
    /// Evaluate a coherent state over an x-grid, series against closed form.
    Coherent(RunArgs),
    /// Emit the operator tables as CSV.
    Table(RunArgs),
    /// Boundary resolution-of-identity integral.
    Boundary(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    First,
    Second,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::First => Kind::First,
            KindArg::Second => Kind::Second,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Paper,
    Derived,
}

impl From<SourceArg> for CoefficientSource {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Paper => CoefficientSource::Paper,
            SourceArg::Derived => CoefficientSource::Derived,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value = "first")]
    pub kind: KindArg,
    #[arg(long, default_value_t = 64)]
    pub dim: usize,
    #[arg(long, value_enum, default_value = "derived")]
    pub source: SourceArg,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long = "z-re", default_value_t = 0.0, allow_hyphen_values = true)]
    pub z_re: f64,
    #[arg(long = "z-im", default_value_t = 0.0, allow_hyphen_values = true)]
    pub z_im: f64,
    #[arg(long = "x-min", default_value_t = -1.0, allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long = "x-max", default_value_t = 1.0, allow_hyphen_values = true)]
    pub x_max: f64,
    #[arg(long = "x-points", default_value_t = 101)]
    pub x_points: usize,
    /// Angular samples for `boundary` (default 4 * dim).
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandName {
    Verify,
    Coherent,
    Table,
    Boundary,
}

impl CommandName {
    fn min_dim(self) -> usize {
        match self {
            CommandName::Verify => 8,
            CommandName::Table => 3,
            CommandName::Coherent | CommandName::Boundary => 2,
        }
    }

    fn default_format(self) -> Format {
        match self {
            CommandName::Table => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// Validated configuration, echoed verbatim into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandName,
    pub kind: Kind,
    pub dim: usize,
    pub source: CoefficientSource,
    pub tolerance: f64,
    pub z_re: f64,
    pub z_im: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub x_points: usize,
    pub samples: usize,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.z_re, self.z_im)
    }

    pub fn grid(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.x_points)
    }

    pub fn from_command(command: &Command) -> Result<Self, CliError> {
        let (name, args) = match command {
            Command::Verify(a) => (CommandName::Verify, a),
            Command::Coherent(a) => (CommandName::Coherent, a),
            Command::Table(a) => (CommandName::Table, a),
            Command::Boundary(a) => (CommandName::Boundary, a),
        };
        let min = name.min_dim();
        if args.dim < min {
            return Err(CliError::Usage(format!(
                "--dim must be at least {min} for this command (minimum dimension), got {}",
                args.dim
            )));
        }
        if !(args.tol > 0.0 && args.tol.is_finite()) {
            return Err(CliError::Usage(format!(
                "--tol must be a positive number, got {}",
                args.tol
            )));
        }
        for (flag, v) in [("--z-re", args.z_re), ("--z-im", args.z_im)] {
            if !v.is_finite() {
                return Err(CliError::Usage(format!("{flag} must be finite")));
            }
        }
        if args.x_points == 0 {
            return Err(CliError::Usage("--x-points must be at least 1".into()));
        }
        if !(-1.0 <= args.x_min && args.x_min <= args.x_max && args.x_max <= 1.0) {
            return Err(CliError::Usage(format!(
                "x-grid [{}, {}] must satisfy -1 <= x-min <= x-max <= 1",
                args.x_min, args.x_max
            )));
        }
        if name == CommandName::Coherent {
            let modulus = Complex64::new(args.z_re, args.z_im).norm();
            if modulus >= DISK_RADIUS {
                return Err(CliError::Domain(format!(
                    "|z| = {modulus} lies outside the convergence disk |z| < 1/sqrt(2) = {FRAC_1_SQRT_2}"
                )));
            }
        }
        let samples = args.samples.unwrap_or(4 * args.dim);
        if samples < 4 * args.dim {
            return Err(CliError::Usage(format!(
                "--samples must be at least 4 * dim = {}, got {samples}",
                4 * args.dim
            )));
        }
        let format = args.format.unwrap_or(name.default_format());
        if name == CommandName::Table && format != Format::Csv {
            return Err(CliError::Usage("table output is CSV only".into()));
        }
        Ok(RunConfig {
            command: name,
            kind: args.kind.into(),
            dim: args.dim,
            source: args.source.into(),
            tolerance: args.tol,
            z_re: args.z_re,
            z_im: args.z_im,
            x_min: args.x_min,
            x_max: args.x_max,
            x_points: args.x_points,
            samples,
            format,
            out: args.out.clone(),
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Library(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OverallStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub overall_status: OverallStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl ReportDocument {
    fn new(config: &RunConfig, report: VerificationReport, data: Option<serde_json::Value>) -> Self {
        let overall_status = if report.passed() {
            OverallStatus::Pass
        } else {
            OverallStatus::Fail
        };
        ReportDocument {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            config: config.clone(),
            checks: report.checks,
            overall_status,
            data,
        }
    }

    pub fn passed(&self) -> bool {
        self.overall_status == OverallStatus::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Rendered command output plus its pass/fail status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub passed: bool,
    pub document: Option<ReportDocument>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    match config.command {
        CommandName::Verify => cmd_verify(config),
        CommandName::Coherent => cmd_coherent(config),
        CommandName::Table => cmd_table(config),
        CommandName::Boundary => cmd_boundary(config),
    }
}

fn checks_csv(doc: &ReportDocument) -> String {
    csv(
        &[
            "name",
            "residual",
            "tolerance",
            "passed",
            "informational",
            "matches_paper_claim",
            "note",
        ],
        doc.checks.iter().map(|c| {
            vec![
                c.name.clone(),
                fmt_f64(c.residual),
                fmt_f64(c.tolerance),
                c.passed.to_string(),
                c.informational.to_string(),
                c.matches_paper_claim
                    .map(|m| if m { "yes" } else { "no" }.to_string())
                    .unwrap_or_default(),
                c.note
                    .as_deref()
                    .map(|n| format!("\"{}\"", n.replace('"', "\"\"")))
                    .unwrap_or_default(),
            ]
        }),
    )
}

fn finish(config: &RunConfig, doc: ReportDocument, csv_body: impl FnOnce(&ReportDocument) -> String) -> Outcome {
    let body = match config.format {
        Format::Json => doc.to_json(),
        Format::Csv => csv_body(&doc),
    };
    Outcome {
        passed: doc.passed(),
        body,
        document: Some(doc),
    }
}

/// Full identity suite for one kind, dimension and coefficient source.
pub fn verification_report(
    kind: Kind,
    dim: usize,
    source: CoefficientSource,
    tol: f64,
) -> Result<VerificationReport, Error> {
    let mut report = VerificationReport::new();

    let count = dim.min(GRAM_MAX_FUNCTIONS);
    let rule = gauss_chebyshev_rule(kind, GRAM_RULE_NODES.max(dim + 2))?;
    let gram = gram_matrix(kind, count, &rule)?;
    report.hard("orthonormality_gram", identity_deviation(&gram), tol).note =
        Some(format!("psi_0..psi_{} with a {}-node rule", count - 1, rule.len()));

    let raw = raw_derived(kind, dim);
    let used = RecurrenceCoefficients::new(kind, CoefficientSource::Derived, dim);
    let snap_dev = raw
        .iter()
        .zip(used.as_slice())
        .map(|(r, u)| (r - u).abs())
        .fold(0.0, f64::max);
    report.hard("recurrence_coefficients_quadrature", snap_dev, tol);

    let diag = (0..dim)
        .map(|n| diagonal_recurrence_coefficient(kind, n, &rule).map(f64::abs))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    report.hard("jacobi_zero_diagonal", diag, tol);

    let paper_dev = raw
        .iter()
        .enumerate()
        .map(|(n, r)| (paper_coefficient(n) - r).abs())
        .fold(0.0, f64::max);
    let b0 = raw[0];
    report.claim(
        "paper_recurrence_coefficients",
        paper_dev,
        tol,
        format!(
            "printed b_0 = 1/sqrt(2), b_n = 1/2; quadrature gives b_0 = {b0:.17}, so the printed b_0 is off by {:.4}",
            (FRAC_1_SQRT_2 - b0).abs()
        ),
    );
    if source == CoefficientSource::Paper {
        let used = RecurrenceCoefficients::new(kind, source, dim);
        let dev = raw
            .iter()
            .zip(used.as_slice())
            .map(|(r, u)| (r - u).abs())
            .fold(0.0, f64::max);
        report.claim(
            "source_coefficients_vs_oracle",
            dev,
            tol,
            format!("coefficients in use (source = paper) differ from the quadrature oracle by {dev:.4}"),
        );
    }

    report.extend(verify_structure(kind, dim, source, tol)?);
    report.extend(verify_commutators(kind, dim, source, tol)?);

    let spec = hamiltonian_spectrum(kind, dim, source, tol)?;
    let hdev = spec
        .diagonal_form
        .iter()
        .zip(&spec.predicted_diagonal)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    report.hard("hamiltonian_diagonal", hdev, tol);
    report.hard("hamiltonian_off_diagonal", spec.off_diagonal_max, tol);
    let head: Vec<String> = spec.diagonal_form.iter().take(3).map(|v| format!("{v}")).collect();
    report.claim(
        "paper_hamiltonian_spectrum",
        spec.paper_claim_deviation,
        tol,
        format!(
            "printed lambda_0 = 1/2, lambda_n = 1; computed diagonal starts ({}, ...)",
            head.join(", ")
        ),
    );

    let kinds = compare_kinds(dim, source)?;
    report.claim(
        "paper_unitary_equivalence",
        kinds.max_abs_difference,
        tol,
        format!(
            "entry-wise difference of a+-, N, B(N), H between kinds; differences confined to b_0 entries: {}",
            kinds.differences_confined_to_b0
        ),
    );

    let grid = linspace(-0.99, 0.99, 101);
    let a_dev = validate_a_numerically(kind, dim, source, &grid)?;
    let a_name = "a_operator_vs_derivative";
    match kind {
        Kind::First => {
            report.hard(a_name, a_dev, A_DERIVATIVE_TOLERANCE);
        }
        Kind::Second => {
            report.claim(
                a_name,
                a_dev,
                A_DERIVATIVE_TOLERANCE,
                "printed second-kind action of (1-x^2)d/dx against the analytic derivative",
            );
        }
    }

    let table = compare_all_realizations(kind, dim, source)?;
    for e in table.entries.iter().filter(|e| e.target.stated_kind() == kind) {
        let flagged = e.flagged_columns();
        let exact: Vec<String> = e
            .exact_columns
            .iter()
            .map(|r| format!("{}..{}", r.start, r.end))
            .collect();
        report.claim(
            format!("realization_{}_{}", e.target, e.ordering),
            e.max_residual,
            MATCH_TOLERANCE,
            format!(
                "vs canonical {:?}; residual excluding vacuum {:e}; exact columns [{}]; flagged singular columns {:?}",
                e.canonical,
                e.max_residual_excluding_vacuum,
                exact.join(", "),
                flagged
            ),
        );
    }
    Ok(report)
}

pub fn cmd_verify(config: &RunConfig) -> Result<Outcome, CliError> {
    let report = verification_report(config.kind, config.dim, config.source, config.tolerance)?;
    let b = RecurrenceCoefficients::new(config.kind, config.source, config.dim);
    let spec = hamiltonian_spectrum(config.kind, config.dim, config.source, config.tolerance)?;
    let data = json!({
        "b_n": b.as_slice(),
        "hamiltonian_diagonal": spec.diagonal_form,
        "hamiltonian_eigenvalues": spec.eigenvalues,
    });
    let doc = ReportDocument::new(config, report, Some(data));
    Ok(finish(config, doc, checks_csv))
}

pub fn cmd_coherent(config: &RunConfig) -> Result<Outcome, CliError> {
    let z = config.z();
    let tol = config.tolerance;
    let state = bg_state(config.kind, z, config.dim, config.source)?;
    let rows = wavefunction_sweep(&state, &config.grid(), Execution::default())?;
    let norm = norm_squared_closed(config.kind, z, config.source)?;

    let mut report = VerificationReport::new();
    report.hard("eigen_recursion", state.eigen_recursion_residual(), tol);
    report.hard("annihilation_residual", annihilation_residual(&state), tol);
    let max_diff = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    report.hard("series_vs_closed_wavefunction", max_diff, tol);
    report
        .hard("norm_series_vs_closed", (state.norm_sq_series - norm.closed).abs(), tol)
        .note = Some(format!("truncation tail bound {:e}", state.tail_bound));
    report.claim(
        "paper_normalization",
        (norm.closed - norm.paper_claimed).abs(),
        tol,
        "printed N^2 = 1/(1 - 2|z|^2) against the series norm with d_0 = 1",
    );

    let data = json!({
        "norm": {
            "series": state.norm_sq_series,
            "closed": norm.closed,
            "paper_claimed": norm.paper_claimed,
            "tail_bound": state.tail_bound,
        },
        "rows": rows.iter().map(|r| json!({
            "x": r.x,
            "series_re": r.series.re,
            "series_im": r.series.im,
            "closed_re": r.closed.re,
            "closed_im": r.closed.im,
            "abs_diff": r.abs_diff,
        })).collect::<Vec<_>>(),
    });
    let doc = ReportDocument::new(config, report, Some(data));
    Ok(finish(config, doc, |_| {
        csv(
            &["x", "series_re", "series_im", "closed_re", "closed_im", "abs_diff"],
            rows.iter().map(|r| {
                [r.x, r.series.re, r.series.im, r.closed.re, r.closed.im, r.abs_diff]
                    .into_iter()
                    .map(fmt_f64)
                    .collect()
            }),
        )
    }))
}

/// Per-index operator data: `b_n`, `X[n+1,n]`, `Im P[n+1,n]`, `N`, `B(N)`,
/// the interior diagonal of `H`, and the sorted interior spectrum of `H`.
pub fn cmd_table(config: &RunConfig) -> Result<Outcome, CliError> {
    let (kind, dim, source) = (config.kind, config.dim, config.source);
    let b = RecurrenceCoefficients::new(kind, source, dim);
    let x = position_matrix(kind, dim, source)?;
    let p = momentum_matrix(kind, dim, source)?;
    let n = number_matrix(dim)?;
    let bn = b_of_n_matrix(kind, dim, source)?;
    let h = hamiltonian(kind, dim, source)?;
    let spec = hamiltonian_spectrum(kind, dim, source, config.tolerance)?;
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let rows = (0..dim).map(|i| {
        vec![
            i.to_string(),
            fmt_f64(b.b(i)),
            opt((i + 1 < dim).then(|| x.entries[(i + 1, i)].re)),
            opt((i + 1 < dim).then(|| p.entries[(i + 1, i)].im)),
            fmt_f64(n.entries[(i, i)].re),
            fmt_f64(bn.entries[(i, i)].re),
            opt(h.interior.contains(&i).then(|| h.entries[(i, i)].re)),
            opt(spec.eigenvalues.get(i).copied()),
        ]
    });
    let body = csv(
        &[
            "n",
            "b_n",
            "x_offdiag",
            "p_offdiag_im",
            "number_diag",
            "b_of_n_diag",
            "h_diag",
            "h_eigenvalue",
        ],
        rows,
    );
    Ok(Outcome {
        body,
        passed: true,
        document: None,
    })
}

pub fn cmd_boundary(config: &RunConfig) -> Result<Outcome, CliError> {
    let tol = config.tolerance;
    let bi = boundary_identity(config.kind, config.dim, config.samples, config.source)?;
    let mut report = VerificationReport::new();
    report.hard("boundary_off_diagonal", bi.off_diagonal_max, tol);
    let pred_dev = bi
        .diagonal
        .iter()
        .zip(&bi.predicted_diagonal)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    report.hard("boundary_diagonal_vs_prediction", pred_dev, tol);
    let id_dev = bi.diagonal.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    report.claim(
        "paper_boundary_delta_measure",
        id_dev,
        tol,
        "uniform measure on |z| = 1/sqrt(2) resolves the identity iff the diagonal is all ones",
    );
    let data = json!({
        "diagonal": bi.diagonal,
        "predicted_diagonal": bi.predicted_diagonal,
        "off_diagonal_max": bi.off_diagonal_max,
    });
    let doc = ReportDocument::new(config, report, Some(data));
    Ok(finish(config, doc, |_| {
        csv(
            &["n", "diagonal", "predicted"],
            bi.diagonal
                .iter()
                .zip(&bi.predicted_diagonal)
                .enumerate()
                .map(|(n, (d, p))| vec![n.to_string(), fmt_f64(*d), fmt_f64(*p)]),
        )
    }))
}

/// Parses, validates, executes and writes output. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run_command(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("chebosc: {e}");
            e.exit_code()
        }
    }
}

fn run_command(command: &Command) -> Result<i32, CliError> {
    let config = RunConfig::from_command(command)?;
    let outcome = execute(&config)?;
    match &config.out {
        Some(path) => std::fs::write(path, &outcome.body)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(outcome.body.as_bytes())?;
        }
    }
    if let Some(doc) = &outcome.document {
        let mut summary = String::new();
        for c in doc.checks.iter().filter(|c| !c.informational && !c.passed) {
            let _ = writeln!(
                summary,
                "FAIL {}: residual {:e} >= tolerance {:e}",
                c.name, c.residual, c.tolerance
            );
        }
        eprint!("{summary}");
    }
    Ok(outcome.exit_code())
}
