//! Subcommand implementations. Each returns the full text destined for
//! standard output together with the exit status.

use symcamel::invariants::invariants_via_minors;
use symcamel::projection::{check_camel_any, trial_seed, VIOLATION_TOL};
use symcamel::quantum::{robertson_schrodinger_defects, uncertainty_min_eigenvalue};
use symcamel::spectrum::symplectic_eigenvalues_direct;
use symcamel::{
    check_camel, delta_projection_identity, delta_via_charpoly, delta_via_spectrum, nonsqueezing_campaign,
    random_complex_subspace, random_symplectic_subspace, symplectic_eigenvalues, validity_report, williamson,
    CovarianceMatrix, SymplecticSubspace,
};

use crate::args::{Cli, Command, GlobalOpts, OutputFormat};
use crate::input::{parse_input, IngestOptions, InputDocument};
use crate::report::{
    AnalysisReport, CampaignReport, ErrorReport, InvariantRow, InvariantsReport, ModeCheck, ProjectReport,
    SpectrumReport, SubspaceRow, Verdict, WilliamsonReport,
};
use crate::{CliError, ExitStatus};

/// The enumeration route is shown only up to this many modes.
pub const MINORS_MAX_MODES: usize = 6;
/// Cross-route deviations above this signal an internal inconsistency.
pub const ROUTE_DEVIATION_ALARM: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: ExitStatus,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one parsed invocation.
pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Check { input } => with_input(cli, input, cmd_check),
        Command::Spectrum { input } => with_input(cli, input, cmd_spectrum),
        Command::Williamson { input } => with_input(cli, input, cmd_williamson),
        Command::Project { input, modes, random, complex, axes } => {
            with_input(cli, input, |doc| cmd_project(doc, modes, random.as_deref(), *complex, axes))
        }
        Command::Camel { n, k, trials, spread } => cmd_camel(*n, *k, *trials, cli.global.seed, *spread),
        Command::Invariants { input } => with_input(cli, input, cmd_invariants),
    };
    match result {
        Ok((status, rendered)) => Outcome { status, stdout: frame(&cli.global, rendered), stderr: String::new() },
        Err(err) => {
            let status = err.exit_status();
            let stdout = match cli.global.format {
                OutputFormat::Structured => to_json(&ErrorReport { error: err.to_string(), exit_code: status.code() }),
                OutputFormat::Text => String::new(),
            };
            Outcome { status, stdout, stderr: format!("error: {err}\n") }
        }
    }
}

/// A report rendered both ways; the global format picks one.
pub struct Rendered {
    structured: String,
    text: String,
}

impl Rendered {
    fn new<T: serde::Serialize>(value: &T, text: String) -> Self {
        Self { structured: to_json(value), text }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports contain only finite numbers and strings");
    s.push('\n');
    s
}

fn frame(global: &GlobalOpts, rendered: Rendered) -> String {
    match global.format {
        OutputFormat::Structured => rendered.structured,
        OutputFormat::Text if global.no_banner => rendered.text,
        OutputFormat::Text => format!("symcamel {}\n{}", env!("CARGO_PKG_VERSION"), rendered.text),
    }
}

fn with_input(
    cli: &Cli,
    path: &std::path::Path,
    body: impl FnOnce(&InputDocument) -> Result<(ExitStatus, Rendered), CliError>,
) -> Result<(ExitStatus, Rendered), CliError> {
    let opts = IngestOptions {
        hbar: cli.global.hbar,
        ordering: cli.global.ordering.map(Into::into),
        symmetry_tol: cli.global.tol,
    };
    if let Some(tol) = opts.symmetry_tol {
        if !(tol >= 0.0) || !tol.is_finite() {
            return Err(CliError::Validation(format!("--tol must be finite and non-negative, got {tol}")));
        }
    }
    let doc = parse_input(path, &opts)?;
    body(&doc)
}

fn status_for(verdict: Verdict) -> ExitStatus {
    match verdict {
        Verdict::Valid | Verdict::Marginal => ExitStatus::Valid,
        Verdict::Invalid => ExitStatus::Invalid,
    }
}

fn verdict_of(sigma: &CovarianceMatrix) -> Result<Verdict, CliError> {
    Ok(Verdict::from_validity(&validity_report(sigma)?))
}

fn row(label: String, f: &SymplecticSubspace, sigma: &CovarianceMatrix) -> Result<SubspaceRow, CliError> {
    let check = if f.is_symplectic() { check_camel(sigma, f)? } else { check_camel_any(sigma, f)? };
    Ok(SubspaceRow {
        subspace: label,
        k: f.k(),
        symplectic: f.is_symplectic(),
        complex: f.is_symplectic() && f.is_complex(),
        volume: check.volume,
        bound: check.bound,
        ratio: check.ratio,
        satisfied: check.satisfied,
    })
}

fn mode_label(modes: &[usize]) -> String {
    let list: Vec<String> = modes.iter().map(|m| (m + 1).to_string()).collect();
    format!("modes {}", list.join(","))
}

pub fn cmd_check(doc: &InputDocument) -> Result<(ExitStatus, Rendered), CliError> {
    let sigma = doc.covariance()?;
    let validity = validity_report(&sigma)?;
    let nu = symplectic_eigenvalues(&sigma)?;
    let n = sigma.modes();
    let defects = robertson_schrodinger_defects(&sigma);
    let robertson_schrodinger = defects
        .iter()
        .zip(&validity.rs_per_mode)
        .enumerate()
        .map(|(j, (&defect, &satisfied))| ModeCheck { mode: j + 1, defect, satisfied })
        .collect();
    let mut camel = Vec::new();
    for j in 0..n {
        camel.push(row(mode_label(&[j]), &SymplecticSubspace::coordinate(n, &[j])?, &sigma)?);
    }
    if n > 1 {
        let all: Vec<usize> = (0..n).collect();
        camel.push(row(mode_label(&all), &SymplecticSubspace::coordinate(n, &all)?, &sigma)?);
    }
    let verdict = Verdict::from_validity(&validity);
    let report = AnalysisReport {
        n,
        hbar: sigma.hbar(),
        verdict,
        spectrum: nu.values().to_vec(),
        uncertainty_min_eigenvalue: uncertainty_min_eigenvalue(&sigma),
        gromov_width: validity.gromov_width,
        invariants: delta_via_spectrum(&nu).delta,
        robertson_schrodinger,
        camel,
        validity,
    };
    let status = if !report.validity.routes_agree() { ExitStatus::Inconsistent } else { status_for(verdict) };
    let text = report.to_text();
    Ok((status, Rendered::new(&report, text)))
}

pub fn cmd_spectrum(doc: &InputDocument) -> Result<(ExitStatus, Rendered), CliError> {
    let sigma = doc.covariance()?;
    let nu = symplectic_eigenvalues(&sigma)?;
    let direct = symplectic_eigenvalues_direct(&sigma)?;
    let verdict = verdict_of(&sigma)?;
    let report = SpectrumReport {
        n: sigma.modes(),
        hbar: sigma.hbar(),
        verdict,
        nu: nu.values().to_vec(),
        nu_min: nu.nu_min(),
        nu_direct: direct.values().to_vec(),
        route_deviation: nu.max_relative_deviation(&direct),
    };
    let status =
        if report.route_deviation > ROUTE_DEVIATION_ALARM { ExitStatus::Inconsistent } else { status_for(verdict) };
    let text = report.to_text();
    Ok((status, Rendered::new(&report, text)))
}

pub fn cmd_williamson(doc: &InputDocument) -> Result<(ExitStatus, Rendered), CliError> {
    let sigma = doc.covariance()?;
    let w = williamson(&sigma)?;
    let verdict = verdict_of(&sigma)?;
    let s = w.s.matrix();
    let report = WilliamsonReport {
        n: sigma.modes(),
        hbar: sigma.hbar(),
        verdict,
        lambda: w.lambda.clone(),
        s: s.row_iter().map(|r| r.iter().copied().collect()).collect(),
        residual: w.residual,
        symplectic_residual: w.s.residual(),
    };
    let text = report.to_text();
    Ok((status_for(verdict), Rendered::new(&report, text)))
}

fn parse_modes(list: &str, n: usize) -> Result<Vec<usize>, CliError> {
    list.split(',')
        .map(|t| {
            let j: usize = t
                .trim()
                .parse()
                .map_err(|_| CliError::Validation(format!("--modes {list:?}: {t:?} is not a mode index")))?;
            if j == 0 || j > n {
                return Err(CliError::Validation(format!("--modes {list:?}: mode {j} outside 1..={n}")));
            }
            Ok(j - 1)
        })
        .collect()
}

fn parse_axes(list: &str, n: usize) -> Result<Vec<usize>, CliError> {
    list.split(',')
        .map(|t| {
            let t = t.trim();
            let bad = || CliError::Validation(format!("--axes {list:?}: {t:?} is not of the form x<j> or p<j>"));
            let (kind, rest) = t.split_at_checked(1).ok_or_else(bad)?;
            let j: usize = rest.parse().map_err(|_| bad())?;
            if j == 0 || j > n {
                return Err(CliError::Validation(format!("--axes {list:?}: mode {j} outside 1..={n}")));
            }
            match kind {
                "x" | "X" => Ok(j - 1),
                "p" | "P" => Ok(n + j - 1),
                _ => Err(bad()),
            }
        })
        .collect()
}

pub fn cmd_project(
    doc: &InputDocument,
    modes: &[String],
    random: Option<&[u64]>,
    complex: bool,
    axes: &[String],
) -> Result<(ExitStatus, Rendered), CliError> {
    let sigma = doc.covariance()?;
    let n = sigma.modes();
    let mut rows = Vec::new();
    for list in modes {
        let m = parse_modes(list, n)?;
        rows.push(row(mode_label(&m), &SymplecticSubspace::coordinate(n, &m)?, &sigma)?);
    }
    if let Some(&[k, count, seed]) = random {
        let k = k as usize;
        if k == 0 || k > n {
            return Err(CliError::Validation(format!("--random: k = {k} outside 1..={n}")));
        }
        for i in 0..count {
            let f = if complex {
                random_complex_subspace(n, k, trial_seed(seed, i))?
            } else {
                random_symplectic_subspace(n, k, trial_seed(seed, i))?
            };
            rows.push(row(format!("random #{} (seed {seed})", i + 1), &f, &sigma)?);
        }
    }
    for list in axes {
        let a = parse_axes(list, n)?;
        rows.push(row(format!("axes {list}"), &SymplecticSubspace::coordinate_axes(n, &a)?, &sigma)?);
    }
    if modes.is_empty() && random.is_none() && axes.is_empty() {
        for j in 0..n {
            rows.push(row(mode_label(&[j]), &SymplecticSubspace::coordinate(n, &[j])?, &sigma)?);
        }
    }
    let verdict = verdict_of(&sigma)?;
    // The bound is only guaranteed on complex subspaces; generic symplectic
    // rows are reported but cannot raise the alarm.
    let min_ratio = rows.iter().filter(|r| r.complex).map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let alarm = verdict != Verdict::Invalid && min_ratio < 1.0 - VIOLATION_TOL;
    let report = ProjectReport {
        n,
        hbar: sigma.hbar(),
        verdict,
        min_ratio: if min_ratio.is_finite() { min_ratio } else { f64::MAX },
        rows,
    };
    let status = if alarm { ExitStatus::Inconsistent } else { status_for(verdict) };
    let text = report.to_text();
    Ok((status, Rendered::new(&report, text)))
}

pub fn cmd_camel(
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
    spread: f64,
) -> Result<(ExitStatus, Rendered), CliError> {
    let summary = nonsqueezing_campaign(n, k, trials, seed, spread)?;
    let report = CampaignReport { summary };
    let status = if summary.violations == 0 { ExitStatus::Valid } else { ExitStatus::Inconsistent };
    let text = report.to_text();
    Ok((status, Rendered::new(&report, text)))
}

pub fn cmd_invariants(doc: &InputDocument) -> Result<(ExitStatus, Rendered), CliError> {
    let sigma = doc.covariance()?;
    let n = sigma.modes();
    let charpoly = delta_via_charpoly(&sigma);
    let spectrum = delta_via_spectrum(&symplectic_eigenvalues(&sigma)?);
    let minors = if n <= MINORS_MAX_MODES {
        match invariants_via_minors(&sigma) {
            Ok(m) => Some(m),
            Err(symcamel::Error::CombinatorialBlowup { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let mut max_deviation = charpoly.max_relative_deviation(&spectrum);
    if let Some(m) = &minors {
        max_deviation = max_deviation.max(m.max_relative_deviation(&charpoly)).max(m.max_relative_deviation(&spectrum));
    }
    let rows = (0..=n)
        .map(|j| {
            Ok(InvariantRow {
                j,
                minors: minors.as_ref().map(|m| m.delta[j]),
                charpoly: charpoly.delta[j],
                spectrum: spectrum.delta[j],
                projection_identity_residual: delta_projection_identity(&sigma, j)?.residual,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let verdict = verdict_of(&sigma)?;
    let report =
        InvariantsReport { n, hbar: sigma.hbar(), verdict, minors_skipped: minors.is_none(), rows, max_deviation };
    let status = if max_deviation > ROUTE_DEVIATION_ALARM { ExitStatus::Inconsistent } else { status_for(verdict) };
    let text = report.to_text();
    Ok((status, Rendered::new(&report, text)))
}
