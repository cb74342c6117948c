//! Report records emitted by the commands, in structured and text form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use symcamel::{CampaignSummary, QuantumValidityReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Valid,
    Marginal,
    Invalid,
}

impl Verdict {
    pub fn from_validity(v: &QuantumValidityReport) -> Self {
        if v.marginal {
            Verdict::Marginal
        } else if v.is_valid() {
            Verdict::Valid
        } else {
            Verdict::Invalid
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Valid => "valid",
            Verdict::Marginal => "marginal",
            Verdict::Invalid => "invalid",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeCheck {
    /// 1-based mode index.
    pub mode: usize,
    /// `σ_XX·σ_PP − σ_XP² − ħ²/4`.
    pub defect: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceRow {
    /// Human-readable label, e.g. `modes 1,3` or `random #4 (seed 42)`.
    pub subspace: String,
    pub k: usize,
    pub symplectic: bool,
    /// Invariant under `Ω`; the shadow bound is guaranteed only on such subspaces.
    pub complex: bool,
    pub volume: f64,
    pub bound: f64,
    pub ratio: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub hbar: f64,
    pub verdict: Verdict,
    pub spectrum: Vec<f64>,
    pub validity: QuantumValidityReport,
    /// Smallest eigenvalue of `σ + ½iħΩ`.
    pub uncertainty_min_eigenvalue: f64,
    pub gromov_width: f64,
    /// `Δ₀ … Δₙ`.
    pub invariants: Vec<f64>,
    pub robertson_schrodinger: Vec<ModeCheck>,
    pub camel: Vec<SubspaceRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub hbar: f64,
    pub verdict: Verdict,
    pub nu: Vec<f64>,
    pub nu_min: f64,
    /// Same spectrum from the eigenvalues of `Ωσ`.
    pub nu_direct: Vec<f64>,
    pub route_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilliamsonReport {
    pub n: usize,
    pub hbar: f64,
    pub verdict: Verdict,
    pub lambda: Vec<f64>,
    /// Rows of `S`, block-xp ordering.
    pub s: Vec<Vec<f64>>,
    pub residual: f64,
    pub symplectic_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectReport {
    pub n: usize,
    pub hbar: f64,
    pub verdict: Verdict,
    pub rows: Vec<SubspaceRow>,
    /// Smallest ratio over complex symplectic rows (`f64::MAX` if none).
    pub min_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantRow {
    pub j: usize,
    /// `None` when the enumeration route was skipped.
    pub minors: Option<f64>,
    pub charpoly: f64,
    pub spectrum: f64,
    /// Relative residual of the projection-volume identity at this order.
    pub projection_identity_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub n: usize,
    pub hbar: f64,
    pub verdict: Verdict,
    pub minors_skipped: bool,
    pub rows: Vec<InvariantRow>,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    #[serde(flatten)]
    pub summary: CampaignSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: String,
    pub exit_code: i32,
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.12}")).collect::<Vec<_>>().join(", ")
}

fn rows_table(out: &mut String, rows: &[SubspaceRow]) {
    let _ = writeln!(out, "  {:<36} {:>3} {:>20} {:>20} {:>14}  ok", "subspace", "k", "volume", "bound", "ratio");
    for r in rows {
        let label = match (r.symplectic, r.complex) {
            (false, _) => format!("{} (non-symplectic)", r.subspace),
            (true, false) => format!("{} (not complex)", r.subspace),
            (true, true) => r.subspace.clone(),
        };
        let _ = writeln!(
            out,
            "  {:<36} {:>3} {:>20.12} {:>20.12} {:>14.10}  {}",
            label,
            r.k,
            r.volume,
            r.bound,
            r.ratio,
            if r.satisfied { "yes" } else { "no" }
        );
    }
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let v = &self.validity;
        let _ = writeln!(out, "modes n = {}, hbar = {}", self.n, self.hbar);
        let _ = writeln!(out, "verdict: {}", self.verdict.as_str());
        let _ = writeln!(out, "symplectic spectrum: [{}]", join(&self.spectrum));
        let _ = writeln!(out, "nu_min = {:.12}, margin nu_min - hbar/2 = {:.6e}", v.nu_min, v.margin);
        let _ = writeln!(
            out,
            "hermitian route (sigma + i hbar/2 Omega >= 0): {} (min eigenvalue {:.6e})",
            v.valid_hermitian, self.uncertainty_min_eigenvalue
        );
        let _ = writeln!(out, "spectrum route (nu_min >= hbar/2): {}", v.valid_spectrum);
        let _ = writeln!(
            out,
            "gromov width = {:.12} (pi*hbar = {:.12})",
            self.gromov_width,
            std::f64::consts::PI * self.hbar
        );
        let _ = writeln!(out, "invariants Delta_0..Delta_n: [{}]", join(&self.invariants));
        let _ = writeln!(out, "Robertson-Schrodinger per mode:");
        for m in &self.robertson_schrodinger {
            let _ = writeln!(
                out,
                "  mode {}: defect {:.6e} {}",
                m.mode,
                m.defect,
                if m.satisfied { "ok" } else { "VIOLATED" }
            );
        }
        let _ = writeln!(out, "shadow volumes:");
        rows_table(&mut out, &self.camel);
        out
    }
}

impl SpectrumReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "modes n = {}, hbar = {}, verdict: {}", self.n, self.hbar, self.verdict.as_str());
        let _ = writeln!(out, "nu (skew route):   [{}]", join(&self.nu));
        let _ = writeln!(out, "nu (Omega sigma):  [{}]", join(&self.nu_direct));
        let _ = writeln!(out, "route deviation:   {:.3e}", self.route_deviation);
        out
    }
}

impl WilliamsonReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "modes n = {}, hbar = {}, verdict: {}", self.n, self.hbar, self.verdict.as_str());
        let _ = writeln!(out, "Lambda: [{}]", join(&self.lambda));
        let _ = writeln!(out, "S (S^T sigma S = diag(Lambda, Lambda)):");
        for row in &self.s {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>16.10}")).collect();
            let _ = writeln!(out, "  {}", cells.join(" "));
        }
        let _ = writeln!(out, "residual |S^T sigma S - D|_F = {:.3e}", self.residual);
        let _ = writeln!(out, "residual |S Omega S^T - Omega|_F = {:.3e}", self.symplectic_residual);
        out
    }
}

impl ProjectReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "modes n = {}, hbar = {}, verdict: {}", self.n, self.hbar, self.verdict.as_str());
        rows_table(&mut out, &self.rows);
        let _ = writeln!(out, "min ratio over complex subspaces: {:.12}", self.min_ratio);
        out
    }
}

impl InvariantsReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "modes n = {}, hbar = {}, verdict: {}", self.n, self.hbar, self.verdict.as_str());
        let _ =
            writeln!(out, "  {:>2} {:>22} {:>22} {:>22} {:>12}", "j", "minors", "charpoly", "spectrum", "proj. resid");
        for r in &self.rows {
            let minors = r.minors.map_or_else(|| "skipped".to_string(), |m| format!("{m:.12e}"));
            let _ = writeln!(
                out,
                "  {:>2} {:>22} {:>22.12e} {:>22.12e} {:>12.3e}",
                r.j, minors, r.charpoly, r.spectrum, r.projection_identity_residual
            );
        }
        let _ = writeln!(out, "max cross-route deviation: {:.3e}", self.max_deviation);
        out
    }
}

impl CampaignReport {
    pub fn to_text(&self) -> String {
        let s = &self.summary;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "linear non-squeezing campaign: n = {}, k = {}, spread = {}, seed = {}",
            s.n, s.k, s.spread, s.seed
        );
        let _ = writeln!(out, "trials = {}, evaluations = {}", s.trials, s.evaluations);
        let _ = writeln!(out, "min ratio = {:.15}", s.min_ratio);
        let _ = writeln!(out, "max ratio = {:.15}", s.max_ratio);
        let _ = writeln!(out, "violations = {}", s.violations);
        out
    }
}
