//! JSON report shapes for the single-result subcommands.

use qoc_core::analog::{AnalogSystem, BaselineReport, CouplingReport, HamiltonianReport};
use qoc_core::validity::{
    maximal_amplitude, MaximalAmplitude, PhotonBound, QuadratureStats, StateCheck,
};

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct CouplingJson {
    pub schema: u32,
    pub n: usize,
    pub m: usize,
    pub omega_n0_rad_s: f64,
    pub omega_m_rad_s: f64,
    pub drive_flux_wb: f64,
    pub g_rad_s: f64,
    pub normalized_coupling: f64,
    pub frequency_ratio_s: f64,
    /// Largest drive quadrature amplitude that keeps the coupling
    /// quadratic; null when the bias has no flux sensitivity.
    pub x_star: Option<f64>,
    pub lj0_gate_ratio: f64,
    pub cj_gate_ratio: f64,
    pub zero_point_flux_a_wb: f64,
    pub zero_point_flux_b_wb: f64,
    pub adiabatic_ratio: f64,
    pub warnings: Vec<String>,
}

impl CouplingJson {
    pub fn new(system: &AnalogSystem, report: &HamiltonianReport) -> Self {
        let gates = system.regime_gates();
        let x_star = maximal_amplitude(system, report.coupling.n, report.coupling.m)
            .ok()
            .and_then(|bound| match bound {
                MaximalAmplitude::Bounded(x) => Some(x),
                MaximalAmplitude::Unconstrained => None,
            });
        let mut warnings = Vec::new();
        if !gates.inductance_ok() {
            warnings.push(format!(
                "SQUID inductance gate exceeded: L_J0/(ell_A*D_A) = {:e} > 1e-2; \
                 the effective-length model degrades",
                gates.inductance_ratio
            ));
        }
        if !gates.capacitance_ok() {
            warnings.push(format!(
                "junction capacitance gate exceeded: C_J/(c_A*D_A) = {:e} > 1e-1; \
                 the effective-length model degrades",
                gates.capacitance_ratio
            ));
        }
        if report.adiabaticity_warning {
            warnings.push(format!(
                "drive mode is not slow: omega_m/omega_n = {:.3} > 0.1",
                report.adiabatic_ratio
            ));
        }
        CouplingJson {
            schema: crate::spec::SCHEMA_VERSION,
            n: report.coupling.n,
            m: report.coupling.m,
            omega_n0_rad_s: report.coupling.omega_a,
            omega_m_rad_s: report.coupling.omega_b,
            drive_flux_wb: report.coupling.drive_flux,
            g_rad_s: report.coupling.strength,
            normalized_coupling: report.coupling.normalized,
            frequency_ratio_s: report.coupling.frequency_ratio,
            x_star,
            lj0_gate_ratio: gates.inductance_ratio,
            cj_gate_ratio: gates.capacitance_ratio,
            zero_point_flux_a_wb: report.zero_point_flux_a,
            zero_point_flux_b_wb: report.zero_point_flux_b,
            adiabatic_ratio: report.adiabatic_ratio,
            warnings,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ValidityJson {
    pub schema: u32,
    pub n: usize,
    pub m: usize,
    pub state: String,
    /// Null when the bias has no flux sensitivity (unconstrained).
    pub x_star: Option<f64>,
    pub pass: bool,
    /// Null margin means unconstrained.
    pub margin: Option<f64>,
    pub quadrature_mean: f64,
    pub quadrature_fluctuation: f64,
    pub quadrature_max_mean_abs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_mean_photons: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_temperature_k: Option<f64>,
}

impl ValidityJson {
    pub fn new(
        n: usize,
        m: usize,
        state: String,
        x_star: Option<f64>,
        stats: &QuadratureStats,
        check: &StateCheck,
        bound: Option<&PhotonBound>,
    ) -> Self {
        ValidityJson {
            schema: crate::spec::SCHEMA_VERSION,
            n,
            m,
            state,
            x_star,
            pass: check.pass,
            margin: check.margin.is_finite().then_some(check.margin),
            quadrature_mean: stats.mean,
            quadrature_fluctuation: stats.fluctuation,
            quadrature_max_mean_abs: stats.max_mean_abs,
            max_mean_photons: bound.map(|b| b.max_mean_photons),
            max_temperature_k: bound.and_then(|b| b.max_temperature),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BaselineRowJson {
    pub label: String,
    pub curvature_rad_s_m2: f64,
    pub curvature_2pi_khz_nm2: f64,
    pub g_over_omega: f64,
}

impl BaselineRowJson {
    pub fn new(label: String, report: &BaselineReport) -> Self {
        BaselineRowJson {
            label,
            curvature_rad_s_m2: report.curvature,
            curvature_2pi_khz_nm2: report.curvature * 1e-18
                / (2.0 * std::f64::consts::PI * 1e3),
            g_over_omega: report.g_over_omega,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DesignJson {
    pub schema: u32,
    pub objective_normalized_coupling: f64,
    pub coupling: CouplingSummaryJson,
    pub x_star: Option<f64>,
    pub argmax: Vec<ArgmaxJson>,
    pub binding_constraint: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct CouplingSummaryJson {
    pub n: usize,
    pub m: usize,
    pub omega_n0_rad_s: f64,
    pub omega_m_rad_s: f64,
    pub g_rad_s: f64,
    pub normalized_coupling: f64,
}

impl From<&CouplingReport> for CouplingSummaryJson {
    fn from(r: &CouplingReport) -> Self {
        CouplingSummaryJson {
            n: r.n,
            m: r.m,
            omega_n0_rad_s: r.omega_a,
            omega_m_rad_s: r.omega_b,
            g_rad_s: r.strength,
            normalized_coupling: r.normalized,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ArgmaxJson {
    pub parameter: &'static str,
    pub value: f64,
}
