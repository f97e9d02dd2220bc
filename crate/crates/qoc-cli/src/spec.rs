//! JSON spec files: schema-versioned circuit descriptions with
//! unit-suffixed keys, deserialized into the core types.

use qoc_core::params::{
    CavityBaseline, CoupledPair, LoopGeometry, ResonatorA, ResonatorB, Squid, TransmissionLine,
};
use qoc_core::squid::TunableResonator;
use qoc_core::analog::AnalogSystem;
use qoc_core::PhysicalConstants;

use serde::Deserialize;
use std::fs;
use std::path::Path;

/// Supported spec-file schema version.
pub const SCHEMA_VERSION: u32 = 1;

/// Errors while loading a spec file; all of them are usage errors.
#[derive(Debug)]
pub enum SpecError {
    Io(std::io::Error),
    Parse(serde_json::Error),
    Schema(u32),
    /// The file parsed but violates a physical invariant.
    Invalid(qoc_core::Error),
}

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpecError::Io(e) => write!(f, "cannot read spec file: {e}"),
            SpecError::Parse(e) => write!(f, "spec file is not valid JSON for this schema: {e}"),
            SpecError::Schema(found) => write!(
                f,
                "unsupported spec schema {found} (this build reads schema {SCHEMA_VERSION})"
            ),
            SpecError::Invalid(e) => write!(f, "spec violates an invariant: {e}"),
        }
    }
}

impl std::error::Error for SpecError {}

impl From<std::io::Error> for SpecError {
    fn from(e: std::io::Error) -> Self {
        SpecError::Io(e)
    }
}

impl From<serde_json::Error> for SpecError {
    fn from(e: serde_json::Error) -> Self {
        SpecError::Parse(e)
    }
}

fn check_schema(schema: u32) -> Result<(), SpecError> {
    if schema == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(SpecError::Schema(schema))
    }
}

/// Full analog system: resonator A, resonator B, and the loop placement.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpecFile {
    pub schema: u32,
    pub resonator_a: ResonatorAFile,
    pub resonator_b: LineFile,
    pub loop_geometry: LoopFile,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonatorAFile {
    pub length_m: f64,
    #[serde(rename = "cap_per_m_F")]
    pub cap_per_m_f: f64,
    #[serde(rename = "ell_per_m_H")]
    pub ell_per_m_h: f64,
    #[serde(rename = "coupling_cap_F")]
    pub coupling_cap_f: f64,
    #[serde(rename = "josephson_energy_J")]
    pub josephson_energy_j: f64,
    #[serde(rename = "junction_cap_F")]
    pub junction_cap_f: f64,
    pub bias_flux_over_phi0: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineFile {
    pub length_m: f64,
    #[serde(rename = "cap_per_m_F")]
    pub cap_per_m_f: f64,
    #[serde(rename = "ell_per_m_H")]
    pub ell_per_m_h: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopFile {
    pub position_m: f64,
    pub near_edge_m: f64,
    pub far_edge_m: f64,
    pub width_m: f64,
}

impl SystemSpecFile {
    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let text = fs::read_to_string(path)?;
        let file: SystemSpecFile = serde_json::from_str(&text)?;
        check_schema(file.schema)?;
        Ok(file)
    }

    /// Build the core system, optionally overriding the bias flux.
    pub fn build(
        &self,
        bias_override: Option<f64>,
        constants: PhysicalConstants,
    ) -> Result<AnalogSystem, qoc_core::Error> {
        let a = &self.resonator_a;
        let line_a = TransmissionLine::new(a.length_m, a.cap_per_m_f, a.ell_per_m_h)?;
        let squid = Squid::new(a.josephson_energy_j, a.junction_cap_f)?;
        let bias = bias_override.unwrap_or(a.bias_flux_over_phi0);
        let res_a = ResonatorA::new(line_a, a.coupling_cap_f, squid, bias)?;
        let b = &self.resonator_b;
        let res_b = ResonatorB::new(TransmissionLine::new(b.length_m, b.cap_per_m_f, b.ell_per_m_h)?);
        let g = &self.loop_geometry;
        let geometry = LoopGeometry::new(g.position_m, g.near_edge_m, g.far_edge_m, g.width_m)?;
        AnalogSystem::new(res_a, res_b, geometry, constants)
    }

    pub fn system(&self, constants: PhysicalConstants) -> Result<AnalogSystem, qoc_core::Error> {
        self.build(None, constants)
    }
}

/// Two capacitively-coupled grounded lines.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpecFile {
    pub schema: u32,
    pub left_len_m: f64,
    pub right_len_m: f64,
    #[serde(rename = "coupling_cap_F")]
    pub coupling_cap_f: f64,
    #[serde(rename = "cap_per_m_F")]
    pub cap_per_m_f: f64,
    #[serde(rename = "ell_per_m_H")]
    pub ell_per_m_h: f64,
}

impl PairSpecFile {
    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let text = fs::read_to_string(path)?;
        let file: PairSpecFile = serde_json::from_str(&text)?;
        check_schema(file.schema)?;
        Ok(file)
    }

    pub fn pair(&self) -> Result<CoupledPair, qoc_core::Error> {
        CoupledPair::new(
            self.left_len_m,
            self.right_len_m,
            self.coupling_cap_f,
            self.cap_per_m_f,
            self.ell_per_m_h,
        )
    }

    /// Pair with the capacitor displacement and coupling frequency
    /// overridden (displacement in units of the total length, coupling
    /// frequency in units of v₀/d).
    pub fn pair_with(
        &self,
        xi_over_d: Option<f64>,
        omega_c_over: Option<f64>,
    ) -> Result<CoupledPair, qoc_core::Error> {
        let total = self.left_len_m + self.right_len_m;
        let base_xi = 0.5 * (self.left_len_m - self.right_len_m) / total;
        let xi = xi_over_d.unwrap_or(base_xi) * total;
        let coupling_cap = match omega_c_over {
            Some(ratio) => {
                let line = TransmissionLine::new(total, self.cap_per_m_f, self.ell_per_m_h)?;
                let omega_c = ratio * line.wave_speed() / total;
                1.0 / (line.impedance() * omega_c)
            }
            None => self.coupling_cap_f,
        };
        CoupledPair::symmetric(total, xi, coupling_cap, self.cap_per_m_f, self.ell_per_m_h)
    }
}

/// A SQUID-terminated line.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TunableSpecFile {
    pub schema: u32,
    pub length_m: f64,
    #[serde(rename = "cap_per_m_F")]
    pub cap_per_m_f: f64,
    #[serde(rename = "ell_per_m_H")]
    pub ell_per_m_h: f64,
    #[serde(rename = "josephson_energy_J")]
    pub josephson_energy_j: f64,
    #[serde(rename = "junction_cap_F")]
    pub junction_cap_f: f64,
    pub flux_over_phi0: f64,
}

impl TunableSpecFile {
    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let text = fs::read_to_string(path)?;
        let file: TunableSpecFile = serde_json::from_str(&text)?;
        check_schema(file.schema)?;
        Ok(file)
    }

    pub fn resonator(
        &self,
        flux_override: Option<f64>,
        constants: PhysicalConstants,
    ) -> Result<TunableResonator, qoc_core::Error> {
        let line = TransmissionLine::new(self.length_m, self.cap_per_m_f, self.ell_per_m_h)?;
        let squid = Squid::new(self.josephson_energy_j, self.junction_cap_f)?;
        TunableResonator::new(
            line,
            squid,
            flux_override.unwrap_or(self.flux_over_phi0),
            constants,
        )
    }
}

/// Reference-cavity comparison entries.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineSpecFile {
    pub schema: u32,
    pub entries: Vec<BaselineEntryFile>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineEntryFile {
    pub label: String,
    /// Either the cavity geometry (curvature computed from it) ...
    #[serde(default)]
    pub cavity_len_m: Option<f64>,
    #[serde(default)]
    pub reflectivity: Option<f64>,
    #[serde(default)]
    pub wavelength_m: Option<f64>,
    /// ... or the frequency curvature directly.
    #[serde(default)]
    pub curvature_rad_s_m2: Option<f64>,
    pub membrane_mass_kg: f64,
    pub mech_freq_rad_s: f64,
}

/// A resolved baseline entry: geometry-based or curvature-based.
pub enum BaselineEntry {
    Cavity { label: String, spec: CavityBaseline },
    Curvature { label: String, curvature: f64, membrane_mass: f64, mech_freq: f64 },
}

impl BaselineSpecFile {
    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let text = fs::read_to_string(path)?;
        let file: BaselineSpecFile = serde_json::from_str(&text)?;
        check_schema(file.schema)?;
        Ok(file)
    }

    pub fn entries(&self) -> Result<Vec<BaselineEntry>, SpecError> {
        self.entries
            .iter()
            .map(|e| match (e.cavity_len_m, e.reflectivity, e.wavelength_m, e.curvature_rad_s_m2) {
                (Some(len), Some(r), Some(lam), None) => Ok(BaselineEntry::Cavity {
                    label: e.label.clone(),
                    spec: CavityBaseline::new(len, r, lam, e.membrane_mass_kg, e.mech_freq_rad_s)
                        .map_err(SpecError::Invalid)?,
                }),
                (None, None, None, Some(curv)) => Ok(BaselineEntry::Curvature {
                    label: e.label.clone(),
                    curvature: curv,
                    membrane_mass: e.membrane_mass_kg,
                    mech_freq: e.mech_freq_rad_s,
                }),
                _ => Err(SpecError::Parse(serde_json::Error::io(std::io::Error::new(
                    std::io::ErrorKind::InvalidData,
                    "baseline entry needs either (cavity_len_m, reflectivity, wavelength_m) \
                     or curvature_rad_s_m2, not a mixture",
                )))),
            })
            .collect()
    }
}
