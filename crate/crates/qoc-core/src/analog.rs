//! The combined circuit: resonator A (two SQUID-terminated lines joined by
//! a coupling capacitor) inductively driven by resonator B (an open-ended
//! line), plus the reference optical-cavity comparison.
//!
//! Opposite flux variations ±δΦ through the two SQUID loops displace the
//! effective "membrane" position ξ = Δd⁽¹⁾·δΦ while keeping the total
//! effective length D_A fixed, so each mode frequency of resonator A shifts
//! quadratically in δΦ. Promoting δΦ to the flux generated by a resonator-B
//! mode produces the quadratic interaction
//!
//! ```text
//! H = ħω_n⁽⁰⁾ a†a + ħΩ_m b†b − ħ g_nm a†a (b† + b)²,
//! g_nm = (−1)ⁿ ω_n⁽⁰⁾ ω_c (Δd⁽¹⁾ G_m)² / (v₀ D_A).
//! ```
//!
//! Conventions: the drive-side zero-point flux uses the h-based
//! normalization Φ_zp = √(h/2Ω_m C_Σ,B); the reference-cavity coupling
//! estimate uses the reduced curvature c·√(2(1−r))/(Lλ²). Both conventions
//! are fixed by the reference datasets this crate reproduces (see README).

use crate::error::{Error, GateRejection};
use crate::math as m;
use crate::membrane::Mode;
use crate::numerics;
use crate::params::{
    CavityBaseline, CoupledPair, LoopGeometry, PhysicalConstants, ResonatorA, ResonatorB,
};
use crate::squid::{linearize_length, LengthLinearization};

use alloc::vec::Vec;
use core::f64::consts::PI;

/// Speed of light in vacuum, m/s (reference-cavity comparison only).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Loop far edge must stay below this fraction of the drive-line length for
/// the thin-wire coupling formulas.
pub const THIN_WIRE_EDGE_FRACTION: f64 = 0.05;

/// Warn when Ω_m/ω_n exceeds this: resonator A no longer follows the drive
/// adiabatically.
pub const ADIABATIC_RATIO_MAX: f64 = 0.1;

/// Which expression evaluates the inductive drive coefficient G_m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingFormula {
    /// Thin-wire field integrated across the loop: ∝ w·ln(s₂/s₁).
    ClosedForm,
    /// Small-loop reduction of the closed form: ∝ A/s₁.
    Simplified,
    /// Numerical Biot–Savart double integral over the loop with the full
    /// mode current profile.
    BiotSavart,
}

/// Validity-regime ratios of resonator A, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeGates {
    /// L_J0/(ℓ_A·D_A); the effective-length model wants ≤ 1e-2.
    pub inductance_ratio: f64,
    /// C_J/(c_A·D_A); the effective-length model wants ≤ 1e-1.
    pub capacitance_ratio: f64,
}

impl RegimeGates {
    pub fn inductance_ok(&self) -> bool {
        self.inductance_ratio <= 1e-2
    }

    pub fn capacitance_ok(&self) -> bool {
        self.capacitance_ratio <= 1e-1
    }
}

/// Whether a drive mode can produce the antisymmetric flux variation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateDecision {
    Accepted,
    Rejected(GateRejection),
}

/// Mode-function parity of a drive mode about z = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// One mode of the open-ended drive resonator B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveMode {
    /// Mode number m ≥ 1.
    pub index: usize,
    /// Angular frequency Ω_m = mπ·v_B/d_B, rad/s.
    pub omega: f64,
    /// Even for even m, odd for odd m.
    pub parity: Parity,
    /// Zero-point flux amplitude √(h/2Ω_m·C_Σ,B), Wb (h-based convention).
    pub zero_point_flux: f64,
}

/// One solved mode of resonator A at a given flux drive, with the
/// small-parameter diagnostic of the effective-length construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub mode: Mode,
    /// ε = k·max(Δd_L, Δd_R); the eigenvalue equation is accurate to O(ε³).
    pub epsilon: f64,
}

/// Quadratic flux-response model of one resonator-A mode,
/// ω_n(δΦ) ≈ ω⁽⁰⁾·[1 − (−1)ⁿ·(κ/ω⁽⁰⁾)·δΦ²].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticShift {
    pub index: usize,
    /// Centered mode frequency ω⁽⁰⁾, rad/s.
    pub omega0: f64,
    /// Curvature scale κ = ω⁽⁰⁾ω_c(Δd⁽¹⁾)²/(v₀D_A), rad/(s·Wb²).
    pub curvature: f64,
}

impl QuadraticShift {
    /// Model frequency at flux offset `delta_flux` (Wb).
    pub fn eval(&self, delta_flux: f64) -> f64 {
        let sign = if self.index % 2 == 0 { 1.0 } else { -1.0 };
        self.omega0 - sign * self.curvature * delta_flux * delta_flux
    }
}

/// Assembled coupling parameters for one (n, m) mode pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingReport {
    pub n: usize,
    pub m: usize,
    /// Centered resonator-A frequency ω_n⁽⁰⁾, rad/s.
    pub omega_a: f64,
    /// Drive-mode frequency Ω_m, rad/s.
    pub omega_b: f64,
    /// Inductive drive coefficient G_m, Wb per (b†+b).
    pub drive_flux: f64,
    /// Quadratic coupling strength g_nm (signed, sign (−1)ⁿ), rad/s.
    pub strength: f64,
    /// Normalized coupling g_nm/Ω_m.
    pub normalized: f64,
    /// g_nm/(ω_n⁽⁰⁾·Ω_m), s; |·| is independent of n and m.
    pub frequency_ratio: f64,
}

/// Hamiltonian-level summary for one (n, m) mode pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianReport {
    pub coupling: CouplingReport,
    /// Zero-point flux of the resonator-A mode, √(ħ/2ω_nC_Σ,A), Wb.
    pub zero_point_flux_a: f64,
    /// Zero-point flux of the drive mode, Wb.
    pub zero_point_flux_b: f64,
    /// Ω_m/ω_n⁽⁰⁾; the drive must stay slow for the dispersive picture.
    pub adiabatic_ratio: f64,
    /// True when the adiabatic ratio exceeds [`ADIABATIC_RATIO_MAX`].
    pub adiabaticity_warning: bool,
}

/// Reference cavity comparison: frequency curvature and normalized
/// quadratic coupling of a membrane-in-the-middle optical cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineReport {
    /// Cavity frequency curvature ω″ = 16π²c·√(2(1−r))/(Lλ²), rad/(s·m²).
    pub curvature: f64,
    /// Normalized quadratic coupling g/Ω from the reduced curvature.
    pub g_over_omega: f64,
}

/// Normalized coupling estimate of the reference optical cavity.
pub fn cavity_baseline(spec: &CavityBaseline, constants: &PhysicalConstants) -> BaselineReport {
    let reduced = SPEED_OF_LIGHT / (spec.cavity_len * spec.wavelength * spec.wavelength)
        * m::sqrt(2.0 * (1.0 - spec.reflectivity));
    BaselineReport {
        curvature: 16.0 * PI * PI * reduced,
        g_over_omega: constants.hbar * reduced
            / (4.0 * spec.membrane_mass * spec.mech_freq * spec.mech_freq),
    }
}

/// g/Ω from a directly specified cavity curvature (rad/(s·m²)).
pub fn baseline_from_curvature(
    curvature: f64,
    membrane_mass: f64,
    mech_freq: f64,
    constants: &PhysicalConstants,
) -> f64 {
    let reduced = curvature / (16.0 * PI * PI);
    constants.hbar * reduced / (4.0 * membrane_mass * mech_freq * mech_freq)
}

/// The full analog system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalogSystem {
    res_a: ResonatorA,
    res_b: ResonatorB,
    geometry: LoopGeometry,
    constants: PhysicalConstants,
}

impl AnalogSystem {
    pub fn new(
        res_a: ResonatorA,
        res_b: ResonatorB,
        geometry: LoopGeometry,
        constants: PhysicalConstants,
    ) -> Result<Self, Error> {
        let half = res_b.line().length() / 2.0;
        if !(geometry.squid_position() < half) {
            return Err(Error::OutOfDomain {
                value: geometry.squid_position(),
                lo: 0.0,
                hi: half,
            });
        }
        Ok(AnalogSystem {
            res_a,
            res_b,
            geometry,
            constants,
        })
    }

    pub fn resonator_a(&self) -> &ResonatorA {
        &self.res_a
    }

    pub fn resonator_b(&self) -> &ResonatorB {
        &self.res_b
    }

    pub fn geometry(&self) -> &LoopGeometry {
        &self.geometry
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    /// Validity-regime ratios of resonator A; callers decide how loudly to
    /// warn when a gate is exceeded.
    pub fn regime_gates(&self) -> RegimeGates {
        RegimeGates {
            inductance_ratio: self.res_a.inductance_gate_ratio(&self.constants),
            capacitance_ratio: self.res_a.capacitance_gate_ratio(&self.constants),
        }
    }

    /// Total effective length D_A of resonator A, m.
    pub fn total_effective_length(&self) -> f64 {
        self.res_a.total_effective_length(&self.constants)
    }

    /// The capacitively-coupled pair equivalent to resonator A at flux
    /// variation δΦ/Φ₀ = `dphi_ratio`, with the exact (non-linearized)
    /// virtual lengths Δd(Φ⁰ ± δΦ).
    pub fn effective_pair(&self, dphi_ratio: f64) -> Result<CoupledPair, Error> {
        let line = self.res_a.line();
        let half = line.length() / 2.0;
        let squid = self.res_a.squid();
        let bias = self.res_a.bias_ratio();
        let dd_left = squid.effective_inductance(&self.constants, bias + dphi_ratio)?
            / line.ind_per_len();
        let dd_right = squid.effective_inductance(&self.constants, bias - dphi_ratio)?
            / line.ind_per_len();
        CoupledPair::new(
            half + dd_left,
            half + dd_right,
            self.res_a.coupling_cap(),
            line.cap_per_len(),
            line.ind_per_len(),
        )
    }

    /// The centered pair of total length D_A used by the flux-response
    /// model (both virtual ends at their nominal extension).
    pub fn centered_pair(&self) -> CoupledPair {
        let line = self.res_a.line();
        let half = self.total_effective_length() / 2.0;
        CoupledPair::new(
            half,
            half,
            self.res_a.coupling_cap(),
            line.cap_per_len(),
            line.ind_per_len(),
        )
        .expect("centered pair inherits validated parameters")
    }

    /// Exact spectrum of resonator A at flux variation δΦ/Φ₀, with the
    /// O(ε³) diagnostic of the effective-length construction per mode.
    pub fn spectrum(&self, dphi_ratio: f64, n_max: usize) -> Result<Vec<SpectrumPoint>, Error> {
        let pair = self.effective_pair(dphi_ratio)?;
        let half = self.res_a.line().length() / 2.0;
        let dd_max = (pair.left_len() - half).max(pair.right_len() - half);
        Ok(pair
            .solve_modes(n_max)?
            .into_iter()
            .map(|mode| SpectrumPoint {
                epsilon: mode.wavenumber * dd_max,
                mode,
            })
            .collect())
    }

    /// Linear flux model of one virtual end at the bias point.
    pub fn length_linearization(&self) -> LengthLinearization {
        linearize_length(
            self.res_a.line().ind_per_len(),
            self.res_a.squid().josephson_energy(),
            self.res_a.bias_ratio(),
            &self.constants,
        )
        .expect("bias validated at construction")
    }

    /// Centered frequency ω_n⁽⁰⁾ of resonator A, rad/s.
    pub fn mode_omega0(&self, n: usize) -> Result<f64, Error> {
        self.centered_pair().mode_omega0(n)
    }

    /// Quadratic flux-response model of mode n.
    pub fn quadratic_shift(&self, n: usize) -> Result<QuadraticShift, Error> {
        let pair = self.centered_pair();
        let omega0 = pair.mode_omega0(n)?;
        let slope = self.length_linearization().slope;
        let curvature = omega0 * pair.coupling_freq() * slope * slope
            / (pair.wave_speed() * self.total_effective_length());
        Ok(QuadraticShift {
            index: n,
            omega0,
            curvature,
        })
    }

    /// First `m_max` drive-resonator modes.
    pub fn resonator_b_modes(&self, m_max: usize) -> Vec<DriveMode> {
        (1..=m_max).map(|m_idx| self.drive_mode(m_idx)).collect()
    }

    /// The m-th drive-resonator mode (m ≥ 1).
    pub fn drive_mode(&self, m_idx: usize) -> DriveMode {
        let line = self.res_b.line();
        let omega = m_idx as f64 * PI * line.wave_speed() / line.length();
        DriveMode {
            index: m_idx,
            omega,
            parity: if m_idx % 2 == 0 { Parity::Even } else { Parity::Odd },
            zero_point_flux: m::sqrt(
                self.constants.planck() / (2.0 * omega * self.res_b.total_cap()),
            ),
        }
    }

    /// Normalized drive mode function u_m(z) on |z| ≤ d_B/2:
    /// √2·sin(mπz/d_B) for odd m, √2·cos(mπz/d_B) for even m.
    pub fn drive_mode_function(&self, mode: &DriveMode, z: f64) -> Result<f64, Error> {
        let half = self.res_b.line().length() / 2.0;
        if !(-half..=half).contains(&z) {
            return Err(Error::OutOfDomain { value: z, lo: -half, hi: half });
        }
        let arg = mode.index as f64 * PI * z / self.res_b.line().length();
        Ok(match mode.parity {
            Parity::Odd => m::sqrt(2.0) * m::sin(arg),
            Parity::Even => m::sqrt(2.0) * m::cos(arg),
        })
    }

    /// Spatial derivative u_m'(z) of the drive mode function.
    pub fn drive_mode_slope(&self, mode: &DriveMode, z: f64) -> Result<f64, Error> {
        let half = self.res_b.line().length() / 2.0;
        if !(-half..=half).contains(&z) {
            return Err(Error::OutOfDomain { value: z, lo: -half, hi: half });
        }
        let d_b = self.res_b.line().length();
        let k = mode.index as f64 * PI / d_b;
        let arg = k * z;
        Ok(match mode.parity {
            Parity::Odd => m::sqrt(2.0) * k * m::cos(arg),
            Parity::Even => -m::sqrt(2.0) * k * m::sin(arg),
        })
    }

    /// Whether a drive mode can apply opposite flux variations through the
    /// two loops: the mode must be even and the loops must not sit on a
    /// current node.
    pub fn parity_gate(&self, mode: &DriveMode) -> GateDecision {
        if mode.parity == Parity::Odd {
            return GateDecision::Rejected(GateRejection::OddParity);
        }
        let slope = self
            .drive_mode_slope(mode, self.geometry.squid_position())
            .expect("loop position validated at construction");
        let slope_scale = m::sqrt(2.0) * mode.index as f64 * PI / self.res_b.line().length();
        if m::fabs(slope) <= 1e-9 * slope_scale {
            return GateDecision::Rejected(GateRejection::CurrentNode);
        }
        GateDecision::Accepted
    }

    /// Zero-point current amplitude of the drive mode at the loop position,
    /// A per (b†+b) (signed by the local current direction).
    fn drive_current_at_loop(&self, mode: &DriveMode) -> Result<f64, Error> {
        match self.parity_gate(mode) {
            GateDecision::Accepted => {}
            GateDecision::Rejected(reason) => return Err(Error::ParityRejected(reason)),
        }
        let slope = self.drive_mode_slope(mode, self.geometry.squid_position())?;
        Ok(-mode.zero_point_flux * slope / self.res_b.line().ind_per_len())
    }

    /// Inductive drive coefficient G_m (Wb per (b†+b)), positive branch.
    pub fn inductive_coupling(
        &self,
        m_idx: usize,
        formula: CouplingFormula,
    ) -> Result<f64, Error> {
        let mode = self.drive_mode(m_idx);
        let geom = &self.geometry;
        let d_b = self.res_b.line().length();
        match formula {
            CouplingFormula::ClosedForm | CouplingFormula::Simplified => {
                let limit = THIN_WIRE_EDGE_FRACTION * d_b;
                if geom.far_edge() >= limit {
                    return Err(Error::GeometryOutOfRegime {
                        far_edge: geom.far_edge(),
                        limit,
                    });
                }
                let current = m::fabs(self.drive_current_at_loop(&mode)?);
                let radial = match formula {
                    CouplingFormula::ClosedForm => {
                        geom.width() * m::log(geom.far_edge() / geom.near_edge())
                    }
                    _ => geom.area() / geom.near_edge(),
                };
                Ok(self.constants.mu0 * current * radial / (2.0 * PI))
            }
            CouplingFormula::BiotSavart => Ok(m::fabs(self.biot_savart_flux_signed(&mode)?)),
        }
    }

    /// Signed loop flux per (b†+b) from the Biot–Savart field of the full
    /// mode current distribution. The transverse integral is analytic; the
    /// longitudinal integral is adaptive to a 1e-8 relative target.
    pub fn biot_savart_flux_signed(&self, mode: &DriveMode) -> Result<f64, Error> {
        match self.parity_gate(mode) {
            GateDecision::Accepted => {}
            GateDecision::Rejected(reason) => return Err(Error::ParityRejected(reason)),
        }
        let geom = &self.geometry;
        let d_b = self.res_b.line().length();
        let half = d_b / 2.0;
        let z0 = geom.squid_position();
        let (s1, s2) = (geom.near_edge(), geom.far_edge());
        let current_scale = -mode.zero_point_flux / self.res_b.line().ind_per_len();

        // ∫ s ds/[s² + τ²]^{3/2} from s1 to s2 has a closed form; only the
        // longitudinal integral over the current profile stays numeric
        let integrand = |z: f64| {
            let slope = self.drive_mode_slope(mode, z).unwrap_or(0.0);
            let tau = z0 - z;
            let kernel = 1.0 / m::sqrt(s1 * s1 + tau * tau) - 1.0 / m::sqrt(s2 * s2 + tau * tau);
            current_scale * slope * kernel
        };
        // the kernel is sharply peaked within ~s2 of the loop position
        let breaks = [
            z0 - 50.0 * s2,
            z0 - s2,
            z0,
            z0 + s2,
            z0 + 50.0 * s2,
        ];
        let field_integral = numerics::integrate_split(&integrand, -half, half, &breaks, 1e-9)?;
        Ok(self.constants.mu0 * geom.width() * field_integral / (4.0 * PI))
    }

    /// Three-mode coupling tensor γ_nml = (−1)ⁿ ω_n⁽⁰⁾ω_c Δd⁽¹⁾² G_mG_l /
    /// (v₀D_A), rad/s, with the simplified small-loop G coefficients.
    pub fn coupling_tensor(&self, n: usize, m_idx: usize, l_idx: usize) -> Result<f64, Error> {
        let g_m = self.inductive_coupling(m_idx, CouplingFormula::Simplified)?;
        let g_l = if l_idx == m_idx {
            g_m
        } else {
            self.inductive_coupling(l_idx, CouplingFormula::Simplified)?
        };
        let pair = self.centered_pair();
        let omega0 = pair.mode_omega0(n)?;
        let slope = self.length_linearization().slope;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        Ok(sign * omega0 * pair.coupling_freq() * slope * slope * g_m * g_l
            / (pair.wave_speed() * self.total_effective_length()))
    }

    /// Quadratic coupling strength g_nm in the direct circuit-parameter
    /// form g = (−1)ⁿ (ω_n⁽⁰⁾c_A/C_cD_A)·(G_mΦ₀/4πℓ_AE_J0)²·tan²(πΦ⁰/Φ₀);
    /// algebraically identical to [`AnalogSystem::coupling_tensor`] with
    /// m = l.
    pub fn coupling_strength_closed_form(&self, n: usize, m_idx: usize) -> Result<f64, Error> {
        let g_m = self.inductive_coupling(m_idx, CouplingFormula::Simplified)?;
        let omega0 = self.mode_omega0(n)?;
        let line = self.res_a.line();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let tuning = g_m * self.constants.flux_quantum
            / (4.0 * PI * line.ind_per_len() * self.res_a.squid().josephson_energy());
        let tan = m::tan(PI * self.res_a.bias_ratio());
        Ok(sign * omega0 * line.cap_per_len()
            / (self.res_a.coupling_cap() * self.total_effective_length())
            * tuning
            * tuning
            * tan
            * tan)
    }

    /// Assembled coupling report for the (n, m) mode pair, using the
    /// simplified drive coefficient.
    pub fn coupling_strength(&self, n: usize, m_idx: usize) -> Result<CouplingReport, Error> {
        self.coupling_strength_with(n, m_idx, CouplingFormula::Simplified)
    }

    /// Coupling report with an explicit choice of drive-coefficient
    /// formula.
    pub fn coupling_strength_with(
        &self,
        n: usize,
        m_idx: usize,
        formula: CouplingFormula,
    ) -> Result<CouplingReport, Error> {
        let drive_flux = self.inductive_coupling(m_idx, formula)?;
        let pair = self.centered_pair();
        let omega_a = pair.mode_omega0(n)?;
        let omega_b = self.drive_mode(m_idx).omega;
        let slope = self.length_linearization().slope;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let strength = sign * omega_a * pair.coupling_freq() * m::sq(slope * drive_flux)
            / (pair.wave_speed() * self.total_effective_length());
        Ok(CouplingReport {
            n,
            m: m_idx,
            omega_a,
            omega_b,
            drive_flux,
            strength,
            normalized: strength / omega_b,
            frequency_ratio: strength / (omega_a * omega_b),
        })
    }

    /// Hamiltonian-level summary with zero-point amplitudes and the
    /// adiabaticity diagnostic.
    pub fn hamiltonian_report(&self, n: usize, m_idx: usize) -> Result<HamiltonianReport, Error> {
        self.hamiltonian_report_with(n, m_idx, CouplingFormula::Simplified)
    }

    /// As [`AnalogSystem::hamiltonian_report`] with an explicit choice of
    /// drive-coefficient formula.
    pub fn hamiltonian_report_with(
        &self,
        n: usize,
        m_idx: usize,
        formula: CouplingFormula,
    ) -> Result<HamiltonianReport, Error> {
        let coupling = self.coupling_strength_with(n, m_idx, formula)?;
        let line = self.res_a.line();
        let cap_total = line.total_cap()
            + 2.0 * self.res_a.squid().junction_cap()
            + self.res_a.coupling_cap();
        let adiabatic_ratio = coupling.omega_b / coupling.omega_a;
        Ok(HamiltonianReport {
            coupling,
            zero_point_flux_a: m::sqrt(
                self.constants.hbar / (2.0 * coupling.omega_a * cap_total),
            ),
            zero_point_flux_b: self.drive_mode(m_idx).zero_point_flux,
            adiabatic_ratio,
            adiabaticity_warning: adiabatic_ratio > ADIABATIC_RATIO_MAX,
        })
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::params::{Squid, TransmissionLine};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    /// The reference circuit: d_A = d_B/20 = 20 mm, ℓ = 4.57e-7 H/m,
    /// c = 1.46e-10 F/m, C_c = 1 fF, C_J = 30 fF, E_J0 = 6.17e-22 J,
    /// loop area ratio A/(d_B·s1) = 1e-3 at the m = 2 current antinode.
    pub(crate) fn reference_system(bias: f64) -> AnalogSystem {
        let constants = PhysicalConstants::si();
        let line_a = TransmissionLine::new(0.02, 1.46e-10, 4.57e-7).unwrap();
        let line_b = TransmissionLine::new(0.4, 1.46e-10, 4.57e-7).unwrap();
        let squid = Squid::new(6.17e-22, 30e-15).unwrap();
        let res_a = ResonatorA::new(line_a, 1e-15, squid, bias).unwrap();
        let res_b = ResonatorB::new(line_b);
        // s2 close to s1 so the small-loop reduction applies;
        // w·(s2-s1)/(d_B·s1) = 1e-3
        let s1 = 4e-5;
        let s2 = 4.08e-5;
        let width = 1e-3 * 0.4 * s1 / (s2 - s1);
        let geometry = LoopGeometry::new(0.1, s1, s2, width).unwrap();
        AnalogSystem::new(res_a, res_b, geometry, constants).unwrap()
    }

    #[test]
    fn reference_system_gates_pass() {
        let sys = reference_system(0.4);
        let gates = sys.regime_gates();
        assert!(gates.inductance_ok(), "L ratio {}", gates.inductance_ratio);
        assert!(gates.capacitance_ok(), "C ratio {}", gates.capacitance_ratio);
        assert!(rel(sys.geometry().area() / (0.4 * 4e-5), 1e-3) < 1e-12);
    }

    #[test]
    fn spectrum_symmetric_at_zero_drive() {
        let sys = reference_system(0.4);
        let pair = sys.effective_pair(0.0).unwrap();
        assert!(pair.displacement().abs() < 1e-18);
        // drive sign does not matter
        let plus = sys.spectrum(0.005, 3).unwrap();
        let minus = sys.spectrum(-0.005, 3).unwrap();
        for (a, b) in plus.iter().zip(minus.iter()) {
            assert!(rel(a.mode.omega, b.mode.omega) < 1e-10);
        }
        for point in &plus {
            assert!(point.epsilon > 0.0 && point.epsilon < 1.0);
        }
    }

    #[test]
    fn drive_shifts_split_by_mode_parity() {
        // even modes shift down, odd modes up
        let sys = reference_system(0.4);
        let centered = sys.spectrum(0.0, 5).unwrap();
        let driven = sys.spectrum(0.005, 5).unwrap();
        for (c, d) in centered.iter().zip(driven.iter()) {
            let shift = d.mode.omega - c.mode.omega;
            if c.mode.index % 2 == 0 {
                assert!(shift < 0.0, "even mode {} shift {shift}", c.mode.index);
            } else {
                assert!(shift > 0.0, "odd mode {} shift {shift}", c.mode.index);
            }
        }
    }

    #[test]
    fn quadratic_model_matches_spectrum_curvature_at_tangent_bias() {
        // at Φ⁰ = Φ0/3 the linear length model is the exact tangent, so the
        // quadratic model reproduces the finite-difference curvature of the
        // exact spectrum
        let sys = reference_system(1.0 / 3.0);
        let phi0 = sys.constants().flux_quantum;
        let step_ratio = 1.0 / 2000.0;
        let step = step_ratio * phi0;
        for n in 0..=3usize {
            let shift = sys.quadratic_shift(n).unwrap();
            let center = sys.spectrum(0.0, n).unwrap()[n].mode.omega;
            let plus = sys.spectrum(step_ratio, n).unwrap()[n].mode.omega;
            let minus = sys.spectrum(-step_ratio, n).unwrap()[n].mode.omega;
            let fd = (plus - 2.0 * center + minus) / (step * step);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let model = -2.0 * sign * shift.curvature;
            assert!(
                rel(fd, model) < 5e-2,
                "n={n}: fd {fd:e} vs model {model:e}"
            );
        }
    }

    #[test]
    fn no_quadratic_response_at_zero_bias() {
        let sys = reference_system(0.0);
        let shift = sys.quadratic_shift(1).unwrap();
        assert_eq!(shift.curvature, 0.0);
        assert_eq!(sys.coupling_strength(1, 2).unwrap().strength, 0.0);
    }

    #[test]
    fn total_effective_length_conserved_to_second_order() {
        // at the tangent bias, D(δΦ) − D_A stays within the curvature bound
        let sys = reference_system(1.0 / 3.0);
        let d_ref = sys.total_effective_length();
        let phi0 = sys.constants().flux_quantum;
        for step in [1e-3, 5e-3, 1e-2] {
            let pair = sys.effective_pair(step).unwrap();
            let drift = (pair.total_len() - d_ref).abs();
            // Δd″ of the sec-shaped length at Φ0/3
            let lj0_over_ell = sys.resonator_a().squid().zero_flux_inductance(sys.constants())
                / sys.resonator_a().line().ind_per_len();
            let curvature = lj0_over_ell * (PI / phi0) * (PI / phi0) * 14.0;
            let bound = curvature * (step * phi0) * (step * phi0) * 1.02;
            assert!(drift <= bound, "step {step}: drift {drift:e} bound {bound:e}");
        }
    }

    #[test]
    fn drive_modes_and_parity() {
        let sys = reference_system(0.4);
        let modes = sys.resonator_b_modes(4);
        let v_b = sys.resonator_b().line().wave_speed();
        for (i, mode) in modes.iter().enumerate() {
            let m_idx = i + 1;
            assert_eq!(mode.index, m_idx);
            assert!(rel(mode.omega, m_idx as f64 * PI * v_b / 0.4) < 1e-12);
            assert_eq!(mode.parity, if m_idx % 2 == 0 { Parity::Even } else { Parity::Odd });
        }
        // Ω_2 ≈ 1.92e9 rad/s for the reference drive line
        assert!(rel(modes[1].omega, 1.923e9) < 1e-3);

        // parity of the mode functions: u(−z) = ±u(z)
        for mode in &modes {
            let (a, b) = (
                sys.drive_mode_function(mode, 0.13).unwrap(),
                sys.drive_mode_function(mode, -0.13).unwrap(),
            );
            match mode.parity {
                Parity::Even => assert!(rel(a, b) < 1e-12),
                Parity::Odd => assert!(rel(a, -b) < 1e-12),
            }
        }
    }

    #[test]
    fn drive_mode_orthogonality() {
        // ∫ c_B u_m u_l dz = c_B d_B δ_ml
        let sys = reference_system(0.4);
        let modes = sys.resonator_b_modes(4);
        let half = 0.2;
        for a in &modes {
            for b in &modes {
                let f = |z: f64| {
                    sys.drive_mode_function(a, z).unwrap() * sys.drive_mode_function(b, z).unwrap()
                };
                let overlap = numerics::integrate(&f, -half, half, 1e-11).unwrap();
                let expect = if a.index == b.index { 0.4 } else { 0.0 };
                assert!((overlap - expect).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn parity_gate_examples() {
        let sys = reference_system(0.4);
        // m = 2 with the loop at z0 = d_B/4: mode-function node, current
        // antinode — accepted
        assert_eq!(sys.parity_gate(&sys.drive_mode(2)), GateDecision::Accepted);
        // odd m always rejected
        assert_eq!(
            sys.parity_gate(&sys.drive_mode(3)),
            GateDecision::Rejected(GateRejection::OddParity)
        );
        // m = 4 puts a current node at d_B/4
        assert_eq!(
            sys.parity_gate(&sys.drive_mode(4)),
            GateDecision::Rejected(GateRejection::CurrentNode)
        );
        assert!(matches!(
            sys.inductive_coupling(3, CouplingFormula::Simplified),
            Err(Error::ParityRejected(GateRejection::OddParity))
        ));
    }

    #[test]
    fn closed_form_reduces_to_simplified_for_thin_loops() {
        let sys = reference_system(0.4);
        let closed = sys.inductive_coupling(2, CouplingFormula::ClosedForm).unwrap();
        let simple = sys.inductive_coupling(2, CouplingFormula::Simplified).unwrap();
        // s2/s1 = 1.02: ln(1+x) ≈ x to 1%
        assert!(rel(closed, simple) < 1.1e-2);
        assert!(closed < simple);
    }

    #[test]
    fn biot_savart_agrees_with_closed_form() {
        let sys = reference_system(0.4);
        let closed = sys.inductive_coupling(2, CouplingFormula::ClosedForm).unwrap();
        let numeric = sys.inductive_coupling(2, CouplingFormula::BiotSavart).unwrap();
        assert!(rel(numeric, closed) < 2e-2, "{numeric:e} vs {closed:e}");
    }

    #[test]
    fn biot_savart_sign_flips_between_adjacent_antinodes() {
        // m = 6 has current antinodes at z = d_B/12 and d_B/4 with opposite
        // current directions
        let sys = reference_system(0.4);
        let constants = *sys.constants();
        let at = |z0: f64| {
            let geom = LoopGeometry::new(z0, 4e-5, 4.08e-5, sys.geometry().width()).unwrap();
            let probe = AnalogSystem::new(*sys.resonator_a(), *sys.resonator_b(), geom, constants)
                .unwrap();
            probe.biot_savart_flux_signed(&probe.drive_mode(6)).unwrap()
        };
        let first = at(0.4 / 12.0);
        let second = at(0.4 / 4.0);
        assert!(first * second < 0.0, "{first:e} vs {second:e}");
    }

    #[test]
    fn geometry_out_of_regime_rejected_for_closed_form() {
        let sys = reference_system(0.4);
        let geom = LoopGeometry::new(0.1, 0.01, 0.03, 1e-3).unwrap();
        let wide =
            AnalogSystem::new(*sys.resonator_a(), *sys.resonator_b(), geom, *sys.constants())
                .unwrap();
        assert!(matches!(
            wide.inductive_coupling(2, CouplingFormula::ClosedForm),
            Err(Error::GeometryOutOfRegime { .. })
        ));
        // the numeric route has no thin-wire restriction
        assert!(wide.inductive_coupling(2, CouplingFormula::BiotSavart).is_ok());
    }

    #[test]
    fn tensor_and_closed_form_agree() {
        let sys = reference_system(0.4);
        for n in 0..4usize {
            let tensor = sys.coupling_tensor(n, 2, 2).unwrap();
            let closed = sys.coupling_strength_closed_form(n, 2).unwrap();
            assert!(rel(tensor, closed) < 1e-12, "n={n}");
            let report = sys.coupling_strength(n, 2).unwrap();
            assert!(rel(report.strength, tensor) < 1e-12);
            // sign alternation (−1)ⁿ
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!(report.strength * sign > 0.0);
        }
    }

    #[test]
    fn frequency_ratio_independent_of_modes() {
        let sys = reference_system(0.4);
        let reference = sys.coupling_strength(1, 2).unwrap().frequency_ratio.abs();
        for n in 0..3usize {
            for m_idx in [2usize, 4, 6] {
                // move the loop onto a current antinode of each drive mode
                let z0 = 0.4 / (2.0 * m_idx as f64);
                let geom =
                    LoopGeometry::new(z0, 4e-5, 4.08e-5, sys.geometry().width()).unwrap();
                let probe = AnalogSystem::new(
                    *sys.resonator_a(),
                    *sys.resonator_b(),
                    geom,
                    *sys.constants(),
                )
                .unwrap();
                let ratio = probe.coupling_strength(n, m_idx).unwrap().frequency_ratio.abs();
                assert!(rel(ratio, reference) < 1e-10, "n={n} m={m_idx}");
            }
        }
    }

    #[test]
    fn headline_normalized_coupling_scale() {
        // reference circuit at Φ⁰ = 0.4Φ0: |g12|/Ω2 ≈ 1e-5
        let sys = reference_system(0.4);
        let report = sys.coupling_strength(1, 2).unwrap();
        assert!(report.normalized.abs() > 5e-6 && report.normalized.abs() < 2e-5);
        assert!(report.strength < 0.0); // n = 1 carries sign (−1)¹
    }

    #[test]
    fn hamiltonian_report_adiabaticity() {
        let sys = reference_system(0.4);
        let report = sys.hamiltonian_report(1, 2).unwrap();
        assert!(report.adiabatic_ratio < ADIABATIC_RATIO_MAX * 1.1);
        assert!(!report.adiabaticity_warning || report.adiabatic_ratio > ADIABATIC_RATIO_MAX);
        assert!(report.zero_point_flux_a > 0.0 && report.zero_point_flux_b > 0.0);
        // drive zero-point flux: √(h/2ΩC) with C = c_B d_B
        let expect = m::sqrt(
            sys.constants().planck() / (2.0 * report.coupling.omega_b * 1.46e-10 * 0.4),
        );
        assert!(rel(report.zero_point_flux_b, expect) < 1e-12);
    }

    #[test]
    fn cavity_baseline_reference_points() {
        let constants = PhysicalConstants::si();
        // membrane cavity: L = 6.7 cm, r = 0.999, λ = 532 nm, m = 50 pg,
        // Ω/2π = 100 kHz
        let spec = CavityBaseline::new(0.067, 0.999, 532e-9, 50e-15, 2.0 * PI * 1e5).unwrap();
        let report = cavity_baseline(&spec, &constants);
        // curvature ≈ 2π × 18 kHz/nm²
        let khz_per_nm2 = report.curvature * 1e-18 / (2.0 * PI * 1e3);
        assert!((khz_per_nm2 - 18.0).abs() < 0.5, "{khz_per_nm2}");
        assert!(rel(report.g_over_omega, 9.4e-13) < 1e-2, "{:e}", report.g_over_omega);

        // tilted-membrane curvature 2π × 10 MHz/nm² with the same membrane
        let curvature = 2.0 * PI * 10e6 * 1e18;
        let g_over = baseline_from_curvature(curvature, 50e-15, 2.0 * PI * 1e5, &constants);
        assert!(rel(g_over, 5.3e-10) < 1e-2, "{g_over:e}");

        // perfect mirror: no quadratic response
        let perfect = CavityBaseline::new(0.067, 1.0 - 1e-15, 532e-9, 50e-15, 2.0 * PI * 1e5)
            .unwrap();
        assert!(cavity_baseline(&perfect, &constants).curvature < report.curvature * 1e-5);
    }
}
