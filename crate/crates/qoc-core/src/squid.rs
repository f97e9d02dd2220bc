//! Eigenmodes and effective length of a SQUID-terminated transmission-line
//! resonator.
//!
//! The SQUID at x = 0 behaves as a flux-tunable inductor shunted by the
//! junction capacitance; the far end x = d is grounded. Normal-mode
//! frequencies solve
//!
//! ```text
//! tan(ω d/v₀) = -(ω/v₀)·(L_J/ℓ₀)/(1 - (ω/ω_J)²)
//! ```
//!
//! Far below the plasma frequency ω_J the SQUID acts as an extra resonator
//! length Δd = L_J/ℓ₀, so k_n ≈ nπ/(d + Δd); the solver tags every mode
//! with η = ω/ω_J and flags the ones where that picture degrades.

use crate::error::Error;
use crate::math as m;
use crate::numerics;
use crate::params::{flux_cos_abs, PhysicalConstants, Squid, TransmissionLine, HALF_FLUX_COS_GUARD};

use alloc::vec::Vec;
use core::f64::consts::PI;

/// Modes with ω/ω_J above this are flagged: the effective-length picture
/// visibly degrades there.
pub const ETA_RELIABLE_MAX: f64 = 0.3;

/// A SQUID-terminated resonator at a fixed external flux.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunableResonator {
    line: TransmissionLine,
    squid: Squid,
    flux_ratio: f64,
    constants: PhysicalConstants,
}

/// One solved eigenmode of the tunable resonator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquidMode {
    /// Mode number n ≥ 1 in the effective-length labeling.
    pub index: usize,
    /// Angular frequency, rad/s.
    pub omega: f64,
    /// Wavenumber k = ω/v₀, 1/m.
    pub wavenumber: f64,
    /// Mode-function normalization constant.
    pub normalization: f64,
    /// η = ω/ω_J, the ratio to the SQUID plasma frequency.
    pub eta: f64,
    /// Residual of the eigenvalue equation after refinement.
    pub residual: f64,
    /// True when η exceeds [`ETA_RELIABLE_MAX`], so the effective-length
    /// interpretation of this mode is unreliable.
    pub effective_length_unreliable: bool,
}

/// Linear model of the flux-tuned virtual length around a bias point,
/// Δd(Φ⁰ + δΦ) ≈ Δd⁽⁰⁾ + Δd⁽¹⁾·δΦ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthLinearization {
    /// Δd⁽⁰⁾ = (Φ₀/2π)²/(ℓ₀E_J0), m.
    pub nominal: f64,
    /// Δd⁽¹⁾ = ½(Φ₀/2π)·tan(πΦ⁰/Φ₀)/(ℓ₀E_J0), m/Wb.
    pub slope: f64,
    /// Bias flux Φ⁰/Φ₀ the model is anchored to.
    pub bias_ratio: f64,
}

impl LengthLinearization {
    /// Predicted virtual length at flux offset `delta_flux` (Wb).
    pub fn eval(&self, delta_flux: f64) -> f64 {
        self.nominal + self.slope * delta_flux
    }
}

/// Linear flux model of the virtual length for a line/SQUID combination.
pub fn linearize_length(
    ind_per_len: f64,
    josephson_energy: f64,
    bias_ratio: f64,
    constants: &PhysicalConstants,
) -> Result<LengthLinearization, Error> {
    if flux_cos_abs(bias_ratio) < HALF_FLUX_COS_GUARD {
        return Err(Error::HalfQuantumFlux { flux_ratio: bias_ratio });
    }
    let phi_r = constants.reduced_flux_quantum();
    let scale = 1.0 / (ind_per_len * josephson_energy);
    Ok(LengthLinearization {
        nominal: phi_r * phi_r * scale,
        slope: 0.5 * phi_r * scale * m::tan(PI * bias_ratio),
        bias_ratio,
    })
}

impl TunableResonator {
    /// Rejects half-integer flux at construction: every derived quantity
    /// diverges there.
    pub fn new(
        line: TransmissionLine,
        squid: Squid,
        flux_ratio: f64,
        constants: PhysicalConstants,
    ) -> Result<Self, Error> {
        if !flux_ratio.is_finite() {
            return Err(Error::NonFinite { what: "external flux" });
        }
        if flux_cos_abs(flux_ratio) < HALF_FLUX_COS_GUARD {
            return Err(Error::HalfQuantumFlux { flux_ratio });
        }
        Ok(TunableResonator {
            line,
            squid,
            flux_ratio,
            constants,
        })
    }

    pub fn line(&self) -> &TransmissionLine {
        &self.line
    }

    pub fn squid(&self) -> &Squid {
        &self.squid
    }

    pub fn flux_ratio(&self) -> f64 {
        self.flux_ratio
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    /// Flux-tuned SQUID inductance at the construction flux, H.
    pub fn squid_inductance(&self) -> f64 {
        // construction guarantees the flux is legal
        self.squid
            .effective_inductance(&self.constants, self.flux_ratio)
            .expect("flux validated at construction")
    }

    /// Virtual extra length Δd = L_J(Φ)/ℓ₀, m.
    pub fn effective_length(&self) -> f64 {
        self.squid_inductance() / self.line.ind_per_len()
    }

    /// SQUID plasma frequency at the construction flux, rad/s.
    pub fn plasma_freq(&self) -> f64 {
        1.0 / m::sqrt(self.squid.junction_cap() * self.squid_inductance())
    }

    /// Eigenvalue-equation residual tan(kd) + (kΔd)/(1 - η²).
    pub fn residual(&self, omega: f64) -> f64 {
        let v = self.line.wave_speed();
        let k = omega / v;
        let eta = omega / self.plasma_freq();
        m::tan(k * self.line.length()) + k * self.effective_length() / (1.0 - eta * eta)
    }

    /// First modes below the plasma frequency, ascending. May return fewer
    /// than `n_max` if the plasma frequency cuts the spectrum short.
    pub fn solve_modes(&self, n_max: usize) -> Result<Vec<SquidMode>, Error> {
        self.solve_modes_with_plasma_branch(n_max, false)
    }

    /// As [`TunableResonator::solve_modes`], optionally keeping roots above
    /// the plasma frequency (η > 1), where the lumped-inductor model of the
    /// SQUID is formally outside its regime.
    pub fn solve_modes_with_plasma_branch(
        &self,
        n_max: usize,
        include_plasma: bool,
    ) -> Result<Vec<SquidMode>, Error> {
        if n_max == 0 {
            return Ok(Vec::new());
        }
        let v = self.line.wave_speed();
        let d = self.line.length();
        let w_j = self.plasma_freq();
        let ceiling = (n_max as f64 + 1.5) * PI * v / d * if include_plasma { 2.0 } else { 1.0 };
        let hi = if include_plasma { ceiling } else { ceiling.min(w_j) };

        // partition at the tangent poles and the plasma pole: the residual
        // is strictly increasing on every cell, so each cell holds at most
        // one root
        let mut nodes: Vec<f64> = Vec::new();
        nodes.push(0.0);
        let spacing = PI * v / d;
        let mut p = 0.5 * spacing;
        while p < hi {
            nodes.push(p);
            p += spacing;
        }
        if w_j < hi {
            nodes.push(w_j);
        }
        nodes.push(hi);
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * *a);

        let mut roots: Vec<f64> = Vec::new();
        for cell in nodes.windows(2) {
            let (lo_edge, hi_edge) = (cell[0], cell[1]);
            let width = hi_edge - lo_edge;
            if width <= 0.0 {
                continue;
            }
            let inset = 1e-11 * width;
            let (a, b) = (lo_edge + inset, hi_edge - inset);
            if !(b > a) {
                continue;
            }
            let f = |w: f64| self.residual(w);
            let (fa, fb) = (f(a), f(b));
            if fa < 0.0 && fb > 0.0 {
                if let Ok(r) = numerics::brent(f, a, b, numerics::ROOT_REL_TOL, 300) {
                    roots.push(r);
                }
            } else if fa > 0.0 && fb > 0.0 && lo_edge > 0.0 {
                // root crowded against the lower pole beyond bracketing
                // resolution
                roots.push(a);
            }
        }
        roots.retain(|&w| include_plasma || w < w_j);
        roots.truncate(n_max);

        Ok(roots
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let eta = w / w_j;
                SquidMode {
                    index: i + 1,
                    omega: w,
                    wavenumber: w / v,
                    normalization: self.normalization_at(w),
                    eta,
                    residual: m::fabs(self.residual(w)),
                    effective_length_unreliable: eta > ETA_RELIABLE_MAX,
                }
            })
            .collect())
    }

    /// Effective-length estimate k_n = nπ/(d + Δd) for n = 1..n_max.
    pub fn approx_modes(&self, n_max: usize) -> Vec<(usize, f64)> {
        let stretched = self.line.length() + self.effective_length();
        (1..=n_max).map(|n| (n, n as f64 * PI / stretched)).collect()
    }

    /// Linear flux model of the virtual length anchored at this bias.
    pub fn linearize_length(&self) -> LengthLinearization {
        linearize_length(
            self.line.ind_per_len(),
            self.squid.josephson_energy(),
            self.flux_ratio,
            &self.constants,
        )
        .expect("flux validated at construction")
    }

    fn normalization_at(&self, omega: f64) -> f64 {
        self.branch_amplitude(omega) * m::cos(omega / self.line.wave_speed() * self.line.length())
    }

    /// Amplitude a with u(x) = a·sin(k(x-d)), in the pole-safe
    /// rearrangement of the closed-form normalization.
    fn branch_amplitude(&self, omega: f64) -> f64 {
        let v = self.line.wave_speed();
        let d = self.line.length();
        let kd = omega / v * d;
        let eta = omega / self.plasma_freq();
        let eta_term = (self.squid_inductance() / (self.line.ind_per_len() * d))
            * (1.0 + eta * eta)
            / ((1.0 - eta * eta) * (1.0 - eta * eta));
        let front = 2.0 * (1.0 + self.squid.junction_cap() / self.line.total_cap());
        let c = m::cos(kd);
        m::sqrt(front / (1.0 + c * c * eta_term))
    }

    /// Normalized mode function u(x) on 0 ≤ x ≤ d; u(d) = 0 at the grounded
    /// end, u(0) ≠ 0 at the SQUID.
    pub fn mode_function(&self, mode: &SquidMode, x: f64) -> Result<f64, Error> {
        let d = self.line.length();
        if !(0.0..=d).contains(&x) {
            return Err(Error::OutOfDomain { value: x, lo: 0.0, hi: d });
        }
        Ok(self.branch_amplitude(mode.omega) * m::sin(mode.wavenumber * (x - d)))
    }

    /// Spatial derivative u'(x) of the normalized mode function.
    pub fn mode_slope(&self, mode: &SquidMode, x: f64) -> Result<f64, Error> {
        let d = self.line.length();
        if !(0.0..=d).contains(&x) {
            return Err(Error::OutOfDomain { value: x, lo: 0.0, hi: d });
        }
        Ok(self.branch_amplitude(mode.omega)
            * mode.wavenumber
            * m::cos(mode.wavenumber * (x - d)))
    }

    /// The mode-function expression evaluated without the domain check,
    /// for continuing u(x) past the SQUID end to x < 0.
    pub fn mode_function_continued(&self, mode: &SquidMode, x: f64) -> f64 {
        self.branch_amplitude(mode.omega) * m::sin(mode.wavenumber * (x - self.line.length()))
    }

    /// Virtual end of the resonator: the x-intercept nearest the SQUID of
    /// the mode function continued to x < 0. Returns a negative coordinate;
    /// its magnitude reproduces the effective length.
    pub fn virtual_end(&self, mode: &SquidMode) -> f64 {
        let d = self.line.length();
        let k = mode.wavenumber;
        let crossings = libm::ceil(k * d / PI);
        d - crossings * PI / k
    }
}
