//! Field-strength criteria that keep the drive inside the quadratic-coupling
//! regime.
//!
//! The quadratic flux response of resonator A only holds while the effective
//! displacement ξ = Δd⁽¹⁾·δΦ stays inside the validity extent ξ_n* of the
//! displacement expansion. Translating to the drive quadrature
//! X̂_m = b† + b = δΦ̂/G_m gives a maximal amplitude
//!
//! ```text
//! X_nm* = ξ_n* / |Δd⁽¹⁾ G_m|,
//! ```
//!
//! and the state criterion |⟨X̂⟩| + Δ(X̂) ≤ X_nm*, evaluated here for
//! vacuum, thermal, and coherent states along with the resulting
//! photon-number ceilings.

use crate::analog::{AnalogSystem, CouplingFormula};
use crate::error::Error;
use crate::math as m;
use crate::numerics;
use crate::params::PhysicalConstants;

use num_complex::Complex64;

/// Quantum state of one drive mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateKind {
    Vacuum,
    /// Thermal state at temperature T (K).
    Thermal { temperature: f64 },
    /// Coherent state |β⟩; the quadrature mean oscillates as 2|β|cos(Ωt-φ).
    Coherent { amplitude: Complex64 },
}

/// Mean, fluctuation, and cycle maximum of the position quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureStats {
    /// Instantaneous ⟨X̂⟩ at t = 0.
    pub mean: f64,
    /// Δ(X̂); never below the vacuum value 1.
    pub fluctuation: f64,
    /// max over the oscillation cycle of |⟨X̂(t)⟩|.
    pub max_mean_abs: f64,
}

/// Largest admissible quadrature amplitude for one (n, m) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaximalAmplitude {
    Bounded(f64),
    /// The bias sits at integer flux: no flux sensitivity, no coupling, and
    /// no amplitude restriction either.
    Unconstrained,
}

impl MaximalAmplitude {
    pub fn value(&self) -> Option<f64> {
        match self {
            MaximalAmplitude::Bounded(x) => Some(*x),
            MaximalAmplitude::Unconstrained => None,
        }
    }
}

/// Outcome of the amplitude criterion for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateCheck {
    pub pass: bool,
    /// X* − (max|⟨X̂⟩| + ΔX̂); +∞ when unconstrained.
    pub margin: f64,
}

/// Photon-number ceiling for a state family at a given amplitude bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonBound {
    /// Largest admissible mean photon number.
    pub max_mean_photons: f64,
    /// For thermal states, the temperature realizing the ceiling.
    pub max_temperature: Option<f64>,
}

/// Maximal quadrature amplitude X_nm* = ξ_n*/|Δd⁽¹⁾·G_m| of the (n, m)
/// pair, with the simplified drive coefficient.
pub fn maximal_amplitude(
    system: &AnalogSystem,
    n: usize,
    m_idx: usize,
) -> Result<MaximalAmplitude, Error> {
    let slope = system.length_linearization().slope;
    if slope == 0.0 {
        return Ok(MaximalAmplitude::Unconstrained);
    }
    let drive_flux = system.inductive_coupling(m_idx, CouplingFormula::Simplified)?;
    let extent = system.centered_pair().expand_mode(n)?.validity_extent;
    Ok(MaximalAmplitude::Bounded(
        extent / m::fabs(slope * drive_flux),
    ))
}

/// Quadrature statistics of a drive-mode state.
pub fn quadrature_stats(
    kind: &StateKind,
    mode_omega: f64,
    constants: &PhysicalConstants,
) -> Result<QuadratureStats, Error> {
    match kind {
        StateKind::Vacuum => Ok(QuadratureStats {
            mean: 0.0,
            fluctuation: 1.0,
            max_mean_abs: 0.0,
        }),
        StateKind::Thermal { temperature } => {
            if !(*temperature > 0.0) {
                return Err(Error::NonPositiveTemperature {
                    temperature: *temperature,
                });
            }
            let arg = constants.hbar * mode_omega / (2.0 * constants.boltzmann * temperature);
            Ok(QuadratureStats {
                mean: 0.0,
                fluctuation: m::sqrt(1.0 / m::tanh(arg)),
                max_mean_abs: 0.0,
            })
        }
        StateKind::Coherent { amplitude } => {
            let magnitude = amplitude.norm();
            Ok(QuadratureStats {
                mean: 2.0 * amplitude.re,
                fluctuation: 1.0,
                max_mean_abs: 2.0 * magnitude,
            })
        }
    }
}

/// The amplitude criterion max|⟨X̂⟩| + ΔX̂ ≤ X*; equality passes.
pub fn check_state(stats: &QuadratureStats, bound: &MaximalAmplitude) -> StateCheck {
    match bound {
        MaximalAmplitude::Unconstrained => StateCheck {
            pass: true,
            margin: f64::INFINITY,
        },
        MaximalAmplitude::Bounded(x_star) => {
            let margin = x_star - (stats.max_mean_abs + stats.fluctuation);
            StateCheck {
                pass: margin >= 0.0,
                margin,
            }
        }
    }
}

/// Largest mean photon number of a thermal state compatible with the
/// amplitude bound, and the temperature that saturates it.
pub fn max_thermal_photons(
    x_star: f64,
    mode_omega: f64,
    constants: &PhysicalConstants,
) -> Result<PhotonBound, Error> {
    if !(x_star > 1.0) {
        return Err(Error::SubVacuumBound { x_star });
    }
    let ceiling = (x_star * x_star - 1.0) / 2.0;
    // invert coth(ħΩ/2k_B T) = X*² by bisection on the monotone response
    let scale = constants.hbar * mode_omega / (2.0 * constants.boltzmann);
    let target = x_star * x_star;
    let coth_gap = |temperature: f64| 1.0 / m::tanh(scale / temperature) - target;
    let t_lo = scale / 50.0;
    let t_hi = scale / (0.1 / target); // coth ≈ 1/y ≈ 10·X*² at the top
    let max_temperature = numerics::bisect_monotone(coth_gap, t_lo, t_hi, 1e-12)?;
    Ok(PhotonBound {
        max_mean_photons: ceiling,
        max_temperature: Some(max_temperature),
    })
}

/// Largest mean photon number |β|² of a coherent state compatible with the
/// amplitude bound.
pub fn max_coherent_photons(x_star: f64) -> Result<PhotonBound, Error> {
    if !(x_star > 1.0) {
        return Err(Error::SubVacuumBound { x_star });
    }
    Ok(PhotonBound {
        max_mean_photons: (x_star - 1.0) * (x_star - 1.0) / 4.0,
        max_temperature: None,
    })
}

/// Mean photon number of a thermal state at temperature T.
pub fn thermal_occupation(temperature: f64, mode_omega: f64, constants: &PhysicalConstants) -> f64 {
    1.0 / m::expm1(constants.hbar * mode_omega / (constants.boltzmann * temperature))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analog::tests::reference_system;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn vacuum_stats_and_check() {
        let c = PhysicalConstants::si();
        let stats = quadrature_stats(&StateKind::Vacuum, 1e9, &c).unwrap();
        assert_eq!(stats.mean, 0.0);
        assert_eq!(stats.fluctuation, 1.0);
        assert_eq!(stats.max_mean_abs, 0.0);

        let check = check_state(&stats, &MaximalAmplitude::Bounded(33.8));
        assert!(check.pass);
        assert!(rel(check.margin, 32.8) < 1e-12);

        let check = check_state(&stats, &MaximalAmplitude::Bounded(0.5));
        assert!(!check.pass);

        // vacuum passes exactly down to X* = 1
        assert!(check_state(&stats, &MaximalAmplitude::Bounded(1.0)).pass);
        assert!(!check_state(&stats, &MaximalAmplitude::Bounded(1.0 - 1e-12)).pass);
    }

    #[test]
    fn thermal_stats_limits() {
        let c = PhysicalConstants::si();
        let omega = 1.923e9;
        // T → 0 recovers the vacuum fluctuation
        let cold = quadrature_stats(
            &StateKind::Thermal { temperature: 1e-6 },
            omega,
            &c,
        )
        .unwrap();
        assert!((cold.fluctuation - 1.0).abs() < 1e-9);
        // fluctuation grows with temperature
        let warm = quadrature_stats(&StateKind::Thermal { temperature: 0.1 }, omega, &c).unwrap();
        let hot = quadrature_stats(&StateKind::Thermal { temperature: 1.0 }, omega, &c).unwrap();
        assert!(hot.fluctuation > warm.fluctuation && warm.fluctuation > 1.0);
        assert!(matches!(
            quadrature_stats(&StateKind::Thermal { temperature: 0.0 }, omega, &c),
            Err(Error::NonPositiveTemperature { .. })
        ));
    }

    #[test]
    fn coherent_stats_and_boundary() {
        let c = PhysicalConstants::si();
        let beta = Complex64::new(2.0, 0.0);
        let stats = quadrature_stats(&StateKind::Coherent { amplitude: beta }, 1e9, &c).unwrap();
        assert_eq!(stats.max_mean_abs, 4.0);
        assert_eq!(stats.fluctuation, 1.0);
        // boundary case 2|β| + 1 = X* passes with zero margin
        let check = check_state(&stats, &MaximalAmplitude::Bounded(5.0));
        assert!(check.pass && check.margin.abs() < 1e-12);
        // phase only affects the instantaneous mean
        let rotated = quadrature_stats(
            &StateKind::Coherent { amplitude: Complex64::new(0.0, 2.0) },
            1e9,
            &c,
        )
        .unwrap();
        assert!(rotated.mean.abs() < 1e-12);
        assert_eq!(rotated.max_mean_abs, 4.0);
    }

    #[test]
    fn photon_bounds_at_reference_amplitude() {
        let c = PhysicalConstants::si();
        let omega = 1.923e9;
        let thermal = max_thermal_photons(33.8, omega, &c).unwrap();
        assert!(rel(thermal.max_mean_photons, 570.72) < 1e-3);
        let coherent = max_coherent_photons(33.8).unwrap();
        assert!(rel(coherent.max_mean_photons, 268.96) < 1e-3);

        // coth identity: the occupation at T_max equals the ceiling
        let t_max = thermal.max_temperature.unwrap();
        let occupation = thermal_occupation(t_max, omega, &c);
        assert!(rel(occupation, thermal.max_mean_photons) < 1e-9);
    }

    #[test]
    fn photon_bound_edge_cases() {
        let c = PhysicalConstants::si();
        assert!(matches!(
            max_thermal_photons(1.0, 1e9, &c),
            Err(Error::SubVacuumBound { .. })
        ));
        assert!(matches!(
            max_coherent_photons(0.9),
            Err(Error::SubVacuumBound { .. })
        ));
        // just above the vacuum bound the thermal ceiling vanishes
        let tiny = max_thermal_photons(1.0 + 1e-9, 1e9, &c).unwrap();
        assert!(tiny.max_mean_photons < 2e-9);
    }

    #[test]
    fn coherent_ceiling_below_thermal_for_large_bounds() {
        let c = PhysicalConstants::si();
        for x_star in [3.5, 10.0, 33.8, 100.0] {
            let thermal = max_thermal_photons(x_star, 1e9, &c).unwrap();
            let coherent = max_coherent_photons(x_star).unwrap();
            assert!(coherent.max_mean_photons < thermal.max_mean_photons, "X* = {x_star}");
        }
    }

    #[test]
    fn maximal_amplitude_reference_value() {
        let sys = reference_system(0.4);
        let bound = maximal_amplitude(&sys, 9, 2).unwrap();
        let x = bound.value().unwrap();
        assert!(rel(x, 33.8) < 5e-2, "X*_92 = {x}");
    }

    #[test]
    fn maximal_amplitude_decreases_with_mode_number() {
        let sys = reference_system(0.4);
        let mut last = f64::INFINITY;
        for n in 0..10usize {
            let x = maximal_amplitude(&sys, n, 2).unwrap().value().unwrap();
            assert!(x < last, "n={n}: {x} !< {last}");
            last = x;
        }
    }

    #[test]
    fn zero_bias_is_unconstrained() {
        let sys = reference_system(0.0);
        assert_eq!(
            maximal_amplitude(&sys, 1, 2).unwrap(),
            MaximalAmplitude::Unconstrained
        );
        let stats = quadrature_stats(&StateKind::Vacuum, 1e9, &PhysicalConstants::si()).unwrap();
        let check = check_state(&stats, &MaximalAmplitude::Unconstrained);
        assert!(check.pass && check.margin.is_infinite());
    }

    #[test]
    fn amplitude_bound_halves_when_drive_flux_doubles() {
        use crate::params::LoopGeometry;
        let sys = reference_system(0.4);
        let x1 = maximal_amplitude(&sys, 1, 2).unwrap().value().unwrap();
        // doubling the loop width doubles G_m
        let geom = LoopGeometry::new(
            sys.geometry().squid_position(),
            sys.geometry().near_edge(),
            sys.geometry().far_edge(),
            2.0 * sys.geometry().width(),
        )
        .unwrap();
        let doubled = AnalogSystem::new(
            *sys.resonator_a(),
            *sys.resonator_b(),
            geom,
            *sys.constants(),
        )
        .unwrap();
        let x2 = maximal_amplitude(&doubled, 1, 2).unwrap().value().unwrap();
        assert!(rel(x2, x1 / 2.0) < 1e-12);
    }
}
