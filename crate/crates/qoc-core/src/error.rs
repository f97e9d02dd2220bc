//! Error type shared by the solver modules.

use core::fmt;

/// Everything that can go wrong while constructing a spec or running one of
/// the solvers. Messages name the violated invariant so a CLI can surface
/// them directly.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A physical parameter that must be strictly positive was not.
    NonPositive { what: &'static str, value: f64 },
    /// A parameter was NaN or infinite.
    NonFinite { what: &'static str },
    /// The external flux sits at a half-integer number of flux quanta, where
    /// the SQUID inductance diverges.
    HalfQuantumFlux { flux_ratio: f64 },
    /// Scattering amplitudes are only defined for positive frequency.
    NonPositiveFrequency { omega: f64 },
    /// The bracket scan could not isolate the requested root.
    RootNotBracketed { lo: f64, hi: f64 },
    /// The spec collapses the eigenvalue problem (e.g. a non-finite
    /// characteristic frequency).
    DegenerateSpec { what: &'static str },
    /// The self-consistency iteration for the zeroth-order mode frequency
    /// did not reach the requested tolerance.
    FixedPointNotConverged { last: f64, delta: f64 },
    /// A coordinate fell outside the resonator.
    OutOfDomain { value: f64, lo: f64, hi: f64 },
    /// The loop sits too far from the drive line for the thin-wire coupling
    /// formulas (far edge must stay below 5% of the drive-line length).
    GeometryOutOfRegime { far_edge: f64, limit: f64 },
    /// Adaptive quadrature exhausted its subdivision budget.
    QuadratureFailure,
    /// Drive-mode parity or placement makes the antisymmetric flux drive
    /// vanish.
    ParityRejected(GateRejection),
    /// The amplitude bound is below the vacuum fluctuation level, so no
    /// quantum state satisfies the criterion.
    SubVacuumBound { x_star: f64 },
    /// Thermal states need a strictly positive temperature.
    NonPositiveTemperature { temperature: f64 },
    /// The requested mode index was not produced by the solver.
    ModeUnavailable { index: usize, available: usize },
}

/// Why a resonator-B mode cannot drive the SQUID loops antisymmetrically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateRejection {
    /// Odd-parity mode: the currents at the two loop positions have equal
    /// sign, so the flux variations do not oppose each other.
    OddParity,
    /// The loops sit at a current node of the mode, so the flux variation is
    /// zero.
    CurrentNode,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPositive { what, value } => {
                write!(f, "{what} must be strictly positive (got {value:e})")
            }
            Error::NonFinite { what } => write!(f, "{what} must be finite"),
            Error::HalfQuantumFlux { flux_ratio } => write!(
                f,
                "external flux {flux_ratio} is at a half-integer flux quantum; \
                 the SQUID inductance diverges there"
            ),
            Error::NonPositiveFrequency { omega } => {
                write!(f, "frequency must be positive (got {omega:e} rad/s)")
            }
            Error::RootNotBracketed { lo, hi } => {
                write!(f, "no sign change found while scanning [{lo:e}, {hi:e}] rad/s")
            }
            Error::DegenerateSpec { what } => write!(f, "degenerate spec: {what}"),
            Error::FixedPointNotConverged { last, delta } => write!(
                f,
                "mode-frequency self-consistency stalled at {last:e} rad/s (step {delta:e})"
            ),
            Error::OutOfDomain { value, lo, hi } => {
                write!(f, "coordinate {value:e} outside the resonator [{lo:e}, {hi:e}]")
            }
            Error::GeometryOutOfRegime { far_edge, limit } => write!(
                f,
                "loop far edge {far_edge:e} m exceeds the thin-wire limit {limit:e} m"
            ),
            Error::QuadratureFailure => write!(f, "adaptive quadrature failed to converge"),
            Error::ParityRejected(reason) => match reason {
                GateRejection::OddParity => write!(
                    f,
                    "drive mode rejected: odd parity gives equal-sign loop currents"
                ),
                GateRejection::CurrentNode => write!(
                    f,
                    "drive mode rejected: the loops sit at a current node"
                ),
            },
            Error::SubVacuumBound { x_star } => write!(
                f,
                "amplitude bound {x_star} is below the vacuum fluctuation level 1"
            ),
            Error::NonPositiveTemperature { temperature } => {
                write!(f, "thermal state needs T > 0 (got {temperature} K)")
            }
            Error::ModeUnavailable { index, available } => {
                write!(f, "mode {index} not available (solver returned {available})")
            }
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}
